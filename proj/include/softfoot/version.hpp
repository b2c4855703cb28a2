#pragma once

namespace softfoot {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace softfoot
