#pragma once

#include <string>

#include "softfoot/model.hpp"

namespace softfoot {

// JSON model files mirror FootModel field for field, SI units and radians.
// Unknown keys are rejected (ParseError), as are missing or mistyped fields.
FootModel model_from_json(const std::string& text);
FootModel load_model(const std::string& path);
std::string model_to_json(const FootModel& model);
void save_model(const FootModel& model, const std::string& path);

}  // namespace softfoot
