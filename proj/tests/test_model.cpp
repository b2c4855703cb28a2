#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "softfoot/model.hpp"

using namespace softfoot;

namespace {

BandSpec reference_band() {
  BandSpec band;
  band.shore_a = 40.0;
  band.cross_section = 4e-6;
  band.rest_length = 0.020;
  band.moment_arm = 0.008;
  band.count = 2;
  return band;
}

}  // namespace

TEST_CASE("gent modulus matches the frozen oracle values") {
  CHECK(gent_modulus(40.0) == doctest::Approx(1.6896386129981815e6).epsilon(1e-14));
  CHECK(gent_modulus(20.0) == doctest::Approx(0.7319215707832529e6).epsilon(1e-14));
}

TEST_CASE("gent modulus rejects out-of-range hardness") {
  CHECK_THROWS_AS(gent_modulus(96.0), std::domain_error);
  CHECK_THROWS_AS(gent_modulus(0.0), std::domain_error);
  CHECK_THROWS_AS(gent_modulus(-5.0), std::domain_error);
  CHECK_NOTHROW(gent_modulus(95.0));
  CHECK_NOTHROW(gent_modulus(1e-6));
}

TEST_CASE("gent modulus is strictly increasing on (0, 95]") {
  double previous = gent_modulus(0.5);
  for (double s = 1.0; s <= 95.0; s += 0.5) {
    const double value = gent_modulus(s);
    CHECK(value > previous);
    previous = value;
  }
}

TEST_CASE("band linear stiffness is E*A/L0") {
  const BandSpec band = reference_band();
  CHECK(band_linear_stiffness(band) ==
        doctest::Approx(337.9277225996363).epsilon(1e-14));
  CHECK(band_linear_stiffness(band) ==
        doctest::Approx(gent_modulus(band.shore_a) * band.cross_section /
                        band.rest_length));

  BandSpec doubled = band;
  doubled.cross_section *= 2.0;
  CHECK(band_linear_stiffness(doubled) ==
        doctest::Approx(2.0 * band_linear_stiffness(band)).epsilon(1e-14));
  doubled = band;
  doubled.rest_length *= 2.0;
  CHECK(band_linear_stiffness(doubled) ==
        doctest::Approx(0.5 * band_linear_stiffness(band)).epsilon(1e-14));
}

TEST_CASE("joint stiffness transposition composes the oracles") {
  const BandSpec band = reference_band();
  CHECK(band_to_joint_stiffness(band) ==
        doctest::Approx(0.043254748492753445).epsilon(1e-14));
}

TEST_CASE("joint stiffness is linear in count and quadratic in moment arm") {
  const BandSpec band = reference_band();
  const double base = band_to_joint_stiffness(band);

  BandSpec two_counts = band;
  two_counts.count = 2 * band.count;
  CHECK(band_to_joint_stiffness(two_counts) == 2.0 * base);

  BandSpec two_arms = band;
  two_arms.moment_arm = 2.0 * band.moment_arm;
  CHECK(band_to_joint_stiffness(two_arms) == 4.0 * base);
}

TEST_CASE("default model carries the published structure") {
  const FootModel model = build_default_softfoot();
  CHECK(model.fascia.size() == 6);
  CHECK(model.couplings.size() == 8);
  CHECK(model.bands.size() == 8);
  CHECK(model.total_length == 0.27);
  CHECK(model.arch_span == 0.16);
  CHECK(model.total_mass() == doctest::Approx(0.5).epsilon(1e-12));

  double pitch_sum = 0.0;
  for (const ModuleSpec* m : model.sole_bodies()) pitch_sum += m->pitch;
  CHECK(std::abs(pitch_sum - model.total_length) <= 0.02 * model.total_length);

  for (const CouplingSpec& c : model.couplings) {
    CHECK(c.lower_limit == doctest::Approx(-20.0 * M_PI / 180.0).epsilon(1e-15));
    CHECK(c.upper_limit == doctest::Approx(90.0 * M_PI / 180.0).epsilon(1e-15));
    CHECK(c.joint_stiffness ==
          doctest::Approx(0.043254748492753445).epsilon(1e-14));
  }

  CHECK(model.tendon.rest_length ==
        doctest::Approx(0.18803340094861326).epsilon(1e-12));
  CHECK(model.tendon.max_length == model.tendon.rest_length * 1.005);
  CHECK(model.tendon.route.size() == 9);

  CHECK(validate_model(model).empty());
}

TEST_CASE("default model construction is deterministic") {
  const FootModel a = build_default_softfoot();
  const FootModel b = build_default_softfoot();
  CHECK(a.tendon.rest_length == b.tendon.rest_length);
  CHECK(a.anterior_arch.length == b.anterior_arch.length);
  const auto bodies_a = a.sole_bodies();
  const auto bodies_b = b.sole_bodies();
  REQUIRE(bodies_a.size() == bodies_b.size());
  for (std::size_t i = 0; i < bodies_a.size(); ++i) {
    CHECK(bodies_a[i]->id == bodies_b[i]->id);
    CHECK(bodies_a[i]->pitch == bodies_b[i]->pitch);
    CHECK(bodies_a[i]->mass == bodies_b[i]->mass);
    CHECK((bodies_a[i]->pulley_offset - bodies_b[i]->pulley_offset).norm() == 0.0);
  }
}

TEST_CASE("validation flags inverted coupling limits by name") {
  FootModel model = build_default_softfoot();
  model.couplings[2].lower_limit = 2.0;  // above the 90 deg upper limit
  const auto issues = validate_model(model);
  REQUIRE(!issues.empty());
  bool named = false;
  for (const ValidationIssue& issue : issues)
    if (issue.field.find("couplings[2]") != std::string::npos) named = true;
  CHECK(named);
}

TEST_CASE("validation flags a route that skips a module") {
  FootModel model = build_default_softfoot();
  model.tendon.route = {{"heel", "anchor"}, {"m1", "under"}, {"m4", "over"},
                        {"m5", "under"},    {"toe", "anchor"}};
  const auto issues = validate_model(model);
  bool continuity = false;
  for (const ValidationIssue& issue : issues)
    if (issue.message.find("skips") != std::string::npos) continuity = true;
  CHECK(continuity);
}

TEST_CASE("validation rejects degenerate band geometry") {
  FootModel model = build_default_softfoot();
  model.bands[0].cross_section = 0.0;
  model.bands[1].moment_arm = 0.0;
  const auto issues = validate_model(model);
  bool cross_section = false, moment_arm = false;
  for (const ValidationIssue& issue : issues) {
    if (issue.field == "bands[0].cross_section") cross_section = true;
    if (issue.field == "bands[1].moment_arm") moment_arm = true;
  }
  CHECK(cross_section);
  CHECK(moment_arm);
}

TEST_CASE("validation accepts only matched coupling and band counts") {
  FootModel model = build_default_softfoot();
  model.bands.pop_back();
  const auto issues = validate_model(model);
  bool flagged = false;
  for (const ValidationIssue& issue : issues)
    if (issue.field == "bands") flagged = true;
  CHECK(flagged);
}
