#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "softfoot/contact.hpp"

using namespace softfoot;
using doctest::Approx;

TEST_CASE("surface roles have stable names") {
  CHECK(surface_role_name(SurfaceRole::Heel) == "heel");
  CHECK(surface_role_name(SurfaceRole::Moving) == "moving");
  CHECK(surface_role_name(SurfaceRole::Metatarsus) == "metatarsus");
  CHECK(surface_role_name(SurfaceRole::Ground) == "ground");
}

TEST_CASE("a box dipping half a millimetre into a 19 mm step is reported") {
  OrientedBox box;
  box.center = Vec2(0.0, 0.0235);  // flat bottom face at 0.0185
  box.half_extents = Vec2(0.005, 0.005);
  ObstacleSpec obstacle;
  obstacle.role = SurfaceRole::Moving;
  obstacle.center_x = 0.0;
  obstacle.width = 0.02;
  obstacle.height = 0.019;

  const auto records = detect_contacts({box}, {"m1"}, {obstacle}, false);
  REQUIRE(records.size() == 1);
  CHECK(records[0].body == "m1");
  CHECK(records[0].body_index == 0);
  CHECK(records[0].surface == SurfaceRole::Moving);
  CHECK(records[0].obstacle_index == 0);
  CHECK(records[0].penetration == Approx(5e-4).epsilon(1e-12));
  CHECK(records[0].point.y() == Approx(0.0185).epsilon(1e-12));
  CHECK(records[0].normal_force == 0.0);  // detection leaves forces to the solver
}

TEST_CASE("bodies above every surface produce no contacts") {
  OrientedBox box;
  box.center = Vec2(0.0, 0.0245);  // bottom at 0.0195, above the 19 mm top
  box.half_extents = Vec2(0.005, 0.005);
  ObstacleSpec obstacle;
  obstacle.role = SurfaceRole::Heel;
  obstacle.center_x = 0.0;
  obstacle.width = 0.02;
  obstacle.height = 0.019;
  CHECK(detect_contacts({box}, {"m1"}, {obstacle}, true).empty());
}

TEST_CASE("the ground plane reports bodies dipping below z = 0") {
  OrientedBox box;
  box.center = Vec2(0.05, 0.004);  // bottom at -0.001
  box.half_extents = Vec2(0.01, 0.005);
  const auto records = detect_contacts({box}, {"heel"}, {}, true);
  REQUIRE(records.size() == 1);
  CHECK(records[0].surface == SurfaceRole::Ground);
  CHECK(records[0].obstacle_index == -1);
  CHECK(records[0].penetration == Approx(1e-3).epsilon(1e-12));
}

TEST_CASE("overlapping sole boxes without surfaces yield nothing") {
  std::vector<OrientedBox> boxes(2);
  boxes[0].center = Vec2(0.0, 0.05);
  boxes[0].half_extents = Vec2(0.01, 0.005);
  boxes[1].center = Vec2(0.005, 0.05);  // interpenetrates the first
  boxes[1].half_extents = Vec2(0.01, 0.005);
  CHECK(detect_contacts(boxes, {"a", "b"}, {}, false).empty());
}

TEST_CASE("penalty force follows stiffness times depth and never pulls") {
  ContactRecord record;
  record.penetration = 0.001;
  CHECK(contact_force(record, 1e5, 0.0, 0.0) == Approx(100.0).epsilon(1e-12));
  CHECK(contact_force(record, 1e5, 1e3, 0.05) == Approx(150.0).epsilon(1e-12));
  CHECK(contact_force(record, 1e5, 1e3, -0.2) == 0.0);  // separating fast

  record.penetration = 0.0;
  CHECK(contact_force(record, 1e5, 1e3, 0.0) == 0.0);

  double previous = 0.0;
  for (double depth = 0.0; depth < 0.003; depth += 1e-4) {
    record.penetration = depth;
    const double f = contact_force(record, 1e5, 0.0, 0.0);
    CHECK(f >= previous);
    previous = f;
  }
}

TEST_CASE("detection is mirror symmetric in x") {
  std::vector<OrientedBox> boxes(2);
  boxes[0].center = Vec2(0.03, 0.0187);
  boxes[0].half_extents = Vec2(0.009, 0.005);
  boxes[0].rotation = 0.05;
  boxes[1].center = Vec2(0.052, 0.0183);
  boxes[1].half_extents = Vec2(0.009, 0.005);
  boxes[1].rotation = -0.1;
  ObstacleSpec obstacle;
  obstacle.role = SurfaceRole::Metatarsus;
  obstacle.center_x = 0.04;
  obstacle.width = 0.06;
  obstacle.height = 0.019;

  auto mirrored_boxes = boxes;
  for (auto& box : mirrored_boxes) {
    box.center.x() = -box.center.x();
    box.rotation = -box.rotation;
  }
  ObstacleSpec mirrored_obstacle = obstacle;
  mirrored_obstacle.center_x = -obstacle.center_x;

  const auto lhs = detect_contacts(boxes, {"a", "b"}, {obstacle}, false);
  const auto rhs =
      detect_contacts(mirrored_boxes, {"a", "b"}, {mirrored_obstacle}, false);
  REQUIRE(lhs.size() == 2);
  REQUIRE(rhs.size() == lhs.size());
  for (const auto& record : lhs) {
    bool found = false;
    for (const auto& twin : rhs) {
      if (twin.body != record.body || twin.obstacle_index != record.obstacle_index)
        continue;
      found = true;
      CHECK(twin.surface == record.surface);
      CHECK(twin.penetration == Approx(record.penetration).epsilon(1e-12));
      CHECK(twin.point.x() == Approx(-record.point.x()).epsilon(1e-12));
      CHECK(twin.point.y() == Approx(record.point.y()).epsilon(1e-12));
    }
    CHECK(found);
  }
}
