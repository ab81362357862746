#include "doctest.h"
#include "ppife/experiment.hpp"

TEST_CASE("library links and a tiny mesh classifies") {
  const auto mesh = ppife::build_cartesian_mesh(
      ppife::Rect{ppife::Vec2{-1.0, -1.0}, ppife::Vec2{1.0, 1.0}}, 8);
  const auto geom = ppife::make_level_set("circle");
  const auto cls = ppife::classify_mesh(mesh, geom);
  CHECK(!cls.interface_elements.empty());
}
