#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ahm/report.hpp"
#include "ahm/spaces.hpp"

namespace ahm {

// Self-map of a space, carried by value. A map may declare a fixed point; the
// nonexpansiveness checker verifies the declaration instead of trusting it.
class Map {
 public:
  using EvalFn = std::function<Point(const Point&)>;

  Map() = default;
  Map(SpacePtr space, EvalFn eval, std::optional<Point> fixed_point, std::string label)
      : space_(std::move(space)),
        eval_(std::move(eval)),
        fixed_point_(std::move(fixed_point)),
        label_(std::move(label)) {}

  Point operator()(const Point& x) const { return eval_(x); }
  const SpacePtr& space() const { return space_; }
  const std::optional<Point>& fixed_point() const { return fixed_point_; }
  const std::string& label() const { return label_; }
  bool valid() const { return static_cast<bool>(eval_); }

 private:
  SpacePtr space_;
  EvalFn eval_;
  std::optional<Point> fixed_point_;
  std::string label_;
};

Map make_identity(SpacePtr space);
Map make_constant(SpacePtr space, Point value);
Map make_rotation2d(SpacePtr space, double angle_radians);
// x -> (1-lambda) * center + lambda * x along geodesics; contraction for
// lambda < 1 with fixed point center.
Map make_radial_scale(SpacePtr space, double lambda, Point center);
Map make_ray_permutation(SpacePtr space, std::vector<std::uint32_t> perm);
// Metric projection onto the closed ball B(center, radius).
Map make_projection_ball(SpacePtr space, Point center, double radius);
// Point reflection through center: x -> 2c - x (vector spaces only).
Map make_reflection(SpacePtr space, Point center);
Map make_compose(Map f, Map g);  // x -> f(g(x))
// Krasnoselskii average: x -> (1-lambda) x + lambda f(x).
Map make_average(Map f, double lambda);

// Expansive negative control: x -> factor * x about the origin, factor > 1.
Map make_expansive_scale(SpacePtr space, double factor);

// Checks d(f(x), f(y)) <= d(x, y) + tol on sampled pairs, plus (when the map
// declares one) d(f(p), p) <= tol for the declared fixed point.
AxiomReport check_nonexpansive(const Map& map, const AxiomCheckOptions& opts = {});

}  // namespace ahm
