#include "ahm/maps.hpp"

#include <algorithm>
#include <cmath>

#include "ahm/errors.hpp"

namespace ahm {
namespace {

void require_space(const SpacePtr& space, const char* who) {
  if (!space) throw StructuralError(std::string(who) + ": null space");
}

std::uint32_t require_vector_space(const SpacePtr& space, const char* who) {
  require_space(space, who);
  const auto dim = space->vector_dim();
  if (!dim) throw StructuralError(std::string(who) + ": needs a coordinate-vector space");
  return *dim;
}

std::uint32_t require_euclidean(const SpacePtr& space, const char* who) {
  const auto dim = require_vector_space(space, who);
  if (!space->is_cat0())
    throw StructuralError(std::string(who) + ": needs the Euclidean metric, got " + space->name());
  return dim;
}

}  // namespace

Map make_identity(SpacePtr space) {
  require_space(space, "identity");
  Point fp = space->origin();
  return Map(space, [](const Point& x) { return x; }, fp, "identity");
}

Map make_constant(SpacePtr space, Point value) {
  require_space(space, "constant");
  space->validate(value);
  Point v = value;
  return Map(space, [v](const Point&) { return v; }, value,
             "constant(" + point_repr(value) + ")");
}

Map make_rotation2d(SpacePtr space, double angle_radians) {
  if (require_euclidean(space, "rotation2d") != 2)
    throw StructuralError("rotation2d: needs dimension 2");
  const double c = std::cos(angle_radians);
  const double s = std::sin(angle_radians);
  auto sp = space;
  auto eval = [sp, c, s](const Point& x) -> Point {
    sp->validate(x);
    const auto& v = std::get<std::vector<double>>(x);
    return std::vector<double>{c * v[0] - s * v[1], s * v[0] + c * v[1]};
  };
  return Map(space, std::move(eval), space->origin(),
             "rotation2d(" + std::to_string(angle_radians) + ")");
}

Map make_radial_scale(SpacePtr space, double lambda, Point center) {
  require_space(space, "radial_scale");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw DomainError("radial_scale: lambda must lie in [0, 1]");
  space->validate(center);
  auto sp = space;
  Point c = center;
  auto eval = [sp, lambda, c](const Point& x) -> Point { return sp->comb(c, x, lambda); };
  return Map(space, std::move(eval), center,
             "radial_scale(" + std::to_string(lambda) + ")");
}

Map make_ray_permutation(SpacePtr space, std::vector<std::uint32_t> perm) {
  require_space(space, "ray_permutation");
  const auto rays = space->ray_count();
  if (!rays) throw StructuralError("ray_permutation: needs a spider space");
  if (perm.size() != *rays)
    throw DomainError("ray_permutation: permutation length must equal the ray count");
  std::vector<bool> seen(perm.size(), false);
  for (auto v : perm) {
    if (v >= perm.size() || seen[v]) throw DomainError("ray_permutation: not a permutation");
    seen[v] = true;
  }
  auto sp = space;
  auto eval = [sp, perm](const Point& x) -> Point {
    sp->validate(x);
    auto c = std::get<SpiderCoord>(x);
    if (c.radius == 0.0) return SpiderCoord{0, 0.0};
    return SpiderCoord{perm[c.ray], c.radius};
  };
  return Map(space, std::move(eval), space->origin(), "ray_permutation");
}

Map make_projection_ball(SpacePtr space, Point center, double radius) {
  const auto dim = require_euclidean(space, "projection_ball");
  if (!(radius >= 0.0)) throw DomainError("projection_ball: radius must be nonnegative");
  space->validate(center);
  auto sp = space;
  const auto c = std::get<std::vector<double>>(center);
  auto eval = [sp, c, radius, dim](const Point& x) -> Point {
    sp->validate(x);
    const auto& v = std::get<std::vector<double>>(x);
    double norm2 = 0.0;
    for (std::uint32_t i = 0; i < dim; ++i) {
      const double d = v[i] - c[i];
      norm2 += d * d;
    }
    const double norm = std::sqrt(norm2);
    if (norm <= radius) return x;
    const double scale = radius / norm;
    std::vector<double> r(dim);
    for (std::uint32_t i = 0; i < dim; ++i) r[i] = c[i] + scale * (v[i] - c[i]);
    return r;
  };
  return Map(space, std::move(eval), center,
             "projection_ball(r=" + std::to_string(radius) + ")");
}

Map make_reflection(SpacePtr space, Point center) {
  const auto dim = require_vector_space(space, "reflection");
  space->validate(center);
  auto sp = space;
  const auto c = std::get<std::vector<double>>(center);
  auto eval = [sp, c, dim](const Point& x) -> Point {
    sp->validate(x);
    const auto& v = std::get<std::vector<double>>(x);
    std::vector<double> r(dim);
    for (std::uint32_t i = 0; i < dim; ++i) r[i] = 2.0 * c[i] - v[i];
    return r;
  };
  return Map(space, std::move(eval), center, "reflection(" + point_repr(center) + ")");
}

Map make_compose(Map f, Map g) {
  if (!f.valid() || !g.valid()) throw StructuralError("compose: missing component map");
  if (f.space().get() != g.space().get())
    throw StructuralError("compose: component maps live on different spaces");
  std::optional<Point> fp;
  if (f.fixed_point() && g.fixed_point() && same_point(*f.fixed_point(), *g.fixed_point()))
    fp = *f.fixed_point();
  const std::string label = "compose(" + f.label() + ", " + g.label() + ")";
  auto eval = [f, g](const Point& x) { return f(g(x)); };
  return Map(f.space(), std::move(eval), std::move(fp), label);
}

Map make_average(Map f, double lambda) {
  if (!f.valid()) throw StructuralError("average: missing inner map");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("average: lambda must lie in [0, 1]");
  auto sp = f.space();
  auto eval = [sp, f, lambda](const Point& x) { return sp->comb(x, f(x), lambda); };
  const std::string label = "average(" + f.label() + ", " + std::to_string(lambda) + ")";
  return Map(sp, std::move(eval), f.fixed_point(), label);
}

Map make_expansive_scale(SpacePtr space, double factor) {
  const auto dim = require_vector_space(space, "expansive_scale");
  if (!(factor > 1.0)) throw DomainError("expansive_scale: factor must exceed 1");
  auto sp = space;
  auto eval = [sp, factor, dim](const Point& x) -> Point {
    sp->validate(x);
    const auto& v = std::get<std::vector<double>>(x);
    std::vector<double> r(dim);
    for (std::uint32_t i = 0; i < dim; ++i) r[i] = factor * v[i];
    return r;
  };
  return Map(space, std::move(eval), space->origin(),
             "expansive_scale(" + std::to_string(factor) + ")");
}

AxiomReport check_nonexpansive(const Map& map, const AxiomCheckOptions& opts) {
  if (!map.valid()) throw StructuralError("check_nonexpansive: missing map");
  const Space& space = *map.space();
  Rng rng(opts.seed);
  AxiomReport report;
  report.seed = opts.seed;
  report.n_samples = opts.n_samples;
  report.tol = opts.tol;

  AxiomCheck nonexp{"nonexpansive", true, 0, std::nullopt};
  for (std::uint64_t i = 0; i < opts.n_samples; ++i) {
    const Point x = space.sample(rng);
    const Point y = space.sample(rng);
    const double lhs = space.dist(map(x), map(y));
    const double rhs = space.dist(x, y);
    nonexp.samples_run++;
    if (lhs > rhs + opts.tol && nonexp.passed) {
      nonexp.passed = false;
      nonexp.witness = Witness{map.label() + ": d(f(x), f(y)) > d(x, y) + tol", lhs, rhs, i};
    }
  }
  report.checks.push_back(std::move(nonexp));

  if (map.fixed_point()) {
    AxiomCheck fp{"declared-fixed-point", true, 1, std::nullopt};
    const double err = space.dist(map(*map.fixed_point()), *map.fixed_point());
    if (err > opts.tol) {
      fp.passed = false;
      fp.witness = Witness{map.label() + ": d(f(p), p) > tol", err, 0.0, 0};
    }
    report.checks.push_back(std::move(fp));
  }
  return report;
}

}  // namespace ahm
