#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ahm/report.hpp"
#include "ahm/rng.hpp"

namespace ahm {

// Point on a metric tree: which ray, and how far from the hub. The hub itself
// is canonicalized to {ray 0, radius 0} so operator== is meaningful.
struct SpiderCoord {
  std::uint32_t ray = 0;
  double radius = 0.0;
  friend bool operator==(const SpiderCoord& a, const SpiderCoord& b) {
    return a.ray == b.ray && a.radius == b.radius;
  }
};

using Point = std::variant<std::vector<double>, SpiderCoord>;

bool operator_eq(const Point& a, const Point& b);
inline bool same_point(const Point& a, const Point& b) { return operator_eq(a, b); }

std::string point_repr(const Point& p);

// How the convexity modulus of a space is shaped, for consumption by the rate
// calculators (which need exact arithmetic, not a double-valued callback).
enum class ModulusForm : std::uint8_t {
  None,      // no modulus declared
  Cat0,      // eta(r, eps) = eps^2 / 8
  Power,     // eta(r, eps) = eps^p / (p * 2^p)
  Custom,    // only the double callback is available
};

class Space {
 public:
  virtual ~Space() = default;

  virtual double dist(const Point& x, const Point& y) const = 0;

  // W(x, y, lambda): the point (1-lambda)x + lambda y on the geodesic.
  // lambda == 0, lambda == 1 and x == y short-circuit to the exact endpoint.
  Point comb(const Point& x, const Point& y, double lambda) const;

  virtual bool has_modulus() const = 0;
  virtual double modulus(double r, double eps) const;        // eta
  virtual double modulus_tilde(double r, double eps) const;  // eta = eps * eta~
  virtual bool is_cat0() const = 0;
  virtual ModulusForm modulus_form() const = 0;
  virtual double modulus_power() const;  // p for ModulusForm::Power

  virtual Point sample(Rng& rng) const = 0;
  virtual Point origin() const = 0;
  virtual void validate(const Point& p) const = 0;
  virtual std::string name() const = 0;

  // Shape introspection for map/space compatibility checks.
  virtual std::optional<std::uint32_t> vector_dim() const { return std::nullopt; }
  virtual std::optional<std::uint32_t> ray_count() const { return std::nullopt; }

 protected:
  virtual Point comb_impl(const Point& x, const Point& y, double lambda) const = 0;
};

using SpacePtr = std::shared_ptr<const Space>;

SpacePtr make_euclidean(std::uint32_t dim);
SpacePtr make_spider(std::uint32_t rays);
SpacePtr make_lp(std::uint32_t dim, double p);

// Deliberately defective spaces for exercising the checkers. The broken one
// returns x from every convex combination (kills W1); the fake-modulus one
// claims a constant eta that no metric space can satisfy.
SpacePtr make_broken_comb_space(std::uint32_t dim);
SpacePtr make_fake_modulus_space(std::uint32_t dim, double claimed_eta);

struct AxiomCheckOptions {
  std::uint64_t n_samples = 2000;
  std::uint64_t seed = 42;
  double tol = 1e-9;
};

AxiomReport check_w_axioms(const Space& space, const AxiomCheckOptions& opts = {});
AxiomReport check_ucw_inequality(const Space& space, const AxiomCheckOptions& opts = {});

}  // namespace ahm
