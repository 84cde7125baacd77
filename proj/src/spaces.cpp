#include "ahm/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ahm/errors.hpp"

namespace ahm {
namespace {

const std::vector<double>& as_vec(const Point& p, std::uint32_t dim, const char* who) {
  const auto* v = std::get_if<std::vector<double>>(&p);
  if (!v) throw StructuralError(std::string(who) + ": expected a coordinate-vector point");
  if (v->size() != dim)
    throw StructuralError(std::string(who) + ": point has dimension " +
                          std::to_string(v->size()) + ", space has " + std::to_string(dim));
  return *v;
}

const SpiderCoord& as_spider(const Point& p, const char* who) {
  const auto* c = std::get_if<SpiderCoord>(&p);
  if (!c) throw StructuralError(std::string(who) + ": expected a (ray, radius) point");
  return *c;
}

Point canon(SpiderCoord c) {
  if (c.radius == 0.0) c.ray = 0;
  return c;
}

}  // namespace

bool operator_eq(const Point& a, const Point& b) {
  if (a.index() != b.index()) return false;
  if (const auto* va = std::get_if<std::vector<double>>(&a)) {
    const auto& vb = std::get<std::vector<double>>(b);
    return *va == vb;
  }
  const auto& ca = std::get<SpiderCoord>(a);
  const auto& cb = std::get<SpiderCoord>(b);
  if (ca.radius == 0.0 && cb.radius == 0.0) return true;  // both are the hub
  return ca == cb;
}

std::string point_repr(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  if (const auto* v = std::get_if<std::vector<double>>(&p)) {
    os << "(";
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (i) os << ", ";
      os << (*v)[i];
    }
    os << ")";
  } else {
    const auto& c = std::get<SpiderCoord>(p);
    os << "(ray " << c.ray << ", r=" << c.radius << ")";
  }
  return os.str();
}

Point Space::comb(const Point& x, const Point& y, double lambda) const {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw DomainError("comb: lambda must lie in [0, 1]");
  validate(x);
  validate(y);
  // Exact short-circuits: these make the algebraic identities (W5), (W6) and
  // the variant collapses (Halpern x_{n+1} = y_n, Mann y_n = x_n) hold
  // bitwise rather than merely within tolerance.
  if (lambda == 0.0 || same_point(x, y)) return x;
  if (lambda == 1.0) return y;
  return comb_impl(x, y, lambda);
}

double Space::modulus(double, double) const {
  throw CapabilityError(name() + ": no modulus of uniform convexity declared");
}

double Space::modulus_tilde(double, double) const {
  throw CapabilityError(name() + ": no factored modulus declared");
}

double Space::modulus_power() const {
  throw CapabilityError(name() + ": modulus has no power form");
}

namespace {

void require_modulus_args(double r, double eps) {
  if (!(r > 0.0)) throw DomainError("modulus: r must be positive");
  if (!(eps > 0.0 && eps <= 2.0)) throw DomainError("modulus: eps must lie in (0, 2]");
}

// Shared coordinate-space machinery for the Euclidean and Lp instances.
class VectorSpaceBase : public Space {
 public:
  explicit VectorSpaceBase(std::uint32_t dim) : dim_(dim) {
    if (dim == 0) throw DomainError("vector space: dim must be >= 1");
  }

  Point sample(Rng& rng) const override {
    // Box of diameter 100 regardless of dimension.
    const double h = 50.0 / std::sqrt(static_cast<double>(dim_));
    std::vector<double> v(dim_);
    for (auto& c : v) c = rng.uniform(-h, h);
    return v;
  }

  Point origin() const override { return std::vector<double>(dim_, 0.0); }

  void validate(const Point& p) const override {
    const auto& v = as_vec(p, dim_, name().c_str());
    for (double c : v)
      if (!std::isfinite(c)) throw StructuralError(name() + ": point has a non-finite coordinate");
  }

  std::uint32_t dim() const { return dim_; }
  std::optional<std::uint32_t> vector_dim() const override { return dim_; }

 protected:
  Point comb_impl(const Point& x, const Point& y, double lambda) const override {
    const auto& a = std::get<std::vector<double>>(x);
    const auto& b = std::get<std::vector<double>>(y);
    std::vector<double> r(dim_);
    for (std::uint32_t i = 0; i < dim_; ++i) r[i] = (1.0 - lambda) * a[i] + lambda * b[i];
    return r;
  }

  std::uint32_t dim_;
};

class EuclideanSpace : public VectorSpaceBase {
 public:
  using VectorSpaceBase::VectorSpaceBase;

  double dist(const Point& x, const Point& y) const override {
    const auto& a = as_vec(x, dim_, "euclidean");
    const auto& b = as_vec(y, dim_, "euclidean");
    double s = 0.0;
    for (std::uint32_t i = 0; i < dim_; ++i) {
      const double d = a[i] - b[i];
      s += d * d;
    }
    return std::sqrt(s);
  }

  bool has_modulus() const override { return true; }
  double modulus(double r, double eps) const override {
    require_modulus_args(r, eps);
    return eps * eps / 8.0;
  }
  double modulus_tilde(double r, double eps) const override {
    require_modulus_args(r, eps);
    return eps / 8.0;
  }
  bool is_cat0() const override { return true; }
  ModulusForm modulus_form() const override { return ModulusForm::Cat0; }
  double modulus_power() const override { return 2.0; }
  std::string name() const override { return "euclidean(" + std::to_string(dim_) + ")"; }
};

class LpSpace : public VectorSpaceBase {
 public:
  LpSpace(std::uint32_t dim, double p) : VectorSpaceBase(dim), p_(p) {
    if (!(p >= 2.0) || !std::isfinite(p))
      throw DomainError("lp: only p >= 2 carries the Clarkson-type modulus");
  }

  double dist(const Point& x, const Point& y) const override {
    const auto& a = as_vec(x, dim_, "lp");
    const auto& b = as_vec(y, dim_, "lp");
    double s = 0.0;
    for (std::uint32_t i = 0; i < dim_; ++i) s += std::pow(std::fabs(a[i] - b[i]), p_);
    return std::pow(s, 1.0 / p_);
  }

  bool has_modulus() const override { return true; }
  double modulus(double r, double eps) const override {
    require_modulus_args(r, eps);
    return std::pow(eps, p_) / (p_ * std::pow(2.0, p_));
  }
  double modulus_tilde(double r, double eps) const override {
    require_modulus_args(r, eps);
    return std::pow(eps, p_ - 1.0) / (p_ * std::pow(2.0, p_));
  }
  bool is_cat0() const override { return p_ == 2.0; }
  ModulusForm modulus_form() const override {
    return p_ == 2.0 ? ModulusForm::Cat0 : ModulusForm::Power;
  }
  double modulus_power() const override { return p_; }
  std::string name() const override {
    std::ostringstream os;
    os << "lp(" << dim_ << ", p=" << p_ << ")";
    return os.str();
  }

 private:
  double p_;
};

// Metric tree: `rays` half-lines glued at a hub. Geodesics within a ray are
// segments; across rays they pass through the hub.
class SpiderSpace : public Space {
 public:
  explicit SpiderSpace(std::uint32_t rays) : rays_(rays) {
    if (rays == 0) throw DomainError("spider: needs at least one ray");
  }

  double dist(const Point& x, const Point& y) const override {
    const auto& a = as_spider(x, "spider");
    const auto& b = as_spider(y, "spider");
    check(a);
    check(b);
    // radius 0 is the hub no matter which ray labels it
    if (a.radius == 0.0 || b.radius == 0.0 || a.ray == b.ray)
      return std::fabs(a.radius - b.radius);
    return a.radius + b.radius;
  }

  bool has_modulus() const override { return true; }
  double modulus(double r, double eps) const override {
    require_modulus_args(r, eps);
    return eps * eps / 8.0;
  }
  double modulus_tilde(double r, double eps) const override {
    require_modulus_args(r, eps);
    return eps / 8.0;
  }
  bool is_cat0() const override { return true; }  // R-trees are CAT(0)
  ModulusForm modulus_form() const override { return ModulusForm::Cat0; }
  double modulus_power() const override { return 2.0; }

  Point sample(Rng& rng) const override {
    return canon({static_cast<std::uint32_t>(rng.below(rays_)), rng.uniform(0.0, 50.0)});
  }

  Point origin() const override { return SpiderCoord{0, 0.0}; }

  void validate(const Point& p) const override { check(as_spider(p, "spider")); }

  std::string name() const override { return "spider(" + std::to_string(rays_) + ")"; }
  std::optional<std::uint32_t> ray_count() const override { return rays_; }

 protected:
  Point comb_impl(const Point& x, const Point& y, double lambda) const override {
    SpiderCoord a = std::get<SpiderCoord>(x);
    SpiderCoord b = std::get<SpiderCoord>(y);
    if (a.radius == 0.0) a.ray = b.ray;  // hub lies on every ray
    if (b.radius == 0.0) b.ray = a.ray;
    if (a.ray == b.ray) return canon({a.ray, (1.0 - lambda) * a.radius + lambda * b.radius});
    // Walk distance lambda*(t+s) from x along [x, hub] + [hub, y].
    const double m = lambda * (a.radius + b.radius);
    if (m <= a.radius) return canon({a.ray, a.radius - m});
    return canon({b.ray, m - a.radius});
  }

 private:
  void check(const SpiderCoord& c) const {
    if (c.ray >= rays_)
      throw StructuralError(name() + ": ray index " + std::to_string(c.ray) + " out of range");
    if (!(c.radius >= 0.0) || !std::isfinite(c.radius))
      throw StructuralError(name() + ": radius must be finite and nonnegative");
  }

  std::uint32_t rays_;
};

// comb ignores lambda entirely (returns x); interior-lambda axioms fail.
class BrokenCombSpace : public EuclideanSpace {
 public:
  using EuclideanSpace::EuclideanSpace;
  std::string name() const override {
    return "euclidean(" + std::to_string(dim_) + ")+broken-comb";
  }

 protected:
  Point comb_impl(const Point& x, const Point&, double) const override { return x; }
};

// Claims a constant modulus of uniform convexity. Nearly-diametral pairs
// around a center refute it.
class FakeModulusSpace : public EuclideanSpace {
 public:
  FakeModulusSpace(std::uint32_t dim, double claimed) : EuclideanSpace(dim), claimed_(claimed) {}
  double modulus(double r, double eps) const override {
    require_modulus_args(r, eps);
    return claimed_;
  }
  double modulus_tilde(double r, double eps) const override {
    require_modulus_args(r, eps);
    return claimed_ / eps;
  }
  bool is_cat0() const override { return false; }
  ModulusForm modulus_form() const override { return ModulusForm::Custom; }
  std::string name() const override {
    return "euclidean(" + std::to_string(dim_) + ")+fake-modulus";
  }

 private:
  double claimed_;
};

}  // namespace

SpacePtr make_euclidean(std::uint32_t dim) { return std::make_shared<EuclideanSpace>(dim); }
SpacePtr make_spider(std::uint32_t rays) { return std::make_shared<SpiderSpace>(rays); }
SpacePtr make_lp(std::uint32_t dim, double p) { return std::make_shared<LpSpace>(dim, p); }
SpacePtr make_broken_comb_space(std::uint32_t dim) {
  return std::make_shared<BrokenCombSpace>(dim);
}
SpacePtr make_fake_modulus_space(std::uint32_t dim, double claimed_eta) {
  return std::make_shared<FakeModulusSpace>(dim, claimed_eta);
}

namespace {

class CheckSet {
 public:
  CheckSet(const AxiomCheckOptions& opts) : opts_(opts) {}

  // Records only the first witness per check name; later samples still run.
  void expect_le(const std::string& name, double lhs, double rhs, std::uint64_t idx) {
    auto& c = slot(name);
    c.samples_run++;
    if (lhs > rhs + opts_.tol && c.passed) {
      c.passed = false;
      c.witness = Witness{name + ": lhs > rhs + tol", lhs, rhs, idx};
    }
  }

  void expect_eq(const std::string& name, double lhs, double rhs, std::uint64_t idx) {
    auto& c = slot(name);
    c.samples_run++;
    if (std::fabs(lhs - rhs) > opts_.tol && c.passed) {
      c.passed = false;
      c.witness = Witness{name + ": |lhs - rhs| > tol", lhs, rhs, idx};
    }
  }

  AxiomReport report() const {
    AxiomReport r;
    r.checks = checks_;
    r.seed = opts_.seed;
    r.n_samples = opts_.n_samples;
    r.tol = opts_.tol;
    return r;
  }

 private:
  AxiomCheck& slot(const std::string& name) {
    for (auto& c : checks_)
      if (c.name == name) return c;
    checks_.push_back(AxiomCheck{name, true, 0, std::nullopt});
    return checks_.back();
  }

  AxiomCheckOptions opts_;
  std::vector<AxiomCheck> checks_;
};

}  // namespace

AxiomReport check_w_axioms(const Space& space, const AxiomCheckOptions& opts) {
  Rng rng(opts.seed);
  CheckSet cs(opts);
  for (std::uint64_t i = 0; i < opts.n_samples; ++i) {
    const Point x = space.sample(rng);
    const Point y = space.sample(rng);
    const Point z = space.sample(rng);
    const Point w = space.sample(rng);
    const double lam = rng.uniform();
    const double mu = rng.uniform();

    const double dxy = space.dist(x, y);
    cs.expect_eq("metric-symmetry", space.dist(y, x), dxy, i);
    cs.expect_le("metric-nonneg", 0.0, dxy, i);
    cs.expect_eq("metric-identity", space.dist(x, x), 0.0, i);
    cs.expect_le("metric-triangle", space.dist(x, z), dxy + space.dist(y, z), i);

    const Point wxy = space.comb(x, y, lam);
    cs.expect_le("W1", space.dist(z, wxy),
                 (1.0 - lam) * space.dist(z, x) + lam * space.dist(z, y), i);
    cs.expect_eq("W2", space.dist(wxy, space.comb(x, y, mu)), std::fabs(lam - mu) * dxy, i);
    cs.expect_eq("W3", space.dist(wxy, space.comb(y, x, 1.0 - lam)), 0.0, i);
    cs.expect_le("W4", space.dist(space.comb(x, z, lam), space.comb(y, w, lam)),
                 (1.0 - lam) * dxy + lam * space.dist(z, w), i);
    cs.expect_eq("W5", space.dist(space.comb(x, x, lam), x), 0.0, i);
    cs.expect_eq("W6", space.dist(space.comb(x, y, 0.0), x), 0.0, i);
    cs.expect_eq("W6", space.dist(space.comb(y, x, 1.0), x), 0.0, i);
    cs.expect_eq("W7", space.dist(x, wxy), lam * dxy, i);
    cs.expect_eq("W7", space.dist(y, wxy), (1.0 - lam) * dxy, i);
  }
  return cs.report();
}

AxiomReport check_ucw_inequality(const Space& space, const AxiomCheckOptions& opts) {
  if (!space.has_modulus())
    throw CapabilityError(space.name() + ": check_ucw_inequality needs a modulus");
  Rng rng(opts.seed);
  CheckSet cs(opts);
  for (std::uint64_t i = 0; i < opts.n_samples; ++i) {
    const Point a = space.sample(rng);
    const Point x = space.sample(rng);
    const Point y = space.sample(rng);
    const double dxa = space.dist(x, a);
    const double dya = space.dist(y, a);
    const double dxy = space.dist(x, y);
    const double r = std::max(dxa, dya);
    if (r <= 0.0 || dxy <= 0.0) continue;
    const double eps = std::min(dxy / r, 2.0);
    const double s = r * (1.0 + rng.uniform());
    const double lam = rng.uniform();

    // Lemma hypotheses hold by construction: d(x,a) <= r, d(y,a) <= r,
    // d(x,y) >= eps*r, s >= r.
    const double eta_s = space.modulus(s, eps);
    cs.expect_le("lemma-conclusion", space.dist(space.comb(x, y, lam), a),
                 (1.0 - 2.0 * lam * (1.0 - lam) * eta_s) * r, i);
    const double eta_r = space.modulus(r, eps);
    cs.expect_le("defining-implication", space.dist(space.comb(x, y, 0.5), a),
                 (1.0 - eta_r / 2.0) * r, i);
    cs.expect_le("modulus-range", eta_r, 1.0, i);
    cs.expect_le("modulus-range", 1e-300, eta_r, i);
    cs.expect_le("modulus-monotone-r", eta_s, eta_r, i);
    const double tilde_r = space.modulus_tilde(r, eps);
    cs.expect_eq("modulus-tilde-factoring", eta_r, eps * tilde_r, i);
    const double eps2 = eps * (0.5 + 0.5 * rng.uniform());  // smaller eps
    cs.expect_le("modulus-tilde-monotone-eps", space.modulus_tilde(r, eps2), tilde_r, i);
  }
  return cs.report();
}

}  // namespace ahm
