#include "ahm/iterate.hpp"

#include <algorithm>
#include <cmath>

#include "ahm/errors.hpp"

namespace ahm {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::General: return "general";
    case Variant::Halpern: return "halpern";
    case Variant::TikhonovMann: return "tikhonov_mann";
    case Variant::ModifiedHalpern: return "modified_halpern";
    case Variant::Mann: return "mann";
  }
  throw StructuralError("unknown variant");
}

Variant variant_from_name(const std::string& s) {
  if (s == "general") return Variant::General;
  if (s == "halpern") return Variant::Halpern;
  if (s == "tikhonov_mann" || s == "tikhonov-mann") return Variant::TikhonovMann;
  if (s == "modified_halpern" || s == "modified-halpern") return Variant::ModifiedHalpern;
  if (s == "mann") return Variant::Mann;
  throw ValidationError("unknown variant '" + s + "'");
}

void IterationProblem::validate(double tol) const {
  if (!space) throw ValidationError("iteration problem: missing space");
  if (!T.valid() || !U.valid()) throw ValidationError("iteration problem: missing map");
  if (T.space().get() != space.get() || U.space().get() != space.get())
    throw ValidationError("iteration problem: maps live on a different space");
  if (!schedule.alpha || !schedule.beta)
    throw ValidationError("iteration problem: schedule lacks alpha or beta");
  space->validate(u);
  space->validate(x0);
  space->validate(p);
  if (space->dist(T(p), p) > tol)
    throw ValidationError("iteration problem: p is not fixed by T (d = " +
                          std::to_string(space->dist(T(p), p)) + ")");
  if (space->dist(U(p), p) > tol)
    throw ValidationError("iteration problem: p is not fixed by U (d = " +
                          std::to_string(space->dist(U(p), p)) + ")");
  if (K_override) {
    const double M_p = std::max(space->dist(x0, p), space->dist(u, p));
    if (*K_override < 1 || static_cast<double>(*K_override) < M_p)
      throw ValidationError("iteration problem: K override " + std::to_string(*K_override) +
                            " is below max(M_p, 1) with M_p = " + std::to_string(M_p));
  }
}

Trace run_hm(const IterationProblem& problem, std::uint64_t n_max) {
  if (n_max < 1) throw ValidationError("run_hm: n_max must be >= 1");
  problem.validate();
  const Space& X = *problem.space;
  const Map& T = problem.T;
  const Map& U = problem.U;

  Trace t;
  t.n_max = n_max;
  t.schedule_label = problem.schedule.label;
  t.M_p = std::max(X.dist(problem.x0, problem.p), X.dist(problem.u, problem.p));
  if (problem.K_override) {
    t.K = *problem.K_override;
  } else {
    t.K = static_cast<std::uint64_t>(std::max(1.0, std::ceil(t.M_p)));
  }

  t.x.reserve(n_max + 1);
  t.y.reserve(n_max);
  t.alpha.reserve(n_max + 1);
  t.beta.reserve(n_max + 1);
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    const double a = problem.schedule.alpha(n);
    const double b = problem.schedule.beta(n);
    if (!(a >= 0.0 && a <= 1.0))
      throw DomainError("run_hm: alpha[" + std::to_string(n) + "] outside [0, 1]");
    if (!(b >= 0.0 && b <= 1.0))
      throw DomainError("run_hm: beta[" + std::to_string(n) + "] outside [0, 1]");
    t.alpha.push_back(a);
    t.beta.push_back(b);
  }

  t.x.push_back(problem.x0);
  for (std::uint64_t n = 0; n < n_max; ++n) {
    const Point Tx = T(t.x[n]);
    t.d_Tx.push_back(X.dist(Tx, t.x[n]));
    t.d_Ux.push_back(X.dist(U(t.x[n]), t.x[n]));
    t.d_Txu.push_back(X.dist(Tx, problem.u));
    const Point yn = X.comb(Tx, problem.u, t.alpha[n]);
    const Point Uy = U(yn);
    t.d_Ty.push_back(X.dist(T(yn), yn));
    t.d_Uy.push_back(X.dist(Uy, yn));
    t.x.push_back(X.comb(Uy, yn, t.beta[n]));
    t.y.push_back(yn);
  }
  {
    // Pointwise x-columns extend through n_max; one extra T and U evaluation.
    const Point& xe = t.x[n_max];
    t.d_Tx.push_back(X.dist(T(xe), xe));
    t.d_Ux.push_back(X.dist(U(xe), xe));
  }

  for (std::uint64_t n = 0; n < n_max; ++n) {
    t.d_xx.push_back(X.dist(t.x[n], t.x[n + 1]));
    t.d_xy.push_back(X.dist(t.x[n], t.y[n]));
    t.d_yp.push_back(X.dist(t.y[n], problem.p));
    if (n + 1 < n_max) t.d_yy.push_back(X.dist(t.y[n], t.y[n + 1]));
  }
  for (std::uint64_t n = 0; n <= n_max; ++n) t.d_xp.push_back(X.dist(t.x[n], problem.p));
  return t;
}

Trace run_variant(Variant v, const IterationProblem& problem, std::uint64_t n_max) {
  IterationProblem q = problem;
  switch (v) {
    case Variant::General:
      break;
    case Variant::Halpern:
      q.U = make_identity(q.space);
      break;
    case Variant::TikhonovMann:
    case Variant::ModifiedHalpern:
      q.T = make_identity(q.space);
      break;
    case Variant::Mann: {
      q.T = make_identity(q.space);
      Schedule s = q.schedule;
      s.alpha = [](std::uint64_t) { return 0.0; };
      s.alpha_exact = [](std::uint64_t) { return BigRat(0); };
      // alpha = 0 converges instantly and varies not at all; its divergence
      // certificate is gone.
      s.sigma1 = Modulus([](const BigInt&) { return BigInt(0); },
                         ModulusKind::RateOfConvergence, "sigma1=0", true);
      s.sigma2.reset();
      s.sigma3 = Modulus([](const BigInt&) { return BigInt(0); }, ModulusKind::CauchyModulus,
                         "sigma3=0", true);
      s.label += "+mann";
      q.schedule = std::move(s);
      break;
    }
  }
  Trace t = run_hm(q, n_max);
  t.variant = v;
  return t;
}

void rederive_distances(Trace& t, const IterationProblem& problem) {
  const Space& X = *problem.space;
  const Map& T = problem.T;
  const Map& U = problem.U;
  const std::uint64_t n_max = t.n_max;
  if (t.x.size() != n_max + 1 || t.y.size() != n_max)
    throw StructuralError("rederive_distances: point sequences have wrong lengths");

  auto fill = [](std::vector<double>& v, std::uint64_t len) {
    v.assign(len, 0.0);
  };
  fill(t.d_xx, n_max);
  fill(t.d_yy, n_max > 0 ? n_max - 1 : 0);
  fill(t.d_xy, n_max);
  fill(t.d_Tx, n_max + 1);
  fill(t.d_Ux, n_max + 1);
  fill(t.d_Ty, n_max);
  fill(t.d_Uy, n_max);
  fill(t.d_xp, n_max + 1);
  fill(t.d_yp, n_max);
  fill(t.d_Txu, n_max);

  for (std::uint64_t n = 0; n <= n_max; ++n) {
    t.d_Tx[n] = X.dist(T(t.x[n]), t.x[n]);
    t.d_Ux[n] = X.dist(U(t.x[n]), t.x[n]);
    t.d_xp[n] = X.dist(t.x[n], problem.p);
  }
  for (std::uint64_t n = 0; n < n_max; ++n) {
    t.d_xx[n] = X.dist(t.x[n], t.x[n + 1]);
    t.d_xy[n] = X.dist(t.x[n], t.y[n]);
    t.d_Ty[n] = X.dist(T(t.y[n]), t.y[n]);
    t.d_Uy[n] = X.dist(U(t.y[n]), t.y[n]);
    t.d_yp[n] = X.dist(t.y[n], problem.p);
    t.d_Txu[n] = X.dist(T(t.x[n]), problem.u);
    if (n + 1 < n_max) t.d_yy[n] = X.dist(t.y[n], t.y[n + 1]);
  }
}

namespace {

class IneqScan {
 public:
  explicit IneqScan(double tol) : tol_(tol) {}

  void take(const std::string& name, std::uint64_t n, double lhs, double rhs) {
    auto& r = slot(name);
    r.checked++;
    const double slack = lhs - rhs;
    r.worst_slack = std::max(r.worst_slack, slack);
    if (slack > tol_ && r.passed) {
      r.passed = false;
      r.witness_n = n;
    }
  }

  InequalityReport report() const {
    InequalityReport rep;
    rep.results = results_;
    rep.tol = tol_;
    return rep;
  }

 private:
  IneqResult& slot(const std::string& name) {
    for (auto& r : results_)
      if (r.name == name) return r;
    results_.push_back(IneqResult{name, true, 0, -1e300, std::nullopt});
    return results_.back();
  }

  double tol_;
  std::vector<IneqResult> results_;
};

}  // namespace

InequalityReport check_trace_inequalities(const Trace& t, double tol) {
  IneqScan scan(tol);
  const std::uint64_t n_max = t.n_max;
  const double M2 = 2.0 * t.M_p;
  const double K2 = 2.0 * static_cast<double>(t.K);

  for (std::uint64_t n = 0; n + 1 < n_max; ++n) {
    const double da = std::fabs(t.alpha[n + 1] - t.alpha[n]);
    // (7) and its M_p-bounded variant (9)
    scan.take("(7) d_yy <= (1-a')d_xx + |da| d(Tx,u)", n,
              t.d_yy[n], (1.0 - t.alpha[n + 1]) * t.d_xx[n] + da * t.d_Txu[n]);
    scan.take("(9) d_yy <= (1-a')d_xx + 2M_p|da|", n,
              t.d_yy[n], (1.0 - t.alpha[n + 1]) * t.d_xx[n] + M2 * da);
    const double db = std::fabs(t.beta[n + 1] - t.beta[n]);
    // (8): the x-increment shifted by one index
    scan.take("(8) d_xx' <= d_yy + |db| d_Uy", n,
              t.d_xx[n + 1], t.d_yy[n] + db * t.d_Uy[n]);
    // (10): combined one-step contraction
    scan.take("(10) d_xx' <= (1-a')d_xx + 2M_p(|da|+|db|)", n,
              t.d_xx[n + 1], (1.0 - t.alpha[n + 1]) * t.d_xx[n] + M2 * (da + db));
  }

  for (std::uint64_t n = 0; n <= n_max; ++n)
    scan.take("d_xp <= M_p", n, t.d_xp[n], t.M_p);
  for (std::uint64_t n = 0; n < n_max; ++n) {
    scan.take("d_yp <= M_p", n, t.d_yp[n], t.M_p);
    scan.take("d(Tx,u) <= 2M_p", n, t.d_Txu[n], M2);
    scan.take("d_Uy <= 2M_p", n, t.d_Uy[n], M2);
    scan.take("d_xx <= 2M_p", n, t.d_xx[n], M2);
    if (n + 1 < n_max) scan.take("d_yy <= 2M_p", n, t.d_yy[n], M2);
  }

  // Chains that close the asymptotic-regularity argument for T and U.
  for (std::uint64_t n = 0; n < n_max; ++n) {
    scan.take("d_xy <= d_xx + d_Uy", n, t.d_xy[n], t.d_xx[n] + t.d_Uy[n]);
    scan.take("d_Ty <= d_xy + 2K a", n, t.d_Ty[n], t.d_xy[n] + K2 * t.alpha[n]);
    scan.take("d_Ux <= 2 d_xy + d_Uy", n, t.d_Ux[n], 2.0 * t.d_xy[n] + t.d_Uy[n]);
    scan.take("d_Tx <= 2 d_xy + d_Ty", n, t.d_Tx[n], 2.0 * t.d_xy[n] + t.d_Ty[n]);
  }

  return scan.report();
}

}  // namespace ahm
