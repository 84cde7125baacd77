#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ahm/maps.hpp"
#include "ahm/schedules.hpp"
#include "ahm/spaces.hpp"

namespace ahm {

enum class Variant : std::uint8_t {
  General,          // two maps T, U
  Halpern,          // U = Id, (y_n) is the Halpern iteration
  TikhonovMann,     // T = Id, (x_n) primary
  ModifiedHalpern,  // T = Id, (y_n) primary
  Mann,             // T = Id and alpha = 0, (y_n) = (x_n) is the Mann iteration
};

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& s);

struct IterationProblem {
  SpacePtr space;
  Map T;
  Map U;
  Point u;   // anchor
  Point x0;  // start
  Point p;   // declared common fixed point of T and U
  Schedule schedule;
  std::optional<std::uint64_t> K_override;

  // Structural soundness plus d(Tp, p) <= tol and d(Up, p) <= tol. An
  // undersized K_override (below max(M_p, 1) rounded up) is rejected here.
  void validate(double tol = 1e-9) const;
};

// One run of  y_n = (1-a_n) T x_n + a_n u,  x_{n+1} = (1-b_n) U y_n + b_n y_n.
//
// Index ranges: x_0..x_{n_max}, y_0..y_{n_max-1}. Derived sequences run as
// far as their arguments exist: d_xx[n] = d(x_n, x_{n+1}) for n < n_max,
// d_yy[n] = d(y_n, y_{n+1}) for n < n_max-1, the x-pointwise columns through
// n_max and the y-pointwise columns through n_max-1.
struct Trace {
  std::vector<Point> x;
  std::vector<Point> y;

  std::vector<double> d_xx;   // d(x_n, x_{n+1})
  std::vector<double> d_yy;   // d(y_n, y_{n+1})
  std::vector<double> d_xy;   // d(x_n, y_n)
  std::vector<double> d_Tx;   // d(T x_n, x_n)
  std::vector<double> d_Ux;   // d(U x_n, x_n)
  std::vector<double> d_Ty;   // d(T y_n, y_n)
  std::vector<double> d_Uy;   // d(U y_n, y_n)
  std::vector<double> d_xp;   // d(x_n, p)
  std::vector<double> d_yp;   // d(y_n, p)
  std::vector<double> d_Txu;  // d(T x_n, u), feeds the y-increment bound

  std::vector<double> alpha;  // alpha_0..alpha_{n_max}
  std::vector<double> beta;   // beta_0..beta_{n_max}

  double M_p = 0.0;        // max(d(x_0, p), d(u, p))
  std::uint64_t K = 1;     // positive integer >= M_p
  std::uint64_t n_max = 0;
  Variant variant = Variant::General;
  std::string schedule_label;
};

Trace run_hm(const IterationProblem& problem, std::uint64_t n_max);

// run_hm with the maps forced into the requested specialization (Halpern:
// U := Id; Tikhonov-Mann / modified Halpern: T := Id; Mann: T := Id and the
// schedule's alpha replaced by 0, its alpha-certificates adjusted to match).
Trace run_variant(Variant v, const IterationProblem& problem, std::uint64_t n_max);

// Recompute every distance column from the stored points. Audits a trace
// whose distance entries may have been tampered with.
void rederive_distances(Trace& t, const IterationProblem& problem);

struct IneqResult {
  std::string name;
  bool passed = true;
  std::uint64_t checked = 0;
  double worst_slack = 0.0;  // max over n of lhs - rhs; negative means margin
  std::optional<std::uint64_t> witness_n;
};

struct InequalityReport {
  std::vector<IneqResult> results;
  double tol = 0.0;
  bool passed() const {
    for (const auto& r : results)
      if (!r.passed) return false;
    return true;
  }
};

// Checks the one-step contraction inequalities, the M_p boundedness bounds
// and the asymptotic-regularity chains against a recorded trace.
InequalityReport check_trace_inequalities(const Trace& t, double tol = 1e-9);

}  // namespace ahm
