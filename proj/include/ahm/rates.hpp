#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "ahm/bigint.hpp"
#include "ahm/exact.hpp"
#include "ahm/schedules.hpp"
#include "ahm/spaces.hpp"

namespace ahm {

using exact::ceil_ln;

// Convexity-modulus descriptor in a form the exact arithmetic can consume.
// Power means eta(r, eps) = eps^p / (p 2^p) with eta~(r, eps) = eps^{p-1} /
// (p 2^p); Cat0 is the p = 2 instance eps^2 / 8. Custom falls back to the
// double callbacks, with the resulting ceiling widened outward so the
// produced rate is still an upper bound.
struct Eta {
  ModulusForm form = ModulusForm::None;
  double power = 2.0;
  std::function<double(double r, double eps)> eta;
  std::function<double(double r, double eps)> eta_tilde;
};

Eta eta_from_space(const SpacePtr& space);

struct RateContext {
  BigInt K{1};
  std::optional<BigInt> Lambda;
  std::optional<Modulus> sigma1;
  std::optional<Modulus> sigma2;
  std::optional<Modulus> sigma3;
  std::optional<Modulus> sigma4;
  // Assumed rate of asymptotic regularity of (x_n); the two stock
  // instantiations are Sigma1 and Gamma1.
  std::optional<Modulus> delta;
  Eta eta;
};

// Context with K plus everything the schedule and space can contribute.
RateContext make_rate_context(const Schedule& s, const BigInt& K, SpacePtr space = nullptr);

// The two stock instantiations of the asymptotic-regularity input Delta:
// the linear rate Sigma1(K, .) and the general rate Gamma1.
Modulus delta_from_sigma1(const BigInt& K);
Modulus delta_from_gamma1(const RateContext& ctx);

// chi(k) = max{sigma3(4K(k+1)-1), sigma4(4K(k+1)-1)}.
BigInt chi(const RateContext& ctx, const BigInt& k);

// Gamma1(k) = sigma2(chi(2k+1) + 2 + ceil_ln(4K(k+1))) + 1.
BigInt gamma1(const RateContext& ctx, const BigInt& k);

// Gamma2(k) = max{Gamma1(2k+1), sigma3(4K(k+1)-1) + 1}; collapses to the
// first term when sigma3 is flagged nondecreasing.
BigInt gamma2(const RateContext& ctx, const BigInt& k);

// Sigma(k) = theta(chi(2k+1) + 1 + ceil_ln(2L(k+1))) + 1.
BigInt qxu_rate(const Modulus& theta, const Modulus& chi_m, const BigInt& L, const BigInt& k);

// J L / (gamma (n + J)).
double sabach_bound(double L, std::uint64_t J, double gamma, std::uint64_t n);

struct LinearRates {
  BigInt Sigma1;  // 4K(k+1) - 2, rate for d(x_n, x_{n+1})
  BigInt Sigma2;  // 4K(k+1) - 3, rate for d(y_n, y_{n+1})
};
LinearRates linear_rates(const BigInt& K, const BigInt& k);

// Which form of P feeds the Gamma3 family.
enum class Gamma3Route : std::uint8_t {
  GeneralEta,  // P  = ceil(Lambda^2 / eta(K, 1/(K(k+1))))
  TildeEta,    // P~ = ceil(Lambda^2 / eta~(K, 1/(K(k+1))))
  Cat0,        // P0 = 8 K Lambda^2 (k+1)
};

BigInt sharp_p(const RateContext& ctx, const BigInt& k, Gamma3Route route);

struct UcwRates {
  BigInt P;
  BigInt Gamma3;  // max{Delta(2P(k+1)-1), sigma1(2PK(k+1)-1)}, P evaluated at k
  BigInt Omega;   // max{Delta(2k+1), Gamma3(2k+1)}
  BigInt Gamma4;  // max{Omega(2k+1), sigma1(4K(k+1)-1)}
  BigInt Gamma5;  // max{Omega(4k+3), Gamma3(2k+1)}
  BigInt Gamma6;  // max{Omega(4k+3), Gamma4(2k+1)}
};
UcwRates ucw_rates(const RateContext& ctx, const BigInt& k,
                   Gamma3Route route = Gamma3Route::GeneralEta);

struct UcwRatesTilde {
  BigInt P_tilde;
  BigInt Gamma3_tilde;
};
UcwRatesTilde ucw_rates_tilde(const RateContext& ctx, const BigInt& k);

struct Cat0Rates {
  BigInt P0;      // 8 K Lambda^2 (k+1)
  BigInt Gamma0;  // max{Delta(2 P0 (k+1) - 1), sigma1(2 P0 K (k+1) - 1)}
};
Cat0Rates cat0_rates(const BigInt& K, const BigInt& Lambda, const Modulus& delta,
                     const Modulus& sigma1, const BigInt& k);

// Lambda = ceil(max{1/beta, 1/(1-beta)}), exact over the rational beta.
BigInt lambda_from_beta(const BigRat& beta);

struct QuadraticRates {
  BigInt Lambda;
  BigInt Sigma3;  // 2^6  K^2 Lambda^2 (k+1)^2 - 2, rate for d(y_n, U y_n)
  BigInt Theta;   // 2^8  K^2 Lambda^2 (k+1)^2 - 2, rate for d(x_n, y_n)
  BigInt Sigma4;  // 2^10 K^2 Lambda^2 (k+1)^2 - 2, rate for d(y_n, T y_n)
  BigInt Sigma5;  // 2^12 K^2 Lambda^2 (k+1)^2 - 2, rate for d(x_n, T x_n) and d(x_n, U x_n)
};
QuadraticRates quadratic_rates(const BigInt& K, const BigRat& beta, const BigInt& k);
QuadraticRates quadratic_rates_lambda(const BigInt& K, const BigInt& Lambda, const BigInt& k);

}  // namespace ahm
