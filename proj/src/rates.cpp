#include "ahm/rates.hpp"

#include <algorithm>
#include <cmath>

#include "ahm/errors.hpp"

namespace ahm {
namespace {

void require_k(const BigInt& K) {
  if (K < 1) throw DomainError("rates: K must be >= 1, got " + K.get_str());
}

const Modulus& need(const std::optional<Modulus>& m, const char* what) {
  if (!m || !m->valid()) throw CapabilityError(std::string("rates: context lacks ") + what);
  return *m;
}

const BigInt& need_lambda(const RateContext& ctx) {
  if (!ctx.Lambda) throw CapabilityError("rates: context lacks Lambda");
  if (*ctx.Lambda < 2) throw DomainError("rates: Lambda must be >= 2");
  return *ctx.Lambda;
}

BigInt pow_int(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

bool integral_power(double p, unsigned long* out) {
  if (!(p >= 1.0) || p != std::floor(p) || p > 64.0) return false;
  *out = static_cast<unsigned long>(p);
  return true;
}

}  // namespace

Eta eta_from_space(const SpacePtr& space) {
  Eta e;
  if (!space || !space->has_modulus()) return e;
  e.form = space->modulus_form();
  switch (e.form) {
    case ModulusForm::Cat0:
      e.power = 2.0;
      break;
    case ModulusForm::Power:
      e.power = space->modulus_power();
      break;
    case ModulusForm::Custom: {
      SpacePtr sp = space;
      e.eta = [sp](double r, double eps) { return sp->modulus(r, eps); };
      e.eta_tilde = [sp](double r, double eps) { return sp->modulus_tilde(r, eps); };
      break;
    }
    case ModulusForm::None:
      break;
  }
  return e;
}

RateContext make_rate_context(const Schedule& s, const BigInt& K, SpacePtr space) {
  require_k(K);
  RateContext ctx;
  ctx.K = K;
  ctx.Lambda = s.lambda_cap;
  ctx.sigma1 = s.sigma1;
  ctx.sigma2 = s.sigma2;
  ctx.sigma3 = s.sigma3;
  ctx.sigma4 = s.sigma4;
  ctx.eta = eta_from_space(space);
  return ctx;
}

Modulus delta_from_sigma1(const BigInt& K) {
  require_k(K);
  return Modulus([K](const BigInt& k) -> BigInt { return 4 * K * (k + 1) - 2; },
                 ModulusKind::RateOfConvergence, "Sigma1(K=" + K.get_str() + ")", true);
}

Modulus delta_from_gamma1(const RateContext& ctx) {
  return Modulus([ctx](const BigInt& k) { return gamma1(ctx, k); },
                 ModulusKind::RateOfConvergence, "Gamma1", true);
}

BigInt chi(const RateContext& ctx, const BigInt& k) {
  require_k(ctx.K);
  if (k < 0) throw DomainError("chi: k must be nonnegative");
  const BigInt arg = 4 * ctx.K * (k + 1) - 1;
  return std::max(need(ctx.sigma3, "sigma3")(arg), need(ctx.sigma4, "sigma4")(arg));
}

BigInt gamma1(const RateContext& ctx, const BigInt& k) {
  require_k(ctx.K);
  if (k < 0) throw DomainError("gamma1: k must be nonnegative");
  const BigInt arg = chi(ctx, 2 * k + 1) + 2 + ceil_ln(BigRat(4 * ctx.K * (k + 1)));
  return need(ctx.sigma2, "sigma2")(arg) + 1;
}

BigInt gamma2(const RateContext& ctx, const BigInt& k) {
  const BigInt g = gamma1(ctx, 2 * k + 1);
  const Modulus& s3 = need(ctx.sigma3, "sigma3");
  if (s3.nondecreasing()) return g;
  return std::max(g, BigInt(s3(4 * ctx.K * (k + 1) - 1) + 1));
}

BigInt qxu_rate(const Modulus& theta, const Modulus& chi_m, const BigInt& L, const BigInt& k) {
  if (L < 1) throw DomainError("qxu_rate: L must be >= 1");
  if (k < 0) throw DomainError("qxu_rate: k must be nonnegative");
  const BigInt arg = chi_m(2 * k + 1) + 1 + ceil_ln(BigRat(2 * L * (k + 1)));
  return theta(arg) + 1;
}

double sabach_bound(double L, std::uint64_t J, double gamma, std::uint64_t n) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("sabach_bound: gamma must lie in (0, 1]");
  if (J < 2) throw DomainError("sabach_bound: J must be >= 2");
  if (!(L > 0.0)) throw DomainError("sabach_bound: L must be positive");
  return static_cast<double>(J) * L / (gamma * (static_cast<double>(n) + static_cast<double>(J)));
}

LinearRates linear_rates(const BigInt& K, const BigInt& k) {
  require_k(K);
  if (k < 0) throw DomainError("linear_rates: k must be nonnegative");
  const BigInt base = 4 * K * (k + 1);
  return LinearRates{base - 2, base - 3};
}

BigInt sharp_p(const RateContext& ctx, const BigInt& k, Gamma3Route route) {
  require_k(ctx.K);
  if (k < 0) throw DomainError("sharp_p: k must be nonnegative");
  const BigInt& L = need_lambda(ctx);
  const BigInt L2 = L * L;
  const BigInt x = ctx.K * (k + 1);  // 1/eps

  if (route == Gamma3Route::Cat0) return 8 * ctx.K * L2 * (k + 1);

  if (route == Gamma3Route::GeneralEta) {
    switch (ctx.eta.form) {
      case ModulusForm::Cat0:
        // eta = eps^2/8, so Lambda^2/eta = 8 Lambda^2 (K(k+1))^2.
        return 8 * L2 * x * x;
      case ModulusForm::Power: {
        const double p = ctx.eta.power;
        unsigned long pi;
        if (integral_power(p, &pi))
          return L2 * static_cast<unsigned long>(pi) * pow_int(2 * x, pi);
        return exact::ceil_scaled_pow(BigRat(L2) * rat_from_double(p), BigRat(2 * x), p);
      }
      case ModulusForm::Custom: {
        if (!ctx.eta.eta) throw CapabilityError("sharp_p: custom eta callback missing");
        const double Kd = mpz_get_d(ctx.K.get_mpz_t());
        const double eps = 1.0 / mpz_get_d(x.get_mpz_t());
        const double v = ctx.eta.eta(Kd, eps);
        if (!(v > 0.0 && v <= 1.0))
          throw DomainError("sharp_p: custom eta value outside (0, 1]");
        // Widen downward so the ceiling can only grow; the produced rate
        // stays a valid upper bound.
        const BigRat eta_lo = rat_from_double(v * (1.0 - 1e-9));
        return ceil_q(BigRat(L2) / eta_lo);
      }
      case ModulusForm::None:
        throw CapabilityError("sharp_p: context has no eta descriptor");
    }
  }

  // TildeEta
  switch (ctx.eta.form) {
    case ModulusForm::Cat0:
      // eta~ = eps/8, so Lambda^2/eta~ = 8 Lambda^2 K(k+1).
      return 8 * L2 * x;
    case ModulusForm::Power: {
      const double p = ctx.eta.power;
      unsigned long pi;
      if (integral_power(p, &pi))
        return L2 * static_cast<unsigned long>(pi) * 2 * pow_int(2 * x, pi - 1);
      return exact::ceil_scaled_pow(BigRat(2 * L2) * rat_from_double(p), BigRat(2 * x), p - 1.0);
    }
    case ModulusForm::Custom: {
      if (!ctx.eta.eta_tilde) throw CapabilityError("sharp_p: custom eta~ callback missing");
      const double Kd = mpz_get_d(ctx.K.get_mpz_t());
      const double eps = 1.0 / mpz_get_d(x.get_mpz_t());
      const double v = ctx.eta.eta_tilde(Kd, eps);
      if (!(v > 0.0)) throw DomainError("sharp_p: custom eta~ value must be positive");
      const BigRat eta_lo = rat_from_double(v * (1.0 - 1e-9));
      return ceil_q(BigRat(L2) / eta_lo);
    }
    case ModulusForm::None:
      throw CapabilityError("sharp_p: context has no eta descriptor");
  }
  throw StructuralError("sharp_p: unreachable");
}

namespace {

BigInt gamma3_at(const RateContext& ctx, const BigInt& k, Gamma3Route route) {
  const BigInt P = sharp_p(ctx, k, route);
  const Modulus& delta = need(ctx.delta, "delta");
  const Modulus& s1 = need(ctx.sigma1, "sigma1");
  return std::max(delta(2 * P * (k + 1) - 1), s1(2 * P * ctx.K * (k + 1) - 1));
}

BigInt omega_at(const RateContext& ctx, const BigInt& k, Gamma3Route route) {
  const Modulus& delta = need(ctx.delta, "delta");
  return std::max(delta(2 * k + 1), gamma3_at(ctx, 2 * k + 1, route));
}

BigInt gamma4_at(const RateContext& ctx, const BigInt& k, Gamma3Route route) {
  const Modulus& s1 = need(ctx.sigma1, "sigma1");
  return std::max(omega_at(ctx, 2 * k + 1, route), s1(4 * ctx.K * (k + 1) - 1));
}

}  // namespace

UcwRates ucw_rates(const RateContext& ctx, const BigInt& k, Gamma3Route route) {
  if (k < 0) throw DomainError("ucw_rates: k must be nonnegative");
  UcwRates r;
  r.P = sharp_p(ctx, k, route);
  r.Gamma3 = gamma3_at(ctx, k, route);
  r.Omega = omega_at(ctx, k, route);
  r.Gamma4 = gamma4_at(ctx, k, route);
  r.Gamma5 = std::max(omega_at(ctx, 4 * k + 3, route), gamma3_at(ctx, 2 * k + 1, route));
  r.Gamma6 = std::max(omega_at(ctx, 4 * k + 3, route), gamma4_at(ctx, 2 * k + 1, route));
  return r;
}

UcwRatesTilde ucw_rates_tilde(const RateContext& ctx, const BigInt& k) {
  if (k < 0) throw DomainError("ucw_rates_tilde: k must be nonnegative");
  UcwRatesTilde r;
  r.P_tilde = sharp_p(ctx, k, Gamma3Route::TildeEta);
  r.Gamma3_tilde = gamma3_at(ctx, k, Gamma3Route::TildeEta);
  return r;
}

Cat0Rates cat0_rates(const BigInt& K, const BigInt& Lambda, const Modulus& delta,
                     const Modulus& sigma1, const BigInt& k) {
  require_k(K);
  if (Lambda < 2) throw DomainError("cat0_rates: Lambda must be >= 2");
  if (k < 0) throw DomainError("cat0_rates: k must be nonnegative");
  Cat0Rates r;
  r.P0 = 8 * K * Lambda * Lambda * (k + 1);
  r.Gamma0 = std::max(delta(2 * r.P0 * (k + 1) - 1), sigma1(2 * r.P0 * K * (k + 1) - 1));
  return r;
}

BigInt lambda_from_beta(const BigRat& beta) {
  if (!(beta > 0 && beta < 1))
    throw DomainError("lambda_from_beta: beta must lie in (0, 1), got " + beta.get_str());
  const BigRat a = 1 / beta;
  const BigRat b = 1 / (BigRat(1) - beta);
  return ceil_q(std::max(a, b));
}

QuadraticRates quadratic_rates(const BigInt& K, const BigRat& beta, const BigInt& k) {
  return quadratic_rates_lambda(K, lambda_from_beta(beta), k);
}

QuadraticRates quadratic_rates_lambda(const BigInt& K, const BigInt& Lambda, const BigInt& k) {
  require_k(K);
  if (Lambda < 2) throw DomainError("quadratic_rates: Lambda must be >= 2");
  if (k < 0) throw DomainError("quadratic_rates: k must be nonnegative");
  QuadraticRates r;
  r.Lambda = Lambda;
  const BigInt c = K * K * Lambda * Lambda * (k + 1) * (k + 1);
  r.Sigma3 = (c << 6) - 2;
  r.Theta = (c << 8) - 2;
  r.Sigma4 = (c << 10) - 2;
  r.Sigma5 = (c << 12) - 2;
  return r;
}

}  // namespace ahm
