#include "srfbm/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "srfbm/energy.hpp"
#include "srfbm/girsanov.hpp"

namespace srfbm {

namespace {

constexpr double kBoundaryTolerance = 1e-12;

void require_valid(int dim, double hurst) {
  if (dim < 1) throw std::domain_error("dimension must be >= 1");
  if (!(hurst > 0.0 && hurst < 1.0)) throw std::domain_error("Hurst index must lie in (0,1)");
}

void require_horizon(double horizon) {
  if (!(horizon > std::numbers::e)) throw std::domain_error("horizon T must exceed e");
}

Regime classify(int dh_sign, int h_vs_half_sign) {
  if (dh_sign < 0) return Regime::dh_lt_1;
  if (dh_sign == 0) {
    if (h_vs_half_sign == 0) return Regime::dh_eq_1_bm2d;  // only d = 2 has dH = 1 at H = 1/2
    return Regime::dh_eq_1_small_h;                         // dH = 1 with d >= 2 forces H <= 1/2
  }
  return h_vs_half_sign >= 0 ? Regime::dh_gt_1_large_h : Regime::dh_gt_1_small_h;
}

int sign_with_tolerance(double x) {
  if (std::abs(x) <= kBoundaryTolerance) return 0;
  return x < 0.0 ? -1 : 1;
}

}  // namespace

const char* to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::dh_lt_1: return "dH<1";
    case Regime::dh_eq_1_bm2d: return "dH=1,d=2,H=1/2";
    case Regime::dh_eq_1_small_h: return "dH=1,H<1/2";
    case Regime::dh_gt_1_large_h: return "dH>1,H>=1/2";
    case Regime::dh_gt_1_small_h: return "dH>1,H<1/2";
  }
  return "?";
}

Regime classify_regime(int dim, double hurst) {
  require_valid(dim, hurst);
  return classify(sign_with_tolerance(dim * hurst - 1.0), sign_with_tolerance(hurst - 0.5));
}

Regime classify_regime(int dim, Rational hurst) {
  if (dim < 1) throw std::domain_error("dimension must be >= 1");
  if (hurst <= Rational(0) || hurst >= Rational(1)) throw std::domain_error("Hurst index must lie in (0,1)");
  const Rational dh = hurst * static_cast<long long>(dim);
  const auto cmp = [](Rational a, Rational b) { return a < b ? -1 : (a == b ? 0 : 1); };
  return classify(cmp(dh, Rational(1)), cmp(hurst, Rational(1, 2)));
}

double beta_power(double beta, double a, double b) {
  if (!(beta > 0.0)) throw std::domain_error("beta_power: beta must be positive");
  return beta <= 1.0 ? std::pow(beta, a) : std::pow(beta, b);
}

ScalingPrediction scaling_prediction(int dim, double hurst, double beta, double horizon) {
  require_valid(dim, hurst);
  require_horizon(horizon);
  if (!(beta > 0.0)) throw std::domain_error("beta must be positive");

  ScalingPrediction p;
  p.regime = classify_regime(dim, hurst);
  const double d = dim;
  const double H = hurst;
  const double T = horizon;
  switch (p.regime) {
    case Regime::dh_lt_1: {
      const double den = 3.0 - (d + 2.0) * H;
      p.gamma = std::pow(beta, 2.0 * (1.0 - H) / den);
      p.F = std::pow(T, 1.0 + (1.0 - 2.0 * H) * (1.0 - d * H) / den);
      break;
    }
    case Regime::dh_eq_1_bm2d:
      p.gamma = beta_power(beta, 0.5, 2.0 / 3.0);
      p.F = T;
      break;
    case Regime::dh_eq_1_small_h:
      p.gamma = beta;
      p.F = T * std::log(T);
      break;
    case Regime::dh_gt_1_large_h:
      p.gamma = std::pow(beta, 2.0 / 3.0);
      p.F = std::pow(T, 2.0 * (2.0 - H) / 3.0);
      break;
    case Regime::dh_gt_1_small_h:
      p.gamma = beta;
      p.F = T;
      break;
  }
  p.r_lower = std::pow(beta * T * T / (p.gamma * p.F), 1.0 / d);
  p.r_upper = std::sqrt(p.gamma * std::pow(T, 2.0 * H) * p.F);
  p.nu_conjectured = 2.0 * (1.0 + H) / (2.0 + d);
  return p;
}

TExponent F_exponent(int dim, Rational hurst) {
  const Rational H = hurst;
  const Rational d(dim);
  switch (classify_regime(dim, hurst)) {
    case Regime::dh_lt_1: {
      const Rational den = Rational(3) - (d + 2) * H;
      return {Rational(1) + (Rational(1) - 2 * H) * (Rational(1) - d * H) / den, Rational(0)};
    }
    case Regime::dh_eq_1_bm2d: return {Rational(1), Rational(0)};
    case Regime::dh_eq_1_small_h: return {Rational(1), Rational(1)};
    case Regime::dh_gt_1_large_h: return {Rational(2) * (Rational(2) - H) / 3, Rational(0)};
    case Regime::dh_gt_1_small_h: return {Rational(1), Rational(0)};
  }
  throw std::logic_error("unreachable regime");
}

BoundExponents bound_exponents(int dim, Rational hurst) {
  const TExponent f = F_exponent(dim, hurst);
  const Rational d(dim);
  BoundExponents b;
  b.lower = {(Rational(2) - f.power) / d, -f.log_power / d};
  b.upper = {(2 * hurst + f.power) / 2, f.log_power / 2};
  return b;
}

Rational nu_conjectured(int dim, Rational hurst) { return Rational(2) * (Rational(1) + hurst) / (2 + dim); }

LemmaConstants lemma_constants(int dim) {
  if (dim < 1) throw std::domain_error("dimension must be >= 1");
  const double d = dim;
  LemmaConstants c;
  c.unit_ball_volume = unit_ball_volume(dim);
  c.c_lower_tail = 9.0 * std::tgamma(1.0 + 0.5 * d) / (std::pow(2.0, 5.0 + d) * std::pow(std::numbers::pi, 0.5 * d));
  return c;
}

TheoremConstants theorem_constants(int dim, double hurst, const std::optional<ExistentialPlaceholders>& placeholders) {
  require_valid(dim, hurst);
  TheoremConstants out;
  out.c_lower_formula = "C_* = (C_lt / (2 C_zt))^(1/d)";
  out.c_upper_formula = "C^* = (2 C_zt / C_gt)^(1/2)";
  if (!placeholders) {
    throw std::invalid_argument(
        "theorem_constants: C_zt and C_gt are existential; supply explicit placeholder values to evaluate " +
        out.c_lower_formula + " and " + out.c_upper_formula);
  }
  const auto& p = *placeholders;
  if (!(p.c_log_partition > 0.0 && p.c_gaussian_tail > 0.0)) {
    throw std::domain_error("theorem_constants: placeholders must be positive");
  }
  out.c_lower = std::pow(lemma_constants(dim).c_lower_tail / (2.0 * p.c_log_partition), 1.0 / dim);
  out.c_upper = std::sqrt(2.0 * p.c_log_partition / p.c_gaussian_tail);
  return out;
}

UpToConstant rate_I1_star(int dim, double hurst, double beta, double horizon, double lambda) {
  require_valid(dim, hurst);
  if (!(horizon >= std::numbers::e)) throw std::domain_error("rate_I1_star: horizon T must be at least e");
  if (!(lambda > 0.0)) throw std::domain_error("rate_I1_star: lambda must be positive");
  // T = e is admitted here: log T = 1 is where both minima cross at lambda = 1.
  const double dh = dim * hurst;
  const double base = beta * horizon;
  const int s = sign_with_tolerance(dh - 1.0);
  if (s < 0) return {base * std::pow(lambda, -(1.0 - dh) / (1.0 - hurst))};
  if (s == 0) {
    return {base * (std::min(std::log(horizon), 1.0 / (lambda * lambda)) + std::min(1.0, 1.0 / lambda))};
  }
  return {base * std::min(1.0, 1.0 / lambda)};
}

double rate_I2_star(double hurst, double lambda, double horizon) {
  if (!(lambda >= 0.0)) throw std::domain_error("rate_I2_star: lambda must be nonnegative");
  if (!(horizon > 0.0)) throw std::domain_error("rate_I2_star: horizon must be positive");
  const auto c = girsanov_constants(hurst);
  return 0.5 * c.quadratic_variation * lambda * lambda * std::pow(horizon, 2.0 * (1.0 - hurst));
}

}  // namespace srfbm
