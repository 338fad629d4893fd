#pragma once

#include <boost/rational.hpp>

#include <optional>
#include <string>

namespace srfbm {

using Rational = boost::rational<long long>;

/// Cells of the (d, H) classification used by the scaling bounds.
enum class Regime {
  dh_lt_1,          // dH < 1
  dh_eq_1_bm2d,     // dH = 1, d = 2, H = 1/2
  dh_eq_1_small_h,  // dH = 1, H < 1/2
  dh_gt_1_large_h,  // dH > 1, H >= 1/2
  dh_gt_1_small_h,  // dH > 1, H < 1/2
};

const char* to_string(Regime regime) noexcept;

/// dH = 1 and H = 1/2 are decided with a 1e-12 tolerance so that H = 1/3
/// entered as a decimal lands on the boundary.
Regime classify_regime(int dim, double hurst);
Regime classify_regime(int dim, Rational hurst);

/// beta^a for 0 < beta <= 1, beta^b for beta > 1.
double beta_power(double beta, double a, double b);

struct ScalingPrediction {
  double gamma = 0.0;
  double F = 0.0;
  double r_lower = 0.0;
  double r_upper = 0.0;
  double nu_conjectured = 0.0;
  Regime regime = Regime::dh_lt_1;
};

/// gamma_{d,H}(beta), F_{d,H}(T) and the radius bounds
/// r_lower = (beta T^2 / (gamma F))^{1/d}, r_upper = (gamma T^{2H} F)^{1/2}.
/// Requires T > e.
ScalingPrediction scaling_prediction(int dim, double hurst, double beta, double horizon);

/// T^power (log T)^log_power.
struct TExponent {
  Rational power{0};
  Rational log_power{0};

  friend bool operator==(const TExponent&, const TExponent&) = default;
};

/// Exact growth of F_{d,H}(T).
TExponent F_exponent(int dim, Rational hurst);

struct BoundExponents {
  TExponent lower;
  TExponent upper;
};

/// Exact T-exponents of r_lower and r_upper.
BoundExponents bound_exponents(int dim, Rational hurst);

/// Conjectured radius exponent 2(1+H)/(2+d).
Rational nu_conjectured(int dim, Rational hurst);

struct LemmaConstants {
  double c_lower_tail = 0.0;      // 9 Gamma(1+d/2) / (2^{5+d} pi^{d/2})
  double unit_ball_volume = 0.0;  // K_d
};

LemmaConstants lemma_constants(int dim);

/// Stand-in values for the constants whose existence is proven but whose
/// value is not. Never paper values.
struct ExistentialPlaceholders {
  double c_log_partition = 1.0;  // lower bound constant for log Z_T
  double c_gaussian_tail = 1.0;  // upper-tail Gaussian constant
};

struct TheoremConstants {
  std::string c_lower_formula;
  std::string c_upper_formula;
  double c_lower = 0.0;
  double c_upper = 0.0;
  bool evaluated_from_placeholders = true;
};

/// C_* = (C_lt / (2 C_zt))^{1/d}, C^* = (2 C_zt / C_gt)^{1/2}. Throws
/// std::invalid_argument when no placeholders are supplied.
TheoremConstants theorem_constants(int dim, double hurst, const std::optional<ExistentialPlaceholders>& placeholders);

/// A rate known only up to a multiplicative constant, reported with that
/// constant set to one.
struct UpToConstant {
  double value = 0.0;
  static constexpr bool leading_constant_is_one = true;
};

/// Upper bound for the energy term under the drifted measure.
UpToConstant rate_I1_star(int dim, double hurst, double beta, double horizon, double lambda);

/// Exact: C_H lambda^2 T^{2(1-H)} / 2.
double rate_I2_star(double hurst, double lambda, double horizon);

}  // namespace srfbm
