#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "thinmach/grid.hpp"

namespace thinmach {

/// Barotropic pressure law p(rho) around a reference density rho_tilde.
///
/// gamma laws p = coefficient * rho^gamma and the linear law carry closed forms for the
/// pressure potential P; other laws evaluate P by adaptive Gauss-Kronrod quadrature.
class PressureLaw {
 public:
  using Function = std::function<double(double)>;

  static PressureLaw gamma_law(double gamma, double coefficient = 1.0, double rho_tilde = 1.0);
  /// p = coefficient * rho (isothermal); P = coefficient * rho * ln(rho / rho_tilde).
  static PressureLaw linear_law(double coefficient, double rho_tilde = 1.0);
  /// Arbitrary law; `gamma` is only the exponent used by the growth hypothesis.
  static PressureLaw general(std::string name, Function p, Function dp, double gamma,
                             double rho_tilde = 1.0);

  const std::string& name() const { return name_; }
  double gamma() const { return gamma_; }
  double coefficient() const { return coefficient_; }
  double rho_tilde() const { return rho_tilde_; }
  /// Square of the reference sound speed, p'(rho_tilde).
  double a2() const { return dpressure(rho_tilde_); }
  /// True when P is evaluated in closed form (gamma and linear laws).
  bool closed_form() const { return closed_form_ || linear_; }

  double pressure(double rho) const;
  double dpressure(double rho) const;
  double sound_speed(double rho) const;

  /// P(rho) = rho * int_{rho_tilde}^{rho} p(z)/z^2 dz.
  double potential(double rho) const;
  /// P'(rho) = (P(rho) + p(rho)) / rho.
  double potential_derivative(double rho) const;
  /// P''(rho) = p'(rho) / rho.
  double potential_second_derivative(double rho) const;
  /// H(rho, r) = P(rho) - P'(r)(rho - r) - P(r); nonnegative, zero iff rho == r.
  double helmholtz(double rho, double r) const;

 private:
  PressureLaw() = default;

  std::string name_;
  double gamma_ = 2.0;
  double coefficient_ = 1.0;
  double rho_tilde_ = 1.0;
  bool closed_form_ = false;
  bool linear_ = false;
  Function p_;
  Function dp_;
};

double potential_P(const PressureLaw& law, double rho);
double helmholtz_H(const PressureLaw& law, double rho, double r);

struct HypothesisReport {
  bool passed = true;
  double min_dpressure = 0.0;
  /// sup of p/P over the large samples (finite-sample surrogate of P_inf).
  double sup_p_over_P = 0.0;
  /// inf of p/rho^gamma over the large samples (surrogate of p_inf).
  double inf_p_over_rho_gamma = 0.0;
  std::vector<double> failing_samples;
  std::string failure;
};

/// Finite-sample surrogate of the admissibility hypotheses on p; "large" samples are rho > 2 rho_tilde
/// (or the largest sample when there are none).
HypothesisReport check_hypotheses(const PressureLaw& law, const std::vector<double>& samples);

/// Smooth cutoff psi: 1 on [rho_tilde/2, 2 rho_tilde], 0 outside [rho_tilde/4, 4 rho_tilde],
/// quintic smoothstep transitions.
struct CutoffPsi {
  double lower = 0.5;
  double upper = 2.0;
  double support_lower = 0.25;
  double support_upper = 4.0;

  static CutoffPsi around(double rho_tilde);
  double operator()(double rho) const;
};

struct EssResSplit {
  ScalarField3D essential;
  ScalarField3D residual;
};

/// [h]_ess = psi(rho) h and [h]_res = h - [h]_ess, cell by cell.
EssResSplit ess_res_split(const CutoffPsi& psi, const ScalarField3D& rho, const ScalarField3D& payload);

}  // namespace thinmach
