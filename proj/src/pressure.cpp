#include "thinmach/pressure.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace thinmach {

PressureLaw PressureLaw::gamma_law(double gamma, double coefficient, double rho_tilde) {
  if (!(gamma > 1.0)) throw Error(ErrorKind::invalid_argument, "gamma law needs gamma > 1");
  if (!(rho_tilde > 0.0)) throw Error(ErrorKind::invalid_argument, "rho_tilde must be positive");
  PressureLaw law;
  law.name_ = "gamma";
  law.gamma_ = gamma;
  law.coefficient_ = coefficient;
  law.rho_tilde_ = rho_tilde;
  law.closed_form_ = true;
  return law;
}

PressureLaw PressureLaw::linear_law(double coefficient, double rho_tilde) {
  auto law = general(
      "linear", [coefficient](double rho) { return coefficient * rho; },
      [coefficient](double) { return coefficient; }, 1.0, rho_tilde);
  law.coefficient_ = coefficient;
  law.linear_ = true;
  return law;
}

PressureLaw PressureLaw::general(std::string name, Function p, Function dp, double gamma,
                                 double rho_tilde) {
  if (!(rho_tilde > 0.0)) throw Error(ErrorKind::invalid_argument, "rho_tilde must be positive");
  PressureLaw law;
  law.name_ = std::move(name);
  law.gamma_ = gamma;
  law.rho_tilde_ = rho_tilde;
  law.closed_form_ = false;
  law.p_ = std::move(p);
  law.dp_ = std::move(dp);
  return law;
}

double PressureLaw::pressure(double rho) const {
  if (closed_form_) return gamma_ == 2.0 ? coefficient_ * rho * rho : coefficient_ * std::pow(rho, gamma_);
  return p_(rho);
}

double PressureLaw::dpressure(double rho) const {
  if (closed_form_)
    return gamma_ == 2.0 ? 2.0 * coefficient_ * rho
                         : coefficient_ * gamma_ * std::pow(rho, gamma_ - 1.0);
  return dp_(rho);
}

double PressureLaw::sound_speed(double rho) const { return std::sqrt(dpressure(rho)); }

double PressureLaw::potential(double rho) const {
  if (rho < 0.0) throw Error(ErrorKind::invalid_argument, "P(rho) needs rho >= 0");
  if (closed_form_) {
    const double rt = std::pow(rho_tilde_, gamma_ - 1.0);
    return coefficient_ * (std::pow(rho, gamma_) - rho * rt) / (gamma_ - 1.0);
  }
  if (rho == 0.0) return 0.0;
  if (rho == rho_tilde_) return 0.0;
  if (linear_) return coefficient_ * rho * std::log(rho / rho_tilde_);
  // int p(z)/z^2 dz in the variable s = ln z: smooth over many decades of rho.
  auto integrand = [this](double s) {
    const double z = std::exp(s);
    return p_(z) / z;
  };
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, std::log(rho_tilde_), std::log(rho), 12, 1e-13);
  return rho * integral;
}

double PressureLaw::potential_derivative(double rho) const {
  if (closed_form_) {
    const double rt = std::pow(rho_tilde_, gamma_ - 1.0);
    return coefficient_ * (gamma_ * std::pow(rho, gamma_ - 1.0) - rt) / (gamma_ - 1.0);
  }
  if (linear_) return coefficient_ * (std::log(rho / rho_tilde_) + 1.0);
  return (potential(rho) + pressure(rho)) / rho;
}

double PressureLaw::potential_second_derivative(double rho) const { return dpressure(rho) / rho; }

namespace {

// (1+x)^g - 1 - g x, accurate for small |x|.
double bregman_power(double g, double x) {
  if (std::abs(x) < 1e-2) {
    double term = g * (g - 1.0) / 2.0 * x * x;
    double sum = term;
    for (int n = 3; n <= 14; ++n) {
      term *= (g - n + 1.0) / n * x;
      sum += term;
    }
    return sum;
  }
  return std::expm1(g * std::log1p(x)) - g * x;
}

}  // namespace

double PressureLaw::helmholtz(double rho, double r) const {
  if (closed_form_) {
    if (gamma_ == 2.0) return coefficient_ * (rho - r) * (rho - r);
    if (rho == 0.0) return coefficient_ * std::pow(r, gamma_);  // P(0) - P'(r)(-r) - P(r) = r^g
    return coefficient_ / (gamma_ - 1.0) * std::pow(r, gamma_) * bregman_power(gamma_, (rho - r) / r);
  }
  if (linear_) return coefficient_ * ((rho == 0.0 ? 0.0 : rho * std::log(rho / r)) - rho + r);
  return potential(rho) - potential_derivative(r) * (rho - r) - potential(r);
}

double potential_P(const PressureLaw& law, double rho) { return law.potential(rho); }
double helmholtz_H(const PressureLaw& law, double rho, double r) { return law.helmholtz(rho, r); }

HypothesisReport check_hypotheses(const PressureLaw& law, const std::vector<double>& samples) {
  if (samples.empty())
    throw Error(ErrorKind::invalid_argument, "check_hypotheses needs at least one sample");
  HypothesisReport report;
  report.min_dpressure = std::numeric_limits<double>::infinity();
  report.inf_p_over_rho_gamma = std::numeric_limits<double>::infinity();
  std::ostringstream all;

  const double rt = law.rho_tilde();
  const double largest = *std::max_element(samples.begin(), samples.end());
  for (double rho : samples) {
    if (!(rho > 0.0)) throw Error(ErrorKind::invalid_argument, "sample densities must be positive");
    std::ostringstream msg;
    const double dp = law.dpressure(rho);
    report.min_dpressure = std::min(report.min_dpressure, dp);
    bool failed = false;
    if (!(dp > 0.0)) {
      msg << "p'(" << rho << ") = " << dp << " <= 0; ";
      failed = true;
    }
    const bool large = rho > 2.0 * rt || rho == largest;
    if (large) {
      const double p = law.pressure(rho);
      const double P = law.potential(rho);
      const double ratio = P > 0.0 ? p / P : std::numeric_limits<double>::infinity();
      report.sup_p_over_P = std::max(report.sup_p_over_P, ratio);
      if (!std::isfinite(ratio)) {
        msg << "p/P unbounded at rho = " << rho << "; ";
        failed = true;
      }
      const double growth = p / std::pow(rho, law.gamma());
      report.inf_p_over_rho_gamma = std::min(report.inf_p_over_rho_gamma, growth);
      if (!(growth > 0.0) || !(law.gamma() > 1.0)) {
        msg << "p/rho^gamma = " << growth << " (gamma = " << law.gamma() << ") at rho = " << rho
            << "; ";
        failed = true;
      }
    }
    if (failed) {
      if (report.failing_samples.size() < 3) all << msg.str();
      report.failing_samples.push_back(rho);
    }
  }
  report.passed = report.failing_samples.empty();
  if (report.failing_samples.size() > 3)
    all << "(" << report.failing_samples.size() - 3 << " more failing samples)";
  report.failure = all.str();
  return report;
}

CutoffPsi CutoffPsi::around(double rho_tilde) {
  return CutoffPsi{0.5 * rho_tilde, 2.0 * rho_tilde, 0.25 * rho_tilde, 4.0 * rho_tilde};
}

namespace {
double smoothstep5(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}
}  // namespace

double CutoffPsi::operator()(double rho) const {
  if (rho >= lower && rho <= upper) return 1.0;
  if (rho <= support_lower || rho >= support_upper) return 0.0;
  if (rho < lower) return smoothstep5((rho - support_lower) / (lower - support_lower));
  return smoothstep5((support_upper - rho) / (support_upper - upper));
}

EssResSplit ess_res_split(const CutoffPsi& psi, const ScalarField3D& rho, const ScalarField3D& payload) {
  if (!(rho.grid() == payload.grid()))
    throw Error(ErrorKind::grid_mismatch, "ess_res_split: density and payload grids differ");
  EssResSplit out{ScalarField3D(rho.grid()), ScalarField3D(rho.grid())};
  for (std::size_t n = 0; n < rho.cells(); ++n) {
    const double w = psi(rho[n]);
    out.essential[n] = w * payload[n];
    out.residual[n] = payload[n] - out.essential[n];
  }
  return out;
}

}  // namespace thinmach
