#include "thinmach/acoustic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace thinmach {

AcousticState2D make_acoustic_state(const ScalarField2D& s0, const ScalarField2D& psi0, double epsilon,
                                    const PressureLaw& law) {
  if (!(s0.grid() == psi0.grid())) throw Error(ErrorKind::grid_mismatch, "s0 and Psi0 grids differ");
  if (!(epsilon > 0.0)) throw Error(ErrorKind::invalid_argument, "epsilon must be positive");
  const double a2 = law.a2();
  if (!(a2 > 0.0)) throw Error(ErrorKind::hypothesis_violated, "p'(rho_tilde) must be positive");
  Fft2D fft(s0.grid());
  return AcousticState2D{fft.forward(s0), fft.forward(psi0), 0.0, epsilon, law.rho_tilde(), a2};
}

int RegularizationParams::cutoff_wavenumber() const {
  if (!(eta > 0.0)) throw Error(ErrorKind::invalid_argument, "eta must be positive");
  return static_cast<int>(std::ceil(1.0 / eta - 1e-12));
}

SpectralField2D regularize(const SpectralField2D& f, const RegularizationParams& params) {
  const double K = params.cutoff_wavenumber();
  const Grid2D& g = f.grid();
  SpectralField2D out = f;
  for (int i = 0; i < g.nx; ++i) {
    const double kx = wavenumber_x(g, i);
    for (int j = 0; j < f.nky(); ++j) {
      const double ky = wavenumber_y(g, j);
      if (kx * kx + ky * ky > K * K * (1.0 + 1e-12)) out[out.index(i, j)] = 0.0;
    }
  }
  return out;
}

ScalarField2D regularize(const ScalarField2D& f, const RegularizationParams& params) {
  Fft2D fft(f.grid());
  return fft.inverse(regularize(fft.forward(f), params));
}

AcousticState2D propagate(const AcousticState2D& state, double t) {
  const Grid2D& g = state.grid();
  const double a = std::sqrt(state.a2);
  AcousticState2D out = state;
  out.time = state.time + t;
  for (int i = 0; i < g.nx; ++i) {
    const double kx = wavenumber_x(g, i);
    for (int j = 0; j < state.s_hat.nky(); ++j) {
      const double ky = wavenumber_y(g, j);
      const double k = std::hypot(kx, ky);
      if (k == 0.0) continue;
      const double theta = a * k / state.epsilon * t;
      const double c = std::cos(theta), s = std::sin(theta);
      const std::size_t n = state.s_hat.index(i, j);
      const Complex s0 = state.s_hat[n], p0 = state.psi_hat[n];
      out.s_hat[n] = c * s0 + (state.rho_tilde * k / a) * s * p0;
      out.psi_hat[n] = c * p0 - (a / (state.rho_tilde * k)) * s * s0;
    }
  }
  return out;
}

double acoustic_energy(const AcousticState2D& state) {
  const Grid2D& g = state.grid();
  const double rt2 = state.rho_tilde * state.rho_tilde;
  double sum = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    const double kx = wavenumber_x(g, i);
    for (int j = 0; j < state.s_hat.nky(); ++j) {
      const double ky = wavenumber_y(g, j);
      const std::size_t n = state.s_hat.index(i, j);
      sum += hermitian_weight(g, j) *
             (state.a2 * std::norm(state.s_hat[n]) + rt2 * (kx * kx + ky * ky) * std::norm(state.psi_hat[n]));
    }
  }
  return 0.5 * g.area() * sum;
}

ScalarField2D density_perturbation(const AcousticState2D& state) {
  Fft2D fft(state.grid());
  return fft.inverse(state.s_hat);
}

ScalarField2D potential(const AcousticState2D& state) {
  Fft2D fft(state.grid());
  return fft.inverse(state.psi_hat);
}

VectorField2D potential_gradient(const AcousticState2D& state) {
  Fft2D fft(state.grid());
  VectorField2D out(state.grid());
  fft.inverse(derivative(state.psi_hat, 1, 0).coeffs(), out.comp(0));
  fft.inverse(derivative(state.psi_hat, 0, 1).coeffs(), out.comp(1));
  return out;
}

bool dispersive_exponents_admissible(double q, double p) {
  if (!(p > 2.0) || std::isinf(p)) return false;
  if (!(q > 4.0) || std::isinf(q)) return false;
  return std::abs(2.0 / q - (0.5 - 1.0 / p)) <= 1e-12;
}

DispersiveResult dispersive_norms(const AcousticState2D& initial, double horizon, int samples, double q,
                                  double p, int k, bool allow_any_exponents) {
  if (samples < 2) throw Error(ErrorKind::insufficient_samples, "dispersive_norms needs >= 2 samples");
  if (!(horizon > 0.0)) throw Error(ErrorKind::invalid_argument, "horizon must be positive");
  if (!allow_any_exponents && !dispersive_exponents_admissible(q, p))
    throw Error(ErrorKind::invalid_argument, "(q, p) violate 2/q = 1/2 - 1/p with p > 2, q > 4");

  const Grid2D& g = initial.grid();
  DispersiveResult r;
  const double a = std::sqrt(initial.a2);
  double cmax = 0.0;
  for (std::size_t n = 0; n < initial.s_hat.size(); ++n)
    cmax = std::max({cmax, std::abs(initial.s_hat[n]), std::abs(initial.psi_hat[n])});
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < initial.s_hat.nky(); ++j) {
      const std::size_t n = initial.s_hat.index(i, j);
      if (std::max(std::abs(initial.s_hat[n]), std::abs(initial.psi_hat[n])) > 1e-14 * cmax)
        r.max_frequency = std::max(
            r.max_frequency, a * std::hypot(wavenumber_x(g, i), wavenumber_y(g, j)) / initial.epsilon);
    }
  r.undersampled = r.max_frequency * (horizon / samples) > std::numbers::pi / 4.0;

  Fft2D fft(g);
  for (int n = 0; n < samples; ++n) {
    const double t = horizon * n / (samples - 1);
    const auto st = propagate(initial, t);
    r.times.push_back(t);
    r.psi_spatial.push_back(spectral_norm(st.psi_hat, p, k, fft));
    r.s_spatial.push_back(spectral_norm(st.s_hat, p, k, fft));
  }
  r.psi_norm = time_norm(r.times, r.psi_spatial, q);
  r.s_norm = time_norm(r.times, r.s_spatial, q);
  r.value = r.psi_norm + r.s_norm;
  return r;
}

}  // namespace thinmach
