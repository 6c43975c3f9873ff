#pragma once

#include <vector>

#include "thinmach/grid.hpp"
#include "thinmach/pressure.hpp"
#include "thinmach/spectral.hpp"

namespace thinmach {

/// Spectral state (s, Psi) of the scaled acoustic system
///   eps d_t s + rho_tilde Lap Psi = 0,   eps d_t Psi + (a^2/rho_tilde) s = 0.
/// The mean of Psi is a gauge and is held fixed.
struct AcousticState2D {
  SpectralField2D s_hat;
  SpectralField2D psi_hat;
  double time = 0.0;
  double epsilon = 1.0;
  double rho_tilde = 1.0;
  double a2 = 1.0;

  const Grid2D& grid() const { return s_hat.grid(); }
};

AcousticState2D make_acoustic_state(const ScalarField2D& s0, const ScalarField2D& psi0, double epsilon,
                                    const PressureLaw& law);

/// Spectral cut-off at |k| <= K(eta) = ceil(1/eta) (physical wavenumber).
struct RegularizationParams {
  double eta = 1.0;
  int cutoff_wavenumber() const;
};

SpectralField2D regularize(const SpectralField2D& f, const RegularizationParams& params);
ScalarField2D regularize(const ScalarField2D& f, const RegularizationParams& params);

/// Exact solution after an additional time t (any sign): every Fourier mode rotates at a|k|/eps.
AcousticState2D propagate(const AcousticState2D& state, double t);

/// Integral of (1/2)[a^2 |s|^2 + rho_tilde^2 |grad Psi|^2] over the torus.
double acoustic_energy(const AcousticState2D& state);

/// Physical-space views of the state.
ScalarField2D density_perturbation(const AcousticState2D& state);
ScalarField2D potential(const AcousticState2D& state);
VectorField2D potential_gradient(const AcousticState2D& state);

/// True when p in (2, inf), q in (4, inf) and 2/q = 1/2 - 1/p.
bool dispersive_exponents_admissible(double q, double p);

struct DispersiveResult {
  double value = 0.0;  ///< ||Psi||_{L^q W^{k,p}} + ||s||_{L^q W^{k,p}}
  double psi_norm = 0.0;
  double s_norm = 0.0;
  double max_frequency = 0.0;
  bool undersampled = false;  ///< max_frequency * horizon/samples > pi/4
  std::vector<double> times;
  std::vector<double> psi_spatial;
  std::vector<double> s_spatial;
};

/// Samples the propagated state at `samples` equispaced times on [0, horizon] and returns the
/// L^q-in-time norms of the W^{k,p} norms of Psi and s. Unless `allow_any_exponents`, (q, p)
/// must satisfy the dispersive scaling relation.
DispersiveResult dispersive_norms(const AcousticState2D& initial, double horizon, int samples, double q,
                                  double p, int k, bool allow_any_exponents = false);

}  // namespace thinmach
