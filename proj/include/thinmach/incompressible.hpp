#pragma once

#include <memory>

#include "thinmach/grid.hpp"
#include "thinmach/spectral.hpp"

namespace thinmach {

/// Vorticity of a periodic 2D incompressible flow, held spectrally (mean zero).
/// The velocity v = (-d2 psi, d1 psi) with Laplacian(psi) = omega is divergence free by construction.
struct IncompressibleState2D {
  SpectralField2D omega_hat;
  double time = 0.0;
  /// Set by euler_step when more than 1e-3 of the energy sits in the top third of the retained band.
  bool under_resolved = false;

  const Grid2D& grid() const { return omega_hat.grid(); }
};

/// Divergence-free part of a periodic field: u_hat - k (k . u_hat)/|k|^2, mean kept.
VectorField2D helmholtz_project(const VectorField2D& u);

/// Spectral divergence of a periodic vector field.
ScalarField2D spectral_divergence(const VectorField2D& u);

/// Pseudo-spectral 2/3-dealiased RK4 integrator for d_t omega + v . grad omega = 0.
/// Owns its FFT scratch; use one instance per thread.
class IncompressibleSolver {
 public:
  explicit IncompressibleSolver(const Grid2D& grid);

  const Grid2D& grid() const { return grid_; }

  IncompressibleState2D from_vorticity(const ScalarField2D& omega, double time = 0.0);
  /// Vorticity of u (curl); any gradient part of u is discarded.
  IncompressibleState2D from_velocity(const VectorField2D& u, double time = 0.0);

  ScalarField2D vorticity(const IncompressibleState2D& s);
  VectorField2D velocity(const IncompressibleState2D& s);
  SpectralField2D streamfunction(const IncompressibleState2D& s) const;
  double max_speed(const IncompressibleState2D& s);
  /// cfl * min(dx, dy) / max|v|; infinite for a fluid at rest.
  double stable_dt(const IncompressibleState2D& s, double cfl);

  IncompressibleState2D euler_step(const IncompressibleState2D& s, double dt);
  /// Mean-zero Pi with Laplacian(Pi) = -div(v . grad v).
  ScalarField2D recover_pressure(const IncompressibleState2D& s);
  /// d_t v = -v . grad v - grad Pi.
  VectorField2D velocity_time_derivative(const IncompressibleState2D& s);
  /// Fraction of kinetic energy in the highest third of the dealiased band.
  double high_band_fraction(const IncompressibleState2D& s) const;

  /// Advances to t_end with steps no larger than the CFL bound and `max_dt`, landing exactly on t_end.
  IncompressibleState2D advance(const IncompressibleState2D& s, double t_end, double cfl, double max_dt);

 private:
  SpectralField2D rhs(const SpectralField2D& omega_hat);
  bool retained(int i, int j) const;

  Grid2D grid_;
  Fft2D fft_;
};

IncompressibleState2D euler_step(const IncompressibleState2D& state, double dt);
ScalarField2D recover_pressure(const IncompressibleState2D& state);

}  // namespace thinmach
