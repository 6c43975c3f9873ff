#pragma once

#include <cstddef>

namespace thinmach::kernels {

enum class Isa { scalar, avx2 };

const char* name(Isa isa);
/// Best instruction set the running CPU supports (and this build was compiled for).
Isa detect();
/// The ISA used by the solvers: detect(), unless overridden by set_active() or the
/// THINMACH_KERNELS=scalar|avx2 environment variable.
Isa active();
void set_active(Isa isa);
bool available(Isa isa);

/// Structure-of-arrays cell states as seen from a face: normal momentum, the two
/// tangential momenta, and the precomputed pressure and sound speed.
struct CellArrays {
  const double* rho;
  const double* mn;
  const double* mt1;
  const double* mt2;
  const double* p;
  const double* c;
};

struct FluxArrays {
  double* rho;
  double* mn;
  double* mt1;
  double* mt2;
};

/// Scales entering the face flux.
///   pressure_scale: 1/eps^2 multiplying p in the momentum flux.
///   acoustic_scale: multiplies c in the wave speed that dissipates density jumps (1/eps).
///   velocity_scale: multiplies c in the wave speed that dissipates velocity jumps.
/// velocity_scale == acoustic_scale reproduces the Rusanov flux.
struct FluxCoefficients {
  double pressure_scale;
  double acoustic_scale;
  double velocity_scale;
};

/// Flux through n consecutive faces whose left states are `left[i]` and right states `right[i]`.
void face_fluxes(Isa isa, const CellArrays& left, const CellArrays& right, const FluxArrays& out,
                 std::size_t n, const FluxCoefficients& coef);

/// residual[i] -= (flux[i + stride] - flux[i]) * inv_h for i in [0, n).
void accumulate_divergence(Isa isa, double* residual, const double* flux, std::ptrdiff_t stride,
                           double inv_h, std::size_t n);

namespace scalar {
void face_fluxes(const CellArrays& left, const CellArrays& right, const FluxArrays& out,
                 std::size_t n, const FluxCoefficients& coef);
void accumulate_divergence(double* residual, const double* flux, std::ptrdiff_t stride,
                           double inv_h, std::size_t n);
}  // namespace scalar

namespace avx2 {
void face_fluxes(const CellArrays& left, const CellArrays& right, const FluxArrays& out,
                 std::size_t n, const FluxCoefficients& coef);
void accumulate_divergence(double* residual, const double* flux, std::ptrdiff_t stride,
                           double inv_h, std::size_t n);
}  // namespace avx2

}  // namespace thinmach::kernels
