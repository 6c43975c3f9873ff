#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "thinmach/compressible.hpp"
#include "thinmach/grid.hpp"
#include "thinmach/incompressible.hpp"
#include "thinmach/pressure.hpp"

namespace thinmach {

/// amplitude * cos(2 pi (n1 x1 + n2 x2) / L + phase)
struct Mode {
  int n1 = 0;
  int n2 = 0;
  double amplitude = 0.0;
  double phase = 0.0;
};

/// Band-limited profile; multiplied by the support window when built.
struct Profile {
  std::vector<Mode> modes;

  bool empty() const { return modes.empty(); }
  double operator()(double x1, double x2, double L) const;
};

/// Streamfunction whose unwindowed velocity is the shear (amplitude sin(2 pi n x2 / L), 0).
Profile shear_streamfunction(double amplitude, int n, double L);

enum class DataKind { well_prepared, ill_prepared };
const char* to_string(DataKind kind);
DataKind data_kind_from_string(const std::string& name);

/// Central box of side support_fraction * L carrying the smooth window; the window
/// rises over taper_fraction of the box side at each edge and vanishes identically outside.
/// taper_fraction = 0 with support_fraction = 1 disables the window (full torus).
struct SupportBox {
  double support_fraction = 0.5;
  double taper_fraction = 0.25;

  double window(double x1, double x2, double L) const;
  bool contains(double x1, double x2, double L) const;
};

/// Recipe for initial data: the limit velocity enters through a windowed streamfunction, so
/// v0 = grad^perp(window * stream) is exactly solenoidal and compactly supported.
struct DataRecipe {
  DataKind kind = DataKind::well_prepared;
  Profile v0_stream;
  Profile s0;
  Profile psi0;
  double epsilon = 1.0;
  double eta = 0.25;
  SupportBox support;

  void validate() const;
};

/// Recipe with every mode amplitude multiplied by (1 + relative * xi), xi uniform in [-1, 1]
/// drawn from a 64-bit Mersenne twister seeded with `seed` (portable across platforms).
DataRecipe perturbed(const DataRecipe& recipe, std::uint64_t seed, double relative);

/// Horizontal fields of the recipe on a 2D grid.
struct InitialFields2D {
  ScalarField2D s0;      ///< regularized density perturbation s_{0,eta}
  ScalarField2D psi0;    ///< regularized acoustic potential Psi_{0,eta}
  VectorField2D v0;      ///< solenoidal limit velocity
  VectorField2D ubar0;   ///< v0 + grad Psi_{0,eta}
  ScalarField2D rhobar0; ///< rho_tilde + eps s_{0,eta}
};

InitialFields2D build_initial_2d(const DataRecipe& recipe, const Grid2D& grid, const PressureLaw& law);

/// x3-independent layer data rho = rho_tilde + eps s_{0,eta}, m = rho (ubar0, 0).
/// Rejects recipes whose density would not stay positive.
FluidState3D build_initial_3d(const DataRecipe& recipe, const Grid3D& grid, const PressureLaw& law);

/// The solenoidal v0 (the acoustic gradient is left to the acoustic solver).
IncompressibleState2D limit_initial_2d(const DataRecipe& recipe, const Grid2D& grid);

/// (1/delta) int (1/2) rho |m/rho - u0|^2 + eps^-2 H(rho, rho0) over the layer, with (rho0, u0) from the recipe.
double convergence_hypothesis_value(const FluidState3D& state, const DataRecipe& recipe,
                                    const PressureLaw& law, double epsilon, double delta);

}  // namespace thinmach
