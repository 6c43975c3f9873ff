#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "thinmach/acoustic.hpp"
#include "thinmach/compressible.hpp"
#include "thinmach/incompressible.hpp"
#include "thinmach/pressure.hpp"

namespace thinmach {

/// Smooth reference (r, U) for the relative energy. Both are x3-independent, so they are
/// stored on the horizontal grid and lifted column by column; the vertical component of U is zero.
struct ReferencePair {
  ScalarField2D r;
  VectorField2D U;

  ReferencePair() = default;
  ReferencePair(ScalarField2D r_, VectorField2D U_);
  /// (rho_tilde, 0) on `grid`.
  static ReferencePair rest(const Grid2D& grid, double rho_tilde);
  const Grid2D& grid() const { return r.grid(); }
};

/// Axis-aligned horizontal box [x0, x1] x [y0, y1]; a cell belongs to it when its centre does.
struct HorizontalBox {
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;

  /// Centred box of side fraction * L.
  static HorizontalBox central(double L, double fraction);
  bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

struct RelativeEnergyReport {
  double value = 0.0;
  double kinetic_part = 0.0;
  double pressure_part = 0.0;
  double ess_pressure = 0.0;
  double res_pressure = 0.0;
  double dissipation_defect = 0.0;
  double time = 0.0;
};

/// Empirical Young measure: equally weighted states on one grid at one time.
struct EnsembleMeasure {
  std::vector<FluidState3D> members;

  void validate() const;
  const Grid3D& grid() const { return members.front().grid(); }
  double time() const { return members.front().time; }
};

/// (1/delta) sum over cells of [ (1/2) rho |m/rho - U|^2 + eps^-2 H(rho, r) ] * cell volume,
/// restricted to columns whose centre lies in `restrict_to` when given. The pressure part is
/// split with `psi` evaluated at rho. dissipation_defect is left at 0 (filled by the harness).
RelativeEnergyReport relative_energy(const FluidState3D& state, const ReferencePair& ref,
                                     const PressureLaw& law, double epsilon, double delta,
                                     const std::optional<HorizontalBox>& restrict_to = std::nullopt);
RelativeEnergyReport relative_energy(const FluidState3D& state, const ReferencePair& ref,
                                     const PressureLaw& law, double epsilon, double delta,
                                     const std::optional<HorizontalBox>& restrict_to, const CutoffPsi& psi);
/// Ensemble mean of the member reports (fixed member order).
RelativeEnergyReport relative_energy(const EnsembleMeasure& measure, const ReferencePair& ref,
                                     const PressureLaw& law, double epsilon, double delta,
                                     const std::optional<HorizontalBox>& restrict_to = std::nullopt);

using Observable = std::function<double(double rho, const std::array<double, 3>& m)>;

/// Cell-wise <Y; G(rho, m)> as the ensemble mean. A non-finite value of G at a realized state
/// (for instance |m|^2/rho at vacuum) is reported as ErrorKind::invalid_state.
ScalarField3D ensemble_observable(const EnsembleMeasure& measure, const Observable& G);

/// The reference and the exact derivatives the remainder needs, at one instant, on the horizontal grid.
struct ReferenceSample {
  double time = 0.0;
  ReferencePair pair;
  VectorField2D dt_U;          ///< d_t v - (a^2 / (rho_tilde eps)) grad s
  std::array<ScalarField2D, 4> grad_U;  ///< d_j U_i stored at index 2 i + j
  ScalarField2D div_U;         ///< Laplacian(Psi)
  ScalarField2D dt_dP;         ///< d_t P'(r) = P''(r) (-rho_tilde Laplacian(Psi))
  VectorField2D grad_dP;       ///< grad P'(r) = P''(r) eps grad s
};

/// Builds r = rho_tilde + eps s and U = v + grad Psi from the acoustic and incompressible states
/// (which must be at the same time) with all derivatives taken spectrally or analytically.
ReferenceSample make_reference_sample(const AcousticState2D& acoustic, const IncompressibleState2D& flow,
                                      IncompressibleSolver& solver, const PressureLaw& law);

struct RemainderSeries {
  std::vector<double> times;
  std::vector<double> R1;  ///< (1/delta) R_1
  std::vector<double> R2;  ///< (1/delta) R_2
};

/// (1/delta) R_1 and (1/delta) R_2 at every snapshot; the concentration term R_3 is taken as zero.
/// Snapshot and reference times must agree to 1e-12 relative.
RemainderSeries remainder_terms(const SnapshotSeries<FluidState3D>& states,
                                const std::vector<ReferenceSample>& refs, const PressureLaw& law,
                                double epsilon, double delta);

/// Discrete uniform bounds on vertically averaged quantities:
///   rho_ess_norm  = || psi(rho) (rho - rho_tilde) / eps ||_L2, averaged in x3,
///   rho_res_norm  = || eps^(-2/gamma) (1 - psi(rho)) rho ||_{L^gamma}, averaged in x3,
///   mbar_norm     = || psi(rho) m ||_L2 + || (1 - psi(rho)) m ||_{L^{2 gamma/(gamma+1)}}, averaged in x3,
///   energy        = (1/delta) sum[(1/2)|m|^2/rho + eps^-2 H(rho, rho_tilde)] cell volume.
struct UniformBoundReport {
  double rho_ess_norm = 0.0;
  double rho_res_norm = 0.0;
  double mbar_norm = 0.0;
  double energy = 0.0;
};

UniformBoundReport uniform_bound_report(const FluidState3D& state, const PressureLaw& law, double epsilon,
                                        double delta, const CutoffPsi& psi);

}  // namespace thinmach
