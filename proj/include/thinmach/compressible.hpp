#pragma once

#include <array>
#include <limits>
#include <memory>
#include <vector>

#include "thinmach/grid.hpp"
#include "thinmach/pressure.hpp"

namespace thinmach {

/// Conserved fields (rho, m = rho u) on the thin layer at one instant.
struct FluidState3D {
  ScalarField3D rho;
  VectorField3D mom;
  double time = 0.0;

  FluidState3D() = default;
  explicit FluidState3D(const Grid3D& g, double rho0 = 1.0) : rho(g, rho0), mom(g, 0.0) {}

  const Grid3D& grid() const { return rho.grid(); }
};

/// Dissipation model of the face flux.
///   rusanov:  every jump is damped at max(|u.n| + c/eps).
///   low_mach: density jumps are damped at max(|u.n| + c/eps), velocity jumps at
///             max(|u.n| + c min(eps, 1/eps)); identical to rusanov at eps = 1.
enum class FluxScheme { rusanov, low_mach };

const char* to_string(FluxScheme scheme);
FluxScheme flux_scheme_from_string(const std::string& name);

struct SolverParams {
  double epsilon = 1.0;
  double cfl = 0.45;
  PressureLaw law = PressureLaw::gamma_law(2.0);
  double end_time = 0.0;
  double snapshot_interval = std::numeric_limits<double>::infinity();
  FluxScheme scheme = FluxScheme::low_mach;
  double wall_budget_seconds = std::numeric_limits<double>::infinity();

  /// Throws ErrorKind::invalid_argument naming the first violated constraint.
  void validate() const;
};

struct CellState {
  double rho = 1.0;
  std::array<double, 3> m{};
};

/// Face flux (mass, m1, m2, m3) across a face normal to `axis` (0, 1, 2).
std::array<double, 4> numerical_flux(const CellState& left, const CellState& right, int axis,
                                     const PressureLaw& law, double epsilon,
                                     FluxScheme scheme = FluxScheme::rusanov);

/// cfl * min over cells and axes of h / (|u_axis| + sqrt(p'(rho))/eps).
double stable_dt(const FluidState3D& state, const SolverParams& params);

struct Totals {
  double mass = 0.0;
  std::array<double, 3> momentum{};
  double energy = 0.0;
};

/// Discrete mass, momentum and energy sum((1/2)|m|^2/rho + H(rho, rho_tilde)/eps^2) * cell volume.
Totals totals(const FluidState3D& state, const PressureLaw& law, double epsilon);
double total_energy(const FluidState3D& state, const PressureLaw& law, double epsilon);

/// Reusable scratch for the finite-volume update (ghost-padded SoA arrays).
/// Not shareable between threads.
class CompressibleSolver {
 public:
  CompressibleSolver(const Grid3D& grid, SolverParams params);
  ~CompressibleSolver();
  CompressibleSolver(CompressibleSolver&&) noexcept;
  CompressibleSolver& operator=(CompressibleSolver&&) noexcept;

  const SolverParams& params() const { return params_; }
  double stable_dt(const FluidState3D& state) const;
  /// One SSP-RK2 step.
  FluidState3D step(const FluidState3D& state, double dt);

 private:
  struct Workspace;
  SolverParams params_;
  std::unique_ptr<Workspace> ws_;
};

FluidState3D step(const FluidState3D& state, const SolverParams& params, double dt);

struct ConservationRecord {
  double time = 0.0;
  Totals totals;
};

struct RunResult {
  SnapshotSeries<FluidState3D> snapshots;
  std::vector<ConservationRecord> log;
  long steps = 0;
  double wall_seconds = 0.0;
};

/// Advances to params.end_time, snapshotting at multiples of snapshot_interval and at end_time.
/// Throws ErrorKind::budget_exceeded if params.wall_budget_seconds runs out.
RunResult run(const FluidState3D& initial, const SolverParams& params);

/// D(tau) = (1/delta)(E_total(0) - E_total(tau)) at every snapshot time.
std::vector<double> dissipation_defect(const SnapshotSeries<FluidState3D>& series,
                                       const PressureLaw& law, double epsilon, double delta);

}  // namespace thinmach
