#include "thinmach/compressible.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "thinmach/kernels.hpp"

namespace thinmach {

namespace {
constexpr double kVacuum = 1e-10;
}

const char* to_string(FluxScheme scheme) {
  return scheme == FluxScheme::rusanov ? "rusanov" : "low_mach";
}

FluxScheme flux_scheme_from_string(const std::string& name) {
  if (name == "rusanov") return FluxScheme::rusanov;
  if (name == "low_mach") return FluxScheme::low_mach;
  throw Error(ErrorKind::config, "unknown flux scheme '" + name + "'");
}

void SolverParams::validate() const {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::invalid_argument, "epsilon must be positive");
  if (!(cfl > 0.0 && cfl < 1.0))
    throw Error(ErrorKind::invalid_argument, "CFL violation: cfl must lie in (0, 1)");
  if (!(end_time >= 0.0)) throw Error(ErrorKind::invalid_argument, "end_time must be >= 0");
  if (!(snapshot_interval > 0.0))
    throw Error(ErrorKind::invalid_argument, "snapshot_interval must be positive");
}

namespace {

kernels::FluxCoefficients flux_coefficients(double epsilon, FluxScheme scheme) {
  const double inv_eps = 1.0 / epsilon;
  const double vel = scheme == FluxScheme::rusanov ? inv_eps : std::min(epsilon, inv_eps);
  return {inv_eps * inv_eps, inv_eps, vel};
}

// Components passed as (normal, tangential 1, tangential 2) for each axis.
constexpr std::array<std::array<int, 3>, 3> kAxisOrder{{{0, 1, 2}, {1, 0, 2}, {2, 0, 1}}};

}  // namespace

std::array<double, 4> numerical_flux(const CellState& left, const CellState& right, int axis,
                                     const PressureLaw& law, double epsilon, FluxScheme scheme) {
  if (axis < 0 || axis > 2) throw Error(ErrorKind::invalid_argument, "axis must be 0, 1 or 2");
  if (!(left.rho > 0.0) || !(right.rho > 0.0))
    throw Error(ErrorKind::invalid_state, "numerical_flux needs positive densities");
  const auto& ord = kAxisOrder[axis];
  const double pl = law.pressure(left.rho), pr = law.pressure(right.rho);
  const double cl = law.sound_speed(left.rho), cr = law.sound_speed(right.rho);
  const kernels::CellArrays L{&left.rho, &left.m[ord[0]], &left.m[ord[1]], &left.m[ord[2]], &pl, &cl};
  const kernels::CellArrays R{&right.rho, &right.m[ord[0]], &right.m[ord[1]], &right.m[ord[2]], &pr, &cr};
  std::array<double, 4> f{};
  std::array<double, 3> fm{};
  kernels::scalar::face_fluxes(L, R, {&f[0], &fm[0], &fm[1], &fm[2]}, 1,
                               flux_coefficients(epsilon, scheme));
  for (int c = 0; c < 3; ++c) f[1 + ord[c]] = fm[c];
  return f;
}

double stable_dt(const FluidState3D& state, const SolverParams& params) {
  params.validate();
  const Grid3D& g = state.grid();
  const std::array<double, 3> h{g.dx(), g.dy(), g.dz()};
  for (double s : h)
    if (!(s > 0.0)) throw Error(ErrorKind::invalid_argument, "degenerate grid spacing");
  const double inv_eps = 1.0 / params.epsilon;
  double rate = 0.0;
  for (std::size_t n = 0; n < g.cells(); ++n) {
    const double rho = state.rho[n];
    if (!(rho > 0.0)) throw Error(ErrorKind::invalid_state, "stable_dt: non-positive density");
    const double c = params.law.sound_speed(rho) * inv_eps;
    for (int d = 0; d < 3; ++d) rate = std::max(rate, (std::abs(state.mom.at(d, n)) / rho + c) / h[d]);
  }
  if (!(rate > 0.0)) throw Error(ErrorKind::invalid_state, "stable_dt: no wave speed");
  return params.cfl / rate;
}

Totals totals(const FluidState3D& state, const PressureLaw& law, double epsilon) {
  const Grid3D& g = state.grid();
  const double vol = g.cell_volume();
  const double inv_eps2 = 1.0 / (epsilon * epsilon);
  const double rt = law.rho_tilde();
  Totals t;
  for (std::size_t n = 0; n < g.cells(); ++n) {
    const double rho = state.rho[n];
    const double m0 = state.mom.at(0, n), m1 = state.mom.at(1, n), m2 = state.mom.at(2, n);
    t.mass += rho;
    t.momentum[0] += m0;
    t.momentum[1] += m1;
    t.momentum[2] += m2;
    t.energy += 0.5 * (m0 * m0 + m1 * m1 + m2 * m2) / rho + law.helmholtz(rho, rt) * inv_eps2;
  }
  t.mass *= vol;
  for (auto& m : t.momentum) m *= vol;
  t.energy *= vol;
  return t;
}

double total_energy(const FluidState3D& state, const PressureLaw& law, double epsilon) {
  return totals(state, law, epsilon).energy;
}

struct CompressibleSolver::Workspace {
  Grid3D grid;
  int px, py, pz;
  std::ptrdiff_t sx, sy, sz;
  std::size_t total;
  // Padded conserved fields, pressure, sound speed.
  std::vector<double> rho, m0, m1, m2, p, c;
  // Face fluxes for one axis at a time.
  std::vector<double> frho, f0, f1, f2;
  // Residuals (padded layout; only interior entries are meaningful).
  std::vector<double> rrho, r0, r1, r2;

  explicit Workspace(const Grid3D& g)
      : grid(g), px(g.nx + 2), py(g.ny + 2), pz(g.nz + 2), sx(py * pz), sy(pz), sz(1),
        total(static_cast<std::size_t>(px) * py * pz) {
    for (auto* v : {&rho, &m0, &m1, &m2, &p, &c, &frho, &f0, &f1, &f2, &rrho, &r0, &r1, &r2})
      v->assign(total, 0.0);
  }

  std::size_t pad(int i, int j, int k) const {
    return (static_cast<std::size_t>(i + 1) * py + (j + 1)) * pz + (k + 1);
  }

  void load(const FluidState3D& s, const PressureLaw& law) {
    const Grid3D& g = grid;
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        const std::size_t src = g.index(i, j, 0);
        const std::size_t dst = pad(i, j, 0);
        for (int k = 0; k < g.nz; ++k) {
          rho[dst + k] = s.rho[src + k];
          m0[dst + k] = s.mom.at(0, src + k);
          m1[dst + k] = s.mom.at(1, src + k);
          m2[dst + k] = s.mom.at(2, src + k);
        }
        // Slip walls: mirror density and tangential momentum, negate normal momentum.
        const std::size_t lo = pad(i, j, -1), hi = pad(i, j, g.nz);
        rho[lo] = rho[lo + 1];
        m0[lo] = m0[lo + 1];
        m1[lo] = m1[lo + 1];
        m2[lo] = -m2[lo + 1];
        rho[hi] = rho[hi - 1];
        m0[hi] = m0[hi - 1];
        m1[hi] = m1[hi - 1];
        m2[hi] = -m2[hi - 1];
      }
    auto copy_run = [&](std::size_t dst, std::size_t src, std::size_t len) {
      for (auto* v : {&rho, &m0, &m1, &m2})
        std::copy_n(v->begin() + src, len, v->begin() + dst);
    };
    // Periodic in y (whole padded z-columns), then x (whole padded planes) so corners fill too.
    for (int i = 0; i < g.nx; ++i) {
      copy_run(pad(i, -1, -1), pad(i, g.ny - 1, -1), pz);
      copy_run(pad(i, g.ny, -1), pad(i, 0, -1), pz);
    }
    copy_run(pad(-1, -1, -1), pad(g.nx - 1, -1, -1), static_cast<std::size_t>(sx));
    copy_run(pad(g.nx, -1, -1), pad(0, -1, -1), static_cast<std::size_t>(sx));

    for (std::size_t n = 0; n < total; ++n) {
      p[n] = law.pressure(rho[n]);
      c[n] = law.sound_speed(rho[n]);
    }
  }

  // residual = -div F for interior cells.
  void residual(kernels::Isa isa, const kernels::FluxCoefficients& coef) {
    const std::size_t first = pad(0, 0, 0);
    const std::size_t last = pad(grid.nx - 1, grid.ny - 1, grid.nz - 1);
    const std::size_t ncell = last - first + 1;
    for (auto* v : {&rrho, &r0, &r1, &r2}) std::fill(v->begin(), v->end(), 0.0);

    const std::array<std::ptrdiff_t, 3> stride{sx, sy, sz};
    const std::array<double, 3> inv_h{1.0 / grid.dx(), 1.0 / grid.dy(), 1.0 / grid.dz()};
    const std::array<double*, 3> mom{m0.data(), m1.data(), m2.data()};
    const std::array<double*, 3> flux_mom{f0.data(), f1.data(), f2.data()};
    const std::array<double*, 3> res_mom{r0.data(), r1.data(), r2.data()};
    for (int d = 0; d < 3; ++d) {
      const auto s = stride[d];
      const auto& ord = kAxisOrder[d];
      const std::size_t nface = ncell + static_cast<std::size_t>(s);
      const std::size_t lft = first - static_cast<std::size_t>(s);
      const kernels::CellArrays L{rho.data() + lft, mom[ord[0]] + lft, mom[ord[1]] + lft,
                                  mom[ord[2]] + lft, p.data() + lft, c.data() + lft};
      const kernels::CellArrays R{rho.data() + first, mom[ord[0]] + first, mom[ord[1]] + first,
                                  mom[ord[2]] + first, p.data() + first, c.data() + first};
      const kernels::FluxArrays out{frho.data() + first, flux_mom[ord[0]] + first,
                                    flux_mom[ord[1]] + first, flux_mom[ord[2]] + first};
      kernels::face_fluxes(isa, L, R, out, nface, coef);
      kernels::accumulate_divergence(isa, rrho.data() + first, frho.data() + first, s, inv_h[d], ncell);
      for (int comp = 0; comp < 3; ++comp)
        kernels::accumulate_divergence(isa, res_mom[comp] + first, flux_mom[comp] + first, s,
                                       inv_h[d], ncell);
    }
  }
};

CompressibleSolver::CompressibleSolver(const Grid3D& grid, SolverParams params)
    : params_(std::move(params)), ws_(std::make_unique<Workspace>(grid)) {
  params_.validate();
}

CompressibleSolver::~CompressibleSolver() = default;
CompressibleSolver::CompressibleSolver(CompressibleSolver&&) noexcept = default;
CompressibleSolver& CompressibleSolver::operator=(CompressibleSolver&&) noexcept = default;

double CompressibleSolver::stable_dt(const FluidState3D& state) const {
  return thinmach::stable_dt(state, params_);
}

namespace {

void check_positivity(const FluidState3D& s, double cfl) {
  const Grid3D& g = s.grid();
  for (std::size_t n = 0; n < g.cells(); ++n) {
    if (!(s.rho[n] > kVacuum)) {
      std::ostringstream msg;
      msg << "density " << s.rho[n] << " at cell " << n << " (t = " << s.time
          << ") fell below the vacuum guard " << kVacuum << "; retry with cfl < " << cfl;
      throw Error(ErrorKind::positivity_loss, msg.str());
    }
  }
}

}  // namespace

FluidState3D CompressibleSolver::step(const FluidState3D& state, double dt) {
  Workspace& w = *ws_;
  if (!(state.grid() == w.grid)) throw Error(ErrorKind::grid_mismatch, "step: state grid differs");
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_argument, "step: dt must be positive");
  const auto isa = kernels::active();
  const auto coef = flux_coefficients(params_.epsilon, params_.scheme);
  const Grid3D& g = w.grid;

  auto stage = [&](const FluidState3D& in, FluidState3D& out) {
    w.load(in, params_.law);
    w.residual(isa, coef);
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        const std::size_t src = w.pad(i, j, 0);
        const std::size_t dst = g.index(i, j, 0);
        for (int k = 0; k < g.nz; ++k) {
          out.rho[dst + k] = in.rho[dst + k] + dt * w.rrho[src + k];
          out.mom.at(0, dst + k) = in.mom.at(0, dst + k) + dt * w.r0[src + k];
          out.mom.at(1, dst + k) = in.mom.at(1, dst + k) + dt * w.r1[src + k];
          out.mom.at(2, dst + k) = in.mom.at(2, dst + k) + dt * w.r2[src + k];
        }
      }
  };

  FluidState3D u1(g);
  stage(state, u1);
  u1.time = state.time + dt;
  check_positivity(u1, params_.cfl);

  FluidState3D u2(g);
  stage(u1, u2);
  auto avg = [](std::span<double> out, std::span<const double> a) {
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = 0.5 * a[n] + 0.5 * out[n];
  };
  avg(u2.rho.values(), state.rho.values());
  avg(u2.mom.values(), state.mom.values());
  u2.time = state.time + dt;
  check_positivity(u2, params_.cfl);
  return u2;
}

FluidState3D step(const FluidState3D& state, const SolverParams& params, double dt) {
  CompressibleSolver solver(state.grid(), params);
  return solver.step(state, dt);
}

RunResult run(const FluidState3D& initial, const SolverParams& params) {
  params.validate();
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  RunResult result;
  CompressibleSolver solver(initial.grid(), params);

  FluidState3D state = initial;
  result.snapshots.push(state.time, state);
  result.log.push_back({state.time, totals(state, params.law, params.epsilon)});

  const double t0 = initial.time;
  const double t_end = t0 + params.end_time;
  long snap_index = 1;
  auto next_snapshot = [&]() {
    return std::min(t_end, t0 + static_cast<double>(snap_index) * params.snapshot_interval);
  };
  double target = next_snapshot();
  while (state.time < t_end) {
    double dt = solver.stable_dt(state);
    bool hits = false;
    if (state.time + dt >= target) {
      dt = target - state.time;
      hits = true;
    }
    state = solver.step(state, dt);
    ++result.steps;
    if (hits) {
      state.time = target;
      result.snapshots.push(state.time, state);
      ++snap_index;
      target = next_snapshot();
    }
    result.log.push_back({state.time, totals(state, params.law, params.epsilon)});
    const double elapsed = std::chrono::duration<double>(clock::now() - start).count();
    if (elapsed > params.wall_budget_seconds) {
      std::ostringstream msg;
      msg << "wall-clock budget of " << params.wall_budget_seconds << " s exceeded at t = "
          << state.time << " of " << t_end;
      throw Error(ErrorKind::budget_exceeded, msg.str());
    }
  }
  result.wall_seconds = std::chrono::duration<double>(clock::now() - start).count();
  return result;
}

std::vector<double> dissipation_defect(const SnapshotSeries<FluidState3D>& series,
                                       const PressureLaw& law, double epsilon, double delta) {
  if (series.empty()) return {};
  const double e0 = total_energy(series[0], law, epsilon);
  std::vector<double> d;
  d.reserve(series.size());
  double running = 0.0;
  for (const auto& s : series.snapshots()) {
    const double value = (e0 - total_energy(s, law, epsilon)) / delta;
    if (value < -1e-12 * std::max(e0, 1e-300) / delta) {
      std::ostringstream msg;
      msg << "energy increased: D(" << s.time << ") = " << value << " < 0";
      throw Error(ErrorKind::invalid_state, msg.str());
    }
    if (value + 1e-12 * e0 / delta < running) {
      std::ostringstream msg;
      msg << "dissipation defect decreased at t = " << s.time;
      throw Error(ErrorKind::invalid_state, msg.str());
    }
    running = std::max(running, std::max(value, 0.0));
    d.push_back(running);
  }
  return d;
}

}  // namespace thinmach
