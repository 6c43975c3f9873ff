#include <cmath>
#include <numbers>

#include "doctest.h"
#include "thinmach/compressible.hpp"

using namespace thinmach;
using std::numbers::pi;

namespace {

double max_abs_diff(const FluidState3D& a, const FluidState3D& b) {
  double d = 0.0;
  for (std::size_t n = 0; n < a.grid().cells(); ++n) {
    d = std::max(d, std::abs(a.rho[n] - b.rho[n]));
    for (int c = 0; c < 3; ++c) d = std::max(d, std::abs(a.mom.at(c, n) - b.mom.at(c, n)));
  }
  return d;
}

// rho = 1 + A sin(2 pi x) on the unit period, at rest
FluidState3D pulse_1d(int n, double A) {
  const Grid3D g(n, 1, 1, 1.0, 1.0);
  FluidState3D s(g);
  for (int i = 0; i < n; ++i) {
    // exact cell average of the sine
    const double x0 = i * g.dx(), x1 = x0 + g.dx();
    s.rho[i] = 1.0 + A * (std::cos(2 * pi * x0) - std::cos(2 * pi * x1)) / (2 * pi * g.dx());
  }
  return s;
}

}  // namespace

TEST_SUITE("compressible3d") {

TEST_CASE("flux consistency at equal states") {
  const auto law = PressureLaw::gamma_law(2.0);
  const auto lin = PressureLaw::gamma_law(2.0);
  for (auto scheme : {FluxScheme::rusanov, FluxScheme::low_mach}) {
    const auto f = numerical_flux({1.0, {0, 0, 0}}, {1.0, {0, 0, 0}}, 0, lin, 0.1, scheme);
    CHECK(f[0] == 0.0);
    CHECK(f[1] == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(f[2] == 0.0);
    CHECK(f[3] == 0.0);

    const CellState s{1.5, {0.3, -0.6, 0.9}};
    for (int axis = 0; axis < 3; ++axis) {
      const double eps = 0.3;
      const auto g = numerical_flux(s, s, axis, law, eps, scheme);
      const double un = s.m[axis] / s.rho;
      CHECK(g[0] == doctest::Approx(s.m[axis]).epsilon(1e-15));
      for (int c = 0; c < 3; ++c) {
        const double phys = s.m[c] * un + (c == axis ? law.pressure(s.rho) / (eps * eps) : 0.0);
        CHECK(g[1 + c] == doctest::Approx(phys).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("rusanov flux by hand") {
  // left (1,0), right (2,0), p = rho^2, eps = 1: lambda = max(sqrt 2, 2) = 2
  const auto f = numerical_flux({1.0, {0, 0, 0}}, {2.0, {0, 0, 0}}, 0, PressureLaw::gamma_law(2.0), 1.0);
  CHECK(std::abs(f[0] - (-1.0)) < 1e-14);
  CHECK(std::abs(f[1] - 2.5) < 1e-14);
  CHECK(f[2] == 0.0);
  CHECK(f[3] == 0.0);
  // low_mach reduces to rusanov at eps = 1
  const auto g = numerical_flux({1.0, {0, 0, 0}}, {2.0, {0, 0, 0}}, 0, PressureLaw::gamma_law(2.0), 1.0,
                                FluxScheme::low_mach);
  for (int c = 0; c < 4; ++c) CHECK(g[c] == f[c]);
}

TEST_CASE("stable time step") {
  SolverParams p;
  p.law = PressureLaw::linear_law(1.0);
  p.epsilon = 0.1;
  p.cfl = 0.45;
  const Grid3D g(10, 10, 10, 1.0, 1.0);
  FluidState3D s(g);
  CHECK(stable_dt(s, p) == doctest::Approx(0.0045).epsilon(1e-14));

  p.epsilon = 0.05;
  CHECK(stable_dt(s, p) == doctest::Approx(0.00225).epsilon(1e-14));

  p.epsilon = 0.1;
  s.mom.at(1, g.index(3, 4, 5)) = 1.0;
  CHECK(stable_dt(s, p) == doctest::Approx(0.45 * 0.1 / 11.0).epsilon(1e-14));
}

TEST_CASE("parameter validation") {
  SolverParams p;
  p.cfl = 1.5;
  CHECK_THROWS_AS(p.validate(), Error);
  p.cfl = 0.5;
  p.epsilon = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
  CHECK(flux_scheme_from_string("rusanov") == FluxScheme::rusanov);
  CHECK_THROWS_AS(flux_scheme_from_string("roe"), Error);
}

TEST_CASE("rest state is an exact equilibrium") {
  const Grid3D g(8, 6, 3, 2.0, 0.1);
  SolverParams p;
  p.epsilon = 0.05;
  p.end_time = 1.0;
  p.snapshot_interval = 0.25;
  const FluidState3D rest(g, 1.0);
  const auto res = run(rest, p);
  CHECK(res.snapshots.size() == 5);
  for (const auto& s : res.snapshots.snapshots()) CHECK(max_abs_diff(s, rest) == 0.0);
  for (double d : dissipation_defect(res.snapshots, p.law, p.epsilon, g.delta)) CHECK(d == 0.0);
}

TEST_CASE("end time zero returns only the initial snapshot") {
  const Grid3D g(4, 4, 2, 1.0, 0.5);
  SolverParams p;
  const auto res = run(FluidState3D(g, 1.0), p);
  CHECK(res.snapshots.size() == 1);
  CHECK(res.snapshots.times().front() == 0.0);
  CHECK(res.steps == 0);
}

TEST_CASE("conservation and energy decay") {
  const Grid3D g(12, 10, 4, 2.0, 0.5);
  FluidState3D s(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      for (int k = 0; k < g.nz; ++k) {
        const auto n = g.index(i, j, k);
        s.rho[n] = 1.0 + 0.2 * std::sin(pi * g.x(i)) * std::cos(pi * g.y(j)) + 0.1 * std::cos(pi * g.z(k) / g.delta);
        s.mom.at(0, n) = 0.3 * std::cos(pi * g.y(j));
        s.mom.at(1, n) = -0.2 * std::sin(pi * g.x(i));
      }
  SolverParams p;
  p.epsilon = 0.3;
  CompressibleSolver solver(g, p);
  const auto t0 = totals(s, p.law, p.epsilon);
  double e_prev = t0.energy;
  bool z_changed = false;
  for (int n = 0; n < 50; ++n) {
    s = solver.step(s, solver.stable_dt(s));
    const auto t = totals(s, p.law, p.epsilon);
    CHECK(std::abs(t.mass - t0.mass) <= 1e-13 * t0.mass);
    CHECK(std::abs(t.momentum[0] - t0.momentum[0]) <= 1e-13);
    CHECK(std::abs(t.momentum[1] - t0.momentum[1]) <= 1e-13);
    z_changed = z_changed || std::abs(t.momentum[2] - t0.momentum[2]) > 1e-8;
    CHECK(t.energy <= e_prev * (1.0 + 1e-14));
    e_prev = t.energy;
  }
  // walls exert a pressure force on vertically stratified data
  CHECK(z_changed);
}

TEST_CASE("energy log is non-increasing for a Gaussian bump") {
  const Grid3D g(32, 32, 32, 1.0, 1.0);
  FluidState3D s(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      for (int k = 0; k < g.nz; ++k) {
        const double r2 = std::pow(g.x(i) - 0.5, 2) + std::pow(g.y(j) - 0.5, 2) + std::pow(g.z(k) - 0.5, 2);
        s.rho[g.index(i, j, k)] = 1.0 + 0.3 * std::exp(-r2 / 0.02);
      }
  SolverParams p;
  p.epsilon = 0.5;
  // the per-axis cfl sums over three equal axes here; 0.45 exceeds the 1/3 bound
  p.cfl = 0.3;
  p.end_time = 0.25;
  p.snapshot_interval = 0.05;
  const auto res = run(s, p);
  REQUIRE(res.log.size() > 10);
  for (std::size_t n = 1; n < res.log.size(); ++n)
    CHECK(res.log[n].totals.energy <= res.log[n - 1].totals.energy * (1.0 + 1e-14));
  const auto D = dissipation_defect(res.snapshots, p.law, p.epsilon, g.delta);
  CHECK(D.front() == 0.0);
  for (std::size_t n = 1; n < D.size(); ++n) CHECK(D[n] >= D[n - 1]);
  CHECK(D.back() > 0.0);
}

TEST_CASE("x1 <-> x2 symmetry") {
  const Grid3D g(16, 16, 2, 1.0, 0.2);
  FluidState3D s(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      for (int k = 0; k < g.nz; ++k) {
        const auto n = g.index(i, j, k);
        const double x = g.x(i), y = g.y(j);
        s.rho[n] = 1.0 + 0.1 * std::exp(-20.0 * ((x - 0.4) * (x - 0.4) + (y - 0.4) * (y - 0.4)));
        s.mom.at(0, n) = 0.2 * std::sin(2 * pi * x) * std::cos(2 * pi * y);
        s.mom.at(1, n) = 0.2 * std::sin(2 * pi * y) * std::cos(2 * pi * x);
      }
  SolverParams p;
  p.epsilon = 0.25;
  CompressibleSolver solver(g, p);
  for (int n = 0; n < 40; ++n) s = solver.step(s, 0.8 * solver.stable_dt(s));
  double asym = 0.0;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      for (int k = 0; k < g.nz; ++k) {
        const auto a = g.index(i, j, k), b = g.index(j, i, k);
        asym = std::max({asym, std::abs(s.rho[a] - s.rho[b]), std::abs(s.mom.at(0, a) - s.mom.at(1, b))});
      }
  CHECK(asym <= 1e-13);
}

TEST_CASE("data constant in x3 stay constant in x3") {
  const Grid3D g(16, 8, 5, 1.0, 0.05);
  FluidState3D s(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      for (int k = 0; k < g.nz; ++k) {
        const auto n = g.index(i, j, k);
        s.rho[n] = 1.0 + 0.2 * std::sin(2 * pi * g.x(i));
        s.mom.at(0, n) = 0.1 * std::cos(2 * pi * g.y(j));
        s.mom.at(1, n) = 0.1 * std::sin(2 * pi * g.x(i));
      }
  SolverParams p;
  p.epsilon = 0.2;
  CompressibleSolver solver(g, p);
  for (int n = 0; n < 60; ++n) s = solver.step(s, solver.stable_dt(s));
  double spread = 0.0;
  for (std::size_t col = 0; col < g.columns(); ++col)
    for (int k = 1; k < g.nz; ++k) {
      const auto a = col * g.nz, b = col * g.nz + k;
      spread = std::max(spread, std::abs(s.rho[a] - s.rho[b]));
      for (int c = 0; c < 2; ++c) spread = std::max(spread, std::abs(s.mom.at(c, a) - s.mom.at(c, b)));
      spread = std::max(spread, std::abs(s.mom.at(2, b)));
    }
  CHECK(spread == 0.0);
}

TEST_CASE("first-order self-convergence of a smooth pulse") {
  SolverParams p;
  p.epsilon = 1.0;
  p.end_time = 0.1;
  std::vector<std::vector<double>> sol;
  for (int n : {128, 256, 512}) {
    const auto res = run(pulse_1d(n, 0.1), p);
    const auto& rho = res.snapshots.back().rho;
    sol.emplace_back(rho.values().begin(), rho.values().end());
  }
  // L1 distance after restricting the finer solution by pair averaging
  auto gap = [](const std::vector<double>& c, const std::vector<double>& f) {
    double e = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) e += std::abs(c[i] - 0.5 * (f[2 * i] + f[2 * i + 1]));
    return e / c.size();
  };
  const double rate = std::log2(gap(sol[0], sol[1]) / gap(sol[1], sol[2]));
  MESSAGE("self-convergence rate " << rate);
  CHECK(rate >= 0.8);
  CHECK(rate <= 1.2);
}

TEST_CASE("positivity loss is reported") {
  const Grid3D g(8, 1, 1, 1.0, 1.0);
  FluidState3D s(g);
  for (int i = 0; i < g.nx; ++i) s.rho[i] = i % 2 ? 0.01 : 1.0;
  SolverParams p;
  CompressibleSolver solver(g, p);
  try {
    (void)solver.step(s, 50.0 * solver.stable_dt(s));
    FAIL("expected positivity loss");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::positivity_loss);
  }
}

}
