#include <cmath>
#include <numbers>

#include "doctest.h"
#include "thinmach/initial_data.hpp"
#include "thinmach/acoustic.hpp"

using namespace thinmach;
using std::numbers::pi;

namespace {

const SupportBox kFullTorus{1.0, 0.0};

DataRecipe ill_cos(double eps) {
  DataRecipe r;
  r.kind = DataKind::ill_prepared;
  r.s0 = Profile{{Mode{1, 0, 1.0, 0.0}}};
  r.epsilon = eps;
  r.eta = 0.25;
  r.support = kFullTorus;
  return r;
}

// windowed shear plus an acoustic pulse, on the default support box
DataRecipe mixed(double eps, double eta) {
  DataRecipe r;
  r.kind = DataKind::ill_prepared;
  r.v0_stream = shear_streamfunction(1.0, 2, 2.0 * pi);
  r.s0 = Profile{{Mode{3, 1, 0.8, 0.3}, Mode{0, 2, 0.5, 0.0}}};
  r.psi0 = Profile{{Mode{1, 1, 0.4, 0.0}}};
  r.epsilon = eps;
  r.eta = eta;
  return r;
}

}  // namespace

TEST_SUITE("initialdata") {

TEST_CASE("profiles, kinds and recipe validation") {
  const auto p = shear_streamfunction(2.0, 3, 6.0);
  // psi = A L/(2 pi n) cos(2 pi n x2/L): -d2 psi = A sin(2 pi n x2 / L)
  const double h = 1e-6, x2 = 0.7;
  CHECK(-(p(0.0, x2 + h, 6.0) - p(0.0, x2 - h, 6.0)) / (2 * h) == doctest::Approx(2.0 * std::sin(pi * x2)).epsilon(1e-8));
  CHECK(data_kind_from_string(to_string(DataKind::ill_prepared)) == DataKind::ill_prepared);
  CHECK_THROWS_AS(data_kind_from_string("half-prepared"), Error);

  DataRecipe r;
  r.s0 = Profile{{Mode{1, 0, 1.0, 0.0}}};
  CHECK_THROWS_AS(r.validate(), Error);  // well-prepared data carry no acoustic part
  CHECK_THROWS_AS((DataRecipe{DataKind::ill_prepared, {}, {}, {}, 0.1, 0.25, SupportBox{0.5, 0.0}}.validate()), Error);
}

TEST_CASE("support window") {
  const SupportBox box;
  const double L = 8.0;
  CHECK(box.window(4.0, 4.0, L) == 1.0);
  CHECK(box.window(1.9, 4.0, L) == 0.0);
  CHECK(box.window(4.0, 6.1, L) == 0.0);
  CHECK(box.contains(4.0, 5.9, L));
  CHECK_FALSE(box.contains(6.1, 4.0, L));
  for (int n = 0; n <= 100; ++n) {
    const double w = box.window(2.0 + 0.02 * n, 4.0, L);
    CHECK(w >= 0.0);
    CHECK(w <= 1.0);
  }
  CHECK(kFullTorus.window(0.0, 7.9, L) == 1.0);
}

TEST_CASE("well-prepared rest data") {
  DataRecipe r;
  const Grid3D g(16, 16, 3, 2.0 * pi, 0.1);
  const auto s = build_initial_3d(r, g, PressureLaw::gamma_law(2.0));
  for (std::size_t n = 0; n < g.cells(); ++n) {
    CHECK(s.rho[n] == 1.0);
    for (int c = 0; c < 3; ++c) CHECK(s.mom.at(c, n) == 0.0);
  }
}

TEST_CASE("ill-prepared density perturbation") {
  const Grid3D g(32, 8, 2, 2.0 * pi, 0.1);
  const auto s = build_initial_3d(ill_cos(0.1), g, PressureLaw::gamma_law(2.0));
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      for (int k = 0; k < g.nz; ++k) {
        const auto n = g.index(i, j, k);
        CHECK(std::abs(s.rho[n] - (1.0 + 0.1 * std::cos(g.x(i)))) <= 1e-14);
        CHECK(std::abs(s.mom.at(0, n)) <= 1e-15);
        CHECK(s.mom.at(2, n) == 0.0);
      }
  CHECK(convergence_hypothesis_value(s, ill_cos(0.1), PressureLaw::gamma_law(2.0), 0.1, 0.1) <= 1e-12);
}

TEST_CASE("positivity of the built density is enforced") {
  const Grid3D g(16, 16, 1, 2.0 * pi, 1.0);
  try {
    (void)build_initial_3d(ill_cos(2.0), g, PressureLaw::gamma_law(2.0));
    FAIL("expected positivity loss");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::positivity_loss);
  }
}

TEST_CASE("limit data") {
  const Grid2D g(32, 32, 2.0 * pi);
  IncompressibleSolver solver(g);

  auto pure_acoustic = ill_cos(0.1);
  pure_acoustic.psi0 = Profile{{Mode{2, 1, 1.0, 0.0}}};
  CHECK(discrete_norm(solver.velocity(limit_initial_2d(pure_acoustic, g)), kInfinity) == 0.0);

  auto shear = pure_acoustic;
  shear.v0_stream = shear_streamfunction(1.0, 1, g.L);
  const auto v = solver.velocity(limit_initial_2d(shear, g));
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      CHECK(std::abs(v.at(0, g.index(i, j)) - std::sin(g.y(j))) <= 1e-13);
      CHECK(std::abs(v.at(1, g.index(i, j))) <= 1e-13);
    }
}

TEST_CASE("limit velocity is the projection of the built velocity") {
  const Grid2D g(64, 64, 2.0 * pi);
  const auto r = mixed(0.1, 0.25);
  const auto f = build_initial_2d(r, g, PressureLaw::gamma_law(2.0));
  IncompressibleSolver solver(g);
  const auto proj = helmholtz_project(f.ubar0);
  const auto lim = solver.velocity(limit_initial_2d(r, g));
  double d = 0.0;
  for (std::size_t n = 0; n < proj.values().size(); ++n) d = std::max(d, std::abs(proj.values()[n] - lim.values()[n]));
  CHECK(d <= 1e-12);
  CHECK(discrete_norm(spectral_divergence(f.v0), kInfinity) <= 1e-12);
}

TEST_CASE("density data scale with epsilon and converge as eta shrinks") {
  const Grid3D g(64, 64, 1, 2.0 * pi, 1.0);
  const auto law = PressureLaw::gamma_law(2.0);
  auto scaled_sup = [&](double eps) {
    const auto s = build_initial_3d(mixed(eps, 0.25), g, law);
    double m = 0.0;
    for (std::size_t n = 0; n < g.cells(); ++n) m = std::max(m, std::abs(s.rho[n] - 1.0) / eps);
    return m;
  };
  CHECK(scaled_sup(0.1) == doctest::Approx(scaled_sup(0.025)).epsilon(1e-12));

  // the windowed profile before regularization
  const auto r = mixed(0.1, 1.0);
  const SupportBox box;
  const auto target = sample(g.horizontal(), [&](double x, double y) { return box.window(x, y, g.L) * r.s0(x, y, g.L); });
  std::vector<double> err;
  for (double eta : {0.5, 0.25, 0.125}) {
    const auto s = build_initial_3d(mixed(0.1, eta), g, law);
    ScalarField2D d(g.horizontal());
    for (std::size_t n = 0; n < g.columns(); ++n) d[n] = (s.rho[n] - 1.0) / 0.1 - target[n];
    err.push_back(discrete_norm(d, 1.0));
  }
  CHECK(err[1] < err[0]);
  CHECK(err[2] < err[1]);
}

TEST_CASE("hypothesis value grows quadratically with a momentum perturbation") {
  const Grid3D g(32, 32, 2, 2.0 * pi, 0.1);
  const auto law = PressureLaw::gamma_law(2.0);
  const auto r = mixed(0.1, 0.25);
  const auto base = build_initial_3d(r, g, law);
  CHECK(convergence_hypothesis_value(base, r, law, 0.1, 0.1) <= 1e-12);
  std::vector<double> vals;
  for (double sigma : {1e-2, 1e-3}) {
    auto s = base;
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        for (int k = 0; k < g.nz; ++k) s.mom.at(1, g.index(i, j, k)) += sigma * std::cos(g.x(i));
    vals.push_back(convergence_hypothesis_value(s, r, law, 0.1, 0.1));
  }
  CHECK(std::log10(vals[0] / vals[1]) == doctest::Approx(2.0).epsilon(1e-3));
  const FluidState3D rest(g, 1.0);
  CHECK(convergence_hypothesis_value(rest, DataRecipe{}, law, 0.1, 0.1) == 0.0);
}

TEST_CASE("seeded perturbations") {
  const auto r = mixed(0.1, 0.25);
  const auto a = perturbed(r, 42, 1e-2), b = perturbed(r, 42, 1e-2), c = perturbed(r, 43, 1e-2);
  CHECK(a.s0.modes[0].amplitude == b.s0.modes[0].amplitude);
  CHECK(a.s0.modes[0].amplitude != c.s0.modes[0].amplitude);
  for (std::size_t m = 0; m < r.s0.modes.size(); ++m)
    CHECK(std::abs(a.s0.modes[m].amplitude / r.s0.modes[m].amplitude - 1.0) <= 1e-2);
  CHECK(a.s0.modes[0].n1 == r.s0.modes[0].n1);
}

}
