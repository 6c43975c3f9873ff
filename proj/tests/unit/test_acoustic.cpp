#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "thinmach/acoustic.hpp"

using namespace thinmach;
using std::numbers::pi;

namespace {

const Grid2D torus(int n) { return Grid2D(n, n, 2.0 * pi); }

// random data with |k| <= kmax in each direction
ScalarField2D band_limited(const Grid2D& g, int kmax, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::array<double, 4>> modes;
  for (int a = -kmax; a <= kmax; ++a)
    for (int b = 0; b <= kmax; ++b) modes.push_back({double(a), double(b), u(rng), u(rng) * pi});
  return sample(g, [&](double x, double y) {
    double v = 0.0;
    for (const auto& m : modes)
      if (m[0] != 0.0 || m[1] != 0.0) v += m[2] * std::cos(m[0] * x + m[1] * y + m[3]);
    return v;
  });
}

double max_coeff_diff(const SpectralField2D& a, const SpectralField2D& b) {
  double d = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) d = std::max(d, std::abs(a[n] - b[n]));
  return d;
}

// energy in physical space: (1/2) sum (a^2 s^2 + rho_tilde^2 |grad Psi|^2) dA
double physical_energy(const AcousticState2D& st) {
  const auto s = density_perturbation(st);
  const auto gp = potential_gradient(st);
  double e = 0.0;
  for (std::size_t n = 0; n < s.cells(); ++n)
    e += st.a2 * s[n] * s[n] + st.rho_tilde * st.rho_tilde * (gp.at(0, n) * gp.at(0, n) + gp.at(1, n) * gp.at(1, n));
  return 0.5 * e * s.grid().cell_area();
}

}  // namespace

TEST_SUITE("acoustic2d") {

TEST_CASE("zero data stay zero") {
  const auto g = torus(16);
  const auto st = propagate(make_acoustic_state(ScalarField2D(g), ScalarField2D(g), 0.1, PressureLaw::gamma_law(2.0)), 3.0);
  CHECK(discrete_norm(density_perturbation(st), kInfinity) == 0.0);
  CHECK(discrete_norm(potential(st), kInfinity) == 0.0);
  CHECK(dispersive_norms(st, 1.0, 16, 8.0, 4.0, 0).value == 0.0);
}

TEST_CASE("single mode oscillates at a|k|/eps") {
  // rho_tilde = 1, a = 1, eps = 0.5: s = cos(x) cos(2t), Psi = -sin(2t) cos(x)
  const auto g = torus(32);
  const auto law = PressureLaw::linear_law(1.0);
  const auto s0 = sample(g, [](double x, double) { return std::cos(x); });
  const auto st0 = make_acoustic_state(s0, ScalarField2D(g), 0.5, law);
  for (double t : {0.3, 1.0, 7.7}) {
    const auto st = propagate(st0, t);
    const auto s = density_perturbation(st), psi = potential(st);
    double es = 0.0, ep = 0.0;
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        es = std::max(es, std::abs(s[g.index(i, j)] - std::cos(g.x(i)) * std::cos(2.0 * t)));
        ep = std::max(ep, std::abs(psi[g.index(i, j)] + std::sin(2.0 * t) * std::cos(g.x(i))));
      }
    CHECK(es <= 1e-13);
    CHECK(ep <= 1e-13);
  }
}

TEST_CASE("group property, time reversal and energy") {
  const auto g = torus(32);
  const auto law = PressureLaw::gamma_law(2.0);
  const auto st0 = make_acoustic_state(band_limited(g, 6, 1), band_limited(g, 6, 2), 0.125, law);
  const auto a = propagate(propagate(st0, 0.37), 1.21);
  const auto b = propagate(st0, 1.58);
  CHECK(max_coeff_diff(a.s_hat, b.s_hat) <= 1e-12);
  CHECK(max_coeff_diff(a.psi_hat, b.psi_hat) <= 1e-12);
  const auto back = propagate(propagate(st0, 2.5), -2.5);
  CHECK(max_coeff_diff(back.s_hat, st0.s_hat) <= 1e-12);
  CHECK(max_coeff_diff(back.psi_hat, st0.psi_hat) <= 1e-12);

  const double e0 = acoustic_energy(st0);
  CHECK(e0 == doctest::Approx(physical_energy(st0)).epsilon(1e-12));
  CHECK(std::abs(acoustic_energy(propagate(st0, 17.3)) - e0) <= 1e-12 * e0);
}

TEST_CASE("horizontal mean of s is preserved") {
  const auto g = torus(16);
  auto s0 = band_limited(g, 3, 4);
  for (std::size_t n = 0; n < g.cells(); ++n) s0[n] += 0.75;
  const auto st = propagate(make_acoustic_state(s0, band_limited(g, 3, 5), 0.2, PressureLaw::gamma_law(2.0)), 0.9);
  const auto s = density_perturbation(st);
  double mean = 0.0;
  for (double v : s.values()) mean += v;
  CHECK(mean / g.cells() == doctest::Approx(0.75).epsilon(1e-13));
}

TEST_CASE("higher Sobolev energies are invariant") {
  const auto g = torus(32);
  const auto law = PressureLaw::gamma_law(2.0);
  const auto st0 = make_acoustic_state(band_limited(g, 5, 6), band_limited(g, 5, 7), 0.25, law);
  // |k|^2 weighted energy: a^2/rho_tilde |grad s|^2 + rho_tilde |Laplacian Psi|^2
  auto e1 = [&](const AcousticState2D& st) {
    const double sx = spectral_norm(derivative(st.s_hat, 1, 0), 2.0, 0);
    const double sy = spectral_norm(derivative(st.s_hat, 0, 1), 2.0, 0);
    auto lap = derivative(st.psi_hat, 2, 0);
    const auto yy = derivative(st.psi_hat, 0, 2);
    for (std::size_t n = 0; n < lap.size(); ++n) lap[n] += yy[n];
    const double l = spectral_norm(lap, 2.0, 0);
    return st.a2 / st.rho_tilde * (sx * sx + sy * sy) + st.rho_tilde * l * l;
  };
  const double ref = e1(st0);
  double worst = 0.0;
  for (int n = 1; n <= 20; ++n) worst = std::max(worst, std::abs(e1(propagate(st0, 0.31 * n)) - ref) / ref);
  CHECK(worst <= 1e-12);
}

TEST_CASE("regularization") {
  const auto g = torus(64);
  RegularizationParams eta5{0.2};
  CHECK(eta5.cutoff_wavenumber() == 5);
  CHECK(RegularizationParams{0.3}.cutoff_wavenumber() == 4);
  CHECK_THROWS_AS((RegularizationParams{0.0}.cutoff_wavenumber()), Error);

  const auto low = sample(g, [](double x, double y) { return std::cos(x) + std::sin(2 * x + 3 * y); });
  const auto low_r = regularize(low, eta5);
  for (std::size_t n = 0; n < g.cells(); ++n) CHECK(std::abs(low_r[n] - low[n]) <= 1e-13);

  const auto mixed = sample(g, [](double x, double) { return std::cos(x) + std::cos(10 * x); });
  const auto mixed_r = regularize(mixed, eta5);
  for (int i = 0; i < g.nx; ++i) CHECK(std::abs(mixed_r[g.index(i, 0)] - std::cos(g.x(i))) <= 1e-13);

  // Parseval: kept and discarded parts are orthogonal
  const auto rnd = band_limited(g, 20, 9);
  const auto kept = regularize(rnd, RegularizationParams{0.1});
  ScalarField2D dropped(g);
  for (std::size_t n = 0; n < g.cells(); ++n) dropped[n] = rnd[n] - kept[n];
  const double a = discrete_norm(rnd, 2.0), b = discrete_norm(kept, 2.0), c = discrete_norm(dropped, 2.0);
  CHECK(std::abs(a * a - b * b - c * c) <= 1e-12 * a * a);
  CHECK(c > 0.1 * a);
}

TEST_CASE("regularization commutes with propagation") {
  const auto g = torus(32);
  const auto st0 = make_acoustic_state(band_limited(g, 10, 3), band_limited(g, 10, 8), 0.1, PressureLaw::gamma_law(2.0));
  const RegularizationParams r{0.2};
  const auto a = regularize(propagate(st0, 1.3).s_hat, r);
  auto reg0 = st0;
  reg0.s_hat = regularize(st0.s_hat, r);
  reg0.psi_hat = regularize(st0.psi_hat, r);
  const auto b = propagate(reg0, 1.3).s_hat;
  CHECK(max_coeff_diff(a, b) <= 1e-13);
}

TEST_CASE("dispersive norms") {
  CHECK(dispersive_exponents_admissible(8.0, 4.0));
  CHECK(dispersive_exponents_admissible(kInfinity, 2.0 + 0.0) == false);
  CHECK_FALSE(dispersive_exponents_admissible(8.0, 3.0));
  CHECK(dispersive_exponents_admissible(6.0, 6.0));

  const auto g = torus(32);
  const auto law = PressureLaw::linear_law(1.0);
  const auto st0 = make_acoustic_state(sample(g, [](double x, double) { return std::cos(x); }), ScalarField2D(g), 0.5, law);
  CHECK_THROWS_AS(dispersive_norms(st0, 1.0, 16, kInfinity, 2.0, 0), Error);

  // sup-in-time of each L2 norm; the samples hit t = 0 (s peak) and t = pi/4 (Psi peak)
  const auto r = dispersive_norms(st0, pi, 401, kInfinity, 2.0, 0, true);
  CHECK(r.value == doctest::Approx(2.0 * pi * std::sqrt(2.0)).epsilon(1e-12));
  CHECK_FALSE(r.undersampled);
  CHECK(dispersive_norms(st0, pi, 4, kInfinity, 2.0, 0, true).undersampled);
}

}
