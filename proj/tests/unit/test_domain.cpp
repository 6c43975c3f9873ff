#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "thinmach/grid.hpp"
#include "thinmach/spectral.hpp"

using namespace thinmach;
using std::numbers::pi;

TEST_SUITE("domain") {

TEST_CASE("grid spacings and cell counts") {
  const Grid3D g(8, 4, 2, 2.0, 0.5);
  CHECK(g.dx() == 0.25);
  CHECK(g.dy() == 0.5);
  CHECK(g.dz() == 0.25);
  CHECK(g.cells() == 64);
  CHECK(g.columns() == 32);
  CHECK(g.horizontal() == Grid2D(8, 4, 2.0));
  CHECK_THROWS_AS(Grid3D(0, 1, 1, 1.0, 1.0), Error);
  CHECK_THROWS_AS(Grid3D(1, 1, 1, 1.0, 0.0), Error);
  CHECK_THROWS_AS(Grid2D(4, 4, -1.0), Error);
}

TEST_CASE("vertical average of constants and x3") {
  const Grid3D g(3, 2, 7, 1.0, 1.0);
  ScalarField3D c(g, 4.25);
  const auto ac = vertical_average(c);
  for (double v : ac.values()) CHECK(v == 4.25);

  ScalarField3D lin(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      for (int k = 0; k < g.nz; ++k) lin[g.index(i, j, k)] = g.z(k);
  const auto al = vertical_average(lin);
  for (double v : al.values()) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("vertical average of x3 squared converges at second order") {
  // exact mean of x^2 on (0,1) is 1/3; midpoint error is exactly 1/(12 nz^2)
  double prev = 0.0;
  for (int nz : {4, 8, 16, 32}) {
    const Grid3D g(1, 1, nz, 1.0, 1.0);
    ScalarField3D f(g);
    for (int k = 0; k < nz; ++k) f[k] = g.z(k) * g.z(k);
    const double err = 1.0 / 3.0 - vertical_average(f)[0];
    CHECK(err == doctest::Approx(1.0 / (12.0 * nz * nz)).epsilon(1e-10));
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(1e-8));
    prev = err;
  }
}

TEST_CASE("vertical average is linear") {
  const Grid3D g(4, 4, 5, 1.0, 0.3);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VectorField3D f(g), h(g), comb(g);
  for (std::size_t n = 0; n < f.values().size(); ++n) {
    f.values()[n] = u(rng);
    h.values()[n] = u(rng);
    comb.values()[n] = 1.5 * f.values()[n] - 0.25 * h.values()[n];
  }
  const auto af = vertical_average(f), ah = vertical_average(h), ac = vertical_average(comb);
  for (std::size_t n = 0; n < ac.values().size(); ++n)
    CHECK(ac.values()[n] == doctest::Approx(1.5 * af.values()[n] - 0.25 * ah.values()[n]).epsilon(1e-14));
}

TEST_CASE("discrete norms") {
  const Grid2D g(64, 64, 2.0 * pi);
  const ScalarField2D zero(g);
  for (double p : {1.0, 2.0, 4.0, kInfinity}) CHECK(discrete_norm(zero, p) == 0.0);

  const ScalarField2D one(g, 1.0);
  CHECK(discrete_norm(one, 2.0) == doctest::Approx(2.0 * pi).epsilon(1e-14));

  // closed form: the double integral of sin^2 over the period square is 2 pi^2
  const auto s = sample(g, [](double x, double) { return std::sin(x); });
  CHECK(discrete_norm(s, 2.0) == doctest::Approx(std::sqrt(2.0 * pi * pi)).epsilon(1e-13));
  CHECK(discrete_norm(s, kInfinity) == doctest::Approx(std::sin(pi / 2.0 - pi / 64.0)).epsilon(1e-14));
  CHECK_THROWS_AS(discrete_norm(s, 0.5), Error);
  CHECK_THROWS_AS(discrete_norm(s, 2.0, 1), Error);
}

TEST_CASE("spectral norms take derivatives") {
  const Grid2D g(32, 32, 2.0 * pi);
  const auto s = sample(g, [](double x, double) { return std::sin(3.0 * x); });
  Fft2D fft(g);
  const auto sh = fft.forward(s);
  CHECK(spectral_norm(sh, 2.0, 0) == doctest::Approx(pi * std::sqrt(2.0)).epsilon(1e-13));
  // W^{1,2}: (||f||^2 + ||grad f||^2)^(1/2) with d1 sin(3x) = 3 cos(3x)
  CHECK(spectral_norm(sh, 2.0, 1) == doctest::Approx(std::sqrt(10.0) * pi * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("time norm quadrature") {
  const std::vector<double> t{0.0, 1.0};
  const std::vector<double> v{0.0, 2.0};
  CHECK(time_norm(t, v, 1.0) == doctest::Approx(1.0).epsilon(1e-15));

  const std::vector<double> tc{0.0, 0.5, 1.5, 2.0};
  const std::vector<double> vc(4, 3.0);
  CHECK(time_norm(tc, vc, 2.0) == doctest::Approx(std::sqrt(2.0) * 3.0).epsilon(1e-14));
  CHECK(time_norm(tc, std::vector<double>(4, 0.0), 3.0) == 0.0);
  CHECK(time_norm(tc, std::vector<double>{1, 5, 2, 0}, kInfinity) == 5.0);
  CHECK_THROWS_AS(time_norm(std::vector<double>{0.0}, std::vector<double>{1.0}, 2.0), Error);
}

TEST_CASE("snapshot series rejects unsorted times and foreign grids") {
  SnapshotSeries<ScalarField2D> series;
  series.push(0.0, ScalarField2D(Grid2D(4, 4, 1.0)));
  CHECK_THROWS_AS(series.push(0.0, ScalarField2D(Grid2D(4, 4, 1.0))), Error);
  CHECK_THROWS_AS(series.push(1.0, ScalarField2D(Grid2D(8, 4, 1.0))), Error);
  series.push(1.0, ScalarField2D(Grid2D(4, 4, 1.0), 2.0));
  CHECK(time_norm(series, 1.0, [](const ScalarField2D& f) { return discrete_norm(f, 2.0); }) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

}
