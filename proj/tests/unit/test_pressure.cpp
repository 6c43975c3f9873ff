#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "doctest.h"
#include "thinmach/pressure.hpp"

using namespace thinmach;

namespace {
// defining integral P(rho) = rho * int_{rho_tilde}^{rho} p(z)/z^2 dz, evaluated independently
double quadrature_P(double gamma, double rho) {
  auto f = [gamma](double z) { return std::pow(z, gamma) / (z * z); };
  return rho * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 1.0, rho, 15, 1e-15);
}
}  // namespace

TEST_SUITE("pressure") {

TEST_CASE("quadratic law potential and Helmholtz function") {
  const auto law = PressureLaw::gamma_law(2.0);
  CHECK(law.a2() == 2.0);
  CHECK(potential_P(law, 1.0) == 0.0);
  CHECK(potential_P(law, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(helmholtz_H(law, 1.5, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(helmholtz_H(law, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  for (double r : {0.3, 1.0, 7.0}) CHECK(std::abs(helmholtz_H(law, r, r)) <= 1e-14);
}

TEST_CASE("gamma 1.4 potential matches the defining integral") {
  const auto law = PressureLaw::gamma_law(1.4);
  const double expected = (std::pow(2.0, 1.4) - 2.0) / 0.4;
  CHECK(potential_P(law, 2.0) == doctest::Approx(expected).epsilon(1e-14));
  for (double rho : {0.2, 0.9, 2.0, 13.0}) CHECK(std::abs(potential_P(law, rho) - quadrature_P(1.4, rho)) < 1e-10);
}

TEST_CASE("general law by quadrature agrees with closed form") {
  const auto closed = PressureLaw::gamma_law(1.4);
  const auto general = PressureLaw::general(
      "rho^1.4", [](double r) { return std::pow(r, 1.4); }, [](double r) { return 1.4 * std::pow(r, 0.4); }, 1.4);
  CHECK_FALSE(general.closed_form());
  for (double rho : {0.05, 0.5, 1.0, 3.0, 40.0}) {
    CHECK(general.potential(rho) == doctest::Approx(closed.potential(rho)).epsilon(1e-11));
    CHECK(general.helmholtz(rho, 1.3) == doctest::Approx(closed.helmholtz(rho, 1.3)).epsilon(1e-9).scale(1e-12));
  }
}

TEST_CASE("linear law closed form") {
  const auto law = PressureLaw::linear_law(2.0);
  CHECK(law.closed_form());
  CHECK(law.potential(std::exp(1.0)) == doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-15));
  CHECK(law.helmholtz(1.0, 1.0) == 0.0);
  CHECK(law.potential_second_derivative(4.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("convexity identity and Bregman properties") {
  for (double gamma : {1.2, 1.4, 2.0, 3.0}) {
    const auto law = PressureLaw::gamma_law(gamma, 0.7, 1.3);
    CHECK(law.a2() > 0.0);
    for (double rho : {0.1, 0.5, 1.3, 2.0, 9.0}) {
      CHECK(law.potential_second_derivative(rho) == doctest::Approx(law.dpressure(rho) / rho).epsilon(1e-13));
      // P'' by central differences of P'
      const double h = 1e-5 * rho;
      const double fd = (law.potential_derivative(rho + h) - law.potential_derivative(rho - h)) / (2.0 * h);
      CHECK(fd == doctest::Approx(law.dpressure(rho) / rho).epsilon(1e-6));
      for (double r : {0.4, 1.3, 3.0}) CHECK(law.helmholtz(rho, r) >= 0.0);
    }
    // gradient of H(., r) vanishes at r: |H(r +- h, r)| is O(h^2)
    for (double h : {1e-3, 1e-4}) {
      const double r = 1.7;
      const double c = law.potential_second_derivative(r);
      CHECK(law.helmholtz(r + h, r) <= c * h * h);
      CHECK(law.helmholtz(r - h, r) <= c * h * h);
    }
  }
}

TEST_CASE("hypothesis checks") {
  const auto ok = check_hypotheses(PressureLaw::gamma_law(1.4), {0.1, 1.0, 10.0, 100.0});
  CHECK(ok.passed);
  CHECK(ok.inf_p_over_rho_gamma == doctest::Approx(1.0).epsilon(1e-15));

  const auto bad = check_hypotheses(PressureLaw::linear_law(-1.0), {0.1, 1.0, 10.0, 100.0});
  CHECK_FALSE(bad.passed);
  CHECK(bad.failing_samples.size() == 4);

  // gamma = 2: p/P = rho/(rho - 1), decreasing toward 1
  const auto law = PressureLaw::gamma_law(2.0);
  double prev = kInfinity;
  for (double rho : {10.0, 100.0, 1000.0, 1e4}) {
    const double ratio = law.pressure(rho) / potential_P(law, rho);
    CHECK(ratio == doctest::Approx(rho / (rho - 1.0)).epsilon(1e-13));
    CHECK(ratio < prev);
    prev = ratio;
  }
  CHECK(prev - 1.0 < 1.1e-4);
}

TEST_CASE("cutoff psi") {
  const auto psi = CutoffPsi::around(2.0);
  CHECK(psi(2.0) == 1.0);
  CHECK(psi(1.0) == 1.0);
  CHECK(psi(4.0) == 1.0);
  CHECK(psi(0.5) == 0.0);
  CHECK(psi(8.0) == 0.0);
  CHECK(psi(0.1) == 0.0);
  CHECK(psi(100.0) == 0.0);
  double prev = 0.0;
  for (int n = 0; n <= 1000; ++n) {
    const double rho = 0.5 + 0.5 * n / 1000.0;
    const double v = psi(rho);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(v >= prev);
    // C1: the slope stays bounded and vanishes at the ends
    if (n > 0) CHECK(std::abs(v - prev) < 4.0 * 0.5 / 1000.0);
    prev = v;
  }
  const double h = 1e-7;
  CHECK(std::abs(psi(0.5 + h) - psi(0.5)) < 1e-10);
  CHECK(std::abs(psi(1.0) - psi(1.0 - h)) < 1e-10);
}

TEST_CASE("essential and residual split") {
  const Grid3D g(2, 2, 2, 1.0, 1.0);
  const auto psi = CutoffPsi::around(1.0);
  ScalarField3D payload(g);
  for (std::size_t n = 0; n < g.cells(); ++n) payload[n] = 0.1 + n;

  const auto at_rest = ess_res_split(psi, ScalarField3D(g, 1.0), payload);
  const auto far = ess_res_split(psi, ScalarField3D(g, 10.0), payload);
  ScalarField3D mixed_rho(g);
  for (std::size_t n = 0; n < g.cells(); ++n) mixed_rho[n] = 0.3 + 0.05 * n;
  const auto mixed = ess_res_split(psi, mixed_rho, payload);
  for (std::size_t n = 0; n < g.cells(); ++n) {
    CHECK(at_rest.essential[n] == payload[n]);
    CHECK(at_rest.residual[n] == 0.0);
    CHECK(far.essential[n] == 0.0);
    CHECK(far.residual[n] == payload[n]);
    CHECK(mixed.essential[n] + mixed.residual[n] == doctest::Approx(payload[n]).epsilon(1e-15));
  }
}

}
