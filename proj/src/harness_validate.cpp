#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>

#include "thinmach/acoustic.hpp"
#include "thinmach/harness.hpp"
#include "thinmach/incompressible.hpp"
#include "thinmach/kernels.hpp"
#include "thinmach/relative_energy.hpp"

namespace thinmach {

namespace {

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double operator()(double lo, double hi) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 rng_;
};

CheckResult check(std::string name, double value, double tol, std::string detail = {}) {
  CheckResult c{std::move(name), value <= tol, value, std::move(detail)};
  if (c.detail.empty()) {
    std::ostringstream s;
    s << "measured " << value << ", tolerance " << tol;
    c.detail = s.str();
  }
  return c;
}

template <class F>
CheckResult guarded(const std::string& name, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return CheckResult{name, false, 0.0, e.what()};
  }
}

// Nontrivial layer data used by the conservation checks: a shear plus an acoustic bump.
DataRecipe layer_recipe(const RunConfig& c, double eps) {
  DataRecipe r = c.recipe.make(c.L, eps, c.eta_list.front());
  r.kind = DataKind::ill_prepared;
  r.v0_stream.modes.push_back(shear_streamfunction(0.5, 2, c.L).modes.front());
  r.s0.modes.push_back(Mode{3, 1, 0.5, 0.2});
  return r;
}

}  // namespace

ValidationReport validate(const RunConfig& config) {
  ValidationReport rep;
  Uniform uni(config.seed);

  rep.checks.push_back(guarded("config", [&] {
    config.validate();
    return CheckResult{"config", true, 0.0, "configuration invariants hold"};
  }));

  rep.checks.push_back(guarded("pressure_hypotheses", [&] {
    const PressureLaw law = config.law.make();
    std::vector<double> samples;
    for (int i = 0; i < 1000; ++i) samples.push_back(law.rho_tilde() * std::pow(10.0, uni(-3.0, 3.0)));
    const HypothesisReport h = check_hypotheses(law, samples);
    return CheckResult{"pressure_hypotheses", h.passed, static_cast<double>(h.failing_samples.size()),
                       h.passed ? "1000 sampled densities admissible" : "hypothesis check failed: " + h.failure};
  }));

  const double eps = config.epsilon_list.empty() ? 0.25 : config.epsilon_list.front();
  rep.checks.push_back(guarded("mass_conservation", [&] {
    const PressureLaw law = config.law.make();
    SolverParams sp;
    sp.epsilon = eps;
    sp.cfl = config.cfl;
    sp.law = law;
    sp.scheme = config.scheme;
    sp.validate();
    const Grid3D g(32, 32, config.nz, config.L, config.delta(eps));
    CompressibleSolver solver(g, sp);
    FluidState3D s = build_initial_3d(layer_recipe(config, eps), g, law);
    const Totals t0 = totals(s, law, eps);
    double drift = 0.0, rise = 0.0, e_prev = t0.energy;
    for (int n = 0; n < 100; ++n) {
      s = solver.step(s, solver.stable_dt(s));
      const Totals t = totals(s, law, eps);
      drift = std::max(drift, std::abs(t.mass - t0.mass) / t0.mass);
      rise = std::max(rise, (t.energy - e_prev) / t0.energy);
      e_prev = t.energy;
    }
    std::ostringstream d;
    d << "relative mass drift " << drift << " over 100 steps; max relative energy rise " << rise;
    const bool ok = drift <= 1e-13 && rise <= 1e-12;
    return CheckResult{"mass_conservation", ok, drift, d.str()};
  }));

  rep.checks.push_back(guarded("rest_state", [&] {
    const PressureLaw law = config.law.make();
    SolverParams sp;
    sp.epsilon = eps;
    sp.cfl = config.cfl;
    sp.law = law;
    sp.scheme = config.scheme;
    const Grid3D g(32, 32, config.nz, config.L, config.delta(eps));
    CompressibleSolver solver(g, sp);
    FluidState3D s(g, law.rho_tilde());
    const double dt = solver.stable_dt(s);
    for (int n = 0; n < 200; ++n) s = solver.step(s, dt);
    double dev = 0.0;
    for (std::size_t n = 0; n < g.cells(); ++n) {
      dev = std::max(dev, std::abs(s.rho[n] - law.rho_tilde()) / law.rho_tilde());
      for (int c = 0; c < 3; ++c) dev = std::max(dev, std::abs(s.mom.at(c, n)));
    }
    return check("rest_state", dev, 1e-14);
  }));

  const Grid2D plane(64, 64, config.L);
  rep.checks.push_back(guarded("acoustic_energy", [&] {
    const PressureLaw law = config.law.make();
    const double k0 = 2.0 * std::numbers::pi / config.L;
    double a[6];
    for (double& v : a) v = uni(-1.0, 1.0);
    const auto s0 = sample(plane, [&](double x, double y) {
      return a[0] * std::cos(k0 * (3 * x + y)) + a[1] * std::sin(k0 * 5 * y) + a[2] * std::cos(k0 * (x - 7 * y));
    });
    const auto p0 = sample(plane, [&](double x, double y) {
      return a[3] * std::sin(k0 * (2 * x - y)) + a[4] * std::cos(k0 * 4 * x) + a[5] * std::sin(k0 * (6 * x + 6 * y));
    });
    const AcousticState2D st = make_acoustic_state(s0, p0, eps, law);
    const double e0 = acoustic_energy(st);
    double worst = 0.0;
    for (double t : {0.013, 0.1, 0.37, 1.0, 10.0}) worst = std::max(worst, std::abs(acoustic_energy(propagate(st, t)) - e0) / e0);
    return check("acoustic_energy", worst, 1e-12);
  }));

  rep.checks.push_back(guarded("helmholtz_projection", [&] {
    VectorField2D u(plane);
    const double k0 = 2.0 * std::numbers::pi / config.L;
    double a[4];
    for (double& v : a) v = uni(-1.0, 1.0);
    for (int i = 0; i < plane.nx; ++i)
      for (int j = 0; j < plane.ny; ++j) {
        const double x = plane.x(i), y = plane.y(j);
        const std::size_t n = plane.index(i, j);
        u.at(0, n) = a[0] * std::sin(k0 * (2 * x + 3 * y)) + a[1] * std::cos(k0 * 5 * y) + 0.3;
        u.at(1, n) = a[2] * std::cos(k0 * (x - 4 * y)) + a[3] * std::sin(k0 * 2 * x);
      }
    const VectorField2D pu = helmholtz_project(u);
    const VectorField2D ppu = helmholtz_project(pu);
    double norm2 = 0.0, diff2 = 0.0, inner = 0.0;
    for (int c = 0; c < 2; ++c)
      for (std::size_t n = 0; n < plane.cells(); ++n) {
        norm2 += u.at(c, n) * u.at(c, n);
        diff2 += (ppu.at(c, n) - pu.at(c, n)) * (ppu.at(c, n) - pu.at(c, n));
        inner += pu.at(c, n) * (u.at(c, n) - pu.at(c, n));
      }
    const double idem = std::sqrt(diff2 / norm2), orth = std::abs(inner) / norm2;
    const ScalarField2D div = spectral_divergence(pu);
    const double div_max = discrete_norm(div, kInfinity);
    std::ostringstream d;
    d << "idempotence " << idem << ", orthogonality " << orth << ", max |div P u| " << div_max;
    const double worst = std::max({idem, orth, div_max});
    return CheckResult{"helmholtz_projection", worst <= 1e-12, worst, d.str()};
  }));

  rep.checks.push_back(guarded("convexity", [&] {
    const PressureLaw law = config.law.make();
    const double rt = law.rho_tilde();
    const double lo = 0.25 * rt, hi = 4.0 * rt;  // 2 lo < rho_tilde < hi
    // Inner region: |rho - rt|^2 <= C1 H with C1 = 2 / min P'' on [lo, hi].
    double min_d2 = kInfinity;
    for (int i = 0; i <= 4000; ++i) min_d2 = std::min(min_d2, law.potential_second_derivative(lo + (hi - lo) * i / 4000.0));
    const double C1 = 2.0 / min_d2 * (1.0 + 1e-9);
    // Outer region: 1 + |rho - rt| + P <= C2 H; C2 from a dense log grid, samples checked against it.
    auto outer_ratio = [&](double rho) {
      return (1.0 + std::abs(rho - rt) + law.potential(rho)) / law.helmholtz(rho, rt);
    };
    double C2 = 0.0;
    for (int i = 0; i <= 4000; ++i) {
      C2 = std::max(C2, outer_ratio(lo * std::pow(10.0, -6.0 + 6.0 * i / 4000.0) * (1.0 - 1e-12)));
      C2 = std::max(C2, outer_ratio(hi * std::pow(10.0, 6.0 * i / 4000.0)));
    }
    C2 *= 1.05;
    int violations = 0;
    for (int i = 0; i < 1000; ++i) {
      const double rho = rt * std::pow(10.0, uni(-6.0, 6.0));
      const double H = law.helmholtz(rho, rt);
      if (!(H >= 0.0)) ++violations;
      if (rho >= lo && rho <= hi) {
        if ((rho - rt) * (rho - rt) > C1 * H) ++violations;
      } else if (rho >= 1e-6 * lo && rho <= 1e6 * hi) {
        if (outer_ratio(rho) > C2) ++violations;
      }
    }
    std::ostringstream d;
    d << violations << " violations over 1000 sampled densities (C1 = " << C1 << ", C2 = " << C2 << ")";
    return CheckResult{"convexity", violations == 0, static_cast<double>(violations), d.str()};
  }));

  rep.checks.push_back(guarded("jensen", [&] {
    const Grid3D g(4, 4, 2, 1.0, 0.5);
    int violations = 0;
    for (int e = 0; e < 100; ++e) {
      EnsembleMeasure m;
      const int members = 2 + e % 15;
      for (int k = 0; k < members; ++k) {
        FluidState3D s(g);
        for (std::size_t n = 0; n < g.cells(); ++n) {
          s.rho[n] = uni(0.1, 3.0);
          for (int c = 0; c < 3; ++c) s.mom.at(c, n) = uni(-2.0, 2.0);
        }
        m.members.push_back(std::move(s));
      }
      const auto mag = ensemble_observable(m, [](double, const std::array<double, 3>& q) {
        return std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
      });
      const auto sq = ensemble_observable(m, [](double, const std::array<double, 3>& q) {
        return q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
      });
      for (std::size_t n = 0; n < g.cells(); ++n)
        if (mag[n] * mag[n] > sq[n] * (1.0 + 1e-12)) ++violations;
    }
    return CheckResult{"jensen", violations == 0, static_cast<double>(violations),
                       std::to_string(violations) + " cell violations over 100 random ensembles"};
  }));

  rep.checks.push_back(guarded("euler_steady_mode", [&] {
    const Grid2D g(64, 64, 2.0 * std::numbers::pi);
    IncompressibleSolver solver(g);
    // psi = cos x cos y  =>  omega = -2 cos x cos y, a steady Euler flow.
    const auto omega = sample(g, [](double x, double y) { return -2.0 * std::cos(x) * std::cos(y); });
    const auto s0 = solver.from_vorticity(omega);
    const auto s1 = solver.advance(s0, 1.0, 0.5, 1e-2);
    const ScalarField2D w1 = solver.vorticity(s1);
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < g.cells(); ++n) num += (w1[n] - omega[n]) * (w1[n] - omega[n]), den += omega[n] * omega[n];
    return check("euler_steady_mode", std::sqrt(num / den), 1e-8);
  }));

  rep.checks.push_back(guarded("kernel_equivalence", [&] {
    using namespace kernels;
    if (!available(Isa::avx2)) return CheckResult{"kernel_equivalence", true, 0.0, "avx2 unavailable; scalar only"};
    constexpr std::size_t n = 203;
    std::vector<double> buf(12 * n);
    for (std::size_t i = 0; i < n; ++i) {
      buf[i] = uni(0.5, 2.0);
      buf[n + i] = uni(0.5, 2.0);
      for (int c = 2; c < 8; ++c) buf[c * n + i] = uni(-1.0, 1.0);
      buf[8 * n + i] = buf[i] * buf[i];
      buf[9 * n + i] = buf[n + i] * buf[n + i];
      buf[10 * n + i] = std::sqrt(2.0 * buf[i]);
      buf[11 * n + i] = std::sqrt(2.0 * buf[n + i]);
    }
    const double* b = buf.data();
    const CellArrays L{b, b + 2 * n, b + 4 * n, b + 6 * n, b + 8 * n, b + 10 * n};
    const CellArrays R{b + n, b + 3 * n, b + 5 * n, b + 7 * n, b + 9 * n, b + 11 * n};
    std::vector<double> fs(4 * n), fv(4 * n);
    const FluxCoefficients coef{1.0 / (eps * eps), 1.0 / eps, std::min(eps, 1.0 / eps)};
    scalar::face_fluxes(L, R, {fs.data(), fs.data() + n, fs.data() + 2 * n, fs.data() + 3 * n}, n, coef);
    avx2::face_fluxes(L, R, {fv.data(), fv.data() + n, fv.data() + 2 * n, fv.data() + 3 * n}, n, coef);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < 4 * n; ++i)
      if (std::memcmp(&fs[i], &fv[i], sizeof(double)) != 0) ++mismatches;
    return CheckResult{"kernel_equivalence", mismatches == 0, static_cast<double>(mismatches),
                       std::to_string(mismatches) + " bitwise mismatches between scalar and avx2 face fluxes"};
  }));

  return rep;
}

}  // namespace thinmach
