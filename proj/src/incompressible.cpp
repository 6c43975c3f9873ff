#include "thinmach/incompressible.hpp"

#include <algorithm>
#include <cmath>

namespace thinmach {

namespace {

SpectralField2D velocity_component_hat(const SpectralField2D& psi_hat, int c) {
  // v1 = -d2 psi, v2 = d1 psi
  return c == 0 ? -1.0 * derivative(psi_hat, 0, 1) : derivative(psi_hat, 1, 0);
}

}  // namespace

VectorField2D helmholtz_project(const VectorField2D& u) {
  const Grid2D& g = u.grid();
  Fft2D fft(g);
  SpectralField2D a = fft.forward(u.comp(0));
  SpectralField2D b = fft.forward(u.comp(1));
  // Nyquist wavenumbers count as zero, matching derivative(); otherwise the
  // projector is not self-adjoint on the real half spectrum
  for (int i = 0; i < g.nx; ++i) {
    const double kx = is_nyquist_x(g, i) ? 0.0 : wavenumber_x(g, i);
    for (int j = 0; j < a.nky(); ++j) {
      const double ky = is_nyquist_y(g, j) ? 0.0 : wavenumber_y(g, j);
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0) continue;
      const std::size_t n = a.index(i, j);
      const Complex kdotu = (kx * a[n] + ky * b[n]) / k2;
      a[n] -= kx * kdotu;
      b[n] -= ky * kdotu;
    }
  }
  VectorField2D out(g);
  fft.inverse(a.coeffs(), out.comp(0));
  fft.inverse(b.coeffs(), out.comp(1));
  return out;
}

ScalarField2D spectral_divergence(const VectorField2D& u) {
  Fft2D fft(u.grid());
  const auto d = derivative(fft.forward(u.comp(0)), 1, 0) + derivative(fft.forward(u.comp(1)), 0, 1);
  return fft.inverse(d);
}

IncompressibleSolver::IncompressibleSolver(const Grid2D& grid) : grid_(grid), fft_(grid) {}

bool IncompressibleSolver::retained(int i, int j) const {
  return 3 * std::abs(mode_x(grid_, i)) <= grid_.nx && 3 * j <= grid_.ny;
}

IncompressibleState2D IncompressibleSolver::from_vorticity(const ScalarField2D& omega, double time) {
  IncompressibleState2D s{fft_.forward(omega), time, false};
  s.omega_hat[0] = 0.0;
  return s;
}

IncompressibleState2D IncompressibleSolver::from_velocity(const VectorField2D& u, double time) {
  const auto w = derivative(fft_.forward(u.comp(1)), 1, 0) - derivative(fft_.forward(u.comp(0)), 0, 1);
  IncompressibleState2D s{w, time, false};
  s.omega_hat[0] = 0.0;
  return s;
}

SpectralField2D IncompressibleSolver::streamfunction(const IncompressibleState2D& s) const {
  SpectralField2D psi(grid_);
  for (int i = 0; i < grid_.nx; ++i) {
    const double kx = wavenumber_x(grid_, i);
    for (int j = 0; j < psi.nky(); ++j) {
      const double ky = wavenumber_y(grid_, j);
      const double k2 = kx * kx + ky * ky;
      const std::size_t n = psi.index(i, j);
      psi[n] = k2 == 0.0 ? Complex(0.0) : -s.omega_hat[n] / k2;
    }
  }
  return psi;
}

ScalarField2D IncompressibleSolver::vorticity(const IncompressibleState2D& s) {
  return fft_.inverse(s.omega_hat);
}

VectorField2D IncompressibleSolver::velocity(const IncompressibleState2D& s) {
  const auto psi = streamfunction(s);
  VectorField2D v(grid_);
  for (int c = 0; c < 2; ++c) fft_.inverse(velocity_component_hat(psi, c).coeffs(), v.comp(c));
  return v;
}

double IncompressibleSolver::max_speed(const IncompressibleState2D& s) {
  return discrete_norm(velocity(s), kInfinity);
}

double IncompressibleSolver::stable_dt(const IncompressibleState2D& s, double cfl) {
  const double vmax = max_speed(s);
  if (vmax == 0.0) return kInfinity;
  return cfl * std::min(grid_.dx(), grid_.dy()) / vmax;
}

SpectralField2D IncompressibleSolver::rhs(const SpectralField2D& w) {
  const std::size_t n = grid_.cells();
  IncompressibleState2D tmp{w, 0.0, false};
  const auto psi = streamfunction(tmp);
  std::vector<double> v1(n), v2(n), wx(n), wy(n), prod(n);
  fft_.inverse(velocity_component_hat(psi, 0).coeffs(), v1);
  fft_.inverse(velocity_component_hat(psi, 1).coeffs(), v2);
  fft_.inverse(derivative(w, 1, 0).coeffs(), wx);
  fft_.inverse(derivative(w, 0, 1).coeffs(), wy);
  for (std::size_t m = 0; m < n; ++m) prod[m] = -(v1[m] * wx[m] + v2[m] * wy[m]);
  SpectralField2D out = fft_.forward(prod);
  for (int i = 0; i < grid_.nx; ++i)
    for (int j = 0; j < out.nky(); ++j)
      if (!retained(i, j)) out[out.index(i, j)] = 0.0;
  out[0] = 0.0;
  return out;
}

IncompressibleState2D IncompressibleSolver::euler_step(const IncompressibleState2D& s, double dt) {
  const SpectralField2D& w = s.omega_hat;
  auto axpy = [](const SpectralField2D& x, double a, const SpectralField2D& y) {
    SpectralField2D out = x;
    for (std::size_t m = 0; m < out.size(); ++m) out[m] += a * y[m];
    return out;
  };
  const auto k1 = rhs(w);
  const auto k2 = rhs(axpy(w, 0.5 * dt, k1));
  const auto k3 = rhs(axpy(w, 0.5 * dt, k2));
  const auto k4 = rhs(axpy(w, dt, k3));
  IncompressibleState2D out{w, s.time + dt, false};
  for (std::size_t m = 0; m < out.omega_hat.size(); ++m)
    out.omega_hat[m] += dt / 6.0 * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
  out.omega_hat[0] = s.omega_hat[0];
  out.under_resolved = high_band_fraction(out) > 1e-3;
  return out;
}

double IncompressibleSolver::high_band_fraction(const IncompressibleState2D& s) const {
  double total = 0.0, high = 0.0;
  for (int i = 0; i < grid_.nx; ++i) {
    const double kx = wavenumber_x(grid_, i);
    for (int j = 0; j < s.omega_hat.nky(); ++j) {
      const double ky = wavenumber_y(grid_, j);
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0) continue;
      const double e = hermitian_weight(grid_, j) * std::norm(s.omega_hat[s.omega_hat.index(i, j)]) / k2;
      total += e;
      // top third of the retained band |m| <= n/3
      if (9 * std::abs(mode_x(grid_, i)) > 2 * grid_.nx || 9 * j > 2 * grid_.ny) high += e;
    }
  }
  return total > 0.0 ? high / total : 0.0;
}

ScalarField2D IncompressibleSolver::recover_pressure(const IncompressibleState2D& s) {
  const auto v = velocity(s);
  const std::size_t n = grid_.cells();
  std::vector<double> prod(n);
  auto product_hat = [&](int a, int b) {
    for (std::size_t m = 0; m < n; ++m) prod[m] = v.at(a, m) * v.at(b, m);
    auto h = fft_.forward(prod);
    for (int i = 0; i < grid_.nx; ++i)
      for (int j = 0; j < h.nky(); ++j)
        if (!retained(i, j)) h[h.index(i, j)] = 0.0;
    return h;
  };
  const auto a11 = product_hat(0, 0), a12 = product_hat(0, 1), a22 = product_hat(1, 1);
  SpectralField2D pi(grid_);
  for (int i = 0; i < grid_.nx; ++i) {
    const double kx = wavenumber_x(grid_, i);
    for (int j = 0; j < pi.nky(); ++j) {
      const double ky = wavenumber_y(grid_, j);
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0) continue;
      const std::size_t m = pi.index(i, j);
      pi[m] = -(kx * kx * a11[m] + 2.0 * kx * ky * a12[m] + ky * ky * a22[m]) / k2;
    }
  }
  return fft_.inverse(pi);
}

VectorField2D IncompressibleSolver::velocity_time_derivative(const IncompressibleState2D& s) {
  const auto psi = streamfunction(s);
  const std::size_t n = grid_.cells();
  const auto v = velocity(s);
  const auto pi_hat = fft_.forward(recover_pressure(s));
  VectorField2D out(grid_);
  std::vector<double> dx(n), dy(n), gp(n);
  for (int c = 0; c < 2; ++c) {
    const auto vc = velocity_component_hat(psi, c);
    fft_.inverse(derivative(vc, 1, 0).coeffs(), dx);
    fft_.inverse(derivative(vc, 0, 1).coeffs(), dy);
    fft_.inverse(derivative(pi_hat, c == 0 ? 1 : 0, c == 0 ? 0 : 1).coeffs(), gp);
    auto o = out.comp(c);
    for (std::size_t m = 0; m < n; ++m) o[m] = -(v.at(0, m) * dx[m] + v.at(1, m) * dy[m]) - gp[m];
  }
  return out;
}

IncompressibleState2D IncompressibleSolver::advance(const IncompressibleState2D& s, double t_end,
                                                    double cfl, double max_dt) {
  IncompressibleState2D state = s;
  bool flagged = s.under_resolved;
  while (state.time < t_end) {
    double dt = std::min(stable_dt(state, cfl), max_dt);
    bool last = false;
    if (state.time + dt >= t_end) {
      dt = t_end - state.time;
      last = true;
    }
    state = euler_step(state, dt);
    flagged = flagged || state.under_resolved;
    if (last) state.time = t_end;
  }
  state.under_resolved = flagged;
  return state;
}

IncompressibleState2D euler_step(const IncompressibleState2D& state, double dt) {
  IncompressibleSolver solver(state.grid());
  return solver.euler_step(state, dt);
}

ScalarField2D recover_pressure(const IncompressibleState2D& state) {
  IncompressibleSolver solver(state.grid());
  return solver.recover_pressure(state);
}

}  // namespace thinmach
