#include "thinmach/relative_energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace thinmach {

ReferencePair::ReferencePair(ScalarField2D r_, VectorField2D U_) : r(std::move(r_)), U(std::move(U_)) {
  if (!(r.grid() == U.grid())) throw Error(ErrorKind::grid_mismatch, "reference r and U on different grids");
  for (double v : r.comp(0))
    if (!(v > 0.0)) throw Error(ErrorKind::invalid_argument, "reference density must be positive");
}

ReferencePair ReferencePair::rest(const Grid2D& grid, double rho_tilde) {
  return ReferencePair(ScalarField2D(grid, rho_tilde), VectorField2D(grid, 0.0));
}

HorizontalBox HorizontalBox::central(double L, double fraction) {
  const double h = 0.5 * fraction * L;
  return {0.5 * L - h, 0.5 * L + h, 0.5 * L - h, 0.5 * L + h};
}

void EnsembleMeasure::validate() const {
  if (members.empty()) throw Error(ErrorKind::invalid_argument, "empty ensemble");
  for (const auto& m : members) {
    if (!(m.grid() == members.front().grid())) throw Error(ErrorKind::grid_mismatch, "ensemble members on different grids");
    if (m.time != members.front().time) throw Error(ErrorKind::misaligned_times, "ensemble members at different times");
  }
}

namespace {

void check_grids(const Grid3D& g, const Grid2D& h) {
  if (!(g.horizontal() == h)) throw Error(ErrorKind::grid_mismatch, "reference grid does not match the state");
}

}  // namespace

RelativeEnergyReport relative_energy(const FluidState3D& state, const ReferencePair& ref, const PressureLaw& law,
                                     double epsilon, double delta, const std::optional<HorizontalBox>& restrict_to) {
  return relative_energy(state, ref, law, epsilon, delta, restrict_to, CutoffPsi::around(law.rho_tilde()));
}

RelativeEnergyReport relative_energy(const FluidState3D& state, const ReferencePair& ref, const PressureLaw& law,
                                     double epsilon, double delta, const std::optional<HorizontalBox>& restrict_to,
                                     const CutoffPsi& psi) {
  const Grid3D& g = state.grid();
  check_grids(g, ref.grid());
  if (!(epsilon > 0.0) || !(delta > 0.0)) throw Error(ErrorKind::invalid_argument, "epsilon and delta must be positive");
  const double inv_eps2 = 1.0 / (epsilon * epsilon);
  double kin = 0.0, ess = 0.0, res = 0.0;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      if (restrict_to && !restrict_to->contains(g.x(i), g.y(j))) continue;
      const std::size_t col = g.horizontal().index(i, j);
      const double r = ref.r[col], U0 = ref.U.at(0, col), U1 = ref.U.at(1, col);
      for (int k = 0; k < g.nz; ++k) {
        const std::size_t n = g.index(i, j, k);
        const double rho = state.rho[n];
        if (!(rho > 0.0)) throw Error(ErrorKind::invalid_state, "non-positive density in relative energy");
        const double d0 = state.mom.at(0, n) / rho - U0;
        const double d1 = state.mom.at(1, n) / rho - U1;
        const double d2 = state.mom.at(2, n) / rho;
        kin += 0.5 * rho * (d0 * d0 + d1 * d1 + d2 * d2);
        const double h = inv_eps2 * law.helmholtz(rho, r);
        const double w = psi(rho);
        ess += w * h;
        res += h - w * h;
      }
    }
  const double scale = g.cell_volume() / delta;
  RelativeEnergyReport rep;
  rep.kinetic_part = kin * scale;
  rep.ess_pressure = ess * scale;
  rep.res_pressure = res * scale;
  rep.pressure_part = rep.ess_pressure + rep.res_pressure;
  rep.value = rep.kinetic_part + rep.pressure_part;
  rep.time = state.time;
  return rep;
}

RelativeEnergyReport relative_energy(const EnsembleMeasure& measure, const ReferencePair& ref, const PressureLaw& law,
                                     double epsilon, double delta, const std::optional<HorizontalBox>& restrict_to) {
  measure.validate();
  RelativeEnergyReport mean;
  for (const auto& m : measure.members) {
    const auto r = relative_energy(m, ref, law, epsilon, delta, restrict_to);
    mean.kinetic_part += r.kinetic_part;
    mean.ess_pressure += r.ess_pressure;
    mean.res_pressure += r.res_pressure;
  }
  const double n = static_cast<double>(measure.members.size());
  mean.kinetic_part /= n;
  mean.ess_pressure /= n;
  mean.res_pressure /= n;
  mean.pressure_part = mean.ess_pressure + mean.res_pressure;
  mean.value = mean.kinetic_part + mean.pressure_part;
  mean.time = measure.time();
  return mean;
}

ScalarField3D ensemble_observable(const EnsembleMeasure& measure, const Observable& G) {
  measure.validate();
  const Grid3D& g = measure.grid();
  ScalarField3D out(g);
  const double inv_n = 1.0 / static_cast<double>(measure.members.size());
  for (const auto& s : measure.members)
    for (std::size_t n = 0; n < g.cells(); ++n) {
      const double v = G(s.rho[n], {s.mom.at(0, n), s.mom.at(1, n), s.mom.at(2, n)});
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "observable undefined at rho = " << s.rho[n] << " (cell " << n << ")";
        throw Error(ErrorKind::invalid_state, msg.str());
      }
      out[n] += v;
    }
  for (std::size_t n = 0; n < g.cells(); ++n) out[n] *= inv_n;
  return out;
}

ReferenceSample make_reference_sample(const AcousticState2D& acoustic, const IncompressibleState2D& flow,
                                      IncompressibleSolver& solver, const PressureLaw& law) {
  const Grid2D& g = acoustic.grid();
  if (!(flow.grid() == g) || !(solver.grid() == g))
    throw Error(ErrorKind::grid_mismatch, "acoustic and incompressible states on different grids");
  if (std::abs(flow.time - acoustic.time) > 1e-12 * std::max(1.0, std::abs(flow.time)))
    throw Error(ErrorKind::misaligned_times, "acoustic and incompressible states at different times");
  Fft2D fft(g);
  const double eps = acoustic.epsilon, rt = acoustic.rho_tilde;
  auto phys = [&](const SpectralField2D& f) { return fft.inverse(f); };

  const ScalarField2D s = phys(acoustic.s_hat);
  const SpectralField2D psi_x = derivative(acoustic.psi_hat, 1, 0), psi_y = derivative(acoustic.psi_hat, 0, 1);
  const ScalarField2D lap_psi = phys(derivative(acoustic.psi_hat, 2, 0) + derivative(acoustic.psi_hat, 0, 2));
  const ScalarField2D s_x = phys(derivative(acoustic.s_hat, 1, 0)), s_y = phys(derivative(acoustic.s_hat, 0, 1));

  const SpectralField2D stream = solver.streamfunction(flow);
  // v = (-d2 stream, d1 stream)
  const SpectralField2D v0 = -1.0 * derivative(stream, 0, 1), v1 = derivative(stream, 1, 0);
  const VectorField2D v = solver.velocity(flow);
  const VectorField2D dtv = solver.velocity_time_derivative(flow);

  ReferenceSample out;
  out.time = acoustic.time;
  ScalarField2D r(g);
  VectorField2D U(g);
  const ScalarField2D px = phys(psi_x), py = phys(psi_y);
  for (std::size_t n = 0; n < g.cells(); ++n) {
    r[n] = rt + eps * s[n];
    U.at(0, n) = v.at(0, n) + px[n];
    U.at(1, n) = v.at(1, n) + py[n];
  }
  out.pair = ReferencePair(std::move(r), std::move(U));

  const ScalarField2D grads[4] = {phys(derivative(v0, 1, 0) + derivative(psi_x, 1, 0)),
                                  phys(derivative(v0, 0, 1) + derivative(psi_x, 0, 1)),
                                  phys(derivative(v1, 1, 0) + derivative(psi_y, 1, 0)),
                                  phys(derivative(v1, 0, 1) + derivative(psi_y, 0, 1))};
  for (int c = 0; c < 4; ++c) out.grad_U[c] = grads[c];

  const double wave = acoustic.a2 / (rt * eps);
  out.dt_U = VectorField2D(g);
  out.div_U = lap_psi;
  out.dt_dP = ScalarField2D(g);
  out.grad_dP = VectorField2D(g);
  for (std::size_t n = 0; n < g.cells(); ++n) {
    out.dt_U.at(0, n) = dtv.at(0, n) - wave * s_x[n];
    out.dt_U.at(1, n) = dtv.at(1, n) - wave * s_y[n];
    const double d2P = law.potential_second_derivative(out.pair.r[n]);
    out.dt_dP[n] = d2P * (-rt * lap_psi[n]);
    out.grad_dP.at(0, n) = d2P * eps * s_x[n];
    out.grad_dP.at(1, n) = d2P * eps * s_y[n];
  }
  return out;
}

RemainderSeries remainder_terms(const SnapshotSeries<FluidState3D>& states, const std::vector<ReferenceSample>& refs,
                                const PressureLaw& law, double epsilon, double delta) {
  if (states.size() != refs.size())
    throw Error(ErrorKind::misaligned_times, "state and reference series differ in length");
  RemainderSeries out;
  const double inv_eps2 = 1.0 / (epsilon * epsilon);
  for (std::size_t t = 0; t < states.size(); ++t) {
    const FluidState3D& s = states[t];
    const ReferenceSample& ref = refs[t];
    const double ts = states.times()[t];
    if (std::abs(ts - ref.time) > 1e-12 * std::max(1.0, std::abs(ts)))
      throw Error(ErrorKind::misaligned_times, "snapshot and reference times differ");
    const Grid3D& g = s.grid();
    check_grids(g, ref.pair.grid());
    double r1 = 0.0, r2 = 0.0;
    for (std::size_t col = 0; col < g.columns(); ++col) {
      const double U[2] = {ref.pair.U.at(0, col), ref.pair.U.at(1, col)};
      const double dU[2] = {ref.dt_U.at(0, col), ref.dt_U.at(1, col)};
      const double gU[4] = {ref.grad_U[0][col], ref.grad_U[1][col], ref.grad_U[2][col], ref.grad_U[3][col]};
      const double r = ref.pair.r[col];
      for (int k = 0; k < g.nz; ++k) {
        const std::size_t n = col * g.nz + k;
        const double rho = s.rho[n];
        if (!(rho > 0.0)) throw Error(ErrorKind::invalid_state, "non-positive density in remainder");
        const double m[2] = {s.mom.at(0, n), s.mom.at(1, n)};
        const double u[2] = {m[0] / rho, m[1] / rho};
        for (int i = 0; i < 2; ++i) {
          const double transport = dU[i] + u[0] * gU[2 * i] + u[1] * gU[2 * i + 1];
          r1 += transport * (rho * U[i] - m[i]);
        }
        r2 += (r - rho) * ref.dt_dP[col] - law.pressure(rho) * ref.div_U[col] -
              (m[0] * ref.grad_dP.at(0, col) + m[1] * ref.grad_dP.at(1, col));
      }
    }
    const double scale = g.cell_volume() / delta;
    out.times.push_back(ts);
    out.R1.push_back(r1 * scale);
    out.R2.push_back(r2 * scale * inv_eps2);
  }
  return out;
}

UniformBoundReport uniform_bound_report(const FluidState3D& state, const PressureLaw& law, double epsilon,
                                        double delta, const CutoffPsi& psi) {
  const Grid3D& g = state.grid();
  const double rt = law.rho_tilde(), gamma = law.gamma();
  ScalarField3D ess_rho(g), res_rho(g);
  VectorField3D ess_m(g), res_m(g);
  double energy = 0.0;
  const double inv_eps2 = 1.0 / (epsilon * epsilon);
  for (std::size_t n = 0; n < g.cells(); ++n) {
    const double rho = state.rho[n];
    if (!(rho > 0.0)) throw Error(ErrorKind::invalid_state, "non-positive density in bound report");
    const double w = psi(rho);
    ess_rho[n] = w * (rho - rt) / epsilon;
    res_rho[n] = (1.0 - w) * rho;
    double m2 = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double m = state.mom.at(c, n);
      ess_m.at(c, n) = w * m;
      res_m.at(c, n) = (1.0 - w) * m;
      m2 += m * m;
    }
    energy += 0.5 * m2 / rho + inv_eps2 * law.helmholtz(rho, rt);
  }
  UniformBoundReport rep;
  rep.rho_ess_norm = discrete_norm(vertical_average(ess_rho), 2.0);
  rep.rho_res_norm = std::pow(epsilon, -2.0 / gamma) * discrete_norm(vertical_average(res_rho), gamma);
  rep.mbar_norm = discrete_norm(vertical_average(ess_m), 2.0) +
                  discrete_norm(vertical_average(res_m), 2.0 * gamma / (gamma + 1.0));
  rep.energy = energy * g.cell_volume() / delta;
  return rep;
}

}  // namespace thinmach
