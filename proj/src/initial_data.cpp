#include "thinmach/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "thinmach/acoustic.hpp"

namespace thinmach {

double Profile::operator()(double x1, double x2, double L) const {
  const double k0 = 2.0 * std::numbers::pi / L;
  double sum = 0.0;
  for (const auto& m : modes) sum += m.amplitude * std::cos(k0 * (m.n1 * x1 + m.n2 * x2) + m.phase);
  return sum;
}

Profile shear_streamfunction(double amplitude, int n, double L) {
  if (n == 0) throw Error(ErrorKind::invalid_argument, "shear mode must be nonzero");
  // psi = A L/(2 pi n) cos(2 pi n x2 / L)  =>  v1 = -d2 psi = A sin(2 pi n x2 / L)
  return Profile{{Mode{0, n, amplitude * L / (2.0 * std::numbers::pi * n), 0.0}}};
}

const char* to_string(DataKind kind) {
  return kind == DataKind::well_prepared ? "well-prepared" : "ill-prepared";
}

DataKind data_kind_from_string(const std::string& name) {
  if (name == "well-prepared") return DataKind::well_prepared;
  if (name == "ill-prepared") return DataKind::ill_prepared;
  throw Error(ErrorKind::config, "unknown data kind '" + name + "'");
}

namespace {

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double window_1d(double x, double L, const SupportBox& box) {
  if (box.taper_fraction == 0.0) return 1.0;  // full torus, validated below
  const double half = 0.5 * box.support_fraction * L;
  const double lo = 0.5 * L - half, hi = 0.5 * L + half;
  const double taper = box.taper_fraction * 2.0 * half;
  return smooth_step((x - lo) / taper) * smooth_step((hi - x) / taper);
}

}  // namespace

double SupportBox::window(double x1, double x2, double L) const {
  return window_1d(x1, L, *this) * window_1d(x2, L, *this);
}

bool SupportBox::contains(double x1, double x2, double L) const {
  if (taper_fraction == 0.0) return true;
  const double half = 0.5 * support_fraction * L;
  return std::abs(x1 - 0.5 * L) <= half && std::abs(x2 - 0.5 * L) <= half;
}

void DataRecipe::validate() const {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::invalid_argument, "recipe epsilon must be positive");
  if (!(eta > 0.0)) throw Error(ErrorKind::invalid_argument, "recipe eta must be positive");
  if (!(support.support_fraction > 0.0 && support.support_fraction <= 1.0))
    throw Error(ErrorKind::invalid_argument, "support_fraction must lie in (0, 1]");
  if (!(support.taper_fraction >= 0.0 && support.taper_fraction <= 0.5))
    throw Error(ErrorKind::invalid_argument, "taper_fraction must lie in [0, 0.5]");
  if (support.taper_fraction == 0.0 && support.support_fraction != 1.0)
    throw Error(ErrorKind::invalid_argument, "taper_fraction = 0 (no window) needs support_fraction = 1");
  if (kind == DataKind::well_prepared && (!s0.empty() || !psi0.empty()))
    throw Error(ErrorKind::invalid_argument, "well-prepared data cannot carry s0 or Psi0");
}

DataRecipe perturbed(const DataRecipe& recipe, std::uint64_t seed, double relative) {
  std::mt19937_64 rng(seed);
  auto xi = [&rng]() {
    // 53 random bits -> [0, 1) -> [-1, 1); avoids implementation-defined distributions.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
  };
  DataRecipe out = recipe;
  for (Profile* p : {&out.v0_stream, &out.s0, &out.psi0})
    for (auto& m : p->modes) m.amplitude *= 1.0 + relative * xi();
  return out;
}

namespace {

ScalarField2D windowed(const Profile& profile, const SupportBox& box, const Grid2D& g) {
  return sample(g, [&](double x, double y) {
    const double w = box.window(x, y, g.L);
    return w == 0.0 ? 0.0 : w * profile(x, y, g.L);
  });
}

}  // namespace

InitialFields2D build_initial_2d(const DataRecipe& recipe, const Grid2D& g, const PressureLaw& law) {
  recipe.validate();
  const RegularizationParams reg{recipe.eta};
  Fft2D fft(g);

  InitialFields2D f{ScalarField2D(g), ScalarField2D(g), VectorField2D(g), VectorField2D(g), ScalarField2D(g)};
  if (!recipe.s0.empty()) f.s0 = fft.inverse(regularize(fft.forward(windowed(recipe.s0, recipe.support, g)), reg));
  SpectralField2D psi_hat(g);
  if (!recipe.psi0.empty()) {
    psi_hat = regularize(fft.forward(windowed(recipe.psi0, recipe.support, g)), reg);
    f.psi0 = fft.inverse(psi_hat);
  }
  if (!recipe.v0_stream.empty()) {
    const auto stream_hat = fft.forward(windowed(recipe.v0_stream, recipe.support, g));
    fft.inverse((-1.0 * derivative(stream_hat, 0, 1)).coeffs(), f.v0.comp(0));
    fft.inverse(derivative(stream_hat, 1, 0).coeffs(), f.v0.comp(1));
  }
  VectorField2D grad_psi(g);
  fft.inverse(derivative(psi_hat, 1, 0).coeffs(), grad_psi.comp(0));
  fft.inverse(derivative(psi_hat, 0, 1).coeffs(), grad_psi.comp(1));
  for (int c = 0; c < 2; ++c)
    for (std::size_t n = 0; n < g.cells(); ++n) f.ubar0.at(c, n) = f.v0.at(c, n) + grad_psi.at(c, n);
  for (std::size_t n = 0; n < g.cells(); ++n) f.rhobar0[n] = law.rho_tilde() + recipe.epsilon * f.s0[n];
  return f;
}

FluidState3D build_initial_3d(const DataRecipe& recipe, const Grid3D& grid, const PressureLaw& law) {
  const auto f = build_initial_2d(recipe, grid.horizontal(), law);
  const double rho_min = *std::min_element(f.rhobar0.comp(0).begin(), f.rhobar0.comp(0).end());
  if (!(rho_min > 1e-10)) {
    std::ostringstream msg;
    msg << "eps * s0 drives the density to " << rho_min << "; need eps * ||s0||_inf < rho_tilde";
    throw Error(ErrorKind::positivity_loss, msg.str());
  }
  FluidState3D s(grid);
  for (int i = 0; i < grid.nx; ++i)
    for (int j = 0; j < grid.ny; ++j) {
      const std::size_t col = grid.horizontal().index(i, j);
      const double rho = f.rhobar0[col];
      for (int k = 0; k < grid.nz; ++k) {
        const std::size_t n = grid.index(i, j, k);
        s.rho[n] = rho;
        s.mom.at(0, n) = rho * f.ubar0.at(0, col);
        s.mom.at(1, n) = rho * f.ubar0.at(1, col);
        s.mom.at(2, n) = 0.0;
      }
    }
  return s;
}

IncompressibleState2D limit_initial_2d(const DataRecipe& recipe, const Grid2D& grid) {
  recipe.validate();
  IncompressibleSolver solver(grid);
  if (recipe.v0_stream.empty()) return solver.from_vorticity(ScalarField2D(grid));
  Fft2D fft(grid);
  const auto stream_hat = fft.forward(windowed(recipe.v0_stream, recipe.support, grid));
  IncompressibleState2D s{derivative(stream_hat, 2, 0) + derivative(stream_hat, 0, 2), 0.0, false};
  s.omega_hat[0] = 0.0;
  return s;
}

double convergence_hypothesis_value(const FluidState3D& state, const DataRecipe& recipe,
                                    const PressureLaw& law, double epsilon, double delta) {
  const Grid3D& g = state.grid();
  const auto f = build_initial_2d(recipe, g.horizontal(), law);
  const double inv_eps2 = 1.0 / (epsilon * epsilon);
  double sum = 0.0;
  for (std::size_t col = 0; col < g.columns(); ++col)
    for (int k = 0; k < g.nz; ++k) {
      const std::size_t n = col * g.nz + k;
      const double rho = state.rho[n];
      if (!(rho > 0.0)) throw Error(ErrorKind::invalid_state, "non-positive density");
      const double d0 = state.mom.at(0, n) / rho - f.ubar0.at(0, col);
      const double d1 = state.mom.at(1, n) / rho - f.ubar0.at(1, col);
      const double d2 = state.mom.at(2, n) / rho;
      sum += 0.5 * rho * (d0 * d0 + d1 * d1 + d2 * d2) + inv_eps2 * law.helmholtz(rho, f.rhobar0[col]);
    }
  return sum * g.cell_volume() / delta;
}

}  // namespace thinmach
