#include "thinmach/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

namespace thinmach {

namespace {
// FFTW's planner is not reentrant; execution with distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

double wavenumber_x(const Grid2D& g, int i) { return 2.0 * std::numbers::pi / g.L * mode_x(g, i); }
double wavenumber_y(const Grid2D& g, int j) { return 2.0 * std::numbers::pi / g.L * j; }
int mode_x(const Grid2D& g, int i) { return i <= g.nx / 2 ? i : i - g.nx; }
bool is_nyquist_x(const Grid2D& g, int i) { return g.nx % 2 == 0 && i == g.nx / 2; }
bool is_nyquist_y(const Grid2D& g, int j) { return g.ny % 2 == 0 && j == g.ny / 2; }
double hermitian_weight(const Grid2D& g, int j) {
  return (j == 0 || is_nyquist_y(g, j)) ? 1.0 : 2.0;
}

struct Fft2D::Impl {
  Grid2D grid;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit Impl(const Grid2D& g) : grid(g) {
    const std::size_t nspec = g.nx * static_cast<std::size_t>(g.ny / 2 + 1);
    std::lock_guard lock(planner_mutex());
    real = fftw_alloc_real(g.cells());
    spec = fftw_alloc_complex(nspec);
    fwd = fftw_plan_dft_r2c_2d(g.nx, g.ny, real, spec, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_2d(g.nx, g.ny, spec, real, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(real);
    fftw_free(spec);
  }
};

Fft2D::Fft2D(const Grid2D& grid) : impl_(std::make_unique<Impl>(grid)) {}
Fft2D::~Fft2D() = default;
Fft2D::Fft2D(Fft2D&&) noexcept = default;
Fft2D& Fft2D::operator=(Fft2D&&) noexcept = default;

const Grid2D& Fft2D::grid() const { return impl_->grid; }

void Fft2D::forward(std::span<const double> physical, std::span<Complex> out) {
  const Grid2D& g = impl_->grid;
  if (physical.size() != g.cells() || out.size() != g.nx * static_cast<std::size_t>(g.ny / 2 + 1))
    throw Error(ErrorKind::grid_mismatch, "Fft2D::forward size mismatch");
  std::copy(physical.begin(), physical.end(), impl_->real);
  fftw_execute(impl_->fwd);
  const double scale = 1.0 / static_cast<double>(g.cells());
  for (std::size_t n = 0; n < out.size(); ++n)
    out[n] = Complex(impl_->spec[n][0] * scale, impl_->spec[n][1] * scale);
}

SpectralField2D Fft2D::forward(std::span<const double> physical) {
  SpectralField2D f(impl_->grid);
  forward(physical, f.coeffs());
  return f;
}

void Fft2D::inverse(std::span<const Complex> spectrum, std::span<double> out) {
  const Grid2D& g = impl_->grid;
  if (out.size() != g.cells() || spectrum.size() != g.nx * static_cast<std::size_t>(g.ny / 2 + 1))
    throw Error(ErrorKind::grid_mismatch, "Fft2D::inverse size mismatch");
  for (std::size_t n = 0; n < spectrum.size(); ++n) {
    impl_->spec[n][0] = spectrum[n].real();
    impl_->spec[n][1] = spectrum[n].imag();
  }
  fftw_execute(impl_->bwd);
  std::copy(impl_->real, impl_->real + g.cells(), out.begin());
}

ScalarField2D Fft2D::inverse(const SpectralField2D& f) {
  ScalarField2D out(impl_->grid);
  inverse(f.coeffs(), out.comp(0));
  return out;
}

namespace {

// (i k)^order with odd orders dropping the Nyquist mode.
Complex derivative_factor(double k, int order, bool nyquist) {
  if (order == 0) return 1.0;
  if (nyquist && order % 2 == 1) return 0.0;
  Complex f = 1.0;
  for (int n = 0; n < order; ++n) f *= Complex(0.0, k);
  return f;
}

}  // namespace

SpectralField2D derivative(const SpectralField2D& f, int ax, int ay) {
  const Grid2D& g = f.grid();
  SpectralField2D out(g);
  for (int i = 0; i < g.nx; ++i) {
    const Complex fx = derivative_factor(wavenumber_x(g, i), ax, is_nyquist_x(g, i));
    for (int j = 0; j < f.nky(); ++j) {
      const Complex fy = derivative_factor(wavenumber_y(g, j), ay, is_nyquist_y(g, j));
      out[f.index(i, j)] = fx * fy * f[f.index(i, j)];
    }
  }
  return out;
}

double spectral_power(const SpectralField2D& f) {
  const Grid2D& g = f.grid();
  double sum = 0.0;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < f.nky(); ++j) sum += hermitian_weight(g, j) * std::norm(f[f.index(i, j)]);
  return sum;
}

namespace {

double multi_index_power_sum(const SpectralField2D& f, int k, bool top_order_only) {
  const Grid2D& g = f.grid();
  double sum = 0.0;
  for (int order = top_order_only ? k : 0; order <= k; ++order) {
    for (int ax = 0; ax <= order; ++ax) {
      const int ay = order - ax;
      for (int i = 0; i < g.nx; ++i) {
        const double fx = std::norm(derivative_factor(wavenumber_x(g, i), ax, is_nyquist_x(g, i)));
        for (int j = 0; j < f.nky(); ++j) {
          const double fy = std::norm(derivative_factor(wavenumber_y(g, j), ay, is_nyquist_y(g, j)));
          sum += hermitian_weight(g, j) * fx * fy * std::norm(f[f.index(i, j)]);
        }
      }
    }
  }
  return sum;
}

}  // namespace

double spectral_seminorm2(const SpectralField2D& f, int k) {
  return std::sqrt(f.grid().area() * multi_index_power_sum(f, k, true));
}

double spectral_norm(const SpectralField2D& f, double p, int k, Fft2D& fft) {
  if (k < 0) throw Error(ErrorKind::invalid_argument, "Sobolev order must be >= 0");
  if (!(p >= 1.0)) throw Error(ErrorKind::invalid_argument, "norm exponent must be >= 1");
  const Grid2D& g = f.grid();
  if (p == 2.0) return std::sqrt(g.area() * multi_index_power_sum(f, k, false));

  ScalarField2D phys(g);
  double total = 0.0;
  for (int order = 0; order <= k; ++order) {
    for (int ax = 0; ax <= order; ++ax) {
      fft.inverse(derivative(f, ax, order - ax).coeffs(), phys.comp(0));
      const double n = discrete_norm(phys, p);
      total = std::isinf(p) ? std::max(total, n) : total + std::pow(n, p);
    }
  }
  return std::isinf(p) ? total : std::pow(total, 1.0 / p);
}

double spectral_norm(const SpectralField2D& f, double p, int k) {
  if (p == 2.0) {
    if (k < 0) throw Error(ErrorKind::invalid_argument, "Sobolev order must be >= 0");
    return std::sqrt(f.grid().area() * multi_index_power_sum(f, k, false));
  }
  Fft2D fft(f.grid());
  return spectral_norm(f, p, k, fft);
}

ScalarField2D sample(const Grid2D& grid, const std::function<double(double, double)>& g) {
  ScalarField2D out(grid);
  for (int i = 0; i < grid.nx; ++i)
    for (int j = 0; j < grid.ny; ++j) out[grid.index(i, j)] = g(grid.x(i), grid.y(j));
  return out;
}

SpectralField2D operator+(const SpectralField2D& a, const SpectralField2D& b) {
  SpectralField2D out = a;
  for (std::size_t n = 0; n < out.size(); ++n) out[n] += b[n];
  return out;
}

SpectralField2D operator-(const SpectralField2D& a, const SpectralField2D& b) {
  SpectralField2D out = a;
  for (std::size_t n = 0; n < out.size(); ++n) out[n] -= b[n];
  return out;
}

SpectralField2D operator*(double s, const SpectralField2D& a) {
  SpectralField2D out = a;
  for (auto& c : out.coeffs()) c *= s;
  return out;
}

}  // namespace thinmach
