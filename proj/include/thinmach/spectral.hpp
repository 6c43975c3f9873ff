#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "thinmach/grid.hpp"

namespace thinmach {

using Complex = std::complex<double>;

/// Half-spectrum Fourier coefficients of a real periodic field on a Grid2D,
/// normalised so that f(x) = sum_k c_k exp(i k.x) over the full spectrum.
class SpectralField2D {
 public:
  SpectralField2D() = default;
  explicit SpectralField2D(const Grid2D& grid)
      : grid_(grid), coeffs_(grid.nx * static_cast<std::size_t>(grid.ny / 2 + 1)) {}

  const Grid2D& grid() const { return grid_; }
  int nky() const { return grid_.ny / 2 + 1; }
  std::size_t size() const { return coeffs_.size(); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * nky() + j; }

  std::span<Complex> coeffs() { return coeffs_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  Complex& operator[](std::size_t idx) { return coeffs_[idx]; }
  const Complex& operator[](std::size_t idx) const { return coeffs_[idx]; }

 private:
  Grid2D grid_{};
  std::vector<Complex> coeffs_;
};

/// Physical wavenumber of row i / column j of the half spectrum.
double wavenumber_x(const Grid2D& g, int i);
double wavenumber_y(const Grid2D& g, int j);
/// Signed integer mode index along x (j is already nonnegative along y).
int mode_x(const Grid2D& g, int i);
bool is_nyquist_x(const Grid2D& g, int i);
bool is_nyquist_y(const Grid2D& g, int j);
/// Multiplicity of column j when expanding the half spectrum to the full one.
double hermitian_weight(const Grid2D& g, int j);

/// Real-to-complex 2D transform pair with its own plans and aligned buffers.
/// One instance must not be used from two threads at once.
class Fft2D {
 public:
  explicit Fft2D(const Grid2D& grid);
  ~Fft2D();
  Fft2D(Fft2D&&) noexcept;
  Fft2D& operator=(Fft2D&&) noexcept;
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  const Grid2D& grid() const;

  SpectralField2D forward(std::span<const double> physical);
  SpectralField2D forward(const ScalarField2D& f) { return forward(f.comp(0)); }
  void forward(std::span<const double> physical, std::span<Complex> out);

  ScalarField2D inverse(const SpectralField2D& f);
  void inverse(std::span<const Complex> spectrum, std::span<double> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Spectral partial derivative d^ax/dx^ax d^ay/dy^ay; odd-order derivatives drop Nyquist modes.
SpectralField2D derivative(const SpectralField2D& f, int ax, int ay);

/// W^{k,p} norm (sum over all multi-indices |alpha| <= k of ||d^alpha f||_p^p, then the p-th root;
/// max over alpha for p = inf). p = 2 is evaluated exactly by Parseval.
double spectral_norm(const SpectralField2D& f, double p, int k, Fft2D& fft);
double spectral_norm(const SpectralField2D& f, double p, int k);

/// Homogeneous top-order seminorm (sum_{|alpha| = k} ||d^alpha f||_2^2)^(1/2), via Parseval.
double spectral_seminorm2(const SpectralField2D& f, int k);

/// Sample g(x, y) at the cell centres of `grid`.
ScalarField2D sample(const Grid2D& grid, const std::function<double(double, double)>& g);

/// Componentwise helpers on the half spectrum.
SpectralField2D operator+(const SpectralField2D& a, const SpectralField2D& b);
SpectralField2D operator-(const SpectralField2D& a, const SpectralField2D& b);
SpectralField2D operator*(double s, const SpectralField2D& a);

/// Sum over the full spectrum of |c_k|^2 (times the domain area gives the L^2 norm squared).
double spectral_power(const SpectralField2D& f);

}  // namespace thinmach
