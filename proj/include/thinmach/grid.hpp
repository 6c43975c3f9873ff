#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "thinmach/errors.hpp"

namespace thinmach {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Doubly periodic square of side `L` with nx*ny cells.
struct Grid2D {
  int nx = 1;
  int ny = 1;
  double L = 1.0;

  Grid2D() = default;
  Grid2D(int nx_, int ny_, double L_);

  double dx() const { return L / nx; }
  double dy() const { return L / ny; }
  double cell_area() const { return dx() * dy(); }
  double area() const { return L * L; }
  std::size_t cells() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * ny + j; }
  double x(int i) const { return (i + 0.5) * dx(); }
  double y(int j) const { return (j + 0.5) * dy(); }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

/// Thin layer (0, delta) x [0, L)^2: periodic horizontally, walls at x3 = 0 and x3 = delta.
/// Storage order is row-major with x3 fastest.
struct Grid3D {
  int nx = 1;
  int ny = 1;
  int nz = 1;
  double L = 1.0;
  double delta = 1.0;

  Grid3D() = default;
  Grid3D(int nx_, int ny_, int nz_, double L_, double delta_);

  double dx() const { return L / nx; }
  double dy() const { return L / ny; }
  double dz() const { return delta / nz; }
  double cell_volume() const { return dx() * dy() * dz(); }
  std::size_t cells() const { return static_cast<std::size_t>(nx) * ny * nz; }
  std::size_t columns() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * ny + j) * nz + k;
  }
  double x(int i) const { return (i + 0.5) * dx(); }
  double y(int j) const { return (j + 0.5) * dy(); }
  double z(int k) const { return (k + 0.5) * dz(); }

  /// The compatible 2D grid (same nx, ny, L).
  Grid2D horizontal() const { return Grid2D(nx, ny, L); }

  friend bool operator==(const Grid3D&, const Grid3D&) = default;
};

/// Cell-centred field with `Components` values per cell, stored component-major.
template <class GridT, int Components>
class Field {
 public:
  static constexpr int components = Components;

  Field() = default;
  explicit Field(const GridT& grid, double fill = 0.0)
      : grid_(grid), data_(grid.cells() * Components, fill) {}

  const GridT& grid() const { return grid_; }
  std::size_t cells() const { return grid_.cells(); }

  std::span<double> comp(int c) { return {data_.data() + c * cells(), cells()}; }
  std::span<const double> comp(int c) const { return {data_.data() + c * cells(), cells()}; }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  double& at(int c, std::size_t idx) { return data_[c * cells() + idx]; }
  double at(int c, std::size_t idx) const { return data_[c * cells() + idx]; }
  double& operator[](std::size_t idx) requires(Components == 1) { return data_[idx]; }
  double operator[](std::size_t idx) const requires(Components == 1) { return data_[idx]; }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

 private:
  GridT grid_{};
  std::vector<double> data_;
};

using ScalarField2D = Field<Grid2D, 1>;
using VectorField2D = Field<Grid2D, 2>;
using ScalarField3D = Field<Grid3D, 1>;
using VectorField3D = Field<Grid3D, 3>;

/// Time-ordered snapshots on a common grid.
template <class Snapshot>
class SnapshotSeries {
 public:
  void push(double time, Snapshot snapshot) {
    if (!times_.empty()) {
      if (!(time > times_.back()))
        throw Error(ErrorKind::invalid_argument, "snapshot times must be strictly increasing");
      if (!(grid_of(snapshot) == grid_of(snapshots_.front())))
        throw Error(ErrorKind::grid_mismatch, "snapshot on a different grid");
    }
    times_.push_back(time);
    snapshots_.push_back(std::move(snapshot));
  }

  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Snapshot>& snapshots() const { return snapshots_; }
  const Snapshot& operator[](std::size_t i) const { return snapshots_[i]; }
  const Snapshot& back() const { return snapshots_.back(); }

 private:
  template <class S>
  static const auto& grid_of(const S& s) { return s.grid(); }

  std::vector<double> times_;
  std::vector<Snapshot> snapshots_;
};

/// Column-wise mean over the nz vertical cells.
template <int C>
Field<Grid2D, C> vertical_average(const Field<Grid3D, C>& f) {
  const Grid3D& g = f.grid();
  Field<Grid2D, C> out(g.horizontal());
  for (int c = 0; c < C; ++c) {
    auto src = f.comp(c);
    auto dst = out.comp(c);
    for (std::size_t col = 0; col < g.columns(); ++col) {
      double sum = 0.0;
      for (int k = 0; k < g.nz; ++k) sum += src[col * g.nz + k];
      dst[col] = sum / g.nz;
    }
  }
  return out;
}

namespace detail {
double lp_norm(std::span<const double> cell_magnitudes, double cell_measure, double p);

template <class GridT, int C>
std::vector<double> magnitudes(const Field<GridT, C>& f) {
  std::vector<double> mag(f.cells());
  for (std::size_t i = 0; i < f.cells(); ++i) {
    if constexpr (C == 1) {
      mag[i] = std::abs(f.at(0, i));
    } else {
      double s = 0.0;
      for (int c = 0; c < C; ++c) s += f.at(c, i) * f.at(c, i);
      mag[i] = std::sqrt(s);
    }
  }
  return mag;
}

inline double cell_measure(const Grid2D& g) { return g.cell_area(); }
inline double cell_measure(const Grid3D& g) { return g.cell_volume(); }
}  // namespace detail

/// Midpoint-quadrature L^p norm of a finite-volume field (Euclidean magnitude for vectors).
/// Derivatives are not defined on finite-volume fields, so `sobolev_order` must be 0.
template <class GridT, int C>
double discrete_norm(const Field<GridT, C>& f, double p, int sobolev_order = 0) {
  if (sobolev_order != 0)
    throw Error(ErrorKind::invalid_argument,
                "derivatives are unavailable on finite-volume fields (k > 0)");
  auto mag = detail::magnitudes(f);
  return detail::lp_norm(mag, detail::cell_measure(f.grid()), p);
}

/// L^q-in-time norm of sampled spatial norms: composite trapezoid of value^q, then q-th root.
double time_norm(std::span<const double> times, std::span<const double> spatial_norms, double q);

template <class Snapshot, class SpatialNorm>
double time_norm(const SnapshotSeries<Snapshot>& series, double q, SpatialNorm&& spatial) {
  std::vector<double> values;
  values.reserve(series.size());
  for (const auto& s : series.snapshots()) values.push_back(spatial(s));
  return time_norm(series.times(), values, q);
}

}  // namespace thinmach
