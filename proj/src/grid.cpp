#include "thinmach/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace thinmach {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::invalid_state: return "invalid-state";
    case ErrorKind::grid_mismatch: return "grid-mismatch";
    case ErrorKind::insufficient_samples: return "insufficient-samples";
    case ErrorKind::positivity_loss: return "positivity-loss";
    case ErrorKind::hypothesis_violated: return "hypothesis-violated";
    case ErrorKind::misaligned_times: return "misaligned-times";
    case ErrorKind::config: return "config";
    case ErrorKind::budget_exceeded: return "budget-exceeded";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Grid2D::Grid2D(int nx_, int ny_, double L_) : nx(nx_), ny(ny_), L(L_) {
  if (nx < 1 || ny < 1) throw Error(ErrorKind::invalid_argument, "Grid2D needs nx, ny >= 1");
  if (!(L > 0.0)) throw Error(ErrorKind::invalid_argument, "Grid2D needs L > 0");
}

Grid3D::Grid3D(int nx_, int ny_, int nz_, double L_, double delta_)
    : nx(nx_), ny(ny_), nz(nz_), L(L_), delta(delta_) {
  if (nx < 1 || ny < 1 || nz < 1)
    throw Error(ErrorKind::invalid_argument, "Grid3D needs nx, ny, nz >= 1");
  if (!(L > 0.0)) throw Error(ErrorKind::invalid_argument, "Grid3D needs L > 0");
  if (!(delta > 0.0)) throw Error(ErrorKind::invalid_argument, "Grid3D needs delta > 0");
}

namespace detail {

double lp_norm(std::span<const double> mag, double cell_measure, double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::invalid_argument, "norm exponent must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : mag) m = std::max(m, v);
    return m;
  }
  // Scale by the max entry so large exponents do not overflow.
  double scale = 0.0;
  for (double v : mag) scale = std::max(scale, v);
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (double v : mag) sum += std::pow(v / scale, p);
  return scale * std::pow(sum * cell_measure, 1.0 / p);
}

}  // namespace detail

double time_norm(std::span<const double> times, std::span<const double> values, double q) {
  if (times.size() != values.size() || times.empty())
    throw Error(ErrorKind::invalid_argument, "time_norm needs one value per sample time");
  if (!(q >= 1.0)) throw Error(ErrorKind::invalid_argument, "time exponent must be >= 1");
  if (std::isinf(q)) return *std::max_element(values.begin(), values.end());
  if (times.size() < 2)
    throw Error(ErrorKind::insufficient_samples, "finite-q time norm needs at least two snapshots");
  double integral = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double h = times[i] - times[i - 1];
    integral += 0.5 * h * (std::pow(values[i - 1], q) + std::pow(values[i], q));
  }
  return std::pow(integral, 1.0 / q);
}

}  // namespace thinmach
