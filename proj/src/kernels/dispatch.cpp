#include <atomic>
#include <cstdlib>
#include <string_view>

#include "thinmach/kernels.hpp"

namespace thinmach::kernels {

const char* name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool available(Isa isa) {
  if (isa == Isa::scalar) return true;
#if defined(THINMACH_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa detect() { return available(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

namespace {

Isa initial_isa() {
  if (const char* env = std::getenv("THINMACH_KERNELS")) {
    const std::string_view v(env);
    if (v == "scalar") return Isa::scalar;
    if (v == "avx2" && available(Isa::avx2)) return Isa::avx2;
  }
  return detect();
}

std::atomic<Isa>& active_isa() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

Isa active() { return active_isa().load(std::memory_order_relaxed); }

void set_active(Isa isa) { active_isa().store(available(isa) ? isa : Isa::scalar); }

void face_fluxes(Isa isa, const CellArrays& left, const CellArrays& right, const FluxArrays& out,
                 std::size_t n, const FluxCoefficients& coef) {
  if (isa == Isa::avx2 && available(Isa::avx2))
    avx2::face_fluxes(left, right, out, n, coef);
  else
    scalar::face_fluxes(left, right, out, n, coef);
}

void accumulate_divergence(Isa isa, double* residual, const double* flux, std::ptrdiff_t stride,
                           double inv_h, std::size_t n) {
  if (isa == Isa::avx2 && available(Isa::avx2))
    avx2::accumulate_divergence(residual, flux, stride, inv_h, n);
  else
    scalar::accumulate_divergence(residual, flux, stride, inv_h, n);
}

}  // namespace thinmach::kernels
