#include <algorithm>
#include <cmath>

#include "thinmach/kernels.hpp"

namespace thinmach::kernels::scalar {

// Central physical flux minus a dissipation term written in (rho, u) jumps:
//   d_rho = la [rho],  d_m = la ubar [rho] + lu rhobar [u].
// The density jump is damped at the acoustic speed, velocity jumps at the
// (possibly slower) velocity speed. The operation order here is mirrored
// exactly by the AVX2 kernel so both paths round identically.
void face_fluxes(const CellArrays& L, const CellArrays& R, const FluxArrays& out, std::size_t n,
                 const FluxCoefficients& coef) {
  const double half = 0.5;
  for (std::size_t i = 0; i < n; ++i) {
    const double rl = L.rho[i], rr = R.rho[i];
    const double irl = 1.0 / rl, irr = 1.0 / rr;
    const double ul = L.mn[i] * irl, ur = R.mn[i] * irr;
    const double v1l = L.mt1[i] * irl, v1r = R.mt1[i] * irr;
    const double v2l = L.mt2[i] * irl, v2r = R.mt2[i] * irr;
    const double aul = std::fabs(ul), aur = std::fabs(ur);
    const double la = std::max(aul + L.c[i] * coef.acoustic_scale, aur + R.c[i] * coef.acoustic_scale);
    const double lu = std::max(aul + L.c[i] * coef.velocity_scale, aur + R.c[i] * coef.velocity_scale);
    const double drho = rr - rl;
    const double rbar = half * (rl + rr);
    const double lad = la * drho;
    const double lur = lu * rbar;

    out.rho[i] = half * (L.mn[i] + R.mn[i]) - half * lad;
    const double fnl = L.mn[i] * ul + L.p[i] * coef.pressure_scale;
    const double fnr = R.mn[i] * ur + R.p[i] * coef.pressure_scale;
    out.mn[i] = half * (fnl + fnr) - half * (lad * (half * (ul + ur)) + lur * (ur - ul));
    out.mt1[i] = half * (L.mt1[i] * ul + R.mt1[i] * ur) -
                 half * (lad * (half * (v1l + v1r)) + lur * (v1r - v1l));
    out.mt2[i] = half * (L.mt2[i] * ul + R.mt2[i] * ur) -
                 half * (lad * (half * (v2l + v2r)) + lur * (v2r - v2l));
  }
}

void accumulate_divergence(double* residual, const double* flux, std::ptrdiff_t stride, double inv_h,
                           std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) residual[i] -= (flux[i + stride] - flux[i]) * inv_h;
}

}  // namespace thinmach::kernels::scalar
