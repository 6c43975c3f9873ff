#include "thinmach/kernels.hpp"

#if defined(THINMACH_HAVE_AVX2)
#include <immintrin.h>
#endif

namespace thinmach::kernels::avx2 {

#if defined(THINMACH_HAVE_AVX2)

namespace {
inline __m256d vabs(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }
}  // namespace

void face_fluxes(const CellArrays& L, const CellArrays& R, const FluxArrays& out, std::size_t n,
                 const FluxCoefficients& coef) {
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d ps = _mm256_set1_pd(coef.pressure_scale);
  const __m256d as = _mm256_set1_pd(coef.acoustic_scale);
  const __m256d vs = _mm256_set1_pd(coef.velocity_scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d rl = _mm256_loadu_pd(L.rho + i), rr = _mm256_loadu_pd(R.rho + i);
    const __m256d mnl = _mm256_loadu_pd(L.mn + i), mnr = _mm256_loadu_pd(R.mn + i);
    const __m256d m1l = _mm256_loadu_pd(L.mt1 + i), m1r = _mm256_loadu_pd(R.mt1 + i);
    const __m256d m2l = _mm256_loadu_pd(L.mt2 + i), m2r = _mm256_loadu_pd(R.mt2 + i);
    const __m256d cl = _mm256_loadu_pd(L.c + i), cr = _mm256_loadu_pd(R.c + i);
    const __m256d pl = _mm256_loadu_pd(L.p + i), pr = _mm256_loadu_pd(R.p + i);

    const __m256d irl = _mm256_div_pd(one, rl), irr = _mm256_div_pd(one, rr);
    const __m256d ul = _mm256_mul_pd(mnl, irl), ur = _mm256_mul_pd(mnr, irr);
    const __m256d v1l = _mm256_mul_pd(m1l, irl), v1r = _mm256_mul_pd(m1r, irr);
    const __m256d v2l = _mm256_mul_pd(m2l, irl), v2r = _mm256_mul_pd(m2r, irr);
    const __m256d aul = vabs(ul), aur = vabs(ur);
    const __m256d la = _mm256_max_pd(_mm256_add_pd(aul, _mm256_mul_pd(cl, as)),
                                     _mm256_add_pd(aur, _mm256_mul_pd(cr, as)));
    const __m256d lu = _mm256_max_pd(_mm256_add_pd(aul, _mm256_mul_pd(cl, vs)),
                                     _mm256_add_pd(aur, _mm256_mul_pd(cr, vs)));
    const __m256d drho = _mm256_sub_pd(rr, rl);
    const __m256d rbar = _mm256_mul_pd(half, _mm256_add_pd(rl, rr));
    const __m256d lad = _mm256_mul_pd(la, drho);
    const __m256d lur = _mm256_mul_pd(lu, rbar);

    const __m256d frho = _mm256_sub_pd(_mm256_mul_pd(half, _mm256_add_pd(mnl, mnr)),
                                       _mm256_mul_pd(half, lad));
    _mm256_storeu_pd(out.rho + i, frho);

    const __m256d fnl = _mm256_add_pd(_mm256_mul_pd(mnl, ul), _mm256_mul_pd(pl, ps));
    const __m256d fnr = _mm256_add_pd(_mm256_mul_pd(mnr, ur), _mm256_mul_pd(pr, ps));
    const __m256d dn = _mm256_add_pd(
        _mm256_mul_pd(lad, _mm256_mul_pd(half, _mm256_add_pd(ul, ur))),
        _mm256_mul_pd(lur, _mm256_sub_pd(ur, ul)));
    _mm256_storeu_pd(out.mn + i, _mm256_sub_pd(_mm256_mul_pd(half, _mm256_add_pd(fnl, fnr)),
                                               _mm256_mul_pd(half, dn)));

    const __m256d d1 = _mm256_add_pd(
        _mm256_mul_pd(lad, _mm256_mul_pd(half, _mm256_add_pd(v1l, v1r))),
        _mm256_mul_pd(lur, _mm256_sub_pd(v1r, v1l)));
    const __m256d f1 = _mm256_add_pd(_mm256_mul_pd(m1l, ul), _mm256_mul_pd(m1r, ur));
    _mm256_storeu_pd(out.mt1 + i, _mm256_sub_pd(_mm256_mul_pd(half, f1), _mm256_mul_pd(half, d1)));

    const __m256d d2 = _mm256_add_pd(
        _mm256_mul_pd(lad, _mm256_mul_pd(half, _mm256_add_pd(v2l, v2r))),
        _mm256_mul_pd(lur, _mm256_sub_pd(v2r, v2l)));
    const __m256d f2 = _mm256_add_pd(_mm256_mul_pd(m2l, ul), _mm256_mul_pd(m2r, ur));
    _mm256_storeu_pd(out.mt2 + i, _mm256_sub_pd(_mm256_mul_pd(half, f2), _mm256_mul_pd(half, d2)));
  }
  if (i < n) {
    const CellArrays l{L.rho + i, L.mn + i, L.mt1 + i, L.mt2 + i, L.p + i, L.c + i};
    const CellArrays r{R.rho + i, R.mn + i, R.mt1 + i, R.mt2 + i, R.p + i, R.c + i};
    const FluxArrays o{out.rho + i, out.mn + i, out.mt1 + i, out.mt2 + i};
    scalar::face_fluxes(l, r, o, n - i, coef);
  }
}

void accumulate_divergence(double* residual, const double* flux, std::ptrdiff_t stride, double inv_h,
                           std::size_t n) {
  const __m256d ih = _mm256_set1_pd(inv_h);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(flux + i + stride), _mm256_loadu_pd(flux + i));
    _mm256_storeu_pd(residual + i, _mm256_sub_pd(_mm256_loadu_pd(residual + i), _mm256_mul_pd(d, ih)));
  }
  if (i < n) scalar::accumulate_divergence(residual + i, flux + i, stride, inv_h, n - i);
}

#else

void face_fluxes(const CellArrays& L, const CellArrays& R, const FluxArrays& out, std::size_t n,
                 const FluxCoefficients& coef) {
  scalar::face_fluxes(L, R, out, n, coef);
}

void accumulate_divergence(double* residual, const double* flux, std::ptrdiff_t stride, double inv_h,
                           std::size_t n) {
  scalar::accumulate_divergence(residual, flux, stride, inv_h, n);
}

#endif

}  // namespace thinmach::kernels::avx2
