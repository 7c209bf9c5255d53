// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher or
// after isa_available(Isa::avx2) has been checked.

#include <immintrin.h>

#include <cmath>

#include "fskjcr/error.hpp"
#include "fskjcr/kernels.hpp"

namespace fskjcr::kernels {

namespace {

// Phasor recurrence is re-anchored to exact values this often (in 4-column
// blocks) so drift stays at a few ulps.
constexpr std::size_t kAnchorBlocks = 8;

struct Phasor4 {
    __m256d re;
    __m256d im;
};

inline Phasor4 exact_phasors(double unit, std::int64_t g0, double x)
{
    alignas(32) double re[4], im[4];
    for (int k = 0; k < 4; ++k) {
        const double angle = unit * static_cast<double>(g0 + k) * x;
        re[k] = std::cos(angle);
        im[k] = std::sin(angle);
    }
    return {_mm256_load_pd(re), _mm256_load_pd(im)};
}

inline Phasor4 cmul(Phasor4 a, __m256d br, __m256d bi)
{
    return {_mm256_fmsub_pd(a.re, br, _mm256_mul_pd(a.im, bi)), _mm256_fmadd_pd(a.re, bi, _mm256_mul_pd(a.im, br))};
}

}  // namespace

void af_row_avx2(const AfRowTerms& terms, double unit, std::span<double> out)
{
    const std::size_t cols = out.size();
    const std::size_t blocks = cols / 4;
    const std::size_t vec_cols = blocks * 4;
    std::vector<double> acc_re(cols, 0.0), acc_im(cols, 0.0);
    const __m256d ramp = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d vunit = _mm256_set1_pd(unit);

    for (std::size_t t = 0; t < terms.size(); ++t) {
        const double a = terms.lo[t], b = terms.hi[t];
        const std::int64_t g_start = terms.g_start[t];
        const __m256d cr = _mm256_set1_pd(terms.coef_re[t]);
        const __m256d ci = _mm256_set1_pd(terms.coef_im[t]);
        const __m256d width = _mm256_set1_pd(b - a);
        const double step_b = 4.0 * unit * b;
        const double step_a = 4.0 * unit * a;
        const __m256d sbr = _mm256_set1_pd(std::cos(step_b)), sbi = _mm256_set1_pd(std::sin(step_b));
        const __m256d sar = _mm256_set1_pd(std::cos(step_a)), sai = _mm256_set1_pd(std::sin(step_a));

        Phasor4 pb{zero, zero}, pa{zero, zero};
        for (std::size_t blk = 0; blk < blocks; ++blk) {
            const std::int64_t g0 = g_start + static_cast<std::int64_t>(blk * 4);
            if (blk % kAnchorBlocks == 0) {
                pb = exact_phasors(unit, g0, b);
                pa = exact_phasors(unit, g0, a);
            }
            const __m256d g = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(g0)), ramp);
            const __m256d is_zero = _mm256_cmp_pd(g, zero, _CMP_EQ_OQ);
            const __m256d gamma = _mm256_blendv_pd(_mm256_mul_pd(vunit, g), one, is_zero);
            const __m256d nr = _mm256_sub_pd(pb.re, pa.re);
            const __m256d ni = _mm256_sub_pd(pb.im, pa.im);
            // (n) / (i gamma) = (ni / gamma, -nr / gamma)
            __m256d vr = _mm256_div_pd(ni, gamma);
            __m256d vi = _mm256_div_pd(_mm256_sub_pd(zero, nr), gamma);
            vr = _mm256_blendv_pd(vr, width, is_zero);
            vi = _mm256_blendv_pd(vi, zero, is_zero);

            double* are = acc_re.data() + blk * 4;
            double* aim = acc_im.data() + blk * 4;
            __m256d xr = _mm256_loadu_pd(are);
            __m256d xi = _mm256_loadu_pd(aim);
            xr = _mm256_add_pd(xr, _mm256_sub_pd(_mm256_mul_pd(cr, vr), _mm256_mul_pd(ci, vi)));
            xi = _mm256_add_pd(xi, _mm256_add_pd(_mm256_mul_pd(cr, vi), _mm256_mul_pd(ci, vr)));
            _mm256_storeu_pd(are, xr);
            _mm256_storeu_pd(aim, xi);

            pb = cmul(pb, sbr, sbi);
            pa = cmul(pa, sar, sai);
        }
        for (std::size_t j = vec_cols; j < cols; ++j) {
            const std::int64_t gj = g_start + static_cast<std::int64_t>(j);
            double vr, vi;
            if (gj == 0) {
                vr = b - a;
                vi = 0.0;
            } else {
                const double gamma = unit * static_cast<double>(gj);
                const double nr = std::cos(gamma * b) - std::cos(gamma * a);
                const double ni = std::sin(gamma * b) - std::sin(gamma * a);
                vr = ni / gamma;
                vi = -nr / gamma;
            }
            acc_re[j] += terms.coef_re[t] * vr - terms.coef_im[t] * vi;
            acc_im[j] += terms.coef_re[t] * vi + terms.coef_im[t] * vr;
        }
    }

    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) {
        const __m256d xr = _mm256_loadu_pd(acc_re.data() + j);
        const __m256d xi = _mm256_loadu_pd(acc_im.data() + j);
        _mm256_storeu_pd(out.data() + j, _mm256_sqrt_pd(_mm256_fmadd_pd(xr, xr, _mm256_mul_pd(xi, xi))));
    }
    for (; j < cols; ++j) out[j] = std::hypot(acc_re[j], acc_im[j]);
}

void lag_products_avx2(std::span<const std::complex<double>> phasors, std::size_t lag,
                       std::span<std::complex<double>> out)
{
    const std::size_t n = phasors.size();
    if (lag > n || out.size() < n - lag) throw DomainError("lag_products: output too small");
    const auto* src = reinterpret_cast<const double*>(phasors.data());
    auto* dst = reinterpret_cast<double*>(out.data());
    const __m256d conj_mask = _mm256_set_pd(-1.0, 1.0, -1.0, 1.0);
    std::size_t l = lag;
    for (; l + 2 <= n; l += 2) {
        const __m256d a = _mm256_loadu_pd(src + 2 * l);
        const __m256d b = _mm256_mul_pd(_mm256_loadu_pd(src + 2 * (l - lag)), conj_mask);
        const __m256d a_re = _mm256_movedup_pd(a);
        const __m256d a_im = _mm256_permute_pd(a, 0xF);
        const __m256d b_sw = _mm256_permute_pd(b, 0x5);
        _mm256_storeu_pd(dst + 2 * (l - lag), _mm256_fmaddsub_pd(a_re, b, _mm256_mul_pd(a_im, b_sw)));
    }
    for (; l < n; ++l) {
        const double ar = phasors[l].real(), ai = phasors[l].imag();
        const double br = phasors[l - lag].real(), bi = phasors[l - lag].imag();
        out[l - lag] = {ar * br + ai * bi, ai * br - ar * bi};
    }
}

}  // namespace fskjcr::kernels
