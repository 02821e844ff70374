#include "mdi/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

// AVX2 + FMA variants. This translation unit is the only one compiled with
// -mavx2 -mfma; it must not be entered unless avx2_supported() is true.

namespace mdi::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum_squares_avx2(const double* a, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d x0 = _mm256_loadu_pd(a + i);
        const __m256d x1 = _mm256_loadu_pd(a + i + 4);
        acc0 = _mm256_fmadd_pd(x0, x0, acc0);
        acc1 = _mm256_fmadd_pd(x1, x1, acc1);
    }
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(a + i);
        acc0 = _mm256_fmadd_pd(x, x, acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * a[i];
    return acc;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, r);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

double weighted_abs2_sum_avx2(const double* w, const double* re, const double* im,
                              std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_loadu_pd(re + i);
        const __m256d m = _mm256_loadu_pd(im + i);
        const __m256d a2 = _mm256_fmadd_pd(r, r, _mm256_mul_pd(m, m));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), a2, acc);
    }
    double out = hsum(acc);
    for (; i < n; ++i) out += w[i] * (re[i] * re[i] + im[i] * im[i]);
    return out;
}

void gather_trig_row_avx2(const std::int32_t* idx, std::size_t n, const double* cos_tab,
                          const double* sin_tab, double scale_c, double scale_s,
                          double* out_c, double* out_s) {
    const __m256d vc = _mm256_set1_pd(scale_c);
    const __m256d vs = _mm256_set1_pd(scale_s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
        _mm256_storeu_pd(out_c + i, _mm256_mul_pd(vc, _mm256_i32gather_pd(cos_tab, vi, 8)));
        _mm256_storeu_pd(out_s + i, _mm256_mul_pd(vs, _mm256_i32gather_pd(sin_tab, vi, 8)));
    }
    for (; i < n; ++i) {
        out_c[i] = scale_c * cos_tab[idx[i]];
        out_s[i] = scale_s * sin_tab[idx[i]];
    }
}

void gather_trig_dot_avx2(const double* v, const std::int32_t* idx, std::size_t n,
                          const double* cos_tab, const double* sin_tab, double* acc_c,
                          double* acc_s) {
    __m256d accc = _mm256_setzero_pd();
    __m256d accs = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
        const __m256d vv = _mm256_loadu_pd(v + i);
        accc = _mm256_fmadd_pd(vv, _mm256_i32gather_pd(cos_tab, vi, 8), accc);
        accs = _mm256_fmadd_pd(vv, _mm256_i32gather_pd(sin_tab, vi, 8), accs);
    }
    double c = hsum(accc), s = hsum(accs);
    for (; i < n; ++i) {
        c += v[i] * cos_tab[idx[i]];
        s += v[i] * sin_tab[idx[i]];
    }
    *acc_c = c;
    *acc_s = s;
}

// Four points per iteration; the coordinate loop stays scalar because
// intrinsic lane width exceeds the typical ambient dimension (3 or 4).
void sq_dist_batch_avx2(const double* points, std::size_t n, std::size_t dim,
                        const double* query, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const double* p0 = points + (i + 0) * dim;
        const double* p1 = points + (i + 1) * dim;
        const double* p2 = points + (i + 2) * dim;
        const double* p3 = points + (i + 3) * dim;
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t j = 0; j < dim; ++j) {
            const __m256d pj = _mm256_set_pd(p3[j], p2[j], p1[j], p0[j]);
            const __m256d diff = _mm256_sub_pd(pj, _mm256_set1_pd(query[j]));
            acc = _mm256_fmadd_pd(diff, diff, acc);
        }
        _mm256_storeu_pd(out + i, acc);
    }
    for (; i < n; ++i) {
        const double* p = points + i * dim;
        double acc = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double diff = p[j] - query[j];
            acc += diff * diff;
        }
        out[i] = acc;
    }
}

} // namespace

const Ops& avx2_ops() {
    static const Ops ops{dot_avx2,
                         sum_squares_avx2,
                         axpy_avx2,
                         weighted_abs2_sum_avx2,
                         gather_trig_row_avx2,
                         gather_trig_dot_avx2,
                         sq_dist_batch_avx2,
                         "avx2"};
    return ops;
}

} // namespace mdi::kernels

#endif // x86_64
