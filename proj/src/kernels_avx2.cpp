// AVX2 kernel variants. This translation unit is compiled with -mavx2 -mfma;
// callers must check CPU support before dispatching here.

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "kernels_table.hpp"

namespace tsvar::kernels::detail {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_max_sd(lo, swapped));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double dot3_avx2(const double* a, const double* b, const double* c, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(ab, _mm256_loadu_pd(c + i), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i] * c[i];
    return s;
}

double diff_quad_form_avx2(const double* u, const double* c, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(u + i + 1), _mm256_loadu_pd(u + i));
        acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(c + i), d), d, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double d = u[i + 1] - u[i];
        s += c[i] * d * d;
    }
    return s;
}

double shift_quad_form_avx2(const double* u, const double* c, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(u + i + 1);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(c + i), v), v, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += c[i] * u[i + 1] * u[i + 1];
    return s;
}

void diff_scaled_avx2(const double* u, const double* s, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(u + i + 1), _mm256_loadu_pd(u + i));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(d, _mm256_loadu_pd(s + i)));
    }
    for (; i < n; ++i) out[i] = (u[i + 1] - u[i]) * s[i];
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, r);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

double sup_norm_avx2(const double* x, std::size_t n) {
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_max_pd(acc, _mm256_andnot_pd(signmask, _mm256_loadu_pd(x + i)));
    double m = hmax(acc);
    for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

void tridiag_apply_avx2(const double* lower, const double* diag, const double* upper,
                        const double* x, double* y, std::size_t n) {
    if (n == 0) return;
    if (n == 1) {
        y[0] = diag[0] * x[0];
        return;
    }
    y[0] = diag[0] * x[0] + upper[0] * x[1];
    std::size_t i = 1;
    for (; i + 4 <= n - 1; i += 4) {
        __m256d r = _mm256_mul_pd(_mm256_loadu_pd(lower + i), _mm256_loadu_pd(x + i - 1));
        r = _mm256_fmadd_pd(_mm256_loadu_pd(diag + i), _mm256_loadu_pd(x + i), r);
        r = _mm256_fmadd_pd(_mm256_loadu_pd(upper + i), _mm256_loadu_pd(x + i + 1), r);
        _mm256_storeu_pd(y + i, r);
    }
    for (; i + 1 < n; ++i)
        y[i] = lower[i] * x[i - 1] + diag[i] * x[i] + upper[i] * x[i + 1];
    y[n - 1] = lower[n - 1] * x[n - 2] + diag[n - 1] * x[n - 1];
}

}  // namespace

const Table& avx2_table() {
    static const Table t{dot_avx2,        dot3_avx2,  diff_quad_form_avx2,
                         shift_quad_form_avx2, diff_scaled_avx2, axpy_avx2,
                         sup_norm_avx2,   tridiag_apply_avx2};
    return t;
}

}  // namespace tsvar::kernels::detail
