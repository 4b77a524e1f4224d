// Compiled with -mavx2 -mfma; only reached after the runtime CPU check.

#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <limits>

namespace nlheat::simd::avx2 {

namespace {

inline double hsum_pairs(__m256d v) noexcept {
    // ((l0 + l1) + (l2 + l3)), same association as the scalar reference.
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) noexcept {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, prod);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    return hsum_pairs(acc) + tail;
}

void gemv(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols) noexcept {
    std::size_t r = 0;
    // Two rows per pass to reuse each x load.
    for (; r + 2 <= rows; r += 2) {
        const double* a0 = a + r * cols;
        const double* a1 = a0 + cols;
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + 4 <= cols; i += 4) {
            const __m256d xv = _mm256_loadu_pd(x + i);
            acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a0 + i), xv));
            acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a1 + i), xv));
        }
        double t0 = 0.0, t1 = 0.0;
        for (; i < cols; ++i) {
            t0 += a0[i] * x[i];
            t1 += a1[i] * x[i];
        }
        y[r] = hsum_pairs(acc0) + t0;
        y[r + 1] = hsum_pairs(acc1) + t1;
    }
    for (; r < rows; ++r) y[r] = dot(a + r * cols, x, cols);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
    const __m256d av = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(av, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

double max_abs_diff(const double* a, const double* b, std::size_t n) noexcept {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d best = _mm256_setzero_pd();
    __m256d unordered = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_andnot_pd(sign, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        unordered = _mm256_or_pd(unordered, _mm256_cmp_pd(d, d, _CMP_UNORD_Q));
        best = _mm256_max_pd(best, d);
    }
    if (_mm256_movemask_pd(unordered) != 0) return std::numeric_limits<double>::quiet_NaN();
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    double m = lanes[0];
    for (int k = 1; k < 4; ++k) m = lanes[k] > m ? lanes[k] : m;
    for (; i < n; ++i) {
        const double d = std::fabs(a[i] - b[i]);
        if (std::isnan(d)) return d;
        if (d > m) m = d;
    }
    return m;
}

}  // namespace nlheat::simd::avx2
