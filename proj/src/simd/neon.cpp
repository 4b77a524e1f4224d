// AArch64 variants; NEON is baseline there so no runtime probe is needed.

#include <arm_neon.h>

#include <cmath>
#include <cstddef>
#include <limits>

namespace nlheat::simd::neon {

double dot(const double* a, const double* b, std::size_t n) noexcept {
    float64x2_t acc01 = vdupq_n_f64(0.0);
    float64x2_t acc23 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        acc23 = vaddq_f64(acc23, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    const double s01 = vgetq_lane_f64(acc01, 0) + vgetq_lane_f64(acc01, 1);
    const double s23 = vgetq_lane_f64(acc23, 0) + vgetq_lane_f64(acc23, 1);
    return (s01 + s23) + tail;
}

void gemv(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols) noexcept {
    for (std::size_t r = 0; r < rows; ++r) y[r] = dot(a + r * cols, x, cols);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
    const float64x2_t av = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(av, vld1q_f64(x + i))));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

double max_abs_diff(const double* a, const double* b, std::size_t n) noexcept {
    float64x2_t best = vdupq_n_f64(0.0);
    bool nan_seen = false;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        const uint64x2_t ok = vceqq_f64(d, d);
        nan_seen |= (vgetq_lane_u64(ok, 0) == 0) || (vgetq_lane_u64(ok, 1) == 0);
        best = vmaxq_f64(best, d);
    }
    if (nan_seen) return std::numeric_limits<double>::quiet_NaN();
    double m = vmaxvq_f64(best);
    for (; i < n; ++i) {
        const double d = std::fabs(a[i] - b[i]);
        if (std::isnan(d)) return d;
        if (d > m) m = d;
    }
    return m;
}

}  // namespace nlheat::simd::neon
