#include "nlheat/simd.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace nlheat;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

std::vector<simd::Backend> vector_backends() {
    std::vector<simd::Backend> b;
    for (auto k : {simd::Backend::avx2, simd::Backend::neon}) {
        if (simd::backend_available(k)) b.push_back(k);
    }
    return b;
}

}  // namespace

TEST(Simd, ScalarAlwaysAvailable) {
    EXPECT_TRUE(simd::backend_available(simd::Backend::scalar));
    simd::ScopedBackend s(simd::Backend::scalar);
    EXPECT_EQ(simd::active_backend(), simd::Backend::scalar);
}

TEST(Simd, BackendsAgreeWithScalar) {
    const auto backends = vector_backends();
    if (backends.empty()) GTEST_SKIP() << "no vector backend on this CPU";
    std::mt19937_64 rng(20241016);
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 15u, 64u, 101u, 1000u}) {
        const auto a = random_vector(rng, n);
        const auto b = random_vector(rng, n);
        const double ref_dot = simd::scalar::dot(a.data(), b.data(), n);
        const double ref_diff = simd::scalar::max_abs_diff(a.data(), b.data(), n);
        auto ref_y = b;
        simd::scalar::axpy(0.37, a.data(), ref_y.data(), n);
        for (const auto backend : backends) {
            simd::ScopedBackend scope(backend);
            double scale = 0.0;
            for (std::size_t i = 0; i < n; ++i) scale += std::fabs(a[i] * b[i]);
            EXPECT_NEAR(simd::dot(a, b), ref_dot, 4e-16 * (scale + 1.0)) << n;
            EXPECT_EQ(simd::max_abs_diff(a, b), ref_diff) << n;
            auto y = b;
            simd::axpy(0.37, a, y);
            for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y[i], ref_y[i], 1e-15);
        }
    }
}

TEST(Simd, GemvAgreesWithScalar) {
    const auto backends = vector_backends();
    if (backends.empty()) GTEST_SKIP() << "no vector backend on this CPU";
    std::mt19937_64 rng(7);
    for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{1, 1}, {5, 3}, {17, 33}, {64, 101}}) {
        const auto a = random_vector(rng, rows * cols);
        const auto x = random_vector(rng, cols);
        std::vector<double> ref(rows), y(rows);
        simd::scalar::gemv(a.data(), x.data(), ref.data(), rows, cols);
        for (const auto backend : backends) {
            simd::ScopedBackend scope(backend);
            simd::gemv(a, x, y);
            for (std::size_t i = 0; i < rows; ++i) EXPECT_NEAR(y[i], ref[i], 1e-13);
        }
    }
}
