#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops shared by the quadrature, the finite-difference
// sweeps and the modal Green's-function solver. Every kernel has a scalar
// reference implementation; vector variants are selected once at runtime
// from the CPU feature set and must agree with the reference to rounding.

namespace nlheat::simd {

enum class Backend { scalar, avx2, neon };

[[nodiscard]] std::string_view backend_name(Backend b) noexcept;

/// Backend chosen by CPU detection (what `active_backend` returns until overridden).
[[nodiscard]] Backend detected_backend() noexcept;
[[nodiscard]] Backend active_backend() noexcept;
[[nodiscard]] bool backend_available(Backend b) noexcept;

/// Force a backend. Returns false (and changes nothing) if it is not available.
bool set_backend(Backend b) noexcept;

/// RAII override used by equivalence tests.
class ScopedBackend {
public:
    explicit ScopedBackend(Backend b) noexcept : previous_(active_backend()) { set_backend(b); }
    ~ScopedBackend() { set_backend(previous_); }
    ScopedBackend(const ScopedBackend&) = delete;
    ScopedBackend& operator=(const ScopedBackend&) = delete;

private:
    Backend previous_;
};

/// sum_i a[i] * b[i]
[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);

/// y = A x with A row-major, rows = y.size(), cols = x.size().
void gemv(std::span<const double> a, std::span<const double> x, std::span<double> y);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// max_i |a[i] - b[i]|
[[nodiscard]] double max_abs_diff(std::span<const double> a, std::span<const double> b);

/// Raw backend entry points, exposed for equivalence testing.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n) noexcept;
void gemv(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
double max_abs_diff(const double* a, const double* b, std::size_t n) noexcept;
}  // namespace scalar

}  // namespace nlheat::simd
