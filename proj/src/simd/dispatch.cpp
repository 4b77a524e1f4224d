#include "nlheat/error.hpp"
#include "nlheat/simd.hpp"

#include <atomic>
#include <cstddef>

namespace nlheat::simd {

#if defined(NLHEAT_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n) noexcept;
void gemv(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
double max_abs_diff(const double* a, const double* b, std::size_t n) noexcept;
}  // namespace avx2
#endif

#if defined(NLHEAT_HAVE_NEON)
namespace neon {
double dot(const double* a, const double* b, std::size_t n) noexcept;
void gemv(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
double max_abs_diff(const double* a, const double* b, std::size_t n) noexcept;
}  // namespace neon
#endif

namespace {

struct KernelTable {
    double (*dot)(const double*, const double*, std::size_t) noexcept;
    void (*gemv)(const double*, const double*, double*, std::size_t, std::size_t) noexcept;
    void (*axpy)(double, const double*, double*, std::size_t) noexcept;
    double (*max_abs_diff)(const double*, const double*, std::size_t) noexcept;
};

constexpr KernelTable kScalar{scalar::dot, scalar::gemv, scalar::axpy, scalar::max_abs_diff};
#if defined(NLHEAT_HAVE_AVX2)
constexpr KernelTable kAvx2{avx2::dot, avx2::gemv, avx2::axpy, avx2::max_abs_diff};
#endif
#if defined(NLHEAT_HAVE_NEON)
constexpr KernelTable kNeon{neon::dot, neon::gemv, neon::axpy, neon::max_abs_diff};
#endif

bool cpu_has_avx2() noexcept {
#if defined(NLHEAT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* table_for(Backend b) noexcept {
    switch (b) {
        case Backend::scalar: return &kScalar;
#if defined(NLHEAT_HAVE_AVX2)
        case Backend::avx2: return cpu_has_avx2() ? &kAvx2 : nullptr;
#endif
#if defined(NLHEAT_HAVE_NEON)
        case Backend::neon: return &kNeon;
#endif
        default: return nullptr;
    }
}

std::atomic<Backend>& current() noexcept {
    static std::atomic<Backend> backend{detected_backend()};
    return backend;
}

const KernelTable& active_table() noexcept {
    const KernelTable* t = table_for(current().load(std::memory_order_relaxed));
    return t != nullptr ? *t : kScalar;
}

void require_same(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw ShapeError(std::string(what) + ": length mismatch");
}

}  // namespace

std::string_view backend_name(Backend b) noexcept {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "unknown";
}

Backend detected_backend() noexcept {
#if defined(NLHEAT_HAVE_NEON)
    return Backend::neon;
#else
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
#endif
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

bool backend_available(Backend b) noexcept { return table_for(b) != nullptr; }

bool set_backend(Backend b) noexcept {
    if (!backend_available(b)) return false;
    current().store(b, std::memory_order_relaxed);
    return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
    require_same(a.size(), b.size(), "dot");
    return active_table().dot(a.data(), b.data(), a.size());
}

void gemv(std::span<const double> a, std::span<const double> x, std::span<double> y) {
    if (a.size() != x.size() * y.size()) throw ShapeError("gemv: matrix size does not match vectors");
    active_table().gemv(a.data(), x.data(), y.data(), y.size(), x.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    require_same(x.size(), y.size(), "axpy");
    active_table().axpy(alpha, x.data(), y.data(), x.size());
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    require_same(a.size(), b.size(), "max_abs_diff");
    return active_table().max_abs_diff(a.data(), b.data(), a.size());
}

}  // namespace nlheat::simd
