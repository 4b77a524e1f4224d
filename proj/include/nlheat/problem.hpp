#pragma once

#include "nlheat/grid.hpp"
#include "nlheat/profile.hpp"

#include <array>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nlheat {

/// Bilinear lookup table on a tensor grid (rows = times, columns = positions).
/// Values are clamped to the table's range outside of it.
struct Table2D {
    std::vector<double> xs;
    std::vector<double> ts;
    std::vector<double> values;  // ts.size() * xs.size(), row-major in t

    [[nodiscard]] double operator()(double x, double t) const;
    void validate(const char* what) const;
};

/// Absorption coefficient c(x, t) >= 0.
class CoefficientField {
public:
    struct Constant { double value = 0.0; };
    struct Separable { Profile space; Profile time; };
    struct Tabulated { Table2D table; std::string source; };
    using Repr = std::variant<Constant, Separable, Tabulated>;

    CoefficientField() : repr_(Constant{0.0}) {}
    explicit CoefficientField(Repr r);

    static CoefficientField constant(double v) { return CoefficientField(Constant{v}); }
    static CoefficientField separable(Profile space, Profile time) {
        return CoefficientField(Separable{std::move(space), std::move(time)});
    }

    [[nodiscard]] double operator()(double x, double t) const;
    [[nodiscard]] const Repr& repr() const noexcept { return repr_; }
    [[nodiscard]] bool is_zero() const noexcept;
    [[nodiscard]] std::string describe() const;

private:
    Repr repr_;
};

/// Boundary kernel k(x, y, t) >= 0 for x in {0, 1}, y in [0, 1].
class KernelField {
public:
    struct Constant { double value = 0.0; };
    /// k(end, y, t) = weight(end) * space(y) * time(t)
    struct Separable { double left = 1.0; double right = 1.0; Profile space; Profile time; };
    struct Tabulated { Table2D left; Table2D right; std::string source; };
    using Repr = std::variant<Constant, Separable, Tabulated>;

    KernelField() : repr_(Constant{0.0}) {}
    explicit KernelField(Repr r);

    static KernelField constant(double v) { return KernelField(Constant{v}); }
    static KernelField separable(double left, double right, Profile space, Profile time) {
        return KernelField(Separable{left, right, std::move(space), std::move(time)});
    }

    [[nodiscard]] double operator()(Boundary end, double y, double t) const;
    [[nodiscard]] const Repr& repr() const noexcept { return repr_; }
    [[nodiscard]] bool is_zero() const noexcept;
    [[nodiscard]] std::string describe() const;

private:
    Repr repr_;
};

/// Parse "const(v)", "sep(profile_x, profile_t)" or "table(path.csv)" (columns t,x,value).
[[nodiscard]] CoefficientField parse_coefficient(std::string_view text);
/// Parse "const(v)", "sep(k_left, k_right, profile_y, profile_t)" or "table(path.csv)" (columns end,t,y,value).
[[nodiscard]] KernelField parse_kernel(std::string_view text);

/// Data of the problem
///   u_t = u_xx - c u^p in (0,1),  du/dnu = int_0^1 k(x,y,t) u^l(y,t) dy at x in {0,1},  u(x,0) = u0.
struct ProblemSpec {
    double p = 1.0;
    double l = 1.0;
    CoefficientField c;
    KernelField k;
    Profile u0;
    double T = 1.0;

    /// Throws ConfigError if an exponent is not positive, T is not positive, or c, k, u0
    /// take a negative value at a sampled point of grid x {time samples}.
    void validate(const SpatialGrid& grid, int time_samples = 11) const;

    [[nodiscard]] std::string summary() const;
};

struct FieldRange {
    double min = 0.0;
    double max = 0.0;
};

/// Sampled extrema of c over grid nodes x [t0, t1].
[[nodiscard]] FieldRange sample_range(const CoefficientField& c, const SpatialGrid& grid, double t0, double t1,
                                      int time_samples = 11);
/// Sampled extrema of k over both endpoints x grid nodes x [t0, t1].
[[nodiscard]] FieldRange sample_range(const KernelField& k, const SpatialGrid& grid, double t0, double t1,
                                      int time_samples = 11);

[[nodiscard]] std::vector<double> initial_values(const ProblemSpec& spec, const SpatialGrid& grid);

/// Per endpoint: du0/dnu - int k(x,y,0) u0^l dy. Index 0 is x = 0, index 1 is x = 1.
[[nodiscard]] std::array<double, 2> compatibility_residual(const ProblemSpec& spec, const SpatialGrid& grid);

/// u0 + eps, for eps in (0, 1).
[[nodiscard]] std::vector<double> regularize_initial(const ProblemSpec& spec, const SpatialGrid& grid, double eps);

/// int_0^1 k(end, y, t) u(y)^l dy by the trapezoid rule on the grid.
[[nodiscard]] double boundary_integral(const ProblemSpec& spec, const SpatialGrid& grid,
                                       std::span<const double> u, Boundary end, double t);

}  // namespace nlheat
