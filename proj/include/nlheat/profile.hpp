#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nlheat {

/// One-variable function descriptor used for initial data and for the x-, y-
/// and t-factors of separable coefficients. Textual form (config files):
///
///   const(v)                      v
///   cos(a0, a1, ..., aM)          a0 + sum_m a_m cos(m pi x)
///   poly(c0, c1, ..., cK)         sum_k c_k x^k
///   bump(center, half_width, h)   h (1 - ((x - center)/half_width)^2)_+^2
///   pwl(x0, v0, x1, v1, ...)      piecewise linear, constant outside [x0, xn]
///   exp(a, rate)                  a exp(rate x)
///
/// A bare number is shorthand for const(v).
class Profile {
public:
    struct Constant { double value = 0.0; };
    struct Cosine { std::vector<double> coeffs; };
    struct Polynomial { std::vector<double> coeffs; };
    struct Bump { double center = 0.5; double half_width = 0.25; double height = 1.0; };
    struct PiecewiseLinear { std::vector<double> xs; std::vector<double> values; };
    struct Exponential { double amplitude = 1.0; double rate = 0.0; };

    using Repr = std::variant<Constant, Cosine, Polynomial, Bump, PiecewiseLinear, Exponential>;

    Profile() : repr_(Constant{0.0}) {}
    explicit Profile(Repr r);

    static Profile constant(double v) { return Profile(Constant{v}); }
    static Profile cosine(std::vector<double> coeffs) { return Profile(Cosine{std::move(coeffs)}); }
    static Profile polynomial(std::vector<double> coeffs) { return Profile(Polynomial{std::move(coeffs)}); }
    static Profile bump(double center, double half_width, double height) {
        return Profile(Bump{center, half_width, height});
    }
    static Profile piecewise_linear(std::vector<double> xs, std::vector<double> values) {
        return Profile(PiecewiseLinear{std::move(xs), std::move(values)});
    }
    static Profile exponential(double amplitude, double rate) { return Profile(Exponential{amplitude, rate}); }

    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] const Repr& repr() const noexcept { return repr_; }

    /// True if the profile is identically zero (a constant 0).
    [[nodiscard]] bool is_zero() const noexcept;
    [[nodiscard]] bool is_constant() const noexcept { return std::holds_alternative<Constant>(repr_); }

    /// Round-trippable textual form.
    [[nodiscard]] std::string describe() const;

private:
    Repr repr_;
};

/// Parse the textual form; throws ConfigError naming the problem.
[[nodiscard]] Profile parse_profile(std::string_view text);

/// Split "name(a, b(c), d)" into name and top-level comma-separated arguments.
struct CallExpr {
    std::string name;
    std::vector<std::string> args;
};
[[nodiscard]] CallExpr parse_call(std::string_view text);
[[nodiscard]] double parse_number(std::string_view text);

}  // namespace nlheat
