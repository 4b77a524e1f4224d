#include "nlheat/profile.hpp"

#include "nlheat/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

namespace nlheat {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::string join_numbers(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ", ";
        out += fmt::format("{}", v[i]);
    }
    return out;
}

void validate(const Profile::Repr& r) {
    if (const auto* c = std::get_if<Profile::Cosine>(&r); c != nullptr && c->coeffs.empty()) {
        throw ConfigError("cos() needs at least one coefficient");
    }
    if (const auto* p = std::get_if<Profile::Polynomial>(&r); p != nullptr && p->coeffs.empty()) {
        throw ConfigError("poly() needs at least one coefficient");
    }
    if (const auto* b = std::get_if<Profile::Bump>(&r); b != nullptr && !(b->half_width > 0.0)) {
        throw ConfigError("bump() half width must be > 0");
    }
    if (const auto* t = std::get_if<Profile::PiecewiseLinear>(&r)) {
        if (t->xs.empty() || t->xs.size() != t->values.size()) {
            throw ConfigError("pwl() needs matching, non-empty x and value lists");
        }
        for (std::size_t i = 1; i < t->xs.size(); ++i) {
            if (!(t->xs[i] > t->xs[i - 1])) throw ConfigError("pwl() abscissae must be strictly increasing");
        }
    }
}

}  // namespace

Profile::Profile(Repr r) : repr_(std::move(r)) { validate(repr_); }

double Profile::operator()(double x) const {
    return std::visit(
        [x](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return f.value;
            } else if constexpr (std::is_same_v<T, Cosine>) {
                double s = f.coeffs[0];
                for (std::size_t m = 1; m < f.coeffs.size(); ++m) {
                    s += f.coeffs[m] * std::cos(static_cast<double>(m) * std::numbers::pi * x);
                }
                return s;
            } else if constexpr (std::is_same_v<T, Polynomial>) {
                double s = 0.0;
                for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it) s = s * x + *it;
                return s;
            } else if constexpr (std::is_same_v<T, Bump>) {
                const double z = (x - f.center) / f.half_width;
                const double q = 1.0 - z * z;
                return q > 0.0 ? f.height * q * q : 0.0;
            } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
                if (x <= f.xs.front()) return f.values.front();
                if (x >= f.xs.back()) return f.values.back();
                const auto it = std::upper_bound(f.xs.begin(), f.xs.end(), x);
                const auto i = static_cast<std::size_t>(it - f.xs.begin());
                const double w = (x - f.xs[i - 1]) / (f.xs[i] - f.xs[i - 1]);
                return (1.0 - w) * f.values[i - 1] + w * f.values[i];
            } else {
                return f.amplitude * std::exp(f.rate * x);
            }
        },
        repr_);
}

bool Profile::is_zero() const noexcept {
    const auto* c = std::get_if<Constant>(&repr_);
    return c != nullptr && c->value == 0.0;
}

std::string Profile::describe() const {
    return std::visit(
        [](const auto& f) -> std::string {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return fmt::format("const({})", f.value);
            } else if constexpr (std::is_same_v<T, Cosine>) {
                return "cos(" + join_numbers(f.coeffs) + ")";
            } else if constexpr (std::is_same_v<T, Polynomial>) {
                return "poly(" + join_numbers(f.coeffs) + ")";
            } else if constexpr (std::is_same_v<T, Bump>) {
                return fmt::format("bump({}, {}, {})", f.center, f.half_width, f.height);
            } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
                std::vector<double> flat;
                for (std::size_t i = 0; i < f.xs.size(); ++i) {
                    flat.push_back(f.xs[i]);
                    flat.push_back(f.values[i]);
                }
                return "pwl(" + join_numbers(flat) + ")";
            } else {
                return fmt::format("exp({}, {})", f.amplitude, f.rate);
            }
        },
        repr_);
}

double parse_number(std::string_view text) {
    const auto t = trim(text);
    double v = 0.0;
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (t.empty() || ec != std::errc{} || ptr != end) {
        throw ConfigError("expected a number, got '" + std::string(t) + "'");
    }
    return v;
}

CallExpr parse_call(std::string_view text) {
    const auto t = trim(text);
    const auto open = t.find('(');
    if (open == std::string_view::npos || t.back() != ')') {
        throw ConfigError("expected name(args...), got '" + std::string(t) + "'");
    }
    CallExpr call;
    call.name = std::string(trim(t.substr(0, open)));
    const auto body = t.substr(open + 1, t.size() - open - 2);
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= body.size(); ++i) {
        if (i == body.size() || (body[i] == ',' && depth == 0)) {
            const auto arg = trim(body.substr(start, i - start));
            if (!arg.empty() || i != body.size() || !call.args.empty()) call.args.emplace_back(arg);
            start = i + 1;
        } else if (body[i] == '(') {
            ++depth;
        } else if (body[i] == ')') {
            if (--depth < 0) throw ConfigError("unbalanced parentheses in '" + std::string(t) + "'");
        }
    }
    if (depth != 0) throw ConfigError("unbalanced parentheses in '" + std::string(t) + "'");
    for (const auto& a : call.args) {
        if (a.empty()) throw ConfigError("empty argument in '" + std::string(t) + "'");
    }
    return call;
}

Profile parse_profile(std::string_view text) {
    const auto t = trim(text);
    if (t.find('(') == std::string_view::npos) return Profile::constant(parse_number(t));
    const auto call = parse_call(t);
    std::vector<double> a;
    a.reserve(call.args.size());
    for (const auto& s : call.args) a.push_back(parse_number(s));
    auto need = [&](std::size_t n) {
        if (a.size() != n) {
            throw ConfigError(fmt::format("{}() takes {} arguments, got {}", call.name, n, a.size()));
        }
    };
    if (call.name == "const") {
        need(1);
        return Profile::constant(a[0]);
    }
    if (call.name == "cos") return Profile::cosine(a);
    if (call.name == "poly") return Profile::polynomial(a);
    if (call.name == "bump") {
        need(3);
        return Profile::bump(a[0], a[1], a[2]);
    }
    if (call.name == "exp") {
        need(2);
        return Profile::exponential(a[0], a[1]);
    }
    if (call.name == "pwl") {
        if (a.size() < 2 || a.size() % 2 != 0) throw ConfigError("pwl() takes x,value pairs");
        std::vector<double> xs, vs;
        for (std::size_t i = 0; i < a.size(); i += 2) {
            xs.push_back(a[i]);
            vs.push_back(a[i + 1]);
        }
        return Profile::piecewise_linear(std::move(xs), std::move(vs));
    }
    throw ConfigError("unknown function kind '" + call.name + "'");
}

}  // namespace nlheat
