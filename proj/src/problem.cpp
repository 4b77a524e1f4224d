#include "nlheat/problem.hpp"

#include "nlheat/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace nlheat {

namespace {

std::size_t bracket(const std::vector<double>& v, double x, double& w) {
    if (v.size() == 1 || x <= v.front()) {
        w = 0.0;
        return 0;
    }
    if (x >= v.back()) {
        w = 1.0;
        return v.size() - 2;
    }
    const auto i = static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), x) - v.begin()) - 1;
    w = (x - v[i]) / (v[i + 1] - v[i]);
    return i;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path, std::vector<std::string>& header) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open table file '" + path + "'");
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cell.erase(0, cell.find_first_not_of(" \t\r"));
            cell.erase(cell.find_last_not_of(" \t\r") + 1);
            cells.push_back(cell);
        }
        if (first) {
            header = cells;
            first = false;
        } else {
            rows.push_back(std::move(cells));
        }
    }
    return rows;
}

Table2D assemble(const std::map<std::pair<double, double>, double>& points, const std::string& what) {
    std::vector<double> xs, ts;
    for (const auto& [key, v] : points) {
        ts.push_back(key.first);
        xs.push_back(key.second);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    Table2D table{xs, ts, std::vector<double>(xs.size() * ts.size())};
    for (std::size_t j = 0; j < ts.size(); ++j) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const auto it = points.find({ts[j], xs[i]});
            if (it == points.end()) throw ConfigError(what + ": table is not a complete tensor grid");
            table.values[j * xs.size() + i] = it->second;
        }
    }
    table.validate(what.c_str());
    return table;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name, const std::string& path) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("table '" + path + "' lacks column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

double Table2D::operator()(double x, double t) const {
    double wx = 0.0, wt = 0.0;
    const std::size_t i = bracket(xs, x, wx);
    const std::size_t j = bracket(ts, t, wt);
    const std::size_t nx = xs.size();
    auto at = [&](std::size_t jj, std::size_t ii) { return values[jj * nx + ii]; };
    const std::size_t i1 = xs.size() > 1 ? i + 1 : i;
    const std::size_t j1 = ts.size() > 1 ? j + 1 : j;
    const double lo = (1.0 - wx) * at(j, i) + wx * at(j, i1);
    const double hi = (1.0 - wx) * at(j1, i) + wx * at(j1, i1);
    return (1.0 - wt) * lo + wt * hi;
}

void Table2D::validate(const char* what) const {
    if (xs.empty() || ts.empty() || values.size() != xs.size() * ts.size()) {
        throw ConfigError(std::string(what) + ": table shape mismatch");
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) throw ConfigError(std::string(what) + ": table positions must increase");
    }
    for (std::size_t i = 1; i < ts.size(); ++i) {
        if (!(ts[i] > ts[i - 1])) throw ConfigError(std::string(what) + ": table times must increase");
    }
}

CoefficientField::CoefficientField(Repr r) : repr_(std::move(r)) {
    if (const auto* t = std::get_if<Tabulated>(&repr_)) t->table.validate("coefficient");
}

double CoefficientField::operator()(double x, double t) const {
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return f.value;
            } else if constexpr (std::is_same_v<T, Separable>) {
                return f.space(x) * f.time(t);
            } else {
                return f.table(x, t);
            }
        },
        repr_);
}

bool CoefficientField::is_zero() const noexcept {
    const auto* c = std::get_if<Constant>(&repr_);
    return c != nullptr && c->value == 0.0;
}

std::string CoefficientField::describe() const {
    return std::visit(
        [](const auto& f) -> std::string {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return fmt::format("const({})", f.value);
            } else if constexpr (std::is_same_v<T, Separable>) {
                return "sep(" + f.space.describe() + ", " + f.time.describe() + ")";
            } else {
                return "table(" + f.source + ")";
            }
        },
        repr_);
}

KernelField::KernelField(Repr r) : repr_(std::move(r)) {
    if (const auto* t = std::get_if<Tabulated>(&repr_)) {
        t->left.validate("kernel (x = 0)");
        t->right.validate("kernel (x = 1)");
    }
}

double KernelField::operator()(Boundary end, double y, double t) const {
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return f.value;
            } else if constexpr (std::is_same_v<T, Separable>) {
                return (end == Boundary::left ? f.left : f.right) * f.space(y) * f.time(t);
            } else {
                return end == Boundary::left ? f.left(y, t) : f.right(y, t);
            }
        },
        repr_);
}

bool KernelField::is_zero() const noexcept {
    const auto* c = std::get_if<Constant>(&repr_);
    return c != nullptr && c->value == 0.0;
}

std::string KernelField::describe() const {
    return std::visit(
        [](const auto& f) -> std::string {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return fmt::format("const({})", f.value);
            } else if constexpr (std::is_same_v<T, Separable>) {
                return fmt::format("sep({}, {}, {}, {})", f.left, f.right, f.space.describe(), f.time.describe());
            } else {
                return "table(" + f.source + ")";
            }
        },
        repr_);
}

CoefficientField parse_coefficient(std::string_view text) {
    if (text.find('(') == std::string_view::npos) return CoefficientField::constant(parse_number(text));
    const auto call = parse_call(text);
    if (call.name == "const") {
        if (call.args.size() != 1) throw ConfigError("const() takes 1 argument");
        return CoefficientField::constant(parse_number(call.args[0]));
    }
    if (call.name == "sep") {
        if (call.args.size() != 2) throw ConfigError("sep() for c takes (profile_x, profile_t)");
        return CoefficientField::separable(parse_profile(call.args[0]), parse_profile(call.args[1]));
    }
    if (call.name == "table") {
        if (call.args.size() != 1) throw ConfigError("table() takes a file path");
        const std::string path = call.args[0];
        std::vector<std::string> header;
        const auto rows = read_csv(path, header);
        const auto ct = column(header, "t", path), cx = column(header, "x", path), cv = column(header, "value", path);
        std::map<std::pair<double, double>, double> points;
        for (const auto& r : rows) {
            if (r.size() != header.size()) throw ConfigError("table '" + path + "': ragged row");
            points[{parse_number(r[ct]), parse_number(r[cx])}] = parse_number(r[cv]);
        }
        return CoefficientField(CoefficientField::Tabulated{assemble(points, "coefficient table"), path});
    }
    throw ConfigError("unknown coefficient kind '" + call.name + "'");
}

KernelField parse_kernel(std::string_view text) {
    if (text.find('(') == std::string_view::npos) return KernelField::constant(parse_number(text));
    const auto call = parse_call(text);
    if (call.name == "const") {
        if (call.args.size() != 1) throw ConfigError("const() takes 1 argument");
        return KernelField::constant(parse_number(call.args[0]));
    }
    if (call.name == "sep") {
        if (call.args.size() != 4) throw ConfigError("sep() for k takes (k_left, k_right, profile_y, profile_t)");
        return KernelField::separable(parse_number(call.args[0]), parse_number(call.args[1]),
                                      parse_profile(call.args[2]), parse_profile(call.args[3]));
    }
    if (call.name == "table") {
        if (call.args.size() != 1) throw ConfigError("table() takes a file path");
        const std::string path = call.args[0];
        std::vector<std::string> header;
        const auto rows = read_csv(path, header);
        const auto ce = column(header, "end", path), ct = column(header, "t", path);
        const auto cy = column(header, "y", path), cv = column(header, "value", path);
        std::map<std::pair<double, double>, double> left, right;
        for (const auto& r : rows) {
            if (r.size() != header.size()) throw ConfigError("table '" + path + "': ragged row");
            const double end = parse_number(r[ce]);
            auto& target = end == 0.0 ? left : end == 1.0 ? right : throw ConfigError("kernel table end must be 0 or 1");
            target[{parse_number(r[ct]), parse_number(r[cy])}] = parse_number(r[cv]);
        }
        return KernelField(KernelField::Tabulated{assemble(left, "kernel table (x = 0)"),
                                                  assemble(right, "kernel table (x = 1)"), path});
    }
    throw ConfigError("unknown kernel kind '" + call.name + "'");
}

FieldRange sample_range(const CoefficientField& c, const SpatialGrid& grid, double t0, double t1, int time_samples) {
    FieldRange r{c(0.0, t0), c(0.0, t0)};
    for (int j = 0; j < time_samples; ++j) {
        const double t = time_samples > 1 ? t0 + (t1 - t0) * j / (time_samples - 1) : t0;
        for (const double x : grid.nodes()) {
            const double v = c(x, t);
            r.min = std::min(r.min, v);
            r.max = std::max(r.max, v);
        }
    }
    return r;
}

FieldRange sample_range(const KernelField& k, const SpatialGrid& grid, double t0, double t1, int time_samples) {
    FieldRange r{k(Boundary::left, 0.0, t0), k(Boundary::left, 0.0, t0)};
    for (int j = 0; j < time_samples; ++j) {
        const double t = time_samples > 1 ? t0 + (t1 - t0) * j / (time_samples - 1) : t0;
        for (const Boundary end : {Boundary::left, Boundary::right}) {
            for (const double y : grid.nodes()) {
                const double v = k(end, y, t);
                r.min = std::min(r.min, v);
                r.max = std::max(r.max, v);
            }
        }
    }
    return r;
}

void ProblemSpec::validate(const SpatialGrid& grid, int time_samples) const {
    if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("problem.p must be > 0");
    if (!(l > 0.0) || !std::isfinite(l)) throw ConfigError("problem.l must be > 0");
    if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("problem.T must be > 0");
    const auto cr = sample_range(c, grid, 0.0, T, time_samples);
    if (!(cr.min >= 0.0) || !std::isfinite(cr.max)) throw ConfigError("problem.c must be >= 0 and finite");
    const auto kr = sample_range(k, grid, 0.0, T, time_samples);
    if (!(kr.min >= 0.0) || !std::isfinite(kr.max)) throw ConfigError("problem.k must be >= 0 and finite");
    for (const double x : grid.nodes()) {
        const double v = u0(x);
        if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("problem.u0 must be >= 0 and finite");
    }
}

std::string ProblemSpec::summary() const {
    return fmt::format("p={} l={} c={} k={} u0={} T={}", p, l, c.describe(), k.describe(), u0.describe(), T);
}

std::vector<double> initial_values(const ProblemSpec& spec, const SpatialGrid& grid) {
    return grid.sample([&](double x) { return spec.u0(x); });
}

double boundary_integral(const ProblemSpec& spec, const SpatialGrid& grid, std::span<const double> u, Boundary end,
                         double t) {
    check_shape(grid, u, "boundary_integral");
    std::vector<double> f(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) f[i] = spec.k(end, grid.node(i), t) * std::pow(u[i], spec.l);
    return integrate(grid, f);
}

std::array<double, 2> compatibility_residual(const ProblemSpec& spec, const SpatialGrid& grid) {
    const auto u0 = initial_values(spec, grid);
    std::array<double, 2> r{};
    for (const Boundary end : {Boundary::left, Boundary::right}) {
        r[end == Boundary::left ? 0 : 1] =
            normal_derivative(grid, u0, end) - boundary_integral(spec, grid, u0, end, 0.0);
    }
    return r;
}

std::vector<double> regularize_initial(const ProblemSpec& spec, const SpatialGrid& grid, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError(fmt::format("regularization level must lie in (0,1), got {}", eps));
    auto v = initial_values(spec, grid);
    for (auto& x : v) x += eps;
    return v;
}

}  // namespace nlheat
