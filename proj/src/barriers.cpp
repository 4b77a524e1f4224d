#include "nlheat/barriers.hpp"

#include "nlheat/error.hpp"

#include <fmt/format.h>

#include <limits>
#include <numbers>

namespace nlheat {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double power(double u, double e) {
    if (e == 1.0) return u;
    if (e == 2.0) return u * u;
    if (e == 0.5) return std::sqrt(u);
    return std::pow(u, e);
}

double distance(double x) { return std::min(x, 1.0 - x); }

bool nearly(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b)); }

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Layer profile eps A Z_+^q with Z = Z0 - eps^-gamma s, shared by strict_super and extinction.
struct PowerLayer {
    double scale;  // eps A
    double q;      // 1 / gamma
    double slope;  // eps^-gamma

    [[nodiscard]] double value(double z) const { return z > 0.0 ? scale * power(z, q) : 0.0; }
    [[nodiscard]] double dz(double z) const { return z > 0.0 ? scale * q * power(z, q - 1.0) : 0.0; }
    [[nodiscard]] double dzz(double z) const { return z > 0.0 ? scale * q * (q - 1.0) * power(z, q - 2.0) : 0.0; }
};

PowerLayer layer_of(double A, double gamma, double eps) {
    return {eps * A, 1.0 / gamma, std::pow(eps, -gamma)};
}

bool constant_in_time(const ProblemSpec& spec) {
    return std::holds_alternative<CoefficientField::Constant>(spec.c.repr()) &&
           std::holds_alternative<KernelField::Constant>(spec.k.repr());
}

}  // namespace

namespace detail {

namespace {
struct GaussRule {
    std::vector<double> x, w;
    GaussRule() {
        constexpr int n = 16;
        x.resize(n);
        w.resize(n);
        for (int i = 0; i < n; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 1; j <= n; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
                }
                dp = n * (z * p0 - p1) / (z * z - 1.0);
                const double dz = p0 / dp;
                z -= dz;
                if (std::fabs(dz) < 1e-16) break;
            }
            x[static_cast<std::size_t>(i)] = -z;
            w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }
};
const GaussRule& rule() {
    static const GaussRule r;
    return r;
}
}  // namespace

const std::vector<double>& gauss_nodes() { return rule().x; }
const std::vector<double>& gauss_weights() { return rule().w; }

}  // namespace detail

std::string_view family_name(BarrierFamily f) noexcept {
    switch (f) {
        case BarrierFamily::exp_super: return "exp_super";
        case BarrierFamily::layer_sub: return "layer_sub";
        case BarrierFamily::strict_super: return "strict_super";
        case BarrierFamily::extinction: return "extinction";
    }
    return "exp_super";
}

BarrierFamily parse_family(std::string_view name) {
    for (const auto f : {BarrierFamily::exp_super, BarrierFamily::layer_sub, BarrierFamily::strict_super,
                         BarrierFamily::extinction}) {
        if (family_name(f) == name) return f;
    }
    throw ConfigError("unknown barrier family '" + std::string(name) + "'");
}

std::string_view certification_name(Certification c) noexcept {
    switch (c) {
        case Certification::neither: return "neither";
        case Certification::subsolution: return "subsolution";
        case Certification::supersolution: return "supersolution";
        case Certification::strict_supersolution: return "strict_supersolution";
        case Certification::solution: return "solution";
    }
    return "neither";
}

BarrierCandidate::BarrierCandidate(Params params) : params_(params) {}

BarrierFamily BarrierCandidate::family() const noexcept {
    return static_cast<BarrierFamily>(params_.index());
}

double BarrierCandidate::value(double x, double t) const {
    return std::visit(
        overloaded{
            [&](const ExpSuperParams& p) {
                return p.M * std::exp(2.0 * p.B * t) * (1.0 + p.B * (x - 0.5) * (x - 0.5));
            },
            [&](const LayerSubParams& p) {
                const double tau = t - p.t0;
                if (tau <= 0.0) return 0.0;
                const double y = p.xi0 - distance(x) / std::sqrt(tau);
                return y > 0.0 ? p.A * power(tau, p.alpha) * power(y, p.beta) : 0.0;
            },
            [&](const StrictSuperParams& p) {
                const auto L = layer_of(p.A, p.gamma, p.eps);
                return L.value(p.xi0 - L.slope * distance(x));
            },
            [&](const ExtinctionParams& p) {
                const auto L = layer_of(p.A, p.gamma, p.eps);
                return L.value(p.xi0 - L.slope * distance(x) - p.mu * t);
            },
        },
        params_);
}

double BarrierCandidate::time_derivative(double x, double t) const {
    return std::visit(
        overloaded{
            [&](const ExpSuperParams& p) { return 2.0 * p.B * value(x, t); },
            [&](const LayerSubParams& p) {
                const double tau = t - p.t0;
                if (tau <= 0.0) return 0.0;
                const double s = distance(x);
                const double y = p.xi0 - s / std::sqrt(tau);
                if (y <= 0.0) return 0.0;
                return p.alpha * p.A * power(tau, p.alpha - 1.0) * power(y, p.beta) +
                       0.5 * p.beta * p.A * s * power(tau, p.alpha - 1.5) * power(y, p.beta - 1.0);
            },
            [&](const StrictSuperParams&) { return 0.0; },
            [&](const ExtinctionParams& p) {
                const auto L = layer_of(p.A, p.gamma, p.eps);
                return -p.mu * L.dz(p.xi0 - L.slope * distance(x) - p.mu * t);
            },
        },
        params_);
}

double BarrierCandidate::second_derivative(double x, double t) const {
    return std::visit(
        overloaded{
            [&](const ExpSuperParams& p) { return 2.0 * p.B * p.M * std::exp(2.0 * p.B * t); },
            [&](const LayerSubParams& p) {
                const double tau = t - p.t0;
                if (tau <= 0.0) return 0.0;
                const double y = p.xi0 - distance(x) / std::sqrt(tau);
                if (y <= 0.0) return 0.0;
                return p.beta * (p.beta - 1.0) * p.A * power(tau, p.alpha - 1.0) * power(y, p.beta - 2.0);
            },
            [&](const StrictSuperParams& p) {
                const auto L = layer_of(p.A, p.gamma, p.eps);
                return L.slope * L.slope * L.dzz(p.xi0 - L.slope * distance(x));
            },
            [&](const ExtinctionParams& p) {
                const auto L = layer_of(p.A, p.gamma, p.eps);
                return L.slope * L.slope * L.dzz(p.xi0 - L.slope * distance(x) - p.mu * t);
            },
        },
        params_);
}

double BarrierCandidate::normal_derivative(Boundary, double t) const {
    return std::visit(
        overloaded{
            [&](const ExpSuperParams& p) { return p.B * p.M * std::exp(2.0 * p.B * t); },
            [&](const LayerSubParams& p) {
                const double tau = t - p.t0;
                if (tau <= 0.0) return 0.0;
                return p.beta * p.A * power(tau, p.alpha - 0.5) * power(p.xi0, p.beta - 1.0);
            },
            [&](const StrictSuperParams& p) {
                const auto L = layer_of(p.A, p.gamma, p.eps);
                return L.slope * L.dz(p.xi0);
            },
            [&](const ExtinctionParams& p) {
                const auto L = layer_of(p.A, p.gamma, p.eps);
                return L.slope * L.dz(p.xi0 - p.mu * t);
            },
        },
        params_);
}

double BarrierCandidate::support_width(double t) const {
    return std::visit(
        overloaded{
            [&](const ExpSuperParams&) { return 0.5; },
            [&](const LayerSubParams& p) { return t > p.t0 ? p.xi0 * std::sqrt(t - p.t0) : 0.0; },
            [&](const StrictSuperParams& p) { return std::pow(p.eps, p.gamma) * p.xi0; },
            [&](const ExtinctionParams& p) {
                return std::pow(p.eps, p.gamma) * std::max(p.xi0 - p.mu * t, 0.0);
            },
        },
        params_);
}

std::vector<double> BarrierCandidate::kinks(double t) const {
    if (family() == BarrierFamily::exp_super) return {};
    const double w = support_width(t);
    if (!(w > 0.0) || w >= 0.5) return {};
    return {w, 1.0 - w};
}

double BarrierCandidate::t_begin() const noexcept {
    if (const auto* p = std::get_if<LayerSubParams>(&params_)) return p->t0;
    return 0.0;
}

double BarrierCandidate::t_end() const noexcept {
    return std::visit(overloaded{
                          [](const ExpSuperParams& p) { return p.horizon; },
                          [](const LayerSubParams& p) { return p.t0 + p.T0; },
                          [](const StrictSuperParams&) { return inf; },
                          [](const ExtinctionParams& p) { return p.xi0 / p.mu; },
                      },
                      params_);
}

double BarrierCandidate::sup_value() const {
    return std::visit(
        overloaded{
            [](const ExpSuperParams& p) { return p.M * std::exp(2.0 * p.B * p.horizon) * (1.0 + p.B / 4.0); },
            [](const LayerSubParams& p) { return p.A * power(p.T0, p.alpha) * power(p.xi0, p.beta); },
            [](const StrictSuperParams& p) { return p.eps * p.A * power(p.xi0, 1.0 / p.gamma); },
            [](const ExtinctionParams& p) { return p.eps * p.A * power(p.xi0, 1.0 / p.gamma); },
        },
        params_);
}

std::string BarrierCandidate::describe() const {
    return std::visit(
        overloaded{
            [](const ExpSuperParams& p) {
                return fmt::format("exp_super(M={}, B={}, K={}, horizon={})", p.M, p.B, p.K, p.horizon);
            },
            [](const LayerSubParams& p) {
                return fmt::format("layer_sub(A={}, alpha={}, beta={}, xi0={}, t0={}, T0={})", p.A, p.alpha, p.beta,
                                   p.xi0, p.t0, p.T0);
            },
            [](const StrictSuperParams& p) {
                return fmt::format("strict_super(A={}, gamma={}, eps={}, xi0={})", p.A, p.gamma, p.eps, p.xi0);
            },
            [](const ExtinctionParams& p) {
                return fmt::format("extinction(A={}, gamma={}, eps={}, xi0={}, mu={})", p.A, p.gamma, p.eps, p.xi0,
                                   p.mu);
            },
        },
        params_);
}

BarrierCandidate with_amplitude(const BarrierCandidate& c, double A) {
    auto params = c.params();
    std::visit(overloaded{
                   [](ExpSuperParams&) { throw ConfigError("exp_super has no free amplitude"); },
                   [A](auto& p) { p.A = A; },
               },
               params);
    return BarrierCandidate(params);
}

BarrierCandidate build_exp_super(const ProblemSpec& spec, const SpatialGrid& grid, double M, double eps,
                                 double B_max) {
    const auto u0 = initial_values(spec, grid);
    const double need = *std::max_element(u0.begin(), u0.end()) + eps;
    if (!(M >= need)) {
        throw ConfigError(fmt::format("exp_super needs M >= sup u0 + eps = {}, got {}", need, M));
    }
    const double K = std::max(sample_range(spec.k, grid, 0.0, std::min(1.0, spec.T)).max, 0.0);
    const double l = spec.l;
    auto deficit = [&](double B) {
        const double integral =
            integrate_pieces([&](double y) { return power(1.0 + B * (y - 0.5) * (y - 0.5), l); }, 0.0, 1.0, {0.5});
        return B - K * power(M, l - 1.0) * std::max(1.0, std::exp(l - 1.0)) * integral;
    };
    double B = 1.0;
    if (K > 0.0 && M > 0.0) {
        double lo = 0.0;
        double hi = std::ldexp(1.0, -10);
        while (hi <= B_max && !(deficit(hi) > 0.0)) {
            lo = hi;
            hi *= 2.0;
        }
        if (hi > B_max) {
            throw ConstructionError(fmt::format(
                "exp_super: no B <= {} satisfies B >= K M^(l-1) max(1, e^(l-1)) int psi^l (K = {}, M = {}, l = {})",
                B_max, K, M, l));
        }
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (deficit(mid) > 0.0 ? hi : lo) = mid;
        }
        B = deficit(1.01 * hi) > 0.0 ? 1.01 * hi : hi;
    }
    return BarrierCandidate(ExpSuperParams{M, B, K, std::min(1.0 / (2.0 * B), 1.0)});
}

BarrierCandidate build_layer_sub(const ProblemSpec& spec, const LayerSubParams& q) {
    const double p = spec.p;
    const double l = spec.l;
    if (!(l < 1.0) || l > p) {
        throw ConfigError(fmt::format("layer_sub requires l < min(1, p) (or l = p < 1); got p = {}, l = {}", p, l));
    }
    const double a_lo = 1.0 / (1.0 - l);
    if (l == p) {
        if (!nearly(q.alpha, a_lo)) throw ConfigError(fmt::format("layer_sub with l = p needs alpha = 1/(1-l) = {}", a_lo));
        if (!nearly(q.beta, 2.0 * a_lo)) {
            throw ConfigError(fmt::format("layer_sub with l = p needs beta = 2/(1-l) = {}", 2.0 * a_lo));
        }
    } else if (p < 1.0) {
        const double a_hi = 1.0 / (1.0 - p);
        if (!(q.alpha > a_lo && q.alpha <= a_hi)) {
            throw ConfigError(fmt::format("layer_sub needs 1/(1-l) < alpha <= 1/(1-p), i.e. {} < alpha <= {}", a_lo, a_hi));
        }
        if (!(q.beta > 2.0 && q.beta < 2.0 * a_hi)) {
            throw ConfigError(fmt::format("layer_sub needs 2 < beta < 2/(1-p) = {}", 2.0 * a_hi));
        }
    } else {
        if (!(q.alpha > a_lo)) throw ConfigError(fmt::format("layer_sub needs alpha > 1/(1-l) = {}", a_lo));
        if (!(q.beta > 2.0)) throw ConfigError("layer_sub needs beta > 2");
    }
    if (!(q.A > 0.0)) throw ConfigError("layer_sub needs A > 0");
    if (!(q.xi0 > 0.0 && q.xi0 <= 1.0)) throw ConfigError("layer_sub needs xi0 in (0, 1]");
    if (!(q.t0 >= 0.0)) throw ConfigError("layer_sub needs t0 >= 0");
    if (!(q.T0 > 0.0 && q.T0 < 0.25)) throw ConfigError("layer_sub needs 0 < T0 < 1/4");
    if (!(q.T0 <= spec.T - q.t0)) throw ConfigError("layer_sub needs T0 <= T - t0");
    if (!(q.xi0 * std::sqrt(q.T0) < 0.5)) throw ConfigError("layer_sub needs its support xi0 sqrt(T0) < 1/2");
    return BarrierCandidate(q);
}

namespace {

void check_layer_exponents(const ProblemSpec& spec, double gamma, double eps, double A, double xi0, const char* name) {
    const double p = spec.p;
    const double l = spec.l;
    if (!(l < 1.0) || p > l) {
        throw ConfigError(fmt::format("{} requires p < l < 1 (or p = l < 1); got p = {}, l = {}", name, p, l));
    }
    const double g_lo = (1.0 - l) / 2.0;
    if (p == l) {
        if (!nearly(gamma, g_lo)) throw ConfigError(fmt::format("{} with l = p needs gamma = (1-l)/2 = {}", name, g_lo));
    } else if (!(gamma > g_lo && gamma < (1.0 - p) / 2.0)) {
        throw ConfigError(
            fmt::format("{} needs (1-l)/2 < gamma < (1-p)/2, i.e. {} < gamma < {}", name, g_lo, (1.0 - p) / 2.0));
    }
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError(fmt::format("{} needs eps in (0, 1)", name));
    if (!(A > 0.0)) throw ConfigError(fmt::format("{} needs A > 0", name));
    if (!(xi0 > 0.0)) throw ConfigError(fmt::format("{} needs xi0 > 0", name));
    if (!(std::pow(eps, gamma) * xi0 < 0.5)) {
        throw ConfigError(fmt::format("{} needs its support eps^gamma xi0 < 1/2", name));
    }
}

}  // namespace

BarrierCandidate build_strict_super(const ProblemSpec& spec, const StrictSuperParams& q) {
    check_layer_exponents(spec, q.gamma, q.eps, q.A, q.xi0, "strict_super");
    return BarrierCandidate(q);
}

BarrierCandidate build_extinction_barrier(const ProblemSpec& spec, const ExtinctionParams& q) {
    check_layer_exponents(spec, q.gamma, q.eps, q.A, q.xi0, "extinction");
    if (!(q.mu > 0.0)) throw ConfigError("extinction needs mu > 0");
    return BarrierCandidate(q);
}

ResidualReport classify_candidate(const BarrierCandidate& candidate, const ProblemSpec& spec, const SpatialGrid& grid,
                                  const TimeGrid& times, const ClassifyOptions& options) {
    if (options.refine < 1 || options.support_samples < 0 || options.extra_times < 0) {
        throw ConfigError("classify: refine >= 1, support_samples >= 0, extra_times >= 0 required");
    }
    const double t_lo = std::max(candidate.t_begin(), times.t0);
    const double t_hi = std::min(candidate.t_end(), times.horizon());
    if (!(t_hi >= t_lo)) throw ConfigError("candidate time domain does not meet the time grid");

    std::vector<double> ts;
    const bool stationary = candidate.family() == BarrierFamily::strict_super && constant_in_time(spec);
    if (stationary) {
        ts.push_back(t_lo);
    } else {
        constexpr int max_grid_times = 256;
        int first = static_cast<int>(std::ceil((t_lo - times.t0) / times.dt - 1e-9));
        int last = static_cast<int>(std::floor((t_hi - times.t0) / times.dt + 1e-9));
        first = std::max(first, 0);
        last = std::min(last, times.n_steps);
        const int stride = std::max(1, (last - first) / max_grid_times);
        for (int j = first; j <= last; j += stride) ts.push_back(times.time(j));
        const double span = t_hi - t_lo;
        for (int k = 0; k <= options.extra_times; ++k) {
            ts.push_back(t_lo + span * k / std::max(options.extra_times, 1));
            if (k > 0) ts.push_back(t_lo + span * std::ldexp(1.0, -k));
        }
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    }

    std::vector<double> base;
    const int fine = grid.n_cells() * options.refine;
    for (int i = 0; i <= fine; ++i) base.push_back(static_cast<double>(i) / fine);

    const double reg = options.regularization;
    const double p = spec.p;
    const double l = spec.l;
    double sub = inf, sup = inf, bsup = inf;
    ResidualReport rep;
    rep.family = candidate.family();
    rep.interior_min = inf;
    rep.interior_max = -inf;
    rep.boundary_gap_0 = rep.boundary_gap_1 = inf;
    rep.boundary_gap_0_max = rep.boundary_gap_1_max = -inf;
    std::size_t n_boundary = 0;

    auto record = [&](double slack, double& worst) {
        if (std::isnan(slack)) return;
        worst = std::min(worst, slack);
    };

    std::vector<double> xs;
    for (const double t : ts) {
        xs = base;
        const auto kinks = candidate.kinks(t);
        xs.insert(xs.end(), kinks.begin(), kinks.end());
        const double w = candidate.support_width(t);
        if (w > 0.0 && w < 0.5) {
            for (int j = 0; j <= options.support_samples; ++j) {
                const double s = w * j / std::max(options.support_samples, 1);
                xs.push_back(s);
                xs.push_back(1.0 - s);
            }
        }
        for (const double x : xs) {
            const double u = candidate.value(x, t);
            const double ut = candidate.time_derivative(x, t);
            const double uxx = candidate.second_derivative(x, t);
            const double cv = spec.c(x, t);
            const double absorb = cv * power(std::max(u, 0.0), p);
            const double source = reg > 0.0 ? cv * power(reg, p) : 0.0;
            const double r = ut - uxx + absorb - source;
            if (!std::isfinite(r)) {
                throw EvaluationError(fmt::format("non-finite interior residual at x = {}, t = {} for {}", x, t,
                                                  candidate.describe()));
            }
            rep.interior_min = std::min(rep.interior_min, r);
            rep.interior_max = std::max(rep.interior_max, r);
            const double scale = std::fabs(ut) + std::fabs(uxx) + absorb + source;
            if (scale > 0.0) {
                record(-r / scale, sub);
                record(r / scale, sup);
            }
            ++rep.n_samples;
        }

        BoundaryTracePoint trace{t, inf, 0.0};
        auto breaks = kinks;
        breaks.push_back(0.5);
        for (const Boundary end : {Boundary::left, Boundary::right}) {
            const double flux = candidate.normal_derivative(end, t);
            const double integral = integrate_pieces(
                [&](double y) { return spec.k(end, y, t) * power(std::max(candidate.value(y, t), 0.0), l); }, 0.0,
                1.0, breaks);
            const double g = flux - integral;
            if (!std::isfinite(g)) {
                throw EvaluationError(fmt::format("non-finite boundary gap at t = {} for {}", t, candidate.describe()));
            }
            if (end == Boundary::left) {
                rep.boundary_gap_0 = std::min(rep.boundary_gap_0, g);
                rep.boundary_gap_0_max = std::max(rep.boundary_gap_0_max, g);
                trace = {t, flux, integral};
            } else {
                rep.boundary_gap_1 = std::min(rep.boundary_gap_1, g);
                rep.boundary_gap_1_max = std::max(rep.boundary_gap_1_max, g);
            }
            const double scale = std::fabs(flux) + std::fabs(integral);
            if (scale > 0.0) {
                record(-g / scale, sub);
                record(g / scale, sup);
                record(g / scale, bsup);
                ++n_boundary;
            }
        }
        rep.boundary_trace.push_back(trace);
    }

    rep.initial_min = inf;
    rep.initial_max = -inf;
    if (options.check_initial) {
        const double t = t_lo;
        for (const double x : base) {
            const double u = candidate.value(x, t);
            const double data = spec.u0(x) + reg;
            const double d = u - data;
            rep.initial_min = std::min(rep.initial_min, d);
            rep.initial_max = std::max(rep.initial_max, d);
            const double scale = std::fabs(u) + std::fabs(data);
            if (scale > 0.0) {
                record(-d / scale, sub);
                record(d / scale, sup);
            }
        }
    } else {
        rep.initial_min = rep.initial_max = 0.0;
    }

    rep.sub_margin = sub == inf ? 0.0 : sub;
    rep.super_margin = sup == inf ? 0.0 : sup;
    rep.boundary_super_margin = bsup == inf ? 0.0 : bsup;
    rep.subsolution = rep.sub_margin >= -options.tol;
    rep.supersolution = rep.super_margin >= -options.tol;
    rep.strict = rep.supersolution && n_boundary > 0 && rep.boundary_super_margin > options.tol;
    if (rep.subsolution && rep.supersolution) {
        rep.verdict = Certification::solution;
        rep.margin = std::min(rep.sub_margin, rep.super_margin);
    } else if (rep.strict) {
        rep.verdict = Certification::strict_supersolution;
        rep.margin = rep.super_margin;
    } else if (rep.supersolution) {
        rep.verdict = Certification::supersolution;
        rep.margin = rep.super_margin;
    } else if (rep.subsolution) {
        rep.verdict = Certification::subsolution;
        rep.margin = rep.sub_margin;
    } else {
        rep.verdict = Certification::neither;
        rep.margin = 0.0;
    }
    return rep;
}

namespace {

bool reaches_target(BarrierFamily f, const ResidualReport& r) {
    return f == BarrierFamily::layer_sub ? r.subsolution : r.strict;
}

}  // namespace

ShrinkResult shrink_to_admissible(const BarrierCandidate& start, const ProblemSpec& spec, const SpatialGrid& grid,
                                  const TimeGrid& times, const ClassifyOptions& options, double floor) {
    ShrinkResult out;
    const auto family = start.family();
    auto attempt = [&](const BarrierCandidate& c, double xi0, double T0) {
        auto rep = classify_candidate(c, spec, grid, times, options);
        out.trace.push_back(ShrinkStep{xi0, T0, rep.verdict, rep.margin});
        const bool ok = reaches_target(family, rep);
        if (ok) {
            out.certified = true;
            out.candidate = c;
        }
        out.report = std::move(rep);
        return ok;
    };

    if (const auto* q = std::get_if<LayerSubParams>(&start.params())) {
        for (double xi0 = q->xi0; xi0 >= floor; xi0 /= 2.0) {
            for (double T0 = q->T0; T0 >= floor; T0 /= 2.0) {
                auto next = *q;
                next.xi0 = xi0;
                next.T0 = T0;
                if (attempt(build_layer_sub(spec, next), xi0, T0)) return out;
            }
        }
        return out;
    }
    if (const auto* q = std::get_if<StrictSuperParams>(&start.params())) {
        for (double xi0 = q->xi0; xi0 >= floor; xi0 /= 2.0) {
            auto next = *q;
            next.xi0 = xi0;
            if (attempt(build_strict_super(spec, next), xi0, 0.0)) return out;
        }
        return out;
    }
    if (const auto* q = std::get_if<ExtinctionParams>(&start.params())) {
        for (double xi0 = q->xi0; xi0 >= floor; xi0 /= 2.0) {
            auto next = *q;
            next.xi0 = xi0;
            if (attempt(build_extinction_barrier(spec, next), xi0, 0.0)) return out;
        }
        return out;
    }
    throw ConfigError("shrink_to_admissible applies to layer_sub, strict_super and extinction only");
}

AmplitudeInterval search_amplitude(const BarrierCandidate& start, const ProblemSpec& spec, const SpatialGrid& grid,
                                   const TimeGrid& times, double A_lo, double A_hi, int count,
                                   const ClassifyOptions& options) {
    if (!(A_lo > 0.0 && A_hi >= A_lo) || count < 2) {
        throw ConfigError("amplitude search needs 0 < A_lo <= A_hi and count >= 2");
    }
    AmplitudeInterval out;
    const double ratio = std::pow(A_hi / A_lo, 1.0 / (count - 1));
    for (int i = 0; i < count; ++i) {
        const double A = A_lo * std::pow(ratio, i);
        const auto c = with_amplitude(start, A);
        const auto rep = classify_candidate(c, spec, grid, times, options);
        if (reaches_target(c.family(), rep)) out.certified.push_back(A);
    }
    if (!out.certified.empty()) {
        out.found = true;
        out.lo = out.certified.front();
        out.hi = out.certified.back();
    }
    return out;
}

double search_decay_rate(const ExtinctionParams& start, const ProblemSpec& spec, const SpatialGrid& grid,
                         double mu_max, const ClassifyOptions& options) {
    if (!(mu_max > 0.0)) throw ConfigError("decay-rate search needs mu_max > 0");
    auto certified = [&](double mu) {
        auto q = start;
        q.mu = mu;
        const auto c = build_extinction_barrier(spec, q);
        const auto times = make_time_grid(0.0, c.t_end() / 256.0, 256);
        return classify_candidate(c, spec, grid, times, options).strict;
    };
    if (certified(mu_max)) return mu_max;
    double hi = mu_max;
    double lo = mu_max / 2.0;
    int halvings = 0;
    while (!certified(lo)) {
        hi = lo;
        lo /= 2.0;
        if (++halvings > 40) {
            throw ConstructionError(fmt::format("no decay rate mu in (0, {}] certifies the extinction barrier", mu_max));
        }
    }
    for (int it = 0; it < 30; ++it) {
        const double mid = 0.5 * (lo + hi);
        (certified(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace nlheat
