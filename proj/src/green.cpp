#include "nlheat/green.hpp"

#include "nlheat/error.hpp"
#include "nlheat/simd.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>

namespace nlheat {

namespace {

constexpr double pi = std::numbers::pi;

double mode(int m, double x) { return m == 0 ? 1.0 : std::numbers::sqrt2 * std::cos(m * pi * x); }

// sum_{m>=1} cos(m theta) / m^2
double clausen_cos2(double theta) {
    double th = std::fmod(std::fabs(theta), 2.0 * pi);
    return pi * pi / 6.0 - pi * th / 2.0 + th * th / 4.0;
}

double power(double u, double e) {
    if (e == 1.0) return u;
    if (e == 2.0) return u * u;
    if (e == 0.5) return std::sqrt(u);
    return std::pow(u, e);
}

// Exact integral over one step of exp(-lambda (t_{j+1} - tau)) against the linear interpolant
// of g_j, g_{j+1}: returns {w0, w1, E}.
struct StepWeights {
    double w0, w1, decay;
};

StepWeights step_weights(double lambda, double dt) {
    const double z = lambda * dt;
    if (z == 0.0) return {dt / 2.0, dt / 2.0, 1.0};
    if (z < 1e-2) {
        const double w0 = 0.5 - z / 3.0 + z * z / 8.0 - z * z * z / 30.0 + z * z * z * z / 144.0;
        const double w1 = 0.5 - z / 6.0 + z * z / 24.0 - z * z * z / 120.0 + z * z * z * z / 720.0;
        return {dt * w0, dt * w1, std::exp(-z)};
    }
    const double decay = std::exp(-z);
    const double one_minus = -std::expm1(-z);
    return {dt * (one_minus / (z * z) - decay / z), dt * (1.0 / z - one_minus / (z * z)), decay};
}

double theta_factor(double p, double eps, double M) {
    return p * std::max(power(eps, p - 1.0), power(M, p - 1.0));
}

}  // namespace

NeumannKernel::NeumannKernel(int n_modes, double tail_tol) : n_modes_(n_modes), tail_tol_(tail_tol) {
    if (n_modes < 1) throw ConfigError("kernel.n_modes must be >= 1");
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw ConfigError("kernel.tail_tol must lie in (0,1)");
    // tail_bound is decreasing in t; bisect for the crossing.
    double lo = 1e-12, hi = 10.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        (tail_bound(mid) < tail_tol ? hi : lo) = mid;
        if (hi / lo < 1.0 + 1e-12) break;
    }
    t_min_ = hi;
}

double NeumannKernel::tail_bound(double t) const {
    const double m1 = n_modes_ + 1.0;
    return 2.0 * std::exp(-m1 * m1 * pi * pi * t) / -std::expm1(-pi * pi * t);
}

double kernel_eval(const NeumannKernel& kernel, double x, double y, double t) {
    if (!(t >= kernel.t_min())) {
        throw KernelDomainError(fmt::format("kernel evaluated at t = {} below t_min = {}", t, kernel.t_min()));
    }
    double s = 0.0;
    for (int m = kernel.n_modes(); m >= 1; --m) {
        s += std::exp(-m * m * pi * pi * t) * (std::cos(m * pi * x) * std::cos(m * pi * y));
    }
    return 1.0 + 2.0 * s;
}

double static_tail(double x, double xi, int n_modes) {
    const double full = (clausen_cos2(pi * (x - xi)) + clausen_cos2(pi * (x + xi))) / (pi * pi);
    double partial = 0.0;
    for (int m = n_modes; m >= 1; --m) {
        partial += 2.0 * std::cos(m * pi * x) * std::cos(m * pi * xi) / (m * m * pi * pi);
    }
    return full - partial;
}

double contraction_estimate(const ProblemSpec& spec, const SpatialGrid& grid, double eps, double M_bound, double T,
                            double t0) {
    if (spec.c.is_zero()) return 0.0;
    const double theta = theta_factor(spec.p, eps, M_bound);
    if (const auto* c = std::get_if<CoefficientField::Constant>(&spec.c.repr())) return theta * c->value * T;

    const int n_modes = std::max(16, grid.n_cells() / 2);
    const int n_tau = 256;
    const double dtau = T / n_tau;
    const auto nodes = grid.nodes();
    const auto w = grid.weights();
    std::vector<double> acc(static_cast<std::size_t>(n_modes) + 1, 0.0);
    std::vector<double> cv(grid.size());
    for (int j = 0; j < n_tau; ++j) {
        const double tau = t0 + (j + 0.5) * dtau;
        for (std::size_t i = 0; i < grid.size(); ++i) cv[i] = w[i] * spec.c(nodes[i], tau);
        const double age_hi = T - j * dtau;
        const double age_lo = T - (j + 1) * dtau;
        for (int m = 0; m <= n_modes; ++m) {
            double chat = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) chat += cv[i] * mode(m, nodes[i]);
            const double lambda = m * m * pi * pi;
            const double weight =
                m == 0 ? dtau : (std::exp(-lambda * age_lo) - std::exp(-lambda * age_hi)) / lambda;
            acc[static_cast<std::size_t>(m)] += chat * weight;
        }
    }
    double sup = 0.0;
    for (const double x : nodes) {
        double v = 0.0;
        for (int m = 0; m <= n_modes; ++m) v += acc[static_cast<std::size_t>(m)] * mode(m, x);
        sup = std::max(sup, v);
    }
    return theta * sup;
}

void PicardOptions::validate() const {
    if (max_iter < 1) throw ConfigError("picard.max_iter must be >= 1");
    if (!(tol > 0.0)) throw ConfigError("picard.tol must be > 0");
    if (n_modes < 0) throw ConfigError("picard.n_modes must be >= 0");
    if (!(slab_length >= 0.0)) throw ConfigError("picard.slab_length must be >= 0");
    if (!(M_bound >= 0.0)) throw ConfigError("picard.M_bound must be >= 0");
    if (store_stride < 1) throw ConfigError("picard.store_stride must be >= 1");
}

PicardResult picard_solve(const ProblemSpec& spec, const SpatialGrid& grid, const TimeGrid& times, double eps,
                          const PicardOptions& options) {
    options.validate();
    spec.validate(grid);
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("picard_solve needs eps in (0,1)");

    const std::size_t n = grid.size();
    const int n_modes = std::min(grid.n_cells(), options.n_modes > 0 ? options.n_modes : std::max(16, grid.n_cells() / 2));
    const std::size_t nm = static_cast<std::size_t>(n_modes) + 1;
    const auto nodes = grid.nodes();
    const auto w = grid.weights();

    std::vector<double> analysis(nm * n), synthesis(n * nm), phi_left(nm), phi_right(nm);
    std::vector<StepWeights> weights(nm);
    for (std::size_t m = 0; m < nm; ++m) {
        const int mi = static_cast<int>(m);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = mode(mi, nodes[i]);
            analysis[m * n + i] = w[i] * v;
            synthesis[i * nm + m] = v;
        }
        phi_left[m] = mode(mi, 0.0);
        phi_right[m] = mode(mi, 1.0);
        weights[m] = step_weights(static_cast<double>(mi * mi) * pi * pi, times.dt);
    }
    std::vector<double> tail_left(n), tail_right(n);
    for (std::size_t i = 0; i < n; ++i) {
        tail_left[i] = static_tail(nodes[i], 0.0, n_modes);
        tail_right[i] = static_tail(nodes[i], 1.0, n_modes);
    }

    const auto u_start = regularize_initial(spec, grid, eps);
    PicardResult result{Trajectory{grid, times, eps, {}, {}, {}}, {}, {}, {}, options.M_bound, true};
    if (result.M_bound <= 0.0) result.M_bound = 2.0 * *std::max_element(u_start.begin(), u_start.end());

    const bool absorbing = !spec.c.is_zero();
    const bool coupled = !spec.k.is_zero();
    const double eps_p = power(eps, spec.p);

    std::vector<double> amp(nm);
    simd::gemv(analysis, u_start, amp);
    std::vector<double> current(u_start);
    result.trajectory.push(0, current);

    int j_begin = 0;
    int slab = 0;
    while (j_begin < times.n_steps) {
        const double t_begin = times.time(j_begin);
        const double remaining = times.horizon() - t_begin;
        int steps = 0;
        double estimate = 0.0;
        if (options.slab_length > 0.0) {
            steps = std::max(1, static_cast<int>(std::floor(options.slab_length / times.dt + 1e-9)));
            steps = std::min(steps, times.n_steps - j_begin);
            estimate = contraction_estimate(spec, grid, eps, result.M_bound, steps * times.dt, t_begin);
            if (estimate >= 1.0) {
                throw ConfigError(fmt::format(
                    "slab of length {} violates the contraction condition (estimate {} >= 1); use a shorter slab",
                    steps * times.dt, estimate));
            }
        } else {
            double len = std::min(0.1, remaining);
            estimate = contraction_estimate(spec, grid, eps, result.M_bound, len, t_begin);
            while (estimate > 0.5 && len > times.dt) {
                len /= 2.0;
                estimate = contraction_estimate(spec, grid, eps, result.M_bound, len, t_begin);
            }
            steps = std::max(1, static_cast<int>(std::floor(len / times.dt + 1e-9)));
            steps = std::min(steps, times.n_steps - j_begin);
            estimate = contraction_estimate(spec, grid, eps, result.M_bound, steps * times.dt, t_begin);
        }
        result.slab_contraction.push_back(estimate);

        const std::size_t levels = static_cast<std::size_t>(steps) + 1;
        std::vector<double> dtc(levels * n, 0.0), kw_left(levels * n, 0.0), kw_right(levels * n, 0.0);
        for (std::size_t j = 0; j < levels; ++j) {
            const double t = times.time(j_begin + static_cast<int>(j));
            for (std::size_t i = 0; i < n; ++i) {
                if (absorbing) dtc[j * n + i] = spec.c(nodes[i], t);
                if (coupled) {
                    kw_left[j * n + i] = w[i] * spec.k(Boundary::left, nodes[i], t);
                    kw_right[j * n + i] = w[i] * spec.k(Boundary::right, nodes[i], t);
                }
            }
        }

        std::vector<double> iterate(levels * n), next(levels * n);
        for (std::size_t j = 0; j < levels; ++j) std::copy(current.begin(), current.end(), iterate.begin() + j * n);
        std::copy(current.begin(), current.end(), next.begin());

        std::vector<double> forcing(levels * nm), flux_left(levels), flux_right(levels), f(n), ul(n), fhat(nm), a(nm);
        bool converged = false;
        int iteration = 0;
        double delta = 0.0;
        while (iteration < options.max_iter) {
            ++iteration;
            for (std::size_t j = 0; j < levels; ++j) {
                const std::span<const double> u(iterate.data() + j * n, n);
                std::fill(fhat.begin(), fhat.end(), 0.0);
                if (absorbing) {
                    for (std::size_t i = 0; i < n; ++i) {
                        f[i] = dtc[j * n + i] * (eps_p - power(std::max(u[i], 0.0), spec.p));
                    }
                    simd::gemv(analysis, f, fhat);
                }
                flux_left[j] = flux_right[j] = 0.0;
                if (coupled) {
                    for (std::size_t i = 0; i < n; ++i) ul[i] = power(std::max(u[i], 0.0), spec.l);
                    flux_left[j] = simd::dot(std::span<const double>(kw_left.data() + j * n, n), ul);
                    flux_right[j] = simd::dot(std::span<const double>(kw_right.data() + j * n, n), ul);
                }
                for (std::size_t m = 0; m < nm; ++m) {
                    forcing[j * nm + m] = fhat[m] + phi_left[m] * flux_left[j] + phi_right[m] * flux_right[j];
                }
            }
            std::copy(amp.begin(), amp.end(), a.begin());
            delta = 0.0;
            double scale = 1.0;
            for (std::size_t j = 1; j < levels; ++j) {
                for (std::size_t m = 0; m < nm; ++m) {
                    const auto& sw = weights[m];
                    a[m] = sw.decay * a[m] + sw.w0 * forcing[(j - 1) * nm + m] + sw.w1 * forcing[j * nm + m];
                }
                const std::span<double> un(next.data() + j * n, n);
                simd::gemv(synthesis, a, un);
                if (coupled) {
                    simd::axpy(flux_left[j], tail_left, un);
                    simd::axpy(flux_right[j], tail_right, un);
                }
                delta = std::max(delta, simd::max_abs_diff(un, std::span<const double>(iterate.data() + j * n, n)));
                for (const double v : un) scale = std::max(scale, std::fabs(v));
            }
            iterate.swap(next);
            std::copy(current.begin(), current.end(), next.begin());
            result.history.push_back(PicardState{slab, iteration, delta});
            if (!std::isfinite(delta)) break;
            if ((!absorbing && !coupled) || delta <= options.tol * scale) {
                converged = true;
                std::copy(a.begin(), a.end(), amp.begin());
                break;
            }
        }
        if (!converged) {
            throw NonconvergenceError(fmt::format("Picard slab {} starting at t = {} did not settle in {} iterations "
                                                  "(last change {})",
                                                  slab, t_begin, options.max_iter, delta),
                                      delta, j_begin);
        }

        for (std::size_t j = 1; j < levels; ++j) {
            const std::span<const double> u(iterate.data() + j * n, n);
            for (const double v : u) {
                if (v > result.M_bound) result.bound_respected = false;
            }
            result.trajectory.diagnostics.push_back(StepDiagnostic{iteration, delta});
            const int index = j_begin + static_cast<int>(j);
            if (index % options.store_stride == 0 || index == times.n_steps) result.trajectory.push(index, u);
        }
        std::copy(iterate.end() - static_cast<std::ptrdiff_t>(n), iterate.end(), current.begin());
        j_begin += steps;
        result.slab_ends.push_back(times.time(j_begin));
        ++slab;
    }
    return result;
}

}  // namespace nlheat
