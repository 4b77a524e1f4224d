#include "nlheat/fd_solver.hpp"

#include "nlheat/error.hpp"
#include "nlheat/simd.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace nlheat {

namespace {

inline double power(double u, double e) {
    if (e == 1.0) return u;
    if (e == 2.0) return u * u;
    if (e == 0.5) return std::sqrt(u);
    return std::pow(u, e);
}

// Thomas algorithm; sub[0] and super[n-1] are ignored. Overwrites rhs with the solution.
void solve_tridiagonal(std::span<const double> sub, std::span<const double> diag, std::span<const double> super,
                       std::span<double> rhs, std::vector<double>& scratch) {
    const std::size_t n = diag.size();
    scratch.resize(n);
    double beta = diag[0];
    rhs[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        scratch[i] = super[i - 1] / beta;
        beta = diag[i] - sub[i] * scratch[i];
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i + 1] * rhs[i + 1];
}

}  // namespace

void StepScheme::validate() const {
    if (!(fp_tol > 0.0)) throw ConfigError("solver.fp_tol must be > 0");
    if (fp_max < 1) throw ConfigError("solver.fp_max must be >= 1");
    if (!(tol_pos > 0.0)) throw ConfigError("solver.tol_pos must be > 0");
    if (!(u_floor > 0.0)) throw ConfigError("solver.u_floor must be > 0");
    if (!(stiffness_limit > 0.0)) throw ConfigError("solver.stiffness_limit must be > 0");
    if (store_stride < 1) throw ConfigError("grid.store_stride must be >= 1");
}

double Trajectory::min_value() const { return *std::min_element(values.begin(), values.end()); }
double Trajectory::max_value() const { return *std::max_element(values.begin(), values.end()); }

double Trajectory::sup_at(std::size_t s) const {
    const auto v = slice(s);
    double m = 0.0;
    for (const double x : v) m = std::max(m, std::fabs(x));
    return m;
}

void Trajectory::push(int step_index, std::span<const double> u) {
    steps.push_back(step_index);
    values.insert(values.end(), u.begin(), u.end());
}

std::vector<double> step(std::span<const double> state, double t_next, double dt, const ProblemSpec& spec,
                         const SpatialGrid& grid, double eps, const StepScheme& scheme, StepDiagnostic* diag) {
    check_shape(grid, state, "step");
    const std::size_t n = grid.size();
    const std::size_t last = n - 1;
    const double h = grid.h();
    const double r = dt / (h * h);
    const double flux_coef = 2.0 * dt / h;
    const double p = spec.p;
    const double l = spec.l;
    const bool absorbing = !spec.c.is_zero();
    const bool coupled = !spec.k.is_zero();
    const double lower = eps > 0.0 ? eps : 0.0;

    std::vector<double> dtc(n, 0.0), source(n, 0.0);
    if (absorbing) {
        const double eps_p = eps > 0.0 ? power(eps, p) : 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dtc[i] = dt * spec.c(grid.node(i), t_next);
            source[i] = dtc[i] * eps_p;
        }
    }
    std::vector<double> kw_left(n, 0.0), kw_right(n, 0.0);
    if (coupled) {
        const auto w = grid.weights();
        for (std::size_t i = 0; i < n; ++i) {
            kw_left[i] = w[i] * spec.k(Boundary::left, grid.node(i), t_next);
            kw_right[i] = w[i] * spec.k(Boundary::right, grid.node(i), t_next);
        }
    }

    if (absorbing && std::isfinite(scheme.stiffness_limit)) {
        const double m = std::max(*std::max_element(state.begin(), state.end()), std::max(eps, scheme.u_floor));
        const double stiffness = *std::max_element(dtc.begin(), dtc.end()) * p * power(m, p - 1.0);
        if (stiffness > scheme.stiffness_limit) {
            throw ConfigError(fmt::format("time step too large: dt*sup(c)*p*M^(p-1) = {} exceeds {}", stiffness,
                                          scheme.stiffness_limit));
        }
    }

    std::vector<double> u(state.begin(), state.end());
    for (auto& v : u) v = std::max(v, 0.0);
    std::vector<double> next(n), ul(n), sub(n), dia(n), sup(n), rhs(n), scratch;

    double change = std::numeric_limits<double>::infinity();
    int sweeps = 0;
    bool converged = false;
    while (sweeps < scheme.fp_max) {
        ++sweeps;
        double flux_left = 0.0, flux_right = 0.0;
        if (coupled) {
            for (std::size_t i = 0; i < n; ++i) ul[i] = power(u[i], l);
            flux_left = simd::dot(kw_left, ul);
            flux_right = simd::dot(kw_right, ul);
        }
        // Newton step on the backward-Euler system with the boundary flux frozen.
        for (std::size_t i = 0; i < n; ++i) {
            double absorb = 0.0, dabsorb = 0.0;
            if (absorbing) {
                absorb = dtc[i] * power(u[i], p);
                const double base = p < 1.0 ? std::max(u[i], scheme.u_floor) : u[i];
                dabsorb = dtc[i] * p * power(base, p - 1.0);
            }
            double residual = (1.0 + 2.0 * r) * u[i] + absorb - state[i] - source[i];
            if (i == 0) {
                residual -= 2.0 * r * u[1] + flux_coef * flux_left;
                sup[i] = -2.0 * r;
            } else if (i == last) {
                residual -= 2.0 * r * u[i - 1] + flux_coef * flux_right;
                sub[i] = -2.0 * r;
            } else {
                residual -= r * (u[i - 1] + u[i + 1]);
                sub[i] = -r;
                sup[i] = -r;
            }
            dia[i] = 1.0 + 2.0 * r + dabsorb;
            rhs[i] = -residual;
        }
        solve_tridiagonal(sub, dia, sup, rhs, scratch);
        double scale = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = std::max(u[i] + rhs[i], 0.0);
            scale = std::max(scale, next[i]);
        }
        change = simd::max_abs_diff(next, u);
        u.swap(next);
        if (!std::isfinite(change)) break;
        if (change <= scheme.fp_tol * scale) {
            converged = true;
            break;
        }
    }
    if (diag != nullptr) *diag = StepDiagnostic{sweeps, change};

    const double umin = *std::min_element(u.begin(), u.end());
    if (umin < lower - scheme.tol_pos) {
        throw PositivityError(fmt::format("iterate fell to {} below the lower barrier {}", umin, lower), umin);
    }
    if (!converged) {
        throw NonconvergenceError(
            fmt::format("inner fixed point did not settle in {} sweeps (last change {})", scheme.fp_max, change),
            change);
    }
    return u;
}

Trajectory solve_from(std::span<const double> initial, const ProblemSpec& spec, const SpatialGrid& grid,
                      const TimeGrid& times, double eps, const StepScheme& scheme) {
    scheme.validate();
    check_shape(grid, initial, "solve");
    if (eps < 0.0 || eps >= 1.0) throw ConfigError("regularization level must lie in [0,1)");
    Trajectory traj{grid, times, eps, {}, {}, {}};
    traj.diagnostics.reserve(static_cast<std::size_t>(times.n_steps));
    std::vector<double> u(initial.begin(), initial.end());
    traj.push(0, u);
    for (int j = 1; j <= times.n_steps; ++j) {
        StepDiagnostic d;
        try {
            u = step(u, times.time(j), times.dt, spec, grid, eps, scheme, &d);
        } catch (const PositivityError& e) {
            throw PositivityError(fmt::format("step {} (t = {}): {}", j, times.time(j), e.what()), e.min_value(), j);
        } catch (const NonconvergenceError& e) {
            throw NonconvergenceError(fmt::format("step {} (t = {}): {}", j, times.time(j), e.what()), e.residual(),
                                      j);
        }
        traj.diagnostics.push_back(d);
        if (j % scheme.store_stride == 0 || j == times.n_steps) traj.push(j, u);
    }
    return traj;
}

Trajectory solve(const ProblemSpec& spec, const SpatialGrid& grid, const TimeGrid& times, double eps,
                 const StepScheme& scheme) {
    spec.validate(grid);
    const auto initial = eps > 0.0 ? regularize_initial(spec, grid, eps) : initial_values(spec, grid);
    return solve_from(initial, spec, grid, times, eps, scheme);
}

double mass(const Trajectory& traj, std::size_t j) {
    if (j >= traj.n_slices()) {
        throw ConfigError(fmt::format("slice index {} out of range ({} stored)", j, traj.n_slices()));
    }
    return integrate(traj.grid, traj.slice(j));
}

}  // namespace nlheat
