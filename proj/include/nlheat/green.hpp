#pragma once

#include "nlheat/fd_solver.hpp"

#include <vector>

namespace nlheat {

/// Neumann heat kernel of (0,1) as a truncated cosine series
///   G(x,y;t) = 1 + 2 sum_{m=1}^{n_modes} exp(-m^2 pi^2 t) cos(m pi x) cos(m pi y).
/// Evaluation is refused below t_min, the time at which the discarded tail
/// 2 exp(-(n_modes+1)^2 pi^2 t) / (1 - exp(-pi^2 t)) reaches `tail_tol`.
class NeumannKernel {
public:
    explicit NeumannKernel(int n_modes = 64, double tail_tol = 1e-10);

    [[nodiscard]] int n_modes() const noexcept { return n_modes_; }
    [[nodiscard]] double tail_tol() const noexcept { return tail_tol_; }
    [[nodiscard]] double t_min() const noexcept { return t_min_; }
    [[nodiscard]] double tail_bound(double t) const;

private:
    int n_modes_;
    double tail_tol_;
    double t_min_;
};

/// Throws KernelDomainError when t < kernel.t_min().
[[nodiscard]] double kernel_eval(const NeumannKernel& kernel, double x, double y, double t);

/// theta * sup_x int_0^T int G(x,y;T-tau) c(y,tau) dy dtau with
/// theta = p max(eps^(p-1), M_bound^(p-1)). The slab is a contraction when this is < 1.
[[nodiscard]] double contraction_estimate(const ProblemSpec& spec, const SpatialGrid& grid, double eps,
                                          double M_bound, double T, double t0 = 0.0);

struct PicardOptions {
    int max_iter = 200;
    double tol = 1e-10;       // sup-norm change, relative to max(1, sup|u|)
    int n_modes = 0;          // 0 selects n_cells / 2 (at least 16)
    double slab_length = 0.0; // 0 selects the longest slab with contraction estimate <= 1/2, capped at 0.1
    double M_bound = 0.0;     // 0 falls back to 2 sup u0_eps
    int store_stride = 1;

    void validate() const;
};

struct PicardState {
    int slab = 0;
    int iteration = 0;
    double sup_delta = 0.0;
};

struct PicardResult {
    Trajectory trajectory;
    std::vector<PicardState> history;
    std::vector<double> slab_ends;
    std::vector<double> slab_contraction;  // contraction_estimate of each slab
    double M_bound = 0.0;
    bool bound_respected = true;           // sup u <= M_bound over the run
};

/// Picard iteration on the integral form of the regularized problem,
///   u = int G u0_eps + int int G (c eps^p - c u^p) + sum_{x in {0,1}} int G(., x; t - tau) F_x(tau) dtau,
/// with F_x(tau) = int k(x,y,tau) u^l(y,tau) dy. The boundary "surface integral" of one
/// dimension is the two-endpoint sum. The solution is carried as cosine-mode amplitudes;
/// the time convolution is integrated exactly against piecewise-linear forcing, and the modes
/// beyond the truncation are restored in their quasi-static limit for the endpoint sources.
/// Slabs are chained on `times`; each slab iterates to `tol` or throws NonconvergenceError.
[[nodiscard]] PicardResult picard_solve(const ProblemSpec& spec, const SpatialGrid& grid, const TimeGrid& times,
                                        double eps, const PicardOptions& options);

/// sum_{m>n_modes} 2 cos(m pi x) cos(m pi xi) / (m pi)^2, the Neumann-series remainder of a
/// point source at xi in the quasi-static limit.
[[nodiscard]] double static_tail(double x, double xi, int n_modes);

}  // namespace nlheat
