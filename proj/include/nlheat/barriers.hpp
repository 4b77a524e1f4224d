#pragma once

#include "nlheat/grid.hpp"
#include "nlheat/problem.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nlheat {

/// Explicit comparison functions. Layer families depend on x through the distance to the
/// boundary s = min(x, 1 - x); their supports stay inside s < 1/2, so u_xx = u_ss and the
/// outward normal derivative at either end is -u_s(0).
enum class BarrierFamily { exp_super, layer_sub, strict_super, extinction };

[[nodiscard]] std::string_view family_name(BarrierFamily f) noexcept;
/// Accepts exp_super, layer_sub, strict_super, extinction. Throws ConfigError otherwise.
[[nodiscard]] BarrierFamily parse_family(std::string_view name);

/// w = M exp(alpha t) (1 + B (x - 1/2)^2), alpha = 2B.
struct ExpSuperParams {
    double M = 1.0;
    double B = 1.0;
    double K = 0.0;        // sup k used in the construction
    double horizon = 1.0;  // min(1/alpha, 1)
};

/// A (t - t0)^alpha (xi0 - s / sqrt(t - t0))_+^beta on t0 < t <= t0 + T0.
struct LayerSubParams {
    double A = 1.0;
    double alpha = 3.0;
    double beta = 3.0;
    double xi0 = 1.0;
    double t0 = 0.0;
    double T0 = 0.05;
};

/// eps A (xi0 - eps^-gamma s)_+^(1/gamma), time independent.
struct StrictSuperParams {
    double A = 1.0;
    double gamma = 0.2;
    double eps = 0.1;
    double xi0 = 0.01;
};

/// eps A (xi0 - eps^-gamma s - mu t)_+^(1/gamma); vanishes for t >= xi0 / mu.
struct ExtinctionParams {
    double A = 1.0;
    double gamma = 0.2;
    double eps = 0.1;
    double xi0 = 0.5;
    double mu = 1.0;
};

/// Value, derivatives and time domain of one barrier.
class BarrierCandidate {
public:
    using Params = std::variant<ExpSuperParams, LayerSubParams, StrictSuperParams, ExtinctionParams>;

    explicit BarrierCandidate(Params params);

    [[nodiscard]] BarrierFamily family() const noexcept;
    [[nodiscard]] const Params& params() const noexcept { return params_; }

    [[nodiscard]] double value(double x, double t) const;
    [[nodiscard]] double time_derivative(double x, double t) const;
    [[nodiscard]] double second_derivative(double x, double t) const;
    [[nodiscard]] double normal_derivative(Boundary end, double t) const;

    /// x-positions where the candidate has a kink at time t (support edges).
    [[nodiscard]] std::vector<double> kinks(double t) const;
    /// Largest distance to the boundary inside the support at time t (1/2 for exp_super).
    [[nodiscard]] double support_width(double t) const;

    [[nodiscard]] double t_begin() const noexcept;
    [[nodiscard]] double t_end() const noexcept;
    [[nodiscard]] double sup_value() const;

    [[nodiscard]] std::string describe() const;

private:
    Params params_;
};

/// Finds (1% above) the smallest B up to B_max with
///   B >= K M^(l-1) max(1, e^(l-1)) int (1 + B (y - 1/2)^2)^l dy,  K = sup k over [t0, t0 + 1].
/// Throws ConfigError when M is below sup u0 + eps and ConstructionError when the search fails.
[[nodiscard]] BarrierCandidate build_exp_super(const ProblemSpec& spec, const SpatialGrid& grid, double M,
                                               double eps = 0.0, double B_max = 1e6);

/// Throws ConfigError naming the violated exponent or support constraint.
[[nodiscard]] BarrierCandidate build_layer_sub(const ProblemSpec& spec, const LayerSubParams& params);
[[nodiscard]] BarrierCandidate build_strict_super(const ProblemSpec& spec, const StrictSuperParams& params);
[[nodiscard]] BarrierCandidate build_extinction_barrier(const ProblemSpec& spec, const ExtinctionParams& params);

enum class Certification { neither, subsolution, supersolution, strict_supersolution, solution };

[[nodiscard]] std::string_view certification_name(Certification c) noexcept;

struct ClassifyOptions {
    double regularization = 0.0;  // classify against the eps-problem (source c eps^p, data u0 + eps)
    double tol = 1e-10;           // admissible negative relative slack
    int refine = 4;               // sample x on a grid this many times finer than the solver grid
    int support_samples = 64;     // extra samples inside each support layer
    int extra_times = 32;         // uniform and near-start time samples added to the time grid
    bool check_initial = true;
};

struct BoundaryTracePoint {
    double t = 0.0;
    double flux = 0.0;      // outward normal derivative (min over the two ends)
    double integral = 0.0;  // int k u^l dy at that end
};

/// Residuals r = u_t - u_xx + c u^p (- c eps^p) at interior samples and
/// g = du/dnu - int k u^l dy at the endpoints. Slacks are relative: r / (|u_t| + |u_xx| + |c u^p| + c eps^p),
/// with exact zeros (0/0) treated as equalities and left out of the margins.
struct ResidualReport {
    BarrierFamily family = BarrierFamily::exp_super;
    double interior_min = 0.0;
    double interior_max = 0.0;
    double boundary_gap_0 = 0.0;  // min over sampled times at x = 0 (max stored in *_max)
    double boundary_gap_1 = 0.0;
    double boundary_gap_0_max = 0.0;
    double boundary_gap_1_max = 0.0;
    double initial_min = 0.0;     // candidate(t_begin) - data
    double initial_max = 0.0;
    double sub_margin = 0.0;      // smallest relative slack in the subsolution direction
    double super_margin = 0.0;
    double boundary_super_margin = 0.0;  // smallest relative boundary slack, supersolution direction
    bool subsolution = false;
    bool supersolution = false;
    bool strict = false;
    Certification verdict = Certification::neither;
    double margin = 0.0;          // margin of the certified direction (0 for neither)
    std::size_t n_samples = 0;
    std::vector<BoundaryTracePoint> boundary_trace;
};

/// Samples the candidate over its time domain intersected with `times` (plus extra samples)
/// and a refined x grid with kinks. Throws EvaluationError on a non-finite residual.
[[nodiscard]] ResidualReport classify_candidate(const BarrierCandidate& candidate, const ProblemSpec& spec,
                                                const SpatialGrid& grid, const TimeGrid& times,
                                                const ClassifyOptions& options = {});

struct ShrinkStep {
    double xi0 = 0.0;
    double T0 = 0.0;
    Certification verdict = Certification::neither;
    double margin = 0.0;
};

struct ShrinkResult {
    bool certified = false;
    std::optional<BarrierCandidate> candidate;
    ResidualReport report;
    std::vector<ShrinkStep> trace;
};

/// Geometric shrink (factor 1/2, floor 1e-6) of xi0, and of T0 within each xi0 for layer_sub,
/// until the candidate certifies as a subsolution (layer_sub) or strict supersolution
/// (strict_super, extinction). Other families throw ConfigError.
[[nodiscard]] ShrinkResult shrink_to_admissible(const BarrierCandidate& start, const ProblemSpec& spec,
                                                const SpatialGrid& grid, const TimeGrid& times,
                                                const ClassifyOptions& options = {}, double floor = 1e-6);

struct AmplitudeInterval {
    bool found = false;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> certified;  // amplitudes on the scan grid that certified
};

/// Scans A over a geometric grid on [A_lo, A_hi] (`count` points) keeping every other parameter
/// of `start` and classifying each. A certifies when it reaches the target of shrink_to_admissible.
[[nodiscard]] AmplitudeInterval search_amplitude(const BarrierCandidate& start, const ProblemSpec& spec,
                                                 const SpatialGrid& grid, const TimeGrid& times, double A_lo,
                                                 double A_hi, int count, const ClassifyOptions& options = {});

/// Largest mu (by bisection on [0, mu_max]) for which the extinction barrier is a strict
/// supersolution. Throws ConstructionError when none in the bracket certifies.
[[nodiscard]] double search_decay_rate(const ExtinctionParams& start, const ProblemSpec& spec,
                                       const SpatialGrid& grid, double mu_max, const ClassifyOptions& options = {});

/// Composite Gauss-Legendre integral of f over [a, b] with breakpoints (sorted, inside [a,b]).
template <typename F>
[[nodiscard]] double integrate_pieces(F&& f, double a, double b, std::vector<double> breaks, int panels = 8);

/// Copy of `c` with amplitude A (throws ConfigError for exp_super).
[[nodiscard]] BarrierCandidate with_amplitude(const BarrierCandidate& c, double A);

namespace detail {
[[nodiscard]] const std::vector<double>& gauss_nodes();
[[nodiscard]] const std::vector<double>& gauss_weights();
}  // namespace detail

template <typename F>
double integrate_pieces(F&& f, double a, double b, std::vector<double> breaks, int panels) {
    std::vector<double> pts{a};
    for (const double v : breaks) {
        if (v > a && v < b) pts.push_back(v);
    }
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    const auto& xg = detail::gauss_nodes();
    const auto& wg = detail::gauss_weights();
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double len = (pts[k + 1] - pts[k]) / panels;
        for (int j = 0; j < panels; ++j) {
            const double lo = pts[k] + j * len;
            double s = 0.0;
            for (std::size_t q = 0; q < xg.size(); ++q) s += wg[q] * f(lo + 0.5 * len * (xg[q] + 1.0));
            total += 0.5 * len * s;
        }
    }
    return total;
}

}  // namespace nlheat
