#pragma once

#include "levylab/rng.hpp"
#include "levylab/stable.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace levylab {

/// Diagonal generator and noise expansion truncated at N components:
/// dX^j = -lambda_j X^j dt + beta_j dL^j, with i.i.d. drivers L^j of law `law`.
class SpectralModel {
public:
    SpectralModel(std::vector<double> lambda, std::vector<double> beta, StableLaw law);

    /// Dirichlet Laplacian on (0, pi): lambda_j = j^2, beta_j = beta.
    static SpectralModel heat_equation(std::size_t n, StableLaw law, double beta = 1.0);

    std::size_t size() const { return lambda_.size(); }
    const std::vector<double>& lambda() const { return lambda_; }
    const std::vector<double>& beta() const { return beta_; }
    const StableLaw& law() const { return law_; }
    /// True when lambda_j == j^2 exactly for every j.
    bool is_heat_spectrum() const;

    SpectralModel with_law(StableLaw law) const { return SpectralModel(lambda_, beta_, law); }
    /// First n components.
    SpectralModel truncated(std::size_t n) const;

private:
    std::vector<double> lambda_;
    std::vector<double> beta_;
    StableLaw law_;
};

/// One resolved jump of the driver of `component` (size is before beta weighting).
struct JumpEvent {
    std::size_t component = 0;
    double time = 0.0;
    double size = 0.0;
    /// X^component(time-). The value at `time` is left_limit + beta * size,
    /// bit-exactly.
    double left_limit = 0.0;
};

/// Sampled field: coefficients X^j(t_i) on a strictly increasing grid
/// starting at 0, right-continuous at jump times, plus the jump ledger.
struct FieldPath {
    std::vector<double> times;
    std::size_t components = 0;
    /// Row-major (times.size() x components).
    std::vector<double> coeffs;
    /// Sorted by (time, component).
    std::vector<JumpEvent> jumps;
    /// Ledger threshold; zero when no ledger is kept.
    double resolve_threshold = 0.0;

    double at(std::size_t row, std::size_t component) const { return coeffs[row * components + component]; }
    std::span<const double> row(std::size_t i) const {
        return {coeffs.data() + i * components, components};
    }
    /// Full state X(tau-) for a ledger entry: row at tau with the jumping
    /// component replaced by its left limit.
    std::vector<double> left_limit_state(const JumpEvent& jump) const;
    std::size_t row_of(double t) const;
};

/// Scale of int_0^dt e^{-lambda (dt - s)} dL(s):
/// scale * ((1 - e^{-alpha lambda dt}) / (alpha lambda))^{1/alpha}, and
/// scale * dt^{1/alpha} in the lambda -> 0 limit.
double conv_scale(double lambda, const StableLaw& law, double dt);

/// Exact-in-distribution transition of component j over dt.
double ou_exact_update(double x, std::size_t j, const SpectralModel& model, double dt, Stream& stream);

struct ForcedJump {
    double time = 0.0;
    double size = 0.0;
};

struct JumpResolvedOptions {
    double r_resolve = 1e-2;
    double step = 1e-3;
    /// Gaussian surrogate for jumps below r_resolve. Off for deterministic checks.
    bool small_jump_residual = true;
    /// When non-empty, replaces the Poisson big-jump draw.
    std::vector<ForcedJump> forced_jumps;
};

/// Single-component trajectory. Times are non-decreasing: each jump time
/// appears twice, first with the left limit, then with the post-jump value.
struct ComponentPath {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<JumpEvent> jumps;
};

ComponentPath simulate_component_jump_resolved(std::size_t j, const SpectralModel& model, double horizon,
                                               const JumpResolvedOptions& options, Stream& stream);

enum class SimulationMode { marginal_exact, jump_resolved };

struct FieldSimulationOptions {
    SimulationMode mode = SimulationMode::marginal_exact;
    double step = 1e-2;
    double r_resolve = 1e-2;
    bool small_jump_residual = true;
    unsigned workers = 1;
    /// Maximum rows * components held in memory.
    std::size_t max_entries = 50'000'000;
};

/// All components simulated independently; component j draws from
/// StreamKey{experiment_id, replica, j}.
FieldPath simulate_field(const SpectralModel& model, double horizon, const FieldSimulationOptions& options,
                         std::uint64_t experiment_id, std::uint64_t replica);

/// Driver coefficients L^j(t), j < N, before beta weighting.
std::vector<double> simulate_noise_partial_sum(const SpectralModel& model, double t, std::uint64_t experiment_id,
                                               std::uint64_t replica);

/// u(xi) = sum_j coeffs_j sqrt(2/pi) sin(j xi) for xi in (0, pi).
std::vector<double> evaluate_field(std::span<const double> coeffs, std::span<const double> xi);

/// Uniform grid 0, h, 2h, ..., horizon (last step possibly shorter).
std::vector<double> uniform_grid(double horizon, double step);

/// Left limit, post-jump value and driver jump with
/// (value - left_limit) == beta * size holding bit-exactly. The inputs
/// usually move by at most a few ulps of max(|pre|, |beta jump|); for beta
/// whose rounded products skip a residue class over long stretches the
/// post-jump value can move by up to 2^16 ulps.
struct ExactJump {
    double left_limit;
    double value;
    double size;
};
ExactJump exact_jump(double pre, double beta, double jump);

}  // namespace levylab
