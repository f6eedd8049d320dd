#pragma once

#include "levylab/stable.hpp"
#include "levylab/stats.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace levylab {

/// H_delta identified with weighted l^2: |x|_delta = (sum lambda_j^delta x_j^2)^{1/2}.
struct WeightedNormSpec {
    double delta = 0.0;
    std::vector<double> lambda;

    static WeightedNormSpec heat(double delta, std::size_t n);
    double weight(std::size_t j) const;
};

double h_delta_norm(std::span<const double> x, const WeightedNormSpec& spec);

enum class MembershipTarget { noise, solution };

struct Membership {
    bool member = false;
    /// True when decided by the fitted-exponent series test instead of the
    /// closed-form threshold.
    bool heuristic = false;
    /// Heuristic only: the fitted exponent fell within the guard band around -1.
    bool within_guard_band = false;
    /// Closed-form threshold on delta (heat spectrum), NaN otherwise.
    double threshold = 0.0;
    /// Fitted log-term exponent (heuristic only).
    double series_exponent = 0.0;
};

/// Whether the noise L (resp. the solution X) takes values in H_delta.
///
/// Heat spectrum (lambda empty or lambda_j = j^2): L iff delta < -1/alpha,
/// X iff delta < 1/alpha, strict. Otherwise the series
/// sum lambda_j^{alpha delta / 2} (L) or sum lambda_j^{alpha delta / 2} / (alpha lambda_j) (X)
/// is judged by its fitted power-law exponent against -1 with a 0.05 guard band.
Membership analytic_membership(double delta, const StableLaw& law, MembershipTarget target,
                               std::span<const double> lambda = {});

inline constexpr double kMembershipGuardBand = 0.05;

/// Replica-major block of per-component Monte Carlo values.
struct SampleMatrix {
    std::size_t replicas = 0;
    std::size_t components = 0;
    std::vector<double> values;

    SampleMatrix() = default;
    SampleMatrix(std::size_t r, std::size_t n) : replicas(r), components(n), values(r * n, 0.0) {}
    double& at(std::size_t replica, std::size_t component) { return values[replica * components + component]; }
    double at(std::size_t replica, std::size_t component) const { return values[replica * components + component]; }
    std::vector<double> column(std::size_t component) const;
};

/// lambda_j^delta x_j^2 elementwise.
SampleMatrix weighted_squares(const SampleMatrix& coeffs, const WeightedNormSpec& spec);

struct MedianSlopeRow {
    std::size_t j = 0;
    double median = 0.0;
    double fitted = 0.0;
    double residual = 0.0;
};

struct MedianSlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_std_error = 0.0;
    /// Half-width of the 95% confidence band on the slope.
    double band = 0.0;
    std::vector<MedianSlopeRow> rows;
};

inline constexpr std::size_t kMinMedianReplicas = 1000;

/// Least-squares slope of log(median over replicas) against log j for
/// 1-based components j in [j_lo, j_hi]. Medians, because second moments
/// are infinite for alpha < 2.
MedianSlopeFit tail_exponent_via_medians(const SampleMatrix& weighted, std::size_t j_lo, std::size_t j_hi,
                                         std::size_t min_replicas = kMinMedianReplicas);

enum class Drift { plateau, growth };

struct PartialSumProfile {
    std::vector<double> sums;
    /// Slope of log S_J against log J on the upper half of the range.
    double upper_slope = 0.0;
    /// Empty below kMinProfileLength components.
    std::optional<Drift> drift;
};

inline constexpr std::size_t kMinProfileLength = 1000;
inline constexpr double kPlateauSlope = 0.1;

/// S_J = sum_{j <= J} lambda_j^delta x_j^2 for J = 1..N with a plateau/growth call.
PartialSumProfile partial_sum_profile(std::span<const double> x, const WeightedNormSpec& spec);

/// Pointwise median across replicas of the per-replica partial sums, classified
/// the same way. Robust to the occasional huge heavy-tailed term.
PartialSumProfile median_partial_sum_profile(const SampleMatrix& coeffs, const WeightedNormSpec& spec);

const char* to_string(Drift d);

}  // namespace levylab
