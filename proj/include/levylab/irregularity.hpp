#pragma once

#include "levylab/ou.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace levylab {

/// Per-component max - min of X^j over the grid points and ledger left
/// limits with time in the open window (a, b).
std::vector<double> window_ranges(const FieldPath& path, double a, double b);

/// max_j (max - min of X^j over (a, b)): a certified lower bound for the
/// oscillation of the path on (a, b) in H = l^2, since
/// |X(t) - X(s)| >= |X^j(t) - X^j(s)| for every j.
double oscillation_lower_bound(const FieldPath& path, double a, double b);

/// First times tau_n at which driver n jumps by at least r1: i.i.d.
/// exponential with rate nu{|x| >= r1}, drawn directly from component streams.
std::vector<double> first_jump_times(const SpectralModel& model, double r1, std::uint64_t experiment_id,
                                     std::uint64_t replica);

/// P(some tau_n in (a, b)) for n i.i.d. Exp(rate) times:
/// 1 - (1 - (e^{-rate a} - e^{-rate b}))^n.
double coverage_prediction(double rate, std::size_t n, double a, double b);

struct CoverageCell {
    double a = 0.0;
    double b = 0.0;
    bool covered = false;
    double prediction = 0.0;
};

struct CoverageReport {
    double width = 0.0;
    double horizon = 0.0;
    /// Last cell shorter than `width` because width does not divide horizon.
    bool truncated_last_cell = false;
    std::vector<CoverageCell> cells;
    double covered_fraction = 0.0;
};

CoverageReport coverage_scan(std::span<const double> taus, double horizon, double width, double rate);

struct CoverageRow {
    double a = 0.0;
    double b = 0.0;
    double prediction = 0.0;
    double empirical = 0.0;
    /// 3-sigma binomial half-width around the prediction.
    double band = 0.0;
    bool within = false;
};

struct CoverageExperiment {
    std::size_t components = 0;
    std::size_t replicas = 0;
    double rate = 0.0;
    std::vector<CoverageRow> rows;
    double fraction_within = 0.0;
};

/// Repeats first_jump_times + coverage_scan over replicas and compares each
/// cell's hit frequency with its analytic prediction.
CoverageExperiment coverage_experiment(const SpectralModel& model, double r1, double horizon, double width,
                                       std::size_t replicas, std::uint64_t experiment_id, unsigned workers = 1);

struct ScanSettings {
    double horizon = 1.0;
    double window = 1e-2;
    double epsilon = 0.0;
    /// Ledger threshold: jumps of the drivers with |size| >= r1 are resolved.
    double r1 = 1.0;
    double step = 1e-3;
    /// Probe times as fractions of the horizon.
    std::vector<double> probe_fractions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    bool small_jump_residual = true;
    unsigned workers = 1;
};

struct ProbeResult {
    double probe_time = 0.0;
    double bound = 0.0;
    bool exceeds = false;
    /// e^{-lambda_N window}
    double decay_correction = 1.0;
    std::size_t ledger_jumps = 0;
    /// max beta_n |Delta L| over ledger jumps in the window.
    double largest_ledger_increment = 0.0;
    /// H_delta-weighted norm of the range vector (exploratory probe only).
    double weighted_norm = 0.0;
    /// Unweighted l^2 norm of the range vector (exploratory probe only).
    double plain_norm = 0.0;
};

struct OscillationReport {
    double window = 0.0;
    double epsilon = 0.0;
    std::size_t components = 0;
    std::vector<ProbeResult> probes;
    double fraction_exceeding = 0.0;
    /// Set by question4_probe: the measured quantity carries no claim.
    bool exploratory = false;
    double delta = 0.0;
};

/// Oscillation scan behind the non-cadlag mechanism: for each probe t, the
/// oscillation lower bound over (t, t + window) of a jump-resolved path.
///
/// Components are simulated one at a time on their own grid (uniform grid plus
/// own jump times) and reduced by max, so memory stays O(grid) for any N and
/// the scan for N components is coupled with every smaller truncation.
/// Requires min beta = r2 > 0 and epsilon < r1 r2.
OscillationReport cadlag_failure_scan(const SpectralModel& model, const ScanSettings& settings,
                                      std::uint64_t experiment_id, std::uint64_t replica);

/// Same scan with the oscillation measured as the H_delta norm of the range
/// vector, delta in [-1/alpha, 0). Exploratory: nothing is asserted about it.
OscillationReport question4_probe(const SpectralModel& model, double delta, const ScanSettings& settings,
                                  std::uint64_t experiment_id, std::uint64_t replica);

struct FractionEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::vector<double> per_replica;
};

FractionEstimate cadlag_failure_experiment(const SpectralModel& model, const ScanSettings& settings,
                                           std::size_t replicas, std::uint64_t experiment_id);

}  // namespace levylab
