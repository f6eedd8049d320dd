#include "levylab/irregularity.hpp"

#include "levylab/errors.hpp"
#include "levylab/parallel.hpp"
#include "levylab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace levylab {

namespace {

struct RangeScan {
    std::vector<double> probe_times;
    // probes x components
    std::vector<double> ranges;
    std::vector<std::size_t> ledger_jumps;
    std::vector<double> largest_increment;
};

void validate_scan(const SpectralModel& model, const ScanSettings& s) {
    if (!model.law().has_jump_part()) throw ParameterError("oscillation scan needs alpha < 2 (alpha = 2 has no jump part)");
    if (!(s.horizon > 0.0)) throw ParameterError("oscillation scan: horizon must be positive");
    if (!(s.window > 0.0)) throw ParameterError("oscillation scan: window must be positive");
    if (!(s.r1 > 0.0)) throw ParameterError("oscillation scan: r1 must be positive");
    if (!(s.step > 0.0) || s.step > s.window / 3.0)
        throw ParameterError("oscillation scan: grid step must be positive and at most window / 3");
    if (s.probe_fractions.empty()) throw ParameterError("oscillation scan: no probe times");
    for (const double f : s.probe_fractions) {
        if (!(f >= 0.0) || f * s.horizon + s.window > s.horizon * (1.0 + 1e-12))
            throw ParameterError("oscillation scan: probe window must lie within [0, horizon]");
    }
}

RangeScan scan_ranges(const SpectralModel& model, const ScanSettings& s, std::uint64_t experiment_id,
                      std::uint64_t replica) {
    const std::size_t n = model.size();
    const std::size_t p = s.probe_fractions.size();
    RangeScan scan;
    for (const double f : s.probe_fractions) scan.probe_times.push_back(f * s.horizon);
    scan.ranges.assign(p * n, 0.0);
    std::vector<std::size_t> counts(p * n, 0);
    std::vector<double> largest(p * n, 0.0);

    JumpResolvedOptions options;
    options.r_resolve = s.r1;
    options.step = s.step;
    options.small_jump_residual = s.small_jump_residual;

    parallel_for(n, s.workers, [&](std::size_t j) {
        Stream stream({experiment_id, replica, j});
        const ComponentPath path = simulate_component_jump_resolved(j, model, s.horizon, options, stream);
        for (std::size_t k = 0; k < p; ++k) {
            const double a = scan.probe_times[k];
            const double b = a + s.window;
            auto first = std::upper_bound(path.times.begin(), path.times.end(), a);
            auto last = std::lower_bound(path.times.begin(), path.times.end(), b);
            if (last - first < 2) throw ParameterError("oscillation scan: fewer than two grid points in a window");
            const auto off_first = first - path.times.begin();
            const auto off_last = last - path.times.begin();
            const auto [lo, hi] = std::minmax_element(path.values.begin() + off_first, path.values.begin() + off_last);
            scan.ranges[k * n + j] = *hi - *lo;
            for (const auto& jump : path.jumps) {
                if (jump.time > a && jump.time < b) {
                    ++counts[k * n + j];
                    largest[k * n + j] = std::max(largest[k * n + j], model.beta()[j] * std::abs(jump.size));
                }
            }
        }
    });

    scan.ledger_jumps.assign(p, 0);
    scan.largest_increment.assign(p, 0.0);
    for (std::size_t k = 0; k < p; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            scan.ledger_jumps[k] += counts[k * n + j];
            scan.largest_increment[k] = std::max(scan.largest_increment[k], largest[k * n + j]);
        }
    }
    return scan;
}

}  // namespace

std::vector<double> window_ranges(const FieldPath& path, double a, double b) {
    if (!(b > a)) throw ParameterError("window_ranges: empty window");
    auto first = std::upper_bound(path.times.begin(), path.times.end(), a);
    auto last = std::lower_bound(path.times.begin(), path.times.end(), b);
    if (last - first < 2) throw ParameterError("window_ranges: window must contain at least two grid points");
    const auto r0 = static_cast<std::size_t>(first - path.times.begin());
    const auto r1 = static_cast<std::size_t>(last - path.times.begin());
    std::vector<double> lo(path.components, std::numeric_limits<double>::infinity());
    std::vector<double> hi(path.components, -std::numeric_limits<double>::infinity());
    for (std::size_t i = r0; i < r1; ++i) {
        for (std::size_t j = 0; j < path.components; ++j) {
            const double v = path.at(i, j);
            lo[j] = std::min(lo[j], v);
            hi[j] = std::max(hi[j], v);
        }
    }
    for (const auto& jump : path.jumps) {
        if (jump.time > a && jump.time < b) {
            lo[jump.component] = std::min(lo[jump.component], jump.left_limit);
            hi[jump.component] = std::max(hi[jump.component], jump.left_limit);
        }
    }
    std::vector<double> out(path.components);
    for (std::size_t j = 0; j < path.components; ++j) out[j] = hi[j] - lo[j];
    return out;
}

double oscillation_lower_bound(const FieldPath& path, double a, double b) {
    const std::vector<double> r = window_ranges(path, a, b);
    return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
}

std::vector<double> first_jump_times(const SpectralModel& model, double r1, std::uint64_t experiment_id,
                                     std::uint64_t replica) {
    if (!model.law().has_jump_part()) throw ParameterError("first_jump_times: alpha = 2 has no jump part");
    const double rate = stable_tail_mass(model.law(), r1).value;
    std::vector<double> taus(model.size());
    for (std::size_t j = 0; j < taus.size(); ++j) {
        Stream stream({experiment_id, replica, j});
        taus[j] = stream.exponential(rate);
    }
    return taus;
}

double coverage_prediction(double rate, std::size_t n, double a, double b) {
    if (!(rate >= 0.0) || !(b >= a) || !(a >= 0.0)) throw ParameterError("coverage_prediction: invalid arguments");
    if (n == 0) return 0.0;
    const double cell = std::exp(-rate * a) - std::exp(-rate * b);
    if (cell >= 1.0) return 1.0;
    return -std::expm1(static_cast<double>(n) * std::log1p(-cell));
}

CoverageReport coverage_scan(std::span<const double> taus, double horizon, double width, double rate) {
    if (!(horizon > 0.0) || !(width > 0.0)) throw ParameterError("coverage_scan: horizon and width must be positive");
    CoverageReport report;
    report.width = width;
    report.horizon = horizon;
    const double ratio = horizon / width;
    const double nearest = std::round(ratio);
    const bool divides = std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest);
    const auto cells = static_cast<std::size_t>(divides ? nearest : std::ceil(ratio));
    report.truncated_last_cell = !divides;

    std::vector<double> sorted(taus.begin(), taus.end());
    std::sort(sorted.begin(), sorted.end());
    std::size_t covered = 0;
    for (std::size_t c = 0; c < cells; ++c) {
        const double a = static_cast<double>(c) * width;
        const double b = (c + 1 == cells) ? horizon : static_cast<double>(c + 1) * width;
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), a);
        const bool hit = it != sorted.end() && *it < b;
        covered += hit ? 1 : 0;
        report.cells.push_back({a, b, hit, coverage_prediction(rate, taus.size(), a, b)});
    }
    report.covered_fraction = static_cast<double>(covered) / static_cast<double>(cells);
    return report;
}

CoverageExperiment coverage_experiment(const SpectralModel& model, double r1, double horizon, double width,
                                       std::size_t replicas, std::uint64_t experiment_id, unsigned workers) {
    if (replicas == 0) throw ParameterError("coverage_experiment: replicas must be positive");
    const double rate = stable_tail_mass(model.law(), r1).value;
    std::vector<CoverageReport> reports(replicas);
    parallel_for(replicas, workers, [&](std::size_t r) {
        reports[r] = coverage_scan(first_jump_times(model, r1, experiment_id, r), horizon, width, rate);
    });
    CoverageExperiment out;
    out.components = model.size();
    out.replicas = replicas;
    out.rate = rate;
    std::size_t within = 0;
    for (std::size_t c = 0; c < reports.front().cells.size(); ++c) {
        std::size_t hits = 0;
        for (const auto& rep : reports) hits += rep.cells[c].covered ? 1 : 0;
        CoverageRow row;
        row.a = reports.front().cells[c].a;
        row.b = reports.front().cells[c].b;
        row.prediction = reports.front().cells[c].prediction;
        row.empirical = static_cast<double>(hits) / static_cast<double>(replicas);
        row.band = 3.0 * std::sqrt(row.prediction * (1.0 - row.prediction) / static_cast<double>(replicas));
        row.within = std::abs(row.empirical - row.prediction) <= row.band;
        within += row.within ? 1 : 0;
        out.rows.push_back(row);
    }
    out.fraction_within = static_cast<double>(within) / static_cast<double>(out.rows.size());
    return out;
}

OscillationReport cadlag_failure_scan(const SpectralModel& model, const ScanSettings& settings,
                                      std::uint64_t experiment_id, std::uint64_t replica) {
    validate_scan(model, settings);
    const double r2 = *std::min_element(model.beta().begin(), model.beta().end());
    if (!(settings.epsilon > 0.0) || !(settings.epsilon < settings.r1 * r2))
        throw ParameterError("cadlag_failure_scan: epsilon must satisfy 0 < epsilon < r1 * r2 (strict) = " +
                             std::to_string(settings.r1 * r2));
    const RangeScan scan = scan_ranges(model, settings, experiment_id, replica);
    const std::size_t n = model.size();
    OscillationReport report;
    report.window = settings.window;
    report.epsilon = settings.epsilon;
    report.components = n;
    const double decay = std::exp(-model.lambda().back() * settings.window);
    std::size_t exceeding = 0;
    for (std::size_t k = 0; k < scan.probe_times.size(); ++k) {
        ProbeResult probe;
        probe.probe_time = scan.probe_times[k];
        probe.bound = *std::max_element(scan.ranges.begin() + static_cast<std::ptrdiff_t>(k * n),
                                        scan.ranges.begin() + static_cast<std::ptrdiff_t>((k + 1) * n));
        probe.exceeds = probe.bound >= settings.epsilon;
        probe.decay_correction = decay;
        probe.ledger_jumps = scan.ledger_jumps[k];
        probe.largest_ledger_increment = scan.largest_increment[k];
        exceeding += probe.exceeds ? 1 : 0;
        report.probes.push_back(probe);
    }
    report.fraction_exceeding = static_cast<double>(exceeding) / static_cast<double>(report.probes.size());
    return report;
}

OscillationReport question4_probe(const SpectralModel& model, double delta, const ScanSettings& settings,
                                  std::uint64_t experiment_id, std::uint64_t replica) {
    const double lower = -1.0 / model.law().alpha();
    if (!(delta >= lower && delta < 0.0))
        throw ParameterError("question4_probe: delta must lie in [-1/alpha, 0) = [" + std::to_string(lower) + ", 0)");
    validate_scan(model, settings);
    const RangeScan scan = scan_ranges(model, settings, experiment_id, replica);
    const std::size_t n = model.size();
    OscillationReport report;
    report.window = settings.window;
    report.epsilon = settings.epsilon;
    report.components = n;
    report.exploratory = true;
    report.delta = delta;
    const double decay = std::exp(-model.lambda().back() * settings.window);
    std::size_t exceeding = 0;
    for (std::size_t k = 0; k < scan.probe_times.size(); ++k) {
        ProbeResult probe;
        probe.probe_time = scan.probe_times[k];
        double weighted = 0.0, plain = 0.0, bound = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double r = scan.ranges[k * n + j];
            weighted += std::pow(model.lambda()[j], delta) * r * r;
            plain += r * r;
            bound = std::max(bound, r);
        }
        probe.weighted_norm = std::sqrt(weighted);
        probe.plain_norm = std::sqrt(plain);
        probe.bound = bound;
        probe.exceeds = probe.weighted_norm >= settings.epsilon;
        probe.decay_correction = decay;
        probe.ledger_jumps = scan.ledger_jumps[k];
        probe.largest_ledger_increment = scan.largest_increment[k];
        exceeding += probe.exceeds ? 1 : 0;
        report.probes.push_back(probe);
    }
    report.fraction_exceeding = static_cast<double>(exceeding) / static_cast<double>(report.probes.size());
    return report;
}

FractionEstimate cadlag_failure_experiment(const SpectralModel& model, const ScanSettings& settings,
                                           std::size_t replicas, std::uint64_t experiment_id) {
    if (replicas == 0) throw ParameterError("cadlag_failure_experiment: replicas must be positive");
    FractionEstimate est;
    for (std::size_t r = 0; r < replicas; ++r)
        est.per_replica.push_back(cadlag_failure_scan(model, settings, experiment_id, r).fraction_exceeding);
    est.mean = stats::mean(est.per_replica);
    est.std_error = replicas > 1 ? std::sqrt(stats::variance(est.per_replica) / static_cast<double>(replicas)) : 0.0;
    return est;
}

}  // namespace levylab
