#include "levylab/experiments.hpp"

#include "levylab/csv.hpp"
#include "levylab/errors.hpp"
#include "levylab/field_io.hpp"
#include "levylab/gaussian_reference.hpp"
#include "levylab/irregularity.hpp"
#include "levylab/parallel.hpp"
#include "levylab/spaces.hpp"
#include "levylab/stats.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace levylab {

namespace {

class Table {
public:
    explicit Table(std::vector<std::string> columns) { write_csv_header(out_, columns); }
    void add(const CsvRow& row) { out_ << row.str() << '\n'; }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

std::vector<std::size_t> truncation_levels(const ExperimentConfig& c) {
    std::vector<std::size_t> levels = c.n_values;
    if (levels.empty()) levels.push_back(*c.n);
    for (const std::size_t v : levels)
        if (v > *c.n) throw ParameterError("n_values may not exceed N");
    return levels;
}

ScanSettings scan_settings(const ExperimentConfig& c, double epsilon) {
    ScanSettings s;
    s.horizon = *c.horizon;
    s.window = *c.window;
    s.epsilon = epsilon;
    s.r1 = *c.r1;
    s.step = c.grid_step;
    s.probe_fractions = c.probe_fractions;
    s.workers = c.workers;
    return s;
}

std::vector<CsvArtifact> run_simulate(const ExperimentConfig& c) {
    const SpectralModel model = model_from_config(c);
    FieldSimulationOptions options;
    options.mode = c.mode == "jump-resolved" ? SimulationMode::jump_resolved : SimulationMode::marginal_exact;
    options.step = c.grid_step;
    options.r_resolve = c.r_resolve;
    options.workers = c.workers;
    options.max_entries = c.max_entries;
    const FieldPath path = simulate_field(model, *c.horizon, options, derive_experiment_id(*c.seed, "simulate"), 0);
    std::vector<CsvArtifact> out;
    std::ostringstream coeffs;
    write_field_coefficients(coeffs, path);
    out.push_back({"field_coeffs.csv", coeffs.str()});
    if (options.mode == SimulationMode::jump_resolved) {
        std::ostringstream ledger;
        write_jump_ledger(ledger, path);
        out.push_back({"field_jumps.csv", ledger.str()});
    }
    return out;
}

std::vector<CsvArtifact> run_threshold_scan(const ExperimentConfig& c) {
    const SpectralModel model = model_from_config(c);
    const std::size_t n = model.size();
    const std::size_t replicas = c.replicas;
    if (replicas > c.max_entries / n) throw ResourceError("threshold-scan sample matrix exceeds max_entries");
    const double horizon = *c.horizon;
    const double alpha = model.law().alpha();

    SampleMatrix solution(replicas, n);
    SampleMatrix noise(replicas, n);
    const std::uint64_t solution_id = derive_experiment_id(*c.seed, "threshold-scan/solution");
    const std::uint64_t noise_id = derive_experiment_id(*c.seed, "threshold-scan/noise");
    parallel_for(replicas, c.workers, [&](std::size_t r) {
        for (std::size_t j = 0; j < n; ++j) {
            Stream stream({solution_id, r, j});
            solution.at(r, j) = ou_exact_update(0.0, j, model, horizon, stream);
        }
        const std::vector<double> l = simulate_noise_partial_sum(model, horizon, noise_id, r);
        for (std::size_t j = 0; j < n; ++j) noise.at(r, j) = model.beta()[j] * l[j];
    });

    Table slopes({"target", "delta", "alpha", "slope", "std_error", "band", "predicted_slope", "profile_slope", "drift",
                  "analytic_member", "analytic_heuristic"});
    Table medians({"target", "delta", "j", "median", "fitted", "residual"});
    Table profiles({"target", "delta", "J", "S_J"});
    const bool heat = model.is_heat_spectrum();
    for (const auto target : {MembershipTarget::noise, MembershipTarget::solution}) {
        const char* name = target == MembershipTarget::noise ? "noise" : "solution";
        const SampleMatrix& coeffs = target == MembershipTarget::noise ? noise : solution;
        for (const double delta : c.delta_grid) {
            const WeightedNormSpec spec{delta, model.lambda()};
            const MedianSlopeFit fit = tail_exponent_via_medians(weighted_squares(coeffs, spec), 1, n);
            const PartialSumProfile profile = median_partial_sum_profile(coeffs, spec);
            const Membership member = analytic_membership(delta, model.law(), target, model.lambda());
            const double predicted = !heat ? std::numeric_limits<double>::quiet_NaN()
                                     : target == MembershipTarget::noise ? 2.0 * delta
                                                                         : 2.0 * delta - 4.0 / alpha;
            slopes.add(CsvRow()
                           .add(name)
                           .add(delta)
                           .add(alpha)
                           .add(fit.slope)
                           .add(fit.slope_std_error)
                           .add(fit.band)
                           .add(predicted)
                           .add(profile.upper_slope)
                           .add(profile.drift ? to_string(*profile.drift) : "unclassified")
                           .add(member.member)
                           .add(member.heuristic));
            for (const auto& row : fit.rows)
                medians.add(CsvRow().add(name).add(delta).add(row.j).add(row.median).add(row.fitted).add(row.residual));
            for (std::size_t J = 0; J < profile.sums.size(); ++J)
                profiles.add(CsvRow().add(name).add(delta).add(J + 1).add(profile.sums[J]));
        }
    }
    return {{"threshold_slopes.csv", slopes.str()},
            {"threshold_medians.csv", medians.str()},
            {"threshold_profiles.csv", profiles.str()}};
}

std::vector<CsvArtifact> run_jump_density(const ExperimentConfig& c) {
    const SpectralModel full = model_from_config(c);
    const std::uint64_t id = derive_experiment_id(*c.seed, "jump-density");
    Table ks({"N", "rate", "samples", "ks_statistic", "p_value", "mean", "expected_mean"});
    Table cells({"N", "a", "b", "prediction", "empirical", "band", "within"});
    Table summary({"N", "replicas", "rate", "cells", "fraction_within"});
    for (const std::size_t n : truncation_levels(c)) {
        const SpectralModel model = full.truncated(n);
        const double rate = stable_tail_mass(model.law(), *c.r1).value;
        const std::vector<double> taus = first_jump_times(model, *c.r1, id, 0);
        const auto test = stats::ks_one_sample(taus, [rate](double t) { return t <= 0.0 ? 0.0 : -std::expm1(-rate * t); });
        ks.add(CsvRow().add(n).add(rate).add(taus.size()).add(test.statistic).add(test.p_value).add(stats::mean(taus)).add(1.0 / rate));
        const CoverageExperiment cov = coverage_experiment(model, *c.r1, *c.horizon, *c.window, c.replicas, id, c.workers);
        for (const auto& row : cov.rows)
            cells.add(CsvRow().add(n).add(row.a).add(row.b).add(row.prediction).add(row.empirical).add(row.band).add(row.within));
        summary.add(CsvRow().add(n).add(c.replicas).add(rate).add(cov.rows.size()).add(cov.fraction_within));
    }
    return {{"first_jump_ks.csv", ks.str()}, {"coverage.csv", cells.str()}, {"coverage_summary.csv", summary.str()}};
}

std::vector<CsvArtifact> run_oscillation(const ExperimentConfig& c) {
    const SpectralModel full = model_from_config(c);
    const std::uint64_t id = derive_experiment_id(*c.seed, "oscillation");
    const ScanSettings settings = scan_settings(c, *c.epsilon);
    Table probes({"probe_t", "window", "bound", "epsilon", "exceeds", "N", "decay_correction", "replica", "ledger_jumps",
                  "largest_ledger_increment"});
    Table summary({"N", "replicas", "fraction_mean", "std_error"});
    for (const std::size_t n : truncation_levels(c)) {
        const SpectralModel model = full.truncated(n);
        std::vector<double> fractions;
        for (std::size_t r = 0; r < c.replicas; ++r) {
            const OscillationReport rep = cadlag_failure_scan(model, settings, id, r);
            fractions.push_back(rep.fraction_exceeding);
            for (const auto& p : rep.probes) {
                probes.add(CsvRow()
                               .add(p.probe_time)
                               .add(rep.window)
                               .add(p.bound)
                               .add(rep.epsilon)
                               .add(p.exceeds)
                               .add(n)
                               .add(p.decay_correction)
                               .add(r)
                               .add(p.ledger_jumps)
                               .add(p.largest_ledger_increment));
            }
        }
        const double se = fractions.size() > 1 ? std::sqrt(stats::variance(fractions) / static_cast<double>(fractions.size())) : 0.0;
        summary.add(CsvRow().add(n).add(c.replicas).add(stats::mean(fractions)).add(se));
    }
    return {{"oscillation.csv", probes.str()}, {"oscillation_summary.csv", summary.str()}};
}

std::vector<CsvArtifact> run_gaussian_check(const ExperimentConfig& c) {
    Table levels({"delta", "beta", "jmax", "value"});
    Table classes({"delta", "beta", "value_slope", "increment_exponent", "predicted_value_exponent", "convergent",
                   "analytic_convergent", "extrapolated_limit"});
    Table criterion({"delta", "satisfied", "analytic_continuous"});
    for (const double delta : c.delta_grid) {
        bool satisfied = false;
        for (const double b : c.beta_exponents) {
            const HSIntegralResult res = hs_integral({delta, b, *c.horizon, c.jmax});
            for (const auto& l : res.levels) levels.add(CsvRow().add(delta).add(b).add(l.jmax).add(l.value));
            classes.add(CsvRow()
                            .add(delta)
                            .add(b)
                            .add(res.value_slope)
                            .add(res.increment_exponent)
                            .add(res.predicted_value_exponent)
                            .add(res.convergent)
                            .add(delta < 0.5 - b)
                            .add(res.extrapolated_limit));
            satisfied = satisfied || res.convergent;
        }
        criterion.add(CsvRow().add(delta).add(satisfied).add(delta < 0.5));
    }

    const SpectralModel stable = model_from_config(c);
    const SpectralModel gaussian = stable.with_law(StableLaw(2.0, c.sigma));
    const std::uint64_t id = derive_experiment_id(*c.seed, "gaussian-check/modulus");
    Table modulus({"law", "replica", "level", "step", "modulus", "ledger_jump_norm"});
    Table summary({"law", "level", "fraction_decreasing_next", "fraction_above_ledger"});
    std::vector<ContinuityContrast> tables(c.replicas);
    for (std::size_t r = 0; r < c.replicas; ++r) {
        tables[r] = gaussian_continuity_contrast(gaussian, stable, *c.horizon, *c.delta, c.coarsest_level, c.finest_level,
                                                 c.r_resolve, c.workers, id, r);
    }
    for (const bool is_gauss : {true, false}) {
        const char* name = is_gauss ? "gaussian" : "stable";
        for (std::size_t r = 0; r < c.replicas; ++r) {
            const ModulusTable& t = is_gauss ? tables[r].gaussian : tables[r].stable;
            for (const auto& row : t.rows)
                modulus.add(CsvRow().add(name).add(r).add(row.level).add(row.step).add(row.modulus).add(t.largest_ledger_jump_norm));
        }
        const std::size_t rows = tables.front().gaussian.rows.size();
        for (std::size_t k = 0; k < rows; ++k) {
            std::size_t decreasing = 0, above = 0;
            for (std::size_t r = 0; r < c.replicas; ++r) {
                const ModulusTable& t = is_gauss ? tables[r].gaussian : tables[r].stable;
                if (k + 1 < rows && t.rows[k + 1].modulus < t.rows[k].modulus) ++decreasing;
                if (t.rows[k].modulus >= t.largest_ledger_jump_norm) ++above;
            }
            const double denom = static_cast<double>(c.replicas);
            summary.add(CsvRow()
                            .add(name)
                            .add(tables.front().gaussian.rows[k].level)
                            .add(k + 1 < rows ? static_cast<double>(decreasing) / denom : std::numeric_limits<double>::quiet_NaN())
                            .add(static_cast<double>(above) / denom));
        }
    }
    return {{"hs_levels.csv", levels.str()},
            {"hs_classification.csv", classes.str()},
            {"hs_criterion.csv", criterion.str()},
            {"modulus.csv", modulus.str()},
            {"modulus_summary.csv", summary.str()}};
}

std::vector<CsvArtifact> run_question4(const ExperimentConfig& c) {
    const SpectralModel full = model_from_config(c);
    const std::uint64_t id = derive_experiment_id(*c.seed, "question4-probe");
    const double r2 = *std::min_element(full.beta().begin(), full.beta().end());
    const ScanSettings settings = scan_settings(c, c.epsilon.value_or(0.5 * *c.r1 * r2));
    Table probes({"status", "N", "replica", "delta", "probe_t", "weighted_norm", "plain_norm", "bound", "exceeds"});
    Table trend({"status", "N", "replicas", "delta", "mean_weighted_norm", "std_error", "fraction_exceeding"});
    for (const std::size_t n : truncation_levels(c)) {
        const SpectralModel model = full.truncated(n);
        std::vector<double> norms;
        std::size_t exceeding = 0, total = 0;
        for (std::size_t r = 0; r < c.replicas; ++r) {
            const OscillationReport rep = question4_probe(model, *c.delta, settings, id, r);
            for (const auto& p : rep.probes) {
                probes.add(CsvRow().add("EXPLORATORY").add(n).add(r).add(rep.delta).add(p.probe_time).add(p.weighted_norm)
                               .add(p.plain_norm).add(p.bound).add(p.exceeds));
                norms.push_back(p.weighted_norm);
                exceeding += p.exceeds ? 1 : 0;
                ++total;
            }
        }
        const double se = norms.size() > 1 ? std::sqrt(stats::variance(norms) / static_cast<double>(norms.size())) : 0.0;
        trend.add(CsvRow().add("EXPLORATORY").add(n).add(c.replicas).add(*c.delta).add(stats::mean(norms)).add(se)
                      .add(static_cast<double>(exceeding) / static_cast<double>(total)));
    }
    return {{"question4.csv", probes.str()}, {"question4_trend.csv", trend.str()}};
}

nlohmann::json error_record(int code, const std::string& kind, const std::string& message,
                            const std::vector<Diagnostic>& diagnostics = {}) {
    nlohmann::json e = {{"status", "error"}, {"exit_code", code}, {"error", kind}, {"message", message}};
    nlohmann::json list = nlohmann::json::array();
    for (const auto& d : diagnostics) list.push_back({{"field", d.field}, {"message", d.message}});
    e["diagnostics"] = list;
    return e;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::vector<CsvArtifact> compute_experiment(const ExperimentConfig& config) {
    switch (*config.kind) {
    case ExperimentKind::simulate: return run_simulate(config);
    case ExperimentKind::threshold_scan: return run_threshold_scan(config);
    case ExperimentKind::jump_density: return run_jump_density(config);
    case ExperimentKind::oscillation: return run_oscillation(config);
    case ExperimentKind::gaussian_check: return run_gaussian_check(config);
    case ExperimentKind::question4_probe: return run_question4(config);
    }
    throw std::logic_error("unhandled experiment kind");
}

RunResult run(const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    const fs::path dir = config.output_dir.empty() ? fs::path(default_output_dir()) : fs::path(config.output_dir);
    RunResult result;
    auto fail = [&](int code, nlohmann::json record) {
        result.exit_code = code;
        result.error = std::move(record);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (!ec) {
            std::ofstream out(dir / "error.json");
            if (out) out << result.error.dump(2) << '\n';
        }
        return result;
    };

    const std::vector<Diagnostic> diagnostics = validate(config);
    if (!diagnostics.empty())
        return fail(exit_invalid_config, error_record(exit_invalid_config, "validation", "invalid configuration", diagnostics));

    const auto start = std::chrono::steady_clock::now();
    std::vector<CsvArtifact> artifacts;
    try {
        artifacts = compute_experiment(config);
    } catch (const ResourceError& e) {
        return fail(exit_resource_cap, error_record(exit_resource_cap, "resource", e.what()));
    } catch (const ParameterError& e) {
        return fail(exit_invalid_config, error_record(exit_invalid_config, "validation", e.what()));
    } catch (const std::exception& e) {
        return fail(exit_failure, error_record(exit_failure, "runtime", e.what()));
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    try {
        fs::create_directories(dir);
        for (const auto& a : artifacts) {
            write_text(dir / a.name, a.content);
            result.files.push_back((dir / a.name).string());
            const std::string stem = a.name.substr(0, a.name.rfind('.'));
            nlohmann::json manifest = {
                {"manifest_schema", kManifestSchema},
                {"artifact", {{"name", kArtifactName}, {"version", kArtifactVersion}}},
                {"experiment", std::string(to_string(*config.kind))},
                {"csv", a.name},
                {"csv_schema", 1},
                {"exploratory", *config.kind == ExperimentKind::question4_probe},
                {"wall_time_seconds", wall},
                {"config", to_json(config)},
            };
            write_text(dir / (stem + ".manifest.json"), manifest.dump(2) + "\n");
            result.files.push_back((dir / (stem + ".manifest.json")).string());
        }
    } catch (const std::exception& e) {
        return fail(exit_failure, error_record(exit_failure, "io", e.what()));
    }
    return result;
}

}  // namespace levylab
