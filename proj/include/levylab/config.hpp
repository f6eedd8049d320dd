#pragma once

#include "levylab/ou.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace levylab {

enum class ExperimentKind { simulate, threshold_scan, jump_density, oscillation, gaussian_check, question4_probe };

std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);

/// Every knob of a run. Fields without defaults are optional so that a
/// missing value can be reported instead of silently defaulted.
struct ExperimentConfig {
    std::optional<ExperimentKind> kind;

    // model
    std::optional<double> alpha;
    double sigma = 1.0;
    std::optional<std::size_t> n;
    std::optional<double> horizon;
    /// One value (broadcast) or one per component.
    std::vector<double> beta{1.0};
    /// "heat" (lambda_j = j^2) or "custom" (uses `lambda`).
    std::string lambda_rule = "heat";
    std::vector<double> lambda;

    // numerics
    std::string mode = "marginal-exact";
    double grid_step = 1e-2;
    double r_resolve = 1e-2;
    std::optional<double> r1;
    std::optional<double> epsilon;
    std::optional<double> window;
    std::size_t replicas = 100;
    std::vector<double> delta_grid;
    std::optional<double> delta;
    std::vector<double> probe_fractions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    /// Truncation levels for N-trend tables; empty means {n}.
    std::vector<std::size_t> n_values;
    std::vector<double> beta_exponents{0.05, 0.1, 0.2};
    std::size_t jmax = std::size_t{1} << 20;
    int coarsest_level = 6;
    int finest_level = 12;
    std::size_t max_entries = 50'000'000;

    // run
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;
    std::string output_dir;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

nlohmann::json to_json(const ExperimentConfig& config);
/// Accepts a bare config object or a manifest (uses its "config" member).
/// Throws ParameterError on unknown keys or wrongly typed values.
ExperimentConfig config_from_json(const nlohmann::json& j);

struct Diagnostic {
    std::string field;
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Pure check of every field against the preconditions of the operations
/// the experiment kind will call. Empty result means valid.
std::vector<Diagnostic> validate(const ExperimentConfig& config);

/// Builds the spectral model described by a validated config.
SpectralModel model_from_config(const ExperimentConfig& config);

/// LEVYLAB_OUTPUT_DIR if set, otherwise "levylab-out".
std::string default_output_dir();

}  // namespace levylab
