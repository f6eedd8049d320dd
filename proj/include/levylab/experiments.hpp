#pragma once

#include "levylab/config.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace levylab {

inline constexpr const char* kArtifactName = "levylab";
inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr int kManifestSchema = 1;

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_invalid_config = 2, exit_resource_cap = 3 };

/// One CSV produced by an experiment, held in memory until the run ends.
struct CsvArtifact {
    std::string name;
    std::string content;
};

struct RunResult {
    int exit_code = exit_ok;
    /// Paths written (CSVs and their manifests).
    std::vector<std::string> files;
    /// Machine-readable error record; null on success.
    nlohmann::json error;
};

/// Computes the CSV tables of a validated config without touching the
/// filesystem. Throws ResourceError when a cap is exceeded.
std::vector<CsvArtifact> compute_experiment(const ExperimentConfig& config);

/// Validates, computes, and writes every CSV with a sibling
/// `<name>.manifest.json` into config.output_dir (default_output_dir() when
/// empty). On failure writes `error.json` there when possible.
RunResult run(const ExperimentConfig& config);

}  // namespace levylab
