#pragma once

#include "levylab/ou.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace levylab {

/// int_0^T t^{-beta} sum_{j <= Jmax} j^{2 delta} e^{-2 j^2 t} dt, i.e. the
/// integrated squared Hilbert-Schmidt norm of the heat semigroup from H_0
/// into H_delta, weighted by t^{-beta}.
struct HSIntegralSpec {
    double delta = 0.0;
    double beta_exp = 0.05;
    double T = 1.0;
    std::size_t jmax = std::size_t{1} << 20;
};

/// int_0^T t^{-beta} j^{2 delta} e^{-2 j^2 t} dt by adaptive Gauss-Kronrod
/// after the substitution s = 2 j^2 t, s = u^{1/(1 - beta)} that removes the
/// endpoint singularity.
double hs_term(std::size_t j, double delta, double beta_exp, double T);

struct HSLevel {
    std::size_t jmax = 0;
    double value = 0.0;
};

struct HSIntegralResult {
    double value = 0.0;
    /// Partial sums at Jmax, Jmax/2, ... (ascending in jmax).
    std::vector<HSLevel> levels;
    /// Fitted slope of log value against log Jmax over the top levels.
    double value_slope = 0.0;
    /// Fitted exponent of the doubling increments S(2J) - S(J) ~ J^e.
    double increment_exponent = 0.0;
    /// max(0, 2 delta + 2 beta - 1).
    double predicted_value_exponent = 0.0;
    bool convergent = false;
    /// S(Jmax) plus the geometric tail implied by increment_exponent;
    /// infinite when divergent.
    double extrapolated_limit = 0.0;
};

inline constexpr double kHsGuardBand = 0.05;

/// Convergent iff the fitted increment exponent is below -kHsGuardBand.
HSIntegralResult hs_integral(const HSIntegralSpec& spec);

/// Continuity criterion "for some beta > 0": scans beta in {0.05, 0.1, 0.2}.
struct ContinuityCriterion {
    bool satisfied = false;
    std::vector<double> betas;
    std::vector<bool> convergent;
};
ContinuityCriterion hs_continuity_criterion(double delta, double T, std::size_t jmax);

struct ModulusRow {
    int level = 0;
    double step = 0.0;
    /// max over consecutive sampled states of |X(t_{i+1}) - X(t_i)|_delta.
    double modulus = 0.0;
};

struct ModulusTable {
    bool jump_resolved = false;
    double delta = 0.0;
    /// max beta_n |Delta L| over the ledger (jump-resolved only).
    double largest_ledger_increment = 0.0;
    /// Same, weighted by lambda_n^{delta/2} (the H_delta size of the jump).
    double largest_ledger_jump_norm = 0.0;
    std::vector<ModulusRow> rows;
};

/// Dyadic refinement table: one path simulated at step horizon 2^{-finest},
/// sub-sampled at every coarser level; jump rows and their left limits are
/// kept at every level.
ModulusTable continuity_modulus(const SpectralModel& model, double horizon, double delta, int coarsest_level,
                                int finest_level, const FieldSimulationOptions& options, std::uint64_t experiment_id,
                                std::uint64_t replica);

struct ContinuityContrast {
    ModulusTable gaussian;
    ModulusTable stable;
};

/// Gaussian (marginal-exact) vs stable (jump-resolved) modulus tables on the
/// same spectrum.
ContinuityContrast gaussian_continuity_contrast(const SpectralModel& gaussian_model, const SpectralModel& stable_model,
                                                double horizon, double delta, int coarsest_level, int finest_level,
                                                double r_resolve, unsigned workers, std::uint64_t experiment_id,
                                                std::uint64_t replica);

}  // namespace levylab
