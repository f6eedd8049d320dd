#include "levylab/gaussian_reference.hpp"

#include "levylab/errors.hpp"
#include "levylab/stats.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace levylab {

namespace {

// Beyond this s the integrand e^{-s} s^{-beta} is below double resolution.
constexpr double kSaturation = 750.0;

// int_0^S s^{-beta} e^{-s} ds with s = u^{1/(1-beta)}.
double truncated_gamma_integral(double beta, double upper) {
    const double p = 1.0 / (1.0 - beta);
    const auto f = [p](double u) { return p * std::exp(-std::pow(u, p)); };
    const double u_max = std::pow(upper, 1.0 - beta);
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, u_max, 20, 1e-13);
}

void check_spec(const HSIntegralSpec& spec) {
    if (!(spec.beta_exp > 0.0)) throw ParameterError("hs_integral: beta must be positive");
    if (spec.beta_exp >= 1.0) throw ParameterError("hs_integral: beta >= 1 gives a non-integrable singularity at t = 0");
    if (!(spec.T > 0.0)) throw ParameterError("hs_integral: T must be positive");
    if (spec.jmax < 100) throw ParameterError("hs_integral: Jmax must be at least 100");
}

double hs_term_with_cache(std::size_t j, double delta, double beta, double T, double saturated) {
    const double k = static_cast<double>(j);
    const double rate = 2.0 * k * k;
    const double upper = rate * T;
    const double integral = upper >= kSaturation ? saturated : truncated_gamma_integral(beta, upper);
    return std::pow(k, 2.0 * delta) * std::pow(rate, beta - 1.0) * integral;
}

}  // namespace

double hs_term(std::size_t j, double delta, double beta_exp, double T) {
    if (j == 0) throw ParameterError("hs_term: j starts at 1");
    check_spec({delta, beta_exp, T, 100});
    return hs_term_with_cache(j, delta, beta_exp, T, truncated_gamma_integral(beta_exp, kSaturation));
}

HSIntegralResult hs_integral(const HSIntegralSpec& spec) {
    check_spec(spec);
    const double saturated = truncated_gamma_integral(spec.beta_exp, kSaturation);

    std::vector<std::size_t> marks;
    for (std::size_t J = spec.jmax; J >= 8 && marks.size() < 9; J /= 2) marks.push_back(J);
    std::reverse(marks.begin(), marks.end());

    HSIntegralResult result;
    double sum = 0.0;
    std::size_t next = 0;
    for (std::size_t j = 1; j <= spec.jmax; ++j) {
        sum += hs_term_with_cache(j, spec.delta, spec.beta_exp, spec.T, saturated);
        if (next < marks.size() && j == marks[next]) {
            result.levels.push_back({j, sum});
            ++next;
        }
    }
    result.value = sum;
    result.predicted_value_exponent = std::max(0.0, 2.0 * spec.delta + 2.0 * spec.beta_exp - 1.0);

    // Fits use the top four doublings, where the power laws have settled.
    const std::size_t top = std::min<std::size_t>(result.levels.size(), 5);
    std::vector<double> lj, lv, ldj, ld;
    for (std::size_t i = result.levels.size() - top; i < result.levels.size(); ++i) {
        lj.push_back(std::log(static_cast<double>(result.levels[i].jmax)));
        lv.push_back(std::log(result.levels[i].value));
        if (i > result.levels.size() - top) {
            const double inc = result.levels[i].value - result.levels[i - 1].value;
            ldj.push_back(std::log(static_cast<double>(result.levels[i].jmax)));
            ld.push_back(std::log(inc));
        }
    }
    result.value_slope = stats::least_squares(lj, lv).slope;
    result.increment_exponent = stats::least_squares(ldj, ld).slope;
    result.convergent = result.increment_exponent < -kHsGuardBand;
    if (result.convergent) {
        const double ratio = std::pow(2.0, result.increment_exponent);
        const double last_inc = result.levels.back().value - result.levels[result.levels.size() - 2].value;
        result.extrapolated_limit = result.value + last_inc * ratio / (1.0 - ratio);
    } else {
        result.extrapolated_limit = std::numeric_limits<double>::infinity();
    }
    return result;
}

ContinuityCriterion hs_continuity_criterion(double delta, double T, std::size_t jmax) {
    ContinuityCriterion c;
    c.betas = {0.05, 0.1, 0.2};
    for (const double b : c.betas) {
        const bool conv = hs_integral({delta, b, T, jmax}).convergent;
        c.convergent.push_back(conv);
        c.satisfied = c.satisfied || conv;
    }
    return c;
}

ModulusTable continuity_modulus(const SpectralModel& model, double horizon, double delta, int coarsest_level,
                                int finest_level, const FieldSimulationOptions& options, std::uint64_t experiment_id,
                                std::uint64_t replica) {
    if (coarsest_level < 0 || finest_level < coarsest_level || finest_level > 24)
        throw ParameterError("continuity_modulus: need 0 <= coarsest <= finest <= 24");
    FieldSimulationOptions opts = options;
    opts.step = std::ldexp(horizon, -finest_level);
    const FieldPath path = simulate_field(model, horizon, opts, experiment_id, replica);
    const std::size_t n = path.components;

    std::vector<double> weights(n);
    for (std::size_t j = 0; j < n; ++j) weights[j] = std::pow(model.lambda()[j], delta);

    ModulusTable table;
    table.jump_resolved = opts.mode == SimulationMode::jump_resolved;
    table.delta = delta;
    for (const auto& jump : path.jumps) {
        const double inc = model.beta()[jump.component] * std::abs(jump.size);
        table.largest_ledger_increment = std::max(table.largest_ledger_increment, inc);
        // Same expression as the jump row's distance below, so the modulus
        // bound holds bit-exactly rather than up to rounding.
        table.largest_ledger_jump_norm =
            std::max(table.largest_ledger_jump_norm, std::sqrt(weights[jump.component] * inc * inc));
    }

    // Uniform index of each row, or -1 for inserted jump rows.
    const std::vector<double> uniform = uniform_grid(horizon, opts.step);
    std::vector<long> uniform_index(path.times.size(), -1);
    for (std::size_t i = 0, m = 0; i < path.times.size(); ++i) {
        while (m < uniform.size() && uniform[m] < path.times[i]) ++m;
        if (m < uniform.size() && uniform[m] == path.times[i]) uniform_index[i] = static_cast<long>(m);
    }

    auto distance = [&](std::span<const double> x, std::span<const double> y) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = x[j] - y[j];
            if (d != 0.0) s += weights[j] * d * d;
        }
        return std::sqrt(s);
    };

    std::size_t next_jump = 0;
    std::vector<std::vector<std::size_t>> jumps_at_row(path.times.size());
    for (std::size_t k = 0; k < path.jumps.size(); ++k) {
        while (path.times[next_jump] < path.jumps[k].time) ++next_jump;
        jumps_at_row[next_jump].push_back(k);
    }

    for (int level = coarsest_level; level <= finest_level; ++level) {
        const long stride = 1L << (finest_level - level);
        std::vector<double> previous(path.row(0).begin(), path.row(0).end());
        double modulus = 0.0;
        for (std::size_t i = 1; i < path.times.size(); ++i) {
            const bool kept = !jumps_at_row[i].empty() || (uniform_index[i] >= 0 && uniform_index[i] % stride == 0);
            if (!kept) continue;
            for (const std::size_t k : jumps_at_row[i]) {
                const std::vector<double> left = path.left_limit_state(path.jumps[k]);
                modulus = std::max(modulus, distance(left, previous));
                previous = left;
                previous[path.jumps[k].component] = path.at(i, path.jumps[k].component);
                modulus = std::max(modulus, distance(left, previous));
            }
            const auto row = path.row(i);
            modulus = std::max(modulus, distance(row, previous));
            previous.assign(row.begin(), row.end());
        }
        table.rows.push_back({level, std::ldexp(horizon, -level), modulus});
    }
    return table;
}

ContinuityContrast gaussian_continuity_contrast(const SpectralModel& gaussian_model, const SpectralModel& stable_model,
                                                double horizon, double delta, int coarsest_level, int finest_level,
                                                double r_resolve, unsigned workers, std::uint64_t experiment_id,
                                                std::uint64_t replica) {
    if (gaussian_model.law().alpha() != 2.0) throw ParameterError("gaussian_continuity_contrast: first model must have alpha = 2");
    if (gaussian_model.lambda() != stable_model.lambda() || gaussian_model.beta() != stable_model.beta())
        throw ParameterError("gaussian_continuity_contrast: models must share the spectrum and weights");
    FieldSimulationOptions gauss;
    gauss.workers = workers;
    FieldSimulationOptions jumps = gauss;
    jumps.mode = SimulationMode::jump_resolved;
    jumps.r_resolve = r_resolve;
    return {continuity_modulus(gaussian_model, horizon, delta, coarsest_level, finest_level, gauss, experiment_id, replica),
            continuity_modulus(stable_model, horizon, delta, coarsest_level, finest_level, jumps, experiment_id, replica)};
}

}  // namespace levylab
