#include "levylab/config.hpp"

#include "levylab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

namespace levylab {

namespace {

constexpr std::pair<ExperimentKind, std::string_view> kKindNames[] = {
    {ExperimentKind::simulate, "simulate"},
    {ExperimentKind::threshold_scan, "threshold-scan"},
    {ExperimentKind::jump_density, "jump-density"},
    {ExperimentKind::oscillation, "oscillation"},
    {ExperimentKind::gaussian_check, "gaussian-check"},
    {ExperimentKind::question4_probe, "question4-probe"},
};

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("config field '") + key + "': " + e.what());
    }
}

template <typename T>
void read(const nlohmann::json& j, const char* key, std::optional<T>& out) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    T v{};
    read(j, key, v);
    out = v;
}

template <typename T>
void write(nlohmann::json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
    for (const auto& [k, name] : kKindNames)
        if (k == kind) return name;
    return "unknown";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) {
    for (const auto& [k, n] : kKindNames)
        if (n == name) return k;
    return std::nullopt;
}

nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json j = nlohmann::json::object();
    if (c.kind) j["kind"] = std::string(to_string(*c.kind));
    write(j, "alpha", c.alpha);
    j["sigma"] = c.sigma;
    write(j, "N", c.n);
    write(j, "horizon", c.horizon);
    j["beta"] = c.beta;
    j["lambda_rule"] = c.lambda_rule;
    if (!c.lambda.empty()) j["lambda"] = c.lambda;
    j["mode"] = c.mode;
    j["grid_step"] = c.grid_step;
    j["r_resolve"] = c.r_resolve;
    write(j, "r1", c.r1);
    write(j, "epsilon", c.epsilon);
    write(j, "window", c.window);
    j["replicas"] = c.replicas;
    j["delta_grid"] = c.delta_grid;
    write(j, "delta", c.delta);
    j["probe_fractions"] = c.probe_fractions;
    j["n_values"] = c.n_values;
    j["beta_exponents"] = c.beta_exponents;
    j["jmax"] = c.jmax;
    j["coarsest_level"] = c.coarsest_level;
    j["finest_level"] = c.finest_level;
    j["max_entries"] = c.max_entries;
    write(j, "seed", c.seed);
    j["workers"] = c.workers;
    j["output_dir"] = c.output_dir;
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& input) {
    const nlohmann::json& j = (input.is_object() && input.contains("config")) ? input.at("config") : input;
    if (!j.is_object()) throw ParameterError("config must be a JSON object");
    static const std::set<std::string> known = {
        "kind", "alpha", "sigma", "N", "horizon", "beta", "lambda_rule", "lambda", "mode", "grid_step",
        "r_resolve", "r1", "epsilon", "window", "replicas", "delta_grid", "delta", "probe_fractions",
        "n_values", "beta_exponents", "jmax", "coarsest_level", "finest_level", "max_entries", "seed",
        "workers", "output_dir"};
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) throw ParameterError("unknown config field '" + key + "'");
    }
    ExperimentConfig c;
    if (j.contains("kind") && !j.at("kind").is_null()) {
        std::string name;
        read(j, "kind", name);
        c.kind = parse_experiment_kind(name);
        if (!c.kind) throw ParameterError("config field 'kind': unknown experiment '" + name + "'");
    }
    read(j, "alpha", c.alpha);
    read(j, "sigma", c.sigma);
    read(j, "N", c.n);
    read(j, "horizon", c.horizon);
    if (j.contains("beta") && j.at("beta").is_number()) {
        c.beta = {j.at("beta").get<double>()};
    } else {
        read(j, "beta", c.beta);
    }
    read(j, "lambda_rule", c.lambda_rule);
    read(j, "lambda", c.lambda);
    read(j, "mode", c.mode);
    read(j, "grid_step", c.grid_step);
    read(j, "r_resolve", c.r_resolve);
    read(j, "r1", c.r1);
    read(j, "epsilon", c.epsilon);
    read(j, "window", c.window);
    read(j, "replicas", c.replicas);
    read(j, "delta_grid", c.delta_grid);
    read(j, "delta", c.delta);
    read(j, "probe_fractions", c.probe_fractions);
    read(j, "n_values", c.n_values);
    read(j, "beta_exponents", c.beta_exponents);
    read(j, "jmax", c.jmax);
    read(j, "coarsest_level", c.coarsest_level);
    read(j, "finest_level", c.finest_level);
    read(j, "max_entries", c.max_entries);
    read(j, "seed", c.seed);
    read(j, "workers", c.workers);
    read(j, "output_dir", c.output_dir);
    return c;
}

std::vector<Diagnostic> validate(const ExperimentConfig& c) {
    std::vector<Diagnostic> d;
    auto add = [&](std::string field, std::string message) { d.push_back({std::move(field), std::move(message)}); };
    auto require_field = [&](bool present, const char* field) {
        if (!present) add(field, "missing required field");
        return present;
    };

    const bool have_kind = require_field(c.kind.has_value(), "kind");
    const bool have_alpha = require_field(c.alpha.has_value(), "alpha");
    const bool have_n = require_field(c.n.has_value(), "N");
    const bool have_horizon = require_field(c.horizon.has_value(), "horizon");
    require_field(c.seed.has_value(), "seed");

    const double alpha = c.alpha.value_or(1.0);
    const bool alpha_ok = have_alpha && alpha > 0.0 && alpha <= 2.0;
    if (have_alpha && !alpha_ok) add("alpha", "alpha must lie in (0, 2]");
    if (!(c.sigma > 0.0) || !std::isfinite(c.sigma)) add("sigma", "sigma must be positive");
    if (have_n && *c.n < 1) add("N", "N must be at least 1");
    if (have_horizon && !(*c.horizon > 0.0)) add("horizon", "horizon must be positive");
    if (!(c.grid_step > 0.0)) add("grid_step", "grid_step must be positive");
    else if (have_horizon && c.grid_step > *c.horizon) add("grid_step", "grid_step must not exceed the horizon");
    if (!(c.r_resolve > 0.0)) add("r_resolve", "r_resolve must be positive");
    if (c.replicas < 1) add("replicas", "replicas must be at least 1");
    if (c.workers < 1) add("workers", "workers must be at least 1");
    if (c.max_entries < 1) add("max_entries", "max_entries must be at least 1");

    if (c.beta.empty() || (have_n && c.beta.size() != 1 && c.beta.size() != *c.n))
        add("beta", "beta must hold one value or one value per component");
    for (const double b : c.beta)
        if (!(b > 0.0)) {
            add("beta", "beta weights must be positive");
            break;
        }
    if (c.lambda_rule == "custom") {
        if (have_n && c.lambda.size() != *c.n) add("lambda", "custom lambda must hold N values");
        for (std::size_t i = 0; i < c.lambda.size(); ++i) {
            if (!(c.lambda[i] > 0.0) || (i > 0 && c.lambda[i] < c.lambda[i - 1])) {
                add("lambda", "lambda must be positive and nondecreasing");
                break;
            }
        }
    } else if (c.lambda_rule != "heat") {
        add("lambda_rule", "lambda_rule must be 'heat' or 'custom'");
    }
    const bool jump_mode = c.mode == "jump-resolved";
    if (c.mode != "marginal-exact" && !jump_mode) add("mode", "mode must be 'marginal-exact' or 'jump-resolved'");
    if (jump_mode && alpha_ok && alpha == 2.0) add("mode", "alpha = 2 has no jump part; use marginal-exact");
    for (const std::size_t v : c.n_values) {
        if (v < 1 || (have_n && v > *c.n)) {
            add("n_values", "truncation levels must lie in [1, N]");
            break;
        }
    }

    if (!have_kind) return d;
    const double r2 = c.beta.empty() ? 0.0 : *std::min_element(c.beta.begin(), c.beta.end());
    auto require_jumps = [&]() {
        if (alpha_ok && alpha == 2.0) add("alpha", "alpha = 2 has no jump part; this experiment needs alpha < 2");
    };
    auto check_windows = [&]() {
        if (!require_field(c.window.has_value(), "window")) return;
        if (!(*c.window > 0.0)) {
            add("window", "window must be positive");
            return;
        }
        // Windows are open, so window / 3 leaves at least two interior grid points.
        if (c.grid_step > *c.window / 3.0) add("grid_step", "grid_step must be at most window / 3");
        if (have_horizon && *c.horizon > 0.0) {
            for (const double f : c.probe_fractions) {
                if (!(f >= 0.0) || f * *c.horizon + *c.window > *c.horizon * (1.0 + 1e-12)) {
                    add("probe_fractions", "every probe window (t, t + window) must lie within [0, horizon]");
                    break;
                }
            }
        }
    };

    switch (*c.kind) {
    case ExperimentKind::simulate:
        break;
    case ExperimentKind::threshold_scan:
        if (c.delta_grid.empty()) add("delta_grid", "missing required field");
        if (c.replicas < 1000) add("replicas", "median slopes need at least 1000 replicas");
        if (have_n && *c.n < 32) add("N", "the component range must span at least 1.5 decades (N >= 32)");
        if (alpha_ok) {
            for (const double delta : c.delta_grid) {
                if (delta == 1.0 / alpha || delta == -1.0 / alpha)
                    add("delta_grid", "delta " + fmt(delta) + " sits on a membership threshold (+-1/alpha), where the strict inequality decides");
            }
        }
        break;
    case ExperimentKind::jump_density:
        require_jumps();
        if (require_field(c.r1.has_value(), "r1") && !(*c.r1 > 0.0)) add("r1", "r1 must be positive");
        if (require_field(c.window.has_value(), "window") && !(*c.window > 0.0)) add("window", "cell width must be positive");
        else if (c.window && have_horizon && *c.window > *c.horizon) add("window", "cell width must not exceed the horizon");
        break;
    case ExperimentKind::oscillation:
        require_jumps();
        if (require_field(c.r1.has_value(), "r1") && !(*c.r1 > 0.0)) add("r1", "r1 must be positive");
        if (require_field(c.epsilon.has_value(), "epsilon")) {
            if (!(*c.epsilon > 0.0)) add("epsilon", "epsilon must be positive");
            else if (c.r1 && !(*c.epsilon < *c.r1 * r2))
                add("epsilon", "epsilon must be strictly smaller than r1 * r2 = " + fmt(*c.r1 * r2) +
                                   " (r2 = min beta); the non-cadlag argument needs epsilon < r1 r2");
        }
        check_windows();
        break;
    case ExperimentKind::gaussian_check:
        require_jumps();
        if (c.delta_grid.empty()) add("delta_grid", "missing required field");
        require_field(c.delta.has_value(), "delta");
        if (c.beta_exponents.empty()) add("beta_exponents", "at least one exponent is required");
        for (const double b : c.beta_exponents)
            if (!(b > 0.0 && b < 1.0)) add("beta_exponents", "exponents must lie in (0, 1); beta >= 1 is not integrable");
        if (c.jmax < 100) add("jmax", "jmax must be at least 100");
        if (c.coarsest_level < 0 || c.finest_level < c.coarsest_level || c.finest_level > 24)
            add("finest_level", "need 0 <= coarsest_level <= finest_level <= 24");
        break;
    case ExperimentKind::question4_probe:
        require_jumps();
        if (require_field(c.delta.has_value(), "delta") && alpha_ok) {
            if (!(*c.delta >= -1.0 / alpha && *c.delta < 0.0))
                add("delta", "delta must lie in [-1/alpha, 0) = [" + fmt(-1.0 / alpha) + ", 0)");
        }
        if (require_field(c.r1.has_value(), "r1") && !(*c.r1 > 0.0)) add("r1", "r1 must be positive");
        if (c.epsilon && !(*c.epsilon >= 0.0)) add("epsilon", "epsilon must be non-negative");
        check_windows();
        break;
    }
    return d;
}

SpectralModel model_from_config(const ExperimentConfig& c) {
    const std::size_t n = c.n.value();
    const StableLaw law(c.alpha.value(), c.sigma);
    std::vector<double> beta = c.beta.size() == 1 ? std::vector<double>(n, c.beta.front()) : c.beta;
    if (c.lambda_rule == "custom") return SpectralModel(c.lambda, std::move(beta), law);
    SpectralModel heat = SpectralModel::heat_equation(n, law);
    return SpectralModel(heat.lambda(), std::move(beta), law);
}

std::string default_output_dir() {
    if (const char* env = std::getenv("LEVYLAB_OUTPUT_DIR"); env && *env) return env;
    return "levylab-out";
}

}  // namespace levylab
