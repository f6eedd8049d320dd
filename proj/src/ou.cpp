#include "levylab/ou.hpp"

#include "levylab/errors.hpp"
#include "levylab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace levylab {

namespace {

// (1 - e^{-x}) / x, continuous at 0.
double relaxation_factor(double x) {
    if (x < 1e-8) return 1.0 - 0.5 * x;
    return -std::expm1(-x) / x;
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(std::string(what) + " must be positive and finite");
}

struct ComponentTrack {
    std::vector<double> values;
    std::vector<JumpEvent> jumps;
};

// Advances component j along `grid`, which must contain every jump time.
ComponentTrack track_component(std::size_t j, const SpectralModel& model, std::span<const double> grid,
                               std::span<const ForcedJump> jumps, double small_sigma2, Stream& stream) {
    const double lambda = model.lambda()[j];
    const double beta = model.beta()[j];
    ComponentTrack track;
    track.values.assign(grid.size(), 0.0);
    track.jumps.reserve(jumps.size());
    double x = 0.0;
    std::size_t next_jump = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double dt = grid[i] - grid[i - 1];
        x *= std::exp(-lambda * dt);
        if (small_sigma2 > 0.0) {
            const double var = small_sigma2 * dt * relaxation_factor(2.0 * lambda * dt);
            x += beta * std::sqrt(var) * stream.normal();
        }
        while (next_jump < jumps.size() && jumps[next_jump].time == grid[i]) {
            const ExactJump step = exact_jump(x, beta, jumps[next_jump].size);
            track.jumps.push_back({j, grid[i], step.size, step.left_limit});
            x = step.value;
            ++next_jump;
        }
        track.values[i] = x;
    }
    if (next_jump != jumps.size()) throw std::logic_error("track_component: jump time missing from grid");
    return track;
}

std::vector<ForcedJump> draw_big_jumps(const StableLaw& law, double r_resolve, double horizon, Stream& stream) {
    const double rate = stable_tail_mass(law, r_resolve).value;
    const std::vector<double> times = sample_poisson_times(rate, horizon, stream);
    std::vector<ForcedJump> jumps;
    jumps.reserve(times.size());
    for (const double t : times) jumps.push_back({t, sample_big_jump(law, r_resolve, stream)});
    return jumps;
}

std::vector<double> merge_times(std::vector<double> grid, const std::vector<double>& extra) {
    std::vector<double> sorted_extra = extra;
    std::sort(sorted_extra.begin(), sorted_extra.end());
    std::vector<double> merged;
    merged.reserve(grid.size() + sorted_extra.size());
    std::merge(grid.begin(), grid.end(), sorted_extra.begin(), sorted_extra.end(), std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    return merged;
}

void check_forced_jumps(const std::vector<ForcedJump>& jumps, double horizon) {
    for (std::size_t k = 0; k < jumps.size(); ++k) {
        if (!(jumps[k].time > 0.0 && jumps[k].time <= horizon))
            throw ParameterError("forced jump time must lie in (0, horizon]");
        if (k > 0 && !(jumps[k].time > jumps[k - 1].time))
            throw ParameterError("forced jump times must be strictly increasing");
    }
}

}  // namespace

SpectralModel::SpectralModel(std::vector<double> lambda, std::vector<double> beta, StableLaw law)
    : lambda_(std::move(lambda)), beta_(std::move(beta)), law_(law) {
    if (lambda_.empty()) throw ParameterError("spectral model: N must be at least 1");
    if (lambda_.size() != beta_.size()) throw ParameterError("spectral model: lambda and beta sizes differ");
    for (std::size_t j = 0; j < lambda_.size(); ++j) {
        if (!(lambda_[j] > 0.0) || !std::isfinite(lambda_[j]))
            throw ParameterError("spectral model: lambda_j must be positive");
        if (j > 0 && lambda_[j] < lambda_[j - 1]) throw ParameterError("spectral model: lambda must be nondecreasing");
        if (!(beta_[j] > 0.0) || !std::isfinite(beta_[j])) throw ParameterError("spectral model: beta_j must be positive");
    }
}

SpectralModel SpectralModel::heat_equation(std::size_t n, StableLaw law, double beta) {
    std::vector<double> lambda(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double k = static_cast<double>(j + 1);
        lambda[j] = k * k;
    }
    return SpectralModel(std::move(lambda), std::vector<double>(n, beta), law);
}

bool SpectralModel::is_heat_spectrum() const {
    for (std::size_t j = 0; j < lambda_.size(); ++j) {
        const double k = static_cast<double>(j + 1);
        if (lambda_[j] != k * k) return false;
    }
    return true;
}

SpectralModel SpectralModel::truncated(std::size_t n) const {
    if (n == 0 || n > size()) throw ParameterError("truncated: n must lie in [1, N]");
    return SpectralModel(std::vector<double>(lambda_.begin(), lambda_.begin() + static_cast<std::ptrdiff_t>(n)),
                         std::vector<double>(beta_.begin(), beta_.begin() + static_cast<std::ptrdiff_t>(n)), law_);
}

std::vector<double> FieldPath::left_limit_state(const JumpEvent& jump) const {
    const std::size_t r = row_of(jump.time);
    std::vector<double> state(coeffs.begin() + static_cast<std::ptrdiff_t>(r * components),
                              coeffs.begin() + static_cast<std::ptrdiff_t>((r + 1) * components));
    state[jump.component] = jump.left_limit;
    return state;
}

std::size_t FieldPath::row_of(double t) const {
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.end() || *it != t) throw DomainError("row_of: time is not a grid point");
    return static_cast<std::size_t>(it - times.begin());
}

double conv_scale(double lambda, const StableLaw& law, double dt) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("conv_scale: lambda must be non-negative");
    if (!(dt > 0.0)) throw ParameterError("conv_scale: dt must be positive");
    const double a = law.alpha();
    if (std::isinf(dt)) {
        if (lambda == 0.0) throw ParameterError("conv_scale: no stationary law for lambda = 0");
        return law.scale() * std::pow(1.0 / (a * lambda), 1.0 / a);
    }
    return law.scale() * std::pow(dt * relaxation_factor(a * lambda * dt), 1.0 / a);
}

double ou_exact_update(double x, std::size_t j, const SpectralModel& model, double dt, Stream& stream) {
    if (j >= model.size()) throw ParameterError("ou_exact_update: component index out of range");
    require_positive(dt, "ou_exact_update: dt");
    const double lambda = model.lambda()[j];
    const double scale = conv_scale(lambda, model.law(), dt);
    return std::exp(-lambda * dt) * x + model.beta()[j] * sample_stable(model.law().with_scale(scale), stream);
}

std::vector<double> uniform_grid(double horizon, double step) {
    require_positive(horizon, "uniform_grid: horizon");
    require_positive(step, "uniform_grid: step");
    const double ratio = horizon / step;
    const double nearest = std::round(ratio);
    const auto cells = static_cast<std::size_t>(std::abs(ratio - nearest) <= 1e-9 * nearest ? nearest : std::ceil(ratio));
    std::vector<double> grid(std::max<std::size_t>(cells, 1) + 1);
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) grid[k] = static_cast<double>(k) * step;
    grid.back() = horizon;
    return grid;
}

ExactJump exact_jump(double pre, double beta, double jump) {
    const double inc = beta * jump;
    const double first = pre + inc;
    if (first - pre == inc) return {pre, first, jump};

    // Nudge the post-jump value, and if that is not enough the left limit,
    // until the realised increment d = value - left is itself a rounded
    // product beta * size for some size adjacent to d / beta. The product map
    // x -> fl(beta x) can skip a residue class of output ulps over long
    // stretches (beta close to a simple rational), while d is pinned to
    // multiples of ulp(value); the wide second pass covers that case.
    const auto nudge = [](double x, int k) {
        for (; k > 0; --k) x = std::nextafter(x, INFINITY);
        for (; k < 0; ++k) x = std::nextafter(x, -INFINITY);
        return x;
    };
    const auto search = [&](double left, int reach) -> std::optional<ExactJump> {
        const double base = left + inc;
        double up = base, down = base;
        for (int k = 0; k <= 2 * reach; ++k) {
            double value = base;
            if (k > 0) value = (k % 2 == 1) ? (up = std::nextafter(up, INFINITY))
                                            : (down = std::nextafter(down, -INFINITY));
            const double d = value - left;
            double x = nudge(d / beta, -2);
            for (int step = 0; step < 5; ++step, x = std::nextafter(x, INFINITY))
                if (beta * x == d) return ExactJump{left, value, x};
        }
        return std::nullopt;
    };
    for (const int left_offset : {0, 1, -1, 2, -2, 3, -3})
        if (const auto e = search(nudge(pre, left_offset), 16)) return *e;
    if (const auto e = search(pre, 1 << 16)) return *e;
    throw std::logic_error("exact_jump: no exactly representable jump found");
}

ComponentPath simulate_component_jump_resolved(std::size_t j, const SpectralModel& model, double horizon,
                                               const JumpResolvedOptions& options, Stream& stream) {
    if (j >= model.size()) throw ParameterError("simulate_component_jump_resolved: component index out of range");
    const StableLaw& law = model.law();
    if (!law.has_jump_part())
        throw ParameterError("jump-resolved simulation needs alpha < 2 (alpha = 2 has no jump part); use the marginal-exact mode");
    require_positive(options.r_resolve, "r_resolve");
    require_positive(options.step, "grid step");
    require_positive(horizon, "horizon");

    std::vector<ForcedJump> jumps;
    if (!options.forced_jumps.empty()) {
        check_forced_jumps(options.forced_jumps, horizon);
        jumps = options.forced_jumps;
    } else {
        jumps = draw_big_jumps(law, options.r_resolve, horizon, stream);
    }
    std::vector<double> jump_times;
    for (const auto& jump : jumps) jump_times.push_back(jump.time);
    const std::vector<double> grid = merge_times(uniform_grid(horizon, options.step), jump_times);
    const double s2 = options.small_jump_residual ? small_jump_sigma2(law, options.r_resolve) : 0.0;
    ComponentTrack track = track_component(j, model, grid, jumps, s2, stream);

    ComponentPath path;
    path.times.reserve(grid.size() + jumps.size());
    path.values.reserve(grid.size() + jumps.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (k < track.jumps.size() && track.jumps[k].time == grid[i]) {
            path.times.push_back(grid[i]);
            path.values.push_back(track.jumps[k].left_limit);
            ++k;
        }
        path.times.push_back(grid[i]);
        path.values.push_back(track.values[i]);
    }
    path.jumps = std::move(track.jumps);
    return path;
}

FieldPath simulate_field(const SpectralModel& model, double horizon, const FieldSimulationOptions& options,
                         std::uint64_t experiment_id, std::uint64_t replica) {
    require_positive(horizon, "horizon");
    require_positive(options.step, "grid step");
    const std::size_t n = model.size();
    FieldPath path;
    path.components = n;

    if (options.mode == SimulationMode::marginal_exact) {
        path.times = uniform_grid(horizon, options.step);
        const std::size_t rows = path.times.size();
        if (rows > options.max_entries / n)
            throw ResourceError("field of " + std::to_string(rows) + " x " + std::to_string(n) +
                                " exceeds the memory cap; stream components or coarsen the grid");
        path.coeffs.assign(rows * n, 0.0);
        parallel_for(n, options.workers, [&](std::size_t j) {
            Stream stream({experiment_id, replica, j});
            double x = 0.0;
            for (std::size_t i = 1; i < rows; ++i) {
                x = ou_exact_update(x, j, model, path.times[i] - path.times[i - 1], stream);
                path.coeffs[i * n + j] = x;
            }
        });
        return path;
    }

    if (!model.law().has_jump_part())
        throw ParameterError("jump-resolved simulation needs alpha < 2 (alpha = 2 has no jump part)");
    require_positive(options.r_resolve, "r_resolve");
    path.resolve_threshold = options.r_resolve;

    std::vector<Stream> streams;
    streams.reserve(n);
    for (std::size_t j = 0; j < n; ++j) streams.emplace_back(StreamKey{experiment_id, replica, j});
    std::vector<std::vector<ForcedJump>> jumps(n);
    parallel_for(n, options.workers, [&](std::size_t j) {
        jumps[j] = draw_big_jumps(model.law(), options.r_resolve, horizon, streams[j]);
    });

    std::vector<double> jump_times;
    for (const auto& list : jumps)
        for (const auto& jump : list) jump_times.push_back(jump.time);
    std::vector<double> grid = uniform_grid(horizon, options.step);
    if (grid.size() + jump_times.size() > options.max_entries / n)
        throw ResourceError("field of " + std::to_string(grid.size() + jump_times.size()) + " x " + std::to_string(n) +
                            " exceeds the memory cap; stream components or coarsen the grid");
    path.times = merge_times(std::move(grid), jump_times);
    const std::size_t rows = path.times.size();
    path.coeffs.assign(rows * n, 0.0);

    const double s2 = options.small_jump_residual ? small_jump_sigma2(model.law(), options.r_resolve) : 0.0;
    std::vector<std::vector<JumpEvent>> ledgers(n);
    parallel_for(n, options.workers, [&](std::size_t j) {
        ComponentTrack track = track_component(j, model, path.times, jumps[j], s2, streams[j]);
        for (std::size_t i = 0; i < rows; ++i) path.coeffs[i * n + j] = track.values[i];
        ledgers[j] = std::move(track.jumps);
    });
    for (auto& ledger : ledgers) path.jumps.insert(path.jumps.end(), ledger.begin(), ledger.end());
    std::sort(path.jumps.begin(), path.jumps.end(), [](const JumpEvent& a, const JumpEvent& b) {
        return a.time != b.time ? a.time < b.time : a.component < b.component;
    });
    return path;
}

std::vector<double> simulate_noise_partial_sum(const SpectralModel& model, double t, std::uint64_t experiment_id,
                                               std::uint64_t replica) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("simulate_noise_partial_sum: t must be non-negative");
    std::vector<double> out(model.size(), 0.0);
    if (t == 0.0) return out;
    const StableLaw law = model.law().with_scale(model.law().scale() * std::pow(t, 1.0 / model.law().alpha()));
    for (std::size_t j = 0; j < out.size(); ++j) {
        Stream stream({experiment_id, replica, j});
        out[j] = sample_stable(law, stream);
    }
    return out;
}

std::vector<double> evaluate_field(std::span<const double> coeffs, std::span<const double> xi) {
    const double norm = std::sqrt(2.0 / std::numbers::pi);
    std::vector<double> out;
    out.reserve(xi.size());
    for (const double x : xi) {
        if (!(x > 0.0 && x < std::numbers::pi)) throw DomainError("evaluate_field: xi must lie in (0, pi)");
        double u = 0.0;
        for (std::size_t j = 0; j < coeffs.size(); ++j) u += coeffs[j] * norm * std::sin(static_cast<double>(j + 1) * x);
        out.push_back(u);
    }
    return out;
}

}  // namespace levylab
