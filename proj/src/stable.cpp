#include "levylab/stable.hpp"

#include "levylab/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace levylab {

namespace {

void require_jump_threshold(const StableLaw& law, double r, const char* what) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError(std::string(what) + ": threshold must be positive");
    if (!law.has_jump_part()) throw ParameterError(std::string(what) + ": alpha = 2 has no jump part");
}

}  // namespace

StableLaw::StableLaw(double alpha, double scale) : alpha_(alpha), scale_(scale) {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw ParameterError("stable law: alpha must lie in (0, 2]");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ParameterError("stable law: scale must be positive");
    if (alpha < 2.0) {
        const double s = std::sin(std::numbers::pi * alpha / 2.0);
        density_constant_ = std::tgamma(1.0 + alpha) * s / std::numbers::pi;
        tail_constant_ = 2.0 * std::tgamma(alpha) * s / std::numbers::pi;
    } else {
        density_constant_ = 0.0;
        tail_constant_ = 0.0;
    }
}

double stable_from_uniforms(double alpha, double v, double w) {
    if (alpha == 1.0) return std::tan(v);
    if (alpha == 2.0) return 2.0 * std::sin(v) * std::sqrt(w);
    const double av = alpha * v;
    const double log_mag = -std::log(std::cos(v)) / alpha
                           + (1.0 - alpha) / alpha * (std::log(std::cos(v - av)) - std::log(w));
    return std::sin(av) * std::exp(log_mag);
}

double sample_stable(const StableLaw& law, Stream& stream) {
    const double v = std::numbers::pi * (stream.uniform() - 0.5);
    const double w = -std::log(stream.uniform());
    return law.scale() * stable_from_uniforms(law.alpha(), v, w);
}

TailMass stable_tail_mass(const StableLaw& law, double r) {
    if (!(r > 0.0)) throw ParameterError("stable_tail_mass: r must be positive");
    if (!law.has_jump_part()) return {0.0, true};
    if (std::isinf(r)) return {0.0, false};
    const double a = law.alpha();
    return {law.tail_constant() * std::pow(law.scale() / r, a), false};
}

double big_jump_from_uniforms(double alpha, double r1, double u, double sign_u) {
    const double magnitude = r1 * std::pow(u, -1.0 / alpha);
    return sign_u < 0.5 ? -magnitude : magnitude;
}

double sample_big_jump(const StableLaw& law, double r1, Stream& stream) {
    require_jump_threshold(law, r1, "sample_big_jump");
    const double u = stream.uniform_left_open();
    const double sign_u = stream.uniform();
    return big_jump_from_uniforms(law.alpha(), r1, u, sign_u);
}

std::vector<double> sample_poisson_times(double rate, double horizon, Stream& stream) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) throw ParameterError("sample_poisson_times: rate must be non-negative");
    if (!(horizon > 0.0)) throw ParameterError("sample_poisson_times: horizon must be positive");
    std::vector<double> times;
    if (rate == 0.0) return times;
    double t = 0.0;
    for (;;) {
        t += stream.exponential(rate);
        if (t >= horizon) break;
        // Ties have probability zero but are possible in floating point.
        if (!times.empty() && t <= times.back()) continue;
        times.push_back(t);
    }
    return times;
}

double small_jump_sigma2(const StableLaw& law, double r1) {
    require_jump_threshold(law, r1, "small_jump_sigma2");
    const double a = law.alpha();
    return 2.0 * law.density_constant() * std::pow(law.scale(), a) * std::pow(r1, 2.0 - a) / (2.0 - a);
}

JumpDecomposition decompose(const StableLaw& law, double r1) {
    require_jump_threshold(law, r1, "decompose");
    return {r1, stable_tail_mass(law, r1).value, small_jump_sigma2(law, r1)};
}

}  // namespace levylab
