#include "levylab/spaces.hpp"

#include "levylab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace levylab {

namespace {

PartialSumProfile classify(std::vector<double> sums) {
    PartialSumProfile profile;
    profile.sums = std::move(sums);
    const std::size_t n = profile.sums.size();
    std::vector<double> lx, ly;
    for (std::size_t J = std::max<std::size_t>(1, n / 2); J <= n; ++J) {
        const double s = profile.sums[J - 1];
        if (s > 0.0) {
            lx.push_back(std::log(static_cast<double>(J)));
            ly.push_back(std::log(s));
        }
    }
    profile.upper_slope = lx.size() >= 3 ? stats::least_squares(lx, ly).slope : 0.0;
    if (n >= kMinProfileLength) {
        profile.drift = std::abs(profile.upper_slope) < kPlateauSlope ? Drift::plateau : Drift::growth;
    }
    return profile;
}

}  // namespace

WeightedNormSpec WeightedNormSpec::heat(double delta, std::size_t n) {
    WeightedNormSpec spec{delta, std::vector<double>(n)};
    for (std::size_t j = 0; j < n; ++j) {
        const double k = static_cast<double>(j + 1);
        spec.lambda[j] = k * k;
    }
    return spec;
}

double WeightedNormSpec::weight(std::size_t j) const { return std::pow(lambda[j], delta); }

double h_delta_norm(std::span<const double> x, const WeightedNormSpec& spec) {
    if (x.size() > spec.lambda.size()) throw ParameterError("h_delta_norm: more coefficients than eigenvalues");
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!std::isfinite(x[j])) throw ParameterError("h_delta_norm: non-finite coefficient");
        if (x[j] != 0.0) s += spec.weight(j) * x[j] * x[j];
    }
    return std::sqrt(s);
}

Membership analytic_membership(double delta, const StableLaw& law, MembershipTarget target,
                               std::span<const double> lambda) {
    const double a = law.alpha();
    bool heat = true;
    for (std::size_t j = 0; j < lambda.size() && heat; ++j) {
        const double k = static_cast<double>(j + 1);
        heat = lambda[j] == k * k;
    }
    Membership m;
    if (heat) {
        m.threshold = target == MembershipTarget::noise ? -1.0 / a : 1.0 / a;
        m.member = delta < m.threshold;
        return m;
    }
    if (lambda.size() < 16) throw InsufficientData("analytic_membership: need at least 16 eigenvalues for the series test");
    std::vector<double> lx, ly;
    for (std::size_t j = lambda.size() / 2; j < lambda.size(); ++j) {
        double term = std::pow(lambda[j], a * delta / 2.0);
        if (target == MembershipTarget::solution) term /= a * lambda[j];
        lx.push_back(std::log(static_cast<double>(j + 1)));
        ly.push_back(std::log(term));
    }
    m.heuristic = true;
    m.threshold = std::numeric_limits<double>::quiet_NaN();
    m.series_exponent = stats::least_squares(lx, ly).slope;
    m.within_guard_band = std::abs(m.series_exponent + 1.0) <= kMembershipGuardBand;
    m.member = m.series_exponent < -1.0 - kMembershipGuardBand;
    return m;
}

std::vector<double> SampleMatrix::column(std::size_t component) const {
    std::vector<double> out(replicas);
    for (std::size_t r = 0; r < replicas; ++r) out[r] = at(r, component);
    return out;
}

SampleMatrix weighted_squares(const SampleMatrix& coeffs, const WeightedNormSpec& spec) {
    if (coeffs.components > spec.lambda.size()) throw ParameterError("weighted_squares: more components than eigenvalues");
    SampleMatrix out(coeffs.replicas, coeffs.components);
    for (std::size_t j = 0; j < coeffs.components; ++j) {
        const double w = spec.weight(j);
        for (std::size_t r = 0; r < coeffs.replicas; ++r) out.at(r, j) = w * coeffs.at(r, j) * coeffs.at(r, j);
    }
    return out;
}

MedianSlopeFit tail_exponent_via_medians(const SampleMatrix& weighted, std::size_t j_lo, std::size_t j_hi,
                                         std::size_t min_replicas) {
    if (j_lo < 1 || j_hi > weighted.components || j_lo >= j_hi)
        throw ParameterError("tail_exponent_via_medians: invalid component range");
    if (std::log10(static_cast<double>(j_hi) / static_cast<double>(j_lo)) < 1.5)
        throw ParameterError("tail_exponent_via_medians: component range must span at least 1.5 decades");

    std::vector<double> lx;
    for (std::size_t j = j_lo; j <= j_hi; ++j) lx.push_back(std::log(static_cast<double>(j)));

    if (weighted.replicas < min_replicas) {
        // Spread of log-values at the first component stands in for all.
        std::vector<double> logs;
        for (const double v : weighted.column(j_lo - 1))
            if (v > 0.0) logs.push_back(std::log(v));
        double spread = 1.0;
        if (logs.size() >= 4) spread = (stats::quantile(logs, 0.75) - stats::quantile(logs, 0.25)) / 1.349;
        const double mx = stats::mean(lx);
        double sxx = 0.0;
        for (const double v : lx) sxx += (v - mx) * (v - mx);
        const double se = 1.2533 * spread / std::sqrt(static_cast<double>(std::max<std::size_t>(weighted.replicas, 1))) /
                          std::sqrt(sxx);
        std::ostringstream msg;
        msg << "tail_exponent_via_medians: " << weighted.replicas << " replicas (< " << min_replicas
            << "); estimated slope standard error " << se << ", 95% band +-" << 1.96 * se;
        throw InsufficientData(msg.str());
    }

    std::vector<double> ly;
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
        const double m = stats::median(weighted.column(j - 1));
        if (!(m > 0.0)) throw ParameterError("tail_exponent_via_medians: non-positive median");
        ly.push_back(std::log(m));
    }
    const stats::LinearFit fit = stats::least_squares(lx, ly);
    MedianSlopeFit out;
    out.slope = fit.slope;
    out.intercept = fit.intercept;
    out.slope_std_error = fit.slope_std_error;
    out.band = 1.96 * fit.slope_std_error;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double fitted = std::exp(fit.intercept + fit.slope * lx[i]);
        const double median = std::exp(ly[i]);
        out.rows.push_back({j_lo + i, median, fitted, ly[i] - std::log(fitted)});
    }
    return out;
}

PartialSumProfile partial_sum_profile(std::span<const double> x, const WeightedNormSpec& spec) {
    if (x.size() > spec.lambda.size()) throw ParameterError("partial_sum_profile: more coefficients than eigenvalues");
    std::vector<double> sums(x.size());
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] != 0.0) s += spec.weight(j) * x[j] * x[j];
        sums[j] = s;
    }
    return classify(std::move(sums));
}

PartialSumProfile median_partial_sum_profile(const SampleMatrix& coeffs, const WeightedNormSpec& spec) {
    if (coeffs.replicas == 0) throw InsufficientData("median_partial_sum_profile: no replicas");
    if (coeffs.components > spec.lambda.size())
        throw ParameterError("median_partial_sum_profile: more components than eigenvalues");
    SampleMatrix sums(coeffs.replicas, coeffs.components);
    for (std::size_t r = 0; r < coeffs.replicas; ++r) {
        double s = 0.0;
        for (std::size_t j = 0; j < coeffs.components; ++j) {
            const double x = coeffs.at(r, j);
            if (x != 0.0) s += spec.weight(j) * x * x;
            sums.at(r, j) = s;
        }
    }
    std::vector<double> med(coeffs.components);
    for (std::size_t j = 0; j < coeffs.components; ++j) med[j] = stats::median(sums.column(j));
    return classify(std::move(med));
}

const char* to_string(Drift d) { return d == Drift::plateau ? "plateau" : "growth"; }

}  // namespace levylab
