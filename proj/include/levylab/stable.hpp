#pragma once

#include "levylab/rng.hpp"

#include <vector>

namespace levylab {

/// Symmetric alpha-stable law with E[exp(iuZ)] = exp(-scale^alpha |u|^alpha).
///
/// Under this convention alpha = 2 is a centred Gaussian with variance
/// 2 * scale^2, not scale^2. Every scale in the library follows it.
///
/// The Levy measure is nu(dx) = c(alpha) scale^alpha |x|^{-1-alpha} dx with
/// c(alpha) = Gamma(1 + alpha) sin(pi alpha / 2) / pi, so the two-sided tail
/// mass is nu{|x| >= r} = K(alpha) scale^alpha r^{-alpha},
/// K(alpha) = 2 Gamma(alpha) sin(pi alpha / 2) / pi. K is fixed at
/// construction.
class StableLaw {
public:
    StableLaw(double alpha, double scale = 1.0);

    double alpha() const { return alpha_; }
    double scale() const { return scale_; }
    bool has_jump_part() const { return alpha_ < 2.0; }
    /// K(alpha); zero for the Gaussian.
    double tail_constant() const { return tail_constant_; }
    /// c(alpha); zero for the Gaussian.
    double density_constant() const { return density_constant_; }

    StableLaw with_scale(double scale) const { return StableLaw(alpha_, scale); }

private:
    double alpha_;
    double scale_;
    double tail_constant_;
    double density_constant_;
};

/// Levy-Ito split of one driver at jump-size threshold r1.
struct JumpDecomposition {
    double r1 = 0.0;
    /// Rate of jumps with |x| >= r1 per unit time.
    double big_rate = 0.0;
    /// Integral of x^2 nu(dx) over |x| < r1.
    double small_sigma2 = 0.0;
};

/// Chambers-Mallows-Stuck draw from the symmetric law.
double sample_stable(const StableLaw& law, Stream& stream);

/// CMS transform of V uniform on (-pi/2, pi/2) and W ~ Exp(1), unit scale.
double stable_from_uniforms(double alpha, double v, double w);

struct TailMass {
    double value = 0.0;
    bool no_jump_part = false;
};

/// nu{|x| >= r}. The Gaussian returns zero with no_jump_part set.
TailMass stable_tail_mass(const StableLaw& law, double r);

/// Inverse-tail transform: |J| = r1 u^{-1/alpha}, negative when sign_u < 1/2.
double big_jump_from_uniforms(double alpha, double r1, double u, double sign_u);

/// Jump of size |J| >= r1 drawn from nu restricted to {|x| >= r1}, normalised.
double sample_big_jump(const StableLaw& law, double r1, Stream& stream);

/// Arrival times of a Poisson process on (0, horizon), strictly increasing.
std::vector<double> sample_poisson_times(double rate, double horizon, Stream& stream);

/// Closed form c(alpha) scale^alpha 2 r1^{2-alpha} / (2 - alpha).
double small_jump_sigma2(const StableLaw& law, double r1);

JumpDecomposition decompose(const StableLaw& law, double r1);

}  // namespace levylab
