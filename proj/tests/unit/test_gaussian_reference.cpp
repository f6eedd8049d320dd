#include "levylab/errors.hpp"
#include "levylab/gaussian_reference.hpp"
#include "levylab/spaces.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace levylab;

TEST_SUITE("gaussian_reference") {

TEST_CASE("terms match the incomplete-gamma oracle") {
    for (const double beta : {0.05, 0.2, 0.6})
        for (const double delta : {-0.5, 0.4, 1.0})
            for (std::size_t j = 1; j <= 50; ++j) {
                const double expected = oracle::hs_term(j, delta, beta, 1.0);
                CHECK(hs_term(j, delta, beta, 1.0) == doctest::Approx(expected).epsilon(1e-8));
            }
    // Frozen from oracle::hs_term at delta = 0.4, beta = 0.05, T = 1.
    CHECK(hs_term(1, 0.4, 0.05, 1.0) == doctest::Approx(0.46745097911898875).epsilon(1e-10));
    CHECK(hs_term(7, 0.4, 0.05, 1.0) == doctest::Approx(0.062786060905089203).epsilon(1e-10));
    CHECK(hs_term(50, 0.4, 0.05, 1.0) == doctest::Approx(0.0072211119209382871).epsilon(1e-10));
}

TEST_CASE("long horizon terms reach the Gamma-integral closed form") {
    for (std::size_t j = 1; j <= 50; ++j) {
        const double k = static_cast<double>(j);
        const double closed = std::pow(k, 0.8) * std::tgamma(0.9) * std::pow(2.0 * k * k, -0.9);
        CHECK(hs_term(j, 0.4, 0.1, 400.0) == doctest::Approx(closed).epsilon(1e-8));
    }
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(hs_integral({0.4, 1.0, 1.0, 1024}), ParameterError);
    CHECK_THROWS_AS(hs_integral({0.4, 0.0, 1.0, 1024}), ParameterError);
    CHECK_THROWS_AS(hs_integral({0.4, 0.05, 1.0, 99}), ParameterError);
}

TEST_CASE("classification follows the exponent rule") {
    const auto conv = hs_integral({0.4, 0.05, 1.0, std::size_t{1} << 16});
    CHECK(conv.convergent);
    CHECK(conv.predicted_value_exponent == 0.0);
    CHECK(conv.increment_exponent == doctest::Approx(2 * 0.4 + 2 * 0.05 - 1.0).epsilon(0.05));
    const auto div = hs_integral({0.6, 0.05, 1.0, std::size_t{1} << 16});
    CHECK_FALSE(div.convergent);
    CHECK(div.predicted_value_exponent == doctest::Approx(0.3));
    CHECK(std::abs(div.value_slope - 0.3) < 0.05);
    CHECK(std::isinf(div.extrapolated_limit));
}

TEST_CASE("classification agrees with delta < 1/2 - beta on a grid") {
    for (const double beta : {0.05, 0.1, 0.2})
        for (const double delta : {-0.2, 0.1, 0.2, 0.55, 0.7}) {
            const auto r = hs_integral({delta, beta, 1.0, std::size_t{1} << 14});
            CHECK(r.convergent == (delta < 0.5 - beta));
        }
}

TEST_CASE("criterion scans beta and matches the Gaussian threshold") {
    CHECK(hs_continuity_criterion(0.4, 1.0, std::size_t{1} << 14).satisfied);
    CHECK_FALSE(hs_continuity_criterion(0.6, 1.0, std::size_t{1} << 14).satisfied);
    CHECK(hs_continuity_criterion(0.4, 1.0, 1 << 14).satisfied ==
          analytic_membership(0.4, StableLaw(2.0), MembershipTarget::solution).member);
}

TEST_CASE("extrapolated limit is stable under doubling") {
    const auto a = hs_integral({0.4, 0.05, 1.0, std::size_t{1} << 17});
    const auto b = hs_integral({0.4, 0.05, 1.0, std::size_t{1} << 18});
    CHECK(std::abs(b.extrapolated_limit / a.extrapolated_limit - 1.0) < 0.01);
}

TEST_CASE("modulus of a vanishing-noise field is zero") {
    const auto model = SpectralModel::heat_equation(8, StableLaw(2.0, 1e-300));
    FieldSimulationOptions o;
    const auto t = continuity_modulus(model, 1.0, 0.4, 2, 6, o, 1, 0);
    REQUIRE(t.rows.size() == 5);
    for (const auto& row : t.rows) CHECK(row.modulus < 1e-200);
}

TEST_CASE("stable modulus is bounded below by the largest ledger jump") {
    const auto stable = SpectralModel::heat_equation(64, StableLaw(1.0));
    const auto gauss = stable.with_law(StableLaw(2.0));
    for (std::uint64_t r = 0; r < 3; ++r) {
        const auto c = gaussian_continuity_contrast(gauss, stable, 1.0, 0.0, 3, 9, 0.5, 1, 2, r);
        CHECK_FALSE(c.gaussian.jump_resolved);
        CHECK(c.stable.jump_resolved);
        REQUIRE(c.stable.largest_ledger_increment >= 0.5);
        for (const auto& row : c.stable.rows) CHECK(row.modulus >= c.stable.largest_ledger_jump_norm);
    }
    CHECK_THROWS_AS(gaussian_continuity_contrast(stable, stable, 1.0, 0.0, 3, 9, 0.5, 1, 2, 0), ParameterError);
}

}
