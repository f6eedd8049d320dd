#include "levylab/errors.hpp"
#include "levylab/field_io.hpp"
#include "levylab/ou.hpp"
#include "levylab/stats.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

using namespace levylab;

TEST_SUITE("ou_dynamics") {

TEST_CASE("spectral model validation") {
    CHECK_THROWS_AS(SpectralModel({1.0, 0.5}, {1.0, 1.0}, StableLaw(1.0)), ParameterError);
    CHECK_THROWS_AS(SpectralModel({0.0}, {1.0}, StableLaw(1.0)), ParameterError);
    CHECK_THROWS_AS(SpectralModel({1.0}, {-1.0}, StableLaw(1.0)), ParameterError);
    CHECK_THROWS_AS(SpectralModel({1.0, 2.0}, {1.0}, StableLaw(1.0)), ParameterError);
    const auto heat = SpectralModel::heat_equation(5, StableLaw(1.0));
    for (std::size_t j = 0; j < 5; ++j) CHECK(heat.lambda()[j] == static_cast<double>((j + 1) * (j + 1)));
    CHECK(heat.is_heat_spectrum());
    CHECK_FALSE(SpectralModel({1.0, 3.0}, {1.0, 1.0}, StableLaw(1.0)).is_heat_spectrum());
    CHECK(heat.truncated(3).size() == 3);
}

TEST_CASE("convolution scale") {
    CHECK(conv_scale(0.0, StableLaw(1.0), 1.0) == 1.0);
    CHECK(conv_scale(0.0, StableLaw(1.5, 2.0), 0.3) == doctest::Approx(2.0 * std::pow(0.3, 1.0 / 1.5)));
    // Frozen from oracle::euler_scale (lambda = 1, alpha = 1, dt = 50): 1.
    CHECK(conv_scale(1.0, StableLaw(1.0), 50.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(conv_scale(1.0, StableLaw(1.0), INFINITY) == doctest::Approx(1.0));
    // Gaussian: variance 2 s^2 of the update equals sigma^2 (1 - e^{-2}) at lambda = dt = 1.
    for (const double sigma : {0.5, 1.0, 3.0}) {
        const double s = conv_scale(1.0, StableLaw(2.0, sigma), 1.0);
        CHECK(2.0 * s * s == doctest::Approx(sigma * sigma * (1.0 - std::exp(-2.0))).epsilon(1e-13));
    }
    // oracle::euler_scale(1, 2, 1, 2^20) gives 2 s^2 = 0.864665258133757.
    CHECK(oracle::euler_scale(1.0, 2.0, 1.0, 1 << 20) * oracle::euler_scale(1.0, 2.0, 1.0, 1 << 20) * 2.0 ==
          doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-5));
    for (const double lambda : {0.5, 4.0})
        for (const double a : {1.0, 1.5})
            CHECK(conv_scale(lambda, StableLaw(a), 0.5) ==
                  doctest::Approx(oracle::euler_scale(lambda, a, 0.5, 1 << 16)).epsilon(1e-4));
}

TEST_CASE("exact update with zero weight is deterministic decay") {
    const SpectralModel model({2.0}, {1e-300}, StableLaw(1.0));
    Stream s({1, 0, 0});
    CHECK(std::abs(ou_exact_update(0.0, 0, model, 0.5, s)) < 1e-250);
    CHECK_THROWS_AS(ou_exact_update(0.0, 0, model, 0.0, s), ParameterError);
}

TEST_CASE("exact update matches a fine-step Euler driver") {
    const SpectralModel model({1.0}, {1.0}, StableLaw(1.5));
    const double dt = 0.5;
    const std::size_t n = 20'000, sub = 1 << 10;
    const double h = dt / sub;
    const StableLaw inc = model.law().with_scale(std::pow(h, 1.0 / 1.5));
    std::vector<double> exact(n), euler(n);
    Stream a({2, 0, 0});
    Stream b({2, 1, 0});
    for (std::size_t i = 0; i < n; ++i) {
        exact[i] = ou_exact_update(0.0, 0, model, dt, a);
        double x = 0.0;
        for (std::size_t k = 0; k < sub; ++k) x += -x * h + sample_stable(inc, b);
        euler[i] = x;
    }
    CHECK(stats::ks_two_sample(exact, euler).p_value > 0.01);
}

TEST_CASE("two half steps equal one full step in distribution") {
    const SpectralModel model({3.0}, {0.7}, StableLaw(1.2));
    const std::size_t n = 50'000;
    std::vector<double> one(n), two(n);
    Stream a({3, 0, 0});
    Stream b({3, 1, 0});
    for (std::size_t i = 0; i < n; ++i) {
        one[i] = ou_exact_update(0.4, 0, model, 0.6, a);
        two[i] = ou_exact_update(ou_exact_update(0.4, 0, model, 0.3, b), 0, model, 0.3, b);
    }
    CHECK(stats::ks_two_sample(one, two).p_value > 0.01);
}

TEST_CASE("Gaussian stationary variance") {
    const SpectralModel model({2.0}, {1.5}, StableLaw(2.0, 0.8));
    Stream s({4, 0, 0});
    const std::size_t n = 1'000'000;
    std::vector<double> x(n);
    double v = 0.0;
    for (std::size_t i = 0; i < 100; ++i) v = ou_exact_update(v, 0, model, 0.7, s);
    for (auto& e : x) e = v = ou_exact_update(v, 0, model, 0.7, s);
    const double target = std::pow(1.5 * 0.8, 2) * 2.0 / (2.0 * 2.0);
    CHECK(std::abs(stats::variance(x) / target - 1.0) < 0.02);
}

TEST_CASE("jump-resolved: no jumps and no residual gives the zero path") {
    const auto model = SpectralModel::heat_equation(3, StableLaw(1.0));
    JumpResolvedOptions o;
    o.small_jump_residual = false;
    o.r_resolve = 1e12;
    Stream s({5, 0, 0});
    const auto p = simulate_component_jump_resolved(1, model, 1.0, o, s);
    CHECK(p.jumps.empty());
    for (const double v : p.values) CHECK(v == 0.0);
}

TEST_CASE("jump-resolved: single forced jump decays exactly") {
    const SpectralModel model({2.0}, {0.75}, StableLaw(1.0));
    JumpResolvedOptions o;
    o.small_jump_residual = false;
    o.step = 0.1;
    o.forced_jumps = {{0.25, 1.6}};
    Stream s({6, 0, 0});
    const auto p = simulate_component_jump_resolved(0, model, 1.0, o, s);
    REQUIRE(p.jumps.size() == 1);
    CHECK(p.jumps[0].left_limit == 0.0);
    CHECK(p.jumps[0].size == doctest::Approx(1.6).epsilon(1e-15));
    for (std::size_t i = 0; i < p.times.size(); ++i) {
        const double t = p.times[i];
        const bool after = t > 0.25 || (t == 0.25 && i > 0 && p.times[i - 1] == 0.25);
        const double expected = after ? 0.75 * 1.6 * std::exp(-2.0 * (t - 0.25)) : 0.0;
        CHECK(p.values[i] == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK_THROWS_AS(simulate_component_jump_resolved(0, model.with_law(StableLaw(2.0)), 1.0, o, s), ParameterError);
}

TEST_CASE("jump bookkeeping is bit-exact") {
    const auto model = SpectralModel(std::vector<double>{1.0, 4.0, 9.0, 16.0}, {0.3, 1.0, 1.7, 2.9}, StableLaw(1.3));
    FieldSimulationOptions o;
    o.mode = SimulationMode::jump_resolved;
    o.step = 1e-2;
    o.r_resolve = 0.05;
    for (std::uint64_t r = 0; r < 20; ++r) {
        const FieldPath p = simulate_field(model, 2.0, o, 7, r);
        REQUIRE_FALSE(p.jumps.empty());
        for (const auto& jump : p.jumps) {
            const std::size_t row = p.row_of(jump.time);
            const double post = p.at(row, jump.component);
            CHECK(post - jump.left_limit == model.beta()[jump.component] * jump.size);
            CHECK(std::abs(jump.size) >= o.r_resolve);
            CHECK(jump.time > 0.0);
            CHECK(jump.time <= 2.0);
        }
    }
}

TEST_CASE("exact_jump property over awkward magnitudes") {
    Stream s({8, 0, 0});
    const int draws = 20000;
    int loose = 0;
    for (int i = 0; i < draws; ++i) {
        const double pre = std::ldexp(s.uniform() - 0.5, static_cast<int>(s.next_u64() % 60) - 30);
        const double beta = std::ldexp(s.uniform() + 0.1, static_cast<int>(s.next_u64() % 10) - 5);
        const double jump = std::ldexp(s.uniform() - 0.5, static_cast<int>(s.next_u64() % 60) - 30);
        const ExactJump e = exact_jump(pre, beta, jump);
        REQUIRE(e.value - e.left_limit == beta * e.size);
        const double ulp = std::max(std::abs(pre), std::abs(beta * jump)) * 0x1p-52;
        const double moved = std::max(std::abs(e.left_limit - pre), std::abs(beta * e.size - beta * jump));
        CHECK(moved <= 0x1p17 * ulp);
        loose += moved > 8.0 * ulp ? 1 : 0;
    }
    CHECK(loose <= draws / 1000);
}

TEST_CASE("exact_jump when rounded products skip a residue class") {
    // beta is close to 4/3: fl(beta x) misses every fourth output ulp over a
    // long stretch, and d = value - pre is a multiple of 16 of them.
    const double pre = -0x1.51be0d06c0e8ap+22, beta = 0x1.5550efbeea13fp-3, jump = 0x1.194c7e3127edcp+21;
    const ExactJump e = exact_jump(pre, beta, jump);
    CHECK(e.value - e.left_limit == beta * e.size);
    CHECK(std::abs(e.value - (pre + beta * jump)) <= 0x1p16 * 0x1p-52 * std::abs(pre));
}

TEST_CASE("field path invariants and N = 1 reduction") {
    const auto model = SpectralModel::heat_equation(1, StableLaw(1.5));
    FieldSimulationOptions o;
    o.step = 0.05;
    const FieldPath p = simulate_field(model, 1.0, o, 9, 4);
    CHECK(p.at(0, 0) == 0.0);
    Stream s({9, 4, 0});
    double x = 0.0;
    for (std::size_t i = 1; i < p.times.size(); ++i) {
        x = ou_exact_update(x, 0, model, p.times[i] - p.times[i - 1], s);
        CHECK(p.at(i, 0) == x);
    }

    o.mode = SimulationMode::jump_resolved;
    o.r_resolve = 0.1;
    const FieldPath q = simulate_field(model, 1.0, o, 9, 4);
    Stream t({9, 4, 0});
    JumpResolvedOptions jo;
    jo.r_resolve = 0.1;
    jo.step = 0.05;
    const ComponentPath c = simulate_component_jump_resolved(0, model, 1.0, jo, t);
    REQUIRE(c.jumps.size() == q.jumps.size());
    REQUIRE(c.values.size() == q.times.size() + q.jumps.size());
    for (std::size_t i = 0, k = 0; i < c.values.size(); ++i) {
        if (i + 1 < c.times.size() && c.times[i + 1] == c.times[i]) continue;
        CHECK(c.values[i] == q.at(k++, 0));
    }
}

TEST_CASE("components are independent") {
    const auto model = SpectralModel::heat_equation(2, StableLaw(2.0));
    FieldSimulationOptions o;
    o.step = 0.5;
    const std::size_t n = 10'000;
    std::vector<double> a(n), b(n);
    for (std::size_t r = 0; r < n; ++r) {
        const FieldPath p = simulate_field(model, 1.0, o, 10, r);
        a[r] = p.at(p.times.size() - 1, 0);
        b[r] = p.at(p.times.size() - 1, 1);
    }
    CHECK(std::abs(stats::pearson_correlation(a, b)) < 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("results do not depend on worker count") {
    const auto model = SpectralModel::heat_equation(37, StableLaw(1.2));
    for (const auto mode : {SimulationMode::marginal_exact, SimulationMode::jump_resolved}) {
        FieldSimulationOptions o;
        o.mode = mode;
        o.step = 0.01;
        o.r_resolve = 0.05;
        o.workers = 1;
        const FieldPath one = simulate_field(model, 1.0, o, 11, 0);
        for (const unsigned w : {4u, 16u}) {
            o.workers = w;
            const FieldPath many = simulate_field(model, 1.0, o, 11, 0);
            CHECK(one.times == many.times);
            CHECK(one.coeffs == many.coeffs);
            CHECK(one.jumps.size() == many.jumps.size());
        }
    }
}

TEST_CASE("memory cap refuses oversize fields") {
    const auto model = SpectralModel::heat_equation(100, StableLaw(1.0));
    FieldSimulationOptions o;
    o.step = 1e-3;
    o.max_entries = 10'000;
    CHECK_THROWS_AS(simulate_field(model, 1.0, o, 1, 0), ResourceError);
    o.mode = SimulationMode::jump_resolved;
    CHECK_THROWS_AS(simulate_field(model, 1.0, o, 1, 0), ResourceError);
}

TEST_CASE("noise partial sums") {
    const auto model = SpectralModel::heat_equation(4, StableLaw(1.5, 0.9));
    for (const double v : simulate_noise_partial_sum(model, 0.0, 1, 0)) CHECK(v == 0.0);
    const std::size_t n = 100'000;
    std::vector<double> l1(n), l2(n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto l = simulate_noise_partial_sum(model, 2.0, 12, r);
        l1[r] = l[0];
        l2[r] = l[1];
    }
    const auto cf = stats::empirical_cf(l1, 1.0);
    CHECK(std::abs(cf.value - std::exp(-std::pow(0.9, 1.5) * 2.0)) < 3.0 * cf.std_error);
    CHECK(stats::ks_two_sample(l1, l2).p_value > 0.01);
}

TEST_CASE("field evaluation") {
    const std::vector<double> e1{1.0, 0.0};
    const std::vector<double> e2{0.0, 1.0};
    const std::vector<double> mid{std::numbers::pi / 2};
    CHECK(evaluate_field(e1, mid)[0] == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)));
    CHECK(std::abs(evaluate_field(e2, mid)[0]) < 1e-15);
    const std::vector<double> coeffs{0.3, -1.2, 4.0};
    const std::vector<double> near_zero{1e-12};
    CHECK(std::abs(evaluate_field(coeffs, near_zero)[0]) < 1e-10);
    const std::vector<double> outside{0.0};
    CHECK_THROWS_AS(evaluate_field(coeffs, outside), DomainError);
    const std::vector<double> pi{std::numbers::pi};
    CHECK_THROWS_AS(evaluate_field(coeffs, pi), DomainError);
}

TEST_CASE("csv serialisation") {
    const SpectralModel model({1.0, 4.0}, {1.0, 1.0}, StableLaw(1.0));
    FieldSimulationOptions o;
    o.mode = SimulationMode::jump_resolved;
    o.step = 0.25;
    o.r_resolve = 0.3;
    o.small_jump_residual = false;
    const FieldPath p = simulate_field(model, 4.0, o, 13, 0);
    std::ostringstream coeffs, ledger;
    write_field_coefficients(coeffs, p);
    write_jump_ledger(ledger, p);
    CHECK(coeffs.str().rfind("t,X1,X2\n0,0,0\n", 0) == 0);
    CHECK(ledger.str().rfind("component,time,size,left_limit\n", 0) == 0);
    std::size_t lines = 0;
    for (const char ch : ledger.str()) lines += ch == '\n';
    CHECK(lines == p.jumps.size() + 1);
}

}
