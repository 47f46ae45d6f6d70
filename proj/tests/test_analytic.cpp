#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <random>

#include "qmg1/analytic.hpp"

using namespace qmg1;

TEST_CASE("mm1k steady state") {
    const ProbVector p = mm1k_steady_state(0.25, 3);
    CHECK(std::abs(p[0] - 0.7529) < 5e-5);
    CHECK(std::abs(p[1] - 0.1882) < 5e-5);
    CHECK(std::abs(p[2] - 0.0471) < 5e-5);
    CHECK(std::abs(p[3] - 0.0118) < 5e-5);

    for (double v : mm1k_steady_state(1.0, 9)) CHECK(v == doctest::Approx(0.1));

    const ProbVector zero = mm1k_steady_state(0.0, 5);
    CHECK(zero[0] == doctest::Approx(1.0));
    for (int n = 1; n <= 5; ++n) CHECK(zero[n] == 0.0);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> rho_draw(0.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const ProbVector q = mm1k_steady_state(rho_draw(rng), 1 + static_cast<int>(rng() % 30));
        double total = 0.0;
        for (double v : q) total += v;
        CHECK(std::abs(total - 1.0) < 1e-12);
    }

    // overloaded queues at large capacities stay finite: the law mirrors the
    // underloaded one from the top of the buffer
    for (int capacity : {63, 1023, 4095}) {
        const double mean = mm1k_mean_occupancy(2.1, capacity);
        CHECK(std::isfinite(mean));
        CHECK(std::abs(mean - (capacity - (1.0 / 2.1) / (1.0 - 1.0 / 2.1))) < 1e-6);
        const ProbVector over = mm1k_steady_state(2.1, capacity);
        double total = 0.0;
        for (double v : over) total += v;
        CHECK(std::abs(total - 1.0) < 1e-12);
    }
}

TEST_CASE("expected_L") {
    CHECK(std::abs(expected_L(0.25, 3) - 0.31765) < 1e-4);
    CHECK(expected_L(0.0, 5) == 0.0);
    CHECK(std::abs(expected_L(0.5, 400) - 1.0) < 1e-10);
    CHECK_THROWS_AS(expected_L(1.0, 3), std::domain_error);
    CHECK_THROWS_AS(expected_L(1.5, 3), std::domain_error);

    // closed form equals the direct sum over the stationary law
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> rho_draw(0.0, 0.999);
    for (int i = 0; i < 1000; ++i) {
        const double rho = rho_draw(rng);
        const int capacity = 1 + static_cast<int>(rng() % 40);
        CHECK(std::abs(expected_L(rho, capacity) - mm1k_mean_occupancy(rho, capacity)) < 1e-10);
    }
}

TEST_CASE("statistical bounds") {
    const StatisticalBounds b = statistical_bounds(10000, 0.05, 3);
    CHECK(std::abs(b.tv_union - 0.0079649) < 1e-6);
    CHECK(std::abs(b.tv_dkw - 0.0135818) < 1e-6);
    CHECK(b.tv_expected == doctest::Approx(0.01));
    CHECK(std::abs(b.tv_main - 0.0339656) < 1e-6);

    // all bounds shrink with the shot count
    const StatisticalBounds big = statistical_bounds(100000000, 0.05, 3);
    CHECK(big.tv_dkw < 1e-3);
    CHECK(big.tv_expected < 1e-3);
    CHECK(big.tv_main < 1e-2);
    std::uint64_t n = 100;
    StatisticalBounds prev = statistical_bounds(n, 0.05, 7);
    for (int i = 0; i < 5; ++i) {
        n *= 10;
        const StatisticalBounds next = statistical_bounds(n, 0.05, 7);
        CHECK(next.tv_dkw < prev.tv_dkw);
        CHECK(next.tv_union < prev.tv_union);
        CHECK(next.tv_main < prev.tv_main);
        CHECK(next.tv_expected < prev.tv_expected);
        prev = next;
    }
    // and grow with capacity where the state count enters
    CHECK(statistical_bounds(10000, 0.05, 15).tv_union >
          statistical_bounds(10000, 0.05, 3).tv_union);
    CHECK(statistical_bounds(10000, 0.05, 15).tv_main >
          statistical_bounds(10000, 0.05, 3).tv_main);
}

TEST_CASE("discretization bound") {
    CHECK(discretization_bound(0.25, 2.0, 0.3) == doctest::Approx(0.675));
    CHECK(discretization_bound(0.25, 2.0, 0.0) == 0.0);
    CHECK(discretization_bound(0.25, 2.0, 0.15) ==
          doctest::Approx(0.5 * discretization_bound(0.25, 2.0, 0.3)));
    CHECK(discretization_bound_proof_form(0.5, 1.0, 1.0, 0.1) ==
          doctest::Approx((0.125 + 0.5) * 0.1));
}

TEST_CASE("grover success closed form") {
    CHECK(grover_success(1, 3, 1) == doctest::Approx(1.0));
    CHECK(grover_success(2, 7, 0) == doctest::Approx(0.25));
    for (int r = 0; r < 6; ++r) CHECK(grover_success(8, 7, r) == doctest::Approx(1.0));
    CHECK_THROWS_AS(grover_success(0, 3, 1), std::domain_error);
    CHECK_THROWS_AS(grover_success(5, 3, 1), std::domain_error);
}

TEST_CASE("gamma factor") {
    const ProbVector uniform4(4, 0.25);
    const GammaFactor same = gamma_factor(uniform4, uniform4, {0, 1, 2, 3});
    CHECK(same.gamma == doctest::Approx(1.0));

    const ProbVector pi = mm1k_steady_state(0.25, 3);
    const ProbVector pi_hat = {0.5, 0.5, 0.0, 0.0};
    const GammaFactor g = gamma_factor(pi, pi_hat, {0, 1});
    CHECK(std::abs(g.gamma - 0.3764706) < 1e-4);

    CHECK_THROWS_AS(gamma_factor(pi, pi_hat, {}), std::invalid_argument);

    // piecewise amplified proposal: gamma equals min pi over the in-window bin
    const int capacity = 7;
    const std::vector<int> region = {0, 1};
    const double theta0 = std::asin(std::sqrt(2.0 / 8.0));
    const int rounds = std::max(
        0, static_cast<int>(std::lround(std::numbers::pi / (4.0 * theta0) - 0.5)));
    const double in_window = grover_success(2, capacity, rounds) / 2.0;
    ProbVector constructed(capacity + 1, (1.0 - grover_success(2, capacity, rounds)) / 6.0);
    constructed[0] = constructed[1] = in_window;
    const ProbVector target = mm1k_steady_state(0.25, capacity);
    const GammaFactor built = gamma_factor(target, constructed, region);
    CHECK(built.gamma == doctest::Approx(std::min(target[0], target[1]) / in_window));
    CHECK(built.acceptance_lower ==
          doctest::Approx(built.gamma * grover_success(2, capacity, rounds)));
}

TEST_CASE("rejection decay bound") {
    CHECK(rejection_decay_bound(2, 7, 0) == doctest::Approx(0.5 * std::sqrt(0.25)));
    CHECK(rejection_decay_bound(4, 3, 3) ==
          doctest::Approx(0.5 * std::exp(-3.0 * std::numbers::pi / 2.0)));
    CHECK(std::abs(rejection_decay_bound(1, 3, 2) - 0.0877300) < 1e-3);
    CHECK(std::abs(rejection_decay_bound(1, 3, 2) - 0.25 * std::exp(-std::numbers::pi / 3.0)) <
          1e-12);
    double prev = rejection_decay_bound(2, 15, 0);
    for (int r = 1; r < 10; ++r) {
        const double next = rejection_decay_bound(2, 15, r);
        CHECK(next < prev);
        prev = next;
    }
}
