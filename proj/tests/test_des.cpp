#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "qmg1/des.hpp"
#include "qmg1/metrics.hpp"

using namespace qmg1;

namespace {

DesConfig baseline() {
    DesConfig config;
    config.lambda = 0.25;
    config.service = ServiceDistribution::exponential(1.0);
    config.capacity = 3;
    config.horizon_events = 1000000;
    config.seed = 4242;
    return config;
}

}  // namespace

TEST_CASE("baseline scenario matches the analytic references") {
    const DesResult r = run_des(baseline());
    const ProbVector analytic = mm1k_steady_state(0.25, 3);
    CHECK(tv_distance(r.p_c, analytic).halved < 0.005);
    CHECK(std::abs(r.L - 0.317647) / 0.317647 < 0.01);
    CHECK(std::abs(r.W - 1.285714) / 1.285714 < 0.01);
    CHECK(r.p_block < 0.02);
}

TEST_CASE("no arrivals leaves an empty system") {
    DesConfig config = baseline();
    config.lambda = 0.0;
    const DesResult r = run_des(config);
    CHECK(r.p_c[0] == doctest::Approx(1.0));
    CHECK(r.p_block == 0.0);
    CHECK(r.arrivals == 0);
}

TEST_CASE("flow balance holds exactly") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        DesConfig config = baseline();
        config.horizon_events = 50000;
        config.seed = seed;
        config.service = ServiceDistribution::uniform(0.5, 1.5);
        const DesResult r = run_des(config);
        CHECK(r.arrivals == r.served + r.blocked + r.in_system_end);
    }
}

TEST_CASE("result fields are internally consistent") {
    const DesResult r = run_des(baseline());
    double total = 0.0, mean = 0.0;
    for (std::size_t n = 0; n < r.p_c.size(); ++n) {
        total += r.p_c[n];
        mean += n * r.p_c[n];
    }
    CHECK(std::abs(total - 1.0) < 1e-9);
    CHECK(std::abs(r.L - mean) < 1e-9);
    CHECK(std::abs(r.W - r.L / (0.25 * (1.0 - r.p_block))) < 1e-9);
    CHECK(r.sim_time > 0.0);
}

TEST_CASE("identical configuration and seed reproduce the result bit for bit") {
    const DesResult a = run_des(baseline());
    const DesResult b = run_des(baseline());
    CHECK(a.p_c == b.p_c);
    CHECK(a.L == b.L);
    CHECK(a.W == b.W);
    CHECK(a.p_block == b.p_block);
    CHECK(a.arrivals == b.arrivals);
    CHECK(a.served == b.served);
}

TEST_CASE("blocking probability is nondecreasing in the arrival rate") {
    double prev = -1.0;
    double prev_se = 0.0;
    for (double lambda : {0.25, 0.5, 0.75, 1.0}) {
        DesConfig config = baseline();
        config.lambda = lambda;
        const DesResult r = run_des(config);
        const double se = std::sqrt(std::max(r.p_block * (1.0 - r.p_block), 1e-9) /
                                    static_cast<double>(r.arrivals));
        CHECK(r.p_block >= prev - (se + prev_se));
        prev = r.p_block;
        prev_se = se;
    }
}

TEST_CASE("stationary estimate") {
    DesConfig config = baseline();
    config.horizon_events = 100000;

    // a single replication is exactly the plain run
    const ProbVector single = stationary_estimate(config, 1);
    const DesResult direct = run_des(config);
    CHECK(single == direct.p_c);

    // averaging tightens the spread of individual entries
    double v1 = 0.0, v4 = 0.0;
    {
        std::vector<double> singles, averaged;
        for (int i = 0; i < 16; ++i) {
            DesConfig c = config;
            c.seed = 1000 + i;
            singles.push_back(stationary_estimate(c, 1)[0]);
            averaged.push_back(stationary_estimate(c, 4)[0]);
        }
        auto variance = [](const std::vector<double>& xs) {
            double mean = 0.0;
            for (double x : xs) mean += x;
            mean /= xs.size();
            double v = 0.0;
            for (double x : xs) v += (x - mean) * (x - mean);
            return v / xs.size();
        };
        v1 = variance(singles);
        v4 = variance(averaged);
    }
    CHECK(v4 < v1);

    // exponential service estimate lands on the analytic law
    DesConfig wide = config;
    wide.capacity = 15;
    wide.lambda = 0.5;
    const ProbVector estimate = stationary_estimate(wide, 4);
    CHECK(tv_distance(estimate, mm1k_steady_state(0.5, 15)).halved < 0.01);
}

TEST_CASE("configuration validation") {
    DesConfig config = baseline();
    config.horizon_events = 10;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = baseline();
    config.warmup_fraction = 0.9;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = baseline();
    config.lambda = -0.1;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    CHECK_THROWS_AS(stationary_estimate(baseline(), 0), std::invalid_argument);
}
