#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <random>

#include "qmg1/dist.hpp"

using namespace qmg1;

namespace {

// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
double ks_statistic(std::vector<double> samples, const ServiceDistribution& dist) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = dist.cdf(samples[i]);
        d = std::max(d, std::max(f - i / n, (i + 1) / n - f));
    }
    return d;
}

std::vector<ServiceDistribution> continuous_laws() {
    return {ServiceDistribution::exponential(1.0), ServiceDistribution::normal(1.0, 0.05),
            ServiceDistribution::uniform(0.5, 1.5), phase_type_chain(0.5)};
}

}  // namespace

TEST_CASE("cdf matches the per-law closed forms") {
    const auto expo = ServiceDistribution::exponential(1.0);
    CHECK(expo.cdf(0.3) == doctest::Approx(0.2591817793).epsilon(0).scale(0).epsilon(1e-6));
    CHECK(std::abs(expo.cdf(0.3) - 0.2592) < 1e-4);

    const auto uni = ServiceDistribution::uniform(0.5, 1.5);
    CHECK(uni.cdf(1.0) == doctest::Approx(0.5));
    CHECK(uni.cdf(0.2) == 0.0);
    CHECK(uni.cdf(2.0) == 1.0);

    const auto pt = phase_type_chain(0.5);
    CHECK(pt.cdf(200.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(pt.moments().mean == doctest::Approx(5.0).epsilon(1e-9));  // 2 + 2 + 1 in series

    for (const auto& dist : continuous_laws()) {
        CHECK(dist.cdf(-1.0) == 0.0);
        double prev = 0.0;
        for (double t = 0.0; t <= 12.0; t += 0.05) {
            const double f = dist.cdf(t);
            CHECK(f >= prev - 1e-12);
            CHECK(f >= 0.0);
            CHECK(f <= 1.0);
            prev = f;
        }
    }
}

TEST_CASE("moments") {
    const Moments expo = ServiceDistribution::exponential(1.0).moments();
    CHECK(expo.mean == doctest::Approx(1.0));
    CHECK(expo.second_moment == doctest::Approx(2.0));

    const Moments det = ServiceDistribution::deterministic(1.0).moments();
    CHECK(det.mean == doctest::Approx(1.0));
    CHECK(det.second_moment == doctest::Approx(1.0));

    // integral of t^2 over [0.5, 1.5] equals mean^2 + width^2 / 12
    const Moments uni = ServiceDistribution::uniform(0.5, 1.5).moments();
    CHECK(uni.mean == doctest::Approx(1.0));
    CHECK(uni.second_moment == doctest::Approx(1.0833333333333333).epsilon(1e-12));

    // truncation at 0 is negligible for the narrow normal used in experiments
    const Moments norm = ServiceDistribution::normal(1.0, 0.05).moments();
    CHECK(std::abs(norm.mean - 1.0) < 1e-4);
    CHECK(norm.second_moment >= norm.mean * norm.mean);

    for (const auto& dist : continuous_laws()) {
        const Moments m = dist.moments();
        CHECK(m.mean > 0.0);
        CHECK(m.second_moment >= m.mean * m.mean);
    }
}

TEST_CASE("hazard bins") {
    const auto expo = ServiceDistribution::exponential(1.0);
    const double memoryless = -std::expm1(-0.3);
    for (int r = 0; r < 12; ++r)
        CHECK(std::abs(expo.hazard_bin(r, 0.3) - memoryless) < 1e-9);

    const auto det = ServiceDistribution::deterministic(1.0);
    CHECK(det.hazard_bin(0, 0.25) == 0.0);
    CHECK(det.hazard_bin(1, 0.25) == 0.0);
    CHECK(det.hazard_bin(2, 0.25) == 0.0);
    CHECK(det.hazard_bin(3, 0.25) == 1.0);

    const auto uni = ServiceDistribution::uniform(0.5, 1.5);
    CHECK(uni.hazard_bin(0, 0.5) == doctest::Approx(0.0));
    CHECK(uni.hazard_bin(1, 0.5) == doctest::Approx(0.5));
    CHECK(uni.hazard_bin(2, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("hazard product reconstructs binned mass") {
    for (const auto& dist : continuous_laws()) {
        for (double dt : {0.25, 0.3, 0.5}) {
            double survival = 1.0;
            for (int r = 0; r < 20; ++r) {
                if (1.0 - dist.cdf(r * dt) <= 1e-9) break;  // absorbed tail
                const double h = dist.hazard_bin(r, dt);
                const double mass = dist.cdf((r + 1) * dt) - dist.cdf(r * dt);
                CHECK(std::abs(survival * h - mass) < 1e-9);
                survival *= 1.0 - h;
            }
        }
    }
}

TEST_CASE("sampling") {
    std::mt19937_64 rng(12345);
    const auto det = ServiceDistribution::deterministic(2.0);
    for (int i = 0; i < 100; ++i) CHECK(det.sample(rng) == 2.0);

    const auto expo = ServiceDistribution::exponential(1.0);
    double sum = 0.0;
    for (int i = 0; i < 1000000; ++i) sum += expo.sample(rng);
    CHECK(std::abs(sum / 1e6 - 1.0) < 0.01);

    const auto pt = phase_type_chain(0.5);
    sum = 0.0;
    for (int i = 0; i < 1000000; ++i) sum += pt.sample(rng);
    CHECK(std::abs(sum / 1e6 - 5.0) < 0.05);

    const auto norm = ServiceDistribution::normal(1.0, 0.05);
    for (int i = 0; i < 10000; ++i) CHECK(norm.sample(rng) > 0.0);
}

TEST_CASE("sampled law matches cdf (Kolmogorov-Smirnov)") {
    std::mt19937_64 rng(777);
    for (const auto& dist : continuous_laws()) {
        std::vector<double> samples(100000);
        for (double& s : samples) s = dist.sample(rng);
        CHECK(ks_statistic(std::move(samples), dist) < 0.01);
    }
}

TEST_CASE("phase-type survival is monotone and in range") {
    const auto pt = phase_type_chain(0.5);
    double prev = 1.0;
    for (double t = 0.0; t <= 40.0; t += 0.25) {
        const double survival = 1.0 - pt.cdf(t);
        CHECK(survival >= -1e-12);
        CHECK(survival <= 1.0 + 1e-12);
        CHECK(survival <= prev + 1e-12);
        prev = survival;
    }
}

TEST_CASE("invalid parameters are rejected at construction") {
    CHECK_THROWS_AS(ServiceDistribution::exponential(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ServiceDistribution::exponential(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(ServiceDistribution::normal(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ServiceDistribution::uniform(1.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(ServiceDistribution::uniform(-0.5, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(ServiceDistribution::deterministic(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ServiceDistribution::phase_type({0.5, 0.0, 0.0},
                                                    {{{-1, 1, 0}, {0, -1, 1}, {0, 0, -1}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ServiceDistribution::phase_type({1, 0, 0},
                                                    {{{1, 0, 0}, {0, -1, 1}, {0, 0, -1}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ServiceDistribution::phase_type({1, 0, 0},
                                                    {{{-1, 2, 0}, {0, -1, 1}, {0, 0, -1}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ServiceDistribution::phase_type({1, 0, 0},
                                                    {{{-1, -1, 0}, {0, -1, 1}, {0, 0, -1}}}),
                    std::invalid_argument);
}
