#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qmg1/metrics.hpp"

using namespace qmg1;

namespace {

// Reported single-slice distributions from the worked comparison table.
const std::vector<double> kPq = {0.7840, 0.1615, 0.0424, 0.0121};
const std::vector<double> kPc = {0.7529, 0.1882, 0.0471, 0.0118};

std::vector<double> random_dist(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> p(n);
    double total = 0.0;
    for (double& v : p) {
        v = unit(rng);
        total += v;
    }
    for (double& v : p) v /= total;
    return p;
}

}  // namespace

TEST_CASE("fidelity") {
    CHECK(fidelity(kPc, kPc) == doctest::Approx(1.0));
    CHECK(std::abs(fidelity(kPq, kPc) - 0.9985397) < 1e-6);
    const std::vector<double> a = {1.0, 0.0}, b = {0.0, 1.0};
    CHECK(fidelity(a, b) == 0.0);
    CHECK_THROWS_AS(fidelity(a, kPc), std::invalid_argument);
}

TEST_CASE("jensen-shannon divergence") {
    CHECK(jsd(kPc, kPc) == doctest::Approx(0.0));
    const std::vector<double> a = {1.0, 0.0}, b = {0.0, 1.0};
    CHECK(jsd(a, b) == doctest::Approx(std::numbers::ln2));
    const std::vector<double> p = {0.75, 0.25}, q = {0.25, 0.75};
    CHECK(std::abs(jsd(p, q) - 0.1308120) < 1e-6);
}

TEST_CASE("total variation, both conventions") {
    const TvPair table = tv_distance(kPq, kPc);
    CHECK(std::abs(table.l1 - 0.0628) < 1e-12);
    CHECK(std::abs(table.halved - 0.0314) < 1e-12);
    const TvPair zero = tv_distance(kPc, kPc);
    CHECK(zero.halved == 0.0);
    CHECK(zero.l1 == 0.0);
    const std::vector<double> a = {1.0, 0.0}, b = {0.0, 1.0};
    const TvPair far = tv_distance(a, b);
    CHECK(far.halved == doctest::Approx(1.0));
    CHECK(far.l1 == doctest::Approx(2.0));
}

TEST_CASE("relative error") {
    CHECK(relative_error(0.3178, 0.3178) == 0.0);
    CHECK(relative_error(0.96, 1.0) == doctest::Approx(0.04));
    CHECK_THROWS_AS(relative_error(1.0, 0.0), std::domain_error);
}

TEST_CASE("metric symmetry and bounds on random pairs") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = 2 + rng() % 12;
        const std::vector<double> p = random_dist(n, rng);
        const std::vector<double> q = random_dist(n, rng);
        CHECK(fidelity(p, q) == fidelity(q, p));
        CHECK(jsd(p, q) == jsd(q, p));
        CHECK(tv_distance(p, q).l1 == tv_distance(q, p).l1);
        CHECK(fidelity(p, q) >= 0.0);
        CHECK(fidelity(p, q) <= 1.0 + 1e-12);
        CHECK(jsd(p, q) <= std::numbers::ln2 + 1e-12);
        const TvPair tv = tv_distance(p, q);
        CHECK(tv.halved <= 1.0 + 1e-12);
        CHECK(tv.l1 == doctest::Approx(2.0 * tv.halved));
        // 1 - F never exceeds the L1 gap
        CHECK(1.0 - fidelity(p, q) <= tv.l1 + 1e-12);
    }
}

TEST_CASE("sensitivity transforms") {
    CHECK(log10_offset(0.0) == doctest::Approx(-10.0));
    CHECK(log10_offset(1.0) == doctest::Approx(std::log10(1.0 + 1e-10)));
    const double f = fidelity(kPq, kPc);
    CHECK(1.0 - f == doctest::Approx(0.0014603).epsilon(1e-3));
}

TEST_CASE("metric report ties the pieces together") {
    const MetricReport r = make_metric_report(kPq, kPc, 0.3178, 0.3178, 0.96, 1.0);
    CHECK(r.fidelity == doctest::Approx(fidelity(kPq, kPc)));
    CHECK(r.l1_gap == doctest::Approx(2.0 * r.tv_halved));
    CHECK(r.rel_err_L == 0.0);
    CHECK(r.rel_err_W == doctest::Approx(0.04));
}
