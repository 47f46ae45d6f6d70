#include "qmg1/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qmg1 {

ProbVector mm1k_steady_state(double rho, int capacity) {
    if (rho < 0.0) throw std::domain_error("rho must be >= 0");
    if (capacity < 1) throw std::domain_error("capacity must be >= 1");
    const int n_states = capacity + 1;
    ProbVector p(n_states);
    if (rho == 1.0) {
        std::fill(p.begin(), p.end(), 1.0 / n_states);
        return p;
    }
    // Accumulate geometric weights away from the dominant end so no term
    // overflows: upward for rho < 1, downward from n = K for rho > 1.
    const bool overloaded = rho > 1.0;
    const double ratio = overloaded ? 1.0 / rho : rho;
    double power = 1.0;
    double total = 0.0;
    for (int i = 0; i < n_states; ++i) {
        p[overloaded ? capacity - i : i] = power;
        total += power;
        power *= ratio;
    }
    for (double& v : p) v /= total;
    return p;
}

double expected_L(double rho, int capacity) {
    if (!(rho >= 0.0 && rho < 1.0)) throw std::domain_error("expected_L requires rho in [0,1)");
    if (rho == 0.0) return 0.0;
    const double rk = std::pow(rho, capacity);
    const double numer = 1.0 - (capacity + 1) * rk + capacity * rk * rho;
    const double denom = (1.0 - rho) * (1.0 - rk * rho);
    return rho * numer / denom;
}

double mm1k_mean_occupancy(double rho, int capacity) {
    const ProbVector p = mm1k_steady_state(rho, capacity);
    double mean = 0.0;
    for (int n = 0; n <= capacity; ++n) mean += n * p[n];
    return mean;
}

StatisticalBounds statistical_bounds(std::uint64_t shots, double delta, int capacity) {
    if (shots < 1) throw std::domain_error("shots must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta must be in (0,1)");
    const double n = static_cast<double>(shots);
    const double states = capacity + 1.0;
    StatisticalBounds b;
    b.tv_dkw = std::sqrt(std::log(2.0 / delta) / (2.0 * n));
    b.tv_union = std::sqrt(std::log(2.0 * states / delta) / n) / (2.0 * std::numbers::sqrt2);
    b.tv_main = std::sqrt(2.0 / n * (std::log(1.0 / delta) + states * std::numbers::ln2));
    b.tv_expected = states / (4.0 * std::sqrt(n));
    return b;
}

double discretization_bound(double lambda, double mu2, double dt) {
    return (lambda + mu2) * dt;
}

double discretization_bound_proof_form(double lambda, double mean, double variance, double dt) {
    return (0.5 * lambda * lambda + 0.5 * variance / (mean * mean)) * dt;
}

double grover_success(int marked_size, int capacity, int rounds) {
    if (marked_size < 1 || marked_size > capacity + 1)
        throw std::domain_error("marked size outside [1, K+1]");
    const double theta = std::asin(std::sqrt(static_cast<double>(marked_size) / (capacity + 1)));
    const double s = std::sin((2.0 * rounds + 1.0) * theta);
    return s * s;
}

GammaFactor gamma_factor(const ProbVector& pi, const ProbVector& pi_hat,
                         const std::vector<int>& region) {
    if (region.empty()) throw std::invalid_argument("empty region");
    double min_pi = std::numeric_limits<double>::infinity();
    double max_hat = 0.0;
    for (int n : region) {
        if (n < 0 || n >= static_cast<int>(pi.size()) || n >= static_cast<int>(pi_hat.size()))
            throw std::out_of_range("region index out of range");
        min_pi = std::min(min_pi, pi[n]);
        max_hat = std::max(max_hat, pi_hat[n]);
    }
    if (!(max_hat > 0.0)) throw std::invalid_argument("pi_hat vanishes on region");
    const int capacity = static_cast<int>(pi.size()) - 1;
    const int m = static_cast<int>(region.size());
    const double theta0 = std::asin(std::sqrt(static_cast<double>(m) / (capacity + 1)));
    const int rounds = std::max(0, static_cast<int>(std::lround(std::numbers::pi / (4.0 * theta0) - 0.5)));
    GammaFactor g;
    g.gamma = min_pi / max_hat;
    g.acceptance_lower = g.gamma * grover_success(m, capacity, rounds);
    return g;
}

double rejection_decay_bound(int marked_size, int capacity, int rounds) {
    if (marked_size < 1 || marked_size > capacity + 1)
        throw std::domain_error("marked size outside [1, K+1]");
    const double theta = std::sqrt(static_cast<double>(marked_size) / (capacity + 1));
    return 0.5 * theta * std::exp(-rounds * std::asin(theta));
}

}  // namespace qmg1
