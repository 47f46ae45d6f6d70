#pragma once

#include <cstdint>
#include <vector>

namespace qmg1 {

using ProbVector = std::vector<double>;

/// Stationary distribution of the M/M/1/K queue at utilization rho:
/// p_n = rho^n (1-rho) / (1 - rho^(K+1)); uniform at rho = 1.
ProbVector mm1k_steady_state(double rho, int capacity);

/// Closed-form expected number in system; requires rho in [0, 1)
/// (throws std::domain_error otherwise).
double expected_L(double rho, int capacity);

/// Mean occupancy sum(n * p_n) of the M/M/1/K stationary law; defined for
/// every rho >= 0, unlike the closed form above.
double mm1k_mean_occupancy(double rho, int capacity);

/// Statistical total-variation bounds for N measurement shots over K+1
/// outcomes, reported side by side since the source statements disagree:
///   tv_dkw      = sqrt(ln(2/delta) / (2N))        (Massart-tight DKW)
///   tv_union    = (1 / (2 sqrt 2)) sqrt(ln(2(K+1)/delta) / N)
///   tv_main     = sqrt((2/N) ln(2^(K+1)/delta))
///   tv_expected = (K+1) / (4 sqrt N)
/// tv_union is not a valid (1-delta) envelope for the halved TV of a
/// multinomial (its derivation bounds the sup norm); tv_dkw is the one to
/// test against.
struct StatisticalBounds {
    double tv_dkw;
    double tv_union;
    double tv_main;
    double tv_expected;
};
StatisticalBounds statistical_bounds(std::uint64_t shots, double delta, int capacity);

/// Discretization error bound (lambda + mu2) * dt, mu2 the second moment of
/// the service law.
double discretization_bound(double lambda, double mu2, double dt);

/// Alternative constant derived in the accompanying expansion:
/// (lambda^2/2 + variance/(2 mean^2)) * dt.
double discretization_bound_proof_form(double lambda, double mean, double variance, double dt);

/// Success probability sin^2((2R+1) theta) with sin^2 theta = m / (K+1).
double grover_success(int marked_size, int capacity, int rounds);

/// Tail-shape factor gamma = min_{n in region} pi_n / max_{n in region}
/// pi_hat_n and the induced acceptance lower bound gamma * sin^2((2R+1)
/// theta0) at the schedule-selected round count. Throws on an empty region.
struct GammaFactor {
    double gamma;
    double acceptance_lower;
};
GammaFactor gamma_factor(const ProbVector& pi, const ProbVector& pi_hat,
                         const std::vector<int>& region);

/// Rejection-filter decay bound (1/2) theta exp(-R asin theta) with
/// theta = sqrt(m / (K+1)).
double rejection_decay_bound(int marked_size, int capacity, int rounds);

}  // namespace qmg1
