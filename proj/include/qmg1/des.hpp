#pragma once

#include <cstdint>
#include <vector>

#include "qmg1/analytic.hpp"
#include "qmg1/dist.hpp"

namespace qmg1 {

struct DesConfig {
    double lambda = 0.0;
    ServiceDistribution service = ServiceDistribution::exponential(1.0);
    int capacity = 1;  // K, including the customer in service
    std::uint64_t horizon_events = 100000;  // arrivals + departures
    double warmup_fraction = 0.1;
    std::uint64_t seed = 0;

    void validate() const;  // throws std::invalid_argument
};

struct DesResult {
    ProbVector p_c;       // time-averaged occupancy, post-warmup
    double L = 0.0;       // sum n * p_c[n]
    double W = 0.0;       // L / (lambda (1 - p_block))
    double p_block = 0.0; // post-warmup blocked / arrivals
    double sim_time = 0.0;  // post-warmup simulated time

    // Whole-run counters; arrivals = served + blocked + in_system_end.
    std::uint64_t arrivals = 0;
    std::uint64_t served = 0;
    std::uint64_t blocked = 0;
    std::uint64_t in_system_end = 0;
};

/// Event-driven M/G/1/K loss-queue simulation: Poisson arrivals, service
/// times drawn from the configured law, arrivals to a full system lost.
DesResult run_des(const DesConfig& config);

/// Average of replicate occupancy distributions under derived seeds,
/// renormalized; the rejection-filter target for laws without a closed-form
/// stationary distribution.
ProbVector stationary_estimate(const DesConfig& config, int replications);

}  // namespace qmg1
