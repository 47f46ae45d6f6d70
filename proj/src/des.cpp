#include "qmg1/des.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "qmg1/seeding.hpp"

namespace qmg1 {

void DesConfig::validate() const {
    if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    if (capacity < 1) throw std::invalid_argument("capacity must be >= 1");
    if (horizon_events < 1000) throw std::invalid_argument("horizon must be >= 1000 events");
    if (warmup_fraction < 0.0 || warmup_fraction > 0.5)
        throw std::invalid_argument("warmup fraction must be in [0, 0.5]");
}

DesResult run_des(const DesConfig& config) {
    config.validate();
    DesResult result;
    result.p_c.assign(config.capacity + 1, 0.0);
    if (config.lambda == 0.0) {
        result.p_c[0] = 1.0;
        return result;
    }

    std::mt19937_64 rng(config.seed);
    std::exponential_distribution<double> interarrival(config.lambda);

    const std::uint64_t warmup_events =
        static_cast<std::uint64_t>(config.warmup_fraction * config.horizon_events);
    std::vector<double> occupancy_time(config.capacity + 1, 0.0);
    std::uint64_t events = 0;
    std::uint64_t arrivals_measured = 0;
    std::uint64_t blocked_measured = 0;

    double now = 0.0;
    double measure_start = 0.0;
    int in_system = 0;
    double next_arrival = interarrival(rng);
    double next_departure = std::numeric_limits<double>::infinity();

    while (events < config.horizon_events) {
        const bool arrival_next = next_arrival <= next_departure;
        const double event_time = arrival_next ? next_arrival : next_departure;
        if (events >= warmup_events) occupancy_time[in_system] += event_time - now;
        now = event_time;

        if (arrival_next) {
            result.arrivals++;
            if (events >= warmup_events) arrivals_measured++;
            if (in_system == config.capacity) {
                result.blocked++;
                if (events >= warmup_events) blocked_measured++;
            } else {
                in_system++;
                if (in_system == 1) next_departure = now + config.service.sample(rng);
            }
            next_arrival = now + interarrival(rng);
        } else {
            in_system--;
            result.served++;
            next_departure = in_system > 0 ? now + config.service.sample(rng)
                                           : std::numeric_limits<double>::infinity();
        }
        events++;
        if (events == warmup_events) measure_start = now;
    }

    result.in_system_end = in_system;
    result.sim_time = now - measure_start;
    double total_time = 0.0;
    for (double t : occupancy_time) total_time += t;
    if (total_time > 0.0)
        for (int n = 0; n <= config.capacity; ++n) result.p_c[n] = occupancy_time[n] / total_time;
    for (int n = 0; n <= config.capacity; ++n) result.L += n * result.p_c[n];
    result.p_block = arrivals_measured > 0
                         ? static_cast<double>(blocked_measured) / arrivals_measured
                         : 0.0;
    const double effective_rate = config.lambda * (1.0 - result.p_block);
    result.W = effective_rate > 0.0 ? result.L / effective_rate : 0.0;
    return result;
}

ProbVector stationary_estimate(const DesConfig& config, int replications) {
    config.validate();
    if (replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (replications == 1) return run_des(config).p_c;
    ProbVector mean(config.capacity + 1, 0.0);
    for (int rep = 0; rep < replications; ++rep) {
        DesConfig replica = config;
        replica.seed = derive_seed(config.seed, rep);
        const DesResult r = run_des(replica);
        for (int n = 0; n <= config.capacity; ++n) mean[n] += r.p_c[n];
    }
    double total = 0.0;
    for (double v : mean) total += v;
    for (double& v : mean) v /= total;
    return mean;
}

}  // namespace qmg1
