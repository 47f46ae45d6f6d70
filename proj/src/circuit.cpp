#include "qmg1/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qmg1/des.hpp"
#include "qmg1/seeding.hpp"

namespace qmg1 {
namespace {

int qubits_for_states(int n_states) {
    int q = 0;
    while ((1 << q) < n_states) ++q;
    return std::max(q, 1);
}

ProbVector normalized_counts(const std::vector<std::uint64_t>& counts) {
    std::uint64_t total = 0;
    for (std::uint64_t c : counts) total += c;
    ProbVector p(counts.size(), 0.0);
    if (total == 0) return p;
    for (std::size_t i = 0; i < counts.size(); ++i)
        p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    return p;
}

double arrival_prob(const QueueParams& params) {
    return -std::expm1(-params.lambda * params.time_step());
}

double service_prob(const QueueParams& params) {
    return params.service.cdf(params.time_step());
}

struct SliceRates {
    double up;    // p_lambda (1 - p_mu)
    double down;  // (1 - p_lambda) p_mu
};

SliceRates slice_rates(const QueueParams& params) {
    const double pl = arrival_prob(params);
    const double pm = service_prob(params);
    return {pl * (1.0 - pm), (1.0 - pl) * pm};
}

void traced_step(ProbVector& p, int capacity, double up, double down) {
    ProbVector next(p.size(), 0.0);
    for (int n = 0; n <= capacity; ++n) {
        double stay = 1.0;
        if (n < capacity) stay -= up;
        if (n > 0) stay -= down;
        next[n] += stay * p[n];
        if (n < capacity) next[n + 1] += up * p[n];
        if (n > 0) next[n - 1] += down * p[n];
    }
    p = std::move(next);
}

// Hazard table over the residual register bins; the top bin saturates.
std::vector<double> hazard_table(const QueueParams& params, int bins) {
    std::vector<double> h(bins);
    for (int r = 0; r < bins; ++r) h[r] = params.service.hazard_bin(r, params.time_step());
    return h;
}

// Joint (queue, elapsed-bin) update. Both flags are drawn in every state,
// matching the circuit, which rotates the ancillas unconditionally; the
// elapsed bin resets whenever a service completes or a fresh service starts
// (admission to an empty system), and advances while a service survives.
void residual_step(std::vector<double>& joint, int capacity, int bins, double p_arrival,
                   const std::vector<double>& hazard) {
    const int rmax = bins - 1;
    std::vector<double> next(joint.size(), 0.0);
    auto at = [&](int n, int r) -> double& { return next[n + r * (capacity + 1)]; };
    for (int r = 0; r < bins; ++r) {
        const int advanced = std::min(r + 1, rmax);
        for (int n = 0; n <= capacity; ++n) {
            const double w = joint[n + r * (capacity + 1)];
            if (w == 0.0) continue;
            const double ps = hazard[r];
            const double both = p_arrival * ps;
            const double arr_only = p_arrival * (1.0 - ps);
            const double srv_only = (1.0 - p_arrival) * ps;
            const double none = (1.0 - p_arrival) * (1.0 - ps);
            at(n, 0) += w * both;                        // no net move, service renewed
            at(std::max(n - 1, 0), 0) += w * srv_only;   // completion (no-op at n = 0)
            if (n < capacity)
                at(n + 1, n == 0 ? 0 : advanced) += w * arr_only;
            else
                at(capacity, advanced) += w * arr_only;  // blocked; service survives
            at(n, n == 0 ? 0 : advanced) += w * none;
        }
    }
    joint = std::move(next);
}

std::vector<int> queue_samples_from_counts(const std::vector<std::uint64_t>& counts) {
    std::vector<int> samples;
    for (std::size_t n = 0; n < counts.size(); ++n)
        samples.insert(samples.end(), counts[n], static_cast<int>(n));
    return samples;
}

}  // namespace

int QueueParams::qubits() const { return qubits_for_states(capacity + 1); }

double QueueParams::time_step() const { return dt > 0.0 ? dt : 1.0 / slices; }

int QueueParams::marked_half_width() const { return epsilon0 >= 0 ? epsilon0 : qubits() / 2; }

double QueueParams::utilization() const { return lambda * service.moments().mean; }

void QueueParams::validate() const {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
    if (capacity < 1) throw std::invalid_argument("capacity must be >= 1");
    if (dt < 0.0) throw std::invalid_argument("dt must be >= 0");
    if (slices < 0) throw std::invalid_argument("slice count must be >= 0");
    if (dt == 0.0 && slices < 1) throw std::invalid_argument("dt defaulting needs slices >= 1");
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    if (epsilon0 > capacity) throw std::invalid_argument("epsilon0 must be <= K");
}

GateCensus::Counts GateCensus::total() const {
    Counts t;
    for (const Counts* c : {&slice, &cap, &diffusion}) {
        t.hadamards += c->hadamards;
        t.rotations_1q += c->rotations_1q;
        t.multiplexed_rotations += c->multiplexed_rotations;
        t.guarded_shifts += c->guarded_shifts;
        t.phase_flips += c->phase_flips;
        t.reflections += c->reflections;
    }
    return t;
}

std::vector<std::vector<double>> slice_transition_matrix(const QueueParams& params) {
    params.validate();
    const auto [up, down] = slice_rates(params);
    const int n_states = params.capacity + 1;
    std::vector<std::vector<double>> m(n_states, std::vector<double>(n_states, 0.0));
    for (int from = 0; from < n_states; ++from) {
        double stay = 1.0;
        if (from < params.capacity) {
            m[from + 1][from] = up;
            stay -= up;
        }
        if (from > 0) {
            m[from - 1][from] = down;
            stay -= down;
        }
        m[from][from] = stay;
    }
    return m;
}

ProbVector run_slices_traced(const QueueParams& params) {
    params.validate();
    const auto [up, down] = slice_rates(params);
    ProbVector p(params.capacity + 1, 1.0 / (params.capacity + 1));
    for (int t = 0; t < params.slices; ++t) traced_step(p, params.capacity, up, down);
    return p;
}

std::vector<std::uint64_t> guarded_update_permutation(int n_qubits, QubitRange queue,
                                                      int arrival_qubit, int service_qubit,
                                                      int capacity) {
    const std::uint64_t dim = std::uint64_t{1} << n_qubits;
    const std::uint64_t cap = static_cast<std::uint64_t>(capacity);
    std::vector<std::uint64_t> perm(dim);
    for (std::uint64_t i = 0; i < dim; ++i) {
        const std::uint64_t n = extract_bits(i, queue);
        const bool a = (i >> arrival_qubit) & 1;
        const bool s = (i >> service_qubit) & 1;
        std::uint64_t j = i;
        if (a && !s) {
            if (n < cap) {
                j = replace_bits(i, queue, n + 1);
            } else if (n == cap) {
                // blocked arrival: park in the vacated service-only column
                j = (i ^ (std::uint64_t{1} << arrival_qubit)) | (std::uint64_t{1} << service_qubit);
            }
        } else if (!a && s) {
            if (n >= 1 && n <= cap) {
                j = replace_bits(i, queue, n - 1);
            } else if (n == 0) {
                // empty-system service flag: park in the vacated arrival-only column
                j = (i ^ (std::uint64_t{1} << service_qubit)) | (std::uint64_t{1} << arrival_qubit);
            }
        }
        perm[i] = j;
    }
    if (!is_permutation(perm)) throw std::logic_error("guarded update is not a permutation");
    return perm;
}

ProbVector run_slices_exact(const QueueParams& params) {
    params.validate();
    const int q = params.qubits();
    if (q + 2 > kQubitCap) throw std::invalid_argument("qubit cap exceeded");
    const QubitRange queue{0, q};
    const int a_arrival = q;
    const int a_service = q + 1;
    const auto perm = guarded_update_permutation(q + 2, queue, a_arrival, a_service,
                                                 params.capacity);
    const double theta_arrival = theta_for_prob(arrival_prob(params));
    const double theta_service = theta_for_prob(service_prob(params));
    const Gate2 rot_arrival = ry_gate(theta_arrival);
    const Gate2 rot_service = ry_gate(theta_service);
    const std::uint64_t cap = static_cast<std::uint64_t>(params.capacity);

    ProbVector p(params.capacity + 1, 1.0 / (params.capacity + 1));
    for (int t = 0; t < params.slices; ++t) {
        StateVector state = StateVector::embed_sqrt(p, q + 2);
        state.apply_1q(rot_arrival, a_arrival);
        state.apply_1q(rot_service, a_service);
        state.apply_basis_permutation(perm);
        state.phase_flip(queue, [cap](std::uint64_t v) { return v > cap; });
        const std::vector<double> marg = state.marginal(queue);
        for (int n = 0; n <= params.capacity; ++n) p[n] = marg[n];
    }
    return p;
}

ProbVector run_slices_residual(const QueueParams& params) {
    params.validate();
    const int q = params.qubits();
    const int m = qubits_for_states(params.capacity + 1);
    const int bins = 1 << m;
    if (params.engine == Engine::kExact && q + m + 2 > kQubitCap)
        throw std::invalid_argument("qubit cap exceeded");
    const double p_arrival = arrival_prob(params);
    const std::vector<double> hazard = hazard_table(params, bins);

    std::vector<double> joint((params.capacity + 1) * bins, 0.0);
    for (int n = 0; n <= params.capacity; ++n) joint[n] = 1.0 / (params.capacity + 1);

    if (params.engine == Engine::kTraced) {
        for (int t = 0; t < params.slices; ++t)
            residual_step(joint, params.capacity, bins, p_arrival, hazard);
    } else {
        // Statevector slice: queue [0,q), residual [q,q+m), a_s, a_a on top.
        // The elapsed-bin bookkeeping is applied classically between slices
        // along with the ancilla trace-out, keyed on the post-update ancilla
        // column (the guarded permutation parks the two blocked boundary
        // cells in the opposite column, which the rules below account for).
        const QubitRange queue{0, q};
        const QubitRange residual{q, m};
        const int a_service = q + m;
        const int a_arrival = q + m + 1;
        const auto perm = guarded_update_permutation(q + m + 2, queue, a_arrival, a_service,
                                                     params.capacity);
        const Gate2 rot_arrival = ry_gate(theta_for_prob(p_arrival));
        std::vector<double> angles(bins);
        for (int r = 0; r < bins; ++r) angles[r] = theta_for_prob(hazard[r]);
        const std::uint64_t cap = static_cast<std::uint64_t>(params.capacity);
        const int rmax = bins - 1;

        for (int t = 0; t < params.slices; ++t) {
            std::vector<double> embed(std::size_t{1} << (q + m), 0.0);
            for (int r = 0; r < bins; ++r)
                for (int n = 0; n <= params.capacity; ++n)
                    embed[(static_cast<std::size_t>(r) << q) + n] = joint[n + r * (params.capacity + 1)];
            StateVector state = StateVector::embed_sqrt(embed, q + m + 2);
            state.apply_1q(rot_arrival, a_arrival);
            state.multiplexed_ry(residual, a_service, angles);
            state.apply_basis_permutation(perm);
            state.phase_flip(queue, [cap](std::uint64_t v) { return v > cap; });
            std::vector<double> next(joint.size(), 0.0);
            for (std::uint64_t idx = 0; idx < state.dim(); ++idx) {
                const double mass = std::norm(state.amp(idx));
                if (mass == 0.0) continue;
                const int n = static_cast<int>(idx & ((std::uint64_t{1} << q) - 1));
                const int r = static_cast<int>((idx >> q) & ((std::uint64_t{1} << m) - 1));
                const bool flag_s = (idx >> a_service) & 1;
                const bool flag_a = (idx >> a_arrival) & 1;
                if (n > params.capacity) continue;
                const int advanced = std::min(r + 1, rmax);
                int r_next;
                if (flag_a && flag_s) {
                    r_next = 0;  // completion plus arrival, service renewed
                } else if (flag_a) {
                    // admission onto n-1, or the parked idle service flag at 0
                    r_next = n <= 1 ? 0 : advanced;
                } else if (flag_s) {
                    // completion, or the parked blocked arrival at capacity
                    r_next = n == params.capacity ? advanced : 0;
                } else {
                    r_next = n == 0 ? 0 : advanced;
                }
                next[n + r_next * (params.capacity + 1)] += mass;
            }
            joint = std::move(next);
        }
    }

    ProbVector p(params.capacity + 1, 0.0);
    for (int r = 0; r < bins; ++r)
        for (int n = 0; n <= params.capacity; ++n) p[n] += joint[n + r * (params.capacity + 1)];
    return p;
}

ProbVector run_slices(const QueueParams& params) {
    if (params.service_mode == ServiceMode::kResidualHazard) return run_slices_residual(params);
    return params.engine == Engine::kExact ? run_slices_exact(params) : run_slices_traced(params);
}

std::vector<int> marked_set(const QueueParams& params) {
    const double mean = mm1k_mean_occupancy(params.utilization(), params.capacity);
    const int center = static_cast<int>(std::lround(mean));
    const int eps = params.marked_half_width();
    const int lo = std::max(0, center - eps);
    const int hi = std::min(params.capacity, center + eps);
    std::vector<int> marked;
    for (int n = lo; n <= hi; ++n) marked.push_back(n);
    return marked;
}

int grover_iterations(int capacity, int marked_size, GroverSchedule schedule) {
    if (marked_size < 1 || marked_size > capacity + 1)
        throw std::domain_error("marked size outside [1, K+1]");
    const double states = capacity + 1.0;
    if (schedule == GroverSchedule::kPaperFormula)
        return static_cast<int>(std::ceil(std::numbers::pi / 4.0 * std::sqrt(states / marked_size)));
    const double theta = std::asin(std::sqrt(marked_size / states));
    return std::max(0, static_cast<int>(std::lround(std::numbers::pi / (4.0 * theta) - 0.5)));
}

AmplifyResult grover_amplify(const ProbVector& p, const std::vector<int>& marked, int rounds,
                             CapMode cap_mode) {
    const int n_states = static_cast<int>(p.size());
    const int q = qubits_for_states(n_states);
    std::vector<bool> is_marked(std::size_t{1} << q, false);
    for (int n : marked) {
        if (n < 0 || n >= n_states) throw std::out_of_range("marked state out of range");
        is_marked[n] = true;
    }
    const QubitRange queue{0, q};
    StateVector state = StateVector::embed_sqrt(p, q);
    ProbVector uniform_legal(n_states, 1.0 / n_states);
    const StateVector axis = StateVector::embed_sqrt(uniform_legal, q);
    const auto oracle = [&is_marked](std::uint64_t v) { return is_marked[v]; };
    const auto illegal = [n_states](std::uint64_t v) { return v >= static_cast<std::uint64_t>(n_states); };
    for (int r = 0; r < rounds; ++r) {
        state.phase_flip(queue, oracle);
        state.reflect_about(axis);
        if (cap_mode == CapMode::kTwoReflection) state.phase_flip(queue, illegal);
    }
    double p_succ = 0.0;
    for (int n : marked) p_succ += std::norm(state.amp(static_cast<std::uint64_t>(n)));
    return {std::move(state), p_succ};
}

std::vector<int> rejection_filter(std::span<const int> samples, const ProbVector& target,
                                  const ProbVector& proposal, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<int> accepted;
    accepted.reserve(samples.size());
    for (int n : samples) {
        if (n < 0 || n >= static_cast<int>(proposal.size()) || proposal[n] <= 0.0)
            throw std::domain_error("sample outside proposal support");
        const double ratio = n < static_cast<int>(target.size()) ? target[n] / proposal[n] : 0.0;
        if (unit(rng) < std::min(1.0, ratio)) accepted.push_back(n);
    }
    return accepted;
}

GateCensus gate_census(const QueueParams& params) {
    params.validate();
    GateCensus census;
    const std::uint64_t t = static_cast<std::uint64_t>(params.slices);
    census.slice.hadamards = params.qubits();
    if (params.service_mode == ServiceMode::kResidualHazard) {
        census.slice.rotations_1q = t;
        census.slice.multiplexed_rotations = t;
    } else {
        census.slice.rotations_1q = 2 * t;
    }
    census.slice.guarded_shifts = 2 * t;
    census.cap.phase_flips = t;
    const int rounds = grover_iterations(params.capacity,
                                         static_cast<int>(marked_set(params).size()),
                                         params.schedule);
    census.rounds = rounds;
    census.diffusion.phase_flips =
        static_cast<std::uint64_t>(rounds) * (params.cap_mode == CapMode::kTwoReflection ? 2 : 1);
    census.diffusion.reflections = rounds;
    return census;
}

SimulationResult qmg1_run(const QueueParams& params) {
    params.validate();
    const int n_states = params.capacity + 1;
    const ProbVector p_chain = run_slices(params);
    const std::vector<int> marked = marked_set(params);
    const int rounds = grover_iterations(params.capacity, static_cast<int>(marked.size()),
                                         params.schedule);
    AmplifyResult amplified = grover_amplify(p_chain, marked, rounds, params.cap_mode);

    std::mt19937_64 rng(params.seed);
    const QubitRange queue{0, amplified.state.n_qubits()};
    const std::vector<std::uint64_t> counts_full =
        amplified.state.measure_counts(queue, params.shots, rng);

    SimulationResult result;
    result.raw_histogram.assign(counts_full.begin(), counts_full.begin() + n_states);
    result.R_used = rounds;

    std::uint64_t marked_hits = 0;
    for (int n : marked) marked_hits += result.raw_histogram[n];
    result.p_succ_measured = static_cast<double>(marked_hits) / static_cast<double>(params.shots);

    if (params.rejection) {
        ProbVector pi_target;
        if (std::holds_alternative<Exponential>(params.service.law())) {
            pi_target = mm1k_steady_state(params.utilization(), params.capacity);
        } else {
            DesConfig target_config;
            target_config.lambda = params.lambda;
            target_config.service = params.service;
            target_config.capacity = params.capacity;
            target_config.horizon_events = 1000000;
            target_config.seed = derive_seed(params.seed, 0x7A57);
            pi_target = run_des(target_config).p_c;
        }
        const std::vector<double> marg = amplified.state.marginal(queue);
        ProbVector pi_hat(marg.begin(), marg.begin() + n_states);
        const std::vector<int> samples = queue_samples_from_counts(result.raw_histogram);
        const std::vector<int> accepted = rejection_filter(samples, pi_target, pi_hat, rng);
        result.accepted_histogram.assign(n_states, 0);
        for (int n : accepted) result.accepted_histogram[n]++;
        result.acceptance_rate =
            static_cast<double>(accepted.size()) / static_cast<double>(params.shots);
        result.p_q = accepted.empty() ? normalized_counts(result.raw_histogram)
                                      : normalized_counts(result.accepted_histogram);
    } else {
        result.accepted_histogram = result.raw_histogram;
        result.acceptance_rate = 1.0;
        result.p_q = normalized_counts(result.raw_histogram);
    }

    result.L_hat = 0.0;
    for (int n = 0; n < n_states; ++n) result.L_hat += n * result.p_q[n];
    result.p_block_hat = result.p_q[params.capacity];
    const double effective_rate = params.lambda * (1.0 - result.p_block_hat);
    result.W_hat = effective_rate > 0.0 ? result.L_hat / effective_rate : 0.0;
    result.gate_census = gate_census(params);
    return result;
}

}  // namespace qmg1
