#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qmg1/analytic.hpp"
#include "qmg1/dist.hpp"
#include "qmg1/qcore.hpp"

namespace qmg1 {

enum class Engine { kExact, kTraced };
enum class ServiceMode { kPerSliceCdf, kResidualHazard };
enum class CapMode { kSignFlip, kTwoReflection };
enum class GroverSchedule { kPaperFormula, kOptimal };

/// Full scenario description for one pipeline run.
struct QueueParams {
    double lambda = 0.0;
    ServiceDistribution service = ServiceDistribution::exponential(1.0);
    int capacity = 1;  // K
    double dt = 0.0;   // 0 => 1/slices
    int slices = 1;    // T
    std::uint64_t shots = 10000;
    int epsilon0 = -1;  // marked half-width; -1 => floor(Q/2)
    Engine engine = Engine::kExact;
    ServiceMode service_mode = ServiceMode::kPerSliceCdf;
    CapMode cap_mode = CapMode::kSignFlip;
    GroverSchedule schedule = GroverSchedule::kOptimal;
    bool rejection = false;
    std::uint64_t seed = 0;

    int qubits() const;          // ceil(log2(K+1))
    double time_step() const;    // dt, or 1/slices when dt == 0
    int marked_half_width() const;
    double utilization() const;  // lambda * mean service time
    void validate() const;       // throws std::invalid_argument
};

/// Per-gate-kind application counts, split by pipeline stage.
struct GateCensus {
    struct Counts {
        std::uint64_t hadamards = 0;
        std::uint64_t rotations_1q = 0;
        std::uint64_t multiplexed_rotations = 0;
        std::uint64_t guarded_shifts = 0;
        std::uint64_t phase_flips = 0;
        std::uint64_t reflections = 0;
        std::uint64_t total() const {
            return hadamards + rotations_1q + multiplexed_rotations + guarded_shifts +
                   phase_flips + reflections;
        }
    };
    Counts slice;
    Counts cap;
    Counts diffusion;
    int rounds = 0;
    Counts total() const;
};

struct SimulationResult {
    std::vector<std::uint64_t> raw_histogram;       // length K+1
    std::vector<std::uint64_t> accepted_histogram;  // length K+1
    ProbVector p_q;
    double L_hat = 0.0;
    double W_hat = 0.0;
    double p_block_hat = 0.0;
    int R_used = 0;
    double p_succ_measured = 0.0;
    double acceptance_rate = 0.0;
    GateCensus gate_census;
};

/// One-slice transition matrix of the induced Bernoulli chain,
/// column-stochastic: M[to][from] with p_up = p_lambda (1 - p_mu),
/// p_down = (1 - p_lambda) p_mu, and blocking folded into the boundary
/// stay terms.
std::vector<std::vector<double>> slice_transition_matrix(const QueueParams& params);

/// T-fold application of the slice matrix to the uniform start over 0..K.
ProbVector run_slices_traced(const QueueParams& params);

/// Statevector slice loop: fresh arrival/service ancillas per slice, guarded
/// increment/decrement, ancilla trace-out and sqrt(p) re-embedding.
ProbVector run_slices_exact(const QueueParams& params);

/// Slice loop with the elapsed-service residual register: service completion
/// probability per slice is the discrete hazard of the elapsed bin; the bin
/// counter resets on completion and advances on survival.
ProbVector run_slices_residual(const QueueParams& params);

/// Dispatches on engine / service_mode.
ProbVector run_slices(const QueueParams& params);

/// Queue values inside the amplification window around the mean occupancy,
/// clipped to [0, K].
std::vector<int> marked_set(const QueueParams& params);

/// Number of amplification rounds for a marked set of the given size.
int grover_iterations(int capacity, int marked_size, GroverSchedule schedule);

struct AmplifyResult {
    StateVector state;
    double p_succ;
};

/// Embeds sqrt(p), then applies `rounds` of marked-set phase flip followed by
/// reflection about the uniform legal-state axis. Illegal basis states keep
/// zero amplitude throughout.
AmplifyResult grover_amplify(const ProbVector& p, const std::vector<int>& marked, int rounds,
                             CapMode cap_mode);

/// Keeps sample n with probability min(1, target[n] / proposal[n]).
/// Throws std::domain_error when a sample lands outside the proposal support.
std::vector<int> rejection_filter(std::span<const int> samples, const ProbVector& target,
                                  const ProbVector& proposal, std::mt19937_64& rng);

/// Full pipeline: slices -> amplification -> measurement -> optional
/// rejection filtering, with estimators and diagnostics filled in.
SimulationResult qmg1_run(const QueueParams& params);

/// Deterministic gate count of the pipeline the parameters describe.
GateCensus gate_census(const QueueParams& params);

/// Unitary basis permutation realizing one guarded INC/DEC update on the
/// joint (queue, a_a, a_s) register: increments on (1,0) below K, decrements
/// on (0,1) above 0, and reroutes the two blocked boundary cells into each
/// other's vacated ancilla columns so the map stays a bijection.
std::vector<std::uint64_t> guarded_update_permutation(int n_qubits, QubitRange queue,
                                                      int arrival_qubit, int service_qubit,
                                                      int capacity);

}  // namespace qmg1
