#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmg1/circuit.hpp"
#include "qmg1/metrics.hpp"

namespace qmg1 {

/// Batch protocol over capacities x arrival rates x service laws.
struct ScenarioGrid {
    std::vector<int> K_list;
    std::vector<double> lambda_list;
    std::vector<std::string> dists;
    std::uint64_t shots = 10000;
    std::uint64_t des_events = 100000;
    int trials = 5;
    int slices = 100;
    double dt = 0.1;
    int epsilon0 = -1;  // -1 => full window (no amplification rounds)
    GroverSchedule schedule = GroverSchedule::kOptimal;
    bool rejection = false;
    std::uint64_t seed = 0;

    static ScenarioGrid defaults();
    void validate() const;
};

ScenarioGrid grid_from_json(const nlohmann::json& j);

/// One fully-specified grid cell; rows are reproducible from this record.
struct GridCellSpec {
    int capacity = 1;
    double lambda = 0.0;
    std::string dist_name;
    int trial = 0;
    std::uint64_t shots = 10000;
    std::uint64_t des_events = 100000;
    int slices = 100;
    double dt = 0.1;
    int epsilon0 = -1;  // -1 => full window
    GroverSchedule schedule = GroverSchedule::kOptimal;
    bool rejection = false;
    std::uint64_t seed = 0;  // cell seed, already derived
};

struct GridRow {
    GridCellSpec spec;
    std::string scenario_id;
    int qubits = 0;
    std::string engine;
    MetricReport metrics{};
    double l_quantum = 0.0, l_des = 0.0;
    double w_quantum = 0.0, w_des = 0.0;
    double p_block_quantum = 0.0, p_block_des = 0.0;
    int rounds_used = 0;
    double p_succ = 0.0;
    double acceptance_rate = 0.0;
    StatisticalBounds stat_bounds{};
    double disc_bound = 0.0;
    double disc_bound_proof = 0.0;
};

GridRow run_grid_cell(const GridCellSpec& spec);
std::vector<GridRow> run_grid(const ScenarioGrid& grid, int threads = 0);
std::string grid_csv_header();
std::string grid_row_csv(const GridRow& row);

struct SensitivityRow {
    double lambda = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    double fidelity = 0.0;
    double fidelity_residual = 0.0;  // 1 - F
    double log10_fidelity_residual = 0.0;
    double jsd = 0.0;
    double log10_jsd = 0.0;
};

/// Arrival-rate sweep 0.1..0.9 in steps of 0.1 at fixed capacity and law.
struct SensitivityConfig {
    std::string dist_name = "phase_type";
    int capacity = 31;
    int trials = 100;
    std::uint64_t shots = 10000;
    std::uint64_t des_events = 100000;
    int slices = 100;
    double dt = 0.1;
    std::uint64_t seed = 0;
};

std::vector<SensitivityRow> run_sensitivity(const SensitivityConfig& config, int threads = 0);
std::string sensitivity_csv_header();
std::string sensitivity_row_csv(const SensitivityRow& row);

struct DemoAmplitude {
    int queue;
    int arrival_flag;
    int service_flag;
    double amplitude;
};

/// The worked single-slice walkthrough: rho = 0.25, K = 3, dt = 0.3,
/// starting from the steady-state amplitude vector.
struct DemoReport {
    double theta_arrival = 0.0;
    double theta_service = 0.0;
    std::array<double, 4> ry_arrival{};
    std::array<double, 4> ry_service{};
    ProbVector steady_state;          // analytic reference P_c
    std::vector<double> v0;           // sqrt(P_c)
    std::vector<DemoAmplitude> post_arrival;  // nonzero amplitudes
    std::vector<DemoAmplitude> post_update;
    ProbVector queue_marginal;        // after the full slice
    double tv_halved = 0.0;
    double tv_l1 = 0.0;
};

DemoReport run_demo();
std::string demo_text(const DemoReport& report);
nlohmann::json demo_json(const DemoReport& report);

/// Joint (queue, ancilla) state at the end of the walkthrough slice, for
/// amplitude dumps.
StateVector demo_slice_state();

}  // namespace qmg1
