#include "qmg1/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qmg1/des.hpp"
#include "qmg1/io.hpp"
#include "qmg1/seeding.hpp"

namespace qmg1 {
namespace {

constexpr int kExactEngineQubitLimit = 14;  // queue + two ancillas

QueueParams params_for_cell(const GridCellSpec& spec) {
    QueueParams params;
    params.lambda = spec.lambda;
    params.service = dist_from_name(spec.dist_name, spec.lambda);
    params.capacity = spec.capacity;
    params.dt = spec.dt;
    params.slices = spec.slices;
    params.shots = spec.shots;
    params.epsilon0 = spec.epsilon0 >= 0 ? spec.epsilon0 : spec.capacity;
    params.schedule = spec.schedule;
    params.rejection = spec.rejection;
    params.seed = spec.seed;
    params.engine =
        params.qubits() + 2 <= kExactEngineQubitLimit ? Engine::kExact : Engine::kTraced;
    return params;
}

std::string scenario_id(const GridCellSpec& spec) {
    std::ostringstream os;
    os << "K" << spec.capacity << "_lam" << format_double(spec.lambda) << "_" << spec.dist_name;
    return os.str();
}

template <typename Work>
void run_pool(std::size_t jobs, int threads, Work&& work) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(jobs)));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) work(i);
        });
    }
    for (auto& th : pool) th.join();
}

std::vector<DemoAmplitude> nonzero_amplitudes(const StateVector& state, int queue_width) {
    std::vector<DemoAmplitude> out;
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        const double a = state.amp(i).real();
        if (std::abs(a) < 1e-12) continue;
        out.push_back({static_cast<int>(i & ((1u << queue_width) - 1)),
                       static_cast<int>((i >> queue_width) & 1),
                       static_cast<int>((i >> (queue_width + 1)) & 1), a});
    }
    std::sort(out.begin(), out.end(),
              [](const DemoAmplitude& x, const DemoAmplitude& y) {
                  return std::abs(x.amplitude) > std::abs(y.amplitude);
              });
    return out;
}

nlohmann::json amplitudes_json(const std::vector<DemoAmplitude>& amps) {
    nlohmann::json arr = nlohmann::json::array();
    for (const DemoAmplitude& a : amps)
        arr.push_back({{"queue", a.queue},
                       {"a_arrival", a.arrival_flag},
                       {"a_service", a.service_flag},
                       {"amplitude", a.amplitude}});
    return arr;
}

std::string amplitude_label(const DemoAmplitude& a) {
    std::string q = {static_cast<char>('0' + ((a.queue >> 1) & 1)),
                     static_cast<char>('0' + (a.queue & 1))};
    std::string anc = {static_cast<char>('0' + a.arrival_flag),
                       static_cast<char>('0' + a.service_flag)};
    return "|" + q + ";" + anc + ">";
}

}  // namespace

ScenarioGrid ScenarioGrid::defaults() {
    ScenarioGrid grid;
    for (int i = 2; i <= 12; ++i) grid.K_list.push_back((1 << i) - 1);
    grid.lambda_list = {0.1, 0.5, 0.95};
    grid.dists = {"normal", "uniform", "exponential", "phase_type"};
    return grid;
}

void ScenarioGrid::validate() const {
    if (K_list.empty() || lambda_list.empty() || dists.empty())
        throw std::invalid_argument("grid lists must be nonempty");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    for (int k : K_list)
        if (k < 1) throw std::invalid_argument("capacities must be >= 1");
    for (double l : lambda_list)
        if (!(l > 0.0)) throw std::invalid_argument("lambdas must be > 0");
    for (const std::string& d : dists) dist_from_name(d, 0.5);  // throws on unknown names
}

ScenarioGrid grid_from_json(const nlohmann::json& j) {
    ScenarioGrid grid = ScenarioGrid::defaults();
    if (j.contains("K_list")) grid.K_list = j.at("K_list").get<std::vector<int>>();
    if (j.contains("lambda_list"))
        grid.lambda_list = j.at("lambda_list").get<std::vector<double>>();
    if (j.contains("dists")) grid.dists = j.at("dists").get<std::vector<std::string>>();
    if (j.contains("shots")) grid.shots = j.at("shots").get<std::uint64_t>();
    if (j.contains("des_events")) grid.des_events = j.at("des_events").get<std::uint64_t>();
    if (j.contains("trials")) grid.trials = j.at("trials").get<int>();
    if (j.contains("T")) grid.slices = j.at("T").get<int>();
    if (j.contains("dt")) grid.dt = j.at("dt").get<double>();
    if (j.contains("schedule"))
        grid.schedule = j.at("schedule").get<std::string>() == "paper"
                            ? GroverSchedule::kPaperFormula
                            : GroverSchedule::kOptimal;
    if (j.contains("epsilon0")) grid.epsilon0 = j.at("epsilon0").get<int>();
    if (j.contains("rejection")) grid.rejection = j.at("rejection").get<bool>();
    if (j.contains("seed")) grid.seed = j.at("seed").get<std::uint64_t>();
    grid.validate();
    return grid;
}

GridRow run_grid_cell(const GridCellSpec& spec) {
    const QueueParams params = params_for_cell(spec);
    const SimulationResult sim = qmg1_run(params);

    DesConfig des_config;
    des_config.lambda = spec.lambda;
    des_config.service = params.service;
    des_config.capacity = spec.capacity;
    des_config.horizon_events = spec.des_events;
    des_config.seed = derive_seed(spec.seed, 1);
    const DesResult des = run_des(des_config);

    GridRow row;
    row.spec = spec;
    row.scenario_id = scenario_id(spec);
    row.qubits = params.qubits();
    row.engine = params.engine == Engine::kExact ? "exact" : "traced";
    row.metrics = make_metric_report(sim.p_q, des.p_c, sim.L_hat, des.L, sim.W_hat, des.W);
    row.l_quantum = sim.L_hat;
    row.l_des = des.L;
    row.w_quantum = sim.W_hat;
    row.w_des = des.W;
    row.p_block_quantum = sim.p_block_hat;
    row.p_block_des = des.p_block;
    row.rounds_used = sim.R_used;
    row.p_succ = sim.p_succ_measured;
    row.acceptance_rate = sim.acceptance_rate;
    row.stat_bounds = statistical_bounds(spec.shots, 0.05, spec.capacity);
    const Moments moments = params.service.moments();
    row.disc_bound = discretization_bound(spec.lambda, moments.second_moment, params.time_step());
    const double variance = moments.second_moment - moments.mean * moments.mean;
    row.disc_bound_proof =
        discretization_bound_proof_form(spec.lambda, moments.mean, variance, params.time_step());
    return row;
}

std::vector<GridRow> run_grid(const ScenarioGrid& grid, int threads) {
    grid.validate();
    std::vector<GridCellSpec> specs;
    std::uint64_t stream = 0;
    for (int k : grid.K_list)
        for (double lambda : grid.lambda_list)
            for (const std::string& dist : grid.dists)
                for (int trial = 0; trial < grid.trials; ++trial) {
                    GridCellSpec spec;
                    spec.capacity = k;
                    spec.lambda = lambda;
                    spec.dist_name = dist;
                    spec.trial = trial;
                    spec.shots = grid.shots;
                    spec.des_events = grid.des_events;
                    spec.slices = grid.slices;
                    spec.dt = grid.dt;
                    spec.epsilon0 = grid.epsilon0;
                    spec.schedule = grid.schedule;
                    spec.rejection = grid.rejection;
                    spec.seed = derive_seed(grid.seed, stream++);
                    specs.push_back(spec);
                }
    std::vector<GridRow> rows(specs.size());
    run_pool(specs.size(), threads, [&](std::size_t i) { rows[i] = run_grid_cell(specs[i]); });
    return rows;
}

std::string grid_csv_header() {
    return "scenario_id,trial,qubits,K,lambda,dist,engine,seed,F,JSD,tv_halved,l1_gap,"
           "L_quantum,L_des,W_quantum,W_des,rel_err_L,rel_err_W,p_block_quantum,p_block_des,"
           "R_used,p_succ,acceptance_rate,bound_tv_dkw,bound_tv_union,bound_tv_main,"
           "bound_tv_expected,bound_disc,bound_disc_proof";
}

std::string grid_row_csv(const GridRow& row) {
    std::ostringstream os;
    os << row.scenario_id << ',' << row.spec.trial << ',' << row.qubits << ','
       << row.spec.capacity << ',' << format_double(row.spec.lambda) << ',' << row.spec.dist_name
       << ',' << row.engine << ',' << row.spec.seed << ',' << format_double(row.metrics.fidelity)
       << ',' << format_double(row.metrics.jsd) << ',' << format_double(row.metrics.tv_halved)
       << ',' << format_double(row.metrics.l1_gap) << ',' << format_double(row.l_quantum) << ','
       << format_double(row.l_des) << ',' << format_double(row.w_quantum) << ','
       << format_double(row.w_des) << ',' << format_double(row.metrics.rel_err_L) << ','
       << format_double(row.metrics.rel_err_W) << ',' << format_double(row.p_block_quantum) << ','
       << format_double(row.p_block_des) << ',' << row.rounds_used << ','
       << format_double(row.p_succ) << ',' << format_double(row.acceptance_rate) << ','
       << format_double(row.stat_bounds.tv_dkw) << ',' << format_double(row.stat_bounds.tv_union)
       << ',' << format_double(row.stat_bounds.tv_main) << ','
       << format_double(row.stat_bounds.tv_expected) << ',' << format_double(row.disc_bound)
       << ',' << format_double(row.disc_bound_proof);
    return os.str();
}

std::vector<SensitivityRow> run_sensitivity(const SensitivityConfig& config, int threads) {
    if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
    struct Job {
        double lambda;
        int trial;
        std::uint64_t seed;
        std::uint64_t des_seed;
    };
    std::vector<Job> jobs;
    std::uint64_t stream = 0;
    for (int step = 1; step <= 9; ++step) {
        const double lambda = step * 0.1;
        const std::uint64_t des_seed = derive_seed(config.seed, 0xDE500000ULL + step);
        for (int trial = 0; trial < config.trials; ++trial)
            jobs.push_back({lambda, trial, derive_seed(config.seed, stream++), des_seed});
    }
    std::vector<SensitivityRow> rows(jobs.size());
    run_pool(jobs.size(), threads, [&](std::size_t i) {
        const Job& job = jobs[i];
        GridCellSpec spec;
        spec.capacity = config.capacity;
        spec.lambda = job.lambda;
        spec.dist_name = config.dist_name;
        spec.trial = job.trial;
        spec.shots = config.shots;
        spec.des_events = config.des_events;
        spec.slices = config.slices;
        spec.dt = config.dt;
        spec.seed = job.seed;
        const QueueParams params = params_for_cell(spec);
        const SimulationResult sim = qmg1_run(params);
        DesConfig des_config;
        des_config.lambda = job.lambda;
        des_config.service = params.service;
        des_config.capacity = config.capacity;
        des_config.horizon_events = config.des_events;
        des_config.seed = job.des_seed;
        const DesResult des = run_des(des_config);
        SensitivityRow row;
        row.lambda = job.lambda;
        row.trial = job.trial;
        row.seed = job.seed;
        row.fidelity = fidelity(sim.p_q, des.p_c);
        row.fidelity_residual = 1.0 - row.fidelity;
        row.log10_fidelity_residual = log10_offset(row.fidelity_residual);
        row.jsd = jsd(sim.p_q, des.p_c);
        row.log10_jsd = log10_offset(row.jsd);
        rows[i] = row;
    });
    return rows;
}

std::string sensitivity_csv_header() {
    return "lambda,trial,seed,F,F_R,log10_F_R,JSD,log10_JSD";
}

std::string sensitivity_row_csv(const SensitivityRow& row) {
    std::ostringstream os;
    os << format_double(row.lambda) << ',' << row.trial << ',' << row.seed << ','
       << format_double(row.fidelity) << ',' << format_double(row.fidelity_residual) << ','
       << format_double(row.log10_fidelity_residual) << ',' << format_double(row.jsd) << ','
       << format_double(row.log10_jsd);
    return os.str();
}

StateVector demo_slice_state() {
    const DemoReport report = run_demo();
    const int q = 2;
    StateVector state = StateVector::embed_sqrt(report.steady_state, q + 2);
    state.apply_1q(ry_gate(report.theta_arrival), q);
    state.apply_1q(ry_gate(report.theta_service), q + 1);
    state.apply_basis_permutation(guarded_update_permutation(q + 2, {0, q}, q, q + 1, 3));
    return state;
}

DemoReport run_demo() {
    DemoReport report;
    QueueParams params;
    params.lambda = 0.25;
    params.service = ServiceDistribution::exponential(1.0);
    params.capacity = 3;
    params.dt = 0.3;
    params.slices = 1;

    report.theta_arrival = theta_for_prob(-std::expm1(-params.lambda * params.dt));
    report.theta_service = theta_for_prob(params.service.cdf(params.dt));
    report.ry_arrival = ry_matrix(report.theta_arrival);
    report.ry_service = ry_matrix(report.theta_service);
    report.steady_state = mm1k_steady_state(params.utilization(), params.capacity);
    for (double p : report.steady_state) report.v0.push_back(std::sqrt(p));

    const int q = params.qubits();
    StateVector state = StateVector::embed_sqrt(report.steady_state, q + 2);
    state.apply_1q(ry_gate(report.theta_arrival), q);
    report.post_arrival = nonzero_amplitudes(state, q);

    state.apply_1q(ry_gate(report.theta_service), q + 1);
    const auto perm = guarded_update_permutation(q + 2, {0, q}, q, q + 1, params.capacity);
    state.apply_basis_permutation(perm);
    report.post_update = nonzero_amplitudes(state, q);

    const std::vector<double> marg = state.marginal({0, q});
    report.queue_marginal.assign(marg.begin(), marg.begin() + params.capacity + 1);
    const TvPair tv = tv_distance(report.queue_marginal, report.steady_state);
    report.tv_halved = tv.halved;
    report.tv_l1 = tv.l1;
    return report;
}

std::string demo_text(const DemoReport& report) {
    std::ostringstream os;
    os << "Single-slice walkthrough: lambda=0.25, exponential service (mu=1), K=3, dt=0.3\n\n";
    os << "steady state P_c = [";
    for (std::size_t i = 0; i < report.steady_state.size(); ++i)
        os << (i ? ", " : "") << format_double(report.steady_state[i]);
    os << "]\nv0 = sqrt(P_c) = [";
    for (std::size_t i = 0; i < report.v0.size(); ++i)
        os << (i ? ", " : "") << format_double(report.v0[i]);
    os << "]\n\n";
    os << "theta_arrival = " << format_double(report.theta_arrival)
       << "   theta_service = " << format_double(report.theta_service) << "\n";
    auto print_matrix = [&os](const char* name, const std::array<double, 4>& m) {
        os << name << " = [[" << format_double(m[0]) << ", " << format_double(m[1]) << "], ["
           << format_double(m[2]) << ", " << format_double(m[3]) << "]]\n";
    };
    print_matrix("R_y(theta_arrival)", report.ry_arrival);
    print_matrix("R_y(theta_service)", report.ry_service);

    os << "\namplitudes after arrival rotation (queue;a_arrival a_service):\n";
    for (const DemoAmplitude& a : report.post_arrival)
        os << "  " << amplitude_label(a) << "  " << format_double(a.amplitude) << "\n";
    os << "\namplitudes after guarded INC/DEC:\n";
    for (const DemoAmplitude& a : report.post_update)
        os << "  " << amplitude_label(a) << "  " << format_double(a.amplitude) << "\n";

    os << "\nqueue marginal after one slice vs steady state:\n";
    os << "  n    P_q        P_c        |diff|\n";
    for (std::size_t n = 0; n < report.queue_marginal.size(); ++n) {
        os << "  " << n << "    " << format_double(report.queue_marginal[n]) << "  "
           << format_double(report.steady_state[n]) << "  "
           << format_double(std::abs(report.queue_marginal[n] - report.steady_state[n])) << "\n";
    }
    os << "total variation: halved = " << format_double(report.tv_halved)
       << ", unhalved L1 = " << format_double(report.tv_l1) << "\n";
    return os.str();
}

nlohmann::json demo_json(const DemoReport& report) {
    return {{"theta_arrival", report.theta_arrival},
            {"theta_service", report.theta_service},
            {"ry_arrival", report.ry_arrival},
            {"ry_service", report.ry_service},
            {"steady_state", report.steady_state},
            {"v0", report.v0},
            {"post_arrival", amplitudes_json(report.post_arrival)},
            {"post_update", amplitudes_json(report.post_update)},
            {"queue_marginal", report.queue_marginal},
            {"tv_halved", report.tv_halved},
            {"tv_l1", report.tv_l1}};
}

}  // namespace qmg1
