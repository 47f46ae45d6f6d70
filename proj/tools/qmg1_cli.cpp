#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmg1/des.hpp"
#include "qmg1/experiment.hpp"
#include "qmg1/io.hpp"
#include "qmg1/seeding.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

nlohmann::json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("bad config " + path + ": " + e.what());
    }
    return j;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    out << body;
    if (!out) throw IoError("write failed: " + path);
}

void emit(const std::optional<std::string>& out_path, const std::string& body) {
    if (out_path)
        write_file(*out_path, body);
    else
        std::cout << body;
}

std::string rows_to_csv(const std::string& header, const std::vector<std::string>& rows) {
    std::string csv = header + "\n";
    for (const std::string& row : rows) csv += row + "\n";
    return csv;
}

qmg1::QueueParams params_from_options(const std::optional<std::string>& config_path,
                                      const std::optional<std::uint64_t>& seed,
                                      const std::optional<std::uint64_t>& shots,
                                      const std::optional<std::string>& engine,
                                      const std::optional<std::string>& schedule,
                                      const std::optional<std::string>& rejection) {
    nlohmann::json j = config_path ? load_config(*config_path) : nlohmann::json::object();
    if (!j.contains("lambda")) j["lambda"] = 0.25;
    if (!j.contains("service")) j["service"] = {{"type", "exponential"}, {"rate", 1.0}};
    if (!j.contains("K")) j["K"] = 3;
    if (!j.contains("T")) j["T"] = 100;
    if (!j.contains("dt")) j["dt"] = 0.1;
    if (seed) j["seed"] = *seed;
    if (shots) j["shots"] = *shots;
    if (engine) j["engine"] = *engine;
    if (schedule) j["schedule"] = *schedule == "paper" ? "paper" : "optimal";
    if (rejection) j["rejection"] = (*rejection == "on");
    return qmg1::params_from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-buffer M/G/1/K simulation toolkit: amplitude-amplified "
                 "statevector pipeline, discrete-event baseline, analytic bounds"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::string> config_path;
    std::optional<std::string> out_path;
    std::optional<std::uint64_t> seed_flag;
    std::optional<std::uint64_t> shots_flag;
    std::optional<std::string> engine_flag;
    std::optional<std::string> schedule_flag;
    std::optional<std::string> rejection_flag;
    int threads = 0;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", out_path, "output path (stdout when omitted)");
    app.add_option("--seed", seed_flag, "base seed (overrides config)");
    app.add_option("--shots", shots_flag, "measurement shots (overrides config)");
    app.add_option("--engine", engine_flag, "exact|traced")
        ->check(CLI::IsMember({"exact", "traced"}));
    app.add_option("--schedule", schedule_flag, "paper|optimal")
        ->check(CLI::IsMember({"paper", "optimal"}));
    app.add_option("--rejection", rejection_flag, "on|off")
        ->check(CLI::IsMember({"on", "off"}));
    app.add_option("--threads", threads, "worker threads (0 = hardware)");

    auto* demo_cmd = app.add_subcommand("demo", "single-slice walkthrough with exact values");
    std::optional<std::string> demo_json_path;
    std::optional<std::string> demo_dump_path;
    demo_cmd->add_option("--json-out", demo_json_path, "also write the report as JSON");
    demo_cmd->add_option("--dump-state", demo_dump_path,
                         "dump the slice statevector as index,re,im rows");

    auto* grid_cmd = app.add_subcommand("grid", "scenario grid -> CSV");
    auto* sens_cmd = app.add_subcommand("sensitivity", "arrival-rate sweep -> CSV");
    std::string sens_dist = "phase_type";
    int sens_capacity = 31;
    int sens_trials = 100;
    sens_cmd->add_option("--dist", sens_dist, "service law name");
    sens_cmd->add_option("--K", sens_capacity, "capacity");
    sens_cmd->add_option("--trials", sens_trials, "trials per arrival rate");

    auto* census_cmd = app.add_subcommand("census", "logical gate counts -> JSON");
    auto* des_cmd = app.add_subcommand("des", "discrete-event baseline -> JSON");
    double des_lambda = 0.25;
    int des_capacity = 3;
    std::uint64_t des_events = 100000;
    std::string des_dist = "exponential";
    bool des_csv = false;
    des_cmd->add_option("--lambda", des_lambda, "arrival rate");
    des_cmd->add_option("--K", des_capacity, "capacity");
    des_cmd->add_option("--events", des_events, "event horizon");
    des_cmd->add_option("--dist", des_dist, "service law name");
    des_cmd->add_flag("--csv", des_csv, "emit the CSV row form");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (demo_cmd->parsed()) {
            const qmg1::DemoReport report = qmg1::run_demo();
            emit(out_path, qmg1::demo_text(report));
            if (demo_json_path) write_file(*demo_json_path, qmg1::demo_json(report).dump(2) + "\n");
            if (demo_dump_path) {
                std::ofstream dump(*demo_dump_path, std::ios::binary);
                if (!dump) throw IoError("cannot open output file: " + *demo_dump_path);
                qmg1::demo_slice_state().write_amplitudes_csv(dump);
            }
            return kExitOk;
        }
        if (grid_cmd->parsed()) {
            if (!seed_flag && !(config_path && load_config(*config_path).contains("seed")))
                throw std::invalid_argument("grid runs require an explicit --seed");
            nlohmann::json j = config_path ? load_config(*config_path) : nlohmann::json::object();
            if (seed_flag) j["seed"] = *seed_flag;
            if (shots_flag) j["shots"] = *shots_flag;
            if (schedule_flag) j["schedule"] = *schedule_flag;
            if (rejection_flag) j["rejection"] = (*rejection_flag == "on");
            const qmg1::ScenarioGrid grid = qmg1::grid_from_json(j);
            const std::vector<qmg1::GridRow> rows = qmg1::run_grid(grid, threads);
            std::vector<std::string> lines;
            lines.reserve(rows.size());
            for (const qmg1::GridRow& row : rows) lines.push_back(qmg1::grid_row_csv(row));
            emit(out_path, rows_to_csv(qmg1::grid_csv_header(), lines));
            return kExitOk;
        }
        if (sens_cmd->parsed()) {
            qmg1::SensitivityConfig config;
            config.dist_name = sens_dist;
            config.capacity = sens_capacity;
            config.trials = sens_trials;
            if (shots_flag) config.shots = *shots_flag;
            if (seed_flag) config.seed = *seed_flag;
            const auto rows = qmg1::run_sensitivity(config, threads);
            std::vector<std::string> lines;
            lines.reserve(rows.size());
            for (const auto& row : rows) lines.push_back(qmg1::sensitivity_row_csv(row));
            emit(out_path, rows_to_csv(qmg1::sensitivity_csv_header(), lines));
            return kExitOk;
        }
        if (census_cmd->parsed()) {
            const qmg1::QueueParams params = params_from_options(
                config_path, seed_flag, shots_flag, engine_flag, schedule_flag, rejection_flag);
            emit(out_path, qmg1::census_to_json(qmg1::gate_census(params)).dump(2) + "\n");
            return kExitOk;
        }
        if (des_cmd->parsed()) {
            qmg1::DesConfig config;
            config.lambda = des_lambda;
            config.capacity = des_capacity;
            config.horizon_events = des_events;
            config.service = qmg1::dist_from_name(des_dist, des_lambda);
            if (seed_flag) config.seed = *seed_flag;
            const qmg1::DesResult result = qmg1::run_des(config);
            if (des_csv) {
                const qmg1::ProbVector analytic =
                    qmg1::mm1k_steady_state(config.lambda * config.service.moments().mean,
                                            config.capacity);
                const qmg1::TvPair tv = qmg1::tv_distance(result.p_c, analytic);
                std::string csv = "scenario_id,lambda,dist,K,L,W,p_block,tv_vs_analytic\n";
                csv += "K" + std::to_string(des_capacity) + "_lam" +
                       qmg1::format_double(des_lambda) + "_" + des_dist + "," +
                       qmg1::format_double(des_lambda) + "," + des_dist + "," +
                       std::to_string(des_capacity) + "," + qmg1::format_double(result.L) + "," +
                       qmg1::format_double(result.W) + "," + qmg1::format_double(result.p_block) +
                       "," + qmg1::format_double(tv.halved) + "\n";
                emit(out_path, csv);
            } else {
                emit(out_path, qmg1::des_result_to_json(result).dump(2) + "\n");
            }
            return kExitOk;
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
