#include "qmg1/io.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace qmg1 {

using nlohmann::json;

std::string format_double(double value) {
    std::array<char, 32> buf;
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

json dist_to_json(const ServiceDistribution& dist) {
    return std::visit(
        [](const auto& d) -> json {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return {{"type", "exponential"}, {"rate", d.rate}};
            } else if constexpr (std::is_same_v<T, Normal>) {
                return {{"type", "normal"}, {"mean", d.mean}, {"variance", d.variance}};
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return {{"type", "uniform"}, {"lo", d.lo}, {"hi", d.hi}};
            } else if constexpr (std::is_same_v<T, Deterministic>) {
                return {{"type", "deterministic"}, {"d", d.value}};
            } else {
                json t = json::array();
                for (const auto& row : d.sub_generator) t.push_back(row);
                return {{"type", "phase_type"}, {"alpha", d.alpha}, {"T", t}};
            }
        },
        dist.law());
}

ServiceDistribution dist_from_json(const json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw std::invalid_argument("distribution record needs a \"type\" tag");
    const std::string type = j.at("type").get<std::string>();
    if (type == "exponential") return ServiceDistribution::exponential(j.at("rate").get<double>());
    if (type == "normal")
        return ServiceDistribution::normal(j.at("mean").get<double>(),
                                           j.at("variance").get<double>());
    if (type == "uniform")
        return ServiceDistribution::uniform(j.at("lo").get<double>(), j.at("hi").get<double>());
    if (type == "deterministic")
        return ServiceDistribution::deterministic(j.at("d").get<double>());
    if (type == "phase_type") {
        std::array<double, 3> alpha{};
        std::array<std::array<double, 3>, 3> t{};
        const auto& ja = j.at("alpha");
        const auto& jt = j.at("T");
        if (ja.size() != 3 || jt.size() != 3)
            throw std::invalid_argument("phase_type needs alpha[3] and T[3][3]");
        for (int i = 0; i < 3; ++i) {
            alpha[i] = ja[i].get<double>();
            if (jt[i].size() != 3) throw std::invalid_argument("phase_type needs T[3][3]");
            for (int k = 0; k < 3; ++k) t[i][k] = jt[i][k].get<double>();
        }
        return ServiceDistribution::phase_type(alpha, t);
    }
    throw std::invalid_argument("unknown distribution type: " + type);
}

ServiceDistribution dist_from_name(const std::string& name, double lambda) {
    if (name == "exponential") return ServiceDistribution::exponential(1.0);
    if (name == "normal") return ServiceDistribution::normal(1.0, 0.05);
    if (name == "uniform") return ServiceDistribution::uniform(0.5, 1.5);
    if (name == "deterministic") return ServiceDistribution::deterministic(1.0);
    if (name == "phase_type") return phase_type_chain(lambda);
    throw std::invalid_argument("unknown distribution name: " + name);
}

namespace {

json counts_to_json(const GateCensus::Counts& c) {
    return {{"hadamards", c.hadamards},
            {"rotations_1q", c.rotations_1q},
            {"multiplexed_rotations", c.multiplexed_rotations},
            {"guarded_shifts", c.guarded_shifts},
            {"phase_flips", c.phase_flips},
            {"reflections", c.reflections},
            {"total", c.total()}};
}

Engine engine_from_string(const std::string& s) {
    if (s == "exact") return Engine::kExact;
    if (s == "traced") return Engine::kTraced;
    throw std::invalid_argument("unknown engine: " + s);
}

ServiceMode service_mode_from_string(const std::string& s) {
    if (s == "per_slice_cdf") return ServiceMode::kPerSliceCdf;
    if (s == "residual_hazard") return ServiceMode::kResidualHazard;
    throw std::invalid_argument("unknown service mode: " + s);
}

CapMode cap_mode_from_string(const std::string& s) {
    if (s == "sign_flip") return CapMode::kSignFlip;
    if (s == "two_reflection") return CapMode::kTwoReflection;
    throw std::invalid_argument("unknown cap mode: " + s);
}

GroverSchedule schedule_from_string(const std::string& s) {
    if (s == "paper") return GroverSchedule::kPaperFormula;
    if (s == "optimal") return GroverSchedule::kOptimal;
    throw std::invalid_argument("unknown schedule: " + s);
}

}  // namespace

json census_to_json(const GateCensus& census) {
    return {{"R_used", census.rounds},
            {"slice", counts_to_json(census.slice)},
            {"cap", counts_to_json(census.cap)},
            {"diffusion", counts_to_json(census.diffusion)},
            {"total", counts_to_json(census.total())}};
}

json result_to_json(const SimulationResult& result) {
    return {{"raw_histogram", result.raw_histogram},
            {"accepted_histogram", result.accepted_histogram},
            {"p_q", result.p_q},
            {"L_hat", result.L_hat},
            {"W_hat", result.W_hat},
            {"p_block_hat", result.p_block_hat},
            {"R_used", result.R_used},
            {"p_succ_measured", result.p_succ_measured},
            {"acceptance_rate", result.acceptance_rate},
            {"gate_census", census_to_json(result.gate_census)}};
}

json des_result_to_json(const DesResult& result) {
    return {{"p_c", result.p_c},
            {"L", result.L},
            {"W_sojourn", result.W},
            {"p_block", result.p_block},
            {"sim_time", result.sim_time},
            {"arrivals", result.arrivals},
            {"served", result.served},
            {"blocked", result.blocked},
            {"in_system_end", result.in_system_end}};
}

json params_to_json(const QueueParams& params) {
    return {{"lambda", params.lambda},
            {"service", dist_to_json(params.service)},
            {"K", params.capacity},
            {"dt", params.dt},
            {"T", params.slices},
            {"shots", params.shots},
            {"epsilon0", params.epsilon0},
            {"engine", params.engine == Engine::kExact ? "exact" : "traced"},
            {"service_mode", params.service_mode == ServiceMode::kPerSliceCdf
                                 ? "per_slice_cdf"
                                 : "residual_hazard"},
            {"cap_mode",
             params.cap_mode == CapMode::kSignFlip ? "sign_flip" : "two_reflection"},
            {"schedule",
             params.schedule == GroverSchedule::kPaperFormula ? "paper" : "optimal"},
            {"rejection", params.rejection},
            {"seed", params.seed}};
}

QueueParams params_from_json(const json& j) {
    QueueParams params;
    params.lambda = j.at("lambda").get<double>();
    params.service = dist_from_json(j.at("service"));
    params.capacity = j.at("K").get<int>();
    if (j.contains("dt")) params.dt = j.at("dt").get<double>();
    if (j.contains("T")) params.slices = j.at("T").get<int>();
    if (j.contains("shots")) params.shots = j.at("shots").get<std::uint64_t>();
    if (j.contains("epsilon0")) params.epsilon0 = j.at("epsilon0").get<int>();
    if (j.contains("engine")) params.engine = engine_from_string(j.at("engine").get<std::string>());
    if (j.contains("service_mode"))
        params.service_mode = service_mode_from_string(j.at("service_mode").get<std::string>());
    if (j.contains("cap_mode"))
        params.cap_mode = cap_mode_from_string(j.at("cap_mode").get<std::string>());
    if (j.contains("schedule"))
        params.schedule = schedule_from_string(j.at("schedule").get<std::string>());
    if (j.contains("rejection")) {
        const auto& r = j.at("rejection");
        params.rejection = r.is_boolean() ? r.get<bool>() : r.get<std::string>() == "on";
    }
    if (j.contains("seed")) params.seed = j.at("seed").get<std::uint64_t>();
    params.validate();
    return params;
}

}  // namespace qmg1
