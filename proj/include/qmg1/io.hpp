#pragma once

#include <string>

#include <json.hpp>

#include "qmg1/circuit.hpp"
#include "qmg1/des.hpp"

namespace qmg1 {

/// Locale-free shortest round-trip decimal; shared by every CSV/JSON writer
/// so repeated runs stay byte-identical.
std::string format_double(double value);

nlohmann::json dist_to_json(const ServiceDistribution& dist);

/// Parses the tagged-record form, e.g. {"type":"uniform","lo":0.5,"hi":1.5}.
/// Throws std::invalid_argument on malformed input.
ServiceDistribution dist_from_json(const nlohmann::json& j);

/// Symbolic name -> concrete law at service rate 1; "phase_type" couples its
/// generator to the cell arrival rate.
ServiceDistribution dist_from_name(const std::string& name, double lambda);

nlohmann::json census_to_json(const GateCensus& census);
nlohmann::json result_to_json(const SimulationResult& result);
nlohmann::json des_result_to_json(const DesResult& result);

nlohmann::json params_to_json(const QueueParams& params);
QueueParams params_from_json(const nlohmann::json& j);

}  // namespace qmg1
