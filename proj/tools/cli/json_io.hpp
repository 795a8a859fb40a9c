#pragma once

// JSON views of solver results, certificates and experiment reports. Empty
// optionals are omitted; vectors are arrays in index order.

#include "genlasso/certify.hpp"
#include "genlasso/dgp.hpp"
#include "genlasso/existence.hpp"
#include "genlasso/experiments.hpp"

#include <json.hpp>

namespace genlasso::cli {

using Json = nlohmann::ordered_json;

Json to_json(const Vector& v);
Json to_json(const NumericTolerances& tol);
Json to_json(const SolveResult& r);
Json to_json(const Witness& w);
Json to_json(const ExistenceReport& r);
Json to_json(const UniquenessCertificate& c);
Json to_json(const DgpReport& r);
Json to_json(const StiemkeResult& r);
Json to_json(const GraphSpec& g);
Json to_json(const TrialConfig& c);
Json to_json(const MonteCarloSummary& s);
Json to_json(const StabilityReport& r);
Json to_json(const InvarianceReport& r);

Vector vector_from_json(const Json& j);
GraphSpec graph_from_json(const Json& j);
/// Missing keys keep their TrialConfig defaults; unknown keys are rejected.
TrialConfig trial_config_from_json(const Json& j);
/// Reads back what to_json(SolveResult) wrote.
SolveResult solve_result_from_json(const Json& j);

Json read_json_file(const std::string& path);

}  // namespace genlasso::cli
