#include "cli/json_io.hpp"

#include "genlasso/errors.hpp"

#include <fstream>
#include <set>

namespace genlasso::cli {
namespace {

template <class T>
Json ints(const std::vector<T>& v) {
  Json a = Json::array();
  for (const T& x : v) a.push_back(x);
  return a;
}

template <class T>
std::vector<T> ints_from(const Json& j) {
  std::vector<T> out;
  for (const Json& x : j) out.push_back(x.get<T>());
  return out;
}

Json to_json(const VerdictCounts& c) {
  return Json{{"unique", c.unique}, {"non_unique", c.non_unique}, {"undetermined", c.undetermined}};
}

Json to_json(const KktReport& k) {
  return Json{{"stationarity_residual", k.stationarity_residual},
              {"subgradient_violation", k.subgradient_violation},
              {"feasible", k.feasible}};
}

}  // namespace

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected a JSON array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError("expected a JSON array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Json to_json(const NumericTolerances& tol) {
  return Json{{"rank_tol", tol.rank_tol}, {"residual_tol", tol.residual_tol}, {"sign_tol", tol.sign_tol}};
}

Json to_json(const SolveResult& r) {
  return Json{{"loss", to_string(r.loss)},
              {"beta", to_json(r.beta)},
              {"gamma", to_json(r.gamma)},
              {"fit", to_json(r.fit)},
              {"dual_u", to_json(r.dual_u)},
              {"dual_v", to_json(r.dual_v)},
              {"B", ints(r.boundary_set)},
              {"s", ints(r.boundary_signs)},
              {"A", ints(r.active_set)},
              {"r", ints(r.active_signs)},
              {"kkt", to_json(r.kkt)},
              {"objective", r.objective},
              {"duality_gap", r.duality_gap},
              {"iterations", r.iterations},
              {"flagged_non_unique", r.flagged_non_unique}};
}

SolveResult solve_result_from_json(const Json& j) {
  try {
    SolveResult r;
    r.loss = parse_loss_family(j.at("loss").get<std::string>());
    r.beta = vector_from_json(j.at("beta"));
    r.gamma = vector_from_json(j.at("gamma"));
    r.fit = vector_from_json(j.at("fit"));
    r.dual_u = vector_from_json(j.at("dual_u"));
    r.dual_v = vector_from_json(j.at("dual_v"));
    r.boundary_set = ints_from<int>(j.at("B"));
    r.boundary_signs = ints_from<int>(j.at("s"));
    r.active_set = ints_from<int>(j.at("A"));
    r.active_signs = ints_from<int>(j.at("r"));
    const Json& k = j.at("kkt");
    r.kkt.stationarity_residual = k.at("stationarity_residual").get<double>();
    r.kkt.subgradient_violation = k.at("subgradient_violation").get<double>();
    r.kkt.feasible = k.at("feasible").get<bool>();
    r.objective = j.at("objective").get<double>();
    r.duality_gap = j.at("duality_gap").get<double>();
    r.iterations = j.at("iterations").get<int>();
    r.flagged_non_unique = j.at("flagged_non_unique").get<bool>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed result JSON: ") + e.what());
  }
}

Json to_json(const Witness& w) {
  return Json{{"direction", to_json(w.direction)},
              {"step", w.step},
              {"beta2", to_json(w.beta2)},
              {"gamma2", to_json(w.gamma2)},
              {"fit_discrepancy", w.fit_discrepancy},
              {"penalty_discrepancy", w.penalty_discrepancy}};
}

Json to_json(const ExistenceReport& r) {
  Json j{{"exists", to_string(r.exists)}, {"condition_checked", to_string(r.condition_checked)}};
  if (r.witness) j["witness"] = to_json(*r.witness);
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

Json to_json(const UniquenessCertificate& c) {
  Json j{{"verdict", to_string(c.verdict)},
         {"loss", to_string(c.loss)},
         {"boundary_set_used", ints(c.boundary_set_used)},
         {"boundary_signs_used", ints(c.boundary_signs_used)},
         {"rank_xu", c.rank_xu},
         {"k_b", c.k_b},
         {"null_intersection_dim", c.null_intersection_dim}};
  if (c.witness) j["witness"] = to_json(*c.witness);
  if (c.existence) j["existence"] = to_json(*c.existence);
  if (c.solution) j["solution"] = to_json(*c.solution);
  if (!c.notes.empty()) j["notes"] = c.notes;
  return j;
}

Json to_json(const DgpReport& r) {
  Json j{{"in_position", r.in_position},
         {"enumeration_count", r.enumeration_count},
         {"truncated", r.truncated}};
  if (r.violation) {
    const DgpViolation& v = *r.violation;
    j["violation"] = Json{{"B", ints(v.B)},
                          {"s", ints(v.s)},
                          {"tuple", ints(v.tuple)},
                          {"kind", to_string(v.kind)},
                          {"residual", v.residual}};
  }
  return j;
}

Json to_json(const StiemkeResult& r) {
  return Json{{"feasible", r.feasible == StiemkeSystem::system1 ? "system1" : "system2"},
              {"witness", to_json(r.witness)}};
}

Json to_json(const GraphSpec& g) {
  Json edges = Json::array();
  for (const auto& [a, b] : g.edges) edges.push_back(Json::array({a, b}));
  return Json{{"nodes", g.node_count}, {"edges", edges}};
}

GraphSpec graph_from_json(const Json& j) {
  try {
    GraphSpec g;
    g.node_count = j.at("nodes").get<int>();
    for (const Json& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw InputError("graph edge must be a pair [i, j]");
      g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    g.validate();
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed graph JSON: ") + e.what());
  }
}

Json to_json(const TrialConfig& c) {
  Json j{{"n", c.n},
         {"p", c.p},
         {"penalty", c.penalty},
         {"loss", to_string(c.loss)},
         {"lambda", c.lambda},
         {"trials", c.trials},
         {"seed", c.seed},
         {"perturbation_eps", c.perturbation_eps},
         {"inject_duplicate_column", c.inject_duplicate_column}};
  if (c.graph) j["graph"] = to_json(*c.graph);
  return j;
}

TrialConfig trial_config_from_json(const Json& j) {
  static const std::set<std::string> known{"n",    "p",      "penalty", "graph",
                                           "loss", "lambda", "trials",  "seed",
                                           "perturbation_eps", "inject_duplicate_column",
                                           "threads"};
  if (!j.is_object()) throw InputError("trial config must be a JSON object");
  TrialConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (!known.count(key)) throw InputError("unknown trial config key '" + key + "'");
    }
    c.n = j.value("n", c.n);
    c.p = j.value("p", c.p);
    c.penalty = j.value("penalty", c.penalty);
    if (j.contains("graph")) c.graph = graph_from_json(j["graph"]);
    if (j.contains("loss")) c.loss = parse_loss_family(j["loss"].get<std::string>());
    c.lambda = j.value("lambda", c.lambda);
    c.trials = j.value("trials", c.trials);
    c.seed = j.value("seed", c.seed);
    c.perturbation_eps = j.value("perturbation_eps", c.perturbation_eps);
    c.inject_duplicate_column = j.value("inject_duplicate_column", c.inject_duplicate_column);
    c.threads = j.value("threads", c.threads);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed trial config: ") + e.what());
  }
  c.validate();
  return c;
}

Json to_json(const MonteCarloSummary& s) {
  Json j{{"config", to_json(s.config)},
         {"seed", s.config.seed},
         {"p", s.p},
         {"m", s.m},
         {"nullity", s.nullity},
         {"outside_theorem", s.outside_theorem},
         {"counts", to_json(s.counts)}};
  if (s.surrogate_counts) j["surrogate_counts"] = to_json(*s.surrogate_counts);
  Json ex = Json::array();
  for (const TrialExemplar& e : s.exemplars) {
    Json item{{"trial", e.trial}, {"draw", e.draw}, {"verdict", to_string(e.verdict)}};
    if (!e.notes.empty()) item["notes"] = e.notes;
    ex.push_back(item);
  }
  j["exemplars"] = ex;
  return j;
}

Json to_json(const StabilityReport& r) {
  Json levels = Json::array();
  for (const StabilityLevel& l : r.levels) {
    levels.push_back(Json{{"eps", l.eps}, {"preserved", l.preserved}, {"failures", l.failures}});
  }
  return Json{{"directions", r.directions},
              {"final_eps", r.final_eps},
              {"eps_floor", r.eps_floor},
              {"halvings", r.halvings},
              {"stable", r.stable},
              {"preserved_fraction", r.preserved_fraction},
              {"levels", levels},
              {"m_norm", r.m_norm},
              {"m_fit_norm", r.m_fit_norm},
              {"near_exceptional", r.near_exceptional}};
}

Json to_json(const InvarianceReport& r) {
  Json obs = Json::array();
  for (const ObservedSubgradient& o : r.observed) {
    obs.push_back(Json{{"source", o.source}, {"B", ints(o.boundary_set)}, {"s", ints(o.boundary_signs)}});
  }
  Json j{{"runs", r.runs},
         {"distinct_boundary_sets", r.distinct_boundary_sets},
         {"observed", obs},
         {"max_distance", r.max_distance},
         {"all_equal", r.all_equal},
         {"max_active_distance", r.max_active_distance},
         {"active_equal", r.active_equal}};
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace genlasso::cli
