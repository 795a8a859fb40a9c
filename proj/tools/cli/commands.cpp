#include "cli/commands.hpp"

#include "cli/json_io.hpp"
#include "genlasso/errors.hpp"
#include "genlasso/matrix_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace genlasso::cli {
namespace {

struct Options {
  std::string x_path;
  std::string y_path;
  std::string d_spec = "identity";
  std::string graph_path;
  double lambda = 0.0;
  bool center = false;
  bool scale = false;
  bool standardize = false;
  std::string loss = "squared";
  double max_fit_norm = 30.0;
  std::string tolerances;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::int64_t cap = 2'000'000;
  std::string config_path;
  std::string result_path;
  double eps = 1e-3;
  int directions = 20;
  int runs = 20;
  int threads = 0;
  std::string out_path;
};

NumericTolerances parse_tolerances(const std::string& text) {
  NumericTolerances tol;
  if (text.empty()) return tol;
  std::vector<double> v;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw InputError("--tolerances: bad number '" + item + "'");
    v.push_back(x);
  }
  if (v.size() != 3) throw InputError("--tolerances expects rank_tol,residual_tol,sign_tol");
  tol = {v[0], v[1], v[2]};
  tol.validate();
  return tol;
}

bool is_builder_spec(const std::string& spec) {
  const std::string name = spec.substr(0, spec.find(':'));
  return name == "identity" || name == "diff" || name == "graph" || name == "gtf" || name == "ktf";
}

Matrix resolve_penalty(const Options& o, int p) {
  if (!is_builder_spec(o.d_spec)) return read_matrix(o.d_spec);
  std::optional<GraphSpec> graph;
  if (!o.graph_path.empty()) graph = graph_from_json(read_json_file(o.graph_path));
  return build_penalty(o.d_spec, p, graph ? &*graph : nullptr);
}

ProblemInstance load_instance(const Options& o) {
  ProblemInstance inst;
  inst.X = read_matrix(o.x_path);
  inst.y = read_vector(o.y_path);
  inst.D = resolve_penalty(o, static_cast<int>(inst.X.cols()));
  inst.lambda = o.lambda;
  inst.validate();
  if (o.standardize) return standardize_problem(inst);
  if (o.scale) return scale_problem(inst);
  if (o.center) return center_problem(inst);
  return inst;
}

GlmSolveOptions solver_options(const Options& o) {
  GlmSolveOptions opts;
  opts.inner.tol = parse_tolerances(o.tolerances);
  opts.max_fit_norm = o.max_fit_norm;
  return opts;
}

void emit(const Json& j, const Options& o, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (o.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out_path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + o.out_path + "'");
  f << text;
  if (!f) throw InputError("write failed for '" + o.out_path + "'");
}

void add_instance_flags(CLI::App* cmd, Options& o, bool with_loss) {
  cmd->add_option("--X", o.x_path, "Predictor matrix file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--y", o.y_path, "Response vector file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--D", o.d_spec,
                  "Penalty matrix file or builder: identity, diff:k, graph, gtf:k, ktf:N,d,k")
      ->capture_default_str();
  cmd->add_option("--graph", o.graph_path, "Graph JSON for graph/gtf penalties")->check(CLI::ExistingFile);
  cmd->add_option("--lambda", o.lambda, "Tuning parameter (>= 0)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  auto* c = cmd->add_flag("--center", o.center, "Center the columns of X");
  auto* s = cmd->add_flag("--scale", o.scale, "Scale the columns of X to unit norm");
  auto* d = cmd->add_flag("--standardize", o.standardize, "Center, then scale");
  c->excludes(s)->excludes(d);
  s->excludes(d);
  cmd->add_option("--tolerances", o.tolerances, "rank_tol,residual_tol,sign_tol");
  if (with_loss) {
    cmd->add_option("--loss", o.loss, "squared, logistic or poisson")
        ->check(CLI::IsMember({"squared", "logistic", "poisson"}))
        ->capture_default_str();
    cmd->add_option("--max-fit-norm", o.max_fit_norm, "Divergence threshold for GLM fits")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }
}

void add_out(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.out_path, "Write JSON here instead of stdout");
}

void add_seed(CLI::App* cmd, Options& o) {
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&o](const std::uint64_t& s) { o.seed = s, o.seed_given = true; }, "Random seed");
}

int cmd_solve(const Options& o, std::ostream& out) {
  const ProblemInstance inst = load_instance(o);
  emit(to_json(solve(inst, solver_options(o).inner)), o, out);
  return kOk;
}

int cmd_solve_glm(const Options& o, std::ostream& out) {
  const ProblemInstance inst = load_instance(o);
  emit(to_json(solve_glm(inst, LossSpec::of(parse_loss_family(o.loss)), solver_options(o))), o, out);
  return kOk;
}

int cmd_certify(const Options& o, std::ostream& out) {
  const ProblemInstance inst = load_instance(o);
  CertifyOptions opts;
  opts.solver = solver_options(o);
  const UniquenessCertificate cert =
      certify_uniqueness(inst, LossSpec::of(parse_loss_family(o.loss)), opts);
  emit(to_json(cert), o, out);
  const bool violated = cert.existence && cert.existence->exists == ExistenceStatus::violated;
  return cert.verdict == Verdict::non_unique || violated ? kFinding : kOk;
}

int cmd_exist(const Options& o, std::ostream& out) {
  const ProblemInstance inst = load_instance(o);
  const ExistenceReport rep = existence_check(inst, LossSpec::of(parse_loss_family(o.loss)),
                                              parse_tolerances(o.tolerances));
  emit(to_json(rep), o, out);
  return rep.exists == ExistenceStatus::violated ? kFinding : kOk;
}

int cmd_dgp(const Options& o, std::ostream& out) {
  const Matrix X = read_matrix(o.x_path);
  const Matrix D = resolve_penalty(o, static_cast<int>(X.cols()));
  DgpOptions opts;
  opts.cap = o.cap;
  opts.seed = o.seed;
  opts.tol = parse_tolerances(o.tolerances);
  opts.threads = o.threads;
  const DgpReport rep = dgp_check_exhaustive(X, D, opts);
  Json j = to_json(rep);
  j["seed"] = o.seed;
  emit(j, o, out);
  return rep.in_position ? kOk : kFinding;
}

int cmd_mc(const Options& o, std::ostream& out) {
  TrialConfig cfg = trial_config_from_json(read_json_file(o.config_path));
  if (o.seed_given) cfg.seed = o.seed;
  if (o.threads > 0) cfg.threads = o.threads;
  CertifyOptions opts;
  opts.solver = solver_options(o);
  emit(to_json(monte_carlo_uniqueness(cfg, opts)), o, out);
  return kOk;
}

int cmd_stability(const Options& o, std::ostream& out) {
  const ProblemInstance inst = load_instance(o);
  const LossSpec loss = LossSpec::of(parse_loss_family(o.loss));
  const GlmSolveOptions opts = solver_options(o);
  const StabilityReport rep = local_stability_probe(inst, loss, o.eps, o.directions, o.seed, opts);
  Json j = to_json(rep);
  j["seed"] = o.seed;
  if (!o.result_path.empty()) {
    // The probe re-solves the base instance; say whether it agrees with the
    // supplied result.
    const SolveResult given = solve_result_from_json(read_json_file(o.result_path));
    const SolveResult fresh = solve_glm(inst, loss, opts);
    j["matches_result"] = given.boundary_set == fresh.boundary_set &&
                          given.boundary_signs == fresh.boundary_signs &&
                          given.active_set == fresh.active_set &&
                          given.active_signs == fresh.active_signs;
  }
  emit(j, o, out);
  return rep.stable ? kOk : kFinding;
}

int cmd_invariance(const Options& o, std::ostream& out) {
  const ProblemInstance inst = load_instance(o);
  const InvarianceReport rep = subspace_invariance_probe(
      inst, LossSpec::of(parse_loss_family(o.loss)), o.runs, o.seed, solver_options(o));
  Json j = to_json(rep);
  j["seed"] = o.seed;
  emit(j, o, out);
  return rep.all_equal && rep.active_equal ? kOk : kFinding;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Generalized lasso solver and uniqueness certifier", "genlasso"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto* solve_cmd = app.add_subcommand("solve", "Solve the squared-loss problem");
  add_instance_flags(solve_cmd, o, false);
  add_out(solve_cmd, o);

  auto* glm_cmd = app.add_subcommand("solve-glm", "Solve with a GLM loss");
  add_instance_flags(glm_cmd, o, true);
  add_out(glm_cmd, o);

  auto* cert_cmd = app.add_subcommand("certify", "Certify uniqueness of the solution");
  add_instance_flags(cert_cmd, o, true);
  add_out(cert_cmd, o);

  auto* dgp_cmd = app.add_subcommand("dgp-check", "Check D-general position of X");
  dgp_cmd->add_option("--X", o.x_path, "Predictor matrix file")->required()->check(CLI::ExistingFile);
  dgp_cmd->add_option("--D", o.d_spec, "Penalty matrix file or builder")->capture_default_str();
  dgp_cmd->add_option("--graph", o.graph_path, "Graph JSON")->check(CLI::ExistingFile);
  dgp_cmd->add_option("--cap", o.cap, "Enumeration cap before sampling")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  dgp_cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  dgp_cmd->add_option("--tolerances", o.tolerances, "rank_tol,residual_tol,sign_tol");
  add_seed(dgp_cmd, o);
  add_out(dgp_cmd, o);

  auto* exist_cmd = app.add_subcommand("exist-check", "Check existence conditions for a GLM");
  add_instance_flags(exist_cmd, o, true);
  add_out(exist_cmd, o);

  auto* mc_cmd = app.add_subcommand("mc-unique", "Monte Carlo uniqueness trials");
  mc_cmd->add_option("--config", o.config_path, "Trial configuration JSON")
      ->required()
      ->check(CLI::ExistingFile);
  mc_cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  mc_cmd->add_option("--tolerances", o.tolerances, "rank_tol,residual_tol,sign_tol");
  add_seed(mc_cmd, o);
  add_out(mc_cmd, o);

  auto* stab_cmd = app.add_subcommand("stability", "Local stability of (B, s, A, r)");
  add_instance_flags(stab_cmd, o, true);
  stab_cmd->add_option("--result", o.result_path, "Result JSON from solve or solve-glm")
      ->check(CLI::ExistingFile);
  stab_cmd->add_option("--eps", o.eps, "Initial perturbation size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  stab_cmd->add_option("--directions", o.directions, "Perturbation directions")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_seed(stab_cmd, o);
  add_out(stab_cmd, o);

  auto* inv_cmd = app.add_subcommand("invariance", "Subspace invariance across subgradients");
  add_instance_flags(inv_cmd, o, true);
  inv_cmd->add_option("--runs", o.runs, "Re-solves and face vertices to harvest")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_seed(inv_cmd, o);
  add_out(inv_cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "genlasso: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(o, out);
    if (glm_cmd->parsed()) return cmd_solve_glm(o, out);
    if (cert_cmd->parsed()) return cmd_certify(o, out);
    if (dgp_cmd->parsed()) return cmd_dgp(o, out);
    if (exist_cmd->parsed()) return cmd_exist(o, out);
    if (mc_cmd->parsed()) return cmd_mc(o, out);
    if (stab_cmd->parsed()) return cmd_stability(o, out);
    if (inv_cmd->parsed()) return cmd_invariance(o, out);
  } catch (const InputError& e) {
    err << "genlasso: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    err << "genlasso: numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"genlasso"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace genlasso::cli
