#include "cli.hpp"

#include "ctxmatch/combinatorics.hpp"
#include "ctxmatch/errors.hpp"
#include "ctxmatch/estimators.hpp"
#include "ctxmatch/experiments.hpp"
#include "ctxmatch/instance_io.hpp"
#include "ctxmatch/parallel.hpp"
#include "ctxmatch/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace ctxmatch::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;
  std::string format;
};

struct SampleArgs {
  int n = 0;
  int d = 0;
  double rho = 0.0;
  double eta = 0.0;
};

struct MatchArgs {
  std::string inst;
  SampleArgs model;
  std::string estimator = "exhaustive";
  double r = 0.0;
  int restarts = 1;
  int max_sweeps = 200;
  std::string init = "feature";
  bool anneal = false;
  double t0 = 1.0;
  double cooling = 0.97;
  bool explain = false;
  bool omit_timing = false;
};

struct VerifyArgs {
  std::string suite;
  int n = 0;
  int d = 0;
  double rho = 0.0;
  double eta = 0.0;
  std::vector<int> t_values;
  int trials = 0;
  long long tail_trials = 0;
  double var1 = 1.1;
  double var2 = 0.95;
  std::vector<double> alphas{0.0, 0.5, 1.0};
  std::vector<double> tail_t{1.0, 2.0, 3.0};
  int n_min = 2;
  int n_max = 10;
  std::string rule = "zero";
  double epsilon = 0.5;
  double graph_share = 0.5;
};

struct DerangeArgs {
  int n = 0;
  std::optional<int> t;
};

// Raised for a failed property suite; carries the failing metric.
struct PropertyFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << text;
  file.close();
  if (!file) throw IoError("failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

void log_config(std::ostream& err, std::string_view command, const Json& config) {
  err << "ctxmatch " << tool_version() << " " << command << ": " << config.dump() << "\n";
}

Json model_json(const ModelParams& p) { return Json{{"n", p.n}, {"d", p.d}, {"rho", p.rho}, {"eta", p.eta}}; }

// ---------------------------------------------------------------------------

int cmd_sample(const Common& common, const SampleArgs& args, std::ostream& out, std::ostream& err) {
  const ModelParams params{args.n, args.d, args.rho, args.eta};
  Json config = model_json(params);
  config["seed"] = common.seed;
  config["out"] = common.out;
  log_config(err, "sample", config);
  const Instance inst = sample_instance(params, common.seed);
  if (common.out.empty())
    out << instance_to_json(inst);
  else
    write_instance(inst, common.out);
  return kOk;
}

int cmd_match(const Common& common, const MatchArgs& args, std::ostream& out, std::ostream& err) {
  const EstimatorKind kind = parse_estimator(args.estimator);
  Instance inst;
  Json config;
  if (!args.inst.empty()) {
    inst = read_instance(args.inst);
    config["inst"] = args.inst;
  } else {
    if (args.model.n == 0 || args.model.d == 0) throw ParameterError("match needs --inst or both --n and --d");
    inst = sample_instance({args.model.n, args.model.d, args.model.rho, args.model.eta}, common.seed);
  }
  config["model"] = model_json(inst.params);
  config["seed"] = common.seed;
  config["estimator"] = args.estimator;

  LocalSearchConfig local;
  if (kind == EstimatorKind::local) {
    local.init = args.init == "identity" ? LocalInit::identity
                 : args.init == "random" ? LocalInit::random
                                         : LocalInit::feature;
    local.restarts = args.restarts;
    local.max_sweeps = args.max_sweeps;
    if (args.anneal) local.anneal = AnnealConfig{args.t0, args.cooling};
    local.seed = rng::derive(common.seed, {static_cast<std::uint64_t>(rng::Stream::estimator)});
    local.threads = common.threads;
    config["local"] = Json{{"init", args.init},
                           {"restarts", args.restarts},
                           {"max_sweeps", args.max_sweeps},
                           {"anneal", args.anneal ? Json{{"t0", args.t0}, {"cooling", args.cooling}} : Json(nullptr)},
                           {"threads", common.threads}};
  }
  if (kind == EstimatorKind::ball) config["r"] = args.r;
  log_config(err, "match", config);

  MatchResult result;
  switch (kind) {
    case EstimatorKind::exhaustive: result = map_exhaustive(inst); break;
    case EstimatorKind::feature: result = feature_map(inst); break;
    case EstimatorKind::local: result = local_search_map(inst, local); break;
    case EstimatorKind::ball: result = bayes_ball_estimator(inst, args.r); break;
  }

  MatchJsonOptions options;
  options.include_timing = !args.omit_timing;
  if (args.explain) options.explain = breakdown_against_truth(inst, result.estimate);
  Json doc = Json::parse(match_result_json(result, options));
  doc["meta"] = Json{{"tool_version", tool_version()}, {"base_seed", common.seed}, {"config", config}};
  emit(doc.dump() + "\n", common.out, out);
  return kOk;
}

std::string sweep_json(const SweepResult& result) {
  Json doc = Json::parse(sweep_metadata_json(result));
  Json cells = Json::array();
  for (const CellResult& c : result.cells) {
    Json cell{{"x", c.x}, {"y", c.y}, {"rho", c.rho}, {"eta", c.eta}, {"feasible", c.feasible},
              {"trials", c.trials_run}, {"region", region_name(c.region)}};
    if (c.feasible) {
      cell["exact_rate"] = c.exact_rate;
      cell["se_exact"] = c.se_exact;
      cell["mean_overlap"] = c.mean_overlap_fraction;
    }
    cells.push_back(std::move(cell));
  }
  doc["cells"] = std::move(cells);
  return doc.dump() + "\n";
}

int cmd_sweep(const Common& common, const std::string& config_path, std::ostream& out, std::ostream& err) {
  SweepConfig config = sweep_config_from_json(read_text(config_path));
  config.threads = common.threads;
  const std::string format = common.format.empty() ? "csv" : common.format;
  Json logged = Json::parse(sweep_config_to_json(config));
  logged["threads"] = common.threads;
  logged["format"] = format;
  log_config(err, "sweep", logged);

  const SweepResult result = run_phase_sweep(config);
  if (format == "json") {
    emit(sweep_json(result), common.out, out);
    return kOk;
  }
  emit(sweep_csv(result), common.out, out);
  const std::string meta = sweep_metadata_json(result);
  if (common.out.empty())
    err << meta;
  else
    emit(meta, common.out + ".meta.json", out);
  return kOk;
}

// ---------------------------------------------------------------------------

std::string describe_hstar_failure(const HstarStability& r) {
  if (!r.base.finite || !r.doubled.finite) return "non-finite maximum deviation";
  for (std::size_t k = 0; k < r.ratio_g.size(); ++k) {
    const int t = r.base.t_values[k];
    if (!(r.ratio_g[k] >= 0.5 && r.ratio_g[k] <= 2.0))
      return "p99 ratio (graph) at t = " + std::to_string(t) + " is " + format_real(r.ratio_g[k]) +
             ", outside [0.5, 2]";
    if (!(r.ratio_f[k] >= 0.5 && r.ratio_f[k] <= 2.0))
      return "p99 ratio (feature) at t = " + std::to_string(t) + " is " + format_real(r.ratio_f[k]) +
             ", outside [0.5, 2]";
  }
  return "stability check failed";
}

int cmd_verify(const Common& common, VerifyArgs args, std::ostream& out, std::ostream& err) {
  std::string report;
  std::string failure;
  bool pass = false;
  Json logged{{"suite", args.suite}, {"seed", common.seed}, {"threads", common.threads}};

  if (args.suite == "hstar") {
    const ModelParams params{args.n ? args.n : 200, args.d ? args.d : 500, args.rho, args.eta};
    if (args.t_values.empty()) args.t_values = {2};
    const int trials = args.trials ? args.trials : 5000;
    logged["params"] = model_json(params);
    logged["t"] = args.t_values;
    logged["trials"] = trials;
    log_config(err, "verify", logged);
    const HstarStability r = verify_hstar_stability(params, args.t_values, trials, common.seed, common.threads);
    report = hstar_report_json(r);
    pass = r.pass;
    if (!pass) failure = describe_hstar_failure(r);
  } else if (args.suite == "laplace") {
    const ModelParams params{args.n ? args.n : 100, args.d ? args.d : 300, args.rho, args.eta};
    const int t = args.t_values.empty() ? 4 : args.t_values.front();
    const int trials = args.trials ? args.trials : 2000;
    logged["params"] = model_json(params);
    logged["t"] = t;
    logged["trials"] = trials;
    log_config(err, "verify", logged);
    const LaplaceReport r = verify_laplace_bound(params, t, trials, common.seed, common.threads);
    report = laplace_report_json(r);
    pass = r.pass;
    if (!pass) {
      const LaplaceRow& row = r.rows.back();
      failure = "exceedance at C = 4: graph " + format_real(row.exceed_g) + ", feature " + format_real(row.exceed_f) +
                " (limit 0.01)";
    }
  } else if (args.suite == "tails") {
    const long long trials = args.tail_trials ? args.tail_trials : (args.trials ? args.trials : 1000000);
    logged["var1"] = args.var1;
    logged["var2"] = args.var2;
    logged["alpha"] = args.alphas;
    logged["t"] = args.tail_t;
    logged["trials"] = trials;
    log_config(err, "verify", logged);
    const TailReport r = verify_tail_grid(args.var1, args.var2, args.alphas, args.tail_t, trials, common.seed,
                                          common.threads);
    report = tail_report_json(r);
    pass = r.pass;
    for (const TailCell& c : r.cells) {
      if (c.violation) {
        failure = "tail bound violated at alpha = " + format_real(c.alpha) + ", t = " + format_real(c.t) +
                  ": estimate " + format_real(c.estimate) + " > bound " + format_real(c.bound) + " + 3 se";
        break;
      }
    }
  } else if (args.suite == "partition") {
    if (args.n_min > args.n_max) throw ParameterError("--n-min must not exceed --n-max");
    PartitionRule rule;
    if (args.rule == "zero") {
      rule.epsilon = 1.0;
    } else if (args.rule == "threshold") {
      rule.epsilon = args.epsilon;
    } else {
      throw ParameterError("--rule must be zero or threshold");
    }
    rule.d = args.d ? args.d : 4;
    rule.graph_share = args.graph_share;
    std::vector<int> n_values;
    for (int n = args.n_min; n <= args.n_max; ++n) n_values.push_back(n);
    const int trials = args.trials ? args.trials : 20;
    logged["rule"] = args.rule;
    logged["epsilon"] = rule.epsilon;
    logged["d"] = rule.d;
    logged["graph_share"] = rule.graph_share;
    logged["n_values"] = n_values;
    logged["trials"] = trials;
    log_config(err, "verify", logged);
    const PartitionReport r = partition_trend(n_values, rule, trials, common.seed, common.threads);
    report = partition_report_json(r);
    pass = r.pass;
    if (!r.log_z_non_negative)
      failure = "log Z < 0 observed";
    else if (!r.ratio_non_decreasing)
      failure = "mean log Z / (n log n) decreases in n";
  } else {
    throw ParameterError("--suite must be one of hstar, laplace, tails, partition");
  }

  emit(report, common.out, out);
  if (!pass) {
    err << "property failed: " << failure << "\n";
    return kPropertyFailure;
  }
  return kOk;
}

int cmd_derange(const Common& common, const DerangeArgs& args, std::ostream& out, std::ostream& err) {
  Json logged{{"n", args.n}};
  logged["t"] = args.t ? Json(*args.t) : Json(nullptr);
  log_config(err, "derange", logged);
  const BigInt count = args.t ? orbit_size(args.n, *args.t) : count_derangements(args.n);
  emit(count.str() + "\n", common.out, out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contextual Gaussian graph matching: sampling, estimators and Monte Carlo harnesses", "ctxmatch"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(tool_version()));

  Common common;
  common.threads = default_thread_count();
  app.add_option("--seed", common.seed, "Root seed")->capture_default_str();
  app.add_option("--out", common.out, "Output path (default: stdout)");
  app.add_option("--threads", common.threads, "Worker threads (default: CTXMATCH_THREADS or all cores)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--format", common.format, "Output format where applicable")
      ->check(CLI::IsMember({"json", "csv"}));

  SampleArgs sample;
  CLI::App* sample_cmd = app.add_subcommand("sample", "Draw one instance and write it as JSON");
  sample_cmd->add_option("--n", sample.n, "Number of nodes")->required()->check(CLI::PositiveNumber);
  sample_cmd->add_option("--d", sample.d, "Feature dimension")->required()->check(CLI::PositiveNumber);
  sample_cmd->add_option("--rho", sample.rho, "Edge correlation")->check(CLI::Range(-1.0, 1.0));
  sample_cmd->add_option("--eta", sample.eta, "Feature correlation")->check(CLI::Range(-1.0, 1.0));

  MatchArgs match;
  CLI::App* match_cmd = app.add_subcommand("match", "Run an estimator on a stored or freshly sampled instance");
  auto* inst_opt = match_cmd->add_option("--inst", match.inst, "Instance JSON path");
  match_cmd->add_option("--n", match.model.n, "Nodes (inline sampling)")->check(CLI::PositiveNumber)->excludes(inst_opt);
  match_cmd->add_option("--d", match.model.d, "Feature dimension (inline sampling)")
      ->check(CLI::PositiveNumber)
      ->excludes(inst_opt);
  match_cmd->add_option("--rho", match.model.rho, "Edge correlation (inline sampling)")
      ->check(CLI::Range(-1.0, 1.0))
      ->excludes(inst_opt);
  match_cmd->add_option("--eta", match.model.eta, "Feature correlation (inline sampling)")
      ->check(CLI::Range(-1.0, 1.0))
      ->excludes(inst_opt);
  match_cmd->add_option("--estimator", match.estimator)
      ->check(CLI::IsMember({"exhaustive", "feature", "local", "ball"}))
      ->capture_default_str();
  match_cmd->add_option("--r", match.r, "Ball radius for the ball estimator")->check(CLI::Range(0.0, 0.999999999));
  match_cmd->add_option("--restarts", match.restarts)->check(CLI::PositiveNumber)->capture_default_str();
  match_cmd->add_option("--max-sweeps", match.max_sweeps)->check(CLI::PositiveNumber)->capture_default_str();
  match_cmd->add_option("--init", match.init)
      ->check(CLI::IsMember({"identity", "feature", "random"}))
      ->capture_default_str();
  match_cmd->add_flag("--anneal", match.anneal, "Simulated annealing before descent");
  match_cmd->add_option("--t0", match.t0)->capture_default_str();
  match_cmd->add_option("--cooling", match.cooling)->capture_default_str();
  match_cmd->add_flag("--explain", match.explain, "Add the Hamiltonian breakdown of the estimate");
  match_cmd->add_flag("--omit-timing", match.omit_timing, "Drop wall_time_ms for byte-stable output");

  std::string sweep_config;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo phase sweep from a JSON config");
  sweep_cmd->add_option("--config", sweep_config, "Sweep config JSON")->required();

  VerifyArgs verify;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Empirical checks of concentration and tail bounds");
  verify_cmd->add_option("--suite", verify.suite)
      ->required()
      ->check(CLI::IsMember({"hstar", "laplace", "tails", "partition"}));
  verify_cmd->add_option("--n", verify.n)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--d", verify.d)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--rho", verify.rho)->check(CLI::Range(-1.0, 1.0));
  verify_cmd->add_option("--eta", verify.eta)->check(CLI::Range(-1.0, 1.0));
  verify_cmd->add_option("--t", verify.t_values, "Unfixed-point counts (hstar, laplace)")->delimiter(',');
  verify_cmd->add_option("--trials", verify.trials)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--samples", verify.tail_trials, "Samples per cell (tails)")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--var1", verify.var1)->capture_default_str();
  verify_cmd->add_option("--var2", verify.var2)->capture_default_str();
  verify_cmd->add_option("--alpha", verify.alphas)->delimiter(',');
  verify_cmd->add_option("--tail-t", verify.tail_t)->delimiter(',');
  verify_cmd->add_option("--n-min", verify.n_min)->capture_default_str();
  verify_cmd->add_option("--n-max", verify.n_max)->capture_default_str();
  verify_cmd->add_option("--rule", verify.rule)->check(CLI::IsMember({"zero", "threshold"}))->capture_default_str();
  verify_cmd->add_option("--epsilon", verify.epsilon)->capture_default_str();
  verify_cmd->add_option("--graph-share", verify.graph_share)->capture_default_str();

  DerangeArgs derange;
  CLI::App* derange_cmd = app.add_subcommand("derange", "Count derangements, or permutations moving exactly t points");
  derange_cmd->add_option("--n", derange.n)->required();
  derange_cmd->add_option("--t", derange.t);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadArguments;
  }

  try {
    if (*sample_cmd) return cmd_sample(common, sample, out, err);
    if (*match_cmd) return cmd_match(common, match, out, err);
    if (*sweep_cmd) return cmd_sweep(common, sweep_config, out, err);
    if (*verify_cmd) return cmd_verify(common, verify, out, err);
    if (*derange_cmd) return cmd_derange(common, derange, out, err);
  } catch (const EnumerationCapError& e) {
    err << "error: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kBadArguments;
  }
  return kBadArguments;
}

}  // namespace ctxmatch::cli
