#include "ctxmatch/report.hpp"

#include "ctxmatch/errors.hpp"
#include "ctxmatch/instance_io.hpp"
#include "ctxmatch/version.hpp"

#include <json.hpp>

#include <cmath>
#include <set>

namespace ctxmatch {

namespace {

using Json = nlohmann::ordered_json;

std::string dump(const Json& doc) { return doc.dump() + "\n"; }

std::string csv_real(double value) { return std::isnan(value) ? "nan" : format_real(value); }

Json params_json(const ModelParams& params) {
  return Json{{"n", params.n}, {"d", params.d}, {"rho", params.rho}, {"eta", params.eta}};
}

Json envelope(std::string_view suite, Json params, Json metrics, bool pass) {
  return Json{{"suite", suite},
              {"tool_version", tool_version()},
              {"params", std::move(params)},
              {"metrics", std::move(metrics)},
              {"pass", pass}};
}

std::string_view init_name(LocalInit init) {
  switch (init) {
    case LocalInit::identity: return "identity";
    case LocalInit::feature: return "feature";
    case LocalInit::random: return "random";
  }
  return "feature";
}

LocalInit parse_init(const std::string& name) {
  if (name == "identity") return LocalInit::identity;
  if (name == "feature") return LocalInit::feature;
  if (name == "random") return LocalInit::random;
  throw ConfigError("unknown local.init '" + name + "' (expected identity, feature or random)");
}

void reject_unknown(const Json& object, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : object.items())
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <typename T>
T read(const Json& object, const char* key) {
  try {
    return object.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("sweep config key '") + key + "' is missing or has the wrong type");
  }
}

template <typename T>
T read_or(const Json& object, const char* key, T fallback) {
  return object.contains(key) ? read<T>(object, key) : fallback;
}

}  // namespace

std::string_view tool_version() { return kVersion; }

std::string match_result_json(const MatchResult& result, const MatchJsonOptions& options) {
  Json doc;
  doc["estimator"] = result.estimator_name;
  doc["exact"] = result.exact;
  doc["overlap"] = result.overlap_with_truth;
  doc["n"] = result.estimate.size();
  doc["objective"] = std::isnan(result.objective) ? Json(nullptr) : Json(result.objective);
  if (options.include_timing) doc["wall_time_ms"] = result.wall_time.count();
  Json mapping = Json::array();
  for (Node v : result.estimate.mapping()) mapping.push_back(v);
  doc["mapping"] = std::move(mapping);
  if (result.locally_optimal) doc["locally_optimal"] = *result.locally_optimal;
  if (options.explain) {
    const HamiltonianBreakdown& bd = *options.explain;
    doc["explain"] = Json{{"v", bd.v}, {"v_star_g", bd.v_star_g}, {"v_g", bd.v_g}, {"v_star_f", bd.v_star_f},
                          {"v_f", bd.v_f}};
  }
  return dump(doc);
}

std::string sweep_csv(const SweepResult& result) {
  const SweepConfig& config = result.config;
  std::string out = "x,y,rho,eta,n,d,trials,estimator,exact_rate,se_exact,mean_overlap,base_seed,region\n";
  const std::string estimator(estimator_name(config.estimator));
  for (const CellResult& cell : result.cells) {
    const double nan = std::nan("");
    out += csv_real(cell.x) + ',' + csv_real(cell.y) + ',' + csv_real(cell.rho) + ',' + csv_real(cell.eta) + ',';
    out += std::to_string(config.n) + ',' + std::to_string(config.d) + ',' + std::to_string(cell.trials_run) + ',';
    out += estimator + ',';
    out += csv_real(cell.feasible ? cell.exact_rate : nan) + ',';
    out += csv_real(cell.feasible ? cell.se_exact : nan) + ',';
    out += csv_real(cell.feasible ? cell.mean_overlap_fraction : nan) + ',';
    out += std::to_string(config.base_seed) + ',';
    out += std::string(region_name(cell.region)) + '\n';
  }
  return out;
}

std::string sweep_metadata_json(const SweepResult& result) {
  Json doc;
  doc["tool_version"] = tool_version();
  doc["base_seed"] = result.config.base_seed;
  doc["config"] = Json::parse(sweep_config_to_json(result.config));
  Json infeasible = Json::array();
  for (const CellResult& cell : result.cells)
    if (!cell.feasible) infeasible.push_back(Json{{"x", cell.x}, {"y", cell.y}});
  doc["infeasible_cells"] = std::move(infeasible);
  return dump(doc);
}

SweepConfig sweep_config_from_json(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("sweep config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("sweep config must be a JSON object");
  reject_unknown(doc,
                 {"n", "d", "x_grid", "y_grid", "trials", "estimator", "base_seed", "epsilon_lines", "axis",
                  "ball_radius", "local"},
                 "sweep config");

  SweepConfig config;
  config.n = read<int>(doc, "n");
  config.d = read<int>(doc, "d");
  config.x_grid = read<std::vector<double>>(doc, "x_grid");
  config.y_grid = read<std::vector<double>>(doc, "y_grid");
  config.trials = read<int>(doc, "trials");
  try {
    config.estimator = parse_estimator(read<std::string>(doc, "estimator"));
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  config.base_seed = read_or<std::uint64_t>(doc, "base_seed", 0);
  config.epsilon_lines = read_or<std::vector<double>>(doc, "epsilon_lines", {});
  config.axis = parse_axis(read_or<std::string>(doc, "axis", "plain"));
  config.ball_radius = read_or<double>(doc, "ball_radius", 0.0);
  if (doc.contains("local")) {
    const Json& local = doc["local"];
    if (!local.is_object()) throw ConfigError("sweep config key 'local' must be an object");
    reject_unknown(local, {"init", "restarts", "max_sweeps", "anneal"}, "local");
    config.local.init = parse_init(read_or<std::string>(local, "init", "feature"));
    config.local.restarts = read_or<int>(local, "restarts", config.local.restarts);
    config.local.max_sweeps = read_or<int>(local, "max_sweeps", config.local.max_sweeps);
    if (local.contains("anneal") && !local["anneal"].is_null()) {
      const Json& anneal = local["anneal"];
      if (!anneal.is_object()) throw ConfigError("local.anneal must be an object or null");
      reject_unknown(anneal, {"t0", "cooling"}, "local.anneal");
      AnnealConfig schedule;
      schedule.t0 = read_or<double>(anneal, "t0", schedule.t0);
      schedule.cooling = read_or<double>(anneal, "cooling", schedule.cooling);
      config.local.anneal = schedule;
    }
  }
  config.validate();
  return config;
}

std::string sweep_config_to_json(const SweepConfig& config) {
  Json doc;
  doc["n"] = config.n;
  doc["d"] = config.d;
  doc["x_grid"] = config.x_grid;
  doc["y_grid"] = config.y_grid;
  doc["trials"] = config.trials;
  doc["estimator"] = estimator_name(config.estimator);
  doc["base_seed"] = config.base_seed;
  doc["epsilon_lines"] = config.epsilon_lines;
  doc["axis"] = axis_name(config.axis);
  doc["ball_radius"] = config.ball_radius;
  Json local{{"init", init_name(config.local.init)},
             {"restarts", config.local.restarts},
             {"max_sweeps", config.local.max_sweeps}};
  local["anneal"] = config.local.anneal ? Json{{"t0", config.local.anneal->t0}, {"cooling", config.local.anneal->cooling}}
                                        : Json(nullptr);
  doc["local"] = std::move(local);
  return dump(doc);
}

// ---------------------------------------------------------------------------

namespace {

Json hstar_rows(const HstarReport& report) {
  Json rows = Json::array();
  for (const HstarRow& row : report.rows) {
    rows.push_back(Json{{"t", row.t},
                        {"max_dev_g", row.max_dev_g},
                        {"p99_dev_g", row.p99_dev_g},
                        {"max_dev_f", row.max_dev_f},
                        {"p99_dev_f", row.p99_dev_f},
                        {"mean_centred_g", row.mean_centred_g},
                        {"se_centred_g", row.se_centred_g},
                        {"mean_centred_f", row.mean_centred_f},
                        {"se_centred_f", row.se_centred_f},
                        {"mean_unfixed_edges", row.mean_unfixed_edges}});
  }
  return rows;
}

}  // namespace

std::string hstar_report_json(const HstarStability& report) {
  Json params = params_json(report.base.params);
  params["n_doubled"] = report.doubled.params.n;
  params["t_values"] = report.base.t_values;
  params["t_values_doubled"] = report.doubled.t_values;
  params["trials"] = report.base.trials;
  params["seed"] = report.base.seed;
  params["seed_doubled"] = report.doubled.seed;
  Json metrics{{"finite", report.base.finite && report.doubled.finite},
               {"ratio_g", report.ratio_g},
               {"ratio_f", report.ratio_f},
               {"base", hstar_rows(report.base)},
               {"doubled", hstar_rows(report.doubled)}};
  return dump(envelope("hstar", std::move(params), std::move(metrics), report.pass));
}

std::string laplace_report_json(const LaplaceReport& report) {
  Json params = params_json(report.params);
  params["t"] = report.t;
  params["trials"] = report.trials;
  params["seed"] = report.seed;
  Json rows = Json::array();
  for (const LaplaceRow& row : report.rows)
    rows.push_back(Json{{"c", row.c}, {"exceed_g", row.exceed_g}, {"exceed_f", row.exceed_f}});
  Json metrics{{"exceedance", std::move(rows)},
               {"mean_sb_minus_edges", report.mean_sb_minus_edges},
               {"se_sb_minus_edges", report.se_sb_minus_edges},
               {"mean_sy_minus_cells", report.mean_sy_minus_cells},
               {"se_sy_minus_cells", report.se_sy_minus_cells},
               {"max_log_transform_g", report.max_log_transform_g},
               {"max_log_transform_f", report.max_log_transform_f}};
  return dump(envelope("laplace", std::move(params), std::move(metrics), report.pass));
}

std::string tail_report_json(const TailReport& report) {
  Json alphas = Json::array();
  Json ts = Json::array();
  std::set<double> seen_alpha;
  std::set<double> seen_t;
  for (const TailCell& cell : report.cells) {
    if (seen_alpha.insert(cell.alpha).second) alphas.push_back(cell.alpha);
    if (seen_t.insert(cell.t).second) ts.push_back(cell.t);
  }
  Json params{{"var1", report.var1}, {"var2", report.var2}, {"alphas", std::move(alphas)},
              {"ts", std::move(ts)},   {"trials", report.trials}, {"seed", report.seed}};
  Json cells = Json::array();
  for (const TailCell& cell : report.cells) {
    cells.push_back(Json{{"alpha", cell.alpha},
                         {"t", cell.t},
                         {"estimate", cell.estimate},
                         {"se", cell.se},
                         {"bound", cell.bound},
                         {"violation", cell.violation}});
  }
  return dump(envelope("tails", std::move(params), Json{{"cells", std::move(cells)}}, report.pass));
}

std::string partition_report_json(const PartitionReport& report) {
  Json params{{"epsilon", report.rule.epsilon},
              {"d", report.rule.d},
              {"graph_share", report.rule.graph_share},
              {"n_values", report.n_values},
              {"trials", report.trials},
              {"seed", report.seed}};
  Json rows = Json::array();
  for (const PartitionRow& row : report.rows) {
    rows.push_back(Json{{"n", row.n},
                        {"rho", row.rho},
                        {"eta", row.eta},
                        {"mean_log_z", row.mean_log_z},
                        {"se_log_z", row.se_log_z},
                        {"min_log_z", row.min_log_z},
                        {"log_factorial", row.log_factorial},
                        {"ratio", row.ratio}});
  }
  Json metrics{{"rows", std::move(rows)},
               {"log_z_non_negative", report.log_z_non_negative},
               {"ratio_non_decreasing", report.ratio_non_decreasing}};
  return dump(envelope("partition", std::move(params), std::move(metrics), report.pass));
}

}  // namespace ctxmatch
