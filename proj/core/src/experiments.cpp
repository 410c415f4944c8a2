#include "ctxmatch/experiments.hpp"

#include "ctxmatch/errors.hpp"
#include "ctxmatch/hamiltonian.hpp"
#include "ctxmatch/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ctxmatch {

namespace {

constexpr double kLineTolerance = 1e-12;

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& values) {
  MeanSe out;
  if (values.empty()) return out;
  const double count = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / count;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / (count - 1.0) / count);
  }
  return out;
}

// Nearest-rank percentile, q in (0, 1].
double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

double max_of(const std::vector<double>& values) {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

void check_t(int t, int n) {
  if (t < 2 || t > n)
    throw ParameterError("t must lie in [2, n] = [2, " + std::to_string(n) + "], got " + std::to_string(t));
}

void check_trials(long long trials) {
  if (trials < 1) throw ParameterError("trials must be ≥ 1");
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view region_name(Region region) {
  switch (region) {
    case Region::exact: return "exact";
    case Region::almost_exact_gap: return "almost-exact-gap";
    case Region::open: return "open";
    case Region::impossible_half: return "impossible-half";
    case Region::boundary: return "boundary";
  }
  return "unknown";
}

RegionLabel theory_classify(double x, double y) {
  if (!(x >= 0.0) || !(y >= 0.0))
    throw ParameterError("theory_classify needs x, y ≥ 0, got (" + std::to_string(x) + ", " + std::to_string(y) + ")");
  const double exact_line = x + y - 4.0;
  const double almost_line = x / 4.0 + y / 2.0 - 1.0;
  const double half_line = x / 2.0 + y - 1.0;
  auto on = [](double v) { return std::abs(v) <= kLineTolerance; };

  RegionLabel out{Region::open, almost_line < -kLineTolerance};
  if (on(exact_line) || on(almost_line) || on(half_line))
    out.region = Region::boundary;
  else if (exact_line > 0.0)
    out.region = Region::exact;
  else if (almost_line > 0.0)
    out.region = Region::almost_exact_gap;
  else if (half_line < 0.0)
    out.region = Region::impossible_half;
  return out;
}

// ---------------------------------------------------------------------------

std::string_view axis_name(AxisMode mode) { return mode == AxisMode::plain ? "plain" : "snr"; }

AxisMode parse_axis(std::string_view name) {
  if (name == "plain") return AxisMode::plain;
  if (name == "snr") return AxisMode::snr;
  throw ConfigError("unknown axis mode '" + std::string(name) + "' (expected plain or snr)");
}

void SweepConfig::validate() const {
  if (n < 1 || d < 1) throw ConfigError("sweep needs n ≥ 1 and d ≥ 1");
  if (trials < 1) throw ConfigError("sweep needs trials ≥ 1");
  if (x_grid.empty() || y_grid.empty()) throw ConfigError("sweep grids must be non-empty");
  for (double v : x_grid)
    if (!(v >= 0.0)) throw ConfigError("x_grid values must be ≥ 0");
  for (double v : y_grid)
    if (!(v >= 0.0)) throw ConfigError("y_grid values must be ≥ 0");
  if (threads < 1) throw ConfigError("threads must be ≥ 1");
  switch (estimator) {
    case EstimatorKind::exhaustive:
      if (n > kNumeric.enumeration_cap)
        throw ConfigError("estimator exhaustive needs n ≤ " + std::to_string(kNumeric.enumeration_cap) + ", got n = " +
                          std::to_string(n));
      break;
    case EstimatorKind::ball:
      if (n > kBallEnumerationCap)
        throw ConfigError("estimator ball needs n ≤ " + std::to_string(kBallEnumerationCap) + ", got n = " +
                          std::to_string(n));
      if (!(ball_radius >= 0.0 && ball_radius < 1.0)) throw ConfigError("ball radius must lie in [0, 1)");
      break;
    case EstimatorKind::local:
      try {
        local.validate();
      } catch (const ParameterError& e) {
        throw ConfigError(e.what());
      }
      break;
    case EstimatorKind::feature:
      break;
  }
}

CellCoordinates cell_coordinates(double x, double y, int n, int d, AxisMode axis) {
  const double log_n = std::log(static_cast<double>(n));
  double rho2 = 0.0;
  double eta2 = 0.0;
  if (axis == AxisMode::plain) {
    rho2 = x * log_n / n;
    eta2 = y * log_n / d;
  } else {
    rho2 = x * log_n / (n + x * log_n);
    eta2 = y * log_n / (d + y * log_n);
  }
  CellCoordinates out;
  out.feasible = rho2 < 1.0 && eta2 < 1.0;
  out.rho = std::sqrt(std::min(rho2, 1.0));
  out.eta = std::sqrt(std::min(eta2, 1.0));
  return out;
}

const CellResult& SweepResult::cell(int x_index, int y_index) const {
  if (x_index < 0 || y_index < 0 || x_index >= static_cast<int>(config.x_grid.size()) ||
      y_index >= static_cast<int>(config.y_grid.size()))
    throw ParameterError("sweep cell index out of range");
  return cells[static_cast<std::size_t>(x_index) * config.y_grid.size() + static_cast<std::size_t>(y_index)];
}

std::uint64_t trial_seed(std::uint64_t base_seed, int x_index, int y_index, int trial) {
  return rng::derive(base_seed, {static_cast<std::uint64_t>(x_index), static_cast<std::uint64_t>(y_index),
                                 static_cast<std::uint64_t>(trial)});
}

SweepResult run_phase_sweep(const SweepConfig& config) {
  config.validate();
  SweepResult result;
  result.config = config;

  const int nx = static_cast<int>(config.x_grid.size());
  const int ny = static_cast<int>(config.y_grid.size());
  for (int xi = 0; xi < nx; ++xi) {
    for (int yi = 0; yi < ny; ++yi) {
      CellResult cell;
      cell.x_index = xi;
      cell.y_index = yi;
      cell.x = config.x_grid[xi];
      cell.y = config.y_grid[yi];
      const CellCoordinates coords = cell_coordinates(cell.x, cell.y, config.n, config.d, config.axis);
      cell.rho = coords.rho;
      cell.eta = coords.eta;
      cell.feasible = coords.feasible;
      cell.region = theory_classify(cell.x, cell.y).region;
      result.cells.push_back(cell);
    }
  }

  struct Outcome {
    int overlap = 0;
    bool exact = false;
  };
  const std::size_t trials = static_cast<std::size_t>(config.trials);
  std::vector<Outcome> outcomes(result.cells.size() * trials);

  parallel_for(outcomes.size(), config.threads, [&](std::size_t job) {
    const CellResult& cell = result.cells[job / trials];
    if (!cell.feasible) return;
    const int trial = static_cast<int>(job % trials);
    const std::uint64_t seed = trial_seed(config.base_seed, cell.x_index, cell.y_index, trial);
    const Instance inst = sample_instance({config.n, config.d, cell.rho, cell.eta}, seed);
    MatchResult match;
    switch (config.estimator) {
      case EstimatorKind::exhaustive: match = map_exhaustive(inst); break;
      case EstimatorKind::feature: match = feature_map(inst); break;
      case EstimatorKind::ball: match = bayes_ball_estimator(inst, config.ball_radius); break;
      case EstimatorKind::local: {
        LocalSearchConfig local = config.local;
        local.seed = rng::derive(seed, {static_cast<std::uint64_t>(rng::Stream::estimator)});
        local.threads = 1;
        match = local_search_map(inst, local);
        break;
      }
    }
    outcomes[job] = {match.overlap_with_truth, match.exact};
  });

  for (std::size_t c = 0; c < result.cells.size(); ++c) {
    CellResult& cell = result.cells[c];
    if (!cell.feasible) continue;
    long long exact = 0;
    long long overlap = 0;
    for (std::size_t k = 0; k < trials; ++k) {
      exact += outcomes[c * trials + k].exact;
      overlap += outcomes[c * trials + k].overlap;
    }
    const double count = static_cast<double>(trials);
    cell.trials_run = config.trials;
    cell.exact_rate = static_cast<double>(exact) / count;
    cell.mean_overlap_fraction = static_cast<double>(overlap) / (count * config.n);
    cell.se_exact = std::sqrt(cell.exact_rate * (1.0 - cell.exact_rate) / count);
  }
  return result;
}

// ---------------------------------------------------------------------------

HstarReport verify_hstar_concentration(const ModelParams& params, const std::vector<int>& t_values, int trials,
                                       std::uint64_t seed, int threads) {
  params.validate();
  check_trials(trials);
  if (t_values.empty()) throw ParameterError("at least one t value is required");
  for (int t : t_values) check_t(t, params.n);

  const std::size_t nt = t_values.size();
  const std::size_t count = static_cast<std::size_t>(trials);
  // [t index][trial]
  std::vector<std::vector<double>> dev_g(nt, std::vector<double>(count));
  std::vector<std::vector<double>> dev_f(nt, std::vector<double>(count));
  std::vector<std::vector<double>> centred_g(nt, std::vector<double>(count));
  std::vector<std::vector<double>> centred_f(nt, std::vector<double>(count));
  std::vector<std::vector<double>> edges(nt, std::vector<double>(count));

  const double n = params.n;
  const double d = params.d;
  parallel_for(count, threads, [&](std::size_t trial) {
    const std::uint64_t trial_root = rng::derive(seed, {trial});
    const Instance inst = relabel_to_identity(sample_instance(params, trial_root));
    auto engine = rng::make_engine(trial_root, rng::Stream::verifier);
    for (std::size_t k = 0; k < nt; ++k) {
      const int t = t_values[k];
      const Permutation p = random_with_unfixed(params.n, t, engine);
      double v_star_g = 0.0;
      for (const auto& [i, j] : unfixed_edges(p)) v_star_g += inst.b(i, j) * inst.a(i, j);
      double v_star_f = 0.0;
      for (Node i : unfixed_points(p)) v_star_f += inst.y.row(i).dot(inst.x.row(i));
      const double unfixed_edge_count = static_cast<double>(count_unfixed_edges(p));
      const double log_term = std::log(std::numbers::e * n / t);
      const double cg = v_star_g - params.rho * unfixed_edge_count;
      const double cf = v_star_f - params.eta * d * t;
      centred_g[k][trial] = cg;
      centred_f[k][trial] = cf;
      dev_g[k][trial] = std::abs(cg) / (t * std::sqrt(n * log_term));
      dev_f[k][trial] = std::abs(cf) / (t * std::sqrt(std::max(d, log_term) * log_term));
      edges[k][trial] = unfixed_edge_count;
    }
  });

  HstarReport report;
  report.params = params;
  report.t_values = t_values;
  report.trials = trials;
  report.seed = seed;
  for (std::size_t k = 0; k < nt; ++k) {
    HstarRow row;
    row.t = t_values[k];
    row.max_dev_g = max_of(dev_g[k]);
    row.p99_dev_g = percentile(dev_g[k], 0.99);
    row.max_dev_f = max_of(dev_f[k]);
    row.p99_dev_f = percentile(dev_f[k], 0.99);
    const MeanSe g = mean_and_se(centred_g[k]);
    const MeanSe f = mean_and_se(centred_f[k]);
    row.mean_centred_g = g.mean;
    row.se_centred_g = g.se;
    row.mean_centred_f = f.mean;
    row.se_centred_f = f.se;
    row.mean_unfixed_edges = mean_and_se(edges[k]).mean;
    report.finite = report.finite && std::isfinite(row.max_dev_g) && std::isfinite(row.max_dev_f);
    report.rows.push_back(row);
  }
  return report;
}

HstarStability verify_hstar_stability(const ModelParams& params, const std::vector<int>& t_values, int trials,
                                      std::uint64_t seed, int threads) {
  ModelParams doubled = params;
  doubled.n = 2 * params.n;
  std::vector<int> base_t;
  std::vector<int> doubled_t;
  for (int t : t_values) {
    base_t.push_back(std::min(t, params.n));
    doubled_t.push_back(t >= params.n ? doubled.n : t);
  }
  HstarStability out;
  out.base = verify_hstar_concentration(params, base_t, trials, seed, threads);
  out.doubled = verify_hstar_concentration(doubled, doubled_t, trials, rng::derive(seed, {2}), threads);
  out.pass = out.base.finite && out.doubled.finite;
  auto within_factor_two = [](double r) { return r >= 0.5 && r <= 2.0; };
  for (std::size_t k = 0; k < t_values.size(); ++k) {
    const double rg = out.doubled.rows[k].p99_dev_g / out.base.rows[k].p99_dev_g;
    const double rf = out.doubled.rows[k].p99_dev_f / out.base.rows[k].p99_dev_f;
    out.ratio_g.push_back(rg);
    out.ratio_f.push_back(rf);
    // A zero-correlation side can be identically zero at both sizes.
    const bool g_ok = within_factor_two(rg) || (out.base.rows[k].p99_dev_g == 0.0 && out.doubled.rows[k].p99_dev_g == 0.0);
    const bool f_ok = within_factor_two(rf) || (out.base.rows[k].p99_dev_f == 0.0 && out.doubled.rows[k].p99_dev_f == 0.0);
    out.pass = out.pass && g_ok && f_ok;
  }
  return out;
}

// ---------------------------------------------------------------------------

LaplaceReport verify_laplace_bound(const ModelParams& params, int t, int trials, std::uint64_t seed, int threads) {
  params.validate();
  correlation_coefficient(params.rho, "rho");
  correlation_coefficient(params.eta, "eta");
  check_t(t, params.n);
  check_trials(trials);

  const std::vector<double> constants{1.0, 2.0, 4.0};
  const double rho2 = params.rho * params.rho;
  const double eta2 = params.eta * params.eta;
  const double n = params.n;
  const double d = params.d;
  const double log_n = std::log(n);

  const std::size_t count = static_cast<std::size_t>(trials);
  std::vector<double> log_g(count), log_f(count), sb_gap(count), sy_gap(count), edge_counts(count);

  parallel_for(count, threads, [&](std::size_t trial) {
    const std::uint64_t trial_root = rng::derive(seed, {trial});
    const Instance inst = relabel_to_identity(sample_instance(params, trial_root));
    auto engine = rng::make_engine(trial_root, rng::Stream::verifier);
    const Permutation p = random_with_unfixed(params.n, t, engine);

    double cross_b = 0.0;
    double s_b = 0.0;
    for (const auto& [i, j] : unfixed_edges(p)) {
      const double moved = inst.b(p(i), p(j));
      cross_b += moved * inst.b(i, j);
      s_b += moved * moved;
    }
    double cross_y = 0.0;
    double s_y = 0.0;
    for (Node i : unfixed_points(p)) {
      cross_y += inst.y.row(p(i)).dot(inst.y.row(i));
      s_y += inst.y.row(p(i)).squaredNorm();
    }
    const double edge_count = static_cast<double>(count_unfixed_edges(p));
    // log E[exp(ρ/(1-ρ²) V_G) | B] and the feature analogue.
    log_g[trial] = rho2 / (1.0 - rho2) * cross_b + rho2 / (2.0 * (1.0 - rho2)) * s_b;
    log_f[trial] = eta2 / (1.0 - eta2) * cross_y + eta2 / (2.0 * (1.0 - eta2)) * s_y;
    sb_gap[trial] = s_b - edge_count;
    sy_gap[trial] = s_y - d * t;
    edge_counts[trial] = edge_count;
  });

  LaplaceReport report;
  report.params = params;
  report.t = t;
  report.trials = trials;
  report.seed = seed;
  for (double c : constants) {
    LaplaceRow row;
    row.c = c;
    long long over_g = 0;
    long long over_f = 0;
    for (std::size_t k = 0; k < count; ++k) {
      const double bound_g = rho2 / (2.0 * (1.0 - rho2)) * (edge_counts[k] + c * t * std::sqrt(n * log_n));
      const double bound_f =
          eta2 / (2.0 * (1.0 - eta2)) * (d * t + c * t * std::sqrt(std::max(d, log_n) * log_n));
      over_g += log_g[k] > bound_g;
      over_f += log_f[k] > bound_f;
    }
    row.exceed_g = static_cast<double>(over_g) / static_cast<double>(count);
    row.exceed_f = static_cast<double>(over_f) / static_cast<double>(count);
    report.rows.push_back(row);
  }
  const MeanSe sb = mean_and_se(sb_gap);
  const MeanSe sy = mean_and_se(sy_gap);
  report.mean_sb_minus_edges = sb.mean;
  report.se_sb_minus_edges = sb.se;
  report.mean_sy_minus_cells = sy.mean;
  report.se_sy_minus_cells = sy.se;
  report.max_log_transform_g = max_of(log_g);
  report.max_log_transform_f = max_of(log_f);
  report.pass = report.rows.back().exceed_g <= 0.01 && report.rows.back().exceed_f <= 0.01;
  return report;
}

// ---------------------------------------------------------------------------

TailCell verify_gaussian_tails(double var1, double var2, double alpha, double t, long long trials,
                               std::uint64_t seed) {
  if (!(std::abs(var1 - 1.0) <= 0.2) || !(std::abs(var2 - 1.0) <= 0.2))
    throw ParameterError("variances must lie within 0.2 of 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in [0, 1]");
  if (!(t > 0.0)) throw ParameterError("t must be positive");
  check_trials(trials);

  auto engine = rng::make_engine(seed, rng::Stream::verifier);
  rng::StandardNormal normal;
  const double s1 = std::sqrt(var1);
  const double s2 = std::sqrt(var2);
  const double residual = std::sqrt(1.0 - alpha * alpha);
  long long hits = 0;
  for (long long k = 0; k < trials; ++k) {
    const double g1 = normal(engine);
    const double g2 = normal(engine);
    const double w1 = s1 * g1;
    const double w2 = s2 * (alpha * g1 + residual * g2);
    hits += (w1 > t && w2 > t);
  }

  TailCell cell;
  cell.alpha = alpha;
  cell.t = t;
  cell.trials = trials;
  cell.estimate = static_cast<double>(hits) / static_cast<double>(trials);
  cell.se = std::sqrt(cell.estimate * (1.0 - cell.estimate) / static_cast<double>(trials));
  const double mean_excess = ((var1 - 1.0) + (var2 - 1.0)) / 2.0;
  const double s = 1.0 + mean_excess + alpha;
  cell.bound = s / (std::sqrt(2.0 * std::numbers::pi) * t) * std::exp(-t * t / s);
  cell.violation = cell.estimate - 3.0 * cell.se > cell.bound;
  return cell;
}

TailReport verify_tail_grid(double var1, double var2, const std::vector<double>& alphas,
                            const std::vector<double>& ts, long long trials, std::uint64_t seed, int threads) {
  TailReport report;
  report.var1 = var1;
  report.var2 = var2;
  report.trials = trials;
  report.seed = seed;
  report.cells.resize(alphas.size() * ts.size());
  parallel_for(report.cells.size(), threads, [&](std::size_t k) {
    const std::size_t ai = k / ts.size();
    const std::size_t ti = k % ts.size();
    report.cells[k] = verify_gaussian_tails(var1, var2, alphas[ai], ts[ti], trials, rng::derive(seed, {ai, ti}));
  });
  report.pass = !report.cells.empty() &&
                std::none_of(report.cells.begin(), report.cells.end(), [](const TailCell& c) { return c.violation; });
  return report;
}

// ---------------------------------------------------------------------------

ModelParams PartitionRule::params_for(int n) const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ParameterError("partition rule epsilon must lie in [0, 1]");
  if (!(graph_share >= 0.0 && graph_share <= 1.0)) throw ParameterError("partition rule graph_share must lie in [0, 1]");
  const double total = 2.0 * (1.0 - epsilon) * std::log(static_cast<double>(n));
  const double graph = graph_share * total;     // ρ² n/(1-ρ²)
  const double feature = total - graph;         // 2η² d/(1-η²)
  ModelParams params;
  params.n = n;
  params.d = d;
  params.rho = std::sqrt(graph / (n + graph));
  params.eta = std::sqrt(feature / (2.0 * d + feature));
  params.validate();
  return params;
}

PartitionReport partition_trend(const std::vector<int>& n_values, const PartitionRule& rule, int trials,
                                std::uint64_t seed, int threads) {
  check_trials(trials);
  if (n_values.empty()) throw ParameterError("at least one n value is required");
  for (int n : n_values) {
    if (n < 2) throw ParameterError("partition trend needs n ≥ 2 (the ratio divides by n log n)");
    require_enumerable(n);
  }

  PartitionReport report;
  report.rule = rule;
  report.n_values = n_values;
  report.trials = trials;
  report.seed = seed;
  const std::size_t count = static_cast<std::size_t>(trials);
  for (std::size_t k = 0; k < n_values.size(); ++k) {
    const int n = n_values[k];
    const ModelParams params = rule.params_for(n);
    std::vector<double> log_z(count);
    parallel_for(count, threads, [&](std::size_t trial) {
      const Instance inst = relabel_to_identity(sample_instance(params, rng::derive(seed, {k, trial})));
      log_z[trial] = log_partition(inst).log_z;
    });
    PartitionRow row;
    row.n = n;
    row.rho = params.rho;
    row.eta = params.eta;
    const MeanSe stats = mean_and_se(log_z);
    row.mean_log_z = stats.mean;
    row.se_log_z = stats.se;
    row.min_log_z = *std::min_element(log_z.begin(), log_z.end());
    row.log_factorial = std::lgamma(n + 1.0);
    row.ratio = stats.mean / (n * std::log(static_cast<double>(n)));
    report.log_z_non_negative = report.log_z_non_negative && row.min_log_z >= 0.0;
    if (!report.rows.empty() && row.ratio < report.rows.back().ratio) report.ratio_non_decreasing = false;
    report.rows.push_back(row);
  }
  report.pass = report.log_z_non_negative && report.ratio_non_decreasing;
  return report;
}

}  // namespace ctxmatch
