#pragma once

// Monte Carlo harnesses: recovery phase sweeps over the (x, y) plane with
//   x = ρ² n / log n,   y = η² d / log n,
// and empirical checks of the concentration and tail bounds used by the
// recovery analysis. Every harness is deterministic given its seed; trial k of
// cell (i, j) always uses seed derive(base, {i, j, k}) whatever the thread
// count.

#include "ctxmatch/estimators.hpp"
#include "ctxmatch/model.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ctxmatch {

// ---------------------------------------------------------------------------
// Theory regions

enum class Region {
  exact,             // x + y > 4
  almost_exact_gap,  // x/4 + y/2 > 1, x + y < 4
  open,              // between the two proved impossibility/achievability lines
  impossible_half,   // x/2 + y < 1: no estimator recovers more than half
  boundary,          // on one of the three lines
};

struct RegionLabel {
  Region region;
  // x/4 + y/2 < 1: no partial recovery if the sharp almost-exact line holds.
  bool conjectured_no_partial;
};

std::string_view region_name(Region region);

// Throws ParameterError for negative inputs.
RegionLabel theory_classify(double x, double y);

// ---------------------------------------------------------------------------
// Phase sweep

enum class AxisMode {
  plain,  // ρ² = x log n / n;              cells with ρ² ≥ 1 are infeasible
  snr,    // ρ²/(1-ρ²) = x log n / n;        always feasible
};

std::string_view axis_name(AxisMode mode);
AxisMode parse_axis(std::string_view name);

struct SweepConfig {
  int n = 8;
  int d = 64;
  std::vector<double> x_grid;
  std::vector<double> y_grid;
  int trials = 100;
  EstimatorKind estimator = EstimatorKind::exhaustive;
  std::uint64_t base_seed = 0;
  std::vector<double> epsilon_lines;  // recorded for plot overlays only
  AxisMode axis = AxisMode::plain;
  double ball_radius = 0.0;           // estimator = ball
  LocalSearchConfig local;            // estimator = local; seed is derived per trial
  int threads = 1;

  // Throws ConfigError, including for an estimator that cannot run at this n.
  void validate() const;
};

struct CellCoordinates {
  double rho = 0.0;
  double eta = 0.0;
  bool feasible = true;
};

CellCoordinates cell_coordinates(double x, double y, int n, int d, AxisMode axis);

struct CellResult {
  int x_index = 0;
  int y_index = 0;
  double x = 0.0;
  double y = 0.0;
  double rho = 0.0;
  double eta = 0.0;
  bool feasible = true;
  int trials_run = 0;
  double exact_rate = 0.0;
  double mean_overlap_fraction = 0.0;
  double se_exact = 0.0;
  Region region = Region::boundary;
};

struct SweepResult {
  SweepConfig config;
  std::vector<CellResult> cells;  // x-major: (0,0), (0,1), ..., (1,0), ...

  const CellResult& cell(int x_index, int y_index) const;
};

std::uint64_t trial_seed(std::uint64_t base_seed, int x_index, int y_index, int trial);

SweepResult run_phase_sweep(const SweepConfig& config);

// ---------------------------------------------------------------------------
// Concentration of V*_G and V*_F around their means

struct HstarRow {
  int t = 0;
  double max_dev_g = 0.0;   // max |V*_G - ρ|D^E|| / (t sqrt(n log(en/t)))
  double p99_dev_g = 0.0;
  double max_dev_f = 0.0;   // max |V*_F - η d t| / (t sqrt(max(d, log(en/t)) log(en/t)))
  double p99_dev_f = 0.0;
  double mean_centred_g = 0.0;  // mean of V*_G - ρ|D^E| and its standard error
  double se_centred_g = 0.0;
  double mean_centred_f = 0.0;
  double se_centred_f = 0.0;
  double mean_unfixed_edges = 0.0;
};

struct HstarReport {
  ModelParams params;
  std::vector<int> t_values;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<HstarRow> rows;
  bool finite = true;
};

// Requires every t in [2, n]; throws ParameterError otherwise.
HstarReport verify_hstar_concentration(const ModelParams& params, const std::vector<int>& t_values, int trials,
                                       std::uint64_t seed, int threads = 1);

struct HstarStability {
  HstarReport base;
  HstarReport doubled;           // same d, t-values, trials; n doubled
  std::vector<double> ratio_g;   // p99 at 2n over p99 at n, per t
  std::vector<double> ratio_f;
  bool pass = false;             // finite maxima, every ratio in [1/2, 2]
};

// t-values larger than n are mapped to n ("t = n" means derangements at both sizes).
HstarStability verify_hstar_stability(const ModelParams& params, const std::vector<int>& t_values, int trials,
                                      std::uint64_t seed, int threads = 1);

// ---------------------------------------------------------------------------
// Conditional Laplace transforms of V_G and V_F

struct LaplaceRow {
  double c = 0.0;
  double exceed_g = 0.0;  // fraction of draws above the graph-side bound
  double exceed_f = 0.0;
};

struct LaplaceReport {
  ModelParams params;
  int t = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<LaplaceRow> rows;  // C ∈ {1, 2, 4}
  double mean_sb_minus_edges = 0.0;  // S_B(π) - |D^E_π|, mean and standard error
  double se_sb_minus_edges = 0.0;
  double mean_sy_minus_cells = 0.0;  // S_Y(π) - d|D_π|
  double se_sy_minus_cells = 0.0;
  double max_log_transform_g = 0.0;
  double max_log_transform_f = 0.0;
  bool pass = false;                 // exceedance at C = 4 ≤ 0.01 on both sides
};

// Requires |ρ|, |η| < 1 and t in [2, n].
LaplaceReport verify_laplace_bound(const ModelParams& params, int t, int trials, std::uint64_t seed,
                                   int threads = 1);

// ---------------------------------------------------------------------------
// Joint tail of two correlated Gaussians

struct TailCell {
  double alpha = 0.0;
  double t = 0.0;
  long long trials = 0;
  double estimate = 0.0;  // P(W1 > t, W2 > t)
  double se = 0.0;
  double bound = 0.0;     // (s / (sqrt(2π) t)) exp(-t²/s), s = 1 + b̄ + α
  bool violation = false; // estimate - 3 se > bound
};

// var1, var2 within 0.2 of 1; alpha in [0, 1]; t > 0.
TailCell verify_gaussian_tails(double var1, double var2, double alpha, double t, long long trials,
                               std::uint64_t seed);

struct TailReport {
  double var1 = 1.0;
  double var2 = 1.0;
  long long trials = 0;
  std::uint64_t seed = 0;
  std::vector<TailCell> cells;
  bool pass = false;
};

TailReport verify_tail_grid(double var1, double var2, const std::vector<double>& alphas,
                            const std::vector<double>& ts, long long trials, std::uint64_t seed, int threads = 1);

// ---------------------------------------------------------------------------
// Exact log-partition trend

// Chooses (ρ, η) per n so that
//   ρ² n/(1-ρ²) + 2η² d/(1-η²) = 2(1-ε) log n,
// giving `graph_share` of the total to the graph term. ε = 1 is the
// zero-signal rule ρ = η = 0.
struct PartitionRule {
  double epsilon = 1.0;
  int d = 4;
  double graph_share = 0.5;

  ModelParams params_for(int n) const;
};

struct PartitionRow {
  int n = 0;
  double rho = 0.0;
  double eta = 0.0;
  double mean_log_z = 0.0;
  double se_log_z = 0.0;
  double min_log_z = 0.0;
  double log_factorial = 0.0;
  double ratio = 0.0;  // mean_log_z / (n log n)
};

struct PartitionReport {
  PartitionRule rule;
  std::vector<int> n_values;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<PartitionRow> rows;
  bool log_z_non_negative = true;
  bool ratio_non_decreasing = true;
  bool pass = false;
};

// Every n in [2, 10].
PartitionReport partition_trend(const std::vector<int>& n_values, const PartitionRule& rule, int trials,
                                std::uint64_t seed, int threads = 1);

}  // namespace ctxmatch
