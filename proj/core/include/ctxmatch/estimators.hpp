#pragma once

// Matchers that recover π* from (A, B, X, Y).
//
// Estimators only look at the observed data. Each one minimizes (or, for the
// ball estimator, integrates) the Hamiltonian evaluated in the stored
// labeling, which differs from the π*-centred Hamiltonian by a constant.
// π* is read afterwards, to fill overlap/exact/objective in MatchResult.
// Ties are always broken towards the lexicographically smallest mapping.

#include "ctxmatch/hamiltonian.hpp"
#include "ctxmatch/model.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ctxmatch {

enum class EstimatorKind { exhaustive, feature, local, ball };

std::string_view estimator_name(EstimatorKind kind);
// Accepts "exhaustive", "feature", "local", "ball"; throws ParameterError.
EstimatorKind parse_estimator(std::string_view name);

struct MatchResult {
  Permutation estimate;
  int overlap_with_truth = 0;
  bool exact = false;
  // V(π*^{-1} ∘ estimate) around the truth; NaN in noise-free mode.
  double objective = 0.0;
  std::string estimator_name;
  std::chrono::duration<double, std::milli> wall_time{0};
  // Set by local search: no single swap strictly lowers V at the returned point.
  std::optional<bool> locally_optimal;
};

// Largest n accepted by the ball estimator, which tabulates the whole posterior.
inline constexpr int kBallEnumerationCap = 7;

// argmin_π V(π) over S_n (n ≤ 10). With |ρ| = 1 or |η| = 1 the singular side
// is matched exactly first (zero residual), then the finite side decides.
MatchResult map_exhaustive(const Instance& inst);

// argmax_π Σ_i Y_{π(i)}·X_i by linear assignment; ignores A and B.
MatchResult feature_map(const Instance& inst);

enum class LocalInit { identity, feature, random };

struct AnnealConfig {
  double t0 = 1.0;
  double cooling = 0.97;  // geometric, applied once per sweep
};

struct LocalSearchConfig {
  LocalInit init = LocalInit::feature;
  int restarts = 1;
  int max_sweeps = 200;
  std::optional<AnnealConfig> anneal;
  std::uint64_t seed = 0;  // drives random starts and annealing moves
  int threads = 1;         // restarts run in parallel

  void validate() const;
};

// Restart 0 starts from `init`; later restarts start from uniform random
// permutations. Each restart runs first-improvement 2-swap descent (after an
// annealing phase when `anneal` is set) and the lowest energy wins.
// Requires |ρ|, |η| < 1.
MatchResult local_search_map(const Instance& inst, const LocalSearchConfig& config);

// One restart of local_search_map from a caller-supplied start.
MatchResult local_search_from(const Instance& inst, const Permutation& start, const LocalSearchConfig& config);

// argmax_π posterior_ball_mass(π, r), n ≤ 7. For r < 1/n the ball is a single
// point and the comparison is made on V directly, so r = 0 reproduces
// map_exhaustive.
MatchResult bayes_ball_estimator(const Instance& inst, double r);

// |{τ transposition : V(τ) < 0}| around π*, one O(n) swap update per τ.
long long transposition_failure_count(const Instance& inst);

// overlap/exact/objective for a given estimate.
void score_against_truth(const Instance& inst, MatchResult& result);

// Breakdown of V around the truth, for reporting.
HamiltonianBreakdown breakdown_against_truth(const Instance& inst, const Permutation& estimate);

// True when no single swap lowers V at p by more than tol·(1 + |V(p)|),
// checked by full recomputation.
bool is_swap_local_minimum(const Instance& inst, const Permutation& p, double tol = kNumeric.delta_tolerance);

}  // namespace ctxmatch
