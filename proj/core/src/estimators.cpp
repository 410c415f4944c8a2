#include "ctxmatch/estimators.hpp"

#include "ctxmatch/assignment.hpp"
#include "ctxmatch/errors.hpp"
#include "ctxmatch/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace ctxmatch {

namespace {

using Clock = std::chrono::steady_clock;

bool singular(double c) { return std::abs(c) >= 1.0; }

MatchResult finish(const Instance& inst, Permutation estimate, EstimatorKind kind, Clock::time_point started) {
  MatchResult out;
  out.estimate = std::move(estimate);
  out.estimator_name = std::string(estimator_name(kind));
  score_against_truth(inst, out);
  out.wall_time = Clock::now() - started;
  return out;
}

// Lexicographic minimum of (key, mapping) over S_n, visiting in lexicographic
// order so that the first strict minimum is also the smallest mapping.
template <typename Key>
Permutation enumerate_argmin(int n, Key&& key) {
  std::vector<Node> map(n);
  std::iota(map.begin(), map.end(), 0);
  Permutation best = Permutation::identity(n);
  auto best_key = key(best);
  while (std::next_permutation(map.begin(), map.end())) {
    Permutation p(map);
    auto k = key(p);
    if (k < best_key) {
      best_key = k;
      best = std::move(p);
    }
  }
  return best;
}

// Energy with the singular sides replaced by exact-match residuals:
// (Σ residuals, finite part of V). π* has residual exactly 0.
class NoiseFreeKey {
 public:
  explicit NoiseFreeKey(const Instance& inst)
      : inst_(inst), graph_singular_(singular(inst.params.rho)), feature_singular_(singular(inst.params.eta)) {
    const int n = inst.n();
    if (feature_singular_) {
      feature_residual_.resize(n, n);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          feature_residual_(k, i) = (inst.y.row(k) - inst.params.eta * inst.x.row(i)).squaredNorm();
    } else {
      cross_ = inst.y * inst.x.transpose();
    }
  }

  std::pair<double, double> operator()(const Permutation& p) const {
    const int n = inst_.n();
    const double rho = inst_.params.rho;
    const double eta = inst_.params.eta;
    double residual = 0.0;
    double finite = 0.0;
    if (graph_singular_) {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          const double diff = inst_.b(p(i), p(j)) - rho * inst_.a(i, j);
          residual += diff * diff;
        }
    } else {
      double star = 0.0, moved = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (edge_moved(p, i, j)) {
            star += inst_.b(i, j) * inst_.a(i, j);
            moved += inst_.b(p(i), p(j)) * inst_.a(i, j);
          }
      finite += rho / (1.0 - rho * rho) * (star - moved);
    }
    if (feature_singular_) {
      for (int i = 0; i < n; ++i) residual += feature_residual_(p(i), i);
    } else {
      double star = 0.0, moved = 0.0;
      for (int i = 0; i < n; ++i)
        if (p(i) != i) {
          star += cross_(i, i);
          moved += cross_(p(i), i);
        }
      finite += eta / (1.0 - eta * eta) * (star - moved);
    }
    return {residual, finite};
  }

 private:
  const Instance& inst_;
  bool graph_singular_;
  bool feature_singular_;
  Matrix feature_residual_;
  Matrix cross_;
};

struct Walk {
  Permutation p;
  HamiltonianBreakdown state;
  bool certified = false;
};

double step_tolerance(double v) { return 1e-12 * (1.0 + std::abs(v)); }

// First-improvement 2-swap descent; `certified` when a full sweep found nothing.
void descend(const HamiltonianEvaluator& eval, Walk& walk, int max_sweeps) {
  const int n = walk.p.size();
  walk.certified = false;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool improved = false;
    for (Node i = 0; i < n; ++i) {
      for (Node j = i + 1; j < n; ++j) {
        HamiltonianBreakdown cand = eval.swapped(walk.p, walk.state, i, j);
        if (cand.v < walk.state.v - step_tolerance(walk.state.v)) {
          walk.p.swap_images(i, j);
          walk.state = cand;
          improved = true;
        }
      }
    }
    walk.state = eval.evaluate(walk.p);  // drop accumulated rounding
    if (!improved) {
      walk.certified = true;
      return;
    }
  }
}

void anneal(const HamiltonianEvaluator& eval, Walk& walk, const AnnealConfig& schedule, int sweeps,
            rng::Engine& engine) {
  const int n = walk.p.size();
  if (n < 2) return;
  const long long moves = static_cast<long long>(n) * (n - 1) / 2;
  Walk best = walk;
  double temperature = schedule.t0;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (long long m = 0; m < moves; ++m) {
      const Node i = rng::uniform_int(engine, 0, n - 1);
      Node j = rng::uniform_int(engine, 0, n - 2);
      if (j >= i) ++j;
      HamiltonianBreakdown cand = eval.swapped(walk.p, walk.state, i, j);
      const double delta = cand.v - walk.state.v;
      if (delta <= 0.0 || rng::uniform01(engine) < std::exp(-delta / temperature)) {
        walk.p.swap_images(i, j);
        walk.state = cand;
        if (walk.state.v < best.state.v) best = walk;
      }
    }
    walk.state = eval.evaluate(walk.p);
    temperature *= schedule.cooling;
  }
  walk = std::move(best);
  walk.state = eval.evaluate(walk.p);
}

Walk run_restart(const HamiltonianEvaluator& eval, Permutation start, const LocalSearchConfig& config,
                 std::uint64_t restart) {
  Walk walk{std::move(start), {}, false};
  walk.state = eval.evaluate(walk.p);
  if (config.anneal) {
    auto engine = rng::make_engine(config.seed, {static_cast<std::uint64_t>(rng::Stream::estimator), restart, 1});
    anneal(eval, walk, *config.anneal, config.max_sweeps, engine);
  }
  descend(eval, walk, config.max_sweeps);
  return walk;
}

}  // namespace

std::string_view estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::exhaustive: return "exhaustive";
    case EstimatorKind::feature: return "feature";
    case EstimatorKind::local: return "local";
    case EstimatorKind::ball: return "ball";
  }
  return "unknown";
}

EstimatorKind parse_estimator(std::string_view name) {
  for (EstimatorKind kind :
       {EstimatorKind::exhaustive, EstimatorKind::feature, EstimatorKind::local, EstimatorKind::ball})
    if (estimator_name(kind) == name) return kind;
  throw ParameterError("unknown estimator '" + std::string(name) + "' (expected exhaustive, feature, local or ball)");
}

HamiltonianBreakdown breakdown_against_truth(const Instance& inst, const Permutation& estimate) {
  const Permutation centred = inst.pi_star.inverse().compose(estimate);
  return hamiltonian(relabel_to_identity(inst), centred);
}

void score_against_truth(const Instance& inst, MatchResult& result) {
  result.overlap_with_truth = overlap(result.estimate, inst.pi_star);
  result.exact = result.overlap_with_truth == inst.n();
  if (singular(inst.params.rho) || singular(inst.params.eta))
    result.objective = std::numeric_limits<double>::quiet_NaN();
  else
    result.objective = breakdown_against_truth(inst, result.estimate).v;
}

MatchResult map_exhaustive(const Instance& inst) {
  const auto started = Clock::now();
  require_enumerable(inst.n());
  Permutation best;
  if (singular(inst.params.rho) || singular(inst.params.eta)) {
    const NoiseFreeKey key(inst);
    best = enumerate_argmin(inst.n(), key);
  } else {
    const HamiltonianEvaluator eval(inst);
    best = enumerate_argmin(inst.n(), [&](const Permutation& p) { return eval.energy(p); });
  }
  return finish(inst, std::move(best), EstimatorKind::exhaustive, started);
}

MatchResult feature_map(const Instance& inst) {
  const auto started = Clock::now();
  if (inst.x.rows() != inst.n() || inst.y.rows() != inst.n() || inst.x.cols() != inst.y.cols())
    throw DimensionError("feature matrices must both be n×d");
  // cost(i, k) = -X_i·Y_k: row i is assigned column π(i).
  const Matrix cost = -(inst.x * inst.y.transpose());
  const Assignment assignment = solve_assignment(cost);
  return finish(inst, Permutation(assignment.column_of_row), EstimatorKind::feature, started);
}

void LocalSearchConfig::validate() const {
  if (restarts < 1) throw ParameterError("restarts must be ≥ 1");
  if (max_sweeps < 1) throw ParameterError("max_sweeps must be ≥ 1");
  if (threads < 1) throw ParameterError("threads must be ≥ 1");
  if (anneal) {
    if (!(anneal->t0 > 0.0)) throw ParameterError("annealing t0 must be positive");
    if (!(anneal->cooling > 0.0 && anneal->cooling < 1.0)) throw ParameterError("annealing cooling must lie in (0, 1)");
  }
}

MatchResult local_search_from(const Instance& inst, const Permutation& start, const LocalSearchConfig& config) {
  const auto started = Clock::now();
  config.validate();
  if (start.size() != inst.n()) throw DimensionError("start permutation has the wrong size");
  const HamiltonianEvaluator eval(inst);
  Walk walk = run_restart(eval, start, config, 0);
  MatchResult out = finish(inst, std::move(walk.p), EstimatorKind::local, started);
  out.locally_optimal = walk.certified;
  return out;
}

MatchResult local_search_map(const Instance& inst, const LocalSearchConfig& config) {
  const auto started = Clock::now();
  config.validate();
  const HamiltonianEvaluator eval(inst);
  const int n = inst.n();

  std::vector<Walk> walks(config.restarts);
  parallel_for(walks.size(), config.threads, [&](std::size_t k) {
    Permutation start;
    if (k == 0 && config.init == LocalInit::identity) {
      start = Permutation::identity(n);
    } else if (k == 0 && config.init == LocalInit::feature) {
      start = feature_map(inst).estimate;
    } else {
      auto engine = rng::make_engine(config.seed, {static_cast<std::uint64_t>(rng::Stream::estimator), k, 0});
      start = Permutation::uniform(n, engine);
    }
    walks[k] = run_restart(eval, std::move(start), config, k);
  });

  std::size_t best = 0;
  for (std::size_t k = 1; k < walks.size(); ++k) {
    const double v = walks[k].state.v;
    const double vb = walks[best].state.v;
    if (v < vb || (v == vb && walks[k].p < walks[best].p)) best = k;
  }
  MatchResult out = finish(inst, std::move(walks[best].p), EstimatorKind::local, started);
  out.locally_optimal = walks[best].certified;
  return out;
}

MatchResult bayes_ball_estimator(const Instance& inst, double r) {
  const auto started = Clock::now();
  if (!(r >= 0.0 && r < 1.0)) throw ParameterError("ball radius r must lie in [0, 1), got " + std::to_string(r));
  require_enumerable(inst.n(), kBallEnumerationCap);
  const PosteriorTable table(inst);
  const int n = inst.n();

  std::size_t best = 0;
  if (r < 1.0 / n) {
    for (std::size_t k = 1; k < table.size(); ++k)
      if (table.energy(k) < table.energy(best)) best = k;
  } else {
    double best_mass = table.ball_mass(0, r);
    for (std::size_t k = 1; k < table.size(); ++k) {
      const double mass = table.ball_mass(k, r);
      if (mass > best_mass) {
        best_mass = mass;
        best = k;
      }
    }
  }
  return finish(inst, table.permutation(best), EstimatorKind::ball, started);
}

long long transposition_failure_count(const Instance& inst) {
  const Instance centred = relabel_to_identity(inst);
  const HamiltonianEvaluator eval(centred);
  const int n = inst.n();
  const Permutation id = Permutation::identity(n);
  const HamiltonianBreakdown origin = eval.evaluate(id);
  long long count = 0;
  for (Node i = 0; i < n; ++i)
    for (Node j = i + 1; j < n; ++j) count += eval.swapped(id, origin, i, j).v < 0.0;
  return count;
}

bool is_swap_local_minimum(const Instance& inst, const Permutation& p, double tol) {
  const double v = hamiltonian(inst, p).v;
  const double slack = tol * (1.0 + std::abs(v));
  Permutation q = p;
  for (Node i = 0; i < p.size(); ++i) {
    for (Node j = i + 1; j < p.size(); ++j) {
      q.swap_images(i, j);
      const double vq = hamiltonian(inst, q).v;
      q.swap_images(i, j);
      if (vq < v - slack) return false;
    }
  }
  return true;
}

}  // namespace ctxmatch
