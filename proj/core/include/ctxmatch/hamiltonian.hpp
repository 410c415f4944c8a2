#pragma once

// Posterior Hamiltonian of a permutation and exact Gibbs quantities at small n.
//
// All functions read the instance in its stored labeling and treat that
// labeling as the reference: V(id) = 0 and V(p) is the log-likelihood ratio
// of the identity against p. Called on relabel_to_identity(inst) this is the
// Hamiltonian around the hidden permutation; called on raw data it is the
// same energy up to the additive constant V_raw(π*), which is how the
// estimators use it without ever reading π*.

#include "ctxmatch/combinatorics.hpp"
#include "ctxmatch/model.hpp"

#include <cstdint>
#include <vector>

namespace ctxmatch {

struct NumericConfig {
  int enumeration_cap = 10;              // n ≤ cap for anything that walks S_n
  double delta_tolerance = 1e-9;         // |delta_swap.v - recompute.v| ≤ tol·(1 + |v|)
  double normalization_tolerance = 1e-8; // |Σ posterior - 1|
};

inline constexpr NumericConfig kNumeric{};

struct HamiltonianBreakdown {
  double v_star_g = 0.0;  // Σ_{e ∈ D^E} B_e A_e
  double v_g = 0.0;       // Σ_{e ∈ D^E} B_{p(e)} A_e
  double v_star_f = 0.0;  // Σ_{i ∈ D, j} Y_ij X_ij
  double v_f = 0.0;       // Σ_{i ∈ D, j} Y_{p(i) j} X_ij
  double v = 0.0;
  double coeff_g = 0.0;   // ρ/(1-ρ²)
  double coeff_f = 0.0;   // η/(1-η²)

  void assemble() noexcept { v = coeff_g * (v_star_g - v_g) + coeff_f * (v_star_f - v_f); }
};

struct LogPartition {
  double log_z = 0.0;
  BigInt n_terms;  // n!
};

// c/(1-c²); throws CoefficientSingularityError when |c| = 1.
double correlation_coefficient(double c, const char* name);

HamiltonianBreakdown hamiltonian(const Instance& inst, const Permutation& p);

// Breakdown of p∘(i j) from the breakdown of p, touching only the 2n-3 edges
// and two feature rows incident to i or j: O(n + d).
HamiltonianBreakdown delta_swap(const Instance& inst, const Permutation& p, const HamiltonianBreakdown& breakdown,
                                Node i, Node j);

// Caches the n×n feature cross products Y_k·X_i so that a full evaluation is
// O(n²) and a swap update O(n), independent of d. Holds a pointer to the
// instance, which must outlive the evaluator.
class HamiltonianEvaluator {
 public:
  explicit HamiltonianEvaluator(const Instance& inst);

  const Instance& instance() const noexcept { return *inst_; }
  double coeff_g() const noexcept { return coeff_g_; }
  double coeff_f() const noexcept { return coeff_f_; }

  HamiltonianBreakdown evaluate(const Permutation& p) const;
  double energy(const Permutation& p) const { return evaluate(p).v; }
  // Same contract as delta_swap.
  HamiltonianBreakdown swapped(const Permutation& p, const HamiltonianBreakdown& breakdown, Node i, Node j) const;

  // Y_k · X_i
  double cross(Node k, Node i) const { return cross_(k, i); }

 private:
  const Instance* inst_;
  double coeff_g_;
  double coeff_f_;
  Matrix cross_;
};

// Throws EnumerationCapError when n exceeds the cap.
void require_enumerable(int n, int cap = kNumeric.enumeration_cap);

// Normalized distance 1 - ov(p, q)/n.
double permutation_distance(const Permutation& p, const Permutation& q);

// log Σ_{π ∈ S_n} exp(-V(π)) by a streaming log-sum-exp over all n!
// permutations. log_z ≥ 0 is checked on every call.
LogPartition log_partition(const Instance& inst);

double posterior(const Instance& inst, const Permutation& p);

// Σ posterior(q) over d(p, q) ≤ r; r in [0, 1).
double posterior_ball_mass(const Instance& inst, const Permutation& p, double r);

// The whole Gibbs measure over S_n, permutations in lexicographic order.
class PosteriorTable {
 public:
  explicit PosteriorTable(const Instance& inst);

  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return energies_.size(); }
  double log_z() const noexcept { return log_z_; }
  double energy(std::size_t index) const { return energies_[index]; }
  double probability(std::size_t index) const;
  Permutation permutation(std::size_t index) const;
  // Requires r in [0, 1).
  double ball_mass(std::size_t center, double r) const;
  int overlap_between(std::size_t a, std::size_t b) const;

 private:
  int n_;
  std::vector<std::uint8_t> maps_;  // size() rows of n entries
  std::vector<double> energies_;
  double log_z_;
};

}  // namespace ctxmatch
