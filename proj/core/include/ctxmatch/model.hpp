#pragma once

#include "ctxmatch/permutation.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace ctxmatch {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct ModelParams {
  int n = 1;          // nodes
  int d = 1;          // feature dimension
  double rho = 0.0;   // edge-weight correlation
  double eta = 0.0;   // feature correlation

  // Throws ParameterError naming the offending field.
  void validate() const;
};

// One draw of the correlated Gaussian model.
//
// `a` and `b` are dense symmetric n×n with zero diagonal; each unordered pair
// {i, j} carries one weight, read through either (i, j) or (j, i). Sums over
// edges always run over i < j. `x` and `y` are n×d, one feature row per node.
// Instances are immutable after construction and safe to share across threads.
struct Instance {
  ModelParams params;
  Matrix a;
  Matrix b;
  Matrix x;
  Matrix y;
  Permutation pi_star;
  std::uint64_t seed = 0;

  int n() const noexcept { return params.n; }
  int d() const noexcept { return params.d; }

  // Shape, symmetry and zero-diagonal checks; throws DimensionError.
  void validate() const;
};

// Draws π* uniformly, then
//   B_{π*(i),π*(j)} = ρ A_ij + sqrt(1-ρ²) Z_ij,   Y_{π*(i),·} = η X_i + sqrt(1-η²) Z'_i
// with A, Z, X, Z' i.i.d. standard normal, each from its own substream of `seed`.
Instance sample_instance(const ModelParams& params, std::uint64_t seed);

// Relabels B and Y by (π*)^{-1} so that the hidden permutation becomes the
// identity: B'_ij = B_{π*(i),π*(j)}, Y'_i = Y_{π*(i)}.
Instance relabel_to_identity(const Instance& inst);

}  // namespace ctxmatch
