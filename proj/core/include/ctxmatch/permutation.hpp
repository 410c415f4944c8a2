#pragma once

#include "ctxmatch/rng.hpp"

#include <compare>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace ctxmatch {

using Node = int;
using Edge = std::pair<Node, Node>;  // always stored with first < second

// A bijection of {0, ..., n-1}; mapping()[i] is the image of i.
class Permutation {
 public:
  Permutation() = default;

  // Throws ParameterError unless `mapping` is a bijection of {0..n-1}.
  explicit Permutation(std::vector<Node> mapping);

  static Permutation identity(int n);
  static Permutation transposition(int n, Node i, Node j);
  // Fisher-Yates shuffle of the identity.
  static Permutation uniform(int n, rng::Engine& engine);

  int size() const noexcept { return static_cast<int>(map_.size()); }
  Node operator()(Node i) const { return map_[static_cast<std::size_t>(i)]; }
  std::span<const Node> mapping() const noexcept { return map_; }

  Permutation inverse() const;
  // (*this ∘ rhs)(i) = (*this)(rhs(i))
  Permutation compose(const Permutation& rhs) const;
  // *this ← *this ∘ (i j)
  void swap_images(Node i, Node j);

  bool is_identity() const noexcept;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  // Lexicographic order on the mapping; the tie-break rule of every estimator.
  friend auto operator<=>(const Permutation& a, const Permutation& b) { return a.map_ <=> b.map_; }

 private:
  std::vector<Node> map_;
};

// |{i : p(i) = q(i)}|. Throws DimensionError on length mismatch.
int overlap(const Permutation& p, const Permutation& q);

// D_p, in increasing order.
std::vector<Node> unfixed_points(const Permutation& p);
int count_unfixed_points(const Permutation& p);

// True when p({i, j}) ≠ {i, j} as an unordered pair.
inline bool edge_moved(const Permutation& p, Node i, Node j) {
  const Node pi = p(i);
  const Node pj = p(j);
  return !((pi == i && pj == j) || (pi == j && pj == i));
}

// D^E_p in lexicographic (i, j) order, i < j.
std::vector<Edge> unfixed_edges(const Permutation& p);
// |D^E_p| = C(n,2) - C(|F_p|,2) - #(2-cycles), in O(n).
long long count_unfixed_edges(const Permutation& p);

// Uniform draw from S_{n,t}: a uniform t-subset deranged uniformly.
// t must be 0 or in [2, n].
Permutation random_with_unfixed(int n, int t, rng::Engine& engine);

}  // namespace ctxmatch
