#include "ctxmatch/permutation.hpp"

#include "ctxmatch/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace ctxmatch {

Permutation::Permutation(std::vector<Node> mapping) : map_(std::move(mapping)) {
  std::vector<char> seen(map_.size(), 0);
  for (Node v : map_) {
    if (v < 0 || static_cast<std::size_t>(v) >= map_.size() || seen[static_cast<std::size_t>(v)]) {
      throw ParameterError("permutation mapping is not a bijection of {0.." + std::to_string(map_.size()) +
                           "-1}");
    }
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

Permutation Permutation::identity(int n) {
  if (n < 0) throw ParameterError("permutation size must be non-negative");
  Permutation p;
  p.map_.resize(static_cast<std::size_t>(n));
  std::iota(p.map_.begin(), p.map_.end(), 0);
  return p;
}

Permutation Permutation::transposition(int n, Node i, Node j) {
  Permutation p = identity(n);
  p.swap_images(i, j);
  return p;
}

Permutation Permutation::uniform(int n, rng::Engine& engine) {
  Permutation p = identity(n);
  for (int k = n - 1; k > 0; --k) {
    const int r = rng::uniform_int(engine, 0, k);
    std::swap(p.map_[static_cast<std::size_t>(k)], p.map_[static_cast<std::size_t>(r)]);
  }
  return p;
}

Permutation Permutation::inverse() const {
  Permutation inv;
  inv.map_.resize(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) inv.map_[static_cast<std::size_t>(map_[i])] = static_cast<Node>(i);
  return inv;
}

Permutation Permutation::compose(const Permutation& rhs) const {
  if (rhs.size() != size()) throw DimensionError("cannot compose permutations of different sizes");
  Permutation out;
  out.map_.resize(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) out.map_[i] = map_[static_cast<std::size_t>(rhs.map_[i])];
  return out;
}

void Permutation::swap_images(Node i, Node j) {
  if (i < 0 || j < 0 || i >= size() || j >= size()) throw ParameterError("swap index out of range");
  std::swap(map_[static_cast<std::size_t>(i)], map_[static_cast<std::size_t>(j)]);
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t i = 0; i < map_.size(); ++i)
    if (map_[i] != static_cast<Node>(i)) return false;
  return true;
}

int overlap(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size()) {
    throw DimensionError("overlap of permutations with sizes " + std::to_string(p.size()) + " and " +
                         std::to_string(q.size()));
  }
  int count = 0;
  for (Node i = 0; i < p.size(); ++i) count += (p(i) == q(i));
  return count;
}

std::vector<Node> unfixed_points(const Permutation& p) {
  std::vector<Node> out;
  for (Node i = 0; i < p.size(); ++i)
    if (p(i) != i) out.push_back(i);
  return out;
}

int count_unfixed_points(const Permutation& p) {
  int count = 0;
  for (Node i = 0; i < p.size(); ++i) count += (p(i) != i);
  return count;
}

std::vector<Edge> unfixed_edges(const Permutation& p) {
  std::vector<Edge> out;
  for (Node i = 0; i < p.size(); ++i)
    for (Node j = i + 1; j < p.size(); ++j)
      if (edge_moved(p, i, j)) out.emplace_back(i, j);
  return out;
}

long long count_unfixed_edges(const Permutation& p) {
  const long long n = p.size();
  long long fixed = 0;
  long long two_cycles = 0;
  for (Node i = 0; i < p.size(); ++i) {
    if (p(i) == i)
      ++fixed;
    else if (p(p(i)) == i && i < p(i))
      ++two_cycles;
  }
  return n * (n - 1) / 2 - fixed * (fixed - 1) / 2 - two_cycles;
}

Permutation random_with_unfixed(int n, int t, rng::Engine& engine) {
  if (n < 0 || t < 0 || t > n || t == 1) {
    throw ParameterError("no permutation of size " + std::to_string(n) + " has exactly " + std::to_string(t) +
                         " unfixed points");
  }
  // Partial Fisher-Yates: the first t entries of `pool` are a uniform t-subset.
  std::vector<Node> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (int k = 0; k < t; ++k) {
    const int r = rng::uniform_int(engine, k, n - 1);
    std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(r)]);
  }
  // Uniform derangement of {0..t-1} by rejection; acceptance rate tends to 1/e.
  std::vector<Node> local(static_cast<std::size_t>(t));
  for (;;) {
    std::iota(local.begin(), local.end(), 0);
    for (int k = t - 1; k > 0; --k) {
      const int r = rng::uniform_int(engine, 0, k);
      std::swap(local[static_cast<std::size_t>(k)], local[static_cast<std::size_t>(r)]);
    }
    bool deranged = true;
    for (int k = 0; k < t && deranged; ++k) deranged = local[static_cast<std::size_t>(k)] != k;
    if (deranged) break;
  }
  std::vector<Node> map(static_cast<std::size_t>(n));
  std::iota(map.begin(), map.end(), 0);
  for (int k = 0; k < t; ++k)
    map[static_cast<std::size_t>(pool[static_cast<std::size_t>(k)])] =
        pool[static_cast<std::size_t>(local[static_cast<std::size_t>(k)])];
  return Permutation(std::move(map));
}

}  // namespace ctxmatch
