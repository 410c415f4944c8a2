#pragma once

// Brute-force reference implementations. They share no code with the library
// beyond the Instance/Permutation containers and scan every pair, node and
// permutation directly.

#include "ctxmatch/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace oracle {

using ctxmatch::Instance;
using ctxmatch::Permutation;

inline std::vector<int> iota(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// Calls f(mapping) for each permutation of {0..n-1} in lexicographic order.
template <typename F>
void each_permutation(int n, F&& f) {
  std::vector<int> m = iota(n);
  do {
    f(m);
  } while (std::next_permutation(m.begin(), m.end()));
}

inline long long count_with_unfixed(int n, int t) {
  long long count = 0;
  each_permutation(n, [&](const std::vector<int>& m) {
    int moved = 0;
    for (int i = 0; i < n; ++i) moved += m[i] != i;
    count += moved == t;
  });
  return count;
}

struct Sums {
  double v_star_g = 0.0;
  double v_g = 0.0;
  double v_star_f = 0.0;
  double v_f = 0.0;
  double v = 0.0;
};

// Sums of the Hamiltonian taken literally: edges whose image is a different
// unordered pair, nodes that move, every feature coordinate.
inline Sums direct_sums(const Instance& inst, const std::vector<int>& p) {
  const int n = inst.n();
  const int d = inst.d();
  Sums s;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int lo = std::min(p[i], p[j]);
      const int hi = std::max(p[i], p[j]);
      if (lo == i && hi == j) continue;
      s.v_star_g += inst.b(i, j) * inst.a(i, j);
      s.v_g += inst.b(lo, hi) * inst.a(i, j);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (p[i] == i) continue;
    for (int k = 0; k < d; ++k) {
      s.v_star_f += inst.y(i, k) * inst.x(i, k);
      s.v_f += inst.y(p[i], k) * inst.x(i, k);
    }
  }
  const double rho = inst.params.rho;
  const double eta = inst.params.eta;
  s.v = rho / (1 - rho * rho) * (s.v_star_g - s.v_g) + eta / (1 - eta * eta) * (s.v_star_f - s.v_f);
  return s;
}

inline double direct_v(const Instance& inst, const std::vector<int>& p) { return direct_sums(inst, p).v; }

// Lexicographically first minimizer of V over S_n.
inline std::vector<int> argmin_v(const Instance& inst) {
  std::vector<int> best;
  double best_v = INFINITY;
  each_permutation(inst.n(), [&](const std::vector<int>& m) {
    const double v = direct_v(inst, m);
    if (v < best_v) {
      best_v = v;
      best = m;
    }
  });
  return best;
}

// Plain Σ exp(-V) without any rescaling.
inline double naive_z(const Instance& inst) {
  double z = 0.0;
  each_permutation(inst.n(), [&](const std::vector<int>& m) { z += std::exp(-direct_v(inst, m)); });
  return z;
}

inline int agree(const std::vector<int>& p, const std::vector<int>& q) {
  int c = 0;
  for (std::size_t i = 0; i < p.size(); ++i) c += p[i] == q[i];
  return c;
}

// Σ_{q : 1 - ov(p,q)/n ≤ r} exp(-V(q)) / Z by a direct scan.
inline double ball_mass(const Instance& inst, const std::vector<int>& p, double r) {
  const int n = inst.n();
  double inside = 0.0;
  double z = 0.0;
  each_permutation(n, [&](const std::vector<int>& q) {
    const double w = std::exp(-direct_v(inst, q));
    z += w;
    if (1.0 - static_cast<double>(agree(p, q)) / n <= r + 1e-12) inside += w;
  });
  return inside / z;
}

inline std::vector<int> to_vector(const Permutation& p) { return {p.mapping().begin(), p.mapping().end()}; }

}  // namespace oracle
