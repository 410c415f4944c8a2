#include "ctxmatch/hamiltonian.hpp"

#include "ctxmatch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace ctxmatch {

namespace {

// Streaming log-sum-exp with a running maximum.
class LogSumExp {
 public:
  void add(double x) {
    if (x <= max_) {
      sum_ += std::exp(x - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    }
  }
  double value() const { return max_ + std::log(sum_); }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

void check_same_size(const Instance& inst, const Permutation& p) {
  if (p.size() != inst.n())
    throw DimensionError("permutation has size " + std::to_string(p.size()) + " but instance has n = " +
                         std::to_string(inst.n()));
}

void check_swap(const Instance& inst, Node i, Node j) {
  if (i == j) throw ParameterError("swap requires two distinct nodes, got i = j = " + std::to_string(i));
  if (i < 0 || j < 0 || i >= inst.n() || j >= inst.n()) throw ParameterError("swap node out of range");
}

void check_radius(double r) {
  if (!(r >= 0.0 && r < 1.0)) throw ParameterError("ball radius r must lie in [0, 1), got " + std::to_string(r));
}

// Smallest overlap k with 1 - k/n ≤ r; the slack absorbs rounding in n(1 - r).
int min_overlap(int n, double r) { return static_cast<int>(std::ceil(n * (1.0 - r) - 1e-9)); }

double row_dot(const Matrix& lhs, Node i, const Matrix& rhs, Node k) { return lhs.row(i).dot(rhs.row(k)); }

// Visits every permutation of {0..n-1} in lexicographic order.
template <typename Visit>
void for_each_permutation(int n, Visit&& visit) {
  std::vector<Node> map(static_cast<std::size_t>(n));
  std::iota(map.begin(), map.end(), 0);
  Permutation p = Permutation::identity(n);
  do {
    p = Permutation(map);
    visit(p);
  } while (std::next_permutation(map.begin(), map.end()));
}

// Edge and node update shared by delta_swap and HamiltonianEvaluator::swapped.
// `node_terms(node, image)` returns {Y_node·X_node, Y_image·X_node}.
template <typename NodeTerms>
HamiltonianBreakdown apply_swap(const Instance& inst, const Permutation& p, HamiltonianBreakdown out, Node i,
                                Node j, NodeTerms&& node_terms) {
  Permutation q = p;
  q.swap_images(i, j);
  const Matrix& a = inst.a;
  const Matrix& b = inst.b;

  auto update_edge = [&](Node u, Node w) {
    const double auw = a(u, w);
    if (edge_moved(p, u, w)) {
      out.v_star_g -= auw * b(u, w);
      out.v_g -= auw * b(p(u), p(w));
    }
    if (edge_moved(q, u, w)) {
      out.v_star_g += auw * b(u, w);
      out.v_g += auw * b(q(u), q(w));
    }
  };
  for (Node k = 0; k < inst.n(); ++k) {
    if (k != i) update_edge(i, k);
    if (k != i && k != j) update_edge(j, k);
  }

  for (Node node : {i, j}) {
    if (p(node) != node) {
      const auto [star, moved] = node_terms(node, p(node));
      out.v_star_f -= star;
      out.v_f -= moved;
    }
    if (q(node) != node) {
      const auto [star, moved] = node_terms(node, q(node));
      out.v_star_f += star;
      out.v_f += moved;
    }
  }
  out.assemble();
  return out;
}

}  // namespace

double correlation_coefficient(double c, const char* name) {
  if (std::abs(c) >= 1.0) {
    throw CoefficientSingularityError(std::string(name) + " = " + std::to_string(c) +
                                      " makes the Hamiltonian coefficient infinite; use the noise-free "
                                      "comparison instead");
  }
  return c / (1.0 - c * c);
}

HamiltonianBreakdown hamiltonian(const Instance& inst, const Permutation& p) {
  check_same_size(inst, p);
  HamiltonianBreakdown out;
  out.coeff_g = correlation_coefficient(inst.params.rho, "rho");
  out.coeff_f = correlation_coefficient(inst.params.eta, "eta");
  const int n = inst.n();
  for (Node i = 0; i < n; ++i) {
    for (Node j = i + 1; j < n; ++j) {
      if (!edge_moved(p, i, j)) continue;
      out.v_star_g += inst.b(i, j) * inst.a(i, j);
      out.v_g += inst.b(p(i), p(j)) * inst.a(i, j);
    }
  }
  for (Node i = 0; i < n; ++i) {
    if (p(i) == i) continue;
    out.v_star_f += row_dot(inst.y, i, inst.x, i);
    out.v_f += row_dot(inst.y, p(i), inst.x, i);
  }
  out.assemble();
  return out;
}

HamiltonianBreakdown delta_swap(const Instance& inst, const Permutation& p, const HamiltonianBreakdown& breakdown,
                                Node i, Node j) {
  check_same_size(inst, p);
  check_swap(inst, i, j);
  return apply_swap(inst, p, breakdown, i, j, [&](Node node, Node image) {
    return std::pair{row_dot(inst.y, node, inst.x, node), row_dot(inst.y, image, inst.x, node)};
  });
}

HamiltonianEvaluator::HamiltonianEvaluator(const Instance& inst)
    : inst_(&inst),
      coeff_g_(correlation_coefficient(inst.params.rho, "rho")),
      coeff_f_(correlation_coefficient(inst.params.eta, "eta")),
      cross_(inst.y * inst.x.transpose()) {}

HamiltonianBreakdown HamiltonianEvaluator::evaluate(const Permutation& p) const {
  check_same_size(*inst_, p);
  HamiltonianBreakdown out;
  out.coeff_g = coeff_g_;
  out.coeff_f = coeff_f_;
  const int n = inst_->n();
  const Matrix& a = inst_->a;
  const Matrix& b = inst_->b;
  for (Node i = 0; i < n; ++i) {
    for (Node j = i + 1; j < n; ++j) {
      if (!edge_moved(p, i, j)) continue;
      out.v_star_g += b(i, j) * a(i, j);
      out.v_g += b(p(i), p(j)) * a(i, j);
    }
  }
  for (Node i = 0; i < n; ++i) {
    if (p(i) == i) continue;
    out.v_star_f += cross_(i, i);
    out.v_f += cross_(p(i), i);
  }
  out.assemble();
  return out;
}

HamiltonianBreakdown HamiltonianEvaluator::swapped(const Permutation& p, const HamiltonianBreakdown& breakdown,
                                                   Node i, Node j) const {
  check_same_size(*inst_, p);
  check_swap(*inst_, i, j);
  return apply_swap(*inst_, p, breakdown, i, j,
                    [&](Node node, Node image) { return std::pair{cross_(node, node), cross_(image, node)}; });
}

void require_enumerable(int n, int cap) {
  if (n > cap) throw EnumerationCapError(n, cap);
}

double permutation_distance(const Permutation& p, const Permutation& q) {
  const int n = p.size();
  if (n == 0) return 0.0;
  return 1.0 - static_cast<double>(overlap(p, q)) / static_cast<double>(n);
}

LogPartition log_partition(const Instance& inst) {
  require_enumerable(inst.n());
  const HamiltonianEvaluator eval(inst);
  LogSumExp acc;
  for_each_permutation(inst.n(), [&](const Permutation& p) { acc.add(-eval.energy(p)); });
  LogPartition out{acc.value(), factorial(inst.n())};
  if (!(out.log_z >= 0.0)) throw Error("log partition function fell below 0; the identity term alone gives Z ≥ 1");
  return out;
}

double posterior(const Instance& inst, const Permutation& p) {
  check_same_size(inst, p);
  const LogPartition lz = log_partition(inst);
  return std::exp(-hamiltonian(inst, p).v - lz.log_z);
}

double posterior_ball_mass(const Instance& inst, const Permutation& p, double r) {
  check_radius(r);
  check_same_size(inst, p);
  const LogPartition lz = log_partition(inst);
  const HamiltonianEvaluator eval(inst);
  const int needed = min_overlap(inst.n(), r);
  double mass = 0.0;
  for_each_permutation(inst.n(), [&](const Permutation& q) {
    if (overlap(p, q) >= needed) mass += std::exp(-eval.energy(q) - lz.log_z);
  });
  return mass;
}

PosteriorTable::PosteriorTable(const Instance& inst) : n_(inst.n()), log_z_(0.0) {
  require_enumerable(n_);
  const HamiltonianEvaluator eval(inst);
  LogSumExp acc;
  for_each_permutation(n_, [&](const Permutation& p) {
    for (Node v : p.mapping()) maps_.push_back(static_cast<std::uint8_t>(v));
    const double e = eval.energy(p);
    energies_.push_back(e);
    acc.add(-e);
  });
  log_z_ = acc.value();
  if (!(log_z_ >= 0.0)) throw Error("log partition function fell below 0; the identity term alone gives Z ≥ 1");
}

double PosteriorTable::probability(std::size_t index) const { return std::exp(-energies_[index] - log_z_); }

Permutation PosteriorTable::permutation(std::size_t index) const {
  const auto first = maps_.begin() + static_cast<std::ptrdiff_t>(index * static_cast<std::size_t>(n_));
  return Permutation(std::vector<Node>(first, first + n_));
}

int PosteriorTable::overlap_between(std::size_t a, std::size_t b) const {
  const std::uint8_t* pa = maps_.data() + a * static_cast<std::size_t>(n_);
  const std::uint8_t* pb = maps_.data() + b * static_cast<std::size_t>(n_);
  int count = 0;
  for (int k = 0; k < n_; ++k) count += (pa[k] == pb[k]);
  return count;
}

double PosteriorTable::ball_mass(std::size_t center, double r) const {
  check_radius(r);
  const int needed = min_overlap(n_, r);
  double mass = 0.0;
  for (std::size_t q = 0; q < size(); ++q) {
    if (overlap_between(center, q) >= needed) mass += probability(q);
  }
  return mass;
}

}  // namespace ctxmatch
