#include "ctxmatch/model.hpp"

#include "ctxmatch/errors.hpp"

#include <cmath>
#include <string>

namespace ctxmatch {

void ModelParams::validate() const {
  if (n < 1) throw ParameterError("n must be ≥ 1, got " + std::to_string(n));
  if (d < 1) throw ParameterError("d must be ≥ 1, got " + std::to_string(d));
  if (!(std::abs(rho) <= 1.0)) throw ParameterError("rho must lie in [-1, 1], got " + std::to_string(rho));
  if (!(std::abs(eta) <= 1.0)) throw ParameterError("eta must lie in [-1, 1], got " + std::to_string(eta));
}

void Instance::validate() const {
  params.validate();
  const Eigen::Index n = params.n;
  const Eigen::Index d = params.d;
  if (a.rows() != n || a.cols() != n || b.rows() != n || b.cols() != n)
    throw DimensionError("edge matrices must be n×n");
  if (x.rows() != n || x.cols() != d || y.rows() != n || y.cols() != d)
    throw DimensionError("feature matrices must be n×d");
  if (pi_star.size() != n) throw DimensionError("pi_star must have length n");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a(i, i) != 0.0 || b(i, i) != 0.0) throw DimensionError("edge matrices must have a zero diagonal");
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (a(i, j) != a(j, i) || b(i, j) != b(j, i)) throw DimensionError("edge matrices must be symmetric");
  }
}

Instance sample_instance(const ModelParams& params, std::uint64_t seed) {
  params.validate();
  const int n = params.n;
  const int d = params.d;

  Instance inst;
  inst.params = params;
  inst.seed = seed;

  auto pi_engine = rng::make_engine(seed, rng::Stream::pi_star);
  inst.pi_star = Permutation::uniform(n, pi_engine);
  const Permutation& pi = inst.pi_star;

  const double graph_noise = std::sqrt(1.0 - params.rho * params.rho);
  const double feature_noise = std::sqrt(1.0 - params.eta * params.eta);

  inst.a = Matrix::Zero(n, n);
  inst.b = Matrix::Zero(n, n);
  {
    auto a_engine = rng::make_engine(seed, rng::Stream::edges);
    auto z_engine = rng::make_engine(seed, rng::Stream::edge_noise);
    rng::StandardNormal a_draw;
    rng::StandardNormal z_draw;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double aij = a_draw(a_engine);
        const double zij = z_draw(z_engine);
        const double bij = params.rho * aij + graph_noise * zij;
        inst.a(i, j) = inst.a(j, i) = aij;
        inst.b(pi(i), pi(j)) = inst.b(pi(j), pi(i)) = bij;
      }
    }
  }

  inst.x.resize(n, d);
  inst.y.resize(n, d);
  {
    auto x_engine = rng::make_engine(seed, rng::Stream::features);
    auto z_engine = rng::make_engine(seed, rng::Stream::feature_noise);
    rng::StandardNormal x_draw;
    rng::StandardNormal z_draw;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) {
        const double xij = x_draw(x_engine);
        const double zij = z_draw(z_engine);
        inst.x(i, j) = xij;
        inst.y(pi(i), j) = params.eta * xij + feature_noise * zij;
      }
    }
  }
  return inst;
}

Instance relabel_to_identity(const Instance& inst) {
  const int n = inst.n();
  const Permutation& pi = inst.pi_star;
  Instance out;
  out.params = inst.params;
  out.seed = inst.seed;
  out.pi_star = Permutation::identity(n);
  out.a = inst.a;
  out.x = inst.x;
  out.b.resize(n, n);
  out.y.resize(n, inst.d());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out.b(i, j) = inst.b(pi(i), pi(j));
    out.y.row(i) = inst.y.row(pi(i));
  }
  return out;
}

}  // namespace ctxmatch
