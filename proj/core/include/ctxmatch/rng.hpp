#pragma once

// Seed derivation and sampling primitives.
//
// Every random quantity is drawn from a std::mt19937_64 engine whose seed is
// derived from a 64-bit root seed and a list of integer labels through the
// SplitMix64 finalizer. Distinct label paths give statistically independent
// engines, so an instance seed splits into one stream per model component and
// a sweep seed splits into one seed per (cell, trial) regardless of the order
// in which workers run.
//
// Distributions come from Boost.Random, whose algorithms are fixed by the
// library rather than by the standard library vendor, so outputs are
// reproducible across toolchains.

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ctxmatch::rng {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Folds labels into the root seed one at a time; order matters.
constexpr std::uint64_t derive(std::uint64_t root, std::initializer_list<std::uint64_t> labels) noexcept {
  std::uint64_t h = splitmix64(root);
  for (std::uint64_t label : labels) h = splitmix64(h ^ splitmix64(label + 0x632be59bd9b4e019ULL));
  return h;
}

// Substreams of a single instance seed.
enum class Stream : std::uint64_t {
  pi_star = 1,
  edges = 2,        // A
  edge_noise = 3,   // Z
  features = 4,     // X
  feature_noise = 5,// Z'
  estimator = 6,    // random restarts, annealing
  verifier = 7,     // permutations drawn by the property verifiers
};

inline Engine make_engine(std::uint64_t seed, Stream stream) {
  return Engine{derive(seed, {static_cast<std::uint64_t>(stream)})};
}

inline Engine make_engine(std::uint64_t seed, std::initializer_list<std::uint64_t> labels) {
  return Engine{derive(seed, labels)};
}

class StandardNormal {
 public:
  double operator()(Engine& engine) { return dist_(engine); }

 private:
  boost::random::normal_distribution<double> dist_{0.0, 1.0};
};

inline double uniform01(Engine& engine) { return boost::random::uniform_01<double>{}(engine); }

// Uniform integer in [lo, hi].
inline int uniform_int(Engine& engine, int lo, int hi) {
  return boost::random::uniform_int_distribution<int>{lo, hi}(engine);
}

}  // namespace ctxmatch::rng
