#include <doctest.h>

#include "ctxmatch/errors.hpp"
#include "ctxmatch/permutation.hpp"
#include "oracles.hpp"

#include <map>
#include <set>

using namespace ctxmatch;

TEST_CASE("permutation construction rejects non-bijections") {
  CHECK_THROWS_AS(Permutation({0, 0, 1}), ParameterError);
  CHECK_THROWS_AS(Permutation({0, 3, 1}), ParameterError);
  CHECK_THROWS_AS(Permutation({-1, 0}), ParameterError);
  CHECK_NOTHROW(Permutation({2, 0, 1}));
  CHECK(Permutation::identity(0).size() == 0);
}

TEST_CASE("compose, inverse and swap_images") {
  const Permutation p({2, 0, 1, 3});
  const Permutation q({1, 3, 0, 2});
  const Permutation pq = p.compose(q);
  for (int i = 0; i < 4; ++i) CHECK(pq(i) == p(q(i)));
  CHECK(p.compose(p.inverse()).is_identity());
  CHECK(p.inverse().compose(p).is_identity());

  Permutation s = p;
  s.swap_images(0, 3);
  CHECK(s == p.compose(Permutation::transposition(4, 0, 3)));
}

TEST_CASE("lexicographic order") {
  CHECK(Permutation({0, 1, 2}) < Permutation({0, 2, 1}));
  CHECK(Permutation({1, 0, 2}) > Permutation({0, 2, 1}));
}

TEST_CASE("overlap") {
  const Permutation id5 = Permutation::identity(5);
  CHECK(overlap(id5, id5) == 5);
  CHECK(overlap(id5, Permutation::transposition(5, 0, 1)) == 3);
  CHECK_THROWS_AS(overlap(id5, Permutation::identity(4)), DimensionError);

  SUBCASE("composing with a derangement gives zero overlap") {
    rng::Engine engine(11);
    const Permutation p = Permutation::uniform(5, engine);
    // first derangement of S_5 in lexicographic order, found by scanning
    std::vector<int> der;
    oracle::each_permutation(5, [&](const std::vector<int>& m) {
      if (!der.empty()) return;
      bool fixed = false;
      for (int i = 0; i < 5; ++i) fixed = fixed || m[i] == i;
      if (!fixed) der = m;
    });
    const Permutation q = p.compose(Permutation(der));
    CHECK(overlap(p, q) == 0);
    CHECK(overlap(q, p) == 0);
  }
}

TEST_CASE("unfixed points") {
  CHECK(unfixed_points(Permutation::identity(6)).empty());
  CHECK(unfixed_points(Permutation::transposition(4, 0, 1)) == std::vector<Node>{0, 1});
  const Permutation cycle({1, 2, 0, 3, 4});
  CHECK(unfixed_points(cycle) == std::vector<Node>{0, 1, 2});
  CHECK(count_unfixed_points(cycle) == 3);
}

TEST_CASE("unfixed edges") {
  CHECK(unfixed_edges(Permutation::identity(5)).empty());
  const std::vector<Edge> expected{{0, 2}, {1, 2}};
  CHECK(unfixed_edges(Permutation::transposition(3, 0, 1)) == expected);

  rng::Engine engine(3);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 1 + rep % 9;
    const Permutation p = Permutation::uniform(n, engine);
    std::vector<Edge> scan;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const std::set<int> before{i, j};
        const std::set<int> after{p(i), p(j)};
        if (before != after) scan.emplace_back(i, j);
      }
    CHECK(unfixed_edges(p) == scan);
    CHECK(count_unfixed_edges(p) == static_cast<long long>(scan.size()));
    const long long t = count_unfixed_points(p);
    CHECK(t * (n - t) <= count_unfixed_edges(p));
    CHECK(count_unfixed_edges(p) <= t * n);
  }
}

TEST_CASE("random_with_unfixed draws exactly t moved points uniformly") {
  rng::Engine engine(5);
  for (int t : {0, 2, 3, 5}) {
    const Permutation p = random_with_unfixed(5, t, engine);
    CHECK(count_unfixed_points(p) == t);
  }
  CHECK_THROWS_AS(random_with_unfixed(5, 1, engine), ParameterError);
  CHECK_THROWS_AS(random_with_unfixed(5, 6, engine), ParameterError);

  // S_{4,4} has 9 members; each should appear about 1/9 of the time.
  std::map<std::vector<int>, int> freq;
  const int draws = 18000;
  for (int k = 0; k < draws; ++k) ++freq[oracle::to_vector(random_with_unfixed(4, 4, engine))];
  CHECK(freq.size() == 9);
  for (const auto& [m, c] : freq) CHECK(std::abs(c / double(draws) - 1.0 / 9) < 0.015);
}

TEST_CASE("uniform permutations cover S_4 evenly") {
  rng::Engine engine(2024);
  std::map<std::vector<int>, int> freq;
  for (int k = 0; k < 10000; ++k) ++freq[oracle::to_vector(Permutation::uniform(4, engine))];
  CHECK(freq.size() == 24);
  for (const auto& [m, c] : freq) CHECK(std::abs(c / 10000.0 - 1.0 / 24) <= 0.02);
}
