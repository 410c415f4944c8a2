#include <doctest.h>

#include "ctxmatch/errors.hpp"
#include "ctxmatch/instance_io.hpp"
#include "ctxmatch/model.hpp"

#include <cmath>
#include <filesystem>
#include <vector>

using namespace ctxmatch;

namespace {

double pearson(const std::vector<double>& u, const std::vector<double>& v) {
  const double n = static_cast<double>(u.size());
  double su = 0, sv = 0, suu = 0, svv = 0, suv = 0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    su += u[k];
    sv += v[k];
    suu += u[k] * u[k];
    svv += v[k] * v[k];
    suv += u[k] * v[k];
  }
  const double cov = suv / n - su / n * sv / n;
  return cov / std::sqrt((suu / n - su / n * su / n) * (svv / n - sv / n * sv / n));
}

struct AlignedPairs {
  std::vector<double> a, b, x, y;
};

AlignedPairs aligned(const Instance& inst) {
  AlignedPairs out;
  const Permutation& pi = inst.pi_star;
  for (int i = 0; i < inst.n(); ++i)
    for (int j = i + 1; j < inst.n(); ++j) {
      out.a.push_back(inst.a(i, j));
      out.b.push_back(inst.b(pi(i), pi(j)));
    }
  for (int i = 0; i < inst.n(); ++i)
    for (int k = 0; k < inst.d(); ++k) {
      out.x.push_back(inst.x(i, k));
      out.y.push_back(inst.y(pi(i), k));
    }
  return out;
}

}  // namespace

TEST_CASE("parameter validation names the field") {
  CHECK_THROWS_WITH_AS(sample_instance({0, 1, 0.0, 0.0}, 0), doctest::Contains("n must"), ParameterError);
  CHECK_THROWS_WITH_AS(sample_instance({2, 0, 0.0, 0.0}, 0), doctest::Contains("d must"), ParameterError);
  CHECK_THROWS_WITH_AS(sample_instance({2, 1, 1.5, 0.0}, 0), doctest::Contains("rho"), ParameterError);
  CHECK_THROWS_WITH_AS(sample_instance({2, 1, 0.0, -1.01}, 0), doctest::Contains("eta"), ParameterError);
  CHECK_NOTHROW(sample_instance({2, 1, -1.0, 1.0}, 0));
}

TEST_CASE("noise-free instances are exact relabelings") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = sample_instance({2, 1, 1.0, 1.0}, seed);
    const Permutation& pi = inst.pi_star;
    CHECK(inst.b(pi(0), pi(1)) == inst.a(0, 1));
    CHECK(inst.y(pi(0), 0) == inst.x(0, 0));
    CHECK(inst.y(pi(1), 0) == inst.x(1, 0));
  }
  const Instance big = sample_instance({7, 3, 1.0, -1.0}, 9);
  const Instance centred = relabel_to_identity(big);
  CHECK(centred.b == big.a);
  CHECK(centred.y == -big.x);
}

TEST_CASE("instances are symmetric, zero-diagonal and deterministic") {
  const Instance p = sample_instance({9, 4, 0.4, -0.3}, 77);
  const Instance q = sample_instance({9, 4, 0.4, -0.3}, 77);
  CHECK_NOTHROW(p.validate());
  CHECK(p.a == q.a);
  CHECK(p.b == q.b);
  CHECK(p.x == q.x);
  CHECK(p.y == q.y);
  CHECK(p.pi_star == q.pi_star);
  const Instance r = sample_instance({9, 4, 0.4, -0.3}, 78);
  CHECK(p.a != r.a);
}

TEST_CASE("independent case has no aligned correlation") {
  const AlignedPairs pairs = aligned(sample_instance({200, 50, 0.0, 0.0}, 1));
  CHECK(std::abs(pearson(pairs.a, pairs.b)) <= 0.02);
  CHECK(std::abs(pearson(pairs.x, pairs.y)) <= 0.02);
}

TEST_CASE("aligned correlations match rho and eta") {
  const AlignedPairs pairs = aligned(sample_instance({500, 20, 0.5, 0.3}, 2024));
  CHECK(std::abs(pearson(pairs.a, pairs.b) - 0.5) <= 0.01);
  CHECK(std::abs(pearson(pairs.x, pairs.y) - 0.3) <= 0.02);
}

TEST_CASE("pooled marginals are standard normal") {
  std::vector<std::vector<double>> pools(4);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance inst = sample_instance({30, 10, 0.7, -0.6}, seed);
    for (int i = 0; i < 30; ++i) {
      for (int j = i + 1; j < 30; ++j) {
        pools[0].push_back(inst.a(i, j));
        pools[1].push_back(inst.b(i, j));
      }
      for (int k = 0; k < 10; ++k) {
        pools[2].push_back(inst.x(i, k));
        pools[3].push_back(inst.y(i, k));
      }
    }
  }
  for (const auto& pool : pools) {
    const double n = static_cast<double>(pool.size());
    double mean = 0;
    for (double v : pool) mean += v;
    mean /= n;
    double var = 0;
    for (double v : pool) var += (v - mean) * (v - mean);
    var /= n - 1;
    CHECK(std::abs(mean) <= 4.0 / std::sqrt(n));
    CHECK(std::abs(var - 1.0) <= 8.0 / std::sqrt(n));
  }
}

TEST_CASE("relabel_to_identity moves the truth to the identity") {
  const Instance inst = sample_instance({6, 3, 0.5, 0.5}, 4);
  const Instance centred = relabel_to_identity(inst);
  CHECK(centred.pi_star.is_identity());
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) CHECK(centred.b(i, j) == inst.b(inst.pi_star(i), inst.pi_star(j)));
    for (int k = 0; k < 3; ++k) CHECK(centred.y(i, k) == inst.y(inst.pi_star(i), k));
  }
  CHECK(centred.a == inst.a);
  CHECK(centred.x == inst.x);
}

TEST_CASE("instance JSON round-trips byte for byte") {
  const Instance inst = sample_instance({6, 3, 0.9, 0.0}, 1);
  const std::string text = instance_to_json(inst);
  const Instance back = instance_from_json(text);
  CHECK(instance_to_json(back) == text);
  CHECK(back.a == inst.a);
  CHECK(back.y == inst.y);
  CHECK(back.pi_star == inst.pi_star);
  CHECK(back.seed == inst.seed);
  CHECK(text.back() == '\n');
  CHECK(text.find("\"a\":[") != std::string::npos);
}

TEST_CASE("instance JSON rejects inconsistent documents") {
  CHECK_THROWS_AS(instance_from_json("not json"), ParameterError);
  CHECK_THROWS_AS(instance_from_json(R"({"n":2,"d":1,"rho":0,"eta":0,"seed":0,"pi_star":[0,1],)"
                                     R"("a":[1,2],"b":[1],"x":[1,2],"y":[1,2]})"),
                  DimensionError);
  CHECK_THROWS_AS(instance_from_json(R"({"n":2,"d":1,"rho":0,"eta":0,"seed":0,"pi_star":[0,0],)"
                                     R"("a":[1],"b":[1],"x":[1,2],"y":[1,2]})"),
                  ParameterError);
}

TEST_CASE("file I/O errors") {
  const Instance inst = sample_instance({3, 2, 0.1, 0.2}, 5);
  CHECK_THROWS_AS(write_instance(inst, "/nonexistent-dir/x.json"), IoError);
  CHECK_THROWS_AS(read_instance("/nonexistent-dir/x.json"), IoError);
  const auto path = std::filesystem::temp_directory_path() / "ctxmatch_model_roundtrip.json";
  write_instance(inst, path);
  CHECK(instance_to_json(read_instance(path)) == instance_to_json(inst));
  std::filesystem::remove(path);
}

TEST_CASE("format_real") {
  CHECK(format_real(-0.0) == "0");
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
}
