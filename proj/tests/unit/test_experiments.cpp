#include <doctest.h>

#include "ctxmatch/errors.hpp"
#include "ctxmatch/experiments.hpp"
#include "ctxmatch/report.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <numbers>

using namespace ctxmatch;

TEST_CASE("theory regions") {
  CHECK(theory_classify(5, 0).region == Region::exact);
  CHECK(theory_classify(0, 3).region == Region::almost_exact_gap);
  CHECK(theory_classify(1, 0.4).region == Region::impossible_half);
  CHECK(theory_classify(0, 0).region == Region::impossible_half);
  CHECK(theory_classify(3, 0.1).region == Region::open);
  CHECK(theory_classify(4, 0).region == Region::boundary);
  CHECK(theory_classify(0, 2).region == Region::boundary);
  CHECK(theory_classify(2, 0).region == Region::boundary);
  CHECK(theory_classify(1, 3).region == Region::boundary);
  CHECK(theory_classify(0, 1).region == Region::boundary);
  CHECK(theory_classify(1, 0.4).conjectured_no_partial);
  CHECK(theory_classify(3, 0.1).conjectured_no_partial);
  CHECK_FALSE(theory_classify(0, 3).conjectured_no_partial);
  CHECK_FALSE(theory_classify(0, 2).conjectured_no_partial);
  CHECK_THROWS_AS(theory_classify(-0.1, 1), ParameterError);
  CHECK(region_name(Region::almost_exact_gap) == "almost-exact-gap");
}

TEST_CASE("cell coordinates") {
  const CellCoordinates plain = cell_coordinates(2, 3, 8, 64, AxisMode::plain);
  CHECK(plain.feasible);
  CHECK(plain.rho * plain.rho == doctest::Approx(2 * std::log(8.0) / 8));
  CHECK(plain.eta * plain.eta == doctest::Approx(3 * std::log(8.0) / 64));
  CHECK_FALSE(cell_coordinates(8, 0, 8, 64, AxisMode::plain).feasible);

  const CellCoordinates snr = cell_coordinates(8, 0, 8, 64, AxisMode::snr);
  CHECK(snr.feasible);
  const double r2 = snr.rho * snr.rho;
  CHECK(r2 / (1 - r2) * 8 / std::log(8.0) == doctest::Approx(8.0));
  CHECK(parse_axis("snr") == AxisMode::snr);
  CHECK_THROWS_AS(parse_axis("log"), ConfigError);
}

TEST_CASE("sweep configuration is checked before any trial") {
  SweepConfig config;
  config.x_grid = {0};
  config.y_grid = {0};
  config.n = 11;
  CHECK_THROWS_AS(run_phase_sweep(config), ConfigError);
  config.n = 8;
  config.estimator = EstimatorKind::ball;
  CHECK_THROWS_AS(run_phase_sweep(config), ConfigError);
  config.n = 5;
  config.ball_radius = 1.0;
  CHECK_THROWS_AS(run_phase_sweep(config), ConfigError);
  config.ball_radius = 0.2;
  config.x_grid = {};
  CHECK_THROWS_AS(run_phase_sweep(config), ConfigError);
}

TEST_CASE("small sweep") {
  SweepConfig config;
  config.n = 6;
  config.d = 20;
  config.x_grid = {0, 1, 8};
  config.y_grid = {0, 4};
  config.trials = 30;
  config.base_seed = 5;
  const SweepResult one = run_phase_sweep(config);
  REQUIRE(one.cells.size() == 6);
  CHECK(one.cell(1, 0).x == 1);
  CHECK(one.cell(1, 0).y == 0);
  CHECK_FALSE(one.cell(2, 0).feasible);
  CHECK(one.cell(2, 0).trials_run == 0);
  for (const CellResult& c : one.cells) {
    CHECK(c.exact_rate >= 0);
    CHECK(c.exact_rate <= c.mean_overlap_fraction + 1e-12);
    CHECK(c.mean_overlap_fraction <= 1);
  }
  const CellResult& origin = one.cell(0, 0);
  CHECK(origin.exact_rate <= 2.0 / 720 + 3 * std::sqrt((1.0 / 720) * (1 - 1.0 / 720) / 30));

  config.threads = 3;
  const SweepResult three = run_phase_sweep(config);
  CHECK(sweep_csv(one) == sweep_csv(three));

  CHECK(trial_seed(5, 0, 0, 0) != trial_seed(5, 0, 0, 1));
  CHECK(trial_seed(5, 0, 1, 0) != trial_seed(5, 1, 0, 0));
}

TEST_CASE("sweep with the other estimators") {
  SweepConfig config;
  config.n = 5;
  config.d = 10;
  config.x_grid = {2};
  config.y_grid = {6};
  config.trials = 10;
  for (auto kind : {EstimatorKind::feature, EstimatorKind::local, EstimatorKind::ball}) {
    config.estimator = kind;
    config.ball_radius = 0.3;
    const SweepResult r = run_phase_sweep(config);
    CHECK(r.cells.front().trials_run == 10);
    CHECK(r.cells.front().exact_rate <= r.cells.front().mean_overlap_fraction + 1e-12);
  }
}

TEST_CASE("hstar concentration report") {
  SUBCASE("zero edge correlation centres the graph sum") {
    const HstarReport r = verify_hstar_concentration({20, 10, 0.0, 0.3}, {2, 5, 20}, 2000, 3);
    for (const HstarRow& row : r.rows) {
      CHECK(std::abs(row.mean_centred_g) <= 5 * row.se_centred_g);
      CHECK(std::abs(row.mean_centred_f) <= 5 * row.se_centred_f);
    }
    CHECK(r.finite);
  }
  SUBCASE("derangements centre on rho times the moved edges") {
    const HstarReport r = verify_hstar_concentration({12, 6, 0.5, 0.4}, {12}, 3000, 4);
    CHECK(std::abs(r.rows[0].mean_centred_g) <= 5 * r.rows[0].se_centred_g);
    // a derangement of 12 points moves every edge except those inside 2-cycles
    CHECK(r.rows[0].mean_unfixed_edges <= 66);
    CHECK(r.rows[0].mean_unfixed_edges >= 60);
  }
  SUBCASE("t outside [2, n]") {
    CHECK_THROWS_AS(verify_hstar_concentration({10, 5, 0.3, 0.2}, {1}, 10, 0), ParameterError);
    CHECK_THROWS_AS(verify_hstar_concentration({10, 5, 0.3, 0.2}, {11}, 10, 0), ParameterError);
  }
  SUBCASE("stability maps t > n to n") {
    const HstarStability s = verify_hstar_stability({10, 5, 0.3, 0.2}, {2, 100}, 500, 1);
    CHECK(s.base.t_values == std::vector<int>{2, 10});
    CHECK(s.doubled.t_values == std::vector<int>{2, 20});
    CHECK(s.ratio_g.size() == 2);
  }
}

TEST_CASE("laplace bound report") {
  SUBCASE("zero edge correlation") {
    const LaplaceReport r = verify_laplace_bound({20, 30, 0.0, 0.2}, 4, 500, 2);
    for (const LaplaceRow& row : r.rows) CHECK(row.exceed_g == 0.0);
    CHECK(r.max_log_transform_g == 0.0);
  }
  SUBCASE("squared sums centre on their counts") {
    const LaplaceReport r = verify_laplace_bound({30, 40, 0.3, 0.3}, 6, 3000, 3);
    CHECK(std::abs(r.mean_sb_minus_edges) <= 5 * r.se_sb_minus_edges);
    CHECK(std::abs(r.mean_sy_minus_cells) <= 5 * r.se_sy_minus_cells);
    CHECK(r.rows.size() == 3);
    CHECK(r.rows[0].exceed_g >= r.rows[2].exceed_g);
  }
  SUBCASE("domain") {
    CHECK_THROWS_AS(verify_laplace_bound({10, 5, 1.0, 0.2}, 4, 10, 0), CoefficientSingularityError);
    CHECK_THROWS_AS(verify_laplace_bound({10, 5, 0.2, 0.2}, 11, 10, 0), ParameterError);
  }
}

TEST_CASE("gaussian tail verifier") {
  const boost::math::normal standard;
  SUBCASE("perfect correlation reduces to one tail") {
    const TailCell c = verify_gaussian_tails(1.0, 1.0, 1.0, 1.5, 200000, 1);
    const double single = boost::math::cdf(boost::math::complement(standard, 1.5));
    CHECK(std::abs(c.estimate - single) <= 5 * c.se);
    CHECK_FALSE(c.violation);
  }
  SUBCASE("independence gives the product of tails") {
    const TailCell c = verify_gaussian_tails(1.0, 1.0, 0.0, 3.0, 1000000, 2);
    const double single = boost::math::cdf(boost::math::complement(standard, 3.0));
    CHECK(std::abs(c.estimate - single * single) <= 5 * std::max(c.se, 1e-6));
    CHECK_FALSE(c.violation);
    CHECK(c.bound > single * single);
  }
  SUBCASE("intermediate correlation") {
    CHECK_FALSE(verify_gaussian_tails(1.0, 1.0, 0.25, 2.5, 500000, 3).violation);
  }
  SUBCASE("domain") {
    CHECK_THROWS_AS(verify_gaussian_tails(1.3, 1.0, 0.5, 1.0, 10, 0), ParameterError);
    CHECK_THROWS_AS(verify_gaussian_tails(1.0, 1.0, 1.5, 1.0, 10, 0), ParameterError);
    CHECK_THROWS_AS(verify_gaussian_tails(1.0, 1.0, 0.5, 0.0, 10, 0), ParameterError);
  }
  SUBCASE("bound formula") {
    const TailCell c = verify_gaussian_tails(1.1, 0.9, 0.5, 2.0, 10, 0);
    const double s = 1.5;
    CHECK(c.bound == doctest::Approx(s / (std::sqrt(2 * std::numbers::pi) * 2.0) * std::exp(-4.0 / s)));
  }
}

TEST_CASE("partition trend") {
  SUBCASE("zero rule gives log n!") {
    PartitionRule rule;
    const PartitionReport r = partition_trend({2, 3, 4, 5, 6, 7, 8, 9, 10}, rule, 2, 0);
    for (const PartitionRow& row : r.rows) {
      CHECK(row.rho == 0.0);
      CHECK(row.eta == 0.0);
      CHECK(row.mean_log_z == doctest::Approx(row.log_factorial).epsilon(1e-12));
    }
    const double n = 10;
    const double stirling = n * std::log(n) - n + 0.5 * std::log(2 * std::numbers::pi * n);
    CHECK(std::abs(r.rows.back().ratio - stirling / (n * std::log(n))) <= 0.05);
    CHECK(r.pass);
  }
  SUBCASE("threshold rule meets the target budget") {
    PartitionRule rule;
    rule.epsilon = 0.25;
    rule.d = 6;
    rule.graph_share = 0.3;
    const ModelParams p = rule.params_for(7);
    const double lhs = p.rho * p.rho * 7 / (1 - p.rho * p.rho) + 2 * p.eta * p.eta * 6 / (1 - p.eta * p.eta);
    CHECK(lhs == doctest::Approx(2 * 0.75 * std::log(7.0)));
    const PartitionReport r = partition_trend({3, 4, 5}, rule, 20, 1);
    CHECK(r.log_z_non_negative);
  }
  SUBCASE("cap") {
    CHECK_THROWS_AS(partition_trend({11}, PartitionRule{}, 1, 0), EnumerationCapError);
    CHECK_THROWS_AS(partition_trend({1}, PartitionRule{}, 1, 0), ParameterError);
  }
}
