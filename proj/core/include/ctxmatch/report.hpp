#pragma once

// Text formats for results: MatchResult JSON, the sweep CSV, the sweep
// configuration file and the verifier report documents.

#include "ctxmatch/estimators.hpp"
#include "ctxmatch/experiments.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace ctxmatch {

std::string_view tool_version();

struct MatchJsonOptions {
  std::optional<HamiltonianBreakdown> explain;
  bool include_timing = true;
};

// {"estimator","exact","overlap","n","objective","wall_time_ms","mapping"[,"explain"]}
// A NaN objective is written as null.
std::string match_result_json(const MatchResult& result, const MatchJsonOptions& options = {});

// Header `x,y,rho,eta,n,d,trials,estimator,exact_rate,se_exact,mean_overlap,base_seed,region`,
// one row per cell in x-major order, LF line endings. Infeasible cells carry
// trials = 0 and nan rates.
std::string sweep_csv(const SweepResult& result);

// Tool version, resolved configuration and base seed of a sweep.
std::string sweep_metadata_json(const SweepResult& result);

// Throws ConfigError for malformed JSON, missing required keys, unknown keys
// or out-of-domain values. `threads` is not part of the file.
SweepConfig sweep_config_from_json(std::string_view text);
std::string sweep_config_to_json(const SweepConfig& config);

// {"suite","tool_version","params","metrics","pass"}; `params` holds every
// input needed to rerun the suite, seed and trials included.
std::string hstar_report_json(const HstarStability& report);
std::string laplace_report_json(const LaplaceReport& report);
std::string tail_report_json(const TailReport& report);
std::string partition_report_json(const PartitionReport& report);

}  // namespace ctxmatch
