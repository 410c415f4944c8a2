#pragma once

#include "ctxmatch/model.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace ctxmatch {

// Single-line JSON document
//   {"n":..,"d":..,"rho":..,"eta":..,"seed":..,"pi_star":[..],"a":[..],"b":[..],"x":[..],"y":[..]}
// `a`/`b` hold the strict upper triangle row by row (length n(n-1)/2); `x`/`y`
// are row-major n·d. Reals carry 17 significant digits, so parsing and
// re-serializing reproduces the document byte for byte.
std::string instance_to_json(const Instance& inst);

// Throws ParameterError / DimensionError on malformed or inconsistent input.
Instance instance_from_json(std::string_view text);

// Throw IoError when the file cannot be written or read.
void write_instance(const Instance& inst, const std::filesystem::path& path);
Instance read_instance(const std::filesystem::path& path);

// "%.17g"; negative zero is written as 0.
std::string format_real(double value);

}  // namespace ctxmatch
