#pragma once

#include "ctxmatch/model.hpp"

#include <vector>

namespace ctxmatch {

struct Assignment {
  std::vector<int> column_of_row;
  double cost = 0.0;
};

// Minimum-cost perfect matching of a square cost matrix (Hungarian method
// with potentials, O(n³)).
Assignment solve_assignment(const Matrix& cost);

}  // namespace ctxmatch
