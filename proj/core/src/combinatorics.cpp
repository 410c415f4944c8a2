#include "ctxmatch/combinatorics.hpp"

#include "ctxmatch/errors.hpp"

#include <string>

namespace ctxmatch {

namespace {

void require_non_negative(int value, const char* what) {
  if (value < 0) throw ParameterError(std::string(what) + " must be non-negative, got " + std::to_string(value));
}

}  // namespace

BigInt factorial(int n) {
  require_non_negative(n, "n");
  BigInt out = 1;
  for (int k = 2; k <= n; ++k) out *= k;
  return out;
}

BigInt binomial(int n, int k) {
  require_non_negative(n, "n");
  require_non_negative(k, "k");
  if (k > n) return 0;
  BigInt out = 1;
  for (int i = 1; i <= k; ++i) {
    out *= n - k + i;
    out /= i;
  }
  return out;
}

BigInt count_derangements(int n) {
  require_non_negative(n, "n");
  // n!/k! for k = n, n-1, ..., 0 built by a running product.
  BigInt sum = 0;
  BigInt falling = 1;
  for (int k = n; k >= 0; --k) {
    if (k % 2 == 0)
      sum += falling;
    else
      sum -= falling;
    falling *= k;
  }
  return sum;
}

BigInt orbit_size(int n, int t) {
  require_non_negative(n, "n");
  require_non_negative(t, "t");
  if (t > n) throw ParameterError("orbit_size requires t ≤ n, got t = " + std::to_string(t) + ", n = " + std::to_string(n));
  return binomial(n, t) * count_derangements(t);
}

}  // namespace ctxmatch
