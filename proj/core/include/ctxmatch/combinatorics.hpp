#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace ctxmatch {

using BigInt = boost::multiprecision::cpp_int;

BigInt factorial(int n);
BigInt binomial(int n, int k);

// Number of fixed-point-free permutations of n objects, evaluated as the
// inclusion-exclusion sum  Σ_{k=0..n} (-1)^k n!/k!.
BigInt count_derangements(int n);

// |S_{n,t}|: permutations of n objects moving exactly t of them, C(n,t)·D(t).
BigInt orbit_size(int n, int t);

}  // namespace ctxmatch
