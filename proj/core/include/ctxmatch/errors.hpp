#pragma once

#include <stdexcept>
#include <string>

namespace ctxmatch {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value lies outside its documented domain (|rho| > 1, n = 0, r >= 1, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Mismatched sizes between permutations, matrices or parameters.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Full enumeration of S_n requested above the configured cap.
class EnumerationCapError : public Error {
 public:
  EnumerationCapError(int n, int cap)
      : Error("enumeration cap n ≤ " + std::to_string(cap) + " exceeded (n = " + std::to_string(n) + ")"),
        n_(n),
        cap_(cap) {}

  int n() const noexcept { return n_; }
  int cap() const noexcept { return cap_; }

 private:
  int n_;
  int cap_;
};

// |rho| = 1 or |eta| = 1 makes rho/(1-rho^2) infinite.
class CoefficientSingularityError : public Error {
 public:
  using Error::Error;
};

// Malformed sweep/verifier configuration, detected before any trial runs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctxmatch
