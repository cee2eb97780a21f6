#pragma once

#include <stdexcept>
#include <string>

namespace sevt {

/// Malformed input data, schema mismatch or an invalid request against a
/// well-formed model. The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric domain violation: zero probability where a strictly positive
/// vector is required, or a log-likelihood of minus infinity. Exit code 3.
class NumericError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace sevt
