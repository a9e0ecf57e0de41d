#pragma once

#include <stdexcept>
#include <string>

namespace collarb {

/// Malformed input or a violated precondition (bad file, wrong shape, domain error).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver failed to reach its stated accuracy (non-convergence, iteration cap, line-search floor).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two routes that must agree (a theorem and its oracle) did not.
class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace collarb
