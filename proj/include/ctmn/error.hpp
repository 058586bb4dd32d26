#pragma once

#include <stdexcept>
#include <string>

namespace ctmn {

/// Invalid user input: malformed config, bad parameters, unknown ids.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The feasible state space grew past the configured cap.
class StateExplosionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters outside the range the solver can represent (overflowing phi).
class ParameterRangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Singular or ill-conditioned linear system in the balance solve.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ctmn
