#pragma once

#include <stdexcept>
#include <string>

namespace specbundle {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input fails a structural invariant (bad index, non-partition, ...).
struct InvalidInput : Error {
  using Error::Error;
};

/// Spectral operation invoked on a non-invertible system.
struct DiscreteSpectrumRequired : Error {
  DiscreteSpectrumRequired()
      : Error("operation requires a system with discrete spectrum "
              "(invertible transition map)") {}
};

/// Measure fails the exact mass-transport invariance equation.
struct InvarianceRequired : Error {
  explicit InvarianceRequired(int witness_state)
      : Error("measure is not invariant (mass not preserved at state " +
              std::to_string(witness_state) + ")"),
        witness(witness_state) {}
  int witness;
};

/// Measured construction demands strictly positive weights.
struct FullSupportRequired : Error {
  explicit FullSupportRequired(int zero_index)
      : Error("measure must have full support (zero weight at index " +
              std::to_string(zero_index) + ")"),
        index(zero_index) {}
  int index;
};

}  // namespace specbundle
