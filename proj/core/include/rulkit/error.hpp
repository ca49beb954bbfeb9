#pragma once

#include <stdexcept>
#include <string>

namespace rulkit {

/// Base class for all rulkit errors. Catching this at the CLI boundary
/// maps to exit code 1; UsageError maps to exit code 2.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : Error {
  using Error::Error;
};

// -- parsing ---------------------------------------------------------------
struct WrongColumnCount : Error {
  using Error::Error;
};
struct NonNumericToken : Error {
  using Error::Error;
};
struct NonContiguousCycles : Error {
  using Error::Error;
};
struct NegativeValue : Error {
  using Error::Error;
};

// -- labeling / features ---------------------------------------------------
struct MissingRulEntry : Error {
  using Error::Error;
};
struct AllConstant : Error {
  using Error::Error;
};

// -- models ----------------------------------------------------------------
struct ShapeMismatch : Error {
  using Error::Error;
};
struct NonFiniteActivation : Error {
  using Error::Error;
};
struct NonFiniteGradient : Error {
  using Error::Error;
};
struct EmptyDataset : Error {
  using Error::Error;
};
struct MissingClass : Error {
  using Error::Error;
};

// -- evaluation / explanation ----------------------------------------------
struct LengthMismatch : Error {
  using Error::Error;
};
struct SingularSystem : Error {
  using Error::Error;
};

}  // namespace rulkit
