#pragma once

#include <stdexcept>
#include <string>

namespace cdkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad descriptor strings, out-of-range parameters,
/// unparsable files.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A search or solve exceeded its configured size or candidate cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A geodesic atlas lacks an entry that an operation needs.
class AtlasError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to converge or stalled.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace cdkit
