#pragma once

#include <stdexcept>
#include <string>

namespace strumscribe {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented invariant (bad file contents, bad config, bad arguments).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The decoder found no feasible pattern sequence.
class DecodeError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace strumscribe
