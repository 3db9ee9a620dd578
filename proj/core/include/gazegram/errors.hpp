#pragma once

#include <stdexcept>
#include <string>

namespace gazegram {

/// Base of every error thrown by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument value (empty selection, N < 1, invalid parameters).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Level or index outside its valid range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Tree edit that would break the hierarchy (e.g. grouping non-siblings).
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized input (RLE text, CSV, JSON, image).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Unknown participant, node or pattern.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Inputs that parse individually but disagree with each other.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace gazegram
