#pragma once

#include <stdexcept>
#include <string>

namespace bcf {

// Base for every error raised by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed arguments that violate an operation's preconditions
// (wrong vector dimension, empty sample, non-binary labels, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration values (fold counts, scheme sizes, tree counts).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Problems reading or parsing input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// An algorithm could not proceed on otherwise valid input, e.g. an empty
// out-of-bag residual pool.
class AlgorithmError : public Error {
 public:
  using Error::Error;
};

// A requested statistic is undefined for the given input (0/0).
class UndefinedValueError : public Error {
 public:
  using Error::Error;
};

}  // namespace bcf
