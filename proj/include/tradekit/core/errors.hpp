#pragma once

#include <stdexcept>
#include <string>

namespace tradekit {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bar or record broke a domain invariant (prices, ordering, ranges).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text: CSV, JSONL, config, timestamps.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Preconditions on data shape or content were not met.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A metric has no finite value for the given input (zero variance,
/// zero drawdown, no downside returns, ...).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

/// Remote provider failure after the retry policy gave up.
class FetchError : public Error {
 public:
  FetchError(const std::string& what, int last_status, int attempts)
      : Error(what), last_status_(last_status), attempts_(attempts) {}

  /// HTTP status of the last response, or 0 when no response arrived.
  int last_status() const noexcept { return last_status_; }
  int attempts() const noexcept { return attempts_; }

 private:
  int last_status_;
  int attempts_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace tradekit
