#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace darwinnet {

// Argument outside the mathematical domain of an operation (t <= 0, n_agent > n_total, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Value outside an accepted range (an event past the simulated horizon).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchedulingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Invalid scenario configuration; key() is the dotted key path at fault.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Malformed input document; row() is 1-based and counts the header line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t row, const std::string& what)
      : std::runtime_error("row " + std::to_string(row) + ": " + what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace darwinnet
