#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rsgd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (f >= N, empty sample set, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  DimensionError(std::size_t expected, std::size_t actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const { return expected_; }
  std::size_t actual() const { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

/// An iterate left the finite range (or exceeded the divergence guard).
/// Location fields are filled in as the error propagates outward.
class DivergenceError : public Error {
 public:
  static constexpr std::size_t kUnknown = static_cast<std::size_t>(-1);

  DivergenceError(std::string what, std::size_t round, std::size_t step,
                  std::size_t agent = kUnknown, std::size_t replication = kUnknown)
      : Error(std::move(what)),
        round_(round),
        step_(step),
        agent_(agent),
        replication_(replication) {}

  std::size_t round() const { return round_; }
  std::size_t step() const { return step_; }
  std::size_t agent() const { return agent_; }
  std::size_t replication() const { return replication_; }

  DivergenceError with_replication(std::size_t replication) const {
    return DivergenceError(what(), round_, step_, agent_, replication);
  }

 private:
  std::size_t round_;
  std::size_t step_;
  std::size_t agent_;
  std::size_t replication_;
};

}  // namespace rsgd
