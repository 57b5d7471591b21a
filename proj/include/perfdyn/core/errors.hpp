#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace perfdyn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class UnsupportedMode : public Error {
 public:
  using Error::Error;
};

class RegimeViolation : public Error {
 public:
  using Error::Error;
};

class DegenerateSupport : public Error {
 public:
  using Error::Error;
};

class ScheduleError : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, Eigen::VectorXd last_iterate, double residual)
      : Error(what), last_iterate_(std::move(last_iterate)), residual_(residual) {}
  const Eigen::VectorXd& last_iterate() const { return last_iterate_; }
  double residual() const { return residual_; }

 private:
  Eigen::VectorXd last_iterate_;
  double residual_;
};

class IngestionError : public Error {
 public:
  IngestionError(const std::string& what, std::optional<std::size_t> row = std::nullopt)
      : Error(what), row_(row) {}
  std::optional<std::size_t> row() const { return row_; }

 private:
  std::optional<std::size_t> row_;
};

// Wraps an error raised inside run_dynamics with the run and iteration it came from.
class RunError : public Error {
 public:
  RunError(const std::string& what, std::size_t run, std::size_t iteration)
      : Error(what), run_(run), iteration_(iteration) {}
  std::size_t run() const { return run_; }
  std::size_t iteration() const { return iteration_; }

 private:
  std::size_t run_;
  std::size_t iteration_;
};

// Bad experiment configuration; `key` is the dotted path, `line` 1-based when known.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string key = {}, std::optional<std::size_t> line = std::nullopt)
      : Error(what), key_(std::move(key)), line_(line) {}
  const std::string& key() const { return key_; }
  std::optional<std::size_t> line() const { return line_; }

 private:
  std::string key_;
  std::optional<std::size_t> line_;
};

}  // namespace perfdyn
