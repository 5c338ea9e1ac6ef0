#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sparse_ar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: wrong dimensions, non-finite values, bad parameters.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The AR model itself is unusable (e.g. not causal).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// The data cannot support the requested fit (constant series, singular design).
class DegenerateData : public Error {
 public:
  using Error::Error;
};

/// Forecast scoring hit a zero denominator.
class ScoringError : public Error {
 public:
  ScoringError(const std::string& what, long index) : Error(what), index_(index) {}
  long index() const noexcept { return index_; }

 private:
  long index_;
};

/// An iterative solver stopped before meeting its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, Eigen::VectorXd last_iterate)
      : Error(what), last_iterate_(std::move(last_iterate)) {}
  const Eigen::VectorXd& last_iterate() const noexcept { return last_iterate_; }

 private:
  Eigen::VectorXd last_iterate_;
};

}  // namespace sparse_ar
