// Error types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace entprop {

// Post-treatment graph is missing an edge of the baseline graph.
class SupergraphViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GlmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Coefficients diverged; the likelihood has no finite maximizer.
class SeparationError : public GlmError {
 public:
  using GlmError::GlmError;
};

class RankError : public GlmError {
 public:
  using GlmError::GlmError;
};

// Response carries no information (all-equal, all-zero counts).
class DegenerateDataError : public GlmError {
 public:
  using GlmError::GlmError;
};

// Optimizer ran out of iterations; carries the last iterate for diagnosis.
class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, Eigen::VectorXd last_iterate)
      : std::runtime_error(what), last_iterate_(std::move(last_iterate)) {}
  const Eigen::VectorXd& last_iterate() const { return last_iterate_; }

 private:
  Eigen::VectorXd last_iterate_;
};

// Problem too large for an exhaustive routine.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No class supports the requested comparison.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OneArmedClassError : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

// Every sample point had a vanishing gradient.
class UndefinedSimilarityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A link value reached {0,1} within tolerance; the moment ratio is undefined.
class NumericalBoundaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace entprop
