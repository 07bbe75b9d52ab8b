#pragma once

#include <stdexcept>
#include <string>

namespace carroll {

// Expression text could not be parsed. `offset` is the 0-based position of the
// first offending character in the input string.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int offset)
      : std::runtime_error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
  int offset() const { return offset_; }

 private:
  int offset_;
};

// Evaluation hit a point outside the domain of a subexpression (log of a
// nonpositive value, division by zero, ...). Carries the offending
// subexpression in printed form.
class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& msg, std::string subexpr)
      : std::runtime_error(msg + " in subexpression '" + subexpr + "'"),
        subexpr_(std::move(subexpr)) {}
  const std::string& subexpr() const { return subexpr_; }

 private:
  std::string subexpr_;
};

// Structural problem with a model: inconsistent dimensions, bad indices,
// violated storage conventions, a missing kernel frame.
class ModelError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A named hypothesis of an operation does not hold for the given model/point.
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(std::string hypothesis)
      : std::runtime_error("precondition failed: " + hypothesis),
        hypothesis_(std::move(hypothesis)) {}
  const std::string& hypothesis() const { return hypothesis_; }

 private:
  std::string hypothesis_;
};

// Numerical failure inside an integrator (step underflow, non-finite state).
class IntegrationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace carroll
