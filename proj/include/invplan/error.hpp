#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace invplan {

// Each error class maps onto one CLI exit code (see tools/invplan.cpp).

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

class IllegalActionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ImpossibleObservationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// All hypotheses assign zero probability to the evidence.
class DegenerateInferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownDimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyPropertyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace invplan
