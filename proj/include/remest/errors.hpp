#ifndef REMEST_ERRORS_HPP
#define REMEST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace remest {

/// Parameter outside its admissible range (p, alpha, beta, ...).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Input violates a model assumption (tail shape, distortion shape).
class AssumptionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Row-stochasticity of the transition law fails the tolerance.
class NormalizationError : public AssumptionError {
public:
  using AssumptionError::AssumptionError;
};

/// Numerical failure in a solver; carries the offending residual.
class NumericError : public std::runtime_error {
public:
  NumericError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

/// Iterative method hit its iteration cap before meeting tolerance.
class ConvergenceError : public NumericError {
public:
  using NumericError::NumericError;
};

/// Requested point lies beyond the computed range; retry with larger k_max.
class CoverageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Computed quantities contradict a structural guarantee of the model.
class ConsistencyError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Config file problem; carries the offending line when known.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

}  // namespace remest

#endif
