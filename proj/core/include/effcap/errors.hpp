#ifndef EFFCAP_ERRORS_HPP
#define EFFCAP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace effcap {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid or inconsistent run configuration. Carries the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& msg)
      : Error("config field '" + field + "': " + msg), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Numeric failure inside a compute module. `where` names module.operation.
class NumericError : public Error {
 public:
  NumericError(std::string where, const std::string& msg)
      : Error(where + ": " + msg), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Integrand evaluated to NaN/Inf at a quadrature node.
class NonFiniteIntegrand : public NumericError {
 public:
  NonFiniteIntegrand(std::string where, double node)
      : NumericError(std::move(where),
                     "integrand is non-finite at node z = " + std::to_string(node)),
        node_(node) {}
  double node() const { return node_; }

 private:
  double node_;
};

/// Expectation of exp(-theta*T*R) underflowed to zero in the linear path.
class UnderflowError : public NumericError {
 public:
  explicit UnderflowError(std::string where)
      : NumericError(std::move(where),
                     "expectation of exp(-theta*T*R) underflowed; "
                     "rerun with the log-sum-exp path (ExpPath::LogSumExp)") {}
};

/// Root bracketing failed during threshold calibration.
class BracketError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Queue tail has too few exceedances for a reliable fit.
class InsufficientTailData : public NumericError {
 public:
  InsufficientTailData(std::string where, const std::string& msg, std::size_t required_frames)
      : NumericError(std::move(where), msg), required_frames_(required_frames) {}
  std::size_t required_frames() const { return required_frames_; }

 private:
  std::size_t required_frames_;
};

}  // namespace effcap

#endif
