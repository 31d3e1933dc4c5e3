#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace warpsol {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text; `offset` is the byte position of the problem.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A name that is neither a declared variable, a constant nor a known function.
class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(const std::string& name, std::size_t offset)
      : Error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
        name_(name),
        offset_(offset) {}
  const std::string& name() const noexcept { return name_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string name_;
  std::size_t offset_;
};

/// Evaluation outside the domain of an elementary operation.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, const std::string& subexpression)
      : Error(what + " in '" + subexpression + "'"), subexpression_(subexpression) {}
  explicit DomainError(const std::string& what) : Error(what) {}
  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

class SingularMetric : public Error {
 public:
  using Error::Error;
};

class DegenerateImmersion : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

class SigmaZero : public Error {
 public:
  using Error::Error;
};

class BoundaryTooClose : public Error {
 public:
  using Error::Error;
};

class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

class MeshUnsupported : public Error {
 public:
  using Error::Error;
};

/// Scene-file validation failure; `field` is the dotted path of the offending entry.
class SceneError : public Error {
 public:
  SceneError(const std::string& field, const std::string& message)
      : Error(field + ": " + message), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Numeric failure tied to a chart location (used by the CLI for exit code 3).
class LocatedError : public Error {
 public:
  LocatedError(const std::string& message, std::vector<double> chart_point)
      : Error(message), chart_point_(std::move(chart_point)) {}
  const std::vector<double>& chart_point() const noexcept { return chart_point_; }

 private:
  std::vector<double> chart_point_;
};

}  // namespace warpsol
