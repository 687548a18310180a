#pragma once

#include <stdexcept>
#include <string>

namespace qsl {

enum class ErrorKind {
  Shape,
  Domain,
  Range,
  Argument,
  Numerical,
  Stability,
  Accuracy,
  Config,
  Io,
};

const char* to_string(ErrorKind kind);

/// Base of every error raised by the toolkit. The kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define QSL_DEFINE_ERROR(Name, Kind)                                  \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

QSL_DEFINE_ERROR(ShapeError, Shape)
QSL_DEFINE_ERROR(DomainError, Domain)
QSL_DEFINE_ERROR(RangeError, Range)
QSL_DEFINE_ERROR(ArgumentError, Argument)
QSL_DEFINE_ERROR(NumericalError, Numerical)
QSL_DEFINE_ERROR(StabilityError, Stability)
QSL_DEFINE_ERROR(AccuracyError, Accuracy)
QSL_DEFINE_ERROR(ConfigError, Config)
QSL_DEFINE_ERROR(IoError, Io)

#undef QSL_DEFINE_ERROR

}  // namespace qsl
