#include "qsl/errors.hpp"

namespace qsl {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Shape: return "shape error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Range: return "range error";
    case ErrorKind::Argument: return "argument error";
    case ErrorKind::Numerical: return "numerical error";
    case ErrorKind::Stability: return "stability error";
    case ErrorKind::Accuracy: return "accuracy error";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Io: return "io error";
  }
  return "error";
}

}  // namespace qsl
