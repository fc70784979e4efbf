#include "qres/errors.hpp"

namespace qres {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::config: return "config";
    case ErrorKind::grid_mismatch: return "grid_mismatch";
    case ErrorKind::step_failure: return "step_failure";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::order_overflow: return "order_overflow";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::leakage: return "leakage";
    case ErrorKind::window: return "window";
    case ErrorKind::numerical: return "numerical";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace qres
