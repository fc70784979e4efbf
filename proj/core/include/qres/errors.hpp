#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qres {

enum class ErrorKind {
  domain,           // argument outside the mathematical domain
  config,           // configuration schema violation
  grid_mismatch,    // series and grid disagree
  step_failure,     // integrator cannot meet the local error target
  non_convergence,  // periodic-state certificate failed
  overflow,         // generating function left the representable range
  order_overflow,   // requested jet order above capacity
  truncation,       // Fock-space truncation unhealthy
  leakage,          // m-window boundary populated
  window,           // distribution window invalid or mismatched
  numerical,        // any other numerical postcondition failure
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. `kind()` is stable and machine readable.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qres
