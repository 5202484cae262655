#pragma once

#include <stdexcept>
#include <string>

namespace dropsim {

// Raised when a caller breaks the two-party protocol contract: mismatched
// parties, reused triples, non-bit selectors, empty active sets.
class ProtocolError : public std::logic_error {
 public:
  explicit ProtocolError(const std::string& what) : std::logic_error(what) {}
};

// Input outside the mathematical domain of an operation (x <= 0 for a
// reciprocal, division by zero, empty rows).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Value does not fit the fixed-point range of the ring.
class RangeError : public std::out_of_range {
 public:
  explicit RangeError(const std::string& what) : std::out_of_range(what) {}
};

// NaN or Inf observed in a floating-point reference computation.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Debug-mode consistency check failed (e.g. keep-count != N/2).
class DiagnosticError : public std::runtime_error {
 public:
  explicit DiagnosticError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dropsim
