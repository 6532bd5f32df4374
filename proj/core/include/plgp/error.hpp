#pragma once

#include <stdexcept>
#include <string>

namespace plgp {

/// Raised when a factorization fails after the full jitter escalation, or a
/// computation produces a non-finite value where a finite one is required.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// File-level failures: missing file, unparsable row, schema mismatch.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace plgp
