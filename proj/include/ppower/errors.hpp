#pragma once

#include <stdexcept>

namespace ppower {

/// Raised when a brute-force computation would exceed its configured budget.
class SizeGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ppower
