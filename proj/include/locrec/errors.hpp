#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace locrec {

/// Raised when a factorization or update meets a nonpositive pivot or a
/// negative squared Power Function beyond rounding level.
class NumericalDegeneracy : public std::runtime_error {
 public:
  NumericalDegeneracy(const std::string& what, std::size_t index)
      : std::runtime_error(what), index_(index) {}

  /// Pivot (or step) at which the breakdown was detected.
  [[nodiscard]] std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace locrec
