#pragma once

#include <stdexcept>
#include <string>

namespace irsim {

/// Thrown when a search-space guard is violated (too many candidates to
/// enumerate or branch over) and the caller did not force the run.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown for codebook orders with no implemented construction.
class UnsupportedOrder : public std::runtime_error {
 public:
  explicit UnsupportedOrder(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace irsim
