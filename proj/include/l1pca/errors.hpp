#ifndef L1PCA_ERRORS_HPP
#define L1PCA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace l1pca {

// Input matrix has no singular value above the rank threshold.
class ZeroRankError : public std::runtime_error {
 public:
  ZeroRankError() : std::runtime_error("matrix has numerical rank zero") {}
};

// A solver precondition on rank or shape does not hold (e.g. K > rank).
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// An exhaustive search would exceed the configured evaluation budget.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace l1pca

#endif  // L1PCA_ERRORS_HPP
