#pragma once

#include <stdexcept>
#include <string>

namespace satotate {

// Malformed user input: curve or group syntax, bad flag combinations.
class UsageError : public std::runtime_error {
  public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid or inconsistent data: Weil-bound violations, genus mismatches,
// unparseable data files.
class DataError : public std::runtime_error {
  public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// A requested computation exceeds the configured point-counting budget.
class BudgetError : public DataError {
  public:
    explicit BudgetError(const std::string& msg) : DataError(msg) {}
};

}  // namespace satotate
