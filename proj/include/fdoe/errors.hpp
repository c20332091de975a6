#pragma once

#include <stdexcept>
#include <string>

namespace fdoe {

/// The problem cannot yield a full-rank model matrix for any design.
class IdentifiabilityError : public std::invalid_argument {
public:
  explicit IdentifiabilityError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation needed a nonsingular information matrix and did not get one.
class InfeasibleDesignError : public std::runtime_error {
public:
  explicit InfeasibleDesignError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fdoe
