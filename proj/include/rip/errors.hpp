#pragma once

#include <stdexcept>
#include <string>

namespace rip {

/// Thrown when an input violates a documented invariant (bad net geometry,
/// non-positive width, unordered positions, ...). The message names the
/// first violated invariant.
class validation_error : public std::invalid_argument {
public:
  explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when a solver exceeds a configured resource cap (e.g. the live
/// label limit of the dynamic program). Distinct from infeasibility, which
/// is an ordinary result, not an exception.
class resource_limit_error : public std::runtime_error {
public:
  explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rip
