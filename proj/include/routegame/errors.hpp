#pragma once

#include <stdexcept>
#include <string>

namespace routegame {

// Bad input: an invalid parameter, a violated invariant, or an operation
// called outside its precondition. The CLI maps this to exit status 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// An operation that only applies in one (sign xi1, sign xi2) quadrant was
// called for a config in another.
class RegimeError : public ValidationError {
 public:
  explicit RegimeError(const std::string& what) : ValidationError(what) {}
};

// A closed form disagreed with its cross-check. Always a bug in this library,
// never a user error. The CLI maps this to exit status 1.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace routegame
