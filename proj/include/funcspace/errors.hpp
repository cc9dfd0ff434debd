#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace funcspace {
inline namespace numerics {

/// Precondition violations (invalid parameters, malformed inputs).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Internal consistency failure that should be unreachable; the CLI maps it
/// to its own exit status.
class LatticeViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Expected-alternative return: either a value or a reason the operation
/// does not apply. Used where "no answer" is a normal outcome, not a bug.
template <class T>
class Result {
 public:
  static Result ok(T v) {
    Result r;
    r.value_ = std::move(v);
    return r;
  }
  static Result fail(std::string why) {
    Result r;
    r.error_ = std::move(why);
    return r;
  }

  bool has_value() const { return value_.has_value(); }
  explicit operator bool() const { return has_value(); }
  const T& operator*() const { return *value_; }
  const T* operator->() const { return &*value_; }
  T& operator*() { return *value_; }
  const std::string& error() const { return error_; }

 private:
  std::optional<T> value_;
  std::string error_;
};

}  // namespace numerics
}  // namespace funcspace
