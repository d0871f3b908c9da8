#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace miflab {

/// Raised when a coset enumeration (or a guard in front of one) would need
/// more room than it was given. Callers either raise the cap or shrink the
/// window / class sequence.
class CapacityExceeded : public std::runtime_error {
 public:
  CapacityExceeded(const std::string& what, std::size_t limit)
      : std::runtime_error(what), limit_(limit) {}

  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t limit_;
};

/// Malformed word, group or sequence text.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// An independent re-check disagreed with a recorded result.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace miflab
