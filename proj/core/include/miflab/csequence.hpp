#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace miflab {

/// Non-decreasing sequence c_1 <= c_2 <= ... of positive class bounds.
///
/// Stored as an explicit prefix plus a tail rule. Accepted text forms:
///   "1,2,2"      explicit list, the last value repeats forever
///   "1,2,3,..."  explicit list, then continues with the last step (here +1)
///   "identity"   c_n = n (also spelled "n")
class CSequence {
 public:
  enum class Tail { Repeat, Arithmetic };

  /// c_n = n.
  static CSequence identity();
  static CSequence constant(int value);
  static CSequence parse(std::string_view text);

  CSequence(std::vector<int> prefix, Tail tail);

  /// c_n for n >= 1.
  int operator()(int n) const;
  std::vector<int> prefix(int count) const;

  /// Round-trips through parse().
  std::string to_string() const;

  friend bool operator==(const CSequence&, const CSequence&) = default;

 private:
  std::vector<int> prefix_;
  Tail tail_;
  int step_ = 0;
};

}  // namespace miflab
