#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "miflab/limit_group.hpp"

namespace miflab {

struct ConstantSyllable {
  GElement value;
  friend bool operator==(const ConstantSyllable&, const ConstantSyllable&) = default;
  friend auto operator<=>(const ConstantSyllable&, const ConstantSyllable&) = default;
};

/// x_id^exponent
struct VariableSyllable {
  int id = 1;
  std::int64_t exponent = 1;
  friend bool operator==(const VariableSyllable&, const VariableSyllable&) = default;
  friend auto operator<=>(const VariableSyllable&, const VariableSyllable&) = default;
};

using Syllable = std::variant<ConstantSyllable, VariableSyllable>;

/// Reduced word in G * F(x_1, x_2, ...). Built only through reduce(), so
/// adjacent syllables never merge, constants are nontrivial (and in normal
/// form whenever their window is enumerable), and exponents are nonzero.
class MixedWord {
 public:
  MixedWord() = default;

  const std::vector<Syllable>& syllables() const noexcept { return syllables_; }
  bool empty() const noexcept { return syllables_.empty(); }
  /// Distinct variable ids, ascending.
  std::vector<int> variables() const;
  int variable_count() const { return static_cast<int>(variables().size()); }

  friend bool operator==(const MixedWord&, const MixedWord&) = default;
  friend auto operator<=>(const MixedWord&, const MixedWord&) = default;

 private:
  friend class MixedCalculus;
  std::vector<Syllable> syllables_;
};

using Assignment = std::map<int, GElement>;

/// Free-product operations over one ambient limit group.
class MixedCalculus {
 public:
  explicit MixedCalculus(const LimitGroup& group) : group_(&group) {}

  const LimitGroup& group() const noexcept { return *group_; }

  MixedWord reduce(const std::vector<Syllable>& raw) const;
  MixedWord constant(const GElement& g) const { return reduce({ConstantSyllable{g}}); }
  MixedWord variable(int id = 1, std::int64_t exponent = 1) const { return reduce({VariableSyllable{id, exponent}}); }

  MixedWord multiply(const MixedWord& u, const MixedWord& v) const;
  MixedWord inverse(const MixedWord& u) const;
  MixedWord power(const MixedWord& u, std::int64_t k) const;
  MixedWord commutator(const MixedWord& u, const MixedWord& v) const;

  /// Image under the G-fixing homomorphism x_i -> assignment[i].
  GElement evaluate(const MixedWord& w, const Assignment& assignment) const;
  GElement evaluate(const MixedWord& w, const GElement& x) const { return evaluate(w, Assignment{{1, x}}); }

  /// Replaces each variable by a word (same id -> same word) and reduces.
  MixedWord substitute(const MixedWord& w, const std::map<int, MixedWord>& images) const;

  /// x_i -> x^i g x^i, an embedding of G * F_n into G * <x> for nontrivial g.
  MixedWord iota_embed(const MixedWord& w, const GElement& g) const;

  /// x -> [x, n].
  MixedWord sub_commutator(const MixedWord& w, const GElement& n) const;

  /// Constants print as element words, variables as x (id 1) or x<id>.
  std::string to_string(const MixedWord& w) const;

  /// Parses the shared grammar with atoms a<int>, t, x, x<int>.
  MixedWord parse(std::string_view text) const;

 private:
  const LimitGroup* group_;
};

/// Parses an element of G(p, c) (atoms a<int> and t only).
GElement parse_element(const LimitGroup& group, std::string_view text);

}  // namespace miflab
