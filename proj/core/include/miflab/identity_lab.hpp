#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "miflab/finite_group.hpp"

namespace miflab {

struct GroupWithConstants {
  FiniteGroup group;
  std::map<std::string, Elem> constants;

  explicit GroupWithConstants(FiniteGroup g) : group(std::move(g)) {}
  void bind(const std::string& name, Elem value);
  /// Binds a name to an element given by label, cycle notation or a
  /// constant-only word.
  void bind(const std::string& name, std::string_view value_text);
};

/// Syllable of a word in G * F over a finite G: a constant, or x_id^exponent.
struct FiniteSyllable {
  bool variable = false;
  int id = 0;
  Elem value = 0;
  std::int64_t exponent = 1;

  friend bool operator==(const FiniteSyllable&, const FiniteSyllable&) = default;
};

/// Freely reduced word in G * F: no identity constants, no zero exponents,
/// no two adjacent syllables of the same kind and variable.
class FiniteMixedWord {
 public:
  FiniteMixedWord() = default;
  FiniteMixedWord(const FiniteGroup& g, std::vector<FiniteSyllable> raw);

  const std::vector<FiniteSyllable>& syllables() const noexcept { return syl_; }
  /// Nontrivial as an element of G * F.
  bool nontrivial() const noexcept { return !syl_.empty(); }
  std::vector<int> variables() const;

  friend bool operator==(const FiniteMixedWord&, const FiniteMixedWord&) = default;

 private:
  std::vector<FiniteSyllable> syl_;
};

/// Shared word grammar. Variables are x (id 1), y (2), z (3) and x<k>;
/// other atoms are bound constants or element labels; cycles use the
/// group's permutation representation.
FiniteMixedWord compile_word(std::string_view text, const GroupWithConstants& g);

Elem evaluate(const FiniteGroup& g, const FiniteMixedWord& w, const std::map<int, Elem>& assignment);

FiniteMixedWord constant_word(const FiniteGroup& g, Elem value);
FiniteMixedWord variable_word(int id = 1, std::int64_t exponent = 1);
FiniteMixedWord multiply(const FiniteGroup& g, const FiniteMixedWord& u, const FiniteMixedWord& v);
FiniteMixedWord inverse(const FiniteGroup& g, const FiniteMixedWord& u);
FiniteMixedWord commutator(const FiniteGroup& g, const FiniteMixedWord& u, const FiniteMixedWord& v);
std::string variable_name(int id);
std::string to_string(const FiniteGroup& g, const FiniteMixedWord& w);
/// x -> [x, n] in a single-variable word.
FiniteMixedWord sub_commutator(const FiniteGroup& g, const FiniteMixedWord& w, Elem n);

struct IdentityOptions {
  /// 0 means available parallelism.
  unsigned threads = 1;
  std::uint64_t single_variable_cap = 10000;
  std::uint64_t multi_variable_cap = 1000000;
};

struct IdentityVerdict {
  bool holds = true;
  bool nontrivial_in_free_product = false;
  std::vector<int> variables;
  /// Lexicographically first failing assignment, one element per variable.
  std::optional<std::vector<Elem>> counterexample;
  /// Substitutions examined in lexicographic order, through the
  /// counterexample if there is one. Independent of the thread count.
  std::uint64_t substitutions_checked = 0;
};

/// Exhaustive check over every G-fixing substitution. Throws
/// CapacityExceeded when |G|^vars is above the cap; never samples.
IdentityVerdict is_mixed_identity(const FiniteMixedWord& w, const FiniteGroup& g, const IdentityOptions& options = {});

struct FactorialVerdict {
  bool holds = true;
  std::uint64_t n = 0;
  std::optional<Elem> counterexample;
  std::uint64_t substitutions_checked = 0;
};

/// [x^{n!}, g] = 1 over all x, with n = |N|. N must be a normal subgroup
/// containing g, and g must be nontrivial.
FactorialVerdict factorial_identity_check(const FiniteGroup& g, const std::vector<Elem>& normal, Elem element);

/// [[x,a],b] on A x B for every nontrivial a in A and b in B. Returns the
/// number of (a, b) pairs checked; a failure is reported through `failure`.
struct CannedResult {
  bool holds = true;
  std::uint64_t pairs = 0;
  std::uint64_t substitutions = 0;
  std::string failure;
};
CannedResult check_direct_product_identity(const FiniteGroup& a, const FiniteGroup& b, const IdentityOptions& options = {});
/// [[[x,a],a],b] on base wr C_k, a in base coordinate 0, b in the others.
CannedResult check_wreath_identity(const FiniteGroup& base, int k, const IdentityOptions& options = {});

struct IdentityReport {
  std::string word;
  std::string group;
  bool verdict = true;
  bool nontrivial_in_free_product = false;
  std::optional<std::map<std::string, std::string>> counterexample;
  std::uint64_t substitutions_checked = 0;
};

IdentityReport make_report(std::string word, const FiniteGroup& g, const IdentityVerdict& v);
void to_json(nlohmann::json& j, const IdentityReport& r);

}  // namespace miflab
