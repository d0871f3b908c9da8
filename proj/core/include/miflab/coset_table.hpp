#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "miflab/presentation.hpp"

namespace miflab {

using Coset = std::uint32_t;

enum class EnumerationStrategy { Hlt, Felsch };

struct EnumerationOptions {
  std::size_t max_cosets = 1'000'000;
  EnumerationStrategy strategy = EnumerationStrategy::Hlt;
};

struct EnumerationStats {
  std::size_t cosets_defined = 0;
  std::size_t max_live = 0;
  std::size_t coincidences = 0;
};

/// Completed coset table of a finite presentation over the trivial subgroup,
/// i.e. the right regular action of the group on itself.
///
/// Cosets are numbered in shortlex order of their minimal words, so coset 0 is
/// the identity and word_for_coset(k) is the k-th element in shortlex order.
/// Columns are ordered a_0 < a_0^-1 < a_1 < ...; when p == 2 the inverse
/// column of a generator is the generator column itself.
class CosetTable {
 public:
  CosetTable() = default;

  std::size_t coset_count() const noexcept { return count_; }
  int generator_count() const noexcept { return gens_; }
  int p() const noexcept { return p_; }
  bool involutory() const noexcept { return p_ == 2; }
  int column_count() const noexcept { return involutory() ? gens_ : 2 * gens_; }
  static constexpr Coset identity() noexcept { return 0; }

  int column(Letter l) const noexcept {
    return involutory() ? l.gen : 2 * l.gen + (l.sign < 0 ? 1 : 0);
  }
  Letter letter_of_column(int col) const noexcept {
    return involutory() ? Letter{col, 1} : Letter{col / 2, (col % 2) ? -1 : 1};
  }

  Coset act(Coset q, Letter l) const noexcept {
    return action_[static_cast<std::size_t>(q) * static_cast<std::size_t>(column_count()) +
                   static_cast<std::size_t>(column(l))];
  }
  Coset act_column(Coset q, int col) const noexcept {
    return action_[static_cast<std::size_t>(q) * static_cast<std::size_t>(column_count()) +
                   static_cast<std::size_t>(col)];
  }

  Coset trace(Coset from, std::span<const Letter> word) const;
  Coset trace(std::span<const Letter> word) const { return trace(identity(), word); }

  /// Coset reached from the identity by u then v.
  Coset multiply(std::span<const Letter> u, std::span<const Letter> v) const;

  /// Shortlex-minimal word for a coset.
  LetterWord word_for_coset(Coset q) const;
  LetterWord normal_form(std::span<const Letter> u) const { return word_for_coset(trace(u)); }

  /// Least k >= 1 with u^k at the identity.
  std::uint64_t element_order(std::span<const Letter> u) const;
  /// Order of the element represented by coset q.
  std::uint64_t coset_order(Coset q) const;

  /// Coset of the product of the elements represented by q and r.
  Coset product(Coset q, Coset r) const;
  Coset inverse(Coset q) const;

  /// Shortlex position of the coset's word, i.e. its length (BFS layer).
  std::uint32_t word_length(Coset q) const { return depth_[q]; }

  /// Every relator traced from every coset returns to that coset; every
  /// column is a permutation. Returns the number of violations.
  std::size_t count_relator_violations(const Presentation& pres) const;
  bool columns_are_permutations() const;

  const EnumerationStats& stats() const noexcept { return stats_; }

  friend void to_json(nlohmann::json& j, const CosetTable& t);
  friend void from_json(const nlohmann::json& j, CosetTable& t);

  friend bool operator==(const CosetTable& a, const CosetTable& b) {
    return a.count_ == b.count_ && a.gens_ == b.gens_ && a.p_ == b.p_ && a.action_ == b.action_;
  }

 private:
  friend CosetTable enumerate_cosets(const Presentation&, const EnumerationOptions&);
  void rebuild_words();

  std::size_t count_ = 0;
  int gens_ = 0;
  int p_ = 2;
  std::vector<Coset> action_;
  // BFS tree: parent coset and entering column, used to read back words.
  std::vector<Coset> parent_;
  std::vector<std::int32_t> parent_col_;
  std::vector<std::uint32_t> depth_;
  EnumerationStats stats_;
};

/// HLT-style Todd-Coxeter enumeration over the trivial subgroup.
/// Throws CapacityExceeded when the live coset count would exceed
/// options.max_cosets.
CosetTable enumerate_cosets(const Presentation& pres, const EnumerationOptions& options = {});

}  // namespace miflab
