#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "miflab/presentation.hpp"
#include "miflab/window_cache.hpp"

namespace miflab {

/// a_index^exponent, exponent in [1, p-1].
struct ALetter {
  std::int64_t index = 0;
  int exponent = 1;

  friend bool operator==(const ALetter&, const ALetter&) = default;
  friend auto operator<=>(const ALetter&, const ALetter&) = default;
};

/// Word in the generators a_i of A(p, c). Adjacent letters with equal index
/// are always merged and zero exponents dropped, so the empty word is the
/// identity of the free product of the cyclic groups <a_i>.
class AWord {
 public:
  AWord() = default;
  /// Merges and reduces exponents mod p.
  AWord(const std::vector<ALetter>& letters, int p);

  static AWord generator(std::int64_t index, int p, int exponent = 1);

  const std::vector<ALetter>& letters() const noexcept { return letters_; }
  bool empty() const noexcept { return letters_.empty(); }
  std::size_t size() const noexcept { return letters_.size(); }
  /// [min index, max index]; requires a non-empty word.
  Window support() const;

  AWord shifted(std::int64_t k) const;
  AWord inverse(int p) const;
  /// Concatenation with merging at the seam.
  AWord concat(const AWord& other, int p) const;

  friend bool operator==(const AWord&, const AWord&) = default;
  friend auto operator<=>(const AWord&, const AWord&) = default;

 private:
  std::vector<ALetter> letters_;
};

/// Index shift a_i -> a_{i+k}.
AWord shift(const AWord& u, std::int64_t k);

/// Element a * t^beta of G(p, c). Values are not kept canonical; use
/// LimitGroup::canonical when a normal form is needed.
struct GElement {
  AWord a;
  std::int64_t beta = 0;

  friend bool operator==(const GElement&, const GElement&) = default;
  friend auto operator<=>(const GElement&, const GElement&) = default;
};

struct ElementOrder {
  bool infinite = false;
  std::uint64_t value = 0;

  static ElementOrder finite(std::uint64_t v) { return {false, v}; }
  static ElementOrder infinity() { return {true, 0}; }
  friend bool operator==(const ElementOrder&, const ElementOrder&) = default;
};

/// Image of an element under an abelian quotient of G.
///
/// PerIndex: beta-free elements, mapped by index-wise exponent sums into the
/// direct sum of copies of Z/p. Collapsed: the coarser invariant
/// (total exponent sum mod p, beta), a homomorphism on all of G.
struct Abelianization {
  enum class Kind { PerIndex, Collapsed };
  Kind kind = Kind::PerIndex;
  std::map<std::int64_t, int> vector;
  int total = 0;
  std::int64_t beta = 0;

  bool nonzero() const noexcept {
    return kind == Kind::PerIndex ? !vector.empty() : (total != 0 || beta != 0);
  }
};

/// Exact arithmetic in G(p, c) = <A(p, c), t>.
///
/// Word problems are decided in the window group of the element's support,
/// which embeds into A through the kill-outside-the-window retraction.
class LimitGroup {
 public:
  explicit LimitGroup(Instance instance, CacheOptions options = {});
  explicit LimitGroup(std::shared_ptr<const WindowCache> cache);

  int p() const noexcept { return cache_->instance().p; }
  const Instance& instance() const noexcept { return cache_->instance(); }
  const WindowCache& cache() const noexcept { return *cache_; }
  std::shared_ptr<const WindowCache> shared_cache() const noexcept { return cache_; }

  GElement identity() const { return {}; }
  GElement a(std::int64_t index, int exponent = 1) const;
  GElement t(std::int64_t power = 1) const;
  GElement from_aword(AWord w) const { return {std::move(w), 0}; }

  GElement multiply(const GElement& g, const GElement& h) const;
  GElement inverse(const GElement& g) const;
  GElement power(const GElement& g, std::int64_t k) const;
  /// g^-1 h^-1 g h
  GElement commutator(const GElement& g, const GElement& h) const;

  /// Shortlex normal form of the A-part, computed in B(support).
  GElement canonical(const GElement& g) const;
  AWord normal_form(const AWord& u) const;

  bool is_trivial(const GElement& g) const;
  bool equal(const GElement& g, const GElement& h) const;
  ElementOrder order(const GElement& g) const;
  Abelianization abelianize(const GElement& g) const;
  Abelianization abelianize_collapsed(const GElement& g) const;

  /// True iff <gens> meets t^{-(2N+1)} <gens> t^{2N+1} only in the identity.
  /// All generators must be supported in [-N, N].
  bool conjugate_subgroup_meet_trivial(const std::vector<AWord>& gens, std::int64_t radius) const;

  /// One generating set per subgroup of B(w), found by closing under joins
  /// with single elements. Generators are normal-form words.
  std::vector<std::vector<AWord>> subgroup_generating_sets(Window w) const;

  /// Elements of B(w) in shortlex order of their normal forms.
  std::vector<AWord> window_elements(Window w) const;

  std::string to_string(const GElement& g) const;
  std::string to_string(const AWord& u) const;

 private:
  std::shared_ptr<const WindowGroup> window_group(std::int64_t width) const;
  Coset trace(const WindowGroup& wg, const AWord& u, std::int64_t lo) const;
  AWord word_of_coset(const WindowGroup& wg, Coset q, std::int64_t lo) const;

  std::shared_ptr<const WindowCache> cache_;
};

}  // namespace miflab
