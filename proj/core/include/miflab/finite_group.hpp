#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace miflab {

using Elem = std::uint16_t;
/// Image list of 0-based points; perm[i] is the image of point i.
using Permutation = std::vector<std::uint16_t>;

/// Finite group given by its full multiplication table. Elements are
/// 0..order-1 with 0 the identity.
///
/// Permutation groups multiply left to right: (gh)(i) = h(g(i)).
class FiniteGroup {
 public:
  static constexpr std::size_t max_order = 10000;

  /// `table` is row-major, table[x * n + y] = xy. Axioms are checked in full
  /// for n <= 512 and on a fixed sample of triples above that.
  FiniteGroup(std::string name, std::vector<Elem> table, std::vector<std::string> labels = {});

  /// Closure of the generators, listed in BFS order from the identity.
  static FiniteGroup from_permutations(std::string name, const std::vector<Permutation>& generators, int degree);

  const std::string& name() const noexcept { return name_; }
  std::size_t order() const noexcept { return n_; }
  static constexpr Elem identity() noexcept { return 0; }

  Elem mul(Elem x, Elem y) const noexcept { return table_[static_cast<std::size_t>(x) * n_ + y]; }
  Elem inv(Elem x) const noexcept { return inv_[x]; }
  Elem power(Elem x, std::int64_t k) const;
  Elem commutator(Elem x, Elem y) const { return mul(mul(inv(x), inv(y)), mul(x, y)); }
  std::uint64_t element_order(Elem x) const;

  const std::string& label(Elem x) const { return labels_[x]; }
  std::optional<Elem> find(std::string_view label) const;

  /// Degree of the permutation representation, 0 if there is none.
  int degree() const noexcept { return degree_; }
  const Permutation& permutation(Elem x) const { return perms_.at(x); }
  std::optional<Elem> from_permutation(const Permutation& perm) const;

  bool is_subgroup(const std::vector<Elem>& subset) const;
  bool is_normal(const std::vector<Elem>& subset) const;
  std::vector<Elem> center() const;
  /// Smallest subgroup containing the elements.
  std::vector<Elem> generated(const std::vector<Elem>& gens) const;

 private:
  FiniteGroup() = default;
  void validate();

  std::string name_;
  std::size_t n_ = 0;
  std::vector<Elem> table_;
  std::vector<Elem> inv_;
  std::vector<std::string> labels_;
  int degree_ = 0;
  std::vector<Permutation> perms_;

  friend FiniteGroup direct_product(const FiniteGroup&, const FiniteGroup&);
};

/// Cycle notation with 1-based points, "()" for the identity.
std::string cycle_string(const Permutation& perm);

FiniteGroup cyclic_group(int n);
/// Symmetries of the n-gon, order 2n.
FiniteGroup dihedral_group(int n);
FiniteGroup symmetric_group(int n);
FiniteGroup alternating_group(int n);
FiniteGroup klein_four_group();
FiniteGroup quaternion_group();

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

struct WreathProduct {
  FiniteGroup group;
  /// Base coordinate 0 and base coordinates 1..k-1, as subgroups of `group`.
  std::vector<Elem> a_factor;
  std::vector<Elem> b_factor;
};

/// base^k semidirect C_k, with the generator of C_k rotating coordinates.
WreathProduct wreath_product(int k, const FiniteGroup& base);

/// Names such as C4, C-4, D4, S3, A4, V4, Q8, C2xS3 (direct product) and
/// C2wrC3 (base C2, top C3). Products associate to the left.
FiniteGroup make_group(std::string_view spec);

/// Catalog of small groups used by tests and demos.
std::vector<std::string> small_group_catalog();

}  // namespace miflab
