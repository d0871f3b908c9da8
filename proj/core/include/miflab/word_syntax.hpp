#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace miflab::syntax {

// Grammar (whitespace or '*' concatenates factors):
//
//   word     := factor*
//   factor   := primary ('^' integer)*
//   primary  := atom | '1' | '[' word (',' word)+ ']' | '(' word ')' | cycle
//   atom     := letters ('_'? '-'? digits)?       e.g. a3, a-1, a_-1, t, x, x2
//   cycle    := '(' point ((',' | ' ')? point)+ ')'   only when cycles are enabled
//
// Commutators are left-normed with [u, v] = u^-1 v^-1 u v.

struct Expr {
  enum class Kind { Identity, Atom, Cycle, Product, Power, Commutator };

  Kind kind = Kind::Identity;
  std::string name;
  std::optional<std::int64_t> index;
  std::vector<int> points;
  std::vector<Expr> children;
  std::int64_t exponent = 1;
  std::size_t position = 0;
};

struct ParseOptions {
  /// Every letter is its own atom ("abab" is four atoms); digits are not
  /// allowed after letters.
  bool single_letter_atoms = false;
  /// Parenthesized digit sequences such as (12) or (1,10) are permutation
  /// cycles rather than groupings.
  bool cycles = false;
};

Expr parse(std::string_view text, const ParseOptions& options = {});

/// Names of all atoms appearing in the expression, with their indices.
void collect_atoms(const Expr& e, std::vector<const Expr*>& out);

/// Evaluates an expression into any group-like algebra providing
///   value_type, identity(), multiply(a, b), inverse(a),
///   atom(const Expr&), cycle(const Expr&).
template <class Algebra>
typename Algebra::value_type evaluate(const Expr& e, Algebra& alg) {
  using V = typename Algebra::value_type;
  switch (e.kind) {
    case Expr::Kind::Identity:
      return alg.identity();
    case Expr::Kind::Atom:
      return alg.atom(e);
    case Expr::Kind::Cycle:
      return alg.cycle(e);
    case Expr::Kind::Product: {
      V acc = alg.identity();
      for (const auto& c : e.children) acc = alg.multiply(acc, evaluate(c, alg));
      return acc;
    }
    case Expr::Kind::Power: {
      V base = evaluate(e.children.front(), alg);
      std::int64_t k = e.exponent;
      if (k < 0) base = alg.inverse(base);
      auto n = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
      V acc = alg.identity();
      while (n) {
        if (n & 1) acc = alg.multiply(acc, base);
        n >>= 1;
        if (n) base = alg.multiply(base, base);
      }
      return acc;
    }
    case Expr::Kind::Commutator: {
      V acc = evaluate(e.children.front(), alg);
      for (std::size_t i = 1; i < e.children.size(); ++i) {
        V v = evaluate(e.children[i], alg);
        acc = alg.multiply(alg.multiply(alg.inverse(acc), alg.inverse(v)), alg.multiply(acc, v));
      }
      return acc;
    }
  }
  return alg.identity();
}

}  // namespace miflab::syntax
