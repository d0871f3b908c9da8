#include "miflab/mixed_word.hpp"

#include <set>
#include <stdexcept>

#include "miflab/errors.hpp"
#include "miflab/word_syntax.hpp"

namespace miflab {

namespace {

GElement canonical_if_possible(const LimitGroup& group, const GElement& g) {
  try {
    return group.canonical(g);
  } catch (const CapacityExceeded&) {
    // Beta-carrying constants are provably nontrivial without a table; they
    // keep their merged word when the window is out of reach.
    return g;
  }
}

struct ElementAlgebra {
  using value_type = GElement;
  const LimitGroup& group;

  GElement identity() const { return group.identity(); }
  GElement multiply(const GElement& x, const GElement& y) const { return group.multiply(x, y); }
  GElement inverse(const GElement& x) const { return group.inverse(x); }
  GElement atom(const syntax::Expr& e) const {
    if (e.name == "a" && e.index) return group.a(*e.index);
    if (e.name == "t" && !e.index) return group.t();
    throw ParseError("unknown generator '" + e.name + "'", e.position);
  }
  GElement cycle(const syntax::Expr& e) const { throw ParseError("cycles are not elements of G(p, c)", e.position); }
};

struct MixedAlgebra {
  using value_type = MixedWord;
  const MixedCalculus& calc;

  MixedWord identity() const { return {}; }
  MixedWord multiply(const MixedWord& x, const MixedWord& y) const { return calc.multiply(x, y); }
  MixedWord inverse(const MixedWord& x) const { return calc.inverse(x); }
  MixedWord atom(const syntax::Expr& e) const {
    if (e.name == "x") {
      std::int64_t id = e.index.value_or(1);
      if (id < 1 || id > 1'000'000) throw ParseError("variable ids are positive", e.position);
      return calc.variable(static_cast<int>(id));
    }
    return calc.constant(ElementAlgebra{calc.group()}.atom(e));
  }
  MixedWord cycle(const syntax::Expr& e) const { throw ParseError("cycles are not elements of G(p, c)", e.position); }
};

}  // namespace

std::vector<int> MixedWord::variables() const {
  std::set<int> ids;
  for (const auto& s : syllables_)
    if (const auto* v = std::get_if<VariableSyllable>(&s)) ids.insert(v->id);
  return {ids.begin(), ids.end()};
}

MixedWord MixedCalculus::reduce(const std::vector<Syllable>& raw) const {
  MixedWord out;
  auto& st = out.syllables_;
  auto push = [&](auto&& self, Syllable s) -> void {
    if (auto* c = std::get_if<ConstantSyllable>(&s)) {
      if (!st.empty()) {
        if (auto* top = std::get_if<ConstantSyllable>(&st.back())) {
          GElement merged = group_->multiply(top->value, c->value);
          st.pop_back();
          self(self, ConstantSyllable{merged});
          return;
        }
      }
      if (group_->is_trivial(c->value)) return;
      st.push_back(ConstantSyllable{canonical_if_possible(*group_, c->value)});
      return;
    }
    auto v = std::get<VariableSyllable>(s);
    if (!st.empty()) {
      if (auto* top = std::get_if<VariableSyllable>(&st.back()); top && top->id == v.id) {
        VariableSyllable merged{v.id, top->exponent + v.exponent};
        st.pop_back();
        self(self, merged);
        return;
      }
    }
    if (v.exponent == 0) return;
    st.push_back(v);
  };
  for (const auto& s : raw) push(push, s);
  return out;
}

MixedWord MixedCalculus::multiply(const MixedWord& u, const MixedWord& v) const {
  if (u.empty()) return v;
  if (v.empty()) return u;
  std::vector<Syllable> raw = u.syllables_;
  raw.insert(raw.end(), v.syllables_.begin(), v.syllables_.end());
  return reduce(raw);
}

MixedWord MixedCalculus::inverse(const MixedWord& u) const {
  std::vector<Syllable> raw;
  raw.reserve(u.syllables_.size());
  for (auto it = u.syllables_.rbegin(); it != u.syllables_.rend(); ++it) {
    if (const auto* c = std::get_if<ConstantSyllable>(&*it))
      raw.push_back(ConstantSyllable{group_->inverse(c->value)});
    else {
      auto v = std::get<VariableSyllable>(*it);
      raw.push_back(VariableSyllable{v.id, -v.exponent});
    }
  }
  return reduce(raw);
}

MixedWord MixedCalculus::power(const MixedWord& u, std::int64_t k) const {
  MixedWord base = k < 0 ? inverse(u) : u;
  auto n = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
  MixedWord acc;
  while (n) {
    if (n & 1) acc = multiply(acc, base);
    n >>= 1;
    if (n) base = multiply(base, base);
  }
  return acc;
}

MixedWord MixedCalculus::commutator(const MixedWord& u, const MixedWord& v) const {
  return multiply(multiply(inverse(u), inverse(v)), multiply(u, v));
}

GElement MixedCalculus::evaluate(const MixedWord& w, const Assignment& assignment) const {
  GElement acc = group_->identity();
  for (const auto& s : w.syllables_) {
    if (const auto* c = std::get_if<ConstantSyllable>(&s)) {
      acc = group_->multiply(acc, c->value);
    } else {
      const auto& v = std::get<VariableSyllable>(s);
      auto it = assignment.find(v.id);
      if (it == assignment.end())
        throw std::invalid_argument("no value assigned to variable x" + std::to_string(v.id));
      acc = group_->multiply(acc, group_->power(it->second, v.exponent));
    }
  }
  return acc;
}

MixedWord MixedCalculus::substitute(const MixedWord& w, const std::map<int, MixedWord>& images) const {
  MixedWord acc;
  for (const auto& s : w.syllables_) {
    if (const auto* c = std::get_if<ConstantSyllable>(&s)) {
      acc = multiply(acc, reduce({*c}));
    } else {
      const auto& v = std::get<VariableSyllable>(s);
      auto it = images.find(v.id);
      if (it == images.end()) throw std::invalid_argument("no image for variable x" + std::to_string(v.id));
      acc = multiply(acc, power(it->second, v.exponent));
    }
  }
  return acc;
}

MixedWord MixedCalculus::iota_embed(const MixedWord& w, const GElement& g) const {
  if (group_->is_trivial(g)) throw std::invalid_argument("the embedding needs a nontrivial constant");
  std::map<int, MixedWord> images;
  for (int id : w.variables()) images[id] = reduce({VariableSyllable{1, id}, ConstantSyllable{g}, VariableSyllable{1, id}});
  return substitute(w, images);
}

MixedWord MixedCalculus::sub_commutator(const MixedWord& w, const GElement& n) const {
  if (group_->is_trivial(n)) throw std::invalid_argument("the commutator constant must be nontrivial");
  auto vars = w.variables();
  if (vars.size() > 1 || (vars.size() == 1 && vars.front() != 1))
    throw std::invalid_argument("sub_commutator expects a word in the single variable x");
  MixedWord x = variable(1);
  return substitute(w, {{1, commutator(x, constant(n))}});
}

std::string MixedCalculus::to_string(const MixedWord& w) const {
  if (w.empty()) return "1";
  std::string s;
  for (const auto& syl : w.syllables_) {
    if (!s.empty()) s += ' ';
    if (const auto* c = std::get_if<ConstantSyllable>(&syl)) {
      s += group_->to_string(c->value);
    } else {
      const auto& v = std::get<VariableSyllable>(syl);
      s += 'x';
      if (v.id != 1) s += std::to_string(v.id);
      if (v.exponent != 1) s += '^' + std::to_string(v.exponent);
    }
  }
  return s;
}

MixedWord MixedCalculus::parse(std::string_view text) const {
  MixedAlgebra alg{*this};
  return syntax::evaluate(syntax::parse(text), alg);
}

GElement parse_element(const LimitGroup& group, std::string_view text) {
  ElementAlgebra alg{group};
  return syntax::evaluate(syntax::parse(text), alg);
}

}  // namespace miflab
