#include "miflab/limit_group.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "miflab/errors.hpp"

namespace miflab {

namespace {

std::int64_t checked_add(std::int64_t x, std::int64_t y) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(x, y, &r)) throw std::overflow_error("index arithmetic overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(x, y, &r)) throw std::overflow_error("exponent arithmetic overflow");
  return r;
}

int mod_p(std::int64_t e, int p) {
  auto r = static_cast<int>(e % p);
  return r < 0 ? r + p : r;
}

}  // namespace

AWord::AWord(const std::vector<ALetter>& letters, int p) {
  letters_.reserve(letters.size());
  for (const auto& l : letters) {
    int e = mod_p(l.exponent, p);
    if (e == 0) continue;
    if (!letters_.empty() && letters_.back().index == l.index) {
      letters_.back().exponent = (letters_.back().exponent + e) % p;
      if (letters_.back().exponent == 0) letters_.pop_back();
    } else {
      letters_.push_back({l.index, e});
    }
  }
}

AWord AWord::generator(std::int64_t index, int p, int exponent) { return AWord({{index, exponent}}, p); }

Window AWord::support() const {
  if (letters_.empty()) throw std::logic_error("the empty word has no support");
  auto [mn, mx] = std::minmax_element(letters_.begin(), letters_.end(),
                                      [](const ALetter& x, const ALetter& y) { return x.index < y.index; });
  return {mn->index, mx->index};
}

AWord AWord::shifted(std::int64_t k) const {
  AWord out = *this;
  for (auto& l : out.letters_) l.index = checked_add(l.index, k);
  return out;
}

AWord AWord::inverse(int p) const {
  AWord out;
  out.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.letters_.push_back({it->index, p - it->exponent});
  return out;
}

AWord AWord::concat(const AWord& other, int p) const {
  if (other.empty()) return *this;
  if (empty()) return other;
  std::vector<ALetter> all = letters_;
  all.insert(all.end(), other.letters_.begin(), other.letters_.end());
  return AWord(all, p);
}

AWord shift(const AWord& u, std::int64_t k) { return u.shifted(k); }

LimitGroup::LimitGroup(Instance instance, CacheOptions options)
    : cache_(std::make_shared<WindowCache>(std::move(instance), std::move(options))) {}

LimitGroup::LimitGroup(std::shared_ptr<const WindowCache> cache) : cache_(std::move(cache)) {
  if (!cache_) throw std::invalid_argument("null window cache");
}

GElement LimitGroup::a(std::int64_t index, int exponent) const { return {AWord::generator(index, p(), exponent), 0}; }

GElement LimitGroup::t(std::int64_t power) const { return {AWord{}, power}; }

// (a1 t^b1)(a2 t^b2) = a1 (t^b1 a2 t^-b1) t^(b1+b2) and t a_i t^-1 = a_{i+1}.
GElement LimitGroup::multiply(const GElement& g, const GElement& h) const {
  return {g.a.concat(h.a.shifted(g.beta), p()), checked_add(g.beta, h.beta)};
}

GElement LimitGroup::inverse(const GElement& g) const {
  // (a t^b)^-1 = t^-b a^-1 = shift(a^-1, -b) t^-b
  return {g.a.inverse(p()).shifted(-g.beta), -g.beta};
}

GElement LimitGroup::power(const GElement& g, std::int64_t k) const {
  GElement base = k < 0 ? inverse(g) : g;
  std::uint64_t n = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
  GElement result = identity();
  (void)checked_mul(g.beta, k);
  while (n) {
    if (n & 1) result = multiply(result, base);
    n >>= 1;
    if (n) base = multiply(base, base);
  }
  return result;
}

GElement LimitGroup::commutator(const GElement& g, const GElement& h) const {
  return multiply(multiply(inverse(g), inverse(h)), multiply(g, h));
}

std::shared_ptr<const WindowGroup> LimitGroup::window_group(std::int64_t width) const { return cache_->get(width); }

Coset LimitGroup::trace(const WindowGroup& wg, const AWord& u, std::int64_t lo) const {
  const auto& table = wg.table;
  const int pp = p();
  Coset q = CosetTable::identity();
  for (const auto& l : u.letters()) {
    auto pos = static_cast<int>(l.index - lo);
    if (pos < 0 || pos > wg.width) throw std::logic_error("letter outside the window");
    if (pp == 2 || l.exponent <= pp / 2) {
      for (int k = 0; k < l.exponent; ++k) q = table.act(q, Letter{pos, 1});
    } else {
      for (int k = l.exponent; k < pp; ++k) q = table.act(q, Letter{pos, -1});
    }
  }
  return q;
}

AWord LimitGroup::word_of_coset(const WindowGroup& wg, Coset q, std::int64_t lo) const {
  std::vector<ALetter> letters;
  for (const auto& l : wg.table.word_for_coset(q)) letters.push_back({lo + l.gen, l.sign > 0 ? 1 : p() - 1});
  return AWord(letters, p());
}

AWord LimitGroup::normal_form(const AWord& u) const {
  if (u.empty()) return u;
  auto w = u.support();
  auto wg = window_group(w.width());
  return word_of_coset(*wg, trace(*wg, u, w.lo), w.lo);
}

GElement LimitGroup::canonical(const GElement& g) const { return {normal_form(g.a), g.beta}; }

bool LimitGroup::is_trivial(const GElement& g) const {
  if (g.beta != 0) return false;
  if (g.a.empty()) return true;
  auto w = g.a.support();
  auto wg = window_group(w.width());
  return trace(*wg, g.a, w.lo) == CosetTable::identity();
}

bool LimitGroup::equal(const GElement& g, const GElement& h) const { return is_trivial(multiply(g, inverse(h))); }

ElementOrder LimitGroup::order(const GElement& g) const {
  if (g.beta != 0) return ElementOrder::infinity();
  if (g.a.empty()) return ElementOrder::finite(1);
  auto w = g.a.support();
  auto wg = window_group(w.width());
  return ElementOrder::finite(wg->table.coset_order(trace(*wg, g.a, w.lo)));
}

Abelianization LimitGroup::abelianize(const GElement& g) const {
  if (g.beta != 0) return abelianize_collapsed(g);
  Abelianization out;
  out.kind = Abelianization::Kind::PerIndex;
  int total = 0;
  for (const auto& l : g.a.letters()) {
    int& slot = out.vector[l.index];
    slot = (slot + l.exponent) % p();
    total = (total + l.exponent) % p();
  }
  std::erase_if(out.vector, [](const auto& kv) { return kv.second == 0; });
  out.total = total;
  return out;
}

Abelianization LimitGroup::abelianize_collapsed(const GElement& g) const {
  Abelianization out;
  out.kind = Abelianization::Kind::Collapsed;
  int total = 0;
  for (const auto& l : g.a.letters()) total = (total + l.exponent) % p();
  out.total = total;
  out.beta = g.beta;
  return out;
}

namespace {

// Elements of the subgroup generated by `gens` (given as cosets), by closure.
std::vector<bool> subgroup_closure(const CosetTable& table, const std::vector<LetterWord>& gens) {
  std::vector<bool> in(table.coset_count(), false);
  std::vector<Coset> queue{CosetTable::identity()};
  in[CosetTable::identity()] = true;
  for (std::size_t k = 0; k < queue.size(); ++k) {
    for (const auto& g : gens) {
      Coset r = table.trace(queue[k], g);
      if (!in[r]) {
        in[r] = true;
        queue.push_back(r);
      }
    }
  }
  return in;
}

}  // namespace

bool LimitGroup::conjugate_subgroup_meet_trivial(const std::vector<AWord>& gens, std::int64_t radius) const {
  if (radius < 0) throw std::invalid_argument("radius must be non-negative");
  const Window home(-radius, radius);
  for (const auto& g : gens) {
    if (g.empty()) continue;
    auto s = g.support();
    if (!home.contains(s.lo) || !home.contains(s.hi))
      throw std::invalid_argument("subgroup generator not supported in [-N, N]");
  }
  if (gens.empty()) return true;

  // t^{-k} a_i t^{k} = a_{i-k}
  const std::int64_t k = 2 * radius + 1;
  const Window big(-radius - k, radius);
  auto wg = window_group(big.width());

  auto to_letters = [&](const AWord& u) {
    LetterWord w;
    for (const auto& l : u.letters())
      for (int e = 0; e < l.exponent; ++e) w.push_back({static_cast<int>(l.index - big.lo), 1});
    return w;
  };
  std::vector<LetterWord> h, hk;
  for (const auto& g : gens) {
    h.push_back(to_letters(g));
    hk.push_back(to_letters(g.shifted(-k)));
  }
  auto in_h = subgroup_closure(wg->table, h);
  auto in_hk = subgroup_closure(wg->table, hk);
  for (Coset q = 1; q < wg->table.coset_count(); ++q)
    if (in_h[q] && in_hk[q]) return false;
  return true;
}

std::vector<AWord> LimitGroup::window_elements(Window w) const {
  auto wg = window_group(w.width());
  std::vector<AWord> out;
  out.reserve(wg->table.coset_count());
  for (Coset q = 0; q < wg->table.coset_count(); ++q) out.push_back(word_of_coset(*wg, q, w.lo));
  return out;
}

std::vector<std::vector<AWord>> LimitGroup::subgroup_generating_sets(Window w) const {
  auto wg = window_group(w.width());
  const auto& table = wg->table;
  if (table.coset_count() > 4096) throw CapacityExceeded("subgroup lattice enumeration limited to |B| <= 4096", 4096);

  std::vector<std::vector<Coset>> gens_of{{}};
  std::set<std::vector<bool>> seen{subgroup_closure(table, {})};
  for (std::size_t s = 0; s < gens_of.size(); ++s) {
    std::vector<LetterWord> base;
    for (Coset g : gens_of[s]) base.push_back(table.word_for_coset(g));
    auto members = subgroup_closure(table, base);
    for (Coset g = 1; g < table.coset_count(); ++g) {
      if (members[g]) continue;
      auto extended = base;
      extended.push_back(table.word_for_coset(g));
      auto closure = subgroup_closure(table, extended);
      if (seen.insert(closure).second) {
        auto next = gens_of[s];
        next.push_back(g);
        gens_of.push_back(std::move(next));
      }
    }
  }
  std::vector<std::vector<AWord>> out;
  for (const auto& gs : gens_of) {
    std::vector<AWord> words;
    for (Coset g : gs) words.push_back(word_of_coset(*wg, g, w.lo));
    out.push_back(std::move(words));
  }
  return out;
}

std::string LimitGroup::to_string(const AWord& u) const {
  std::string s;
  for (const auto& l : u.letters()) {
    if (!s.empty()) s += ' ';
    s += 'a' + std::to_string(l.index);
    int e = l.exponent > p() / 2 ? l.exponent - p() : l.exponent;
    if (e != 1) s += '^' + std::to_string(e);
  }
  return s;
}

std::string LimitGroup::to_string(const GElement& g) const {
  std::string s = to_string(g.a);
  if (g.beta != 0) {
    if (!s.empty()) s += ' ';
    s += 't';
    if (g.beta != 1) s += '^' + std::to_string(g.beta);
  }
  return s.empty() ? "1" : s;
}

}  // namespace miflab
