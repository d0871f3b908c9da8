#include "miflab/identity_lab.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "miflab/errors.hpp"
#include "miflab/word_syntax.hpp"

namespace miflab {

namespace {

bool is_variable_atom(const std::string& name) { return name == "x" || name == "y" || name == "z"; }

struct FiniteAlgebra {
  using value_type = FiniteMixedWord;
  const GroupWithConstants& gc;
  bool allow_variables = true;

  FiniteMixedWord identity() const { return {}; }
  FiniteMixedWord multiply(const FiniteMixedWord& u, const FiniteMixedWord& v) const {
    return miflab::multiply(gc.group, u, v);
  }
  FiniteMixedWord inverse(const FiniteMixedWord& u) const { return miflab::inverse(gc.group, u); }

  FiniteMixedWord atom(const syntax::Expr& e) const {
    if (is_variable_atom(e.name) && allow_variables) {
      int id = e.name == "y" ? 2 : e.name == "z" ? 3 : 1;
      if (e.index) {
        if (e.name != "x" || *e.index < 1 || *e.index > 1'000'000)
          throw ParseError("variables are x, y, z or x<k> with k >= 1", e.position);
        id = static_cast<int>(*e.index);
      }
      return variable_word(id);
    }
    std::string full = e.name + (e.index ? std::to_string(*e.index) : "");
    if (auto it = gc.constants.find(full); it != gc.constants.end()) return constant_word(gc.group, it->second);
    if (auto x = gc.group.find(full)) return constant_word(gc.group, *x);
    throw ParseError("unknown constant '" + full + "' in " + gc.group.name(), e.position);
  }

  FiniteMixedWord cycle(const syntax::Expr& e) const {
    const int deg = gc.group.degree();
    if (deg == 0) throw ParseError(gc.group.name() + " has no permutation representation", e.position);
    Permutation perm(static_cast<std::size_t>(deg));
    for (int i = 0; i < deg; ++i) perm[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(i);
    std::set<int> used;
    for (int pt : e.points)
      if (pt > deg || !used.insert(pt).second) throw ParseError("bad cycle point " + std::to_string(pt), e.position);
    for (std::size_t i = 0; i < e.points.size(); ++i)
      perm[static_cast<std::size_t>(e.points[i] - 1)] =
          static_cast<std::uint16_t>(e.points[(i + 1) % e.points.size()] - 1);
    auto x = gc.group.from_permutation(perm);
    if (!x) throw ParseError("cycle is not an element of " + gc.group.name(), e.position);
    return constant_word(gc.group, *x);
  }
};

syntax::ParseOptions finite_parse_options() {
  syntax::ParseOptions o;
  o.cycles = true;
  return o;
}

// Word with variables mapped to dense slots, for the inner loops.
struct SlotWord {
  struct Step {
    int slot = -1;  // -1 for a constant
    Elem value = 0;
    std::int64_t exponent = 1;
  };
  std::vector<Step> steps;
};

SlotWord slotted(const FiniteMixedWord& w, const std::vector<int>& vars) {
  SlotWord out;
  for (const auto& s : w.syllables()) {
    if (!s.variable) {
      out.steps.push_back({-1, s.value, 1});
    } else {
      auto it = std::lower_bound(vars.begin(), vars.end(), s.id);
      out.steps.push_back({static_cast<int>(it - vars.begin()), 0, s.exponent});
    }
  }
  return out;
}

Elem run(const FiniteGroup& g, const SlotWord& w, const std::vector<Elem>& values) {
  Elem acc = FiniteGroup::identity();
  for (const auto& st : w.steps) acc = g.mul(acc, st.slot < 0 ? st.value : g.power(values[static_cast<std::size_t>(st.slot)], st.exponent));
  return acc;
}

unsigned resolve_threads(unsigned t) {
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return t;
}

}  // namespace

void GroupWithConstants::bind(const std::string& name, Elem value) {
  if (name.empty() || is_variable_atom(name) || name[0] == 'x')
    throw std::invalid_argument("'" + name + "' is reserved for variables");
  if (value >= group.order()) throw std::invalid_argument("constant '" + name + "' is not an element of " + group.name());
  constants[name] = value;
}

void GroupWithConstants::bind(const std::string& name, std::string_view value_text) {
  if (auto x = group.find(value_text)) {
    bind(name, *x);
    return;
  }
  FiniteAlgebra alg{*this, false};
  auto w = syntax::evaluate(syntax::parse(value_text, finite_parse_options()), alg);
  bind(name, evaluate(group, w, {}));
}

FiniteMixedWord::FiniteMixedWord(const FiniteGroup& g, std::vector<FiniteSyllable> raw) {
  for (auto& s : raw) {
    if (!s.variable) {
      s.exponent = 1;
      if (!syl_.empty() && !syl_.back().variable) {
        s.value = g.mul(syl_.back().value, s.value);
        syl_.pop_back();
      }
      if (s.value != FiniteGroup::identity()) syl_.push_back(s);
    } else {
      if (!syl_.empty() && syl_.back().variable && syl_.back().id == s.id) {
        s.exponent += syl_.back().exponent;
        syl_.pop_back();
      }
      if (s.exponent != 0) syl_.push_back(s);
    }
  }
}

std::vector<int> FiniteMixedWord::variables() const {
  std::set<int> ids;
  for (const auto& s : syl_)
    if (s.variable) ids.insert(s.id);
  return {ids.begin(), ids.end()};
}

FiniteMixedWord constant_word(const FiniteGroup& g, Elem value) { return FiniteMixedWord(g, {{false, 0, value, 1}}); }

FiniteMixedWord variable_word(int id, std::int64_t exponent) {
  if (exponent == 0) return {};
  static const FiniteGroup trivial = cyclic_group(1);
  return FiniteMixedWord(trivial, {{true, id, 0, exponent}});
}

FiniteMixedWord multiply(const FiniteGroup& g, const FiniteMixedWord& u, const FiniteMixedWord& v) {
  std::vector<FiniteSyllable> raw = u.syllables();
  raw.insert(raw.end(), v.syllables().begin(), v.syllables().end());
  return FiniteMixedWord(g, std::move(raw));
}

FiniteMixedWord inverse(const FiniteGroup& g, const FiniteMixedWord& u) {
  std::vector<FiniteSyllable> raw(u.syllables().rbegin(), u.syllables().rend());
  for (auto& s : raw) {
    if (s.variable)
      s.exponent = -s.exponent;
    else
      s.value = g.inv(s.value);
  }
  return FiniteMixedWord(g, std::move(raw));
}

FiniteMixedWord commutator(const FiniteGroup& g, const FiniteMixedWord& u, const FiniteMixedWord& v) {
  return multiply(g, multiply(g, inverse(g, u), inverse(g, v)), multiply(g, u, v));
}

std::string variable_name(int id) {
  switch (id) {
    case 1: return "x";
    case 2: return "y";
    case 3: return "z";
    default: return "x" + std::to_string(id);
  }
}

std::string to_string(const FiniteGroup& g, const FiniteMixedWord& w) {
  if (!w.nontrivial()) return "1";
  std::string s;
  for (const auto& syl : w.syllables()) {
    if (!s.empty()) s += ' ';
    if (syl.variable) {
      s += variable_name(syl.id);
      if (syl.exponent != 1) s += "^" + std::to_string(syl.exponent);
    } else {
      s += g.label(syl.value);
    }
  }
  return s;
}

FiniteMixedWord compile_word(std::string_view text, const GroupWithConstants& g) {
  FiniteAlgebra alg{g};
  return syntax::evaluate(syntax::parse(text, finite_parse_options()), alg);
}

Elem evaluate(const FiniteGroup& g, const FiniteMixedWord& w, const std::map<int, Elem>& assignment) {
  Elem acc = FiniteGroup::identity();
  for (const auto& s : w.syllables()) {
    if (!s.variable) {
      acc = g.mul(acc, s.value);
      continue;
    }
    auto it = assignment.find(s.id);
    if (it == assignment.end()) throw std::invalid_argument("no value for " + variable_name(s.id));
    acc = g.mul(acc, g.power(it->second, s.exponent));
  }
  return acc;
}

FiniteMixedWord sub_commutator(const FiniteGroup& g, const FiniteMixedWord& w, Elem n) {
  auto vars = w.variables();
  if (vars.size() > 1 || (vars.size() == 1 && vars.front() != 1))
    throw std::invalid_argument("sub_commutator expects a word in x alone");
  const FiniteMixedWord image = commutator(g, variable_word(1), constant_word(g, n));
  FiniteMixedWord out;
  for (const auto& s : w.syllables()) {
    if (!s.variable) {
      out = multiply(g, out, constant_word(g, s.value));
      continue;
    }
    const FiniteMixedWord step = s.exponent > 0 ? image : inverse(g, image);
    for (std::int64_t k = 0; k < (s.exponent > 0 ? s.exponent : -s.exponent); ++k) out = multiply(g, out, step);
  }
  return out;
}

IdentityVerdict is_mixed_identity(const FiniteMixedWord& w, const FiniteGroup& g, const IdentityOptions& options) {
  IdentityVerdict v;
  v.variables = w.variables();
  v.nontrivial_in_free_product = w.nontrivial();
  const std::size_t m = v.variables.size();
  const std::uint64_t n = g.order();

  std::uint64_t total = 1;
  for (std::size_t i = 0; i < m; ++i) {
    const std::uint64_t cap = m == 1 ? options.single_variable_cap : options.multi_variable_cap;
    if (total > cap / n)
      throw CapacityExceeded("|" + g.name() + "|^" + std::to_string(m) + " substitutions exceed the budget", cap);
    total *= n;
  }

  const SlotWord sw = slotted(w, v.variables);
  auto decode = [&](std::uint64_t idx) {
    std::vector<Elem> values(m);
    for (std::size_t i = m; i-- > 0;) {
      values[i] = static_cast<Elem>(idx % n);
      idx /= n;
    }
    return values;
  };

  const unsigned threads = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(options.threads), total));
  constexpr std::uint64_t none = std::numeric_limits<std::uint64_t>::max();
  std::atomic<std::uint64_t> best{none};
  auto scan = [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t i = lo; i < hi; ++i) {
      if (i >= best.load(std::memory_order_relaxed)) return;
      if (run(g, sw, decode(i)) != FiniteGroup::identity()) {
        std::uint64_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
        return;
      }
    }
  };
  if (threads <= 1) {
    scan(0, total);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (total + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      std::uint64_t lo = t * chunk, hi = std::min(total, lo + chunk);
      if (lo < hi) pool.emplace_back(scan, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  if (best == none) {
    v.substitutions_checked = total;
  } else {
    v.holds = false;
    v.counterexample = decode(best);
    v.substitutions_checked = best + 1;
  }
  return v;
}

FactorialVerdict factorial_identity_check(const FiniteGroup& g, const std::vector<Elem>& normal, Elem element) {
  if (element == FiniteGroup::identity()) throw std::invalid_argument("g must be nontrivial");
  if (std::find(normal.begin(), normal.end(), element) == normal.end())
    throw std::invalid_argument("g must lie in N");
  if (!g.is_normal(normal)) throw std::invalid_argument("N is not a normal subgroup of " + g.name());

  FactorialVerdict v;
  v.n = std::set<Elem>(normal.begin(), normal.end()).size();
  for (std::size_t x = 0; x < g.order(); ++x) {
    const auto xe = static_cast<Elem>(x);
    const std::uint64_t ord = g.element_order(xe);
    std::uint64_t f = 1 % ord;  // n! mod ord(x)
    for (std::uint64_t i = 2; i <= v.n && f != 0; ++i) f = (f * (i % ord)) % ord;
    ++v.substitutions_checked;
    if (g.commutator(g.power(xe, static_cast<std::int64_t>(f)), element) != FiniteGroup::identity()) {
      v.holds = false;
      v.counterexample = xe;
      break;
    }
  }
  return v;
}

namespace {

CannedResult check_pairs(const FiniteGroup& g, const std::vector<Elem>& as, const std::vector<Elem>& bs, bool twice,
                         const IdentityOptions& options) {
  CannedResult r;
  for (Elem a : as) {
    if (a == FiniteGroup::identity()) continue;
    for (Elem b : bs) {
      if (b == FiniteGroup::identity()) continue;
      auto ca = constant_word(g, a);
      auto w = commutator(g, variable_word(1), ca);
      if (twice) w = commutator(g, w, ca);
      w = commutator(g, w, constant_word(g, b));
      auto v = is_mixed_identity(w, g, options);
      ++r.pairs;
      r.substitutions += v.substitutions_checked;
      if (!v.holds || !v.nontrivial_in_free_product) {
        r.holds = false;
        r.failure = "a=" + g.label(a) + " b=" + g.label(b) +
                    (v.counterexample ? " x=" + g.label(v.counterexample->front()) : " (trivial word)");
        return r;
      }
    }
  }
  return r;
}

}  // namespace

CannedResult check_direct_product_identity(const FiniteGroup& a, const FiniteGroup& b, const IdentityOptions& options) {
  const FiniteGroup g = direct_product(a, b);
  const auto nb = static_cast<Elem>(b.order());
  std::vector<Elem> as, bs;
  for (std::size_t i = 0; i < a.order(); ++i) as.push_back(static_cast<Elem>(i * nb));
  for (std::size_t j = 0; j < b.order(); ++j) bs.push_back(static_cast<Elem>(j));
  return check_pairs(g, as, bs, false, options);
}

CannedResult check_wreath_identity(const FiniteGroup& base, int k, const IdentityOptions& options) {
  if (k < 2) throw std::invalid_argument("the base needs at least two coordinates to decompose");
  auto wr = wreath_product(k, base);
  return check_pairs(wr.group, wr.a_factor, wr.b_factor, true, options);
}

IdentityReport make_report(std::string word, const FiniteGroup& g, const IdentityVerdict& v) {
  IdentityReport r;
  r.word = std::move(word);
  r.group = g.name();
  r.verdict = v.holds;
  r.nontrivial_in_free_product = v.nontrivial_in_free_product;
  r.substitutions_checked = v.substitutions_checked;
  if (v.counterexample) {
    r.counterexample.emplace();
    for (std::size_t i = 0; i < v.variables.size(); ++i)
      (*r.counterexample)[variable_name(v.variables[i])] = g.label((*v.counterexample)[i]);
  }
  return r;
}

void to_json(nlohmann::json& j, const IdentityReport& r) {
  j = nlohmann::json{{"word", r.word},
                     {"group", r.group},
                     {"verdict", r.verdict},
                     {"nontrivial_in_free_product", r.nontrivial_in_free_product},
                     {"substitutions_checked", r.substitutions_checked}};
  if (r.counterexample) j["counterexample"] = *r.counterexample;
}

}  // namespace miflab
