#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "miflab/coset_table.hpp"
#include "miflab/errors.hpp"
#include "miflab/finite_group.hpp"
#include "miflab/grigorchuk.hpp"
#include "miflab/identity_lab.hpp"
#include "miflab/limit_group.hpp"
#include "miflab/mif_search.hpp"
#include "miflab/mixed_word.hpp"
#include "miflab/presentation.hpp"
#include "miflab/window_cache.hpp"

using namespace miflab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Elements seen by criteria 3, 4 and 8, all in the default instance.
std::vector<GElement> g_seen;

LimitGroup& default_group() {
  static LimitGroup g{Instance{}};
  return g;
}

AWord random_aword(std::mt19937_64& rng, int p, std::int64_t lo, std::int64_t hi, int max_len) {
  std::uniform_int_distribution<std::int64_t> idx(lo, hi);
  std::uniform_int_distribution<int> len(0, max_len), ex(1, p - 1);
  std::vector<ALetter> letters;
  for (int n = len(rng); n > 0; --n) letters.push_back({idx(rng), ex(rng)});
  return AWord(letters, p);
}

std::size_t order_of(int p, const char* c, std::int64_t lo, std::int64_t hi) {
  return enumerate_cosets(build_window_presentation(p, CSequence::parse(c), Window(lo, hi))).coset_count();
}

// Closure of the two elementary 3x3 unitriangular matrices over F_3.
std::size_t unitriangular_order() {
  using M = std::array<int, 9>;
  auto mul = [](const M& x, const M& y) {
    M z{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        int s = 0;
        for (int k = 0; k < 3; ++k) s += x[static_cast<std::size_t>(3 * i + k)] * y[static_cast<std::size_t>(3 * k + j)];
        z[static_cast<std::size_t>(3 * i + j)] = s % 3;
      }
    return z;
  };
  const M id{1, 0, 0, 0, 1, 0, 0, 0, 1}, e12{1, 1, 0, 0, 1, 0, 0, 0, 1}, e23{1, 0, 0, 0, 1, 1, 0, 0, 1};
  std::set<M> seen{id};
  std::vector<M> queue{id};
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (const M& g : {e12, e23})
      if (auto y = mul(queue[i], g); seen.insert(y).second) queue.push_back(y);
  return seen.size();
}

Outcome criterion1() {
  Outcome o;
  std::ostringstream d;
  double worst = 0;
  auto check = [&](const char* what, std::size_t got, std::size_t want) {
    if (got != want) {
      o.pass = false;
      d << what << "=" << got << " (want " << want << ") ";
    }
  };
  auto timed = [&](auto&& f) {
    auto t0 = Clock::now();
    f();
    double s = seconds_since(t0);
    worst = std::max(worst, s);
    if (s >= 1.0) o.pass = false;
  };
  for (int p : {2, 3, 5}) {
    timed([&] { check("|B([0,0])|", order_of(p, "1", 0, 0), static_cast<std::size_t>(p)); });
    timed([&] { check("|B([0,1])| c1=1", order_of(p, "1", 0, 1), static_cast<std::size_t>(p * p)); });
  }
  timed([&] { check("|B([0,1])| p=3 c=2", order_of(3, "2", 0, 1), unitriangular_order()); });
  // Commutator relators kill everything but the exponent sums: rank 3 over F_2.
  timed([&] { check("|B([-1,1])| p=2 c=1,1", order_of(2, "1,1", -1, 1), 8); });
  d << "8 orders exact, slowest " << worst << " s";
  o.detail = d.str();
  return o;
}

Outcome criterion2() {
  Outcome o;
  const std::vector<std::pair<Instance, std::int64_t>> instances{
      {Instance{}, 3},
      {Instance{3, CSequence::constant(2)}, 2},
      {Instance{2, CSequence::parse("1,2")}, 5},
      {Instance{5, CSequence::constant(1)}, 2},
      {Instance{2, CSequence::parse("1,3")}, 3},
  };
  std::size_t tables = 0, cosets = 0, violations = 0;
  auto t0 = Clock::now();
  for (const auto& [inst, max_width] : instances) {
    WindowCache cache(inst);
    for (std::int64_t w = 0; w <= max_width; ++w) cache.get(w);
    for (const auto& wg : cache.built()) {
      if (wg->table.coset_count() > 100000) continue;
      ++tables;
      cosets += wg->table.coset_count();
      violations += wg->table.count_relator_violations(wg->presentation);
      if (!wg->table.columns_are_permutations()) ++violations;
    }
  }
  double s = seconds_since(t0);
  o.pass = violations == 0 && s < 10.0;
  o.detail = std::to_string(tables) + " tables, " + std::to_string(cosets) + " cosets, " + std::to_string(violations) +
             " violations, " + std::to_string(s) + " s";
  return o;
}

Outcome criterion3() {
  Outcome o;
  auto& G = default_group();
  std::mt19937_64 rng(3003);
  std::uniform_int_distribution<std::int64_t> lo_d(-2, -1), bit(0, 1), beta(-2, 2), shift_d(-1, 1);
  std::size_t failures = 0;
  const int n = 10000;
  for (int it = 0; it < n; ++it) {
    // All sampled supports lie in [lo, lo+2] within [-2, 2]; cumulative
    // t-exponents stay in {0, 1}, so every product lives in [lo, lo+3].
    const auto lo = lo_d(rng);
    GElement g{random_aword(rng, 2, lo, lo + 2, 5), bit(rng)};
    GElement h{random_aword(rng, 2, lo, lo + 2, 5), bit(rng) - g.beta};
    GElement k{random_aword(rng, 2, lo, lo + 2, 5), beta(rng)};
    auto gh_k = G.multiply(G.multiply(g, h), k);
    auto g_hk = G.multiply(g, G.multiply(h, k));
    if (!G.equal(gh_k, g_hk)) ++failures;
    if (!G.is_trivial(G.multiply(g, G.inverse(g))) || !G.is_trivial(G.multiply(G.inverse(g), g))) ++failures;

    // phi^s(uv) = phi^s(u) phi^s(v), with phi^s realized as conjugation by t^s.
    const auto s = shift_d(rng);
    auto u = G.from_aword(random_aword(rng, 2, lo + 1, lo + 2, 5));
    auto v = G.from_aword(random_aword(rng, 2, lo + 1, lo + 2, 5));
    auto uv = G.multiply(u, v);
    auto conj = [&](const GElement& x) { return G.multiply(G.multiply(G.t(s), x), G.t(-s)); };
    auto lhs = G.from_aword(shift(uv.a, s));
    auto rhs = G.multiply(G.from_aword(shift(u.a, s)), G.from_aword(shift(v.a, s)));
    if (!G.equal(lhs, rhs) || !G.equal(conj(uv), lhs)) ++failures;
    if (G.normal_form(lhs.a) != shift(G.normal_form(uv.a), s)) ++failures;

    for (const auto* x : {&g, &h, &k, &gh_k, &u, &v, &uv}) g_seen.push_back(*x);
  }
  o.pass = failures == 0;
  o.detail = std::to_string(n) + " triples, " + std::to_string(failures) + " failures";
  return o;
}

Outcome criterion4() {
  Outcome o;
  auto& G = default_group();
  std::mt19937_64 rng(4004);
  std::uniform_int_distribution<std::int64_t> lo_d(-3, 0), beta(-3, 3);
  std::size_t exceptions = 0, finite = 0, infinite = 0;
  const int p = G.p();
  const std::int64_t p4 = static_cast<std::int64_t>(p) * p * p * p;
  for (int it = 0; it < 1000; ++it) {
    const auto lo = lo_d(rng);
    GElement g{random_aword(rng, p, lo, lo + 3, 8), beta(rng) * (it % 2)};
    g_seen.push_back(g);
    auto ord = G.order(g);
    if (ord.infinite != (g.beta != 0)) ++exceptions;
    if (!ord.infinite) {
      ++finite;
      std::uint64_t v = ord.value;
      while (v % static_cast<std::uint64_t>(p) == 0) v /= static_cast<std::uint64_t>(p);
      if (v != 1) ++exceptions;
      // First trivial power among g^1..g^(p^4) must be the reported order.
      std::int64_t first = 0;
      GElement x = G.identity();
      for (std::int64_t k = 1; k <= p4 && !first; ++k) {
        x = G.multiply(x, g);
        g_seen.push_back(x);
        if (G.is_trivial(x)) first = k;
      }
      if (first ? static_cast<std::uint64_t>(first) != ord.value : ord.value <= static_cast<std::uint64_t>(p4))
        ++exceptions;
    } else {
      ++infinite;
      GElement x = G.identity();
      for (std::int64_t k = 1; k <= 50; ++k) {
        x = G.multiply(x, g);
        if (G.is_trivial(x) || !G.order(x).infinite) ++exceptions;
      }
    }
  }
  for (std::int64_t k = 1; k <= 50; ++k)
    if (!G.order(G.t(k)).infinite || !G.order(G.t(-k)).infinite) ++exceptions;
  o.pass = exceptions == 0;
  o.detail = std::to_string(finite) + " finite, " + std::to_string(infinite) + " infinite, " +
             std::to_string(exceptions) + " exceptions";
  return o;
}

Outcome criterion5() {
  Outcome o;
  LimitGroup G(Instance{2, CSequence::parse("1,2")});
  std::size_t subgroups = 0, bad = 0;
  for (std::int64_t n : {0, 1}) {
    for (const auto& gens : G.subgroup_generating_sets(Window(-n, n))) {
      ++subgroups;
      if (!G.conjugate_subgroup_meet_trivial(gens, n)) ++bad;
    }
  }
  o.pass = bad == 0 && subgroups > 2;
  o.detail = std::to_string(subgroups) + " subgroups checked, " + std::to_string(bad) + " with nontrivial meet";
  return o;
}

Outcome criterion6() {
  Outcome o;
  auto t0 = Clock::now();
  IdentityOptions opts;
  opts.threads = 0;
  auto names = small_group_catalog();
  std::size_t products = 0, pairs = 0, failures = 0;
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i; j < names.size(); ++j) {
      auto r = check_direct_product_identity(make_group(names[i]), make_group(names[j]), opts);
      ++products;
      pairs += r.pairs;
      if (!r.holds) ++failures;
    }
  for (auto [base, k] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {2, 3}})
    if (!check_wreath_identity(cyclic_group(base), k, opts).holds) ++failures;
  auto s4 = symmetric_group(4);
  std::vector<Elem> v4{0};
  for (const auto& perm : std::vector<Permutation>{{1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}})
    v4.push_back(*s4.from_permutation(perm));
  std::sort(v4.begin(), v4.end());
  for (Elem g : v4) {
    if (g == 0) continue;
    auto r = factorial_identity_check(s4, v4, g);
    if (!r.holds || r.n != 4) ++failures;
  }
  double s = seconds_since(t0);
  o.pass = failures == 0 && products >= 10 && s < 30.0;
  o.detail = std::to_string(products) + " direct products (" + std::to_string(pairs) +
             " (a,b) pairs), 3 wreath products, S4/V4 factorial; " + std::to_string(failures) + " failures, " +
             std::to_string(s) + " s";
  return o;
}

// Automaton for the action table, kept separate from the library's act().
std::string table_act(const std::string& w, std::string s) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    char state = *it;
    for (auto& bit : s) {
      if (state == 'e') break;
      const bool one = bit == '1';
      switch (state) {
        case 'a': bit = one ? '0' : '1'; state = 'e'; break;
        case 'b': state = one ? 'c' : 'a'; break;
        case 'c': state = one ? 'd' : 'a'; break;
        case 'd': state = one ? 'b' : 'e'; break;
      }
    }
  }
  return s;
}

Outcome criterion7() {
  Outcome o;
  auto t0 = Clock::now();
  std::mt19937_64 rng(7007);
  std::size_t row_failures = 0;
  for (int it = 0; it < 1000; ++it) {
    std::string w;
    for (auto n = rng() % 16; n > 0; --n) w += rng() & 1 ? '1' : '0';
    row_failures += grig::act("a", "0" + w) != "1" + w;
    row_failures += grig::act("a", "1" + w) != "0" + w;
    row_failures += grig::act("b", "0" + w) != "0" + grig::act("a", w);
    row_failures += grig::act("b", "1" + w) != "1" + grig::act("c", w);
    row_failures += grig::act("c", "0" + w) != "0" + grig::act("a", w);
    row_failures += grig::act("c", "1" + w) != "1" + grig::act("d", w);
    row_failures += grig::act("d", "0" + w) != "0" + w;
    row_failures += grig::act("d", "1" + w) != "1" + grig::act("b", w);
  }
  std::size_t words = 0, disagreements = 0;
  for (int n = 0; n <= 8; ++n)
    for (const auto& w : grig::reduced_words(n)) {
      ++words;
      bool by_action = true;
      for (std::uint32_t code = 0; code < (1u << 12) && by_action; ++code) {
        std::string s;
        for (int j = 11; j >= 0; --j) s += (code >> j) & 1 ? '1' : '0';
        by_action = table_act(w, s) == s;
      }
      if (by_action != grig::is_trivial(w)) ++disagreements;
    }
  auto rep = grig::verify_identity(6, 0);
  double s = seconds_since(t0);
  o.pass = row_failures == 0 && disagreements == 0 && rep.violations.empty() && s < 120.0;
  o.detail = "8000 table checks (" + std::to_string(row_failures) + " bad), " + std::to_string(words) +
             " words vs depth-12 action (" + std::to_string(disagreements) + " disagree), identity on " +
             std::to_string(rep.checked) + " words (" + std::to_string(rep.violations.size()) + " violations), " +
             std::to_string(s) + " s";
  return o;
}

Outcome criterion8() {
  Outcome o;
  auto serialize = [](const DriveResult& r) {
    std::ostringstream out;
    write_certificates(out, r.certificates);
    return out.str();
  };
  auto first = drive(default_group(), 50, {}, 1);
  LimitGroup again_group{Instance{}};
  auto again = drive(again_group, 50, {}, 1);
  LimitGroup wide_group{Instance{}};
  auto wide = drive(wide_group, 50, {}, 8);

  LimitGroup fresh{Instance{}};
  std::istringstream in(serialize(first));
  auto rep = verify_certificates(fresh, read_certificates(in));

  std::size_t exhausted = 0;
  for (const auto& c : first.certificates) exhausted += c.status == CertificateStatus::SearchExhausted;
  for (const auto& f : first.witness_set) g_seen.push_back(f);

  const bool identical = serialize(first) == serialize(again) && serialize(first) == serialize(wide);
  o.pass = first.complete && first.certificates.size() == 50 && rep.ok() && first.persistence_violations == 0 &&
           identical;
  o.detail = std::to_string(first.certificates.size()) + " certificates, " + std::to_string(rep.witnesses) +
             " witnesses verified, " + std::to_string(rep.failures.size()) + " verify failures, " +
             std::to_string(exhausted) + " exhausted, " + std::to_string(first.persistence_violations) +
             " persistence violations, " + (identical ? "bit-identical" : "NOT identical") + " across runs/threads";
  if (!first.complete) o.detail += ", incomplete: " + first.error;
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::size_t failures = 0, samples = 0;
  // t-free samples in the default instance, then t-carrying samples in the
  // abelian instance p = 2, c = (1, 1, ...), where every window is reachable.
  CacheOptions wide;
  wide.limits.max_width = 14;
  std::vector<std::pair<LimitGroup, std::int64_t>> groups;
  groups.emplace_back(LimitGroup(Instance{}), 0);
  groups.emplace_back(LimitGroup(Instance{2, CSequence::constant(1)}, wide), 1);
  std::mt19937_64 rng(9009);
  for (auto& [G, max_beta] : groups) {
    MixedCalculus M(G);
    const std::int64_t hi = max_beta ? 1 : 3;
    std::uniform_int_distribution<std::int64_t> coin(0, 1), exp(1, 2), bd(-max_beta, max_beta);
    std::uniform_int_distribution<int> var(1, 2);
    while (samples < (max_beta ? 1000u : 500u)) {
      std::vector<Syllable> raw;
      for (int i = 0, len = max_beta ? 3 : 4; i < len; ++i) {
        if (coin(rng))
          raw.push_back(ConstantSyllable{G.from_aword(random_aword(rng, 2, 0, hi, 3))});
        else
          raw.push_back(VariableSyllable{var(rng), exp(rng) * (coin(rng) ? 1 : -1)});
      }
      auto w = M.reduce(raw);
      GElement g = G.from_aword(random_aword(rng, 2, 0, hi, 4));
      if (G.is_trivial(g)) continue;
      GElement h{random_aword(rng, 2, 0, max_beta ? 0 : hi, 4), bd(rng)};
      Assignment sigma;
      for (int i : {1, 2}) sigma[i] = G.multiply(G.multiply(G.power(h, i), g), G.power(h, i));
      if (!G.equal(M.evaluate(M.iota_embed(w, g), h), M.evaluate(w, sigma))) ++failures;
      ++samples;
    }
  }
  o.pass = failures == 0 && samples == 1000;
  o.detail = std::to_string(samples) + " (w, g, h) samples, " + std::to_string(failures) + " failures";
  return o;
}

Outcome criterion10() {
  Outcome o;
  auto& G = default_group();
  std::size_t checked = 0, nonzero = 0, exceptions = 0, unreachable = 0;
  for (const auto& g : g_seen) {
    for (const GElement& x : {g, G.from_aword(g.a)}) {
      ++checked;
      auto ab = G.abelianize(x);
      if (!ab.nonzero()) continue;
      ++nonzero;
      try {
        if (G.is_trivial(x)) ++exceptions;
      } catch (const CapacityExceeded&) {
        ++unreachable;
      }
    }
  }
  o.pass = exceptions == 0 && checked > 0;
  o.detail = std::to_string(checked) + " elements, " + std::to_string(nonzero) + " with nonzero image, " +
             std::to_string(exceptions) + " exceptions";
  if (unreachable) o.detail += ", " + std::to_string(unreachable) + " beyond the coset cap";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %2zu: %s  %s [%.2f s]\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
