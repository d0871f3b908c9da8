#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "miflab/errors.hpp"
#include "miflab/limit_group.hpp"
#include "miflab/mixed_word.hpp"

using namespace miflab;

namespace {

struct Sampler {
  std::mt19937_64 rng;
  std::int64_t lo, hi;
  std::int64_t max_beta;
  int p = 2;

  std::int64_t uniform(std::int64_t a, std::int64_t b) { return std::uniform_int_distribution<std::int64_t>(a, b)(rng); }

  GElement element(bool with_beta) {
    std::vector<ALetter> letters;
    for (auto n = uniform(0, 4); n > 0; --n) letters.push_back({uniform(lo, hi), static_cast<int>(uniform(1, p - 1))});
    return {AWord(letters, p), with_beta ? uniform(-max_beta, max_beta) : 0};
  }

  std::vector<Syllable> raw(int vars, int len, bool constants_with_beta) {
    std::vector<Syllable> out;
    for (int i = 0; i < len; ++i) {
      if (uniform(0, 1)) {
        out.push_back(ConstantSyllable{element(constants_with_beta)});
      } else {
        std::int64_t e = uniform(1, 2) * (uniform(0, 1) ? 1 : -1);
        out.push_back(VariableSyllable{static_cast<int>(uniform(1, vars)), e});
      }
    }
    return out;
  }
};

// Raw syllables evaluated one by one, without reduction.
GElement evaluate_raw(const LimitGroup& G, const std::vector<Syllable>& raw, const Assignment& sigma) {
  GElement acc = G.identity();
  for (const auto& s : raw) {
    if (const auto* c = std::get_if<ConstantSyllable>(&s))
      acc = G.multiply(acc, c->value);
    else {
      const auto& v = std::get<VariableSyllable>(s);
      acc = G.multiply(acc, G.power(sigma.at(v.id), v.exponent));
    }
  }
  return acc;
}

LimitGroup abelian_instance() {
  CacheOptions opts;
  opts.limits.max_width = 14;
  return LimitGroup(Instance{2, CSequence::constant(1)}, opts);
}

}  // namespace

TEST(Reduce, Examples) {
  LimitGroup G(Instance{2, CSequence::constant(1)});
  MixedCalculus M(G);
  EXPECT_TRUE(M.parse("x a0 a0^-1 x^-1").empty());
  auto w = M.reduce({VariableSyllable{1, 1}, VariableSyllable{1, 2}});
  ASSERT_EQ(w.syllables().size(), 1u);
  EXPECT_EQ(std::get<VariableSyllable>(w.syllables()[0]).exponent, 3);
  EXPECT_EQ(M.to_string(w), "x^3");
  auto z = M.parse("a0 x [a0,a1] x^-1");
  EXPECT_EQ(z, M.constant(G.a(0)));
  EXPECT_EQ(M.to_string(z), "a0");
}

TEST(Reduce, CancelsAcrossSyllables) {
  LimitGroup G(Instance{});
  MixedCalculus M(G);
  EXPECT_EQ(M.to_string(M.parse("x a0 t t^-1 a0 x")), "x^2");
  EXPECT_EQ(M.to_string(M.parse("x2 x x^-1 x2^-1")), "1");
  EXPECT_EQ(M.parse("x x2").variable_count(), 2);
  EXPECT_EQ(M.to_string(M.parse("a0 a1 a0 a1")), "1");
  EXPECT_FALSE(M.parse("(a0 a2)^2").empty());
  EXPECT_TRUE(M.parse("(a0 a2)^4").empty());
}

TEST(Reduce, IdempotentAndPreservesEvaluation) {
  LimitGroup G(Instance{});
  MixedCalculus M(G);
  Sampler s{std::mt19937_64(17), 0, 3, 0};
  for (int it = 0; it < 300; ++it) {
    auto raw = s.raw(2, 6, false);
    auto w = M.reduce(raw);
    EXPECT_EQ(M.reduce(w.syllables()), w);
    Assignment sigma{{1, s.element(false)}, {2, s.element(false)}};
    EXPECT_TRUE(G.equal(M.evaluate(w, sigma), evaluate_raw(G, raw, sigma)));
    for (std::size_t i = 1; i < w.syllables().size(); ++i) {
      const auto& a = w.syllables()[i - 1];
      const auto& b = w.syllables()[i];
      bool both_const = std::holds_alternative<ConstantSyllable>(a) && std::holds_alternative<ConstantSyllable>(b);
      bool same_var = std::holds_alternative<VariableSyllable>(a) && std::holds_alternative<VariableSyllable>(b) &&
                      std::get<VariableSyllable>(a).id == std::get<VariableSyllable>(b).id;
      EXPECT_FALSE(both_const || same_var);
    }
  }
}

TEST(Evaluate, Examples) {
  LimitGroup G(Instance{2, CSequence::constant(1)});
  MixedCalculus M(G);
  EXPECT_TRUE(G.is_trivial(M.evaluate(M.parse("[x,a0]"), G.a(0))));
  auto v = M.evaluate(M.parse("x t x"), G.t());
  EXPECT_EQ(v, G.t(3));
  auto c = M.evaluate(M.parse("[x,t]"), G.a(0));
  EXPECT_EQ(c.beta, 0);
  // Per-index exponent sums of a0^-1 a_-1 are nonzero in the abelianization.
  std::map<std::int64_t, int> sums;
  for (const auto& l : c.a.letters()) sums[l.index] = (sums[l.index] + l.exponent) % 2;
  EXPECT_EQ(sums[0], 1);
  EXPECT_EQ(sums[-1], 1);
  EXPECT_FALSE(G.is_trivial(c));
  EXPECT_THROW(M.evaluate(M.parse("x2"), G.a(0)), std::invalid_argument);
}

TEST(Evaluate, Multiplicative) {
  LimitGroup G(Instance{});
  MixedCalculus M(G);
  Sampler s{std::mt19937_64(23), 0, 3, 0};
  for (int it = 0; it < 200; ++it) {
    auto u = M.reduce(s.raw(1, 4, false)), v = M.reduce(s.raw(1, 4, false));
    auto g = s.element(false);
    EXPECT_TRUE(G.equal(M.evaluate(M.multiply(u, v), g), G.multiply(M.evaluate(u, g), M.evaluate(v, g))));
    EXPECT_TRUE(G.equal(M.evaluate(M.inverse(u), g), G.inverse(M.evaluate(u, g))));
  }
}

TEST(IotaEmbed, Examples) {
  LimitGroup G(Instance{});
  MixedCalculus M(G);
  auto g = G.a(0);
  EXPECT_EQ(M.to_string(M.iota_embed(M.variable(1), g)), "x a0 x");
  EXPECT_TRUE(M.iota_embed(MixedWord{}, g).empty());
  EXPECT_EQ(M.to_string(M.iota_embed(M.parse("x1 x2"), g)), "x a0 x^3 a0 x^2");
  EXPECT_THROW(M.iota_embed(M.variable(1), G.identity()), std::invalid_argument);
  EXPECT_THROW(M.iota_embed(M.variable(1), parse_element(G, "[a0,a1]")), std::invalid_argument);
}

TEST(IotaEmbed, EvaluationCompatibleWithoutT) {
  LimitGroup G(Instance{});
  MixedCalculus M(G);
  Sampler s{std::mt19937_64(31), 0, 3, 0};
  int checked = 0;
  for (int it = 0; it < 200; ++it) {
    auto w = M.reduce(s.raw(2, 4, false));
    auto g = s.element(false), h = s.element(false);
    if (G.is_trivial(g)) continue;
    auto lhs = M.evaluate(M.iota_embed(w, g), h);
    Assignment sigma;
    for (int i : {1, 2}) sigma[i] = G.multiply(G.multiply(G.power(h, i), g), G.power(h, i));
    EXPECT_TRUE(G.equal(lhs, M.evaluate(w, sigma)));
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(IotaEmbed, EvaluationCompatibleWithT) {
  LimitGroup G = abelian_instance();
  MixedCalculus M(G);
  Sampler s{std::mt19937_64(37), 0, 1, 1};
  for (int it = 0; it < 200; ++it) {
    auto w = M.reduce(s.raw(2, 3, false));
    auto g = s.element(false);
    if (G.is_trivial(g)) g = G.a(0);
    auto h = s.element(true);
    Assignment sigma;
    for (int i : {1, 2}) sigma[i] = G.multiply(G.multiply(G.power(h, i), g), G.power(h, i));
    EXPECT_TRUE(G.equal(M.evaluate(M.iota_embed(w, g), h), M.evaluate(w, sigma)));
  }
}

TEST(IotaEmbed, InjectiveOnSamples) {
  LimitGroup G(Instance{});
  MixedCalculus M(G);
  Sampler s{std::mt19937_64(41), 0, 2, 0};
  for (int it = 0; it < 200; ++it) {
    auto w = M.reduce(s.raw(2, 5, false));
    EXPECT_EQ(M.iota_embed(w, G.a(1)).empty(), w.empty());
  }
}

TEST(SubCommutator, Examples) {
  LimitGroup G(Instance{});
  MixedCalculus M(G);
  auto n = G.a(1);
  EXPECT_EQ(M.sub_commutator(M.variable(1), n), M.parse("x^-1 a1^-1 x a1"));
  EXPECT_TRUE(M.sub_commutator(MixedWord{}, n).empty());
  EXPECT_EQ(M.sub_commutator(M.parse("[[x,a0],t]"), n), M.parse("[[[x,a1],a0],t]"));
  EXPECT_THROW(M.sub_commutator(M.variable(1), G.identity()), std::invalid_argument);
  EXPECT_THROW(M.sub_commutator(M.variable(2), n), std::invalid_argument);
}

TEST(SubCommutator, EvaluationCompatible) {
  LimitGroup G = abelian_instance();
  MixedCalculus M(G);
  Sampler s{std::mt19937_64(43), 0, 1, 1};
  for (int it = 0; it < 200; ++it) {
    auto w = M.reduce(s.raw(1, 3, false));
    auto n = s.element(true);
    if (G.is_trivial(n)) continue;
    auto g = s.element(true);
    EXPECT_TRUE(G.equal(M.evaluate(M.sub_commutator(w, n), g), M.evaluate(w, G.commutator(g, n))));
  }
}

TEST(Syntax, RoundTripThroughText) {
  LimitGroup G(Instance{3, CSequence::constant(1)});
  MixedCalculus M(G);
  Sampler s{std::mt19937_64(47), -1, 1, 1, 3};
  for (int it = 0; it < 200; ++it) {
    auto w = M.reduce(s.raw(3, 5, true));
    EXPECT_EQ(M.parse(M.to_string(w)), w) << M.to_string(w);
  }
  EXPECT_THROW(M.parse("[x"), ParseError);
  EXPECT_THROW(M.parse("y"), ParseError);
  EXPECT_THROW(M.parse("x^"), ParseError);
}
