#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "miflab/grigorchuk.hpp"

using namespace miflab;

namespace {

// Automaton oracle: state -> (bit -> (output bit, next state)), 'e' is the
// identity state.
struct Edge {
  char out;
  char next;
};

const std::map<char, std::map<char, Edge>> kAutomaton{
    {'a', {{'0', {'1', 'e'}}, {'1', {'0', 'e'}}}},
    {'b', {{'0', {'0', 'a'}}, {'1', {'1', 'c'}}}},
    {'c', {{'0', {'0', 'a'}}, {'1', {'1', 'd'}}}},
    {'d', {{'0', {'0', 'e'}}, {'1', {'1', 'b'}}}},
};

std::string run(char state, const std::string& s) {
  std::string out;
  for (char bit : s) {
    if (state == 'e') {
      out += bit;
      continue;
    }
    const Edge& e = kAutomaton.at(state).at(bit);
    out += e.out;
    state = e.next;
  }
  return out;
}

std::string oracle_act(const std::string& w, std::string s) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) s = run(*it, s);
  return s;
}

bool oracle_trivial(const std::string& w, int depth) {
  for (std::uint32_t code = 0; code < (1u << depth); ++code) {
    std::string s;
    for (int j = depth - 1; j >= 0; --j) s += (code >> j) & 1 ? '1' : '0';
    if (oracle_act(w, s) != s) return false;
  }
  return true;
}

std::string random_bits(std::mt19937_64& rng, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += rng() & 1 ? '1' : '0';
  return s;
}

std::string random_word(std::mt19937_64& rng, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += "abcd"[rng() % 4];
  return s;
}

std::string random_h(std::mt19937_64& rng, int n) {
  auto w = random_word(rng, n);
  return grig::in_stabilizer(w) ? w : w + "a";
}

}  // namespace

TEST(GrigAct, Examples) {
  EXPECT_EQ(grig::act("a", "010"), "110");
  EXPECT_EQ(grig::act("d", "0110"), "0110");
  EXPECT_EQ(grig::act("b", "10"), "10");
  EXPECT_EQ(grig::act("b", "11"), "11");
  EXPECT_EQ(grig::act("b", "0"), "0");
  EXPECT_EQ(grig::act("", "101"), "101");
  EXPECT_EQ(grig::act("ab", "00"), "11");
  EXPECT_THROW(grig::act("e", "0"), std::invalid_argument);
  EXPECT_THROW(grig::act("a", "2"), std::invalid_argument);
}

TEST(GrigAct, TableRowsOnRandomStrings) {
  std::mt19937_64 rng(1);
  for (int it = 0; it < 1000; ++it) {
    auto w = random_bits(rng, static_cast<int>(rng() % 12));
    EXPECT_EQ(grig::act("a", "0" + w), "1" + w);
    EXPECT_EQ(grig::act("a", "1" + w), "0" + w);
    EXPECT_EQ(grig::act("b", "0" + w), "0" + grig::act("a", w));
    EXPECT_EQ(grig::act("b", "1" + w), "1" + grig::act("c", w));
    EXPECT_EQ(grig::act("c", "0" + w), "0" + grig::act("a", w));
    EXPECT_EQ(grig::act("c", "1" + w), "1" + grig::act("d", w));
    EXPECT_EQ(grig::act("d", "0" + w), "0" + w);
    EXPECT_EQ(grig::act("d", "1" + w), "1" + grig::act("b", w));
  }
}

TEST(GrigAct, AgreesWithAutomatonAndPreservesPrefixes) {
  std::mt19937_64 rng(2);
  for (int it = 0; it < 500; ++it) {
    auto w = random_word(rng, static_cast<int>(rng() % 10));
    auto s = random_bits(rng, 10);
    auto image = grig::act(w, s);
    EXPECT_EQ(image, oracle_act(w, s));
    EXPECT_EQ(image.size(), s.size());
    EXPECT_EQ(grig::act(w, s.substr(0, 4)), image.substr(0, 4));
  }
}

TEST(GrigReduce, ExamplesAndActionEquivalence) {
  EXPECT_EQ(grig::reduce("bb"), "");
  EXPECT_EQ(grig::reduce("bc"), "d");
  EXPECT_EQ(grig::reduce(""), "");
  EXPECT_EQ(grig::reduce("abba"), "");
  EXPECT_EQ(grig::reduce("abcda"), "");
  EXPECT_TRUE(oracle_trivial("bb", 12));
  EXPECT_TRUE(oracle_trivial("bcd", 12));
  for (const char* rel : {"aa", "bb", "cc", "dd", "bcd", "cbd", "bdc"}) {
    EXPECT_TRUE(grig::is_trivial(rel)) << rel;
    EXPECT_TRUE(oracle_trivial(rel, 12)) << rel;
  }
  std::mt19937_64 rng(3);
  for (int it = 0; it < 200; ++it) {
    auto w = random_word(rng, 12);
    auto r = grig::reduce(w);
    EXPECT_TRUE(grig::is_reduced(r));
    EXPECT_LE(r.size(), w.size());
    auto s = random_bits(rng, 12);
    EXPECT_EQ(oracle_act(w, s), oracle_act(r, s));
  }
}

TEST(GrigSplit, Examples) {
  EXPECT_EQ(grig::split("b"), (std::pair<std::string, std::string>{"a", "c"}));
  EXPECT_EQ(grig::split("c"), (std::pair<std::string, std::string>{"a", "d"}));
  EXPECT_EQ(grig::split("d"), (std::pair<std::string, std::string>{"", "b"}));
  EXPECT_EQ(grig::split("ada"), (std::pair<std::string, std::string>{"b", ""}));
  EXPECT_EQ(grig::split("aba"), (std::pair<std::string, std::string>{"c", "a"}));
  EXPECT_THROW(grig::split("a"), std::invalid_argument);
  EXPECT_THROW(grig::split("bab"), std::invalid_argument);
}

TEST(GrigSplit, SectionsMatchActionAndShrink) {
  std::mt19937_64 rng(4);
  for (int it = 0; it < 300; ++it) {
    auto w = grig::reduce(random_h(rng, 14));
    auto [l, r] = grig::split(w);
    EXPECT_LE(l.size(), (w.size() + 1) / 2 + 1);
    EXPECT_LE(r.size(), (w.size() + 1) / 2 + 1);
    auto s = random_bits(rng, 9);
    EXPECT_EQ(oracle_act(w, "0" + s), "0" + oracle_act(l, s));
    EXPECT_EQ(oracle_act(w, "1" + s), "1" + oracle_act(r, s));
  }
}

TEST(GrigSplit, Homomorphism) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 200; ++it) {
    auto u = random_h(rng, 9), v = random_h(rng, 9);
    auto [ul, ur] = grig::split(u);
    auto [vl, vr] = grig::split(v);
    auto [pl, pr] = grig::split(u + v);
    EXPECT_TRUE(grig::is_trivial(grig::multiply(pl, grig::inverse(ul + vl))));
    EXPECT_TRUE(grig::is_trivial(grig::multiply(pr, grig::inverse(ur + vr))));
  }
}

TEST(GrigSplit, ConjugatesLandInOneFactor) {
  std::mt19937_64 rng(6);
  for (int it = 0; it < 200; ++it) {
    auto h = random_h(rng, 10);
    auto hi = grig::inverse(h);
    EXPECT_TRUE(grig::is_trivial(grig::split(hi + "d" + h).first));
    EXPECT_TRUE(grig::is_trivial(grig::split(hi + "ada" + h).second));
  }
}

TEST(GrigTrivial, Examples) {
  EXPECT_TRUE(grig::is_trivial(""));
  EXPECT_FALSE(grig::is_trivial("abab"));
  EXPECT_FALSE(oracle_trivial("abab", 4));
  EXPECT_TRUE(grig::is_trivial("adadadad"));
  EXPECT_TRUE(oracle_trivial("adadadad", 12));
  EXPECT_FALSE(grig::is_trivial("adad"));
  auto [l, r] = grig::split("adad");
  EXPECT_EQ(l, "b");
  EXPECT_EQ(r, "b");
  EXPECT_EQ(grig::moved_string("abab", 6), std::optional<std::string>("00"));
  EXPECT_FALSE(grig::moved_string("adadadad", 8));
}

TEST(GrigTrivial, SolverAgreesWithOracleUpToLengthEight) {
  std::size_t trivial = 0, total = 0;
  for (int n = 0; n <= 8; ++n)
    for (const auto& w : grig::reduced_words(n)) {
      bool solver = grig::is_trivial(w);
      ASSERT_EQ(solver, oracle_trivial(w, 12)) << w;
      if (!solver) {
        auto s = grig::moved_string(w, 12);
        ASSERT_TRUE(s);
        EXPECT_NE(oracle_act(w, *s), *s);
      }
      trivial += solver;
      ++total;
    }
  EXPECT_GT(trivial, 1u);
  EXPECT_GT(total, trivial);
}

TEST(GrigWords, ReducedWordCounts) {
  // Alternating words: starting with a gives 3^floor(n/2), starting with a
  // Klein letter gives 3^ceil(n/2).
  auto pow3 = [](int k) {
    std::size_t r = 1;
    while (k-- > 0) r *= 3;
    return r;
  };
  EXPECT_EQ(grig::reduced_words(0).size(), 1u);
  for (int n = 1; n <= 8; ++n) {
    auto words = grig::reduced_words(n);
    EXPECT_EQ(words.size(), pow3(n / 2) + pow3((n + 1) / 2));
    EXPECT_TRUE(std::is_sorted(words.begin(), words.end()));
    for (const auto& w : words) EXPECT_TRUE(grig::is_reduced(w));
  }
}

TEST(GrigIdentity, VerifyAtSmallLengths) {
  auto r0 = grig::verify_identity(0);
  EXPECT_EQ(r0.checked, 1u);
  EXPECT_TRUE(r0.violations.empty());
  auto r1 = grig::verify_identity(1);
  EXPECT_EQ(r1.checked, 5u);
  EXPECT_TRUE(r1.violations.empty());
  auto r8 = grig::verify_identity(8, 4);
  std::size_t expected = 0;
  for (int n = 0; n <= 8; ++n) expected += grig::reduced_words(n).size();
  EXPECT_EQ(r8.checked, expected);
  EXPECT_TRUE(r8.violations.empty());
  nlohmann::json j = r8;
  EXPECT_EQ(j.at("checked"), expected);
  EXPECT_TRUE(j.at("violations").empty());
}

TEST(GrigIdentity, LawIsNotVacuous) {
  // Shorter brackets fail somewhere, so the solver is not just saying yes.
  bool fails = false;
  for (int n = 0; n <= 4 && !fails; ++n)
    for (const auto& g : grig::reduced_words(n))
      if (!grig::is_trivial(grig::commutator(grig::commutator(g, "b"), "ada"))) fails = true;
  EXPECT_TRUE(fails);
  for (const auto& g : grig::reduced_words(3))
    EXPECT_TRUE(oracle_trivial(
        grig::commutator(grig::commutator(grig::commutator(grig::commutator(g, "b"), "d"), "d"), "ada"), 10));
}
