#include "miflab/grigorchuk.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace miflab::grig {

namespace {

bool klein(char x) { return x == 'b' || x == 'c' || x == 'd'; }

// Product of two distinct Klein letters.
char klein_product(char x, char y) { return static_cast<char>('b' + 'c' + 'd' - x - y); }

// Sections of b, c, d at the two children.
char section(char x, int bit) {
  switch (x) {
    case 'b': return bit ? 'c' : 'a';
    case 'c': return bit ? 'd' : 'a';
    default: return bit ? 'b' : '1';
  }
}

void apply_generator(char g, std::string& s) {
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (g == 'a') {
      s[j] = s[j] == '0' ? '1' : '0';
      return;
    }
    g = section(g, s[j] == '1');
    if (g == '1') return;
  }
}

}  // namespace

void validate(std::string_view w) {
  for (char x : w)
    if (x != 'a' && !klein(x)) throw std::invalid_argument(std::string("not a Grigorchuk generator: '") + x + "'");
}

std::string reduce(std::string_view w) {
  validate(w);
  std::string out;
  for (char x : w) {
    if (!out.empty() && out.back() == x) {
      out.pop_back();
    } else if (!out.empty() && klein(out.back()) && klein(x)) {
      out.back() = klein_product(out.back(), x);
    } else {
      out.push_back(x);
    }
  }
  return out;
}

bool is_reduced(std::string_view w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if ((w[i] == 'a') == (w[i + 1] == 'a')) return false;
  return true;
}

std::string multiply(std::string_view u, std::string_view v) {
  std::string s(u);
  s += v;
  return reduce(s);
}

std::string inverse(std::string_view w) { return reduce(std::string(w.rbegin(), w.rend())); }

std::string commutator(std::string_view u, std::string_view v) {
  return multiply(multiply(inverse(u), inverse(v)), multiply(u, v));
}

std::string act(std::string_view w, std::string_view s) {
  validate(w);
  std::string out(s);
  for (char x : out)
    if (x != '0' && x != '1') throw std::invalid_argument("tree vertices are binary strings");
  for (auto it = w.rbegin(); it != w.rend(); ++it) apply_generator(*it, out);
  return out;
}

bool in_stabilizer(std::string_view w) { return std::count(w.begin(), w.end(), 'a') % 2 == 0; }

std::pair<std::string, std::string> split(std::string_view w) {
  validate(w);
  if (!in_stabilizer(w)) throw std::invalid_argument("split needs an even number of a's");
  // w is a product of x (even a-parity so far) and a x a (odd); the
  // sections of a x a are those of x swapped.
  std::string left, right;
  bool odd = false;
  for (char x : w) {
    if (x == 'a') {
      odd = !odd;
      continue;
    }
    char s0 = section(x, 0), s1 = section(x, 1);
    if (odd) std::swap(s0, s1);
    if (s0 != '1') left.push_back(s0);
    if (s1 != '1') right.push_back(s1);
  }
  return {reduce(left), reduce(right)};
}

bool is_trivial(std::string_view w) {
  std::string r = reduce(w);
  if (r.empty()) return true;
  if (!in_stabilizer(r)) return false;
  auto [l, rt] = split(r);
  return is_trivial(l) && is_trivial(rt);
}

bool trivial_by_action(std::string_view w, int depth) {
  if (depth < 0 || depth > 24) throw std::invalid_argument("depth out of range");
  const std::string r = reduce(w);
  std::string s(static_cast<std::size_t>(depth), '0');
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << depth); ++code) {
    for (int j = 0; j < depth; ++j) s[static_cast<std::size_t>(j)] = (code >> (depth - 1 - j)) & 1 ? '1' : '0';
    if (act(r, s) != s) return false;
  }
  return true;
}

std::optional<std::string> moved_string(std::string_view w, int max_depth) {
  const std::string r = reduce(w);
  for (int depth = 1; depth <= max_depth; ++depth) {
    std::string s(static_cast<std::size_t>(depth), '0');
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << depth); ++code) {
      for (int j = 0; j < depth; ++j) s[static_cast<std::size_t>(j)] = (code >> (depth - 1 - j)) & 1 ? '1' : '0';
      if (act(r, s) != s) return s;
    }
  }
  return std::nullopt;
}

std::vector<std::string> reduced_words(int n) {
  if (n < 0) throw std::invalid_argument("negative length");
  std::vector<std::string> out{""};
  for (int len = 0; len < n; ++len) {
    std::vector<std::string> next;
    for (const auto& w : out)
      for (char x : {'a', 'b', 'c', 'd'})
        if (w.empty() || (w.back() == 'a') != (x == 'a')) next.push_back(w + x);
    out = std::move(next);
  }
  return out;
}

IdentityReport verify_identity(int max_len, unsigned threads) {
  if (max_len < 0) throw std::invalid_argument("max_len must be non-negative");
  std::vector<std::string> words;
  for (int n = 0; n <= max_len; ++n)
    for (auto& w : reduced_words(n)) words.push_back(std::move(w));

  auto law = [](const std::string& g) {
    return commutator(commutator(commutator(commutator(g, "b"), "d"), "d"), "ada");
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, words.size()));
  std::vector<std::vector<std::size_t>> bad(threads);
  auto work = [&](unsigned t) {
    for (std::size_t i = t; i < words.size(); i += threads)
      if (!is_trivial(law(words[i]))) bad[t].push_back(i);
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  std::vector<std::size_t> all;
  for (const auto& b : bad) all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());

  IdentityReport rep;
  rep.max_len = max_len;
  rep.checked = words.size();
  for (auto i : all) rep.violations.push_back(words[i].empty() ? "1" : words[i]);
  return rep;
}

void to_json(nlohmann::json& j, const IdentityReport& r) {
  j = nlohmann::json{{"identity", "[[[[x,b],d],d],ada]"},
                     {"max_len", r.max_len},
                     {"checked", r.checked},
                     {"violations", r.violations}};
}

}  // namespace miflab::grig
