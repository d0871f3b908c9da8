#include "miflab/presentation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "miflab/errors.hpp"

namespace miflab {

namespace {

struct LetterWordHash {
  std::size_t operator()(const LetterWord& w) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& l : w) {
      h ^= static_cast<std::uint64_t>(l.gen * 2 + (l.sign > 0 ? 1 : 0));
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

std::int64_t parse_int(std::string_view s, std::size_t offset) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError("expected integer, got '" + std::string(s) + "'", offset);
  return v;
}

}  // namespace

Window::Window(std::int64_t lo_, std::int64_t hi_) : lo(lo_), hi(hi_) {
  if (lo > hi) throw std::invalid_argument("window lo must not exceed hi");
}

Window Window::parse(std::string_view text) {
  auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    auto v = parse_int(text, 0);
    return {v, v};
  }
  auto lo = parse_int(text.substr(0, dots), 0);
  auto hi = parse_int(text.substr(dots + 2), dots + 2);
  if (lo > hi) throw ParseError("window lo exceeds hi", 0);
  return {lo, hi};
}

std::string Window::to_string() const { return std::to_string(lo) + ".." + std::to_string(hi); }

LetterWord inverse(const LetterWord& w) {
  LetterWord out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->inverse());
  return out;
}

LetterWord free_reduce(LetterWord w) {
  LetterWord out;
  out.reserve(w.size());
  for (const auto& l : w) {
    if (!out.empty() && out.back() == l.inverse())
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

LetterWord commutator(const LetterWord& u, const LetterWord& v) {
  LetterWord out = inverse(u);
  auto vi = inverse(v);
  out.insert(out.end(), vi.begin(), vi.end());
  out.insert(out.end(), u.begin(), u.end());
  out.insert(out.end(), v.begin(), v.end());
  return free_reduce(std::move(out));
}

LetterWord left_normed_commutator(const std::vector<int>& gens) {
  if (gens.empty()) return {};
  LetterWord acc{{gens[0], 1}};
  for (std::size_t k = 1; k < gens.size(); ++k) acc = commutator(acc, LetterWord{{gens[k], 1}});
  return acc;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::string Presentation::generator_name(int position) const {
  return "a" + std::to_string(window.lo + position);
}

std::string Presentation::to_text() const {
  std::ostringstream os;
  os << "gens " << generator_count() << '\n';
  for (const auto& r : relators) {
    bool first = true;
    for (const auto& l : r.letters) {
      if (!first) os << ' ';
      first = false;
      os << generator_name(l.gen);
      if (l.sign < 0) os << "^-1";
    }
    os << '\n';
  }
  return os.str();
}

Presentation Presentation::from_text(std::string_view text, int p) {
  std::istringstream is{std::string(text)};
  std::string line;
  if (!std::getline(is, line) || line.rfind("gens ", 0) != 0)
    throw ParseError("presentation text must start with 'gens n'", 0);
  auto n = parse_int(std::string_view(line).substr(5), 5);
  if (n < 1) throw ParseError("generator count must be positive", 5);

  std::vector<std::vector<std::pair<std::int64_t, int>>> raw;
  std::int64_t lo = INT64_MAX;
  std::size_t offset = line.size() + 1;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::pair<std::int64_t, int>> word;
    while (ls >> tok) {
      if (tok.empty() || tok[0] != 'a') throw ParseError("expected generator a<int>", offset);
      int sign = 1;
      std::string_view body(tok);
      body.remove_prefix(1);
      if (body.size() > 3 && body.substr(body.size() - 3) == "^-1") {
        sign = -1;
        body.remove_suffix(3);
      }
      auto idx = parse_int(body, offset);
      lo = std::min(lo, idx);
      word.emplace_back(idx, sign);
    }
    offset += line.size() + 1;
    if (!word.empty()) raw.push_back(std::move(word));
  }
  if (raw.empty()) throw ParseError("presentation has no relators", offset);

  Presentation pres;
  pres.p = p;
  pres.window = Window(lo, lo + n - 1);
  for (auto& word : raw) {
    Relator r;
    std::int64_t mn = INT64_MAX, mx = INT64_MIN;
    for (auto [idx, sign] : word) {
      if (!pres.window.contains(idx)) throw ParseError("generator outside window", 0);
      r.letters.push_back({static_cast<int>(idx - lo), sign});
      r.label.tuple.push_back(idx);
      mn = std::min(mn, idx);
      mx = std::max(mx, idx);
    }
    r.label.kind = mn == mx ? RelatorLabel::Kind::Power : RelatorLabel::Kind::Commutator;
    r.label.spread = static_cast<int>(mx - mn);
    r.label.weight = r.label.kind == RelatorLabel::Kind::Power ? static_cast<int>(word.size()) : 0;
    if (r.label.kind == RelatorLabel::Kind::Power) r.label.tuple.resize(1);
    pres.relators.push_back(std::move(r));
  }
  return pres;
}

void to_json(nlohmann::json& j, const Presentation& pres) {
  j = nlohmann::json::object();
  j["p"] = pres.p;
  j["window"] = {pres.window.lo, pres.window.hi};
  j["gens"] = pres.generator_count();
  auto rels = nlohmann::json::array();
  for (const auto& r : pres.relators) {
    nlohmann::json rj;
    auto letters = nlohmann::json::array();
    for (const auto& l : r.letters) letters.push_back({pres.window.lo + l.gen, l.sign});
    rj["letters"] = std::move(letters);
    rj["kind"] = r.label.kind == RelatorLabel::Kind::Power ? "power" : "commutator";
    rj["spread"] = r.label.spread;
    rj["weight"] = r.label.weight;
    rj["tuple"] = r.label.tuple;
    rels.push_back(std::move(rj));
  }
  j["relators"] = std::move(rels);
}

Presentation build_window_presentation(int p, const CSequence& c, Window w,
                                       const PresentationLimits& limits) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime, got " + std::to_string(p));
  if (w.width() > limits.max_width)
    throw CapacityExceeded("window width " + std::to_string(w.width()) +
                               " exceeds the configured bound " + std::to_string(limits.max_width),
                           static_cast<std::size_t>(limits.max_width));

  const int width = static_cast<int>(w.width());
  const int n = width + 1;

  // Upper bound on enumerated tuples, checked before doing any work.
  double tuple_budget = 0;
  for (int d = 1; d <= width; ++d) tuple_budget += std::pow(double(n), c(d) + 1);
  if (tuple_budget > 64.0 * static_cast<double>(limits.max_relators))
    throw CapacityExceeded("commutator tuple enumeration too large for window " + w.to_string(),
                           limits.max_relators);

  Presentation pres;
  pres.p = p;
  pres.window = w;
  std::unordered_set<LetterWord, LetterWordHash> seen;

  auto emit = [&](LetterWord letters, RelatorLabel label) {
    if (letters.empty() || !seen.insert(letters).second) return;
    if (pres.relators.size() >= limits.max_relators)
      throw CapacityExceeded("relator count exceeds the configured bound", limits.max_relators);
    pres.relators.push_back({std::move(letters), std::move(label)});
  };

  for (int g = 0; g < n; ++g) {
    LetterWord power(static_cast<std::size_t>(p), Letter{g, 1});
    emit(std::move(power), {RelatorLabel::Kind::Power, 0, p, {w.lo + g}});
  }

  for (int d = 1; d <= width; ++d) {
    const int weight = c(d) + 1;
    std::vector<int> tuple(static_cast<std::size_t>(weight), 0);
    // Odometer over positions^weight in lexicographic order.
    while (true) {
      if (tuple[0] != tuple[1]) {
        auto [mn, mx] = std::minmax_element(tuple.begin(), tuple.end());
        if (*mx - *mn == d) {
          RelatorLabel label{RelatorLabel::Kind::Commutator, d, weight, {}};
          label.tuple.reserve(tuple.size());
          for (int pos : tuple) label.tuple.push_back(w.lo + pos);
          emit(left_normed_commutator(tuple), std::move(label));
        }
      }
      int k = weight - 1;
      while (k >= 0 && tuple[static_cast<std::size_t>(k)] == n - 1) tuple[static_cast<std::size_t>(k--)] = 0;
      if (k < 0) break;
      ++tuple[static_cast<std::size_t>(k)];
    }
  }
  return pres;
}

std::size_t relator_count(int p, const CSequence& c, Window w, const PresentationLimits& limits) {
  return build_window_presentation(p, c, w, limits).relators.size();
}

Presentation shift_presentation(const Presentation& pres, std::int64_t k) {
  Presentation out = pres;
  out.window = pres.window.shifted(k);
  for (auto& r : out.relators)
    for (auto& idx : r.label.tuple) idx += k;
  return out;
}

}  // namespace miflab
