#include "miflab/mif_search.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "miflab/errors.hpp"

namespace miflab {

namespace {

GElement canonical_if_possible(const LimitGroup& group, const GElement& g) {
  try {
    return group.canonical(g);
  } catch (const CapacityExceeded&) {
    return g;
  }
}

std::int64_t support_radius(const AWord& a) {
  if (a.empty()) return 0;
  auto s = a.support();
  return std::max(-s.lo, s.hi);
}

enum class Verdict : unsigned char { Trivial, Witness, Skipped };

}  // namespace

void SearchBounds::validate() const {
  if (max_support_radius < 0 || max_beta < 0 || max_word_length < 0)
    throw std::invalid_argument("search bounds must be non-negative");
  if (max_candidates == 0) throw std::invalid_argument("max_candidates must be positive");
}

std::string to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::TrivialInFreeProduct: return "TrivialInFreeProduct";
    case CertificateStatus::WitnessFound: return "WitnessFound";
    case CertificateStatus::SearchExhausted: return "SearchExhausted";
  }
  return "SearchExhausted";
}

CertificateStatus status_from_string(const std::string& s) {
  if (s == "TrivialInFreeProduct") return CertificateStatus::TrivialInFreeProduct;
  if (s == "WitnessFound") return CertificateStatus::WitnessFound;
  if (s == "SearchExhausted") return CertificateStatus::SearchExhausted;
  throw ParseError("unknown certificate status '" + s + "'", 0);
}

SearchOutcome find_witness(const LimitGroup& group, const MixedWord& w, const SearchBounds& bounds, unsigned threads) {
  bounds.validate();
  if (w.empty()) throw std::invalid_argument("find_witness needs a nonempty word");
  auto vars = w.variables();
  if (vars.size() > 1 || (vars.size() == 1 && vars.front() != 1))
    throw std::invalid_argument("find_witness expects a word in the single variable x");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  const MixedCalculus calc(group);
  SearchOutcome out;

  auto evaluate = [&](const GElement& g) {
    try {
      return group.is_trivial(calc.evaluate(w, g)) ? Verdict::Trivial : Verdict::Witness;
    } catch (const CapacityExceeded&) {
      return Verdict::Skipped;
    }
  };

  // Returns true when the search is over (witness found or budget spent).
  auto run_block = [&](const std::vector<GElement>& cands) {
    const std::size_t batch = threads <= 1 ? 1 : 8 * static_cast<std::size_t>(threads);
    std::vector<Verdict> verdicts;
    for (std::size_t start = 0; start < cands.size(); start += batch) {
      const std::size_t stop = std::min(cands.size(), start + batch);
      verdicts.assign(stop - start, Verdict::Trivial);
      if (stop - start == 1) {
        verdicts[0] = evaluate(cands[start]);
      } else {
        std::vector<std::thread> pool;
        const auto nt = std::min<std::size_t>(threads, stop - start);
        for (std::size_t t = 0; t < nt; ++t)
          pool.emplace_back([&, t] {
            for (std::size_t i = start + t; i < stop; i += nt) verdicts[i - start] = evaluate(cands[i]);
          });
        for (auto& th : pool) th.join();
      }
      for (std::size_t i = start; i < stop; ++i) {
        ++out.candidates_tried;
        const Verdict v = verdicts[i - start];
        if (v == Verdict::Skipped) ++out.capacity_skips;
        if (v == Verdict::Witness) {
          out.witness = cands[i];
          out.value = canonical_if_possible(group, calc.evaluate(w, cands[i]));
          return true;
        }
        if (out.candidates_tried >= bounds.max_candidates) return true;
      }
    }
    return false;
  };

  for (std::int64_t r = 0; r <= bounds.max_support_radius; ++r) {
    std::vector<AWord> ring;
    try {
      for (auto& a : group.window_elements(Window(-r, r)))
        if (support_radius(a) == r && static_cast<std::int64_t>(a.size()) <= bounds.max_word_length)
          ring.push_back(std::move(a));
    } catch (const CapacityExceeded&) {
      out.skipped_radii.push_back(r);
      continue;
    }
    for (std::int64_t b = 0; b <= bounds.max_beta; ++b) {
      for (std::int64_t beta : {b, -b}) {
        std::vector<GElement> cands;
        cands.reserve(ring.size());
        for (const auto& a : ring) cands.push_back({a, beta});
        if (run_block(cands)) return out;
        if (b == 0) break;
      }
    }
  }
  return out;
}

std::vector<EnumeratedWord> enumerate_words(const MixedCalculus& calc, std::size_t count) {
  const LimitGroup& g = calc.group();
  struct Letter {
    std::string name;
    MixedWord word;
    int inverse;
  };
  const std::vector<Letter> alphabet = {
      {"x", calc.variable(1, 1), 1},          {"x^-1", calc.variable(1, -1), 0},
      {"a0", calc.constant(g.a(0)), 3},       {"a0^-1", calc.constant(g.a(0, g.p() - 1)), 2},
      {"t", calc.constant(g.t(1)), 5},        {"t^-1", calc.constant(g.t(-1)), 4},
  };

  std::vector<EnumeratedWord> out;
  std::set<MixedWord> seen;
  struct Partial {
    std::vector<int> letters;
    MixedWord word;
  };
  std::vector<Partial> level{{{}, {}}};
  while (out.size() < count) {
    std::vector<Partial> next;
    for (const auto& p : level) {
      for (int l = 0; l < static_cast<int>(alphabet.size()); ++l) {
        if (!p.letters.empty() && alphabet[static_cast<std::size_t>(p.letters.back())].inverse == l) continue;
        Partial q{p.letters, calc.multiply(p.word, alphabet[static_cast<std::size_t>(l)].word)};
        q.letters.push_back(l);
        if (out.size() < count && seen.insert(q.word).second) {
          std::string src;
          for (int k : q.letters) src += (src.empty() ? "" : " ") + alphabet[static_cast<std::size_t>(k)].name;
          out.push_back({src, q.word});
        }
        next.push_back(std::move(q));
      }
    }
    level = std::move(next);
  }
  return out;
}

DriveResult drive(const LimitGroup& group, std::size_t count, const SearchBounds& bounds, unsigned threads) {
  bounds.validate();
  const MixedCalculus calc(group);
  DriveResult res;
  std::vector<EnumeratedWord> words;
  try {
    words = enumerate_words(calc, count);
  } catch (const CapacityExceeded& e) {
    res.complete = false;
    res.error = e.what();
    return res;
  }

  for (std::size_t i = 0; i < words.size(); ++i) {
    Certificate cert;
    cert.index = i + 1;
    cert.source = words[i].source;
    cert.word = calc.to_string(words[i].word);
    cert.bounds = bounds;
    cert.p = group.p();
    cert.c = group.instance().c.to_string();
    try {
      if (words[i].word.empty()) {
        cert.status = CertificateStatus::TrivialInFreeProduct;
      } else {
        auto found = find_witness(group, words[i].word, bounds, threads);
        cert.candidates_tried = found.candidates_tried;
        cert.capacity_skips = found.capacity_skips;
        cert.skipped_radii = found.skipped_radii;
        if (found.witness) {
          cert.status = CertificateStatus::WitnessFound;
          cert.witness = group.to_string(*found.witness);
          cert.evaluation = group.to_string(*found.value);
          res.witness_set.push_back(*found.value);
        } else {
          cert.status = CertificateStatus::SearchExhausted;
        }
      }
      for (const auto& f : res.witness_set)
        if (group.is_trivial(f)) ++res.persistence_violations;
    } catch (const CapacityExceeded& e) {
      res.complete = false;
      res.error = "word " + std::to_string(cert.index) + ": " + e.what();
      break;
    }
    res.certificates.push_back(std::move(cert));
  }
  return res;
}

VerifyReport verify_certificates(const LimitGroup& group, const std::vector<Certificate>& certs) {
  const MixedCalculus calc(group);
  VerifyReport rep;
  for (const auto& c : certs) {
    ++rep.checked;
    const std::string tag = "certificate " + std::to_string(c.index) + ": ";
    try {
      if (c.p != group.p() || c.c != group.instance().c.to_string()) {
        rep.failures.push_back(tag + "instance mismatch");
        continue;
      }
      const MixedWord w = calc.parse(c.word);
      if (calc.to_string(w) != c.word) {
        rep.failures.push_back(tag + "word is not in reduced form");
        continue;
      }
      if (!c.source.empty() && calc.parse(c.source) != w) {
        rep.failures.push_back(tag + "source does not reduce to the word");
        continue;
      }
      switch (c.status) {
        case CertificateStatus::TrivialInFreeProduct:
          if (!w.empty()) rep.failures.push_back(tag + "word is nontrivial in the free product");
          break;
        case CertificateStatus::WitnessFound: {
          if (!c.witness) {
            rep.failures.push_back(tag + "missing witness");
            break;
          }
          const GElement value = calc.evaluate(w, parse_element(group, *c.witness));
          if (group.is_trivial(value)) {
            rep.failures.push_back(tag + "witness evaluates to the identity");
            break;
          }
          if (c.evaluation && !group.equal(value, parse_element(group, *c.evaluation))) {
            rep.failures.push_back(tag + "recorded evaluation differs");
            break;
          }
          ++rep.witnesses;
          break;
        }
        case CertificateStatus::SearchExhausted:
          ++rep.inconclusive;
          break;
      }
    } catch (const std::exception& e) {
      rep.failures.push_back(tag + e.what());
    }
  }
  return rep;
}

void to_json(nlohmann::json& j, const SearchBounds& b) {
  j = nlohmann::json{{"max_support_radius", b.max_support_radius},
                     {"max_beta", b.max_beta},
                     {"max_word_length", b.max_word_length},
                     {"max_candidates", b.max_candidates}};
}

void from_json(const nlohmann::json& j, SearchBounds& b) {
  j.at("max_support_radius").get_to(b.max_support_radius);
  j.at("max_beta").get_to(b.max_beta);
  j.at("max_word_length").get_to(b.max_word_length);
  j.at("max_candidates").get_to(b.max_candidates);
}

void to_json(nlohmann::json& j, const Certificate& c) {
  j = nlohmann::json{{"index", c.index},
                     {"source", c.source},
                     {"word", c.word},
                     {"status", to_string(c.status)},
                     {"witness", c.witness ? nlohmann::json(*c.witness) : nlohmann::json()},
                     {"evaluation", c.evaluation ? nlohmann::json(*c.evaluation) : nlohmann::json()},
                     {"bounds", c.bounds},
                     {"instance", {{"p", c.p}, {"c", c.c}}},
                     {"candidates_tried", c.candidates_tried},
                     {"capacity_skips", c.capacity_skips},
                     {"skipped_radii", c.skipped_radii}};
}

void from_json(const nlohmann::json& j, Certificate& c) {
  j.at("index").get_to(c.index);
  c.source = j.value("source", std::string{});
  j.at("word").get_to(c.word);
  c.status = status_from_string(j.at("status").get<std::string>());
  c.witness.reset();
  c.evaluation.reset();
  if (j.contains("witness") && !j["witness"].is_null()) c.witness = j["witness"].get<std::string>();
  if (j.contains("evaluation") && !j["evaluation"].is_null()) c.evaluation = j["evaluation"].get<std::string>();
  j.at("bounds").get_to(c.bounds);
  j.at("instance").at("p").get_to(c.p);
  j.at("instance").at("c").get_to(c.c);
  c.candidates_tried = j.value("candidates_tried", std::uint64_t{0});
  c.capacity_skips = j.value("capacity_skips", std::uint64_t{0});
  c.skipped_radii = j.value("skipped_radii", std::vector<std::int64_t>{});
}

void write_certificates(std::ostream& out, const std::vector<Certificate>& certs) {
  for (const auto& c : certs) out << nlohmann::json(c).dump() << '\n';
}

std::vector<Certificate> read_certificates(std::istream& in) {
  std::vector<Certificate> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(nlohmann::json::parse(line).get<Certificate>());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad certificate line: ") + e.what(), lineno);
    }
  }
  return out;
}

}  // namespace miflab
