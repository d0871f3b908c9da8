#include "miflab/word_syntax.hpp"

#include <cctype>
#include <charconv>
#include <limits>

#include "miflab/errors.hpp"

namespace miflab::syntax {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& opts) : s_(text), opts_(opts) {}

  Expr parse_all() {
    Expr e = parse_word();
    skip_space();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_space() {
    while (pos_ < s_.size() && (std::isspace(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '*')) ++pos_;
  }

  bool at_factor_start() {
    skip_space();
    if (pos_ >= s_.size()) return false;
    char ch = s_[pos_];
    return std::isalpha(static_cast<unsigned char>(ch)) || ch == '[' || ch == '(' || ch == '1';
  }

  Expr parse_word() {
    Expr prod;
    prod.kind = Expr::Kind::Product;
    prod.position = pos_;
    while (at_factor_start()) prod.children.push_back(parse_factor());
    if (prod.children.empty()) {
      Expr id;
      id.position = prod.position;
      return id;
    }
    if (prod.children.size() == 1) return std::move(prod.children.front());
    return prod;
  }

  std::int64_t parse_integer(bool allow_sign) {
    std::size_t start = pos_;
    if (allow_sign && pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (digits == pos_) fail("expected digits");
    std::string_view tok = s_.substr(start, pos_ - start);
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) fail("integer out of range");
    return v;
  }

  Expr parse_factor() {
    Expr base = parse_primary();
    while (true) {
      std::size_t save = pos_;
      while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '^') {
        ++pos_;
        while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
        Expr pw;
        pw.kind = Expr::Kind::Power;
        pw.position = save;
        pw.exponent = parse_integer(true);
        pw.children.push_back(std::move(base));
        base = std::move(pw);
      } else {
        pos_ = save;
        return base;
      }
    }
  }

  bool looks_like_cycle() const {
    std::size_t k = pos_ + 1;
    bool digit = false;
    while (k < s_.size() && s_[k] != ')') {
      char ch = s_[k];
      if (std::isdigit(static_cast<unsigned char>(ch)))
        digit = true;
      else if (ch != ',' && ch != ' ')
        return false;
      ++k;
    }
    return digit && k < s_.size();
  }

  Expr parse_cycle() {
    Expr cyc;
    cyc.kind = Expr::Kind::Cycle;
    cyc.position = pos_;
    ++pos_;  // '('
    bool commas = false;
    for (std::size_t k = pos_; k < s_.size() && s_[k] != ')'; ++k) commas = commas || s_[k] == ',';
    while (true) {
      while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == ',')) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == ')') break;
      if (commas) {
        auto v = parse_integer(false);
        if (v < 1 || v > 1000) fail("cycle point out of range");
        cyc.points.push_back(static_cast<int>(v));
      } else {
        // (123) means the points 1, 2, 3.
        cyc.points.push_back(s_[pos_] - '0');
        if (cyc.points.back() < 1) fail("cycle points start at 1");
        ++pos_;
      }
    }
    ++pos_;  // ')'
    return cyc;
  }

  Expr parse_primary() {
    skip_space();
    const std::size_t start = pos_;
    char ch = s_[pos_];
    if (ch == '[') {
      ++pos_;
      Expr comm;
      comm.kind = Expr::Kind::Commutator;
      comm.position = start;
      comm.children.push_back(parse_word());
      skip_space();
      while (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
        comm.children.push_back(parse_word());
        skip_space();
      }
      if (pos_ >= s_.size() || s_[pos_] != ']') fail("expected ']'");
      ++pos_;
      if (comm.children.size() < 2) fail("a commutator needs at least two entries");
      return comm;
    }
    if (ch == '(') {
      if (opts_.cycles && looks_like_cycle()) return parse_cycle();
      ++pos_;
      Expr inner = parse_word();
      skip_space();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (ch == '1') {
      ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("unexpected number");
      Expr id;
      id.position = start;
      return id;
    }
    if (!std::isalpha(static_cast<unsigned char>(ch))) fail("expected a generator");

    Expr atom;
    atom.kind = Expr::Kind::Atom;
    atom.position = start;
    if (opts_.single_letter_atoms) {
      atom.name = std::string(1, ch);
      ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        fail("indexed generators are not allowed here");
      return atom;
    }
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) atom.name += s_[pos_++];
    std::size_t save = pos_;
    if (pos_ < s_.size() && s_[pos_] == '_') ++pos_;
    bool neg = pos_ < s_.size() && s_[pos_] == '-';
    std::size_t digit_at = pos_ + (neg ? 1 : 0);
    if (digit_at < s_.size() && std::isdigit(static_cast<unsigned char>(s_[digit_at]))) {
      atom.index = parse_integer(true);
    } else {
      pos_ = save;
    }
    return atom;
  }

  std::string_view s_;
  ParseOptions opts_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const ParseOptions& options) { return Parser(text, options).parse_all(); }

void collect_atoms(const Expr& e, std::vector<const Expr*>& out) {
  if (e.kind == Expr::Kind::Atom) out.push_back(&e);
  for (const auto& c : e.children) collect_atoms(c, out);
}

}  // namespace miflab::syntax
