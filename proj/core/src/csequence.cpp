#include "miflab/csequence.hpp"

#include <charconv>
#include <stdexcept>

#include "miflab/errors.hpp"

namespace miflab {

CSequence CSequence::identity() { return CSequence({1, 2}, Tail::Arithmetic); }

CSequence CSequence::constant(int value) { return CSequence({value}, Tail::Repeat); }

CSequence::CSequence(std::vector<int> prefix, Tail tail)
    : prefix_(std::move(prefix)), tail_(tail) {
  if (prefix_.empty()) throw std::invalid_argument("class sequence needs at least one entry");
  for (std::size_t i = 0; i < prefix_.size(); ++i) {
    if (prefix_[i] < 1) throw std::invalid_argument("class sequence entries must be positive");
    if (i > 0 && prefix_[i] < prefix_[i - 1])
      throw std::invalid_argument("class sequence must be non-decreasing");
  }
  if (tail_ == Tail::Arithmetic) {
    step_ = prefix_.size() >= 2 ? prefix_.back() - prefix_[prefix_.size() - 2] : 0;
    if (step_ == 0) tail_ = Tail::Repeat;
  }
}

CSequence CSequence::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text == "identity" || text == "n") return identity();

  std::vector<int> values;
  Tail tail = Tail::Repeat;
  std::size_t offset = 0;
  while (offset <= text.size()) {
    std::size_t comma = text.find(',', offset);
    if (comma == std::string_view::npos) comma = text.size();
    auto field = trim(text.substr(offset, comma - offset));
    if (field == "...") {
      if (comma != text.size()) throw ParseError("'...' must end a class sequence", offset);
      tail = Tail::Arithmetic;
    } else {
      int v = 0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
        throw ParseError("bad class sequence entry '" + std::string(field) + "'", offset);
      values.push_back(v);
    }
    offset = comma + 1;
  }
  try {
    return CSequence(std::move(values), tail);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
}

int CSequence::operator()(int n) const {
  if (n < 1) throw std::out_of_range("class sequence is indexed from 1");
  auto idx = static_cast<std::size_t>(n - 1);
  if (idx < prefix_.size()) return prefix_[idx];
  if (tail_ == Tail::Repeat) return prefix_.back();
  auto extra = static_cast<long long>(idx - (prefix_.size() - 1));
  long long v = prefix_.back() + extra * step_;
  if (v > 1'000'000'000LL) throw std::overflow_error("class sequence value overflow");
  return static_cast<int>(v);
}

std::vector<int> CSequence::prefix(int count) const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(count > 0 ? count : 0));
  for (int n = 1; n <= count; ++n) out.push_back((*this)(n));
  return out;
}

std::string CSequence::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < prefix_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(prefix_[i]);
  }
  if (tail_ == Tail::Arithmetic) s += ",...";
  return s;
}

}  // namespace miflab
