#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "miflab/csequence.hpp"

namespace miflab {

/// Inclusive integer interval of generator indices.
struct Window {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  Window() = default;
  Window(std::int64_t lo_, std::int64_t hi_);

  std::int64_t width() const noexcept { return hi - lo; }
  std::int64_t size() const noexcept { return hi - lo + 1; }
  bool contains(std::int64_t i) const noexcept { return lo <= i && i <= hi; }
  Window shifted(std::int64_t k) const { return {lo + k, hi + k}; }

  /// "lo..hi"
  static Window parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const Window&, const Window&) = default;
};

/// One letter of a presentation word: generator position and sign (+1 / -1).
struct Letter {
  int gen = 0;
  int sign = 1;

  Letter inverse() const noexcept { return {gen, -sign}; }
  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

using LetterWord = std::vector<Letter>;

LetterWord inverse(const LetterWord& w);
/// Cancels adjacent x x^-1 pairs.
LetterWord free_reduce(LetterWord w);
/// u^-1 v^-1 u v, freely reduced.
LetterWord commutator(const LetterWord& u, const LetterWord& v);
/// [g_0, g_1, ..., g_k] = [[g_0, ..., g_{k-1}], g_k], freely reduced.
LetterWord left_normed_commutator(const std::vector<int>& gens);

struct RelatorLabel {
  enum class Kind { Power, Commutator };
  Kind kind = Kind::Power;
  /// Index spread of the commutator tuple (0 for powers).
  int spread = 0;
  /// Commutator weight, or the exponent p for power relators.
  int weight = 0;
  /// Generator indices (absolute, not positions) making up the relator.
  std::vector<std::int64_t> tuple;
};

struct Relator {
  LetterWord letters;
  RelatorLabel label;
};

/// Finite presentation of the window subgroup <a_lo, ..., a_hi>.
/// Generator position k stands for a_{window.lo + k}.
struct Presentation {
  int p = 2;
  Window window;
  std::vector<Relator> relators;

  int generator_count() const noexcept { return static_cast<int>(window.size()); }
  std::string generator_name(int position) const;

  /// `gens n` followed by one expanded relator per line.
  std::string to_text() const;
  static Presentation from_text(std::string_view text, int p);
};

void to_json(nlohmann::json& j, const Presentation& pres);

struct PresentationLimits {
  std::int64_t max_width = 8;
  std::size_t max_relators = 400'000;
};

bool is_prime(std::int64_t n);

/// Power relators a_i^p, then left-normed commutators of weight c_d + 1 over
/// every tuple of spread exactly d (1 <= d <= width), ordered by (d, tuple).
/// Tuples with i_0 == i_1 are skipped; exact duplicates are emitted once.
Presentation build_window_presentation(int p, const CSequence& c, Window w,
                                       const PresentationLimits& limits = {});

std::size_t relator_count(int p, const CSequence& c, Window w,
                          const PresentationLimits& limits = {});

/// Index shift of every relator by k (the automorphism a_i -> a_{i+k}).
Presentation shift_presentation(const Presentation& pres, std::int64_t k);

}  // namespace miflab
