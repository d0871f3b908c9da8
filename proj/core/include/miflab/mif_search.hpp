#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "miflab/limit_group.hpp"
#include "miflab/mixed_word.hpp"

namespace miflab {

struct SearchBounds {
  std::int64_t max_support_radius = 3;
  std::int64_t max_beta = 3;
  /// Longest A-part normal form (in letters) a candidate may have.
  std::int64_t max_word_length = 16;
  std::uint64_t max_candidates = 100000;

  void validate() const;
  friend bool operator==(const SearchBounds&, const SearchBounds&) = default;
};

enum class CertificateStatus { TrivialInFreeProduct, WitnessFound, SearchExhausted };

std::string to_string(CertificateStatus s);
CertificateStatus status_from_string(const std::string& s);

struct SearchOutcome {
  std::optional<GElement> witness;
  std::optional<GElement> value;  // w(witness), canonical when reachable
  std::uint64_t candidates_tried = 0;
  /// Candidates whose evaluation needed a window beyond the coset cap.
  std::uint64_t capacity_skips = 0;
  /// Radii whose candidate window could not be enumerated.
  std::vector<std::int64_t> skipped_radii;
};

/// Candidates g = a t^beta ordered by (support radius of a, |beta|, beta > 0
/// first, shortlex a). Returns the first g with w(g) != 1. The result does
/// not depend on `threads` (0 = available parallelism).
SearchOutcome find_witness(const LimitGroup& group, const MixedWord& w, const SearchBounds& bounds = {},
                           unsigned threads = 1);

struct EnumeratedWord {
  /// Letter string over x, a0, t and inverses, as spelled by the enumeration.
  std::string source;
  MixedWord word;
};

/// Shortlex enumeration of freely reduced letter strings over
/// x < x^-1 < a0 < a0^-1 < t < t^-1, keeping the first string for each
/// reduced element of G * <x>. The empty element appears once, as the first
/// string that collapses to it.
std::vector<EnumeratedWord> enumerate_words(const MixedCalculus& calc, std::size_t count);

struct Certificate {
  std::uint64_t index = 0;
  std::string source;
  std::string word;
  CertificateStatus status = CertificateStatus::SearchExhausted;
  std::optional<std::string> witness;
  std::optional<std::string> evaluation;
  SearchBounds bounds;
  int p = 2;
  std::string c;
  std::uint64_t candidates_tried = 0;
  std::uint64_t capacity_skips = 0;
  std::vector<std::int64_t> skipped_radii;

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

void to_json(nlohmann::json& j, const SearchBounds& b);
void from_json(const nlohmann::json& j, SearchBounds& b);
void to_json(nlohmann::json& j, const Certificate& c);
void from_json(const nlohmann::json& j, Certificate& c);

struct DriveResult {
  std::vector<Certificate> certificates;
  /// The witness set F = {w_i(g_i)}.
  std::vector<GElement> witness_set;
  std::uint64_t persistence_violations = 0;
  bool complete = true;
  std::string error;
};

/// Runs the first `count` enumerated words through find_witness, keeping F
/// and re-checking every member of F after each step. A CapacityExceeded
/// outside candidate evaluation stops the run with complete = false.
DriveResult drive(const LimitGroup& group, std::size_t count, const SearchBounds& bounds = {}, unsigned threads = 1);

struct VerifyReport {
  std::uint64_t checked = 0;
  std::uint64_t witnesses = 0;
  std::uint64_t inconclusive = 0;
  std::vector<std::string> failures;
  bool ok() const noexcept { return failures.empty(); }
};

/// Re-parses and re-evaluates every certificate in `group`.
VerifyReport verify_certificates(const LimitGroup& group, const std::vector<Certificate>& certs);

void write_certificates(std::ostream& out, const std::vector<Certificate>& certs);
/// Throws ParseError on malformed lines.
std::vector<Certificate> read_certificates(std::istream& in);

}  // namespace miflab
