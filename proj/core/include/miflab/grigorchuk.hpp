#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

// The first Grigorchuk group acting on binary strings. Words are strings over
// "abcd"; a word acts right to left, so "ab" means a(b(s)).
namespace miflab::grig {

/// Throws std::invalid_argument on letters outside "abcd".
void validate(std::string_view w);

/// Alternating form under a^2 = b^2 = c^2 = d^2 = 1, bc = cb = d,
/// bd = db = c, cd = dc = b.
std::string reduce(std::string_view w);
bool is_reduced(std::string_view w);

std::string multiply(std::string_view u, std::string_view v);
std::string inverse(std::string_view w);
std::string commutator(std::string_view u, std::string_view v);

/// Image of a binary string; length preserving.
std::string act(std::string_view w, std::string_view s);

/// Parity of the number of a's, i.e. the action on the first level.
bool in_stabilizer(std::string_view w);

/// First-level sections (w_0, w_1), both reduced. Requires an even number
/// of a's.
std::pair<std::string, std::string> split(std::string_view w);

/// Exact word problem by recursive splitting.
bool is_trivial(std::string_view w);

/// Trivial on every string of the given length (and hence all shorter ones).
bool trivial_by_action(std::string_view w, int depth);

/// Shortest, then lexicographically first, string moved by w, up to depth.
std::optional<std::string> moved_string(std::string_view w, int max_depth);

/// Reduced words of length exactly n, ordered lexicographically.
std::vector<std::string> reduced_words(int n);

struct IdentityReport {
  int max_len = 0;
  std::uint64_t checked = 0;
  std::vector<std::string> violations;
};

/// [[[[g,b],d],d],ada] = 1 for every reduced g with |g| <= max_len.
/// `threads` = 0 uses available parallelism; the report does not depend on it.
IdentityReport verify_identity(int max_len, unsigned threads = 1);

void to_json(nlohmann::json& j, const IdentityReport& r);

}  // namespace miflab::grig
