#include "miflab/finite_group.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "miflab/errors.hpp"

namespace miflab {

namespace {

void check_order(std::size_t n, const std::string& what) {
  if (n > FiniteGroup::max_order)
    throw CapacityExceeded(what + " has order " + std::to_string(n) + ", above the table cap", FiniteGroup::max_order);
}

Permutation compose(const Permutation& g, const Permutation& h) {
  Permutation out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = h[g[i]];
  return out;
}

Permutation cycle_perm(int degree, const std::vector<int>& points) {
  Permutation p(static_cast<std::size_t>(degree));
  std::iota(p.begin(), p.end(), std::uint16_t{0});
  for (std::size_t i = 0; i < points.size(); ++i)
    p[static_cast<std::size_t>(points[i])] = static_cast<std::uint16_t>(points[(i + 1) % points.size()]);
  return p;
}

}  // namespace

FiniteGroup::FiniteGroup(std::string name, std::vector<Elem> table, std::vector<std::string> labels)
    : name_(std::move(name)), table_(std::move(table)), labels_(std::move(labels)) {
  auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(table_.size()))));
  if (n == 0 || n * n != table_.size()) throw std::invalid_argument("multiplication table is not square");
  check_order(n, name_);
  n_ = n;
  if (labels_.empty())
    for (std::size_t i = 0; i < n_; ++i) labels_.push_back(i == 0 ? "1" : "e" + std::to_string(i));
  if (labels_.size() != n_) throw std::invalid_argument("one label per element required");
  validate();
}

void FiniteGroup::validate() {
  for (Elem v : table_)
    if (v >= n_) throw std::invalid_argument(name_ + ": table entry out of range");
  for (std::size_t x = 0; x < n_; ++x)
    if (mul(0, static_cast<Elem>(x)) != x || mul(static_cast<Elem>(x), 0) != x)
      throw std::invalid_argument(name_ + ": element 0 is not the identity");

  // Latin square: every row and column is a permutation.
  std::vector<std::uint32_t> seen(n_, 0);
  std::uint32_t stamp = 0;
  for (std::size_t x = 0; x < n_; ++x) {
    ++stamp;
    for (std::size_t y = 0; y < n_; ++y) {
      auto& s = seen[mul(static_cast<Elem>(x), static_cast<Elem>(y))];
      if (s == stamp) throw std::invalid_argument(name_ + ": row " + std::to_string(x) + " repeats");
      s = stamp;
    }
    ++stamp;
    for (std::size_t y = 0; y < n_; ++y) {
      auto& s = seen[mul(static_cast<Elem>(y), static_cast<Elem>(x))];
      if (s == stamp) throw std::invalid_argument(name_ + ": column " + std::to_string(x) + " repeats");
      s = stamp;
    }
  }

  auto assoc = [&](Elem x, Elem y, Elem z) {
    if (mul(mul(x, y), z) != mul(x, mul(y, z))) throw std::invalid_argument(name_ + ": multiplication is not associative");
  };
  if (n_ <= 512) {
    for (std::size_t x = 0; x < n_; ++x)
      for (std::size_t y = 0; y < n_; ++y)
        for (std::size_t z = 0; z < n_; ++z) assoc(static_cast<Elem>(x), static_cast<Elem>(y), static_cast<Elem>(z));
  } else {
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_int_distribution<std::size_t> pick(0, n_ - 1);
    for (int i = 0; i < 200000; ++i)
      assoc(static_cast<Elem>(pick(rng)), static_cast<Elem>(pick(rng)), static_cast<Elem>(pick(rng)));
  }

  inv_.assign(n_, 0);
  for (std::size_t x = 0; x < n_; ++x)
    for (std::size_t y = 0; y < n_; ++y)
      if (mul(static_cast<Elem>(x), static_cast<Elem>(y)) == 0) {
        inv_[x] = static_cast<Elem>(y);
        break;
      }
}

FiniteGroup FiniteGroup::from_permutations(std::string name, const std::vector<Permutation>& generators, int degree) {
  if (degree < 1 || degree > 1000) throw std::invalid_argument("permutation degree out of range");
  for (const auto& g : generators)
    if (g.size() != static_cast<std::size_t>(degree)) throw std::invalid_argument("generator has the wrong degree");

  Permutation id(static_cast<std::size_t>(degree));
  std::iota(id.begin(), id.end(), std::uint16_t{0});
  std::vector<Permutation> elems{id};
  std::map<Permutation, Elem> index{{id, 0}};
  std::vector<std::vector<Elem>> right;  // right[e][g] = e * gen_g
  std::vector<std::pair<Elem, std::size_t>> parent{{0, 0}};
  for (std::size_t k = 0; k < elems.size(); ++k) {
    right.emplace_back();
    for (std::size_t g = 0; g < generators.size(); ++g) {
      Permutation next = compose(elems[k], generators[g]);
      auto [it, fresh] = index.try_emplace(next, static_cast<Elem>(elems.size()));
      if (fresh) {
        check_order(elems.size() + 1, name);
        elems.push_back(std::move(next));
        parent.emplace_back(static_cast<Elem>(k), g);
      }
      right[k].push_back(it->second);
    }
  }

  const std::size_t n = elems.size();
  std::vector<Elem> table(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    table[x * n] = static_cast<Elem>(x);
    // x * y = (x * parent(y)) * gen, filled in BFS order of y.
    for (std::size_t y = 1; y < n; ++y) {
      auto [py, g] = parent[y];
      table[x * n + y] = right[table[x * n + py]][g];
    }
  }
  std::vector<std::string> labels;
  for (const auto& e : elems) labels.push_back(cycle_string(e));
  FiniteGroup out(std::move(name), std::move(table), std::move(labels));
  out.degree_ = degree;
  out.perms_ = std::move(elems);
  return out;
}

Elem FiniteGroup::power(Elem x, std::int64_t k) const {
  std::uint64_t mag = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
  if (k < 0) x = inv(x);
  std::uint64_t m = mag % element_order(x);
  Elem acc = identity();
  while (m) {
    if (m & 1) acc = mul(acc, x);
    m >>= 1;
    x = mul(x, x);
  }
  return acc;
}

std::uint64_t FiniteGroup::element_order(Elem x) const {
  std::uint64_t k = 1;
  for (Elem y = x; y != identity(); y = mul(y, x)) ++k;
  return k;
}

std::optional<Elem> FiniteGroup::find(std::string_view label) const {
  for (std::size_t i = 0; i < n_; ++i)
    if (labels_[i] == label) return static_cast<Elem>(i);
  return std::nullopt;
}

std::optional<Elem> FiniteGroup::from_permutation(const Permutation& perm) const {
  for (std::size_t i = 0; i < perms_.size(); ++i)
    if (perms_[i] == perm) return static_cast<Elem>(i);
  return std::nullopt;
}

std::vector<Elem> FiniteGroup::generated(const std::vector<Elem>& gens) const {
  std::vector<bool> in(n_, false);
  std::vector<Elem> out{identity()};
  in[identity()] = true;
  for (std::size_t k = 0; k < out.size(); ++k)
    for (Elem g : gens) {
      Elem y = mul(out[k], g);
      if (!in[y]) {
        in[y] = true;
        out.push_back(y);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

bool FiniteGroup::is_subgroup(const std::vector<Elem>& subset) const {
  if (subset.empty()) return false;
  std::vector<bool> in(n_, false);
  for (Elem x : subset) {
    if (x >= n_) return false;
    in[x] = true;
  }
  for (Elem x : subset)
    for (Elem y : subset)
      if (!in[mul(x, inv(y))]) return false;
  return true;
}

bool FiniteGroup::is_normal(const std::vector<Elem>& subset) const {
  if (!is_subgroup(subset)) return false;
  std::vector<bool> in(n_, false);
  for (Elem x : subset) in[x] = true;
  for (std::size_t g = 0; g < n_; ++g)
    for (Elem s : subset)
      if (!in[mul(mul(inv(static_cast<Elem>(g)), s), static_cast<Elem>(g))]) return false;
  return true;
}

std::vector<Elem> FiniteGroup::center() const {
  std::vector<Elem> out;
  for (std::size_t x = 0; x < n_; ++x) {
    bool central = true;
    for (std::size_t y = 0; y < n_ && central; ++y)
      central = mul(static_cast<Elem>(x), static_cast<Elem>(y)) == mul(static_cast<Elem>(y), static_cast<Elem>(x));
    if (central) out.push_back(static_cast<Elem>(x));
  }
  return out;
}

std::string cycle_string(const Permutation& perm) {
  std::string s;
  std::vector<bool> done(perm.size(), false);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (done[i] || perm[i] == i) continue;
    s += '(';
    for (std::size_t j = i; !done[j]; j = perm[j]) {
      done[j] = true;
      if (j != i) s += ',';
      s += std::to_string(j + 1);
    }
    s += ')';
  }
  return s.empty() ? "()" : s;
}

FiniteGroup cyclic_group(int n) {
  if (n < 1) throw std::invalid_argument("cyclic group order must be positive");
  std::vector<int> pts(static_cast<std::size_t>(n));
  std::iota(pts.begin(), pts.end(), 0);
  return FiniteGroup::from_permutations("C" + std::to_string(n), {cycle_perm(n, pts)}, n);
}

FiniteGroup dihedral_group(int n) {
  if (n < 1) throw std::invalid_argument("dihedral group needs n >= 1");
  const std::string name = "D" + std::to_string(n);
  if (n == 1) return FiniteGroup::from_permutations(name, {cycle_perm(2, {0, 1})}, 2);
  if (n == 2) return FiniteGroup::from_permutations(name, {compose(cycle_perm(4, {0, 1}), cycle_perm(4, {2, 3})),
                                                           compose(cycle_perm(4, {0, 2}), cycle_perm(4, {1, 3}))}, 4);
  std::vector<int> pts(static_cast<std::size_t>(n));
  std::iota(pts.begin(), pts.end(), 0);
  Permutation reflect(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) reflect[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>((n - i) % n);
  return FiniteGroup::from_permutations(name, {cycle_perm(n, pts), reflect}, n);
}

FiniteGroup symmetric_group(int n) {
  if (n < 1 || n > 7) throw std::invalid_argument("symmetric groups are supported for 1 <= n <= 7");
  const std::string name = "S" + std::to_string(n);
  if (n == 1) return FiniteGroup::from_permutations(name, {}, 1);
  std::vector<int> pts(static_cast<std::size_t>(n));
  std::iota(pts.begin(), pts.end(), 0);
  return FiniteGroup::from_permutations(name, {cycle_perm(n, {0, 1}), cycle_perm(n, pts)}, n);
}

FiniteGroup alternating_group(int n) {
  if (n < 1 || n > 7) throw std::invalid_argument("alternating groups are supported for 1 <= n <= 7");
  std::vector<Permutation> gens;
  for (int i = 2; i < n; ++i) gens.push_back(cycle_perm(n, {0, 1, i}));
  return FiniteGroup::from_permutations("A" + std::to_string(n), gens, n);
}

FiniteGroup klein_four_group() {
  return FiniteGroup::from_permutations("V4", {compose(cycle_perm(4, {0, 1}), cycle_perm(4, {2, 3})),
                                               compose(cycle_perm(4, {0, 2}), cycle_perm(4, {1, 3}))}, 4);
}

FiniteGroup quaternion_group() {
  // (sign, unit) with unit 0..3 = 1, i, j, k; index = 2 * unit + (sign < 0).
  static const int unit_mul[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int unit_sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  static const char* names[4] = {"1", "i", "j", "k"};
  std::vector<Elem> table(64);
  std::vector<std::string> labels(8);
  for (int x = 0; x < 8; ++x) {
    labels[static_cast<std::size_t>(x)] = std::string(x % 2 ? "-" : "") + names[x / 2];
    for (int y = 0; y < 8; ++y) {
      int u = unit_mul[x / 2][y / 2];
      int s = unit_sign[x / 2][y / 2] * (x % 2 ? -1 : 1) * (y % 2 ? -1 : 1);
      table[static_cast<std::size_t>(x * 8 + y)] = static_cast<Elem>(2 * u + (s < 0 ? 1 : 0));
    }
  }
  return FiniteGroup("Q8", std::move(table), std::move(labels));
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const std::size_t na = a.order(), nb = b.order();
  check_order(na * nb, a.name() + "x" + b.name());
  const std::size_t n = na * nb;
  std::vector<Elem> table(n * n);
  std::vector<std::string> labels(n);
  for (std::size_t x = 0; x < n; ++x) {
    labels[x] = "<" + a.label(static_cast<Elem>(x / nb)) + "," + b.label(static_cast<Elem>(x % nb)) + ">";
    for (std::size_t y = 0; y < n; ++y) {
      auto l = a.mul(static_cast<Elem>(x / nb), static_cast<Elem>(y / nb));
      auto r = b.mul(static_cast<Elem>(x % nb), static_cast<Elem>(y % nb));
      table[x * n + y] = static_cast<Elem>(l * nb + r);
    }
  }
  FiniteGroup out(a.name() + "x" + b.name(), std::move(table), std::move(labels));
  if (a.degree() > 0 && b.degree() > 0) {
    out.degree_ = a.degree() + b.degree();
    for (std::size_t x = 0; x < n; ++x) {
      Permutation p = a.permutation(static_cast<Elem>(x / nb));
      for (auto v : b.permutation(static_cast<Elem>(x % nb))) p.push_back(static_cast<std::uint16_t>(v + a.degree()));
      out.perms_.push_back(std::move(p));
    }
  }
  return out;
}

WreathProduct wreath_product(int k, const FiniteGroup& base) {
  if (k < 1) throw std::invalid_argument("wreath product needs a top group of order >= 1");
  const std::size_t m = base.order();
  std::size_t base_size = 1;
  for (int i = 0; i < k; ++i) {
    base_size *= m;
    check_order(base_size * static_cast<std::size_t>(k), base.name() + "wrC" + std::to_string(k));
  }
  const std::size_t n = base_size * static_cast<std::size_t>(k);
  const auto ku = static_cast<std::size_t>(k);

  // index = s * m^k + sum f_i m^i
  auto decode = [&](std::size_t x, std::vector<Elem>& f) {
    std::size_t rest = x % base_size;
    for (std::size_t i = 0; i < ku; ++i) {
      f[i] = static_cast<Elem>(rest % m);
      rest /= m;
    }
    return x / base_size;
  };
  std::vector<Elem> f(ku), g(ku);
  std::vector<Elem> table(n * n);
  std::vector<std::string> labels(n);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t s = decode(x, f);
    std::string lab = "<";
    for (std::size_t i = 0; i < ku; ++i) lab += (i ? "," : "") + base.label(f[i]);
    labels[x] = lab + "|" + std::to_string(s) + ">";
    for (std::size_t y = 0; y < n; ++y) {
      std::size_t r = decode(y, g);
      // (f, s)(g, r) = (f * (s . g), s + r), (s . g)_i = g_{i - s}
      std::size_t idx = 0, place = 1;
      for (std::size_t i = 0; i < ku; ++i) {
        idx += base.mul(f[i], g[(i + ku - s) % ku]) * place;
        place *= m;
      }
      table[x * n + y] = static_cast<Elem>(((s + r) % ku) * base_size + idx);
    }
  }
  WreathProduct out{FiniteGroup(base.name() + "wrC" + std::to_string(k), std::move(table), std::move(labels)), {}, {}};
  for (std::size_t x = 0; x < base_size; ++x) {
    decode(x, f);
    bool rest_trivial = std::all_of(f.begin() + 1, f.end(), [](Elem e) { return e == 0; });
    if (rest_trivial) out.a_factor.push_back(static_cast<Elem>(x));
    if (f[0] == 0) out.b_factor.push_back(static_cast<Elem>(x));
  }
  return out;
}

namespace {

FiniteGroup parse_atom(std::string_view s, std::size_t offset) {
  if (s == "V4") return klein_four_group();
  if (s == "Q8") return quaternion_group();
  if (s.size() < 2) throw ParseError("unknown group '" + std::string(s) + "'", offset);
  char kind = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  auto digits = s.substr(s[1] == '-' ? 2 : 1);
  int n = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size())
    throw ParseError("unknown group '" + std::string(s) + "'", offset);
  try {
    switch (kind) {
      case 'C': return cyclic_group(n);
      case 'D': return dihedral_group(n);
      case 'S': return symmetric_group(n);
      case 'A': return alternating_group(n);
      default: break;
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), offset);
  }
  throw ParseError("unknown group '" + std::string(s) + "'", offset);
}

}  // namespace

FiniteGroup make_group(std::string_view spec) {
  std::optional<FiniteGroup> acc;
  std::size_t offset = 0;
  while (offset <= spec.size()) {
    std::size_t cut = spec.find('x', offset);
    if (cut == std::string_view::npos) cut = spec.size();
    auto factor = spec.substr(offset, cut - offset);
    std::size_t wr = factor.find("wr");
    FiniteGroup g = [&] {
      if (wr == std::string_view::npos) return parse_atom(factor, offset);
      FiniteGroup base = parse_atom(factor.substr(0, wr), offset);
      auto top = factor.substr(wr + 2);
      if (top.size() < 2 || (top[0] != 'C' && top[0] != 'c'))
        throw ParseError("the top group of a wreath product must be cyclic", offset + wr + 2);
      return wreath_product(static_cast<int>(parse_atom(top, offset + wr + 2).order()), base).group;
    }();
    acc = acc ? direct_product(*acc, g) : std::move(g);
    offset = cut + 1;
  }
  return std::move(*acc);
}

std::vector<std::string> small_group_catalog() {
  return {"C2", "C3", "C4", "C5", "V4", "C6", "S3", "D4", "Q8", "D5", "A4", "S4"};
}

}  // namespace miflab
