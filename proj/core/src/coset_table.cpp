#include "miflab/coset_table.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "miflab/errors.hpp"

namespace miflab {

namespace {

constexpr Coset kUndefined = std::numeric_limits<Coset>::max();

using ColumnWord = std::vector<int>;

// Relators rewritten as column sequences, freely and cyclically reduced and
// deduplicated up to rotation and inversion. For involutory generators the
// power relator disappears because the table enforces it structurally.
std::vector<ColumnWord> prepare_relators(const Presentation& pres, const std::vector<int>& inv_col,
                                         bool involutory) {
  std::map<ColumnWord, ColumnWord> by_key;
  for (const auto& rel : pres.relators) {
    ColumnWord w;
    for (const auto& l : rel.letters) {
      if (l.gen < 0 || l.gen >= pres.generator_count())
        throw std::invalid_argument("relator letter references an unknown generator");
      int col = involutory ? l.gen : 2 * l.gen + (l.sign < 0 ? 1 : 0);
      if (!w.empty() && w.back() == inv_col[static_cast<std::size_t>(col)])
        w.pop_back();
      else
        w.push_back(col);
    }
    while (w.size() >= 2 && w.front() == inv_col[static_cast<std::size_t>(w.back())]) {
      w.pop_back();
      w.erase(w.begin());
    }
    if (w.empty()) continue;

    ColumnWord winv;
    for (auto it = w.rbegin(); it != w.rend(); ++it) winv.push_back(inv_col[static_cast<std::size_t>(*it)]);
    ColumnWord key = w;
    for (const auto* base : {&w, &winv}) {
      ColumnWord rot = *base;
      for (std::size_t r = 0; r < rot.size(); ++r) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        key = std::min(key, rot);
      }
    }
    by_key.emplace(std::move(key), std::move(w));
  }
  std::vector<ColumnWord> out;
  out.reserve(by_key.size());
  for (auto& [key, w] : by_key) out.push_back(std::move(w));
  std::stable_sort(out.begin(), out.end(),
                   [](const ColumnWord& a, const ColumnWord& b) { return a.size() < b.size(); });
  return out;
}

class Enumerator {
 public:
  Enumerator(const Presentation& pres, const EnumerationOptions& opts)
      : involutory_(pres.p == 2),
        ncols_(involutory_ ? pres.generator_count() : 2 * pres.generator_count()),
        max_cosets_(opts.max_cosets) {
    inv_col_.resize(static_cast<std::size_t>(ncols_));
    for (int c = 0; c < ncols_; ++c) inv_col_[static_cast<std::size_t>(c)] = involutory_ ? c : (c ^ 1);
    relators_ = prepare_relators(pres, inv_col_, involutory_);
  }

  void run_felsch() {
    build_conjugates();
    new_coset();
    for (Coset alpha = 0; alpha < rep_.size(); ++alpha) {
      for (int c = 0; c < ncols_ && live(alpha); ++c) {
        if (entry(alpha, c) != kUndefined) continue;
        define(alpha, c);
        process_deductions();
      }
      if (rep_.size() - live_ > live_ && rep_.size() - live_ > 100'000) alpha = compact(alpha);
    }
    felsch_ = false;
    // Closing HLT sweep; a no-op on a complete, consistent table.
    for (Coset alpha = 0; alpha < rep_.size(); ++alpha) {
      if (!live(alpha)) continue;
      for (const auto& rel : relators_) {
        scan_and_fill(alpha, rel);
        if (!live(alpha)) break;
      }
    }
  }

  void run() {
    new_coset();
    for (Coset alpha = 0; alpha < rep_.size(); ++alpha) {
      if (!live(alpha)) continue;
      for (const auto& rel : relators_) {
        scan_and_fill(alpha, rel);
        if (!live(alpha)) break;
      }
      if (live(alpha)) {
        for (int c = 0; c < ncols_; ++c)
          if (entry(alpha, c) == kUndefined) define(alpha, c);
      }
      if (rep_.size() - live_ > live_ && rep_.size() - live_ > 100'000) alpha = compact(alpha);
    }
  }

  // Live rows, renumbered by BFS from coset 0.
  void export_to(std::vector<Coset>& action, std::size_t& count) const {
    std::vector<Coset> order;
    std::vector<Coset> renum(rep_.size(), kUndefined);
    order.reserve(live_);
    order.push_back(0);
    renum[0] = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      for (int c = 0; c < ncols_; ++c) {
        Coset nxt = entry(order[k], c);
        if (renum[nxt] == kUndefined) {
          renum[nxt] = static_cast<Coset>(order.size());
          order.push_back(nxt);
        }
      }
    }
    count = order.size();
    action.assign(count * static_cast<std::size_t>(ncols_), kUndefined);
    for (std::size_t k = 0; k < count; ++k)
      for (int c = 0; c < ncols_; ++c)
        action[k * static_cast<std::size_t>(ncols_) + static_cast<std::size_t>(c)] = renum[entry(order[k], c)];
  }

  EnumerationStats stats;

 private:
  Coset& entry(Coset q, int col) {
    return table_[static_cast<std::size_t>(q) * static_cast<std::size_t>(ncols_) + static_cast<std::size_t>(col)];
  }
  Coset entry(Coset q, int col) const {
    return table_[static_cast<std::size_t>(q) * static_cast<std::size_t>(ncols_) + static_cast<std::size_t>(col)];
  }
  bool live(Coset q) const { return rep_[q] == q; }
  int inv(int col) const { return inv_col_[static_cast<std::size_t>(col)]; }

  Coset new_coset() {
    if (live_ >= max_cosets_)
      throw CapacityExceeded("coset enumeration exceeded " + std::to_string(max_cosets_) + " live cosets",
                             max_cosets_);
    if (rep_.size() >= static_cast<std::size_t>(kUndefined - 1))
      throw CapacityExceeded("coset numbering overflow", max_cosets_);
    auto q = static_cast<Coset>(rep_.size());
    rep_.push_back(q);
    table_.resize(table_.size() + static_cast<std::size_t>(ncols_), kUndefined);
    ++live_;
    ++stats.cosets_defined;
    stats.max_live = std::max(stats.max_live, live_);
    return q;
  }

  void define(Coset q, int col) {
    Coset r = new_coset();
    entry(q, col) = r;
    entry(r, inv(col)) = q;
    if (felsch_) deductions_.emplace_back(q, col);
  }

  void build_conjugates() {
    felsch_ = true;
    conjugates_.assign(static_cast<std::size_t>(ncols_), {});
    std::vector<std::vector<ColumnWord>> seen(static_cast<std::size_t>(ncols_));
    for (const auto& rel : relators_) {
      ColumnWord relinv;
      for (auto it = rel.rbegin(); it != rel.rend(); ++it) relinv.push_back(inv(*it));
      for (const ColumnWord* base : {&rel, static_cast<const ColumnWord*>(&relinv)}) {
        ColumnWord rot = *base;
        for (std::size_t r = 0; r < rot.size(); ++r) {
          auto& bucket = conjugates_[static_cast<std::size_t>(rot.front())];
          if (std::find(bucket.begin(), bucket.end(), rot) == bucket.end()) bucket.push_back(rot);
          std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        }
      }
    }
  }

  // Scan without defining; records a deduction when exactly one entry is missing.
  void scan(Coset alpha, const ColumnWord& w) {
    Coset f = alpha, b = alpha;
    std::ptrdiff_t i = 0, j = static_cast<std::ptrdiff_t>(w.size()) - 1;
    while (i <= j && entry(f, w[static_cast<std::size_t>(i)]) != kUndefined) {
      f = entry(f, w[static_cast<std::size_t>(i)]);
      ++i;
    }
    if (i > j) {
      if (f != alpha) coincidence(f, alpha);
      return;
    }
    while (j >= i && entry(b, inv(w[static_cast<std::size_t>(j)])) != kUndefined) {
      b = entry(b, inv(w[static_cast<std::size_t>(j)]));
      --j;
    }
    if (j < i) {
      coincidence(f, b);
    } else if (j == i) {
      int col = w[static_cast<std::size_t>(i)];
      entry(f, col) = b;
      entry(b, inv(col)) = f;
      deductions_.emplace_back(f, col);
    }
  }

  void process_deductions() {
    while (!deductions_.empty()) {
      auto [q, col] = deductions_.back();
      deductions_.pop_back();
      if (!live(q)) continue;
      for (const auto& w : conjugates_[static_cast<std::size_t>(col)]) {
        scan(q, w);
        if (!live(q)) break;
      }
      if (!live(q) || entry(q, col) == kUndefined) continue;
      Coset r = entry(q, col);
      for (const auto& w : conjugates_[static_cast<std::size_t>(inv(col))]) {
        scan(r, w);
        if (!live(r)) break;
      }
    }
  }

  void scan_and_fill(Coset alpha, const ColumnWord& w) {
    Coset f = alpha, b = alpha;
    std::ptrdiff_t i = 0, j = static_cast<std::ptrdiff_t>(w.size()) - 1;
    while (true) {
      while (i <= j && entry(f, w[static_cast<std::size_t>(i)]) != kUndefined) {
        f = entry(f, w[static_cast<std::size_t>(i)]);
        ++i;
      }
      if (i > j) {
        if (f != alpha) coincidence(f, alpha);
        return;
      }
      while (j >= i && entry(b, inv(w[static_cast<std::size_t>(j)])) != kUndefined) {
        b = entry(b, inv(w[static_cast<std::size_t>(j)]));
        --j;
      }
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (j == i) {
        int col = w[static_cast<std::size_t>(i)];
        entry(f, col) = b;
        entry(b, inv(col)) = f;
        return;
      }
      define(f, w[static_cast<std::size_t>(i)]);
    }
  }

  Coset find(Coset q) {
    Coset root = q;
    while (rep_[root] != root) root = rep_[root];
    while (rep_[q] != root) {
      Coset next = rep_[q];
      rep_[q] = root;
      q = next;
    }
    return root;
  }

  void merge(Coset k, Coset l) {
    Coset a = find(k), b = find(l);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    rep_[b] = a;
    --live_;
    queue_.push_back(b);
  }

  void coincidence(Coset a, Coset b) {
    ++stats.coincidences;
    queue_.clear();
    merge(a, b);
    for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
      Coset g = queue_[qi];
      for (int c = 0; c < ncols_; ++c) {
        Coset d = entry(g, c);
        if (d == kUndefined) continue;
        entry(d, inv(c)) = kUndefined;
        Coset mu = find(g), nu = find(d);
        if (entry(mu, c) != kUndefined) {
          merge(nu, entry(mu, c));
        } else if (entry(nu, inv(c)) != kUndefined) {
          merge(mu, entry(nu, inv(c)));
        } else {
          entry(mu, c) = nu;
          entry(nu, inv(c)) = mu;
          if (felsch_) deductions_.emplace_back(mu, c);
        }
      }
    }
  }

  // Drops dead rows, keeping the relative order of live ones. Returns the new
  // index of `alpha`.
  Coset compact(Coset alpha) {
    std::vector<Coset> renum(rep_.size(), kUndefined);
    Coset next = 0;
    for (Coset q = 0; q < rep_.size(); ++q)
      if (live(q)) renum[q] = next++;
    std::vector<Coset> table(static_cast<std::size_t>(next) * static_cast<std::size_t>(ncols_));
    for (Coset q = 0; q < rep_.size(); ++q) {
      if (!live(q)) continue;
      for (int c = 0; c < ncols_; ++c) {
        Coset e = entry(q, c);
        table[static_cast<std::size_t>(renum[q]) * static_cast<std::size_t>(ncols_) + static_cast<std::size_t>(c)] =
            e == kUndefined ? kUndefined : renum[e];
      }
    }
    Coset before = 0;
    for (Coset q = 0; q <= alpha; ++q)
      if (live(q)) ++before;
    table_ = std::move(table);
    rep_.resize(next);
    for (Coset q = 0; q < next; ++q) rep_[q] = q;
    // Position of the last live coset at or before alpha; the caller's loop
    // increments past it.
    return before - 1;
  }

  bool involutory_;
  int ncols_;
  std::size_t max_cosets_;
  std::vector<int> inv_col_;
  std::vector<ColumnWord> relators_;
  std::vector<Coset> table_;
  std::vector<Coset> rep_;
  std::vector<Coset> queue_;
  std::size_t live_ = 0;
  bool felsch_ = false;
  std::vector<std::vector<ColumnWord>> conjugates_;
  std::vector<std::pair<Coset, int>> deductions_;
};

}  // namespace

CosetTable enumerate_cosets(const Presentation& pres, const EnumerationOptions& options) {
  if (options.max_cosets < 1) throw std::invalid_argument("max_cosets must be at least 1");
  if (pres.p == 2) {
    std::vector<bool> has_square(static_cast<std::size_t>(pres.generator_count()), false);
    for (const auto& r : pres.relators)
      if (r.letters.size() == 2 && r.letters[0] == r.letters[1] && r.letters[0].sign == 1)
        has_square[static_cast<std::size_t>(r.letters[0].gen)] = true;
    if (std::find(has_square.begin(), has_square.end(), false) != has_square.end())
      throw std::invalid_argument("p = 2 presentations must contain g^2 for every generator");
  }
  Enumerator e(pres, options);
  if (options.strategy == EnumerationStrategy::Felsch)
    e.run_felsch();
  else
    e.run();
  CosetTable t;
  t.gens_ = pres.generator_count();
  t.p_ = pres.p;
  e.export_to(t.action_, t.count_);
  t.stats_ = e.stats;
  t.rebuild_words();
  return t;
}

void CosetTable::rebuild_words() {
  const auto ncols = static_cast<std::size_t>(column_count());
  parent_.assign(count_, kUndefined);
  parent_col_.assign(count_, -1);
  depth_.assign(count_, 0);
  std::vector<Coset> order{0};
  std::vector<Coset> renum(count_, kUndefined);
  renum[0] = 0;
  order.reserve(count_);
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t c = 0; c < ncols; ++c) {
      Coset nxt = action_[static_cast<std::size_t>(order[k]) * ncols + c];
      if (nxt >= count_) throw std::invalid_argument("coset table entry out of range");
      if (renum[nxt] == kUndefined) {
        renum[nxt] = static_cast<Coset>(order.size());
        order.push_back(nxt);
      }
    }
  }
  if (order.size() != count_) throw std::invalid_argument("coset table is not connected");

  // Renumber into shortlex order if the source numbering differs.
  bool standard = true;
  for (std::size_t k = 0; k < count_; ++k) standard = standard && order[k] == k;
  if (!standard) {
    std::vector<Coset> action(action_.size());
    for (std::size_t k = 0; k < count_; ++k)
      for (std::size_t c = 0; c < ncols; ++c)
        action[k * ncols + c] = renum[action_[static_cast<std::size_t>(order[k]) * ncols + c]];
    action_ = std::move(action);
  }

  std::vector<bool> seen(count_, false);
  seen[0] = true;
  for (std::size_t q = 0; q < count_; ++q) {
    for (std::size_t c = 0; c < ncols; ++c) {
      Coset nxt = action_[q * ncols + c];
      if (!seen[nxt]) {
        seen[nxt] = true;
        parent_[nxt] = static_cast<Coset>(q);
        parent_col_[nxt] = static_cast<std::int32_t>(c);
        depth_[nxt] = depth_[q] + 1;
      }
    }
  }
}

Coset CosetTable::trace(Coset from, std::span<const Letter> word) const {
  Coset q = from;
  for (const auto& l : word) {
    if (l.gen < 0 || l.gen >= gens_) throw std::out_of_range("letter references an unknown generator");
    q = act(q, l);
  }
  return q;
}

Coset CosetTable::multiply(std::span<const Letter> u, std::span<const Letter> v) const {
  return trace(trace(u), v);
}

LetterWord CosetTable::word_for_coset(Coset q) const {
  LetterWord w;
  w.reserve(depth_.at(q));
  while (q != identity()) {
    w.push_back(letter_of_column(parent_col_[q]));
    q = parent_[q];
  }
  std::reverse(w.begin(), w.end());
  return w;
}

Coset CosetTable::product(Coset q, Coset r) const {
  auto w = word_for_coset(r);
  return trace(q, w);
}

Coset CosetTable::inverse(Coset q) const {
  auto w = miflab::inverse(word_for_coset(q));
  return trace(w);
}

std::uint64_t CosetTable::coset_order(Coset q) const {
  auto w = word_for_coset(q);
  Coset cur = q;
  std::uint64_t k = 1;
  while (cur != identity()) {
    cur = trace(cur, w);
    ++k;
    if (k > count_) throw std::logic_error("element order exceeds group order");
  }
  return k;
}

std::uint64_t CosetTable::element_order(std::span<const Letter> u) const { return coset_order(trace(u)); }

std::size_t CosetTable::count_relator_violations(const Presentation& pres) const {
  if (pres.generator_count() != gens_) throw std::invalid_argument("presentation does not match table");
  std::size_t bad = 0;
  for (const auto& rel : pres.relators)
    for (Coset q = 0; q < count_; ++q)
      if (trace(q, rel.letters) != q) ++bad;
  return bad;
}

bool CosetTable::columns_are_permutations() const {
  const auto ncols = column_count();
  for (int c = 0; c < ncols; ++c) {
    std::vector<bool> hit(count_, false);
    for (Coset q = 0; q < count_; ++q) {
      Coset r = act_column(q, c);
      if (r >= count_ || hit[r]) return false;
      hit[r] = true;
    }
    // The inverse column really inverts.
    int ic = involutory() ? c : (c ^ 1);
    for (Coset q = 0; q < count_; ++q)
      if (act_column(act_column(q, c), ic) != q) return false;
  }
  return true;
}

void to_json(nlohmann::json& j, const CosetTable& t) {
  j = nlohmann::json::object();
  j["p"] = t.p_;
  j["gens"] = t.gens_;
  j["coset_count"] = t.count_;
  j["columns"] = t.column_count();
  auto rows = nlohmann::json::array();
  const auto ncols = static_cast<std::size_t>(t.column_count());
  for (std::size_t q = 0; q < t.count_; ++q)
    rows.push_back(std::vector<Coset>(t.action_.begin() + static_cast<std::ptrdiff_t>(q * ncols),
                                      t.action_.begin() + static_cast<std::ptrdiff_t>((q + 1) * ncols)));
  j["action"] = std::move(rows);
}

void from_json(const nlohmann::json& j, CosetTable& t) {
  CosetTable out;
  out.p_ = j.at("p").get<int>();
  out.gens_ = j.at("gens").get<int>();
  out.count_ = j.at("coset_count").get<std::size_t>();
  if (out.gens_ < 1 || out.count_ < 1 || !is_prime(out.p_)) throw std::invalid_argument("bad coset table header");
  const auto ncols = static_cast<std::size_t>(out.column_count());
  if (j.at("columns").get<std::size_t>() != ncols) throw std::invalid_argument("column count mismatch");
  const auto& rows = j.at("action");
  if (rows.size() != out.count_) throw std::invalid_argument("row count mismatch");
  out.action_.reserve(out.count_ * ncols);
  for (const auto& row : rows) {
    if (row.size() != ncols) throw std::invalid_argument("row width mismatch");
    for (const auto& e : row) out.action_.push_back(e.get<Coset>());
  }
  out.rebuild_words();
  if (!out.columns_are_permutations()) throw std::invalid_argument("imported coset table is not a permutation action");
  t = std::move(out);
}

}  // namespace miflab
