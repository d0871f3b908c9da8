#include "miflab/window_cache.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace miflab {

std::string cache_key(int p, const CSequence& c, std::int64_t width) {
  std::ostringstream os;
  os << "p=" << p << ";c=";
  for (int v : c.prefix(static_cast<int>(width))) os << v << ',';
  os << ";w=0.." << width;
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

WindowCache::WindowCache(Instance instance, CacheOptions options)
    : instance_(std::move(instance)), options_(std::move(options)) {
  if (!is_prime(instance_.p)) throw std::invalid_argument("p must be prime");
}

std::shared_ptr<const WindowGroup> WindowCache::get(std::int64_t width) const {
  if (width < 0) throw std::invalid_argument("window width must be non-negative");
  std::shared_future<std::shared_ptr<const WindowGroup>> fut;
  std::promise<std::shared_ptr<const WindowGroup>> promise;
  bool builder = false;
  {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(width);
    if (it == entries_.end()) {
      fut = promise.get_future().share();
      entries_.emplace(width, fut);
      builder = true;
    } else {
      fut = it->second;
    }
  }
  if (builder) {
    try {
      promise.set_value(build(width));
    } catch (...) {
      promise.set_exception(std::current_exception());
    }
  }
  return fut.get();
}

std::vector<std::shared_ptr<const WindowGroup>> WindowCache::built() const {
  std::vector<std::shared_future<std::shared_ptr<const WindowGroup>>> futs;
  {
    std::lock_guard lock(mutex_);
    for (const auto& [w, f] : entries_) futs.push_back(f);
  }
  std::vector<std::shared_ptr<const WindowGroup>> out;
  for (auto& f : futs) {
    if (f.wait_for(std::chrono::seconds(0)) != std::future_status::ready) continue;
    try {
      out.push_back(f.get());
    } catch (...) {
    }
  }
  return out;
}

std::shared_ptr<const WindowGroup> WindowCache::build(std::int64_t width) const {
  auto group = std::make_shared<WindowGroup>();
  group->width = width;
  group->presentation = build_window_presentation(instance_.p, instance_.c, Window(0, width), options_.limits);
  const auto key = cache_key(instance_.p, instance_.c, width);
  if (auto loaded = load(key, group->presentation)) {
    group->table = std::move(*loaded);
  } else {
    group->table = enumerate_cosets(group->presentation, options_.enumeration);
    store(key, group->table);
  }
  return group;
}

std::optional<CosetTable> WindowCache::load(const std::string& key, const Presentation& pres) const {
  if (options_.directory.empty()) return std::nullopt;
  auto path = options_.directory / (key + ".json");
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    auto j = nlohmann::json::parse(in);
    auto table = j.get<CosetTable>();
    // A stale or foreign file is ignored rather than trusted.
    if (table.generator_count() != pres.generator_count() || table.p() != pres.p) return std::nullopt;
    if (table.coset_count() > options_.enumeration.max_cosets) return std::nullopt;
    if (table.count_relator_violations(pres) != 0) return std::nullopt;
    return table;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void WindowCache::store(const std::string& key, const CosetTable& table) const {
  if (options_.directory.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(options_.directory, ec);
  auto path = options_.directory / (key + ".json");
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << nlohmann::json(table).dump();
  }
  std::filesystem::rename(tmp, path, ec);
}

}  // namespace miflab
