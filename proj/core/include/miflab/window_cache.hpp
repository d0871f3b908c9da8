#pragma once

#include <cstdint>
#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "miflab/coset_table.hpp"
#include "miflab/csequence.hpp"
#include "miflab/presentation.hpp"

namespace miflab {

/// The ambient group G(p, c).
struct Instance {
  int p = 2;
  CSequence c = CSequence::identity();

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Presentation and completed table of B([0, width]). Window groups are
/// shift-equivariant, so every window [lo, lo + width] is served by this one.
struct WindowGroup {
  std::int64_t width = 0;
  Presentation presentation;
  CosetTable table;
};

struct CacheOptions {
  EnumerationOptions enumeration;
  PresentationLimits limits;
  /// Directory for JSON table files; empty disables the disk cache.
  std::filesystem::path directory;
};

/// Stable key for the on-disk cache: FNV-1a over (p, c_1..c_width, window).
std::string cache_key(int p, const CSequence& c, std::int64_t width);

/// Read-mostly table cache. Each width is built exactly once, on first
/// request; concurrent requests for the same width wait for that build, and
/// requests for other widths proceed independently. A failed build (for
/// example CapacityExceeded) is remembered and rethrown to later callers.
class WindowCache {
 public:
  WindowCache(Instance instance, CacheOptions options = {});

  const Instance& instance() const noexcept { return instance_; }
  const CacheOptions& options() const noexcept { return options_; }

  std::shared_ptr<const WindowGroup> get(std::int64_t width) const;

  /// Widths whose tables are currently built (failed builds excluded).
  std::vector<std::shared_ptr<const WindowGroup>> built() const;

 private:
  std::shared_ptr<const WindowGroup> build(std::int64_t width) const;
  std::optional<CosetTable> load(const std::string& key, const Presentation& pres) const;
  void store(const std::string& key, const CosetTable& table) const;

  Instance instance_;
  CacheOptions options_;
  mutable std::mutex mutex_;
  mutable std::map<std::int64_t, std::shared_future<std::shared_ptr<const WindowGroup>>> entries_;
};

}  // namespace miflab
