#pragma once

#include <array>
#include <cstdint>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

namespace hypermon {

/// Per-tuple body verdicts keyed by (compiled body hash, trace ids).
///
/// A tuple's verdict depends only on the traces in it, never on the rest of
/// the trace set, so entries stay valid while the set grows. Trace ids must
/// keep their meaning for the cache's lifetime (e.g. insertion ids of one
/// monitoring session). Safe for concurrent use; racing writers store the
/// same value.
class EvalCache {
public:
  explicit EvalCache(std::size_t capacity = std::size_t{1} << 22) : capacity_(capacity) {}

  std::optional<bool> lookup(std::size_t body, std::span<const std::uint32_t> ids) const {
    Key key{body, {ids.begin(), ids.end()}};
    const auto& shard = shards_[shard_of(key)];
    std::shared_lock lock(shard.mutex);
    auto it = shard.map.find(key);
    if (it == shard.map.end()) return std::nullopt;
    return it->second;
  }

  /// Drops the entry silently once the capacity is reached.
  void store(std::size_t body, std::span<const std::uint32_t> ids, bool value) {
    Key key{body, {ids.begin(), ids.end()}};
    auto& shard = shards_[shard_of(key)];
    std::unique_lock lock(shard.mutex);
    if (shard.map.size() * kShards >= capacity_) return;
    shard.map.try_emplace(std::move(key), value);
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& s : shards_) {
      std::shared_lock lock(s.mutex);
      n += s.map.size();
    }
    return n;
  }

  void clear() {
    for (auto& s : shards_) {
      std::unique_lock lock(s.mutex);
      s.map.clear();
    }
  }

private:
  struct Key {
    std::size_t body;
    std::vector<std::uint32_t> ids;
    friend bool operator==(const Key&, const Key&) = default;
  };

  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = k.body;
      for (auto id : k.ids) {
        h ^= id + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      }
      return static_cast<std::size_t>(h);
    }
  };

  static constexpr std::size_t kShards = 16;

  struct Shard {
    mutable std::shared_mutex mutex;
    std::unordered_map<Key, bool, KeyHash> map;
  };

  static std::size_t shard_of(const Key& k) { return KeyHash{}(k) % kShards; }

  std::size_t capacity_;
  std::array<Shard, kShards> shards_;
};

} // namespace hypermon
