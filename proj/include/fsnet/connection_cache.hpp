#ifndef FSNET_CONNECTION_CACHE_HPP
#define FSNET_CONNECTION_CACHE_HPP

#include <fsnet/and_feature.hpp>

#include <array>
#include <atomic>
#include <cstddef>
#include <list>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>

namespace fsnet
{

using shared_samples = std::shared_ptr<const index_list>;

// Bounded LRU map from and-feature to its connected samples, split into
// independently locked shards. Entries are always equal to a fresh computation
// on the network they were computed for; a capacity of 0 disables caching.
class ConnectionCache
{
public:
  struct Stats
  {
    std::size_t hits = 0;
    std::size_t misses = 0;
    std::size_t evictions = 0;
  };

  explicit ConnectionCache(std::size_t capacity = std::size_t{1} << 20)
    : capacity_(capacity)
  {
    for (std::size_t s = 0; s < n_shards; ++s)
      shards_[s].capacity = capacity / n_shards + (s < capacity % n_shards ? 1 : 0);
  }

  ConnectionCache(const ConnectionCache&) = delete;
  auto operator=(const ConnectionCache&) -> ConnectionCache& = delete;

  auto connections(const FeatureSampleNetwork& g, const AndFeature& af) -> shared_samples
  {
    auto& shard = shards_[af.hash() % n_shards];
    if (shard.capacity == 0)
    {
      misses_.fetch_add(1, std::memory_order_relaxed);
      return std::make_shared<const index_list>(connected_samples(g, af));
    }
    {
      const auto lock = std::scoped_lock{shard.mutex};
      if (const auto it = shard.index.find(af); it != shard.index.end())
      {
        shard.order.splice(shard.order.begin(), shard.order, it->second);
        hits_.fetch_add(1, std::memory_order_relaxed);
        return it->second->second;
      }
    }
    misses_.fetch_add(1, std::memory_order_relaxed);
    auto value = std::make_shared<const index_list>(connected_samples(g, af));

    const auto lock = std::scoped_lock{shard.mutex};
    if (const auto it = shard.index.find(af); it != shard.index.end())
      return it->second->second;
    shard.order.emplace_front(af, value);
    shard.index.emplace(af, shard.order.begin());
    if (shard.order.size() > shard.capacity)
    {
      shard.index.erase(shard.order.back().first);
      shard.order.pop_back();
      evictions_.fetch_add(1, std::memory_order_relaxed);
    }
    return value;
  }

  auto size() const -> std::size_t
  {
    auto total = std::size_t{0};
    for (auto& shard : shards_)
    {
      const auto lock = std::scoped_lock{shard.mutex};
      total += shard.order.size();
    }
    return total;
  }

  auto capacity() const -> std::size_t { return capacity_; }

  auto stats() const -> Stats
  {
    return {hits_.load(), misses_.load(), evictions_.load()};
  }

private:
  static constexpr std::size_t n_shards = 16;

  struct Shard
  {
    using entry = std::pair<AndFeature, shared_samples>;
    mutable std::mutex mutex;
    std::list<entry> order;
    std::unordered_map<AndFeature, std::list<entry>::iterator, AndFeatureHash> index;
    std::size_t capacity = 0;
  };

  std::size_t capacity_;
  std::array<Shard, n_shards> shards_;
  std::atomic<std::size_t> hits_{0}, misses_{0}, evictions_{0};
};

} // namespace fsnet

#endif // FSNET_CONNECTION_CACHE_HPP
