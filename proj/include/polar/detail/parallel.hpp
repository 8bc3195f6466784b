#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace polar {

template <typename Body>
void parallel_for(std::uint64_t size, unsigned threads, Body body, std::uint64_t min_shard) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  min_shard = std::max<std::uint64_t>(min_shard, 1);
  const std::uint64_t shards = std::min<std::uint64_t>(threads, (size + min_shard - 1) / min_shard);
  if (shards <= 1) {
    body(std::uint64_t{0}, size);
    return;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (size + shards - 1) / shards;
  for (std::uint64_t s = 0; s < shards; ++s) {
    const std::uint64_t begin = s * chunk;
    const std::uint64_t end = std::min(size, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace polar
