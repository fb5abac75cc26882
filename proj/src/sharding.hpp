#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

#include "nrot/rng.hpp"

namespace nrot::detail {

/// Seed of item `index`: derive_seed(derive_seed(seed, shard), offset).
inline std::uint64_t item_seed(std::uint64_t seed, std::size_t index, std::size_t shard_size) {
  return derive_seed(derive_seed(seed, index / shard_size), index % shard_size);
}

/// Builds `count` items shard by shard, up to `threads` shards at a time,
/// and hands them to `sink` in index order. `make(index, item_seed)` must be
/// pure so the output is independent of the thread count.
template <typename T, typename Make, typename Sink>
void run_sharded(std::size_t count, std::size_t shard_size, unsigned threads, std::uint64_t seed, Make make,
                 Sink sink) {
  const std::size_t shards = (count + shard_size - 1) / shard_size;
  const std::size_t workers = std::max(1u, threads);

  for (std::size_t wave = 0; wave < shards; wave += workers) {
    const std::size_t wave_size = std::min(shards, wave + workers) - wave;
    std::vector<std::vector<T>> results(wave_size);
    std::vector<std::exception_ptr> failures(wave_size);
    auto run_shard = [&](std::size_t slot) {
      try {
        std::size_t begin = (wave + slot) * shard_size;
        std::size_t end = std::min(count, begin + shard_size);
        results[slot].reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) results[slot].push_back(make(i, item_seed(seed, i, shard_size)));
      } catch (...) {
        failures[slot] = std::current_exception();
      }
    };
    if (wave_size == 1) {
      run_shard(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t slot = 0; slot < wave_size; ++slot) pool.emplace_back(run_shard, slot);
      for (auto& t : pool) t.join();
    }
    for (auto& failure : failures)
      if (failure) std::rethrow_exception(failure);
    for (std::size_t slot = 0; slot < wave_size; ++slot) {
      std::size_t begin = (wave + slot) * shard_size;
      for (std::size_t k = 0; k < results[slot].size(); ++k) sink(begin + k, results[slot][k]);
    }
  }
}

}  // namespace nrot::detail
