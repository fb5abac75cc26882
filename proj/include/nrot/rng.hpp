#pragma once

#include <cstdint>
#include <random>

namespace nrot {

/// Mixes a parent seed with a stream index (shard, example, dataset) into an
/// independent child seed. Defined via splitmix64 so every platform derives
/// the same value.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Seeded generator with platform-independent distributions.
///
/// std::mt19937_64's output sequence is fixed by the standard, but the
/// std::*_distribution adaptors are not, so the bounded draws are done here.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform in [lo, hi], inclusive.
  std::int64_t between(std::int64_t lo, std::int64_t hi);

  /// Uniform in [0, 1) with 53 random bits.
  double unit();

  bool coin() { return (next_u64() >> 63) != 0; }

  template <typename Container>
  const auto& pick(const Container& items) {
    return items[below(items.size())];
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace nrot
