#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "nrot/corpus.hpp"
#include "nrot/rng.hpp"

namespace nrot {

struct DatasetStat {
  std::string name;
  std::uint64_t length = 0;     // example count
  double scale = 1.0;           // multiplier on length
  std::optional<double> cap;    // upper bound on length * scale
};

struct PlanEntry {
  DatasetStat stat;
  double rate = 0.0;   // min(length * scale, cap)^(1/T)
  double ratio = 0.0;  // rate / sum of rates
};

struct MixturePlan {
  double temperature = 1.0;
  std::vector<PlanEntry> entries;

  const PlanEntry* find(const std::string& name) const;
};

/// Temperature-scaled mixing ratios. Computed in long double; throws
/// ConfigError for T <= 0, no datasets, length 0, scale <= 0 or cap <= 0.
MixturePlan compute_plan(const std::vector<DatasetStat>& stats, double temperature);

/// {T, datasets: [{name, length, scale, cap, r, p}]}
nlohmann::ordered_json to_json(const MixturePlan& plan);

enum class EpochMode { cover_all_epoch, drop_epoch_exception };

std::string_view to_string(EpochMode mode);
std::optional<EpochMode> parse_epoch_mode(std::string_view text);

/// cover_all_epoch: ceil(sum of lengths / batch). drop_epoch_exception:
/// ceil(length of `reference` / batch).
std::uint64_t steps_per_epoch(const std::vector<DatasetStat>& stats, std::uint64_t batch_size, EpochMode mode,
                              const std::string& reference = "DROP");

struct SampleOptions {
  bool allow_repeats = true;  // reshuffle a dataset once every example was drawn
};

/// Draws datasets i.i.d. from the plan ratios and walks each dataset through
/// successive random permutations.
///
/// The dataset choice stream uses derive_seed(seed, 0); dataset k's shuffles
/// use derive_seed(seed, k + 1).
class MixtureSampler {
public:
  MixtureSampler(const MixturePlan& plan, std::vector<std::span<const Example>> sources, std::uint64_t seed,
                 SampleOptions options = {});

  struct Draw {
    std::size_t dataset;
    const Example* example;
  };

  Draw next();

private:
  struct Cursor {
    std::span<const Example> examples;
    std::vector<std::size_t> order;
    std::size_t position = 0;
    std::size_t epoch = 0;
    Rng rng;
  };

  void reshuffle(Cursor& cursor);

  std::vector<std::string> names_;
  std::vector<double> cumulative_;
  std::vector<Cursor> cursors_;
  Rng choice_rng_;
  SampleOptions options_;
};

/// `total` examples from the sampler. Sources are aligned with plan entries.
std::vector<Example> sample_stream(const MixturePlan& plan, std::vector<std::span<const Example>> sources,
                                   std::size_t total, std::uint64_t seed, SampleOptions options = {});

}  // namespace nrot
