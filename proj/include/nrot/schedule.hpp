#pragma once

#include <cstdint>
#include <ostream>

#include <json.hpp>

namespace nrot {

struct LrConfig {
  double warmup_start = 1e-8;
  double warmup_end = 1e-4;
  double decay_rate = 1e-3;  // per epoch after warmup
  std::uint64_t total_epochs = 10;
  std::uint64_t batches_per_epoch = 100;
  double warmup_fraction = 0.10;
};

/// Throws ConfigError on a non-positive or inverted warmup range, negative
/// decay, a warmup fraction outside (0, 1) or zero counts.
void validate(const LrConfig& config);

nlohmann::ordered_json to_json(const LrConfig& config);
LrConfig lr_config_from_json(const nlohmann::json& j);

/// Linear per-batch warmup over the first warmup_epoch() epochs, then
/// warmup_end / (1 + decay_rate * (epoch - warmup_epoch)).
class LrSchedule {
public:
  explicit LrSchedule(LrConfig config);

  const LrConfig& config() const { return config_; }
  /// ceil(warmup_fraction * total_epochs), never below 1.
  std::uint64_t warmup_epoch() const { return warmup_epoch_; }
  std::uint64_t warmup_batches() const { return warmup_epoch_ * config_.batches_per_epoch; }

  std::uint64_t epoch_of(std::uint64_t global_batch) const { return global_batch / config_.batches_per_epoch; }
  double lr_at(std::uint64_t global_batch) const;

private:
  LrConfig config_;
  std::uint64_t warmup_epoch_ = 1;
};

/// CSV "global_batch,epoch,lr": every warmup batch, then the first batch of
/// each later epoch. lr is printed with 17 significant digits. Returns the
/// number of data rows; throws IoError if the stream fails.
std::uint64_t emit_table(const LrSchedule& schedule, std::ostream& out);

}  // namespace nrot
