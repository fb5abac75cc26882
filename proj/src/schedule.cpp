#include "nrot/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "nrot/error.hpp"

namespace nrot {

void validate(const LrConfig& c) {
  if (!(c.warmup_start > 0.0) || !(c.warmup_start <= c.warmup_end) || !std::isfinite(c.warmup_end))
    throw ConfigError("need 0 < warmup_start <= warmup_end");
  if (!(c.decay_rate >= 0.0) || !std::isfinite(c.decay_rate)) throw ConfigError("decay_rate must be >= 0");
  if (!(c.warmup_fraction > 0.0 && c.warmup_fraction < 1.0)) throw ConfigError("warmup_fraction must be in (0, 1)");
  if (c.total_epochs < 1) throw ConfigError("total_epochs must be >= 1");
  if (c.batches_per_epoch < 1) throw ConfigError("batches_per_epoch must be >= 1");
}

nlohmann::ordered_json to_json(const LrConfig& c) {
  return {{"warmup_start", c.warmup_start}, {"warmup_end", c.warmup_end},
          {"decay_rate", c.decay_rate},     {"total_epochs", c.total_epochs},
          {"batches_per_epoch", c.batches_per_epoch}, {"warmup_fraction", c.warmup_fraction}};
}

LrConfig lr_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("lr config must be a JSON object");
  LrConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "warmup_start") c.warmup_start = value.get<double>();
      else if (key == "warmup_end") c.warmup_end = value.get<double>();
      else if (key == "decay_rate") c.decay_rate = value.get<double>();
      else if (key == "total_epochs") c.total_epochs = value.get<std::uint64_t>();
      else if (key == "batches_per_epoch") c.batches_per_epoch = value.get<std::uint64_t>();
      else if (key == "warmup_fraction") c.warmup_fraction = value.get<double>();
      else throw ConfigError("unknown lr config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad lr config value: ") + e.what());
  }
  validate(c);
  return c;
}

LrSchedule::LrSchedule(LrConfig config) : config_(config) {
  validate(config_);
  // 0.1 * 30 is 3.0000000000000004 in binary; snap near-integers before ceil.
  double raw = config_.warmup_fraction * static_cast<double>(config_.total_epochs);
  double nearest = std::round(raw);
  double epochs = std::abs(raw - nearest) < 1e-9 ? nearest : std::ceil(raw);
  warmup_epoch_ = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(epochs));
}

double LrSchedule::lr_at(std::uint64_t b) const {
  const std::uint64_t bw = warmup_batches();
  if (b < bw) {
    if (bw == 1) return config_.warmup_end;
    double t = static_cast<double>(b) / static_cast<double>(bw - 1);
    return std::lerp(config_.warmup_start, config_.warmup_end, t);
  }
  double since = static_cast<double>(epoch_of(b) - warmup_epoch_);
  return config_.warmup_end / (1.0 + config_.decay_rate * since);
}

namespace {

void write_row(std::ostream& out, std::uint64_t b, std::uint64_t epoch, double lr) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", lr);
  out << b << ',' << epoch << ',' << buf << '\n';
}

}  // namespace

std::uint64_t emit_table(const LrSchedule& s, std::ostream& out) {
  out << "global_batch,epoch,lr\n";
  std::uint64_t rows = 0;
  for (std::uint64_t b = 0; b < s.warmup_batches(); ++b, ++rows) write_row(out, b, s.epoch_of(b), s.lr_at(b));
  const std::uint64_t per = s.config().batches_per_epoch;
  for (std::uint64_t e = s.warmup_epoch(); e < s.config().total_epochs; ++e, ++rows)
    write_row(out, e * per, e, s.lr_at(e * per));
  if (!out) throw IoError("failed writing lr table");
  return rows;
}

}  // namespace nrot
