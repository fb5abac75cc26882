#include "nrot/mixer.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "nrot/error.hpp"

namespace nrot {

const PlanEntry* MixturePlan::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.stat.name == name) return &e;
  return nullptr;
}

MixturePlan compute_plan(const std::vector<DatasetStat>& stats, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) throw ConfigError("temperature must be a positive finite number");
  if (stats.empty()) throw ConfigError("mixture needs at least one dataset");

  std::set<std::string> names;
  std::vector<long double> rates;
  long double sum = 0.0L;
  const long double inverse_t = 1.0L / static_cast<long double>(temperature);
  for (const auto& s : stats) {
    if (!names.insert(s.name).second) throw ConfigError("duplicate dataset '" + s.name + "' in mixture");
    if (s.length < 1) throw ConfigError("dataset '" + s.name + "' has length 0");
    if (!(s.scale > 0.0) || !std::isfinite(s.scale)) throw ConfigError("dataset '" + s.name + "' needs scale > 0");
    if (s.cap && !(*s.cap > 0.0)) throw ConfigError("dataset '" + s.name + "' needs cap > 0");

    long double size = static_cast<long double>(s.length) * static_cast<long double>(s.scale);
    if (s.cap) size = std::min(size, static_cast<long double>(*s.cap));
    long double rate = inverse_t == 1.0L ? size : std::pow(size, inverse_t);
    rates.push_back(rate);
    sum += rate;
  }

  MixturePlan plan;
  plan.temperature = temperature;
  for (std::size_t i = 0; i < stats.size(); ++i)
    plan.entries.push_back(PlanEntry{stats[i], static_cast<double>(rates[i]), static_cast<double>(rates[i] / sum)});
  return plan;
}

nlohmann::ordered_json to_json(const MixturePlan& plan) {
  nlohmann::ordered_json j;
  j["T"] = plan.temperature;
  j["datasets"] = nlohmann::ordered_json::array();
  for (const auto& e : plan.entries) {
    nlohmann::ordered_json d;
    d["name"] = e.stat.name;
    d["length"] = e.stat.length;
    d["scale"] = e.stat.scale;
    d["cap"] = e.stat.cap ? nlohmann::ordered_json(*e.stat.cap) : nlohmann::ordered_json(nullptr);
    d["r"] = e.rate;
    d["p"] = e.ratio;
    j["datasets"].push_back(d);
  }
  return j;
}

std::string_view to_string(EpochMode mode) {
  return mode == EpochMode::cover_all_epoch ? "cover_all_epoch" : "drop_epoch_exception";
}

std::optional<EpochMode> parse_epoch_mode(std::string_view text) {
  if (text == "cover_all_epoch") return EpochMode::cover_all_epoch;
  if (text == "drop_epoch_exception") return EpochMode::drop_epoch_exception;
  return std::nullopt;
}

std::uint64_t steps_per_epoch(const std::vector<DatasetStat>& stats, std::uint64_t batch_size, EpochMode mode,
                              const std::string& reference) {
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  std::uint64_t examples = 0;
  if (mode == EpochMode::cover_all_epoch) {
    for (const auto& s : stats) examples += s.length;
  } else {
    auto it = std::find_if(stats.begin(), stats.end(), [&](const DatasetStat& s) { return s.name == reference; });
    if (it == stats.end()) throw ConfigError("reference dataset '" + reference + "' is not in the stage");
    examples = it->length;
  }
  return std::max<std::uint64_t>(1, (examples + batch_size - 1) / batch_size);
}

MixtureSampler::MixtureSampler(const MixturePlan& plan, std::vector<std::span<const Example>> sources,
                               std::uint64_t seed, SampleOptions options)
    : choice_rng_(derive_seed(seed, 0)), options_(options) {
  if (plan.entries.empty()) throw ConfigError("mixture plan is empty");
  if (sources.size() != plan.entries.size()) throw ConfigError("every plan dataset needs a source");
  double running = 0.0;
  for (std::size_t k = 0; k < plan.entries.size(); ++k) {
    const auto& entry = plan.entries[k];
    if (sources[k].empty()) throw ConfigError("dataset '" + entry.stat.name + "' has no examples");
    running += entry.ratio;
    names_.push_back(entry.stat.name);
    cumulative_.push_back(running);
    cursors_.push_back(Cursor{sources[k], {}, 0, 0, Rng(derive_seed(seed, k + 1))});
    reshuffle(cursors_.back());
  }
}

void MixtureSampler::reshuffle(Cursor& cursor) {
  cursor.order.resize(cursor.examples.size());
  for (std::size_t i = 0; i < cursor.order.size(); ++i) cursor.order[i] = i;
  for (std::size_t i = cursor.order.size(); i > 1; --i) std::swap(cursor.order[i - 1], cursor.order[cursor.rng.below(i)]);
  cursor.position = 0;
}

MixtureSampler::Draw MixtureSampler::next() {
  double u = choice_rng_.unit() * cumulative_.back();
  std::size_t k = 0;
  while (k + 1 < cumulative_.size() && u >= cumulative_[k]) ++k;

  Cursor& cursor = cursors_[k];
  if (cursor.position == cursor.order.size()) {
    if (!options_.allow_repeats)
      throw StreamError("dataset '" + names_[k] + "' is exhausted and repeats are disabled");
    ++cursor.epoch;
    reshuffle(cursor);
  }
  return Draw{k, &cursor.examples[cursor.order[cursor.position++]]};
}

std::vector<Example> sample_stream(const MixturePlan& plan, std::vector<std::span<const Example>> sources,
                                   std::size_t total, std::uint64_t seed, SampleOptions options) {
  if (total < 1) throw ConfigError("total must be >= 1");
  MixtureSampler sampler(plan, std::move(sources), seed, options);
  std::vector<Example> out;
  out.reserve(total);
  for (std::size_t i = 0; i < total; ++i) out.push_back(*sampler.next().example);
  return out;
}

}  // namespace nrot
