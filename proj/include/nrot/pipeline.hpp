#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nrot/mixer.hpp"

namespace nrot {

struct StageSpec {
  std::string name;
  std::vector<std::string> datasets;
  std::vector<std::string> validation;  // empty means every dataset in the stage
  double temperature = 1.0;
  EpochMode mode = EpochMode::cover_all_epoch;
  std::string reference = "DROP";  // epoch reference for drop_epoch_exception

  std::vector<std::string> validation_sets() const { return validation.empty() ? datasets : validation; }
};

struct PipelineSpec {
  std::string name;
  std::vector<StageSpec> stages;
};

/// DROP, DROP-class, NUM, TXT, SQuAD.
const std::vector<std::string>& builtin_dataset_names();

/// Throws ValidationError for an empty pipeline, duplicate stage names, an
/// empty or repeated dataset list, T <= 0, or datasets outside `known`.
void validate(const PipelineSpec& spec, const std::vector<std::string>& known = builtin_dataset_names());

/// Validation-1, Validation-2, RC-1, RC-2 and Multitask.
std::vector<PipelineSpec> builtin_pipelines();
std::optional<PipelineSpec> find_builtin_pipeline(const std::string& name);

struct StagePlan {
  std::size_t index = 0;
  StageSpec stage;
  MixturePlan plan;
  std::uint64_t steps = 0;
  std::uint64_t examples = 0;  // steps * batch_size
  std::uint64_t seed = 0;      // derive_seed(pipeline seed, index)
  std::string shard_path;
  std::optional<std::string> init_from;  // previous stage name
};

struct Manifest {
  std::string pipeline;
  std::uint64_t batch_size = 0;
  std::uint64_t seed = 0;
  std::vector<StagePlan> stages;
};

/// Mixture plan, step count and output shard for each stage, in order.
/// Every referenced dataset needs an entry in `stats`.
Manifest expand(const PipelineSpec& spec, const std::vector<DatasetStat>& stats, std::uint64_t batch_size,
                std::uint64_t seed, const std::string& out_dir = "");

nlohmann::ordered_json to_json(const StageSpec& stage);
nlohmann::ordered_json to_json(const PipelineSpec& spec);
nlohmann::ordered_json to_json(const Manifest& manifest);
PipelineSpec pipeline_from_json(const nlohmann::json& j);

}  // namespace nrot
