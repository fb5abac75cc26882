#include "nrot/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "nrot/error.hpp"
#include "nrot/rng.hpp"

namespace nrot {

const std::vector<std::string>& builtin_dataset_names() {
  static const std::vector<std::string> names{"DROP", "DROP-class", "NUM", "TXT", "SQuAD"};
  return names;
}

void validate(const PipelineSpec& spec, const std::vector<std::string>& known) {
  if (spec.name.empty()) throw ValidationError("pipeline needs a name");
  if (spec.stages.empty()) throw ValidationError("pipeline '" + spec.name + "' has no stages");
  const std::set<std::string> known_set(known.begin(), known.end());
  std::set<std::string> stage_names;
  for (const auto& stage : spec.stages) {
    const std::string where = "stage '" + stage.name + "' of pipeline '" + spec.name + "'";
    if (stage.name.empty()) throw ValidationError("pipeline '" + spec.name + "' has an unnamed stage");
    if (!stage_names.insert(stage.name).second) throw ValidationError("duplicate " + where);
    if (stage.datasets.empty()) throw ValidationError(where + " has no datasets");
    if (!(stage.temperature > 0.0)) throw ValidationError(where + " needs temperature > 0");
    std::set<std::string> seen;
    for (const auto& d : stage.datasets) {
      if (!known_set.count(d)) throw ValidationError(where + " references unknown dataset '" + d + "'");
      if (!seen.insert(d).second) throw ValidationError(where + " lists dataset '" + d + "' twice");
    }
    for (const auto& d : stage.validation)
      if (!known_set.count(d)) throw ValidationError(where + " validates on unknown dataset '" + d + "'");
    if (stage.mode == EpochMode::drop_epoch_exception && !seen.count(stage.reference))
      throw ValidationError(where + " uses reference dataset '" + stage.reference + "' which it does not train on");
  }
}

namespace {

StageSpec stage(std::string name, std::vector<std::string> datasets, std::vector<std::string> validation = {}) {
  StageSpec s;
  s.name = std::move(name);
  s.datasets = std::move(datasets);
  s.validation = std::move(validation);
  return s;
}

std::string slug(const std::string& text) {
  std::string out;
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    out += std::isalnum(u) ? static_cast<char>(std::tolower(u)) : '-';
  }
  return out;
}

}  // namespace

std::vector<PipelineSpec> builtin_pipelines() {
  const StageSpec finetune_class = stage("finetune-class", {"DROP", "DROP-class"});
  const StageSpec finetune_drop = stage("finetune-drop", {"DROP"});

  PipelineSpec v1{"Validation-1",
                  {stage("pretrain-num", {"DROP", "NUM"}, {"DROP"}), stage("pretrain-txt", {"DROP", "TXT"}, {"DROP"}),
                   finetune_class, finetune_drop}};
  const StageSpec num_own = stage("pretrain-num", {"DROP", "NUM"}, {"NUM"});
  const StageSpec txt_own = stage("pretrain-txt", {"DROP", "TXT"}, {"TXT"});
  PipelineSpec v2{"Validation-2", {num_own, txt_own, finetune_class, finetune_drop}};
  PipelineSpec rc1{"RC-1", {num_own, txt_own, stage("pretrain-squad", {"DROP", "SQuAD"}), finetune_class, finetune_drop}};
  PipelineSpec rc2{"RC-2", {num_own, txt_own, stage("finetune-class-squad", {"DROP", "DROP-class", "SQuAD"}), finetune_drop}};

  StageSpec all = stage("multitask", {"DROP", "TXT", "NUM", "SQuAD"}, {"DROP"});
  all.temperature = 10.0;
  all.mode = EpochMode::drop_epoch_exception;
  PipelineSpec multitask{"Multitask", {all, finetune_class, finetune_drop}};

  return {v1, v2, rc1, rc2, multitask};
}

std::optional<PipelineSpec> find_builtin_pipeline(const std::string& name) {
  for (auto& p : builtin_pipelines())
    if (p.name == name) return p;
  return std::nullopt;
}

Manifest expand(const PipelineSpec& spec, const std::vector<DatasetStat>& stats, std::uint64_t batch_size,
                std::uint64_t seed, const std::string& out_dir) {
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  std::vector<std::string> known;
  for (const auto& s : stats) known.push_back(s.name);
  validate(spec, known);

  Manifest m;
  m.pipeline = spec.name;
  m.batch_size = batch_size;
  m.seed = seed;
  const std::string prefix = out_dir.empty() ? "" : (out_dir.back() == '/' ? out_dir : out_dir + "/");
  for (std::size_t i = 0; i < spec.stages.size(); ++i) {
    const StageSpec& st = spec.stages[i];
    std::vector<DatasetStat> stage_stats;
    for (const auto& name : st.datasets)
      stage_stats.push_back(*std::find_if(stats.begin(), stats.end(), [&](const DatasetStat& s) { return s.name == name; }));

    StagePlan p;
    p.index = i;
    p.stage = st;
    p.plan = compute_plan(stage_stats, st.temperature);
    p.steps = steps_per_epoch(stage_stats, batch_size, st.mode, st.reference);
    p.examples = p.steps * batch_size;
    p.seed = derive_seed(seed, i);
    p.shard_path = prefix + slug(spec.name) + "/stage" + std::to_string(i + 1) + "-" + slug(st.name) + ".jsonl";
    if (i > 0) p.init_from = spec.stages[i - 1].name;
    m.stages.push_back(std::move(p));
  }
  return m;
}

nlohmann::ordered_json to_json(const StageSpec& s) {
  nlohmann::ordered_json j;
  j["name"] = s.name;
  j["datasets"] = s.datasets;
  j["validation"] = s.validation_sets();
  j["temperature"] = s.temperature;
  j["mode"] = std::string(to_string(s.mode));
  j["reference"] = s.reference;
  return j;
}

nlohmann::ordered_json to_json(const PipelineSpec& spec) {
  nlohmann::ordered_json j;
  j["name"] = spec.name;
  j["stages"] = nlohmann::ordered_json::array();
  for (const auto& s : spec.stages) j["stages"].push_back(to_json(s));
  return j;
}

nlohmann::ordered_json to_json(const Manifest& m) {
  nlohmann::ordered_json j;
  j["pipeline"] = m.pipeline;
  j["batch_size"] = m.batch_size;
  j["seed"] = m.seed;
  j["stages"] = nlohmann::ordered_json::array();
  for (const auto& p : m.stages) {
    nlohmann::ordered_json s = to_json(p.stage);
    s["index"] = p.index;
    s["plan"] = to_json(p.plan);
    s["steps"] = p.steps;
    s["examples"] = p.examples;
    s["seed"] = p.seed;
    s["shard"] = p.shard_path;
    s["init_from"] = p.init_from ? nlohmann::ordered_json(*p.init_from) : nlohmann::ordered_json(nullptr);
    j["stages"].push_back(s);
  }
  return j;
}

namespace {

std::vector<std::string> string_list(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError(what + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw ValidationError(what + " must be an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

PipelineSpec pipeline_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string() || !j.contains("stages") || !j["stages"].is_array())
    throw ValidationError("pipeline spec needs string 'name' and array 'stages'");
  PipelineSpec spec;
  spec.name = j["name"].get<std::string>();
  for (const auto& js : j["stages"]) {
    if (!js.is_object()) throw ValidationError("each stage must be an object");
    StageSpec s;
    for (const auto& [key, value] : js.items()) {
      if (key == "name") {
        if (!value.is_string()) throw ValidationError("stage name must be a string");
        s.name = value.get<std::string>();
      } else if (key == "datasets") {
        s.datasets = string_list(value, "stage datasets");
      } else if (key == "validation") {
        s.validation = string_list(value, "stage validation");
      } else if (key == "temperature") {
        if (!value.is_number()) throw ValidationError("stage temperature must be a number");
        s.temperature = value.get<double>();
      } else if (key == "mode") {
        auto mode = value.is_string() ? parse_epoch_mode(value.get<std::string>()) : std::nullopt;
        if (!mode) throw ValidationError("stage mode must be cover_all_epoch or drop_epoch_exception");
        s.mode = *mode;
      } else if (key == "reference") {
        if (!value.is_string()) throw ValidationError("stage reference must be a string");
        s.reference = value.get<std::string>();
      } else {
        throw ValidationError("unknown stage key '" + key + "'");
      }
    }
    spec.stages.push_back(std::move(s));
  }
  return spec;
}

}  // namespace nrot
