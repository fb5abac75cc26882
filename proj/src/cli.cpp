#include "nrot/cli.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "nrot/corpus.hpp"
#include "nrot/drop.hpp"
#include "nrot/error.hpp"
#include "nrot/eval.hpp"
#include "nrot/mixer.hpp"
#include "nrot/numgen.hpp"
#include "nrot/pipeline.hpp"
#include "nrot/schedule.hpp"
#include "nrot/txtgen.hpp"

#ifndef NROT_VERSION
#define NROT_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;

namespace nrot::cli {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

const std::string kOutputGroup = "Output";

// Output sink that only becomes visible on commit(): a temp file renamed into
// place, or a buffer flushed to stdout.
class Output {
public:
  Output(std::string path, std::ostream& stdout_stream) : path_(std::move(path)), stdout_(stdout_stream) {
    if (path_ == "-") return;
    static std::atomic<unsigned> counter{0};
    fs::path target(path_);
    fs::path dir = target.parent_path().empty() ? fs::path(".") : target.parent_path();
    if (const char* override_dir = std::getenv("NROT_TMPDIR"); override_dir && *override_dir) dir = override_dir;
    tmp_ = dir / ("." + target.filename().string() + ".tmp-" + std::to_string(::getpid()) + "-" +
                  std::to_string(counter++));
    file_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!file_) throw IoError("cannot create temporary file " + tmp_.string());
  }

  Output(const Output&) = delete;
  Output& operator=(const Output&) = delete;

  ~Output() {
    if (!committed_ && !tmp_.empty()) {
      file_.close();
      std::error_code ec;
      fs::remove(tmp_, ec);
    }
  }

  std::ostream& stream() { return path_ == "-" ? static_cast<std::ostream&>(buffer_) : file_; }

  void commit() {
    if (path_ == "-") {
      stdout_ << buffer_.str();
      stdout_.flush();
      if (!stdout_) throw IoError("failed writing to standard output");
      committed_ = true;
      return;
    }
    file_.flush();
    if (!file_) throw IoError("failed writing " + tmp_.string());
    file_.close();
    std::error_code ec;
    fs::rename(tmp_, path_, ec);
    if (ec) {
      // NROT_TMPDIR may be on another filesystem.
      fs::path staged = fs::path(path_).parent_path() / (fs::path(tmp_).filename().string() + ".x");
      if (!fs::copy_file(tmp_, staged, fs::copy_options::overwrite_existing, ec) || (fs::rename(staged, path_, ec), ec)) {
        fs::remove(staged, ec);
        throw IoError("cannot move output into place at " + path_);
      }
      fs::remove(tmp_, ec);
    }
    committed_ = true;
  }

private:
  std::string path_;
  std::ostream& stdout_;
  fs::path tmp_;
  std::ofstream file_;
  std::ostringstream buffer_;
  bool committed_ = false;
};

void check_input(const std::string& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw IoError("input file not found: " + path);
  std::ifstream probe(path);
  if (!probe) throw IoError("cannot read " + path);
}

void check_output(const std::string& path) {
  if (path == "-") return;
  fs::path parent = fs::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty() && !fs::is_directory(parent, ec)) throw IoError("output directory does not exist: " + parent.string());
  if (fs::is_directory(path, ec)) throw IoError("output path is a directory: " + path);
}

std::string read_file(const std::string& path) {
  check_input(path);
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path);
  return ss.str();
}

nlohmann::json load_json(const std::string& path) {
  std::string text = read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what(), e.byte);
  }
}

std::vector<Example> load_examples(const std::string& path) {
  check_input(path);
  std::ifstream in(path, std::ios::binary);
  return read_examples(in);
}

IngestResult<DropRecord> load_drop(const std::string& path) {
  check_input(path);
  std::ifstream in(path, std::ios::binary);
  return ingest_drop(in);
}

std::pair<std::string, std::string> split_assignment(const std::string& text, const std::string& flag) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(flag + " expects NAME=VALUE, got '" + text + "'");
  return {text.substr(0, eq), text.substr(eq + 1)};
}

template <typename T>
T parse_number(const std::string& text, const std::string& flag) {
  std::istringstream ss(text);
  T value;
  if (!(ss >> value) || !ss.eof()) throw ConfigError(flag + ": '" + text + "' is not a number");
  return value;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct RunInfo {
  std::string command;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
};

nlohmann::ordered_json meta_json(const RunInfo& info) {
  return {{"tool", std::string(kToolName)},
          {"version", NROT_VERSION},
          {"command", info.command},
          {"seed", info.seed},
          {"config_hash", hex64(info.config_hash)}};
}

std::string meta_line(const RunInfo& info) {
  nlohmann::ordered_json j;
  j["_meta"] = meta_json(info);
  return j.dump();
}

nlohmann::ordered_json with_meta(const RunInfo& info, const nlohmann::ordered_json& body) {
  nlohmann::ordered_json j;
  j["_meta"] = meta_json(info);
  for (const auto& [key, value] : body.items()) j[key] = value;
  return j;
}

// Effective subcommand settings minus output paths, so runs that differ only
// in where they write share a hash.
std::uint64_t config_hash(const CLI::App& sub, std::uint64_t seed) {
  std::string canon = sub.get_name() + "\nseed=" + std::to_string(seed);
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_group() == kOutputGroup || opt == sub.get_help_ptr()) continue;
    canon += "\n" + opt->get_name() + "=";
    if (opt->count() > 0) {
      const auto& results = opt->results();
      for (std::size_t i = 0; i < results.size(); ++i) canon += (i ? "\x1f" : "") + results[i];
    } else {
      canon += opt->get_default_str();
    }
  }
  return fnv1a64(canon);
}

struct Settings {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool dump_config = false;

  // gen-num / gen-txt
  std::size_t count = 0;
  std::string out = "-";
  std::string format = "raw";
  std::string families;
  std::size_t shard_size = 4096;
  unsigned avg_frac_digits = 2;
  std::string vocab;
  unsigned min_events = 2;
  unsigned max_events = 6;
  unsigned max_quantity = 20;
  bool fractional = false;
  unsigned frac_digits = 1;

  // ingest / derive-class / audit / score
  std::string input;
  std::string kind = "drop";
  std::string span_separator = "; ";
  std::string skipped;
  std::size_t encoder_max = 512;
  std::size_t decoder_max = 54;
  std::string counter = "digits";
  std::string gold;
  std::string pred;
  bool round_f1 = false;
  bool no_numeric_gate = false;
  bool per_question = false;

  // mix
  std::vector<std::string> sources;
  std::vector<std::string> sizes;
  std::vector<std::string> scales;
  std::vector<std::string> caps;
  double temperature = 1.0;
  std::size_t total = 0;
  bool no_repeats = false;
  std::string stream_out;
  std::string plan_out;

  // lr-table
  LrConfig lr;
  std::string lr_config;

  // pipeline
  std::string pipeline_name;
  std::string spec;
  bool list = false;
  std::string stats;
  std::uint64_t batch_size = 32;
  std::string shard_dir;
};

void add_output(CLI::App* sub, const std::string& name, std::string& target, const std::string& help,
                bool required = false) {
  auto* opt = sub->add_option(name, target, help)->group(kOutputGroup);
  if (required) opt->required();
}

// ---------------------------------------------------------------------------
// Commands

int cmd_gen_num(const Settings& s, const RunInfo& info, std::ostream& stdout_stream, const CLI::App& sub) {
  if (s.format != "raw" && s.format != "corpus") throw ConfigError("--format must be raw or corpus");
  check_output(s.out);
  NumGenConfig cfg = s.families.empty() ? NumGenConfig::defaults() : num_config_from_json(load_json(s.families));
  cfg.shard_size = s.shard_size;
  cfg.threads = s.threads;
  if (s.families.empty() || sub.get_option("--avg-frac-digits")->count()) cfg.avg_frac_digits = s.avg_frac_digits;
  if (s.count < 1) throw ConfigError("--count must be >= 1");

  Output out(s.out, stdout_stream);
  out.stream() << meta_line(info) << '\n';
  generate_num(s.count, cfg, info.seed, [&](std::size_t i, const NumExample& ex) {
    if (s.format == "raw") out.stream() << to_json(ex).dump() << '\n';
    else out.stream() << to_jsonl_line(to_example(ex, i)) << '\n';
  });
  out.commit();
  return 0;
}

int cmd_gen_txt(const Settings& s, const RunInfo& info, std::ostream& stdout_stream) {
  if (s.format != "raw" && s.format != "corpus") throw ConfigError("--format must be raw or corpus");
  check_output(s.out);
  TxtGenConfig cfg;
  if (!s.vocab.empty()) cfg.vocab = vocab_from_json(load_json(s.vocab));
  cfg.min_events = s.min_events;
  cfg.max_events = s.max_events;
  cfg.max_quantity = s.max_quantity;
  cfg.fractional = s.fractional;
  cfg.frac_digits = s.frac_digits;
  cfg.shard_size = s.shard_size;
  cfg.threads = s.threads;
  if (s.count < 1) throw ConfigError("--count must be >= 1");

  Output out(s.out, stdout_stream);
  out.stream() << meta_line(info) << '\n';
  generate_txt(s.count, cfg, info.seed, [&](std::size_t i, const TxtExample& ex) {
    if (s.format == "raw") out.stream() << to_json(ex).dump() << '\n';
    else out.stream() << to_jsonl_line(to_example(ex, i)) << '\n';
  });
  out.commit();
  return 0;
}

int cmd_ingest(const Settings& s, const RunInfo& info, std::ostream& stdout_stream, std::ostream& err) {
  if (s.kind != "drop" && s.kind != "squad") throw ConfigError("--kind must be drop or squad");
  check_input(s.input);
  check_output(s.out);
  if (!s.skipped.empty()) check_output(s.skipped);

  std::vector<Example> examples;
  std::vector<IngestIssue> issues;
  if (s.kind == "drop") {
    auto result = load_drop(s.input);
    for (const auto& r : result.records) examples.push_back(make_answer_example(r, s.span_separator));
    auto counts = count_answer_types(result.records);
    for (const auto& [type, n] : counts) err << to_string(type) << ": " << n << '\n';
    issues = std::move(result.errors);
  } else {
    std::ifstream in(s.input, std::ios::binary);
    auto result = ingest_squad(in);
    for (const auto& r : result.records) examples.push_back(make_squad_example(r));
    issues = std::move(result.errors);
  }
  err << "ingested " << examples.size() << " examples, skipped " << issues.size() << '\n';

  Output out(s.out, stdout_stream);
  out.stream() << meta_line(info) << '\n';
  write_examples(examples, out.stream());
  std::optional<Output> skipped;
  if (!s.skipped.empty()) {
    skipped.emplace(s.skipped, stdout_stream);
    skipped->stream() << meta_line(info) << '\n';
    for (const auto& issue : issues)
      skipped->stream() << nlohmann::ordered_json{{"id", issue.question_id}, {"message", issue.message}}.dump() << '\n';
  }
  out.commit();
  if (skipped) skipped->commit();
  return 0;
}

int cmd_derive_class(const Settings& s, const RunInfo& info, std::ostream& stdout_stream) {
  check_input(s.input);
  check_output(s.out);
  auto result = load_drop(s.input);
  Output out(s.out, stdout_stream);
  out.stream() << meta_line(info) << '\n';
  for (const auto& r : result.records) out.stream() << to_jsonl_line(make_classification_example(r)) << '\n';
  out.commit();
  return 0;
}

int cmd_mix(const Settings& s, const RunInfo& info, std::ostream& stdout_stream) {
  if (s.sources.empty() == s.sizes.empty()) throw ConfigError("give either --source or --size entries");
  if (s.total > 0 && s.sources.empty()) throw ConfigError("--total needs --source datasets");
  if (s.total > 0 && s.stream_out.empty()) throw ConfigError("--total needs --out");
  if (!s.stream_out.empty()) check_output(s.stream_out);
  if (!s.plan_out.empty()) check_output(s.plan_out);

  std::vector<DatasetStat> stats;
  std::vector<std::vector<Example>> data;
  std::map<std::string, std::size_t> index;
  auto add = [&](const std::string& name, std::uint64_t length) {
    if (!index.emplace(name, stats.size()).second) throw ConfigError("dataset '" + name + "' given twice");
    stats.push_back(DatasetStat{name, length, 1.0, std::nullopt});
  };
  for (const auto& entry : s.sources) {
    auto [name, path] = split_assignment(entry, "--source");
    check_input(path);
    data.push_back(load_examples(path));
    add(name, data.back().size());
  }
  for (const auto& entry : s.sizes) {
    auto [name, n] = split_assignment(entry, "--size");
    add(name, parse_number<std::uint64_t>(n, "--size"));
  }
  auto lookup = [&](const std::string& name, const std::string& flag) -> DatasetStat& {
    auto it = index.find(name);
    if (it == index.end()) throw ConfigError(flag + " names unknown dataset '" + name + "'");
    return stats[it->second];
  };
  for (const auto& entry : s.scales) {
    auto [name, v] = split_assignment(entry, "--scale");
    lookup(name, "--scale").scale = parse_number<double>(v, "--scale");
  }
  for (const auto& entry : s.caps) {
    auto [name, v] = split_assignment(entry, "--cap");
    lookup(name, "--cap").cap = parse_number<double>(v, "--cap");
  }

  MixturePlan plan = compute_plan(stats, s.temperature);
  std::optional<Output> stream_out;
  if (s.total > 0) {
    std::vector<std::span<const Example>> sources(data.begin(), data.end());
    SampleOptions options;
    options.allow_repeats = !s.no_repeats;
    auto stream = sample_stream(plan, sources, s.total, info.seed, options);
    stream_out.emplace(s.stream_out, stdout_stream);
    stream_out->stream() << meta_line(info) << '\n';
    write_examples(stream, stream_out->stream());
  }
  std::optional<Output> plan_out;
  std::string plan_path = !s.plan_out.empty() ? s.plan_out : (s.total > 0 ? "" : "-");
  if (!plan_path.empty()) {
    plan_out.emplace(plan_path, stdout_stream);
    plan_out->stream() << with_meta(info, to_json(plan)).dump(2) << '\n';
  }
  if (stream_out) stream_out->commit();
  if (plan_out) plan_out->commit();
  return 0;
}

int cmd_lr_table(const Settings& s, const RunInfo& info, std::ostream& stdout_stream, const CLI::App& sub) {
  check_output(s.out);
  LrConfig cfg = s.lr_config.empty() ? LrConfig{} : lr_config_from_json(load_json(s.lr_config));
  auto given = [&](const char* name) { return s.lr_config.empty() || sub.get_option(name)->count() > 0; };
  if (given("--warmup-start")) cfg.warmup_start = s.lr.warmup_start;
  if (given("--warmup-end")) cfg.warmup_end = s.lr.warmup_end;
  if (given("--decay-rate")) cfg.decay_rate = s.lr.decay_rate;
  if (given("--epochs")) cfg.total_epochs = s.lr.total_epochs;
  if (given("--batches-per-epoch")) cfg.batches_per_epoch = s.lr.batches_per_epoch;
  if (given("--warmup-fraction")) cfg.warmup_fraction = s.lr.warmup_fraction;
  LrSchedule schedule(cfg);

  Output out(s.out, stdout_stream);
  out.stream() << "# " << meta_json(info).dump() << '\n';
  emit_table(schedule, out.stream());
  out.commit();
  return 0;
}

int cmd_audit(const Settings& s, const RunInfo& info, std::ostream& stdout_stream) {
  if (s.counter != "digits" && s.counter != "words") throw ConfigError("--counter must be digits or words");
  check_output(s.out);
  auto examples = load_examples(s.input);
  LengthLimits limits{s.encoder_max, s.decoder_max};
  AuditReport rep = audit_truncation(examples, limits, s.counter == "digits" ? TokenCounter(count_digit_tokens)
                                                                             : TokenCounter(count_words));
  nlohmann::ordered_json body{{"total", rep.total},
                              {"counter", s.counter},
                              {"encoder_max", limits.encoder_max},
                              {"decoder_max", limits.decoder_max},
                              {"encoder_cutoff_count", rep.encoder_cutoff_count},
                              {"encoder_cutoff_fraction", rep.encoder_cutoff_fraction},
                              {"decoder_cutoff_count", rep.decoder_cutoff_count},
                              {"decoder_cutoff_fraction", rep.decoder_cutoff_fraction}};
  Output out(s.out, stdout_stream);
  out.stream() << with_meta(info, body).dump(2) << '\n';
  out.commit();
  return 0;
}

int cmd_score(const Settings& s, const RunInfo& info, std::ostream& stdout_stream) {
  check_input(s.gold);
  check_input(s.pred);
  check_output(s.out);
  EvalOptions options;
  options.span_delimiter = s.span_separator;
  options.round_f1 = s.round_f1;
  options.numeric_gate = !s.no_numeric_gate;

  auto gold = load_drop(s.gold);
  std::ifstream pred_in(s.pred, std::ios::binary);
  auto predictions = read_predictions(pred_in, options.span_delimiter);
  ScoreReport rep = report(gold.records, predictions, options);

  Output out(s.out, stdout_stream);
  out.stream() << with_meta(info, to_json(rep, s.per_question)).dump(2) << '\n';
  out.commit();
  return 0;
}

int cmd_pipeline(const Settings& s, const RunInfo& info, std::ostream& stdout_stream) {
  check_output(s.out);
  if (s.list) {
    nlohmann::ordered_json body;
    body["pipelines"] = nlohmann::ordered_json::array();
    for (const auto& p : builtin_pipelines()) body["pipelines"].push_back(to_json(p));
    Output out(s.out, stdout_stream);
    out.stream() << with_meta(info, body).dump(2) << '\n';
    out.commit();
    return 0;
  }
  if (s.pipeline_name.empty() == s.spec.empty()) throw ConfigError("give exactly one of --name or --spec");
  PipelineSpec spec;
  if (!s.spec.empty()) {
    spec = pipeline_from_json(load_json(s.spec));
  } else {
    auto found = find_builtin_pipeline(s.pipeline_name);
    if (!found) throw ConfigError("unknown pipeline '" + s.pipeline_name + "'");
    spec = *found;
  }

  std::vector<DatasetStat> stats;
  auto add = [&](const std::string& name, std::uint64_t length) {
    for (const auto& st : stats)
      if (st.name == name) throw ConfigError("dataset '" + name + "' given twice");
    stats.push_back(DatasetStat{name, length, 1.0, std::nullopt});
  };
  if (!s.stats.empty()) {
    nlohmann::json j = load_json(s.stats);
    if (!j.is_object()) throw ConfigError("--stats must hold an object of dataset sizes");
    for (const auto& [name, value] : j.items()) {
      if (!value.is_number_unsigned()) throw ConfigError("dataset size for '" + name + "' must be a positive integer");
      add(name, value.get<std::uint64_t>());
    }
  }
  for (const auto& entry : s.sizes) {
    auto [name, n] = split_assignment(entry, "--size");
    add(name, parse_number<std::uint64_t>(n, "--size"));
  }
  if (stats.empty()) throw ConfigError("pipeline expansion needs dataset sizes (--stats or --size)");

  Manifest manifest = expand(spec, stats, s.batch_size, info.seed, s.shard_dir);
  Output out(s.out, stdout_stream);
  out.stream() << with_meta(info, to_json(manifest)).dump(2) << '\n';
  out.commit();
  return 0;
}

// Global options plus the chosen subcommand's section; list options that were
// never given are left out so the file parses back to the same state.
std::string dump_config(const CLI::App& app, const CLI::App& sub) {
  std::istringstream all(app.config_to_str(true, false));
  const std::string prefix = sub.get_name() + ".";
  std::string out, line;
  while (std::getline(all, line)) {
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    if (key.find('.') != std::string::npos) {
      if (key.compare(0, prefix.size(), prefix) != 0) continue;
      const CLI::Option* opt = sub.get_option_no_throw("--" + key.substr(prefix.size()));
      if (opt && opt->count() == 0 && opt->get_items_expected_max() > 1) continue;
    }
    out += line + '\n';
  }
  return out;
}

int dispatch(CLI::App& app, const Settings& s, std::ostream& out, std::ostream& err) {
  CLI::App* sub = app.get_subcommands().front();
  RunInfo info{sub->get_name(), s.seed, config_hash(*sub, s.seed)};
  const std::string& name = info.command;
  if (name == "gen-num") return cmd_gen_num(s, info, out, *sub);
  if (name == "gen-txt") return cmd_gen_txt(s, info, out);
  if (name == "ingest") return cmd_ingest(s, info, out, err);
  if (name == "derive-class") return cmd_derive_class(s, info, out);
  if (name == "mix") return cmd_mix(s, info, out);
  if (name == "lr-table") return cmd_lr_table(s, info, out, *sub);
  if (name == "audit") return cmd_audit(s, info, out);
  if (name == "score") return cmd_score(s, info, out);
  if (name == "pipeline") return cmd_pipeline(s, info, out);
  throw ConfigError("unhandled subcommand " + name);
}

void build(CLI::App& app, Settings& s) {
  app.option_defaults()->always_capture_default();
  app.fallthrough();
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "Read options from a TOML config file; flags given on the command line win");
  app.add_flag("--dump-config", s.dump_config, "Print the effective options as a config file and exit")
      ->configurable(false);
  app.add_option("--seed", s.seed, "Root seed for all randomness");
  app.add_option("--threads", s.threads, "Worker threads for sharded generation")->check(CLI::Range(1u, 1024u));

  auto* num = app.add_subcommand("gen-num", "Generate arithmetic expression examples");
  num->add_option("--count", s.count, "Number of examples")->required();
  add_output(num, "--out", s.out, "Output JSONL path or - for stdout", true);
  num->add_option("--format", s.format, "raw ({expression, answer, family, seed}) or corpus")
      ->check(CLI::IsMember({"raw", "corpus"}));
  num->add_option("--families", s.families, "JSON file with template families and ranges");
  num->add_option("--shard-size", s.shard_size, "Examples per seed shard")->check(CLI::PositiveNumber);
  num->add_option("--avg-frac-digits", s.avg_frac_digits, "Fraction digits kept by avg()");

  auto* txt = app.add_subcommand("gen-txt", "Generate world-state word problems");
  txt->add_option("--count", s.count, "Number of examples")->required();
  add_output(txt, "--out", s.out, "Output JSONL path or - for stdout", true);
  txt->add_option("--format", s.format, "raw ({context, question, answer, events, seed, query}) or corpus")
      ->check(CLI::IsMember({"raw", "corpus"}));
  txt->add_option("--vocab", s.vocab, "JSON file with names and templates");
  txt->add_option("--min-events", s.min_events, "Fewest events per narrative");
  txt->add_option("--max-events", s.max_events, "Most events per narrative");
  txt->add_option("--max-quantity", s.max_quantity, "Largest quantity in one event");
  txt->add_flag("--fractional", s.fractional, "Draw quantities on a decimal grid");
  txt->add_option("--frac-digits", s.frac_digits, "Fraction digits for --fractional");
  txt->add_option("--shard-size", s.shard_size, "Examples per seed shard")->check(CLI::PositiveNumber);

  auto* ingest = app.add_subcommand("ingest", "Convert DROP or SQuAD JSON into corpus JSONL");
  ingest->add_option("--input", s.input, "DROP or SQuAD JSON file")->required();
  ingest->add_option("--kind", s.kind, "drop or squad")->check(CLI::IsMember({"drop", "squad"}));
  ingest->add_option("--span-separator", s.span_separator, "Separator between answer spans in targets");
  add_output(ingest, "--out", s.out, "Output JSONL path or - for stdout", true);
  add_output(ingest, "--skipped", s.skipped, "Optional JSONL listing skipped questions");

  auto* cls = app.add_subcommand("derive-class", "Answer-type classification examples from DROP JSON");
  cls->add_option("--input", s.input, "DROP JSON file")->required();
  add_output(cls, "--out", s.out, "Output JSONL path or - for stdout", true);

  auto* mix = app.add_subcommand("mix", "Temperature-scaled mixture plan and sampled stream");
  mix->add_option("--source", s.sources, "NAME=PATH corpus JSONL; repeatable");
  mix->add_option("--size", s.sizes, "NAME=COUNT for a plan without data; repeatable");
  mix->add_option("--scale", s.scales, "NAME=FACTOR size multiplier; repeatable");
  mix->add_option("--cap", s.caps, "NAME=LIMIT bound on scaled size; repeatable");
  mix->add_option("--temperature", s.temperature, "Mixing temperature T");
  mix->add_option("--total", s.total, "Examples to sample (0 writes the plan only)");
  mix->add_flag("--no-repeats", s.no_repeats, "Fail instead of reshuffling an exhausted dataset");
  add_output(mix, "--out", s.stream_out, "Sampled stream JSONL path or -");
  add_output(mix, "--plan-out", s.plan_out, "Plan JSON path or - (default: stdout when no stream)");

  auto* lr = app.add_subcommand("lr-table", "Learning-rate table as CSV");
  lr->add_option("--epochs", s.lr.total_epochs, "Total epochs");
  lr->add_option("--batches-per-epoch", s.lr.batches_per_epoch, "Batches per epoch");
  lr->add_option("--warmup-start", s.lr.warmup_start, "Rate at batch 0");
  lr->add_option("--warmup-end", s.lr.warmup_end, "Rate at the last warmup batch");
  lr->add_option("--decay-rate", s.lr.decay_rate, "Inverse-time decay per epoch");
  lr->add_option("--warmup-fraction", s.lr.warmup_fraction, "Share of epochs spent warming up");
  lr->add_option("--lr-config", s.lr_config, "JSON file with the schedule fields");
  add_output(lr, "--out", s.out, "CSV path or -");

  auto* audit = app.add_subcommand("audit", "Count inputs and targets over the length limits");
  audit->add_option("--input", s.input, "Corpus JSONL file")->required();
  audit->add_option("--encoder-max", s.encoder_max, "Encoder token limit");
  audit->add_option("--decoder-max", s.decoder_max, "Decoder token limit");
  audit->add_option("--counter", s.counter, "digits or words")->check(CLI::IsMember({"digits", "words"}));
  add_output(audit, "--out", s.out, "Report JSON path or -");

  auto* score = app.add_subcommand("score", "EM and numeracy-gated F1 against DROP gold");
  score->add_option("--gold", s.gold, "DROP JSON file")->required();
  score->add_option("--pred", s.pred, "Predictions JSONL {id, prediction}")->required();
  score->add_option("--span-delimiter", s.span_separator, "Separator between predicted spans");
  score->add_flag("--round-f1", s.round_f1, "Round question F1 to two decimals");
  score->add_flag("--no-numeric-gate", s.no_numeric_gate, "Plain bag F1 without the number check");
  score->add_flag("--per-question", s.per_question, "Include every question in the report");
  add_output(score, "--out", s.out, "Report JSON path or -");

  auto* pipe = app.add_subcommand("pipeline", "Expand a training pipeline into stage plans");
  pipe->add_option("--name", s.pipeline_name, "Built-in pipeline name");
  pipe->add_option("--spec", s.spec, "JSON pipeline spec file");
  pipe->add_flag("--list", s.list, "Print the built-in pipelines");
  pipe->add_option("--stats", s.stats, "JSON object of dataset sizes");
  pipe->add_option("--size", s.sizes, "NAME=COUNT dataset size; repeatable");
  pipe->add_option("--batch-size", s.batch_size, "Examples per batch")->check(CLI::PositiveNumber);
  pipe->add_option("--shard-dir", s.shard_dir, "Directory prefix for stage shard paths");
  add_output(pipe, "--out", s.out, "Manifest JSON path or -");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical reasoning data tools", std::string(kToolName)};
  Settings s;
  build(app, s);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  if (s.dump_config) {
    out << dump_config(app, *app.get_subcommands().front());
    return 0;
  }

  try {
    return dispatch(app, s, out, err);
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "parse error at " << e.position() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace nrot::cli
