#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "l2e/curriculum.hpp"
#include "l2e/dataset.hpp"
#include "l2e/encode.hpp"
#include "l2e/errors.hpp"
#include "l2e/interp.hpp"
#include "l2e/rng.hpp"
#include "l2e/stats.hpp"
#include "l2e/train.hpp"

namespace l2e::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

const std::vector<std::string> kTasks = {"program", "addition", "memorize"};
const std::vector<std::string> kStrategies = {"baseline", "naive", "mix", "combined"};

// Desk-scale defaults; --paper-scale swaps in the full-size configuration.
constexpr int kDeskHidden = 128;
constexpr int kDeskMinibatch = 32;
constexpr int kDeskEvalInterval = 300;
constexpr int64_t kDeskEpochSize = 50000;
constexpr int64_t kDeskMaxSamples = 2000000;
constexpr int kPaperHidden = 400;
constexpr int kPaperMinibatch = 100;
constexpr int kPaperWindow = 50;
constexpr int64_t kPaperEpochSize = 500000;

std::string default_out_dir() {
  const char* env = std::getenv(kOutDirEnv);
  return env != nullptr && *env != '\0' ? std::string(env) : std::string("runs");
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

ordered_json manifest(const std::string& command, const std::vector<std::string>& args, uint64_t seed) {
  ordered_json m;
  m["command"] = command;
  m["argv"] = args;
  m["seed"] = seed;
  m["version"] = std::string(kVersion);
  m["rng"] = std::string(SplitMix64::kName);
  return m;
}

void write_manifest(const fs::path& path, const ordered_json& m) { write_text(path, m.dump(2) + "\n"); }

struct TaskOptions {
  std::string task = "program";
  int length = 4;
  int nesting = 1;
  CLI::Option* nesting_opt = nullptr;

  void add(CLI::App* app) {
    app->add_option("--task", task, "program | addition | memorize")
        ->check(CLI::IsMember(kTasks))
        ->capture_default_str();
    app->add_option("-l,--length,--max-len", length, "Target length (digits per literal or payload)")
        ->check(CLI::Range(1, 4096))
        ->capture_default_str();
    nesting_opt = app->add_option("-n,--nesting", nesting, "Target nesting (program task only)")
                      ->check(CLI::Range(1, 64))
                      ->capture_default_str();
  }

  Task parsed() const {
    const Task t = parse_task(task);
    if (t != Task::program && nesting_opt->count() > 0)
      throw UsageError("--nesting applies to the program task only");
    return t;
  }
};

struct TrainOptions {
  TaskOptions task;
  std::string strategy = "combined";
  int hidden = kDeskHidden;
  int layers = 2;
  TrainConfig train;
  CurriculumConfig curriculum;
  bool reverse = false;
  bool doubled = false;
  bool paper_scale = false;
  bool carry_state = false;
  bool log_wall_time = false;
  bool quiet = false;
  std::string precision = "f32";
  int dump_windows = 0;
  std::string out;

  CLI::Option* hidden_opt = nullptr;
  CLI::Option* batch_opt = nullptr;
  CLI::Option* window_opt = nullptr;
  CLI::Option* epoch_size_opt = nullptr;
  CLI::Option* max_samples_opt = nullptr;

  TrainOptions() {
    train.minibatch = kDeskMinibatch;
    train.eval_interval = kDeskEvalInterval;
    train.epoch_size = kDeskEpochSize;
    train.max_samples = kDeskMaxSamples;
  }

  void add(CLI::App* app) {
    task.add(app);
    hidden_opt = app->add_option("--hidden", hidden, "LSTM cells per layer")
                     ->check(CLI::PositiveNumber)
                     ->capture_default_str();
    app->add_option("--layers", layers, "LSTM layers")->check(CLI::PositiveNumber)->capture_default_str();
    batch_opt = app->add_option("--batch,--minibatch", train.minibatch, "Minibatch size (lanes)")
                    ->check(CLI::PositiveNumber)
                    ->capture_default_str();
    window_opt = app->add_option("--window", train.window, "BPTT unroll window")
                     ->check(CLI::PositiveNumber)
                     ->capture_default_str();
    app->add_option("--lr", train.lr0, "Initial learning rate")->capture_default_str();
    app->add_option("--lr-decay", train.lr_decay, "Multiplicative learning-rate decay")->capture_default_str();
    app->add_option("--lr-floor", train.lr_floor, "Stop once the learning rate drops below this")
        ->capture_default_str();
    app->add_option("--clip", train.clip_norm, "Gradient norm bound (per-sample normalized)")
        ->capture_default_str();
    app->add_option("--target-accuracy", train.target_accuracy, "Accuracy that starts the decay")
        ->capture_default_str();
    app->add_option("--max-epochs", train.max_epochs, "Memorization epochs")->capture_default_str();
    epoch_size_opt =
        app->add_option("--epoch-size", train.epoch_size, "Samples per epoch")->capture_default_str();
    max_samples_opt = app->add_option("--max-samples", train.max_samples, "Sample budget cap (0: none)")
                          ->capture_default_str();
    app->add_option("--eval-interval", train.eval_interval, "Steps between evaluations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--val-size", train.val_size, "Validation samples per difficulty")->capture_default_str();
    app->add_option("--test-size", train.test_size, "Test samples at the target")->capture_default_str();
    app->add_option("--mix-prob", curriculum.combined_mix_prob, "Mix share of the combined strategy")
        ->capture_default_str();
    app->add_option("--patience", curriculum.stall_patience, "Stalled evaluations before advancing")
        ->capture_default_str();
    app->add_option("--min-delta", curriculum.stall_min_delta, "Smallest accuracy gain that counts")
        ->capture_default_str();
    app->add_flag("--reverse", reverse, "Reverse the input");
    app->add_flag("--double", doubled, "Present the input twice");
    app->add_option("--precision", precision, "f32 | f64")
        ->check(CLI::IsMember({"f32", "f64"}))
        ->capture_default_str();
    app->add_flag("--paper-scale", paper_scale, "400 cells, batch 100, window 50, 0.5M-sample epochs, no cap");
    app->add_flag("--carry-state", carry_state, "Carry lane state across sample boundaries");
    app->add_flag("--log-wall-time", log_wall_time, "Add a wall_time column to the log");
    app->add_flag("-q,--quiet", quiet, "No progress output");
    app->add_option("--dump-windows", dump_windows, "Write the first N training windows as text")
        ->check(CLI::NonNegativeNumber);
    app->add_option("-o,--out", out, "Output directory");
  }

  void apply_paper_scale() {
    if (!paper_scale) return;
    if (hidden_opt->count() == 0) hidden = kPaperHidden;
    if (batch_opt->count() == 0) train.minibatch = kPaperMinibatch;
    if (window_opt->count() == 0) train.window = kPaperWindow;
    if (epoch_size_opt->count() == 0) train.epoch_size = kPaperEpochSize;
    if (max_samples_opt->count() == 0) train.max_samples = 0;
  }

  LstmConfig lstm() const {
    LstmConfig c;
    c.depth = layers;
    c.width = hidden;
    return c;
  }

  CurriculumConfig curriculum_for(Strategy s, Task t) const {
    CurriculumConfig c = curriculum;
    c.strategy = s;
    c.target_length = task.length;
    c.target_nesting = t == Task::program ? task.nesting : 1;
    return c;
  }

  TrainConfig train_for(uint64_t seed) const {
    TrainConfig c = train;
    c.seed = seed;
    c.precision = precision == "f64" ? Precision::f64 : Precision::f32;
    c.reset_per_sample = !carry_state;
    return c;
  }

  ordered_json snapshot() const {
    ordered_json j;
    j["task"] = task.task;
    j["length"] = task.length;
    j["nesting"] = task.nesting;
    j["hidden"] = hidden;
    j["layers"] = layers;
    j["minibatch"] = train.minibatch;
    j["window"] = train.window;
    j["lr0"] = train.lr0;
    j["lr_decay"] = train.lr_decay;
    j["lr_floor"] = train.lr_floor;
    j["clip_norm"] = train.clip_norm;
    j["target_accuracy"] = train.target_accuracy;
    j["max_epochs"] = train.max_epochs;
    j["epoch_size"] = train.epoch_size;
    j["max_samples"] = train.max_samples;
    j["eval_interval"] = train.eval_interval;
    j["val_size"] = train.val_size;
    j["test_size"] = train.test_size;
    j["combined_mix_prob"] = curriculum.combined_mix_prob;
    j["stall_patience"] = curriculum.stall_patience;
    j["stall_min_delta"] = curriculum.stall_min_delta;
    j["reverse"] = reverse;
    j["double"] = doubled;
    j["precision"] = precision;
    j["paper_scale"] = paper_scale;
    j["reset_per_sample"] = !carry_state;
    j["log_wall_time"] = log_wall_time;
    return j;
  }
};

// ---- gen ------------------------------------------------------------------

struct GenOptions {
  TaskOptions task;
  int64_t count = 1000;
  uint64_t seed = 1;
  std::string split = "any";
  std::string out;
};

int cmd_gen(GenOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  DatasetSpec spec;
  spec.task = o.task.parsed();
  spec.length = o.task.length;
  spec.nesting = o.task.nesting;
  spec.count = o.count;
  spec.seed = o.seed;
  if (o.split != "any") spec.split = parse_split(o.split);
  spec.validate();

  const fs::path path = !o.out.empty()
                            ? fs::path(o.out)
                            : fs::path(default_out_dir()) / (o.task.task + "-l" + std::to_string(spec.length) +
                                                             "-n" + std::to_string(spec.nesting) + "-s" +
                                                             std::to_string(spec.seed) + ".jsonl");
  const fs::path manifest_path = path.string() + ".manifest.json";
  ordered_json m = manifest("gen", args, spec.seed);
  m["config"] = {{"task", o.task.task}, {"length", spec.length}, {"nesting", spec.nesting},
                 {"count", spec.count}, {"split", o.split}};
  m["outputs"] = {{"dataset", path.string()}, {"manifest", manifest_path.string()}};
  write_manifest(manifest_path, m);

  const auto records = generate_dataset(spec);
  if (spec.task != Task::memorize) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      const std::string got = render_target(interp::run(records[i].sample.code));
      if (got != records[i].sample.target)
        throw std::runtime_error("record " + std::to_string(i) + ": interpreter gives " + got + ", generator " +
                                 records[i].sample.target);
    }
  }
  write_dataset_file(path.string(), records);
  out << "wrote " << records.size() << " records to " << path.string() << "\n";
  return kExitOk;
}

// ---- eval -----------------------------------------------------------------

struct EvalOptions {
  std::string file;
  bool check = false;
};

std::string read_all(const std::string& file) {
  if (file == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Programs in a plain text file, each terminated by the end marker.
std::vector<std::string> split_programs(const std::string& text) {
  std::vector<std::string> programs;
  std::string current;
  for (char c : text) {
    if (current.empty() && (c == '\n' || c == '\r' || c == ' ' || c == '\t')) continue;
    if (c == '\r') continue;
    current += c;
    if (c == kEndMarker) {
      programs.push_back(std::move(current));
      current.clear();
    }
  }
  if (current.find_first_not_of(" \t\n") != std::string::npos) programs.push_back(current);
  return programs;
}

int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
  const std::string text = read_all(o.file);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    std::istringstream in(text);
    const auto records = read_dataset(in);
    std::size_t mismatches = 0;
    for (const auto& r : records) {
      const std::string target = render_target(interp::run(r.sample.code));
      out << target << "\n";
      if (target != r.sample.target) ++mismatches;
    }
    if (o.check && mismatches > 0) {
      err << "error: " << mismatches << " of " << records.size() << " targets differ from the dataset\n";
      return kExitRuntime;
    }
    return kExitOk;
  }
  if (o.check) throw UsageError("--check needs a dataset file with stored targets");
  for (const auto& program : split_programs(text)) out << render_target(interp::run(program)) << "\n";
  return kExitOk;
}

// ---- stats ----------------------------------------------------------------

struct StatsOptions {
  TaskOptions task;
  int64_t count = 10000;
  uint64_t seed = 1;
  std::string input;
  int top = 5;
  std::string csv;
};

int cmd_stats(StatsOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  std::vector<Sample> samples;
  if (!o.input.empty()) {
    for (auto& r : read_dataset_file(o.input)) samples.push_back(std::move(r.sample));
  } else {
    DatasetSpec spec;
    spec.task = o.task.parsed();
    spec.length = o.task.length;
    spec.nesting = o.task.nesting;
    spec.count = o.count;
    spec.seed = o.seed;
    for (auto& r : generate_dataset(spec)) samples.push_back(std::move(r.sample));
  }
  if (samples.empty()) throw UsageError("no samples to analyze");
  const CharDistribution dist = analyze(samples);
  out << format_report(dist, o.top);
  if (!o.csv.empty()) {
    ordered_json m = manifest("stats", args, o.seed);
    m["config"] = {{"task", o.task.task}, {"length", o.task.length}, {"nesting", o.task.nesting},
                   {"count", o.count},    {"input", o.input},        {"top", o.top}};
    m["outputs"] = {{"csv", o.csv}};
    write_manifest(o.csv + ".manifest.json", m);
    write_text(o.csv, format_csv(dist));
  }
  return kExitOk;
}

// ---- train ----------------------------------------------------------------

struct SingleTrainOptions {
  TrainOptions common;
  uint64_t seed = 1;
};

std::string run_name(const std::string& task, const std::string& strategy, uint64_t seed) {
  return "train-" + task + "-" + strategy + "-s" + std::to_string(seed);
}

InputTransforms transforms_of(const TrainOptions& o) { return {o.reverse, o.doubled}; }

int cmd_train(SingleTrainOptions& o, const std::vector<std::string>& args, std::ostream& out,
              std::ostream& err) {
  TrainOptions& c = o.common;
  c.apply_paper_scale();
  const Task task = c.task.parsed();
  const Strategy strategy = parse_strategy(c.strategy);
  const TrainConfig train = c.train_for(o.seed);
  const CurriculumConfig curriculum = c.curriculum_for(strategy, task);
  train.validate();
  curriculum.validate();

  const fs::path dir = !c.out.empty() ? fs::path(c.out)
                                      : fs::path(default_out_dir()) / run_name(c.task.task, c.strategy, o.seed);
  const fs::path log_path = dir / "log.csv";
  const fs::path ckpt_dir = dir / "checkpoints";
  const fs::path summary_path = dir / "summary.json";
  const fs::path windows_path = dir / "windows.txt";

  ordered_json m = manifest("train", args, o.seed);
  m["config"] = c.snapshot();
  m["config"]["strategy"] = c.strategy;
  m["outputs"] = {{"log", log_path.string()}, {"checkpoints", ckpt_dir.string()}, {"summary", summary_path.string()}};
  if (c.dump_windows > 0) m["outputs"]["windows"] = windows_path.string();
  write_manifest(dir / "manifest.json", m);

  std::ofstream log = open_output(log_path);
  log << log_csv_header(c.log_wall_time) << "\n";
  std::ofstream windows;
  if (c.dump_windows > 0) windows = open_output(windows_path);
  int dumped = 0;
  const Vocabulary vocab = Vocabulary::for_task(task);

  RunHooks hooks;
  hooks.checkpoint_dir = ckpt_dir.string();
  hooks.progress = c.quiet ? nullptr : &err;
  hooks.on_eval = [&](const TrainLogRow& row) { log << log_csv_row(row, c.log_wall_time) << "\n" << std::flush; };
  if (c.dump_windows > 0) {
    hooks.on_window = [&](const PackedStream& w) {
      if (dumped >= c.dump_windows) return;
      windows << "window " << dumped++ << "\n" << format_window(w, vocab) << "\n";
    };
  }

  const TrainResult r = run(train, c.lstm(), curriculum, task, transforms_of(c), hooks);
  ordered_json summary;
  summary["test_char_accuracy"] = r.test.char_accuracy;
  summary["test_seq_accuracy"] = r.test.seq_accuracy;
  summary["test_samples"] = r.test.samples;
  summary["steps"] = r.steps;
  summary["samples_consumed"] = r.samples_consumed;
  summary["stop_reason"] = r.stop_reason;
  summary["final_difficulty"] = {r.curriculum.current_length, r.curriculum.current_nesting};
  summary["reached_target"] = r.curriculum.reached_target;
  write_text(summary_path, summary.dump(2) + "\n");

  out << "test char_accuracy " << format_number(r.test.char_accuracy) << " seq_accuracy "
      << format_number(r.test.seq_accuracy) << " steps " << r.steps << " samples " << r.samples_consumed
      << " (" << r.stop_reason << ")\n"
      << "log " << log_path.string() << "\n";
  return kExitOk;
}

// ---- compare --------------------------------------------------------------

struct CompareOptions {
  TrainOptions common;
  std::vector<std::string> strategies;
  std::vector<uint64_t> seeds;
  int grid_size = 200;
};

struct GridCell {
  Difficulty difficulty;
  Accuracy accuracy;
};

int cmd_compare(CompareOptions& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  TrainOptions& c = o.common;
  c.apply_paper_scale();
  if (o.strategies.empty()) o.strategies = kStrategies;
  if (o.seeds.empty()) o.seeds = {1, 2, 3};
  if (std::set<std::string>(o.strategies.begin(), o.strategies.end()).size() != o.strategies.size())
    throw UsageError("each strategy may be listed once");
  if (std::set<uint64_t>(o.seeds.begin(), o.seeds.end()).size() != o.seeds.size())
    throw UsageError("each seed may be listed once");
  if (o.grid_size < 1) throw UsageError("--grid-size must be >= 1");
  const Task task = c.task.parsed();
  for (const auto& s : o.strategies) {
    c.curriculum_for(parse_strategy(s), task).validate();
  }
  c.train_for(o.seeds.front()).validate();

  const fs::path dir = !c.out.empty() ? fs::path(c.out) : fs::path(default_out_dir()) / ("compare-" + c.task.task);
  const fs::path grid_path = dir / "compare.csv";
  const fs::path log_path = dir / "compare_log.csv";
  const fs::path summary_path = dir / "summary.json";
  ordered_json m = manifest("compare", args, o.seeds.front());
  m["config"] = c.snapshot();
  m["config"]["strategies"] = o.strategies;
  m["config"]["seeds"] = o.seeds;
  m["config"]["grid_size"] = o.grid_size;
  m["outputs"] = {{"compare", grid_path.string()}, {"log", log_path.string()}, {"summary", summary_path.string()}};
  write_manifest(dir / "manifest.json", m);

  std::ofstream log = open_output(log_path);
  log << "strategy,seed," << log_csv_header(c.log_wall_time) << "\n";

  const Vocabulary vocab = Vocabulary::for_task(task);
  const int max_nesting = task == Task::program ? c.task.nesting : 1;
  std::map<std::pair<std::string, uint64_t>, std::vector<GridCell>> grids;
  std::map<std::string, std::vector<double>> finals;

  for (const auto& name : o.strategies) {
    for (uint64_t seed : o.seeds) {
      const std::string tag = name + "-s" + std::to_string(seed);
      if (!c.quiet) err << "compare: " << tag << "\n";
      RunHooks hooks;
      hooks.checkpoint_dir = (dir / tag).string();
      hooks.progress = c.quiet ? nullptr : &err;
      hooks.on_eval = [&](const TrainLogRow& row) {
        log << name << "," << seed << "," << log_csv_row(row, c.log_wall_time) << "\n" << std::flush;
      };
      const TrainResult r = run(c.train_for(seed), c.lstm(), c.curriculum_for(parse_strategy(name), task), task,
                                transforms_of(c), hooks);
      finals[name].push_back(r.test.char_accuracy);

      const LstmParams<float> trained = r.params.cast<float>();
      const Predictor predict = lstm_predictor(trained);
      auto& grid = grids[{name, seed}];
      for (int nesting = 1; nesting <= max_nesting; ++nesting) {
        for (int length = 1; length <= c.task.length; ++length) {
          const Difficulty d{length, nesting};
          const auto set = make_eval_set(task, d, o.grid_size, Split::test,
                                         derive_seed(seed, "grid", static_cast<uint64_t>(length) * 1000003ULL +
                                                                        static_cast<uint64_t>(nesting)),
                                         transforms_of(c));
          grid.push_back({d, teacher_forced_accuracy(predict, set, vocab)});
        }
      }
    }
  }

  const bool has_baseline = finals.count("baseline") > 0;
  std::ostringstream csv;
  csv << "strategy,seed,length,nesting,char_accuracy,seq_accuracy,relative_char_accuracy,relative_seq_accuracy\n";
  for (const auto& name : o.strategies) {
    for (uint64_t seed : o.seeds) {
      const auto& grid = grids.at({name, seed});
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const Accuracy& a = grid[i].accuracy;
        csv << name << "," << seed << "," << grid[i].difficulty.length << "," << grid[i].difficulty.nesting << ","
            << format_number(a.char_accuracy) << "," << format_number(a.seq_accuracy) << ",";
        if (has_baseline) {
          const Accuracy& b = grids.at({"baseline", seed})[i].accuracy;
          csv << format_number(a.char_accuracy - b.char_accuracy) << ","
              << format_number(a.seq_accuracy - b.seq_accuracy);
        } else {
          csv << ",";
        }
        csv << "\n";
      }
    }
  }
  write_text(grid_path, csv.str());

  out << "test char accuracy at (" << c.task.length << "," << max_nesting << ")\n";
  ordered_json summary;
  summary["seeds"] = o.seeds;
  for (const auto& name : o.strategies) {
    const auto& values = finals.at(name);
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    summary["strategies"][name] = {{"test_char_accuracy", values}, {"mean", mean}};
    out << "  " << name << " mean " << format_number(mean) << " per seed";
    for (double v : values) out << " " << format_number(v);
    out << "\n";
  }
  write_text(summary_path, summary.dump(2) + "\n");
  out << "grid " << grid_path.string() << "\nlog " << log_path.string() << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Train LSTMs to evaluate short programs, with curriculum strategies", "l2e"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a line-delimited dataset");
  gen.task.add(gen_cmd);
  gen_cmd->add_option("--count", gen.count, "Records to write")->check(CLI::NonNegativeNumber)->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Dataset seed")->capture_default_str();
  gen_cmd->add_option("--split", gen.split, "Keep only this split")
      ->check(CLI::IsMember({"any", "train", "validation", "test"}))
      ->capture_default_str();
  gen_cmd->add_option("-o,--out", gen.out, "Dataset path");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Print the target of every program in a file");
  eval_cmd->add_option("file", eval.file, "Programs ending in '.', or a dataset; '-' reads stdin")->required();
  eval_cmd->add_flag("--check", eval.check, "Fail when a dataset's stored target differs");

  StatsOptions stats;
  auto* stats_cmd = app.add_subcommand("stats", "Output character distribution of program targets");
  stats.task.add(stats_cmd);
  stats_cmd->add_option("--count", stats.count, "Samples to generate")->check(CLI::PositiveNumber)->capture_default_str();
  stats_cmd->add_option("--seed", stats.seed, "Generation seed")->capture_default_str();
  stats_cmd->add_option("-i,--input", stats.input, "Analyze this dataset instead of generating");
  stats_cmd->add_option("--top", stats.top, "Characters listed per class")->check(CLI::PositiveNumber)->capture_default_str();
  stats_cmd->add_option("--csv", stats.csv, "Also write per-character frequencies here");

  SingleTrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train one model");
  train.common.add(train_cmd);
  train_cmd->add_option("--strategy", train.common.strategy, "baseline | naive | mix | combined")
      ->check(CLI::IsMember(kStrategies))
      ->multi_option_policy(CLI::MultiOptionPolicy::Throw)
      ->capture_default_str();
  train_cmd->add_option("--seed", train.seed, "Run seed")->capture_default_str();

  CompareOptions compare;
  auto* compare_cmd = app.add_subcommand("compare", "Train every strategy on shared seeds");
  compare.common.add(compare_cmd);
  compare_cmd->add_option("--strategy", compare.strategies, "Strategies to compare (repeatable; default all)")
      ->check(CLI::IsMember(kStrategies));
  compare_cmd->add_option("--seed", compare.seeds, "Seeds shared by all strategies (repeatable; default 1 2 3)");
  compare_cmd->add_option("--grid-size", compare.grid_size, "Test samples per difficulty")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, args, out);
    if (eval_cmd->parsed()) return cmd_eval(eval, out, err);
    if (stats_cmd->parsed()) return cmd_stats(stats, args, out);
    if (train_cmd->parsed()) return cmd_train(train, args, out, err);
    if (compare_cmd->parsed()) return cmd_compare(compare, args, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace l2e::cli
