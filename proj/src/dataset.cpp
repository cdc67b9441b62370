#include "l2e/dataset.hpp"

#include <fstream>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <stdexcept>

#include "l2e/errors.hpp"
#include "l2e/rng.hpp"
#include "l2e/taskgen.hpp"

namespace l2e {

using nlohmann::json;

void DatasetSpec::validate() const {
  if (length < 1) throw UsageError("length must be >= 1");
  if (nesting < 1) throw UsageError("nesting must be >= 1");
  if (task != Task::program && nesting != 1) throw UsageError("nesting applies to the program task only");
  if (count < 0) throw UsageError("count must be >= 0");
}

Sample regenerate(const DatasetSpec& spec, uint64_t record_seed) {
  SplitMix64 rng(record_seed);
  if (spec.split) return generate_task_sample(spec.task, spec.length, spec.nesting, rng, *spec.split);
  return generate_task_sample(spec.task, spec.length, spec.nesting, rng);
}

std::vector<DatasetRecord> generate_dataset(const DatasetSpec& spec) {
  spec.validate();
  std::vector<DatasetRecord> out;
  out.reserve(static_cast<std::size_t>(spec.count));
  for (int64_t i = 0; i < spec.count; ++i) {
    const uint64_t seed = derive_seed(spec.seed, "gen", static_cast<uint64_t>(i));
    out.push_back({regenerate(spec, seed), seed});
  }
  return out;
}

std::string to_jsonl(const DatasetRecord& r) {
  const json j = {{"code", r.sample.code},
                  {"target", r.sample.target},
                  {"length", r.sample.length},
                  {"nesting", r.sample.nesting},
                  {"split", to_string(r.sample.split)},
                  {"seed", r.seed},
                  {"task", to_string(r.sample.task)}};
  return j.dump();
}

DatasetRecord parse_jsonl(std::string_view line) {
  try {
    const json j = json::parse(line);
    DatasetRecord r;
    r.sample.code = j.at("code").get<std::string>();
    r.sample.target = j.at("target").get<std::string>();
    r.sample.length = j.at("length").get<int>();
    r.sample.nesting = j.at("nesting").get<int>();
    r.sample.split = parse_split(j.at("split").get<std::string>());
    r.seed = j.at("seed").get<uint64_t>();
    r.sample.task = j.contains("task") ? parse_task(j.at("task").get<std::string>()) : Task::program;
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad dataset record: ") + e.what());
  }
}

void write_dataset(std::ostream& out, const std::vector<DatasetRecord>& records) {
  for (const auto& r : records) out << to_jsonl(r) << '\n';
}

std::vector<DatasetRecord> read_dataset(std::istream& in) {
  std::vector<DatasetRecord> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(parse_jsonl(line));
  return out;
}

void write_dataset_file(const std::string& path, const std::vector<DatasetRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_dataset(out, records);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<DatasetRecord> read_dataset_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return read_dataset(in);
}

}  // namespace l2e
