#pragma once

// Line-delimited JSON datasets and run manifests.
//
// One record per line: {"code", "target", "length", "nesting", "split",
// "seed", "task"}. Newlines inside code are escaped by the JSON encoder.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "l2e/sample.hpp"

namespace l2e {

inline constexpr std::string_view kVersion = "0.1.0";

struct DatasetRecord {
  Sample sample;
  uint64_t seed = 0;
};

struct DatasetSpec {
  Task task = Task::program;
  int length = 1;
  int nesting = 1;
  int64_t count = 0;
  uint64_t seed = 0;
  std::optional<Split> split;  // unset: keep whatever split each sample hashes to

  void validate() const;
};

/// Record i is drawn from its own stream seeded with derive_seed(seed, "gen", i),
/// so any single record can be regenerated from (spec, i).
std::vector<DatasetRecord> generate_dataset(const DatasetSpec& spec);
/// Regenerates one record from its stored per-record seed.
Sample regenerate(const DatasetSpec& spec, uint64_t record_seed);

std::string to_jsonl(const DatasetRecord& record);
/// Throws ConfigError on malformed JSON or missing fields.
DatasetRecord parse_jsonl(std::string_view line);

void write_dataset(std::ostream& out, const std::vector<DatasetRecord>& records);
std::vector<DatasetRecord> read_dataset(std::istream& in);
/// Throws std::runtime_error when the file cannot be opened.
void write_dataset_file(const std::string& path, const std::vector<DatasetRecord>& records);
std::vector<DatasetRecord> read_dataset_file(const std::string& path);

}  // namespace l2e
