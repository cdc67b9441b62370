#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <map>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"
#include "l2e/dataset.hpp"
#include "l2e/encode.hpp"
#include "l2e/interp.hpp"
#include "l2e/train.hpp"

namespace fs = std::filesystem;
using namespace l2e;

namespace {

struct Invocation {
  int code;
  std::string out, err;
};

Invocation invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("l2e_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const std::vector<std::string> kTinyTrain = {"--task",        "memorize", "--length",   "2",  "--hidden",
                                             "8",             "--batch",  "8",          "--max-samples", "400",
                                             "--eval-interval", "5",      "--val-size", "20", "--test-size",
                                             "20",            "-q"};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("gen writes verified records and a manifest") {
    const fs::path dir = scratch("gen");
    const auto r = invoke({"gen", "--task", "program", "--length", "3", "--nesting", "2", "--count", "300", "--seed",
                           "4", "-o", (dir / "p.jsonl").string()});
    REQUIRE(r.code == cli::kExitOk);
    const auto records = read_dataset_file((dir / "p.jsonl").string());
    REQUIRE(records.size() == 300);
    for (const auto& rec : records) {
      CHECK(render_target(interp::run(rec.sample.code)) == rec.sample.target);
      CHECK(rec.sample.length == 3);
      CHECK(rec.sample.nesting == 2);
    }
    const auto m = nlohmann::json::parse(slurp(dir / "p.jsonl.manifest.json"));
    CHECK(m.at("command") == "gen");
    CHECK(m.at("seed") == 4);
    CHECK(m.at("version") == std::string(kVersion));
    CHECK(m.at("rng") == "splitmix64");
    CHECK(m.at("config").at("count") == 300);
  }

  TEST_CASE("gen is reproducible from the manifest argv") {
    const fs::path dir = scratch("regen");
    const std::string path = (dir / "a.jsonl").string();
    REQUIRE(invoke({"gen", "--task", "addition", "--length", "6", "--count", "10", "-o", path}).code == 0);
    const std::string first = slurp(path);
    const auto m = nlohmann::json::parse(slurp(path + ".manifest.json"));
    REQUIRE(invoke(m.at("argv").get<std::vector<std::string>>()).code == 0);
    CHECK(slurp(path) == first);
    for (const auto& rec : read_dataset_file(path)) {
      CHECK(rec.sample.code.rfind("print(", 0) == 0);
      CHECK(rec.sample.code.size() == std::string("print(123456+123456).").size());
    }
  }

  TEST_CASE("gen with count 0 writes an empty dataset and a manifest") {
    const fs::path dir = scratch("empty");
    REQUIRE(invoke({"gen", "--count", "0", "-o", (dir / "e.jsonl").string()}).code == 0);
    CHECK(fs::file_size(dir / "e.jsonl") == 0);
    CHECK(fs::exists(dir / "e.jsonl.manifest.json"));
  }

  TEST_CASE("the default output directory comes from the environment") {
    const fs::path dir = scratch("env");
    ::setenv(cli::kOutDirEnv, dir.string().c_str(), 1);
    const auto r = invoke({"gen", "--task", "memorize", "--length", "3", "--count", "2"});
    ::unsetenv(cli::kOutDirEnv);
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "memorize-l3-n1-s1.jsonl"));
  }

  TEST_CASE("usage errors exit with 1") {
    CHECK(invoke({}).code == cli::kExitUsage);
    CHECK(invoke({"bogus"}).code == cli::kExitUsage);
    CHECK(invoke({"train", "--strategy", "naive", "--strategy", "mix"}).code == cli::kExitUsage);
    CHECK(invoke({"train", "--strategy", "sideways"}).code == cli::kExitUsage);
    CHECK(invoke({"gen", "--task", "memorize", "--nesting", "2"}).code == cli::kExitUsage);
    CHECK(invoke({"gen", "--length", "0"}).code == cli::kExitUsage);
    CHECK(invoke({"compare", "--strategy", "mix", "--strategy", "mix"}).code == cli::kExitUsage);
    CHECK(invoke({"--help"}).code == cli::kExitOk);
  }

  TEST_CASE("runtime failures exit with 2") {
    const fs::path dir = scratch("runtime");
    CHECK(invoke({"eval", (dir / "missing.txt").string()}).code == cli::kExitRuntime);
    std::ofstream(dir / "bad.txt") << "print((1+.\n";
    CHECK(invoke({"eval", (dir / "bad.txt").string()}).code == cli::kExitRuntime);
  }

  TEST_CASE("eval prints one target per program") {
    const fs::path dir = scratch("eval");
    std::ofstream(dir / "p.txt") << "j=8584\nfor x in range(8):\n  j+=920\nb=(1500+j)\nprint((b+7567)).\n\n"
                                    "print(398345+425098).\nc=2060;\nprint((c-4387)).\n";
    const auto r = invoke({"eval", (dir / "p.txt").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out == "25011.\n823443.\n-2327.\n");
  }

  TEST_CASE("eval --check flags a tampered dataset") {
    const fs::path dir = scratch("check");
    const std::string path = (dir / "d.jsonl").string();
    REQUIRE(invoke({"gen", "--length", "2", "--count", "5", "-o", path}).code == 0);
    CHECK(invoke({"eval", path, "--check"}).code == 0);
    auto records = read_dataset_file(path);
    records[2].sample.target = "999999.";
    write_dataset_file(path, records);
    CHECK(invoke({"eval", path, "--check"}).code == cli::kExitRuntime);
  }

  TEST_CASE("stats prints a table and writes a csv") {
    const fs::path dir = scratch("stats");
    const auto r = invoke({"stats", "--count", "200", "--csv", (dir / "s.csv").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("samples: 200") != std::string::npos);
    CHECK(slurp(dir / "s.csv").rfind("class,char,count,frequency\n", 0) == 0);
  }

  TEST_CASE("train writes manifest, log, checkpoints and windows") {
    const fs::path dir = scratch("train");
    auto args = std::vector<std::string>{"train"};
    args.insert(args.end(), kTinyTrain.begin(), kTinyTrain.end());
    args.insert(args.end(), {"--dump-windows", "2", "-o", dir.string()});
    const auto r = invoke(args);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("test char_accuracy") != std::string::npos);
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(fs::exists(dir / "checkpoints" / "final.ckpt"));
    const std::string log = slurp(dir / "log.csv");
    CHECK(log.rfind(log_csv_header(false) + "\n", 0) == 0);
    CHECK(std::count(log.begin(), log.end(), '\n') >= 3);
    const std::string windows = slurp(dir / "windows.txt");
    CHECK(windows.find("window 1") != std::string::npos);
    CHECK(windows.find("window 2") == std::string::npos);
    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary.at("stop_reason") == "sample budget reached");
    const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(m.at("config").at("reset_per_sample") == true);
  }

  TEST_CASE("the full-scale flag swaps the defaults but not explicit flags") {
    const fs::path dir = scratch("full_scale");
    const auto r = invoke({"train", "--paper-scale", "--task", "memorize", "--length", "2", "--hidden", "8",
                           "--max-samples", "1", "--val-size", "1", "--test-size", "1", "-q", "-o", dir.string()});
    REQUIRE(r.code == 0);
    const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(m.at("config").at("hidden") == 8);
    CHECK(m.at("config").at("minibatch") == 100);
    CHECK(m.at("config").at("window") == 50);
    CHECK(m.at("config").at("epoch_size") == 500000);
    CHECK(m.at("config").at("max_samples") == 1);
    CHECK(m.at("config").at("paper_scale") == true);
  }

  TEST_CASE("compare emits one grid csv with strategy columns and baseline-relative accuracy") {
    const fs::path dir = scratch("compare");
    auto args = std::vector<std::string>{"compare"};
    args.insert(args.end(), kTinyTrain.begin(), kTinyTrain.end());
    args.insert(args.end(), {"--seed", "1", "--seed", "2", "--grid-size", "10", "-o", dir.string()});
    const auto r = invoke(args);
    REQUIRE(r.code == 0);
    std::istringstream csv(slurp(dir / "compare.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line ==
          "strategy,seed,length,nesting,char_accuracy,seq_accuracy,relative_char_accuracy,relative_seq_accuracy");
    std::map<std::string, int> rows;
    while (std::getline(csv, line)) {
      const std::string strategy = line.substr(0, line.find(','));
      ++rows[strategy];
      if (strategy == "baseline") CHECK(line.find(",0,0") != std::string::npos);
    }
    CHECK(rows.size() == 4);
    for (const auto& [name, count] : rows) CHECK(count == 2 * 2);  // 2 seeds x lengths 1..2
    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary.at("strategies").size() == 4);
    const std::string log = slurp(dir / "compare_log.csv");
    CHECK(log.rfind("strategy,seed,step,", 0) == 0);
  }
}
