#include <doctest.h>

#include <sstream>

#include "l2e/dataset.hpp"
#include "l2e/errors.hpp"
#include "l2e/progsynth.hpp"

using namespace l2e;

TEST_SUITE("dataset") {
  TEST_CASE("records round trip with escaped newlines") {
    SplitMix64 rng(1);
    std::vector<DatasetRecord> records;
    for (int i = 0; i < 50; ++i) records.push_back({generate(GenConfig{3, 3, 0}, rng), 42});
    std::stringstream buf;
    write_dataset(buf, records);
    const std::string text = buf.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 50);
    CHECK(text.find("\\n") != std::string::npos);
    const auto back = read_dataset(buf);
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      CHECK(back[i].sample == records[i].sample);
      CHECK(back[i].seed == 42);
    }
  }

  TEST_CASE("record fields") {
    Sample s;
    s.code = "a=1\nprint(a).";
    s.target = "1.";
    s.length = 1;
    s.nesting = 1;
    s.split = Split::test;
    const std::string line = to_jsonl({s, 7});
    CHECK(line ==
          R"({"code":"a=1\nprint(a).","length":1,"nesting":1,"seed":7,"split":"test","target":"1.","task":"program"})");
  }

  TEST_CASE("malformed records") {
    CHECK_THROWS_AS(parse_jsonl("{"), ConfigError);
    CHECK_THROWS_AS(parse_jsonl(R"({"code":"x"})"), ConfigError);
  }
}
