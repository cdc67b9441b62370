#include "l2e/sample.hpp"

#include <string>

#include "l2e/errors.hpp"

namespace l2e {

std::string_view to_string(Split split) noexcept {
  switch (split) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
  }
  return "?";
}

std::string_view to_string(Task task) noexcept {
  switch (task) {
    case Task::program: return "program";
    case Task::addition: return "addition";
    case Task::memorize: return "memorize";
  }
  return "?";
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::train;
  if (text == "validation") return Split::validation;
  if (text == "test") return Split::test;
  throw UsageError("unknown split '" + std::string(text) + "'");
}

Task parse_task(std::string_view text) {
  if (text == "program") return Task::program;
  if (text == "addition") return Task::addition;
  if (text == "memorize") return Task::memorize;
  throw UsageError("unknown task '" + std::string(text) + "' (expected program|addition|memorize)");
}

}  // namespace l2e
