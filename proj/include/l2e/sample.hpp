#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace l2e {

inline constexpr char kEndMarker = '.';

enum class Split : uint8_t { train = 0, validation = 1, test = 2 };
enum class Task : uint8_t { program, addition, memorize };

std::string_view to_string(Split split) noexcept;
std::string_view to_string(Task task) noexcept;
Split parse_split(std::string_view text);
Task parse_task(std::string_view text);

/// One input/target pair. `code` and `target` both carry the end marker.
struct Sample {
  std::string code;
  std::string target;
  int length = 0;
  int nesting = 0;
  Split split = Split::train;
  Task task = Task::program;

  bool operator==(const Sample&) const = default;
};

}  // namespace l2e
