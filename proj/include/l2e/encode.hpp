#pragma once

// Character vocabulary, target rendering, input transformations and packing
// of samples into fixed-length unroll windows.
//
// Packing layout: each lane is a stream of samples laid end to end, every
// sample contributing `code` followed by `target`. The prediction made at
// position p is for the character at p + 1, so the loss mask is set on the
// last input character (the end marker) and on every target character except
// the final one. With teacher forcing the network therefore sees target[t-1]
// when asked for target[t].

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "l2e/bigint.hpp"
#include "l2e/sample.hpp"

namespace l2e {

/// Decimal rendering with optional '-' and trailing end marker.
std::string render_target(const BigInt& value);

/// Reverses the payload; a trailing end marker stays at the end.
std::string reverse_input(std::string_view code);
/// payload + ';' + payload; a trailing end marker stays at the end.
std::string double_input(std::string_view code);

struct InputTransforms {
  bool reverse = false;
  bool doubled = false;
};
/// Doubling first, then reversal. The target is never touched.
Sample apply_transforms(Sample sample, InputTransforms transforms);

class Vocabulary {
 public:
  static constexpr std::string_view kInputAlphabet =
      "0123456789abcdefghijklmnopqrstuvwxyz+-*=()<>:, \n.;";
  static constexpr std::string_view kProgramOutputs = "0123456789-.";
  static constexpr std::string_view kMemorizeOutputs = "0123456789.";

  explicit Vocabulary(std::string_view output_alphabet = kProgramOutputs);
  static Vocabulary for_task(Task task);

  std::string_view input_alphabet() const noexcept { return kInputAlphabet; }
  std::string_view output_alphabet() const noexcept { return output_alphabet_; }

  /// Input ids include one extra padding id.
  int input_size() const noexcept { return static_cast<int>(kInputAlphabet.size()) + 1; }
  int output_size() const noexcept { return static_cast<int>(output_alphabet_.size()); }
  int pad_id() const noexcept { return static_cast<int>(kInputAlphabet.size()); }

  /// Throw EncodingError naming the character when it is not in the alphabet.
  int input_id(char c) const;
  int output_id(char c) const;
  char input_char(int id) const;
  char output_char(int id) const;

  std::vector<int32_t> encode(std::string_view text) const;
  std::string decode(std::span<const int32_t> ids) const;

 private:
  std::string output_alphabet_;
  std::array<int16_t, 256> input_ids_{};
  std::array<int16_t, 256> output_ids_{};
};

/// One unroll window across all lanes. Index [t * lanes + lane].
struct PackedStream {
  int lanes = 0;
  int window = 0;
  std::vector<int32_t> tokens;   // input ids
  std::vector<int32_t> targets;  // output id predicted at this position, -1 when unmasked
  std::vector<uint8_t> mask;
  std::vector<uint8_t> starts;   // 1 on the first token of each sample

  static PackedStream empty(int lanes, int window, int pad_id);
  std::size_t index(int t, int lane) const noexcept {
    return static_cast<std::size_t>(t) * static_cast<std::size_t>(lanes) + static_cast<std::size_t>(lane);
  }
  std::size_t masked_count() const noexcept;
};

/// Token/mask layout of a single sample as it appears inside a lane.
struct EncodedSample {
  std::vector<int32_t> tokens;
  std::vector<int32_t> targets;
  std::vector<uint8_t> mask;
  std::vector<uint8_t> starts;
};
EncodedSample encode_sample(const Sample& sample, const Vocabulary& vocab);

/// Round-robin assignment of samples to lanes (sample i -> lane i % lanes),
/// lanes padded at the tail to a whole number of windows.
std::vector<PackedStream> pack(std::span<const Sample> samples, const Vocabulary& vocab, int lanes,
                               int window);

/// Inverse of pack: per-sample tokens and masks in original order.
std::vector<EncodedSample> unpack(std::span<const PackedStream> windows, const Vocabulary& vocab);

/// Incremental packer for an unbounded sample stream. Lanes keep their
/// leftover tokens between calls so samples straddle window boundaries.
class StreamPacker {
 public:
  using Source = std::function<std::optional<Sample>()>;

  StreamPacker(Vocabulary vocab, int lanes, int window);

  /// Next window, or nullopt once `source` is exhausted and every lane has
  /// been drained.
  std::optional<PackedStream> next(const Source& source);

 private:
  struct Cell {
    int32_t token, target;
    uint8_t mask, start;
  };
  Vocabulary vocab_;
  int lanes_;
  int window_;
  bool exhausted_ = false;
  std::vector<std::vector<Cell>> pending_;
};

/// Human-readable dump: per lane, input characters, mask carets and the
/// expected output characters, column aligned.
std::string format_window(const PackedStream& window, const Vocabulary& vocab);

}  // namespace l2e
