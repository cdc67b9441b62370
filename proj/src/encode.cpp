#include "l2e/encode.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "l2e/errors.hpp"

namespace l2e {

namespace {

std::string_view payload_of(std::string_view code, bool& had_marker) {
  had_marker = !code.empty() && code.back() == kEndMarker;
  return had_marker ? code.substr(0, code.size() - 1) : code;
}

std::string printable(char c) {
  if (c == '\n') return "\\n";
  return std::string(1, c);
}

}  // namespace

std::string render_target(const BigInt& value) { return value.str() + kEndMarker; }

std::string reverse_input(std::string_view code) {
  bool marker = false;
  const std::string_view payload = payload_of(code, marker);
  std::string out(payload.rbegin(), payload.rend());
  if (marker) out += kEndMarker;
  return out;
}

std::string double_input(std::string_view code) {
  bool marker = false;
  const std::string_view payload = payload_of(code, marker);
  std::string out;
  out.reserve(payload.size() * 2 + 2);
  out.append(payload).append(";").append(payload);
  if (marker) out += kEndMarker;
  return out;
}

Sample apply_transforms(Sample sample, InputTransforms transforms) {
  if (transforms.doubled) sample.code = double_input(sample.code);
  if (transforms.reverse) sample.code = reverse_input(sample.code);
  return sample;
}

Vocabulary::Vocabulary(std::string_view output_alphabet) : output_alphabet_(output_alphabet) {
  input_ids_.fill(-1);
  output_ids_.fill(-1);
  for (std::size_t i = 0; i < kInputAlphabet.size(); ++i)
    input_ids_[static_cast<unsigned char>(kInputAlphabet[i])] = static_cast<int16_t>(i);
  for (std::size_t i = 0; i < output_alphabet_.size(); ++i) {
    const auto c = static_cast<unsigned char>(output_alphabet_[i]);
    if (output_ids_[c] != -1) throw ConfigError("output alphabet repeats a character");
    if (input_ids_[c] == -1) throw ConfigError("output alphabet must be a subset of the input alphabet");
    output_ids_[c] = static_cast<int16_t>(i);
  }
}

Vocabulary Vocabulary::for_task(Task task) {
  return Vocabulary(task == Task::memorize ? kMemorizeOutputs : kProgramOutputs);
}

int Vocabulary::input_id(char c) const {
  const int id = input_ids_[static_cast<unsigned char>(c)];
  if (id < 0) throw EncodingError("character '" + printable(c) + "' is not in the input alphabet", c);
  return id;
}

int Vocabulary::output_id(char c) const {
  const int id = output_ids_[static_cast<unsigned char>(c)];
  if (id < 0) throw EncodingError("character '" + printable(c) + "' is not in the output alphabet", c);
  return id;
}

char Vocabulary::input_char(int id) const {
  if (id < 0 || id >= static_cast<int>(kInputAlphabet.size()))
    throw std::out_of_range("input id " + std::to_string(id) + " has no character");
  return kInputAlphabet[static_cast<std::size_t>(id)];
}

char Vocabulary::output_char(int id) const {
  if (id < 0 || id >= output_size())
    throw std::out_of_range("output id " + std::to_string(id) + " has no character");
  return output_alphabet_[static_cast<std::size_t>(id)];
}

std::vector<int32_t> Vocabulary::encode(std::string_view text) const {
  std::vector<int32_t> ids;
  ids.reserve(text.size());
  for (char c : text) ids.push_back(input_id(c));
  return ids;
}

std::string Vocabulary::decode(std::span<const int32_t> ids) const {
  std::string out;
  out.reserve(ids.size());
  for (int32_t id : ids) out += input_char(id);
  return out;
}

PackedStream PackedStream::empty(int lanes, int window, int pad_id) {
  PackedStream p;
  p.lanes = lanes;
  p.window = window;
  const auto n = static_cast<std::size_t>(lanes) * static_cast<std::size_t>(window);
  p.tokens.assign(n, pad_id);
  p.targets.assign(n, -1);
  p.mask.assign(n, 0);
  p.starts.assign(n, 0);
  return p;
}

std::size_t PackedStream::masked_count() const noexcept {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), uint8_t{1}));
}

EncodedSample encode_sample(const Sample& sample, const Vocabulary& vocab) {
  if (sample.code.empty() || sample.target.empty())
    throw EncodingError("sample has an empty code or target", '\0');
  EncodedSample e;
  e.tokens = vocab.encode(sample.code);
  const std::vector<int32_t> target_tokens = vocab.encode(sample.target);
  e.tokens.insert(e.tokens.end(), target_tokens.begin(), target_tokens.end());
  e.targets.assign(e.tokens.size(), -1);
  e.mask.assign(e.tokens.size(), 0);
  e.starts.assign(e.tokens.size(), 0);
  e.starts[0] = 1;
  const std::size_t first = sample.code.size() - 1;
  for (std::size_t j = 0; j < sample.target.size(); ++j) {
    e.targets[first + j] = vocab.output_id(sample.target[j]);
    e.mask[first + j] = 1;
  }
  return e;
}

std::vector<PackedStream> pack(std::span<const Sample> samples, const Vocabulary& vocab, int lanes,
                               int window) {
  if (lanes < 1 || window < 1) throw UsageError("lanes and window must be >= 1");
  std::vector<EncodedSample> lane_streams(static_cast<std::size_t>(lanes));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    EncodedSample e = encode_sample(samples[i], vocab);
    EncodedSample& lane = lane_streams[i % static_cast<std::size_t>(lanes)];
    lane.tokens.insert(lane.tokens.end(), e.tokens.begin(), e.tokens.end());
    lane.targets.insert(lane.targets.end(), e.targets.begin(), e.targets.end());
    lane.mask.insert(lane.mask.end(), e.mask.begin(), e.mask.end());
    lane.starts.insert(lane.starts.end(), e.starts.begin(), e.starts.end());
  }
  std::size_t longest = 0;
  for (const auto& lane : lane_streams) longest = std::max(longest, lane.tokens.size());
  const std::size_t w = static_cast<std::size_t>(window);
  const std::size_t count = std::max<std::size_t>(1, (longest + w - 1) / w);

  std::vector<PackedStream> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    PackedStream p = PackedStream::empty(lanes, window, vocab.pad_id());
    for (int lane = 0; lane < lanes; ++lane) {
      const EncodedSample& src = lane_streams[static_cast<std::size_t>(lane)];
      for (int t = 0; t < window; ++t) {
        const std::size_t pos = k * w + static_cast<std::size_t>(t);
        if (pos >= src.tokens.size()) break;
        const std::size_t at = p.index(t, lane);
        p.tokens[at] = src.tokens[pos];
        p.targets[at] = src.targets[pos];
        p.mask[at] = src.mask[pos];
        p.starts[at] = src.starts[pos];
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<EncodedSample> unpack(std::span<const PackedStream> windows, const Vocabulary& vocab) {
  if (windows.empty()) return {};
  const int lanes = windows.front().lanes;
  std::vector<std::vector<EncodedSample>> per_lane(static_cast<std::size_t>(lanes));
  for (int lane = 0; lane < lanes; ++lane) {
    EncodedSample current;
    bool in_target = false;
    for (const PackedStream& w : windows) {
      for (int t = 0; t < w.window; ++t) {
        const std::size_t at = w.index(t, lane);
        if (w.tokens[at] == vocab.pad_id()) continue;
        current.tokens.push_back(w.tokens[at]);
        current.targets.push_back(w.targets[at]);
        current.mask.push_back(w.mask[at]);
        current.starts.push_back(w.starts[at]);
        if (w.mask[at]) {
          in_target = true;
        } else if (in_target) {
          // First unmasked position after a masked run is the sample's final
          // character.
          per_lane[static_cast<std::size_t>(lane)].push_back(std::move(current));
          current = {};
          in_target = false;
        }
      }
    }
    if (!current.tokens.empty()) throw std::runtime_error("unpack: lane ends inside a sample");
  }
  std::vector<EncodedSample> out;
  for (std::size_t k = 0;; ++k) {
    bool any = false;
    for (auto& lane : per_lane) {
      if (k < lane.size()) {
        out.push_back(std::move(lane[k]));
        any = true;
      }
    }
    if (!any) break;
  }
  return out;
}

StreamPacker::StreamPacker(Vocabulary vocab, int lanes, int window)
    : vocab_(std::move(vocab)), lanes_(lanes), window_(window), pending_(static_cast<std::size_t>(lanes)) {
  if (lanes < 1 || window < 1) throw UsageError("lanes and window must be >= 1");
}

std::optional<PackedStream> StreamPacker::next(const Source& source) {
  const auto w = static_cast<std::size_t>(window_);
  for (auto& lane : pending_) {
    while (lane.size() < w && !exhausted_) {
      std::optional<Sample> sample = source();
      if (!sample) {
        exhausted_ = true;
        break;
      }
      const EncodedSample e = encode_sample(*sample, vocab_);
      for (std::size_t i = 0; i < e.tokens.size(); ++i) lane.push_back({e.tokens[i], e.targets[i], e.mask[i], e.starts[i]});
    }
  }
  const bool drained = std::all_of(pending_.begin(), pending_.end(), [](const auto& l) { return l.empty(); });
  if (exhausted_ && drained) return std::nullopt;

  PackedStream p = PackedStream::empty(lanes_, window_, vocab_.pad_id());
  for (int lane = 0; lane < lanes_; ++lane) {
    auto& cells = pending_[static_cast<std::size_t>(lane)];
    const std::size_t take = std::min(w, cells.size());
    for (std::size_t t = 0; t < take; ++t) {
      const std::size_t at = p.index(static_cast<int>(t), lane);
      p.tokens[at] = cells[t].token;
      p.targets[at] = cells[t].target;
      p.mask[at] = cells[t].mask;
      p.starts[at] = cells[t].start;
    }
    cells.erase(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(take));
  }
  return p;
}

std::string format_window(const PackedStream& window, const Vocabulary& vocab) {
  auto glyph = [](char c) { return c == '\n' ? '~' : c; };
  std::string out;
  for (int lane = 0; lane < window.lanes; ++lane) {
    std::string in, carets, expect;
    for (int t = 0; t < window.window; ++t) {
      const std::size_t at = window.index(t, lane);
      const int32_t tok = window.tokens[at];
      in += tok == vocab.pad_id() ? '#' : glyph(vocab.input_char(tok));
      carets += window.mask[at] ? '^' : ' ';
      expect += window.mask[at] ? vocab.output_char(window.targets[at]) : ' ';
    }
    out += "lane " + std::to_string(lane) + "\n  in  |" + in + "|\n  loss|" + carets + "|\n  next|" +
           expect + "|\n";
  }
  return out;
}

}  // namespace l2e
