// Checkpoint layout, all integers and floats little-endian:
//
//   offset  size  field
//   0       8     magic "L2ECKPT\0"
//   8       4     format version (1)
//   12      4     depth
//   16      4     width
//   20      4     vocab_in
//   24      4     vocab_out
//   28      8     init_range (IEEE-754 binary64)
//   36      8     parameter count N
//   44      8*N   parameters (IEEE-754 binary64), flat order

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "l2e/lstm.hpp"

namespace l2e {

namespace {

constexpr char kMagic[8] = {'L', '2', 'E', 'C', 'K', 'P', 'T', '\0'};
constexpr uint32_t kVersion = 1;

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}
void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}
void put_f64(std::vector<uint8_t>& out, double v) { put_u64(out, std::bit_cast<uint64_t>(v)); }

class Reader {
 public:
  explicit Reader(const std::vector<uint8_t>& bytes) : bytes_(bytes) {}
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(bytes_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
    pos_ += 8;
    return v;
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(bytes_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw std::runtime_error("checkpoint is truncated");
  }
  std::size_t pos() const { return pos_; }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }

 private:
  const std::vector<uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<uint8_t> serialize_checkpoint(const LstmParams<double>& params) {
  const LstmConfig& cfg = params.config();
  std::vector<uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u32(out, kVersion);
  put_u32(out, static_cast<uint32_t>(cfg.depth));
  put_u32(out, static_cast<uint32_t>(cfg.width));
  put_u32(out, static_cast<uint32_t>(cfg.vocab_in));
  put_u32(out, static_cast<uint32_t>(cfg.vocab_out));
  put_f64(out, cfg.init_range);
  put_u64(out, static_cast<uint64_t>(params.flat().size()));
  out.reserve(out.size() + 8 * static_cast<std::size_t>(params.flat().size()));
  for (Eigen::Index i = 0; i < params.flat().size(); ++i) put_f64(out, params.flat()[i]);
  return out;
}

LstmParams<double> deserialize_checkpoint(const std::vector<uint8_t>& bytes) {
  Reader in(bytes);
  in.need(sizeof kMagic);
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) throw std::runtime_error("not a checkpoint file");
  in.skip(sizeof kMagic);
  const uint32_t version = in.u32();
  if (version != kVersion) throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  LstmConfig cfg;
  cfg.depth = static_cast<int>(in.u32());
  cfg.width = static_cast<int>(in.u32());
  cfg.vocab_in = static_cast<int>(in.u32());
  cfg.vocab_out = static_cast<int>(in.u32());
  cfg.init_range = in.f64();
  const uint64_t count = in.u64();
  LstmParams<double> params(cfg);
  if (count != static_cast<uint64_t>(params.flat().size()))
    throw std::runtime_error("checkpoint parameter count does not match its config");
  for (Eigen::Index i = 0; i < params.flat().size(); ++i) params.flat()[i] = in.f64();
  if (in.pos() != bytes.size()) throw std::runtime_error("trailing bytes in checkpoint");
  return params;
}

void save_checkpoint(const std::string& path, const LstmParams<double>& params) {
  const std::vector<uint8_t> bytes = serialize_checkpoint(params);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write checkpoint " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("failed writing checkpoint " + path);
}

LstmParams<double> load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open checkpoint " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return deserialize_checkpoint(bytes);
}

}  // namespace l2e
