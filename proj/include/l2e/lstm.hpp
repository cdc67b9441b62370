#pragma once

// Deep LSTM over character tokens.
//
// Layer l maps (h[l-1]_t, h[l]_{t-1}, c[l]_{t-1}) to (h[l]_t, c[l]_t):
//
//   (i, f, o, g) = (sigm, sigm, sigm, tanh)(W_l [h[l-1]_t; h[l]_{t-1}] + b_l)
//   c[l]_t = f * c[l]_{t-1} + i * g
//   h[l]_t = o * tanh(c[l]_t)
//
// h[0]_t is a learned embedding column of the input token and the logits are
// an affine readout of the top layer. Gate rows are ordered (i, f, o, g);
// the first n columns of W_l act on the layer input, the last n on the
// recurrent state.

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "l2e/encode.hpp"
#include "l2e/rng.hpp"

namespace l2e {

struct LstmConfig {
  int depth = 2;
  int width = 400;
  int vocab_in = 0;
  int vocab_out = 0;
  double init_range = 0.08;

  void validate() const;
  std::size_t parameter_count() const noexcept;
  bool operator==(const LstmConfig&) const = default;
};

/// All weights in one flat vector; the accessors are views into it so
/// clipping, SGD and checkpointing work on `flat()` directly.
template <typename Scalar>
class LstmParams {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using MatrixView = Eigen::Map<Matrix>;
  using ConstMatrixView = Eigen::Map<const Matrix>;
  using VectorView = Eigen::Map<Vector>;
  using ConstVectorView = Eigen::Map<const Vector>;

  /// All-zero parameters.
  explicit LstmParams(const LstmConfig& config);

  const LstmConfig& config() const noexcept { return config_; }
  Vector& flat() noexcept { return flat_; }
  const Vector& flat() const noexcept { return flat_; }

  MatrixView embedding();  // width x vocab_in
  ConstMatrixView embedding() const;
  MatrixView gates(int layer);  // 4*width x 2*width
  ConstMatrixView gates(int layer) const;
  VectorView gate_bias(int layer);  // 4*width
  ConstVectorView gate_bias(int layer) const;
  MatrixView readout();  // vocab_out x width
  ConstMatrixView readout() const;
  VectorView readout_bias();
  ConstVectorView readout_bias() const;

  template <typename Other>
  LstmParams<Other> cast() const {
    LstmParams<Other> out(config_);
    out.flat() = flat_.template cast<Other>();
    return out;
  }

 private:
  std::size_t layer_offset(int layer) const noexcept;
  std::size_t readout_offset() const noexcept;

  LstmConfig config_;
  Vector flat_;
};

/// Per-layer hidden and cell states, one column per lane.
template <typename Scalar>
struct LstmState {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  std::vector<Matrix> h, c;

  static LstmState zeros(const LstmConfig& config, int lanes);
  int lanes() const noexcept { return h.empty() ? 0 : static_cast<int>(h.front().cols()); }
};

/// Every parameter i.i.d. uniform in [-init_range, init_range].
LstmParams<double> init_params(const LstmConfig& config, SplitMix64& rng);

/// Activations kept from the forward pass. Columns are [t * lanes + lane].
template <typename Scalar>
struct ForwardCache {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  std::vector<Matrix> gates;       // activated (i, f, o, g), 4n x T*B per layer
  std::vector<Matrix> cells;       // c_t
  std::vector<Matrix> tanh_cells;  // tanh(c_t)
  std::vector<Matrix> hidden;      // h_t
  std::vector<Matrix> prev_hidden; // h_{t-1} as fed to step t
  std::vector<Matrix> prev_cells;  // c_{t-1} as fed to step t
};

template <typename Scalar>
struct ForwardResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> logits;  // vocab_out x T*B
  LstmState<Scalar> final_state;
  ForwardCache<Scalar> cache;
};

/// With `reset_at_starts`, a lane's state is zeroed right before every token
/// flagged in `window.starts`, so each sample is processed from a zero state
/// even when it shares a lane with earlier samples.
template <typename Scalar>
ForwardResult<Scalar> forward(const LstmParams<Scalar>& params, const PackedStream& window,
                              const LstmState<Scalar>& initial, bool reset_at_starts = false);

template <typename Scalar>
struct StepResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> logits;
  LstmState<Scalar> next_state;
};

/// One token through a single-lane state. Logits are raw (no softmax).
template <typename Scalar>
StepResult<Scalar> step(const LstmParams<Scalar>& params, const LstmState<Scalar>& state,
                        int32_t token);

template <typename Scalar>
struct WindowResult {
  double loss = 0.0;  // mean cross-entropy over masked positions
  LstmParams<Scalar> grads;
  LstmState<Scalar> final_state;
  std::size_t masked = 0;
  std::size_t correct = 0;  // masked positions where argmax hits the target
};

/// Masked mean cross-entropy and its exact gradient under truncated BPTT:
/// `initial` is treated as a constant. A window without masked positions
/// yields loss 0 and zero gradients.
template <typename Scalar>
WindowResult<Scalar> backward(const LstmParams<Scalar>& params, const PackedStream& window,
                              const LstmState<Scalar>& initial, bool reset_at_starts = false);

/// Per-column argmax of a logits matrix (ties go to the lowest id).
template <typename Scalar>
std::vector<int32_t> argmax_columns(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& logits);

/// Versioned little-endian binary dump of config + flat parameters.
void save_checkpoint(const std::string& path, const LstmParams<double>& params);
LstmParams<double> load_checkpoint(const std::string& path);
std::vector<uint8_t> serialize_checkpoint(const LstmParams<double>& params);
LstmParams<double> deserialize_checkpoint(const std::vector<uint8_t>& bytes);

}  // namespace l2e
