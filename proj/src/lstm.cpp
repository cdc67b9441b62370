#include "l2e/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "l2e/errors.hpp"

namespace l2e {

void LstmConfig::validate() const {
  if (depth < 1 || width < 1 || vocab_in < 1 || vocab_out < 1)
    throw UsageError("LSTM depth, width and vocabulary sizes must be positive");
  if (!(init_range >= 0.0) || !std::isfinite(init_range))
    throw UsageError("init_range must be a finite non-negative number");
}

std::size_t LstmConfig::parameter_count() const noexcept {
  const auto n = static_cast<std::size_t>(width);
  const std::size_t per_layer = 4 * n * 2 * n + 4 * n;
  return n * static_cast<std::size_t>(vocab_in) + static_cast<std::size_t>(depth) * per_layer +
         static_cast<std::size_t>(vocab_out) * (n + 1);
}

template <typename Scalar>
LstmParams<Scalar>::LstmParams(const LstmConfig& config) : config_(config) {
  config_.validate();
  flat_ = Vector::Zero(static_cast<Eigen::Index>(config_.parameter_count()));
}

template <typename Scalar>
std::size_t LstmParams<Scalar>::layer_offset(int layer) const noexcept {
  const auto n = static_cast<std::size_t>(config_.width);
  return n * static_cast<std::size_t>(config_.vocab_in) +
         static_cast<std::size_t>(layer) * (8 * n * n + 4 * n);
}

template <typename Scalar>
std::size_t LstmParams<Scalar>::readout_offset() const noexcept {
  return layer_offset(config_.depth);
}

template <typename Scalar>
auto LstmParams<Scalar>::embedding() -> MatrixView {
  return MatrixView(flat_.data(), config_.width, config_.vocab_in);
}
template <typename Scalar>
auto LstmParams<Scalar>::embedding() const -> ConstMatrixView {
  return ConstMatrixView(flat_.data(), config_.width, config_.vocab_in);
}
template <typename Scalar>
auto LstmParams<Scalar>::gates(int layer) -> MatrixView {
  return MatrixView(flat_.data() + layer_offset(layer), 4 * config_.width, 2 * config_.width);
}
template <typename Scalar>
auto LstmParams<Scalar>::gates(int layer) const -> ConstMatrixView {
  return ConstMatrixView(flat_.data() + layer_offset(layer), 4 * config_.width, 2 * config_.width);
}
template <typename Scalar>
auto LstmParams<Scalar>::gate_bias(int layer) -> VectorView {
  const auto n = static_cast<std::size_t>(config_.width);
  return VectorView(flat_.data() + layer_offset(layer) + 8 * n * n, 4 * config_.width);
}
template <typename Scalar>
auto LstmParams<Scalar>::gate_bias(int layer) const -> ConstVectorView {
  const auto n = static_cast<std::size_t>(config_.width);
  return ConstVectorView(flat_.data() + layer_offset(layer) + 8 * n * n, 4 * config_.width);
}
template <typename Scalar>
auto LstmParams<Scalar>::readout() -> MatrixView {
  return MatrixView(flat_.data() + readout_offset(), config_.vocab_out, config_.width);
}
template <typename Scalar>
auto LstmParams<Scalar>::readout() const -> ConstMatrixView {
  return ConstMatrixView(flat_.data() + readout_offset(), config_.vocab_out, config_.width);
}
template <typename Scalar>
auto LstmParams<Scalar>::readout_bias() -> VectorView {
  const auto off = readout_offset() + static_cast<std::size_t>(config_.vocab_out) * static_cast<std::size_t>(config_.width);
  return VectorView(flat_.data() + off, config_.vocab_out);
}
template <typename Scalar>
auto LstmParams<Scalar>::readout_bias() const -> ConstVectorView {
  const auto off = readout_offset() + static_cast<std::size_t>(config_.vocab_out) * static_cast<std::size_t>(config_.width);
  return ConstVectorView(flat_.data() + off, config_.vocab_out);
}

template <typename Scalar>
LstmState<Scalar> LstmState<Scalar>::zeros(const LstmConfig& config, int lanes) {
  LstmState s;
  s.h.assign(static_cast<std::size_t>(config.depth), Matrix::Zero(config.width, lanes));
  s.c.assign(static_cast<std::size_t>(config.depth), Matrix::Zero(config.width, lanes));
  return s;
}

LstmParams<double> init_params(const LstmConfig& config, SplitMix64& rng) {
  LstmParams<double> p(config);
  const double r = config.init_range;
  for (Eigen::Index i = 0; i < p.flat().size(); ++i) p.flat()[i] = rng.uniform_real(-r, r);
  return p;
}

namespace {

template <typename Scalar>
void check_shapes(const LstmParams<Scalar>& params, const PackedStream& window,
                  const LstmState<Scalar>& initial) {
  const LstmConfig& cfg = params.config();
  if (window.lanes < 1 || window.window < 1)
    throw std::invalid_argument("window must have at least one lane and one step");
  const auto cells = static_cast<std::size_t>(window.lanes) * static_cast<std::size_t>(window.window);
  if (window.tokens.size() != cells || window.targets.size() != cells || window.mask.size() != cells)
    throw std::invalid_argument("packed window arrays do not match lanes * window");
  if (initial.h.size() != static_cast<std::size_t>(cfg.depth) ||
      initial.c.size() != static_cast<std::size_t>(cfg.depth))
    throw std::invalid_argument("state depth does not match the model");
  for (int l = 0; l < cfg.depth; ++l) {
    const auto& h = initial.h[static_cast<std::size_t>(l)];
    const auto& c = initial.c[static_cast<std::size_t>(l)];
    if (h.rows() != cfg.width || c.rows() != cfg.width || h.cols() != window.lanes ||
        c.cols() != window.lanes)
      throw std::invalid_argument("state dimensions do not match the model and lane count");
  }
  for (std::size_t j = 0; j < cells; ++j) {
    if (window.tokens[j] < 0 || window.tokens[j] >= cfg.vocab_in)
      throw std::invalid_argument("token id out of range");
    if (window.mask[j] && (window.targets[j] < 0 || window.targets[j] >= cfg.vocab_out))
      throw std::invalid_argument("target id out of range at a masked position");
  }
}

}  // namespace

template <typename Scalar>
ForwardResult<Scalar> forward(const LstmParams<Scalar>& params, const PackedStream& window,
                              const LstmState<Scalar>& initial, bool reset_at_starts) {
  using Matrix = typename LstmParams<Scalar>::Matrix;
  check_shapes(params, window, initial);
  if (reset_at_starts && window.starts.size() != window.tokens.size())
    throw std::invalid_argument("packed window has no sample-start flags");
  const LstmConfig& cfg = params.config();
  const Eigen::Index n = cfg.width;
  const Eigen::Index lanes = window.lanes;
  const int steps = window.window;
  const Eigen::Index cols = lanes * steps;

  ForwardResult<Scalar> out;
  const auto depth = static_cast<std::size_t>(cfg.depth);
  out.cache.gates.resize(depth);
  out.cache.cells.resize(depth);
  out.cache.tanh_cells.resize(depth);
  out.cache.hidden.resize(depth);
  out.cache.prev_hidden.resize(depth);
  out.cache.prev_cells.resize(depth);
  out.final_state.h.resize(depth);
  out.final_state.c.resize(depth);

  for (std::size_t l = 0; l < depth; ++l) {
    const auto W = params.gates(static_cast<int>(l));
    const auto input_weights = W.leftCols(n);
    const auto recurrent_weights = W.rightCols(n);
    const auto bias = params.gate_bias(static_cast<int>(l));

    Matrix& G = out.cache.gates[l];
    if (l == 0) {
      // Gate pre-activations from the embedding depend only on the token id.
      Matrix table = input_weights * params.embedding();
      table.colwise() += bias;
      G.resize(4 * n, cols);
      for (Eigen::Index j = 0; j < cols; ++j) G.col(j) = table.col(window.tokens[static_cast<std::size_t>(j)]);
    } else {
      G.noalias() = input_weights * out.cache.hidden[l - 1];
      G.colwise() += bias;
    }

    Matrix& C = out.cache.cells[l];
    Matrix& TC = out.cache.tanh_cells[l];
    Matrix& H = out.cache.hidden[l];
    Matrix& PH = out.cache.prev_hidden[l];
    Matrix& PC = out.cache.prev_cells[l];
    C.resize(n, cols);
    TC.resize(n, cols);
    H.resize(n, cols);
    PH.resize(n, cols);
    PC.resize(n, cols);

    for (int t = 0; t < steps; ++t) {
      const Eigen::Index at = static_cast<Eigen::Index>(t) * lanes;
      auto ph = PH.middleCols(at, lanes);
      auto pc = PC.middleCols(at, lanes);
      if (t == 0) {
        ph = initial.h[l];
        pc = initial.c[l];
      } else {
        ph = H.middleCols(at - lanes, lanes);
        pc = C.middleCols(at - lanes, lanes);
      }
      if (reset_at_starts) {
        for (Eigen::Index lane = 0; lane < lanes; ++lane) {
          if (window.starts[static_cast<std::size_t>(at + lane)]) {
            ph.col(lane).setZero();
            pc.col(lane).setZero();
          }
        }
      }
      auto z = G.middleCols(at, lanes);
      z.noalias() += recurrent_weights * ph;
      z.topRows(3 * n).array() = z.topRows(3 * n).array().logistic();
      z.bottomRows(n).array() = z.bottomRows(n).array().tanh();

      const auto i = z.topRows(n).array();
      const auto f = z.middleRows(n, n).array();
      const auto o = z.middleRows(2 * n, n).array();
      const auto g = z.bottomRows(n).array();
      auto c = C.middleCols(at, lanes);
      c.array() = f * pc.array() + i * g;
      auto tc = TC.middleCols(at, lanes);
      tc.array() = c.array().tanh();
      H.middleCols(at, lanes).array() = o * tc.array();
    }
    out.final_state.h[l] = H.rightCols(lanes);
    out.final_state.c[l] = C.rightCols(lanes);
  }

  out.logits.noalias() = params.readout() * out.cache.hidden.back();
  out.logits.colwise() += params.readout_bias();
  return out;
}

template <typename Scalar>
StepResult<Scalar> step(const LstmParams<Scalar>& params, const LstmState<Scalar>& state,
                        int32_t token) {
  if (state.lanes() != 1) throw std::invalid_argument("step expects a single-lane state");
  PackedStream one;
  one.lanes = 1;
  one.window = 1;
  one.tokens = {token};
  one.targets = {-1};
  one.mask = {0};
  ForwardResult<Scalar> r = forward(params, one, state);
  return {r.logits.col(0), std::move(r.final_state)};
}

template <typename Scalar>
std::vector<int32_t> argmax_columns(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& logits) {
  std::vector<int32_t> out(static_cast<std::size_t>(logits.cols()));
  for (Eigen::Index j = 0; j < logits.cols(); ++j) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < logits.rows(); ++k)
      if (logits(k, j) > logits(best, j)) best = k;
    out[static_cast<std::size_t>(j)] = static_cast<int32_t>(best);
  }
  return out;
}

template <typename Scalar>
WindowResult<Scalar> backward(const LstmParams<Scalar>& params, const PackedStream& window,
                              const LstmState<Scalar>& initial, bool reset_at_starts) {
  using Matrix = typename LstmParams<Scalar>::Matrix;
  ForwardResult<Scalar> fwd = forward(params, window, initial, reset_at_starts);
  const LstmConfig& cfg = params.config();
  const Eigen::Index n = cfg.width;
  const Eigen::Index lanes = window.lanes;
  const int steps = window.window;
  const Eigen::Index cols = lanes * steps;

  WindowResult<Scalar> out{0.0, LstmParams<Scalar>(cfg), std::move(fwd.final_state), 0, 0};
  out.masked = window.masked_count();
  if (out.masked == 0) {
    std::cerr << "warning: window has no masked positions; loss and gradients are zero\n";
    return out;
  }

  // Fused softmax + cross-entropy on masked columns.
  Matrix dlogits = Matrix::Zero(cfg.vocab_out, cols);
  double loss_sum = 0.0;
  const Scalar inv_count = Scalar(1) / static_cast<Scalar>(out.masked);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const auto at = static_cast<std::size_t>(j);
    if (!window.mask[at]) continue;
    const Eigen::VectorXd z = fwd.logits.col(j).template cast<double>();
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < z.size(); ++k)
      if (z[k] > z[best]) best = k;
    // Sorted summation keeps the loss invariant under output relabeling.
    Eigen::ArrayXd shifted = (z.array() - z[best]).exp();
    std::sort(shifted.data(), shifted.data() + shifted.size());
    const double lse = z[best] + std::log(shifted.sum());
    const int32_t target = window.targets[at];
    loss_sum += lse - z[target];
    if (best == target) ++out.correct;
    dlogits.col(j) = ((z.array() - lse).exp()).matrix().template cast<Scalar>() * inv_count;
    dlogits(target, j) -= inv_count;
  }
  out.loss = loss_sum / static_cast<double>(out.masked);

  LstmParams<Scalar>& grads = out.grads;
  const Matrix& top = fwd.cache.hidden.back();
  grads.readout().noalias() = dlogits * top.transpose();
  grads.readout_bias() = dlogits.rowwise().sum();
  Matrix dH = params.readout().transpose() * dlogits;

  Matrix dZ(4 * n, cols);
  Matrix dh(n, lanes), dc(n, lanes), dh_next(n, lanes), dc_next(n, lanes);
  for (int l = cfg.depth - 1; l >= 0; --l) {
    const auto li = static_cast<std::size_t>(l);
    const auto W = params.gates(l);
    const auto input_weights = W.leftCols(n);
    const auto recurrent_weights = W.rightCols(n);
    const Matrix& G = fwd.cache.gates[li];
    const Matrix& TC = fwd.cache.tanh_cells[li];
    const Matrix& PH = fwd.cache.prev_hidden[li];
    const Matrix& PC = fwd.cache.prev_cells[li];

    dh_next.setZero();
    dc_next.setZero();
    for (int t = steps - 1; t >= 0; --t) {
      const Eigen::Index at = static_cast<Eigen::Index>(t) * lanes;
      const auto gates = G.middleCols(at, lanes);
      const auto i = gates.topRows(n).array();
      const auto f = gates.middleRows(n, n).array();
      const auto o = gates.middleRows(2 * n, n).array();
      const auto g = gates.bottomRows(n).array();
      const auto tc = TC.middleCols(at, lanes).array();

      dh = dH.middleCols(at, lanes) + dh_next;
      dc.array() = dh.array() * o * (Scalar(1) - tc.square()) + dc_next.array();

      auto dz = dZ.middleCols(at, lanes);
      dz.topRows(n).array() = dc.array() * g * i * (Scalar(1) - i);
      dz.middleRows(n, n).array() = dc.array() * PC.middleCols(at, lanes).array() * f * (Scalar(1) - f);
      dz.middleRows(2 * n, n).array() = dh.array() * tc * o * (Scalar(1) - o);
      dz.bottomRows(n).array() = dc.array() * i * (Scalar(1) - g.square());

      dc_next.array() = dc.array() * f;
      dh_next.noalias() = recurrent_weights.transpose() * dz;
      if (reset_at_starts) {
        for (Eigen::Index lane = 0; lane < lanes; ++lane) {
          if (window.starts[static_cast<std::size_t>(at + lane)]) {
            dh_next.col(lane).setZero();
            dc_next.col(lane).setZero();
          }
        }
      }
    }

    auto gW = grads.gates(l);
    gW.rightCols(n).noalias() = dZ * PH.transpose();
    grads.gate_bias(l) = dZ.rowwise().sum();

    if (l > 0) {
      gW.leftCols(n).noalias() = dZ * fwd.cache.hidden[li - 1].transpose();
      dH.noalias() = input_weights.transpose() * dZ;
    } else {
      Matrix per_token = Matrix::Zero(4 * n, cfg.vocab_in);
      for (Eigen::Index j = 0; j < cols; ++j) per_token.col(window.tokens[static_cast<std::size_t>(j)]) += dZ.col(j);
      gW.leftCols(n).noalias() = per_token * params.embedding().transpose();
      grads.embedding().noalias() = input_weights.transpose() * per_token;
    }
  }
  return out;
}

template class LstmParams<float>;
template class LstmParams<double>;
template struct LstmState<float>;
template struct LstmState<double>;
template ForwardResult<float> forward(const LstmParams<float>&, const PackedStream&, const LstmState<float>&,
                                      bool);
template ForwardResult<double> forward(const LstmParams<double>&, const PackedStream&, const LstmState<double>&,
                                       bool);
template StepResult<float> step(const LstmParams<float>&, const LstmState<float>&, int32_t);
template StepResult<double> step(const LstmParams<double>&, const LstmState<double>&, int32_t);
template WindowResult<float> backward(const LstmParams<float>&, const PackedStream&, const LstmState<float>&,
                                      bool);
template WindowResult<double> backward(const LstmParams<double>&, const PackedStream&,
                                       const LstmState<double>&, bool);
template std::vector<int32_t> argmax_columns(const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic>&);
template std::vector<int32_t> argmax_columns(const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>&);

}  // namespace l2e
