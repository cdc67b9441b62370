#pragma once

// SGD training driver: curriculum-drawn sample stream, truncated BPTT with
// hidden state carried across windows, global-norm clipping, step-decay
// learning rate, and teacher-forced evaluation.

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "l2e/curriculum.hpp"
#include "l2e/encode.hpp"
#include "l2e/lstm.hpp"
#include "l2e/sample.hpp"

namespace l2e {

enum class Precision : uint8_t { f32, f64 };

struct TrainConfig {
  int minibatch = 100;
  int window = 50;
  double lr0 = 0.5;
  double lr_decay = 0.8;
  double clip_norm = 5.0;
  double target_accuracy = 0.95;
  double lr_floor = 0.001;
  int max_epochs = 20;
  int64_t epoch_size = 500000;
  int eval_interval = 100;
  int val_size = 200;
  int test_size = 1000;
  int64_t max_samples = 0;  // 0: no cap beyond the task's own stopping rule
  uint64_t seed = 1;
  Precision precision = Precision::f32;
  // Zero a lane's state at each sample start instead of carrying it over
  // from the previous sample (state still carries across windows).
  bool reset_per_sample = true;

  void validate() const;
};

/// lr0 until the target difficulty is reached with validation accuracy at
/// or above target_accuracy, then x lr_decay once, then x lr_decay after every
/// evaluation whose training accuracy does not beat the best so far by more
/// than `min_delta`.
class LearningRateSchedule {
 public:
  LearningRateSchedule(const TrainConfig& config, double min_delta);

  double rate() const noexcept { return rate_; }
  bool decaying() const noexcept { return decaying_; }
  int decays() const noexcept { return decays_; }
  bool below_floor() const noexcept { return rate_ < floor_; }

  double observe(bool reached_target, double val_char_accuracy, double train_char_accuracy);

 private:
  double rate_;
  double decay_;
  double target_;
  double floor_;
  double min_delta_;
  bool decaying_ = false;
  int decays_ = 0;
  double best_train_ = -1.0;
};

struct TrainLogRow {
  int64_t step = 0;
  int64_t epoch = 0;
  Difficulty difficulty;
  double learning_rate = 0.0;
  double train_loss = 0.0;
  double train_char_accuracy = 0.0;
  double val_char_accuracy = 0.0;
  double val_seq_accuracy = 0.0;
  double wall_time = 0.0;
};

/// Scales `grads` by clip_norm / N when N, the global L2 norm of
/// grads / minibatch, exceeds clip_norm.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> clip_gradients(Eigen::Matrix<Scalar, Eigen::Dynamic, 1> grads,
                                                        double clip_norm, int minibatch);

struct Accuracy {
  double char_accuracy = 0.0;
  double seq_accuracy = 0.0;
  std::size_t positions = 0;
  std::size_t samples = 0;
};

/// Predicted output id for every cell of a window; only masked cells are read.
using Predictor = std::function<std::vector<int32_t>(const PackedStream&)>;

/// Each sample is scored from a zero state with the true previous target
/// characters fed back in. Throws UsageError on an empty sample list.
Accuracy teacher_forced_accuracy(const Predictor& predictor, std::span<const Sample> samples,
                                 const Vocabulary& vocab, int batch = 64);

/// Holds a reference to `params`, which must outlive the predictor.
template <typename Scalar>
Predictor lstm_predictor(const LstmParams<Scalar>& params);
/// Uniformly random guesses over the output alphabet.
Predictor uniform_predictor(int vocab_out, uint64_t seed);
/// Always right; for harness self-checks.
Predictor oracle_predictor();

/// Fixed evaluation set: `count` samples at `difficulty` from `split`.
std::vector<Sample> make_eval_set(Task task, Difficulty difficulty, int count, Split split, uint64_t seed,
                                  InputTransforms transforms);

struct RunHooks {
  std::string checkpoint_dir;  // empty: no checkpoints
  std::ostream* progress = nullptr;
  std::function<void(const TrainLogRow&)> on_eval;
  /// Called with every training window before its update.
  std::function<void(const PackedStream&)> on_window;
};

struct TrainResult {
  LstmParams<double> params;
  std::vector<TrainLogRow> log;
  CurriculumState curriculum;
  Accuracy test;
  int64_t samples_consumed = 0;
  int64_t steps = 0;
  std::string stop_reason;
};

/// Full training run. Throws TrainingError on a non-finite loss.
TrainResult run(const TrainConfig& train, LstmConfig lstm, const CurriculumConfig& curriculum, Task task,
                InputTransforms transforms, const RunHooks& hooks = {});

std::string log_csv_header(bool wall_time);
std::string log_csv_row(const TrainLogRow& row, bool wall_time);
/// Shortest round-trip decimal form used in every CSV this project writes.
std::string format_number(double value);

}  // namespace l2e
