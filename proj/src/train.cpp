#include "l2e/train.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "l2e/errors.hpp"
#include "l2e/taskgen.hpp"

namespace l2e {

void TrainConfig::validate() const {
  if (minibatch < 1 || window < 1) throw UsageError("minibatch and window must be >= 1");
  if (!(lr0 > 0.0)) throw UsageError("learning rate must be positive");
  if (!(lr_decay > 0.0 && lr_decay < 1.0)) throw UsageError("lr_decay must be in (0, 1)");
  if (!(clip_norm > 0.0)) throw UsageError("clip_norm must be positive");
  if (!(target_accuracy > 0.0 && target_accuracy <= 1.0)) throw UsageError("target_accuracy must be in (0, 1]");
  if (!(lr_floor > 0.0)) throw UsageError("lr_floor must be positive");
  if (max_epochs < 1 || epoch_size < 1) throw UsageError("max_epochs and epoch_size must be >= 1");
  if (eval_interval < 1) throw UsageError("eval_interval must be >= 1");
  if (val_size < 1 || test_size < 1) throw UsageError("val_size and test_size must be >= 1");
  if (max_samples < 0) throw UsageError("max_samples must be >= 0");
}

LearningRateSchedule::LearningRateSchedule(const TrainConfig& config, double min_delta)
    : rate_(config.lr0),
      decay_(config.lr_decay),
      target_(config.target_accuracy),
      floor_(config.lr_floor),
      min_delta_(min_delta) {}

double LearningRateSchedule::observe(bool reached_target, double val_char_accuracy,
                                     double train_char_accuracy) {
  if (!decaying_) {
    if (reached_target && val_char_accuracy >= target_) {
      decaying_ = true;
      rate_ *= decay_;
      ++decays_;
      best_train_ = train_char_accuracy;
    }
  } else if (train_char_accuracy > best_train_ + min_delta_) {
    best_train_ = train_char_accuracy;
  } else {
    rate_ *= decay_;
    ++decays_;
  }
  return rate_;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> clip_gradients(Eigen::Matrix<Scalar, Eigen::Dynamic, 1> grads,
                                                        double clip_norm, int minibatch) {
  if (!(clip_norm > 0.0)) throw std::invalid_argument("clip_norm must be positive");
  if (minibatch < 1) throw std::invalid_argument("minibatch must be >= 1");
  const double norm = grads.template cast<double>().norm() / minibatch;
  if (norm > clip_norm) grads *= static_cast<Scalar>(clip_norm / norm);
  return grads;
}

template Eigen::VectorXf clip_gradients(Eigen::VectorXf, double, int);
template Eigen::VectorXd clip_gradients(Eigen::VectorXd, double, int);

Accuracy teacher_forced_accuracy(const Predictor& predictor, std::span<const Sample> samples,
                                 const Vocabulary& vocab, int batch) {
  if (samples.empty()) throw UsageError("teacher-forced accuracy needs at least one sample");
  if (batch < 1) throw UsageError("batch must be >= 1");
  Accuracy acc;
  std::size_t correct_chars = 0;
  std::size_t correct_samples = 0;
  for (std::size_t begin = 0; begin < samples.size(); begin += static_cast<std::size_t>(batch)) {
    const std::size_t count = std::min(samples.size() - begin, static_cast<std::size_t>(batch));
    const auto chunk = samples.subspan(begin, count);
    std::size_t longest = 0;
    for (const Sample& s : chunk) longest = std::max(longest, s.code.size() + s.target.size());
    // One lane per sample and one window per chunk: every sample starts
    // from a zero state.
    const std::vector<PackedStream> windows =
        pack(chunk, vocab, static_cast<int>(count), static_cast<int>(longest));
    const PackedStream& w = windows.front();
    const std::vector<int32_t> predicted = predictor(w);
    for (int lane = 0; lane < w.lanes; ++lane) {
      bool all = true;
      for (int t = 0; t < w.window; ++t) {
        const std::size_t at = w.index(t, lane);
        if (!w.mask[at]) continue;
        ++acc.positions;
        if (predicted[at] == w.targets[at]) {
          ++correct_chars;
        } else {
          all = false;
        }
      }
      if (all) ++correct_samples;
      ++acc.samples;
    }
  }
  acc.char_accuracy = static_cast<double>(correct_chars) / static_cast<double>(acc.positions);
  acc.seq_accuracy = static_cast<double>(correct_samples) / static_cast<double>(acc.samples);
  return acc;
}

template <typename Scalar>
Predictor lstm_predictor(const LstmParams<Scalar>& params) {
  return [&params](const PackedStream& w) {
    const auto zero = LstmState<Scalar>::zeros(params.config(), w.lanes);
    return argmax_columns<Scalar>(forward(params, w, zero).logits);
  };
}

template Predictor lstm_predictor(const LstmParams<float>&);
template Predictor lstm_predictor(const LstmParams<double>&);

Predictor uniform_predictor(int vocab_out, uint64_t seed) {
  auto rng = std::make_shared<SplitMix64>(seed);
  return [rng, vocab_out](const PackedStream& w) {
    std::vector<int32_t> out(w.tokens.size());
    for (auto& id : out) id = static_cast<int32_t>(rng->uniform(0, static_cast<uint64_t>(vocab_out - 1)));
    return out;
  };
}

Predictor oracle_predictor() {
  return [](const PackedStream& w) { return w.targets; };
}

std::vector<Sample> make_eval_set(Task task, Difficulty difficulty, int count, Split split, uint64_t seed,
                                  InputTransforms transforms) {
  SplitMix64 rng(seed);
  std::vector<Sample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    out.push_back(apply_transforms(
        generate_task_sample(task, difficulty.length, difficulty.nesting, rng, split), transforms));
  return out;
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string log_csv_header(bool wall_time) {
  std::string h =
      "step,epoch,length,nesting,learning_rate,train_loss,train_char_accuracy,val_char_accuracy,"
      "val_seq_accuracy";
  if (wall_time) h += ",wall_time";
  return h;
}

std::string log_csv_row(const TrainLogRow& r, bool wall_time) {
  std::string s = std::to_string(r.step) + "," + std::to_string(r.epoch) + "," +
                  std::to_string(r.difficulty.length) + "," + std::to_string(r.difficulty.nesting) + "," +
                  format_number(r.learning_rate) + "," + format_number(r.train_loss) + "," +
                  format_number(r.train_char_accuracy) + "," + format_number(r.val_char_accuracy) + "," +
                  format_number(r.val_seq_accuracy);
  if (wall_time) s += "," + format_number(r.wall_time);
  return s;
}

namespace {

// Large per-step buffers stay in the malloc arena.
void retain_large_allocations() {
#if defined(__GLIBC__)
  static const bool once = [] {
    mallopt(M_MMAP_THRESHOLD, 1 << 30);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
    return true;
  }();
  (void)once;
#endif
}

uint64_t difficulty_key(Difficulty d) {
  return static_cast<uint64_t>(d.length) * 1000003ULL + static_cast<uint64_t>(d.nesting);
}

template <typename Scalar>
class Trainer {
 public:
  Trainer(const TrainConfig& train, const LstmConfig& lstm, const CurriculumConfig& curriculum, Task task,
          InputTransforms transforms, const RunHooks& hooks)
      : train_(train),
        curriculum_config_(curriculum),
        task_(task),
        transforms_(transforms),
        hooks_(hooks),
        vocab_(Vocabulary::for_task(task)),
        params_(lstm),
        data_rng_(derive_seed(train.seed, "train-data")) {
    SplitMix64 init_rng(derive_seed(train.seed, "init"));
    params_ = init_params(lstm, init_rng).template cast<Scalar>();
    curriculum_ = initial_state(curriculum);
  }

  TrainResult run() {
    const auto started = std::chrono::steady_clock::now();
    int64_t budget = 0;
    if (task_ == Task::memorize) budget = static_cast<int64_t>(train_.max_epochs) * train_.epoch_size;
    if (train_.max_samples > 0) budget = budget > 0 ? std::min(budget, train_.max_samples) : train_.max_samples;

    StreamPacker packer(vocab_, train_.minibatch, train_.window);
    const StreamPacker::Source source = [&]() -> std::optional<Sample> {
      if (budget > 0 && consumed_ >= budget) return std::nullopt;
      const Difficulty d = draw_difficulty(curriculum_config_, curriculum_, data_rng_);
      ++consumed_;
      return apply_transforms(generate_task_sample(task_, d.length, d.nesting, data_rng_, Split::train),
                              transforms_);
    };

    auto state = LstmState<Scalar>::zeros(params_.config(), train_.minibatch);
    LearningRateSchedule schedule(train_, curriculum_config_.stall_min_delta);
    double lr = schedule.rate();
    double interval_loss = 0.0;
    std::size_t interval_masked = 0, interval_correct = 0;
    int64_t last_logged_step = -1;
    std::string stop_reason = "sample stream exhausted";

    auto evaluate_and_log = [&](bool final) {
      const Difficulty during = curriculum_.current();
      const Accuracy at_target = validate(curriculum_config_.target());
      TrainLogRow row;
      row.step = steps_;
      row.epoch = consumed_ / train_.epoch_size;
      row.difficulty = during;
      row.learning_rate = lr;
      row.train_loss = interval_masked ? interval_loss / static_cast<double>(interval_masked) : 0.0;
      row.train_char_accuracy =
          interval_masked ? static_cast<double>(interval_correct) / static_cast<double>(interval_masked) : 0.0;
      row.val_char_accuracy = at_target.char_accuracy;
      row.val_seq_accuracy = at_target.seq_accuracy;
      row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      log_.push_back(row);
      last_logged_step = steps_;
      if (hooks_.on_eval) hooks_.on_eval(row);
      if (hooks_.progress)
        *hooks_.progress << "step " << row.step << " difficulty (" << during.length << "," << during.nesting
                         << ") lr " << lr << " loss " << row.train_loss << " train_acc "
                         << row.train_char_accuracy << " val_acc " << row.val_char_accuracy << "\n";
      if (final) return;

      const double at_current =
          during == curriculum_config_.target() ? at_target.char_accuracy : validate(during).char_accuracy;
      const CurriculumState before = curriculum_;
      curriculum_ = observe_validation(curriculum_config_, curriculum_, at_current);
      if (advanced(before, curriculum_)) {
        if (hooks_.progress)
          *hooks_.progress << "curriculum: step " << steps_ << " advanced to (" << curriculum_.current_length
                           << "," << curriculum_.current_nesting << ") after val_acc " << at_current
                           << " [patience " << curriculum_config_.stall_patience << ", min_delta "
                           << curriculum_config_.stall_min_delta << "]\n";
        checkpoint("advance_step" + std::to_string(steps_) + ".ckpt");
      }

      lr = schedule.observe(curriculum_.reached_target, at_target.char_accuracy, row.train_char_accuracy);
      interval_loss = 0.0;
      interval_masked = interval_correct = 0;
    };

    for (;;) {
      std::optional<PackedStream> window = packer.next(source);
      if (!window) break;
      if (hooks_.on_window) hooks_.on_window(*window);
      WindowResult<Scalar> r = backward(params_, *window, state, train_.reset_per_sample);
      if (!std::isfinite(r.loss)) {
        throw TrainingError("non-finite loss at step " + std::to_string(steps_) + " (lr " + format_number(lr) +
                            ", difficulty " + std::to_string(curriculum_.current_length) + "," +
                            std::to_string(curriculum_.current_nesting) + ")");
      }
      state = std::move(r.final_state);
      if (r.masked > 0) {
        // Gradient of the summed loss, normalized by the minibatch size.
        auto grads = clip_gradients<Scalar>(r.grads.flat() * static_cast<Scalar>(r.masked), train_.clip_norm,
                                            train_.minibatch);
        params_.flat() -= static_cast<Scalar>(lr / train_.minibatch) * grads;
        if (!params_.flat().allFinite())
          throw TrainingError("non-finite parameters after step " + std::to_string(steps_) + " (lr " +
                              format_number(lr) + ")");
      }
      ++steps_;
      interval_loss += r.loss * static_cast<double>(r.masked);
      interval_masked += r.masked;
      interval_correct += r.correct;

      if (steps_ % train_.eval_interval == 0) {
        evaluate_and_log(false);
        if (task_ != Task::memorize && schedule.below_floor()) {
          stop_reason = "learning rate below floor";
          break;
        }
      }
    }
    if (budget > 0 && consumed_ >= budget) stop_reason = "sample budget reached";
    if (last_logged_step != steps_) evaluate_and_log(true);

    TrainResult result{params_.template cast<double>(), std::move(log_), curriculum_, {}, consumed_, steps_,
                       stop_reason};
    const auto test_set = make_eval_set(task_, curriculum_config_.target(), train_.test_size, Split::test,
                                        derive_seed(train_.seed, "test"), transforms_);
    result.test = teacher_forced_accuracy(lstm_predictor(params_), test_set, vocab_);
    checkpoint("final.ckpt");
    return result;
  }

 private:
  Accuracy validate(Difficulty d) {
    auto it = val_sets_.find(difficulty_key(d));
    if (it == val_sets_.end()) {
      it = val_sets_
               .emplace(difficulty_key(d),
                        make_eval_set(task_, d, train_.val_size, Split::validation,
                                      derive_seed(train_.seed, "validation", difficulty_key(d)), transforms_))
               .first;
    }
    return teacher_forced_accuracy(lstm_predictor(params_), it->second, vocab_);
  }

  void checkpoint(const std::string& name) {
    if (hooks_.checkpoint_dir.empty()) return;
    std::filesystem::create_directories(hooks_.checkpoint_dir);
    save_checkpoint((std::filesystem::path(hooks_.checkpoint_dir) / name).string(), params_.template cast<double>());
  }

  TrainConfig train_;
  CurriculumConfig curriculum_config_;
  Task task_;
  InputTransforms transforms_;
  const RunHooks& hooks_;
  Vocabulary vocab_;
  LstmParams<Scalar> params_;
  SplitMix64 data_rng_;
  CurriculumState curriculum_;
  std::map<uint64_t, std::vector<Sample>> val_sets_;
  std::vector<TrainLogRow> log_;
  int64_t consumed_ = 0;
  int64_t steps_ = 0;
};

}  // namespace

TrainResult run(const TrainConfig& train, LstmConfig lstm, const CurriculumConfig& curriculum, Task task,
                InputTransforms transforms, const RunHooks& hooks) {
  train.validate();
  curriculum.validate();
  if (task != Task::program && curriculum.target_nesting != 1)
    throw UsageError("nesting applies to the program task only");
  const Vocabulary vocab = Vocabulary::for_task(task);
  lstm.vocab_in = vocab.input_size();
  lstm.vocab_out = vocab.output_size();
  lstm.validate();
  retain_large_allocations();
  if (train.precision == Precision::f64)
    return Trainer<double>(train, lstm, curriculum, task, transforms, hooks).run();
  return Trainer<float>(train, lstm, curriculum, task, transforms, hooks).run();
}

}  // namespace l2e
