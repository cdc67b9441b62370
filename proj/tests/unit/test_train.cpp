#include <doctest.h>

#include <filesystem>

#include "l2e/errors.hpp"
#include "l2e/progsynth.hpp"
#include "l2e/taskgen.hpp"
#include "l2e/train.hpp"

using namespace l2e;

namespace {

TrainConfig small_train() {
  TrainConfig t;
  t.minibatch = 8;
  t.window = 20;
  t.eval_interval = 20;
  t.val_size = 40;
  t.test_size = 40;
  t.max_samples = 1500;
  t.seed = 3;
  return t;
}

LstmConfig small_lstm() {
  LstmConfig l;
  l.depth = 1;
  l.width = 12;
  return l;
}

CurriculumConfig small_curriculum(int length, Strategy s = Strategy::combined) {
  CurriculumConfig c;
  c.target_length = length;
  c.target_nesting = 1;
  c.strategy = s;
  return c;
}

}  // namespace

TEST_SUITE("train") {
  TEST_CASE("clipping scales only above the threshold") {
    Eigen::VectorXd g(2);
    g << 60.0, 80.0;  // norm 100, normalized by 10 -> 10
    const Eigen::VectorXd c = clip_gradients<double>(g, 5.0, 10);
    CHECK(c[0] == doctest::Approx(30.0));
    CHECK(c[1] == doctest::Approx(40.0));

    Eigen::VectorXd h(2);
    h << 18.0, 24.0;  // norm 30 / 10 = 3
    CHECK(clip_gradients<double>(h, 5.0, 10) == h);

    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(5);
    CHECK(clip_gradients<double>(zero, 5.0, 10) == zero);
  }

  TEST_CASE("clipped gradients respect the bound and keep their direction") {
    SplitMix64 rng(1);
    for (int k = 0; k < 1000; ++k) {
      Eigen::VectorXd g(50);
      const double scale = std::pow(10.0, rng.uniform_real(-2, 4));
      for (auto& x : g) x = rng.uniform_real(-1, 1) * scale;
      const int mb = rng.uniform_int(1, 100);
      const Eigen::VectorXd c = clip_gradients<double>(g, 5.0, mb);
      REQUIRE(c.norm() / mb <= 5.0 + 1e-9);
      REQUIRE(c.normalized().dot(g.normalized()) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("learning rate decays 28 times from 0.5 before dropping under 0.001") {
    TrainConfig cfg;
    LearningRateSchedule s(cfg, 0.001);
    CHECK(s.observe(false, 0.99, 0.5) == 0.5);  // target not reached
    CHECK(s.observe(true, 0.90, 0.5) == 0.5);   // accuracy short of 0.95
    double prev = s.observe(true, 0.96, 0.5);
    CHECK(prev == doctest::Approx(0.4));
    CHECK(s.decaying());
    std::vector<double> trace = {0.5, prev};
    while (!s.below_floor()) {
      const double next = s.observe(true, 0.96, 0.5);
      CHECK(next == doctest::Approx(prev * 0.8));
      prev = next;
      trace.push_back(next);
    }
    CHECK(s.decays() == 28);
    CHECK(trace[2] == doctest::Approx(0.32));
    CHECK(trace[27] >= 0.001);
    CHECK(trace[28] < 0.001);
  }

  TEST_CASE("training-accuracy improvements hold the rate") {
    TrainConfig cfg;
    LearningRateSchedule s(cfg, 0.001);
    s.observe(true, 0.97, 0.50);
    CHECK(s.observe(true, 0.97, 0.60) == doctest::Approx(0.4));
    CHECK(s.observe(true, 0.97, 0.6005) == doctest::Approx(0.32));
    CHECK(s.observe(true, 0.50, 0.70) == doctest::Approx(0.32));
  }

  TEST_CASE("oracle predictor is perfect, including on single-digit targets") {
    const Vocabulary v;
    std::vector<Sample> samples;
    samples.push_back(make_addition(3, 4));  // target "7."
    SplitMix64 rng(2);
    for (int i = 0; i < 100; ++i) samples.push_back(generate(GenConfig{3, 2, 0}, rng));
    const Accuracy a = teacher_forced_accuracy(oracle_predictor(), samples, v);
    CHECK(a.char_accuracy == 1.0);
    CHECK(a.seq_accuracy == 1.0);
    const Accuracy one = teacher_forced_accuracy(oracle_predictor(), std::vector<Sample>{samples[0]}, v);
    CHECK(one.positions == 2);
  }

  TEST_CASE("uniform guessing scores about 1/12 on programs and 1/11 on memorization") {
    SplitMix64 rng(3);
    std::vector<Sample> programs, digits;
    for (int i = 0; i < 10000; ++i) {
      programs.push_back(generate(GenConfig{4, 1, 0}, rng));
      digits.push_back(gen_memorize(MemorizeConfig{rng.uniform_int(5, 20), 0}, rng));
    }
    const Accuracy p = teacher_forced_accuracy(uniform_predictor(12, 4), programs, Vocabulary(), 256);
    const Accuracy m = teacher_forced_accuracy(uniform_predictor(11, 5), digits,
                                               Vocabulary(Vocabulary::kMemorizeOutputs), 256);
    CHECK(p.char_accuracy == doctest::Approx(1.0 / 12).epsilon(0.01 * 12));
    CHECK(std::abs(p.char_accuracy - 1.0 / 12) < 0.01);
    CHECK(std::abs(m.char_accuracy - 1.0 / 11) < 0.01);
  }

  TEST_CASE("untrained models score near chance on program targets") {
    // Mean over initializations.
    SplitMix64 rng(6);
    std::vector<Sample> programs;
    for (int i = 0; i < 1000; ++i) programs.push_back(generate(GenConfig{4, 1, 0}, rng));
    double sum = 0.0;
    const int models = 24;
    for (int seed = 1; seed <= models; ++seed) {
      SplitMix64 init(derive_seed(static_cast<uint64_t>(seed), "init"));
      const auto params = init_params(LstmConfig{2, 32, 51, 12, 0.08}, init).cast<float>();
      sum += teacher_forced_accuracy(lstm_predictor(params), programs, Vocabulary()).char_accuracy;
    }
    const double mean = sum / models;
    MESSAGE("mean untrained accuracy " << mean);
    CHECK(mean >= 0.05);
    CHECK(mean <= 0.13);
  }

  TEST_CASE("an empty evaluation set is rejected") {
    CHECK_THROWS_AS(teacher_forced_accuracy(oracle_predictor(), std::vector<Sample>{}, Vocabulary()),
                    UsageError);
  }

  TEST_CASE("memorization stops after max_epochs * epoch_size samples") {
    TrainConfig t = small_train();
    t.max_samples = 0;
    t.epoch_size = 1000;
    t.max_epochs = 2;
    const auto r = run(t, small_lstm(), small_curriculum(3), Task::memorize, {});
    CHECK(r.samples_consumed == 2000);
    CHECK(r.stop_reason == "sample budget reached");
  }

  TEST_CASE("identical seeds give identical logs") {
    const TrainConfig t = small_train();
    const auto a = run(t, small_lstm(), small_curriculum(3), Task::addition, {});
    const auto b = run(t, small_lstm(), small_curriculum(3), Task::addition, {});
    REQUIRE(a.log.size() == b.log.size());
    for (std::size_t i = 0; i < a.log.size(); ++i)
      CHECK(log_csv_row(a.log[i], false) == log_csv_row(b.log[i], false));
    CHECK(a.params.flat() == b.params.flat());
  }

  TEST_CASE("memorization loss decreases") {
    TrainConfig t = small_train();
    t.minibatch = 20;
    t.eval_interval = 50;
    t.max_samples = 35000;
    t.lr0 = 0.5;
    const auto r = run(t, LstmConfig{1, 16}, small_curriculum(2, Strategy::baseline), Task::memorize, {});
    REQUIRE(r.steps >= 500);
    REQUIRE(r.log.size() >= 2);
    CHECK(r.log.back().train_loss < r.log.front().train_loss);
  }

  TEST_CASE("log rows are well formed") {
    TrainConfig t = small_train();
    t.max_samples = 4000;
    CurriculumConfig c = small_curriculum(3, Strategy::naive);
    c.stall_patience = 1;
    const auto r = run(t, small_lstm(), c, Task::addition, {});
    REQUIRE(!r.log.empty());
    for (std::size_t i = 0; i < r.log.size(); ++i) {
      const auto& row = r.log[i];
      CHECK(row.train_char_accuracy >= 0.0);
      CHECK(row.train_char_accuracy <= 1.0);
      CHECK(row.val_char_accuracy >= 0.0);
      CHECK(row.val_char_accuracy <= 1.0);
      CHECK(row.val_seq_accuracy <= row.val_char_accuracy + 1e-12);
      if (i > 0) {
        CHECK(row.step > r.log[i - 1].step);
        CHECK(row.learning_rate <= r.log[i - 1].learning_rate);
        CHECK_FALSE(row.difficulty < r.log[i - 1].difficulty);
      }
    }
  }

  TEST_CASE("divergence aborts with a diagnostic") {
    TrainConfig t = small_train();
    t.lr0 = 1e300;
    try {
      run(t, small_lstm(), small_curriculum(2), Task::addition, {});
      FAIL("expected divergence");
    } catch (const TrainingError& e) {
      CHECK(std::string(e.what()).find("lr") != std::string::npos);
    }
  }

  TEST_CASE("checkpoints are written at advancement and termination") {
    const auto dir = std::filesystem::temp_directory_path() / "l2e_train_ckpt";
    std::filesystem::remove_all(dir);
    TrainConfig t = small_train();
    CurriculumConfig c = small_curriculum(3, Strategy::naive);
    c.stall_patience = 1;
    RunHooks hooks;
    hooks.checkpoint_dir = dir.string();
    const auto r = run(t, small_lstm(), c, Task::addition, {}, hooks);
    CHECK(std::filesystem::exists(dir / "final.ckpt"));
    int advances = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir))
      advances += e.path().filename().string().rfind("advance_", 0) == 0;
    CHECK(advances >= 1);
    const auto back = load_checkpoint((dir / "final.ckpt").string());
    CHECK(back.flat() == r.params.flat());
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("csv formatting") {
    TrainLogRow row;
    row.step = 20;
    row.epoch = 0;
    row.difficulty = {3, 1};
    row.learning_rate = 0.5;
    row.train_loss = 2.25;
    row.train_char_accuracy = 0.125;
    row.val_char_accuracy = 0.25;
    row.val_seq_accuracy = 0.0;
    row.wall_time = 1.5;
    CHECK(log_csv_header(false) ==
          "step,epoch,length,nesting,learning_rate,train_loss,train_char_accuracy,val_char_accuracy,"
          "val_seq_accuracy");
    CHECK(log_csv_row(row, false) == "20,0,3,1,0.5,2.25,0.125,0.25,0");
    CHECK(log_csv_row(row, true) == "20,0,3,1,0.5,2.25,0.125,0.25,0,1.5");
  }

  TEST_CASE("configuration validation") {
    TrainConfig t;
    t.lr_decay = 1.0;
    CHECK_THROWS_AS(t.validate(), UsageError);
    CurriculumConfig c = small_curriculum(2);
    c.target_nesting = 2;
    CHECK_THROWS_AS(run(small_train(), small_lstm(), c, Task::addition, {}), UsageError);
  }
}
