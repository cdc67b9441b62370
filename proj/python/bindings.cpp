#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "cli.hpp"
#include "l2e/dataset.hpp"
#include "l2e/encode.hpp"
#include "l2e/errors.hpp"
#include "l2e/interp.hpp"
#include "l2e/progsynth.hpp"
#include "l2e/stats.hpp"
#include "l2e/taskgen.hpp"
#include "l2e/train.hpp"

namespace py = pybind11;
using namespace l2e;

namespace {

std::optional<Split> optional_split(const std::optional<std::string>& split) {
  if (!split) return std::nullopt;
  return parse_split(*split);
}

std::vector<Sample> generate_samples(const std::string& task, int length, int nesting, int64_t count,
                                     uint64_t seed, const std::optional<std::string>& split) {
  DatasetSpec spec;
  spec.task = parse_task(task);
  spec.length = length;
  spec.nesting = nesting;
  spec.count = count;
  spec.seed = seed;
  spec.split = optional_split(split);
  std::vector<Sample> out;
  for (auto& r : generate_dataset(spec)) out.push_back(std::move(r.sample));
  return out;
}

py::dict char_statistics(const std::vector<Sample>& samples) {
  const CharDistribution d = analyze(samples);
  py::dict out;
  for (PositionClass cls : kPositionClasses) {
    py::dict freq;
    for (const auto& f : d.ranked(cls)) freq[py::str(std::string(1, f.symbol))] = f.frequency;
    out[py::str(std::string(to_string(cls)))] = freq;
  }
  out["samples"] = d.samples();
  return out;
}

py::dict train(const std::string& task, int length, int nesting, const std::string& strategy, int hidden,
               int layers, int minibatch, int window, double lr, int eval_interval, int64_t max_samples,
               int val_size, int test_size, bool reverse, bool doubled, uint64_t seed) {
  TrainConfig t;
  t.minibatch = minibatch;
  t.window = window;
  t.lr0 = lr;
  t.eval_interval = eval_interval;
  t.max_samples = max_samples;
  t.val_size = val_size;
  t.test_size = test_size;
  t.seed = seed;
  LstmConfig l;
  l.depth = layers;
  l.width = hidden;
  CurriculumConfig c;
  c.target_length = length;
  c.target_nesting = nesting;
  c.strategy = parse_strategy(strategy);
  std::optional<TrainResult> result;
  {
    py::gil_scoped_release release;
    result.emplace(run(t, l, c, parse_task(task), InputTransforms{reverse, doubled}));
  }
  const TrainResult& r = *result;
  py::list log;
  for (const auto& row : r.log) {
    py::dict d;
    d["step"] = row.step;
    d["length"] = row.difficulty.length;
    d["nesting"] = row.difficulty.nesting;
    d["learning_rate"] = row.learning_rate;
    d["train_loss"] = row.train_loss;
    d["train_char_accuracy"] = row.train_char_accuracy;
    d["val_char_accuracy"] = row.val_char_accuracy;
    d["val_seq_accuracy"] = row.val_seq_accuracy;
    log.append(d);
  }
  py::dict out;
  out["test_char_accuracy"] = r.test.char_accuracy;
  out["test_seq_accuracy"] = r.test.seq_accuracy;
  out["steps"] = r.steps;
  out["samples_consumed"] = r.samples_consumed;
  out["stop_reason"] = r.stop_reason;
  out["log"] = log;
  return out;
}

py::tuple run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = 0;
  {
    py::gil_scoped_release release;
    code = cli::run(args, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Program generation, interpretation and LSTM training";
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SyntaxError>(m, "ProgramSyntaxError", PyExc_ValueError);
  py::register_exception<EvalError>(m, "EvalError", PyExc_RuntimeError);
  py::register_exception<EncodingError>(m, "EncodingError", PyExc_ValueError);
  py::register_exception<TrainingError>(m, "TrainingError", PyExc_RuntimeError);

  py::class_<Sample>(m, "Sample")
      .def_readonly("code", &Sample::code)
      .def_readonly("target", &Sample::target)
      .def_readonly("length", &Sample::length)
      .def_readonly("nesting", &Sample::nesting)
      .def_property_readonly("split", [](const Sample& s) { return std::string(to_string(s.split)); })
      .def_property_readonly("task", [](const Sample& s) { return std::string(to_string(s.task)); })
      .def("__eq__", [](const Sample& a, const Sample& b) { return a == b; })
      .def("__repr__", [](const Sample& s) {
        return "Sample(task=" + std::string(to_string(s.task)) + ", code=" + py::repr(py::str(s.code)).cast<std::string>() +
               ", target=" + py::repr(py::str(s.target)).cast<std::string>() + ")";
      });

  m.def(
      "generate_program",
      [](int length, int nesting, uint64_t seed) {
        SplitMix64 rng(seed);
        return generate(GenConfig{length, nesting, seed}, rng);
      },
      "One random program and its value", py::arg("length"), py::arg("nesting"), py::arg("seed"));
  m.def("make_addition", &make_addition, py::arg("lhs"), py::arg("rhs"));
  m.def("make_memorize", &make_memorize, py::arg("digits"));
  m.def("generate", &generate_samples, "Samples drawn as the `gen` command draws them", py::arg("task"),
        py::arg("length"), py::arg("nesting") = 1, py::arg("count") = 1, py::arg("seed") = 1,
        py::arg("split") = py::none());
  m.def(
      "evaluate", [](const std::string& code) { return render_target(interp::run(code)); },
      "Target string of a program, end marker included", py::arg("code"));
  m.def(
      "assign_split", [](const std::string& code) { return std::string(to_string(assign_split(code))); },
      py::arg("code"));
  m.def("reverse_input", &reverse_input, py::arg("code"));
  m.def("double_input", &double_input, py::arg("code"));
  m.def("char_statistics", &char_statistics, "Target character frequencies per position class",
        py::arg("samples"));
  m.def(
      "stats_report", [](const std::vector<Sample>& samples, int top) { return format_report(analyze(samples), top); },
      py::arg("samples"), py::arg("top") = 5);
  m.def("train", &train, "Train one model and return its log and test accuracy", py::arg("task"),
        py::arg("length"), py::arg("nesting") = 1, py::arg("strategy") = "combined", py::arg("hidden") = 128,
        py::arg("layers") = 2, py::arg("minibatch") = 32, py::arg("window") = 50, py::arg("lr") = 0.5,
        py::arg("eval_interval") = 300, py::arg("max_samples") = 2000000, py::arg("val_size") = 200,
        py::arg("test_size") = 1000, py::arg("reverse") = false, py::arg("double") = false, py::arg("seed") = 1);
  m.def("cli", &run_cli, "Run the command-line tool; returns (exit code, stdout, stderr)", py::arg("args"));
}
