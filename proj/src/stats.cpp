#include "l2e/stats.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "l2e/errors.hpp"
#include "l2e/train.hpp"

namespace l2e {

std::string_view to_string(PositionClass cls) noexcept {
  switch (cls) {
    case PositionClass::first: return "first";
    case PositionClass::interior: return "interior";
    case PositionClass::pre_terminal: return "pre_terminal";
    case PositionClass::all: return "all";
  }
  return "?";
}

void CharDistribution::add(std::string_view target) {
  if (!target.empty() && target.back() == kEndMarker) target.remove_suffix(1);
  ++samples_;
  if (target.empty()) return;
  auto tally = [this](PositionClass cls, char c) {
    ++counts_[index(cls)][static_cast<unsigned char>(c)];
    ++totals_[index(cls)];
  };
  for (char c : target) tally(PositionClass::all, c);
  tally(PositionClass::first, target.front());
  tally(PositionClass::pre_terminal, target.back());
  for (std::size_t i = 1; i + 1 < target.size(); ++i) tally(PositionClass::interior, target[i]);
}

void CharDistribution::merge(const CharDistribution& other) {
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    for (std::size_t c = 0; c < 256; ++c) counts_[k][c] += other.counts_[k][c];
    totals_[k] += other.totals_[k];
  }
  samples_ += other.samples_;
}

double CharDistribution::frequency(PositionClass cls, char c) const noexcept {
  const uint64_t t = total(cls);
  return t == 0 ? 0.0 : static_cast<double>(count(cls, c)) / static_cast<double>(t);
}

std::vector<CharFrequency> CharDistribution::ranked(PositionClass cls) const {
  std::vector<CharFrequency> out;
  for (int c = 0; c < 256; ++c) {
    const uint64_t n = counts_[index(cls)][static_cast<std::size_t>(c)];
    if (n > 0) out.push_back({static_cast<char>(c), n, frequency(cls, static_cast<char>(c))});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CharFrequency& a, const CharFrequency& b) { return a.count > b.count; });
  return out;
}

CharDistribution analyze(std::span<const Sample> samples) {
  if (samples.empty()) throw UsageError("analyze needs at least one sample");
  CharDistribution dist;
  for (const Sample& s : samples) dist.add(s.target);
  return dist;
}

std::string format_report(const CharDistribution& dist, int top) {
  std::ostringstream out;
  out << "samples: " << dist.samples() << "\n";
  out << std::fixed << std::setprecision(4);
  for (PositionClass cls : kPositionClasses) {
    out << std::left << std::setw(13) << to_string(cls) << std::right << std::setw(9) << dist.total(cls);
    const auto ranks = dist.ranked(cls);
    for (std::size_t i = 0; i < ranks.size() && i < static_cast<std::size_t>(top); ++i)
      out << "  '" << ranks[i].symbol << "' " << ranks[i].frequency;
    out << "\n";
  }
  out << "guess baseline: program " << kProgramGuessBaseline << ", memorize " << kMemorizeGuessBaseline << "\n";
  return out.str();
}

std::string format_csv(const CharDistribution& dist) {
  std::string out = "class,char,count,frequency\n";
  for (PositionClass cls : kPositionClasses)
    for (const auto& r : dist.ranked(cls))
      out += std::string(to_string(cls)) + "," + r.symbol + "," + std::to_string(r.count) + "," +
             format_number(r.frequency) + "\n";
  return out;
}

}  // namespace l2e
