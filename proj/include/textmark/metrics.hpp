#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "textmark/detection.hpp"
#include "textmark/encoder.hpp"

namespace textmark {

double pairwise_sum(std::span<const double> values);

// Rounds to 4 decimals for reports.
double round4(double v);

struct LabeledCollection {
  std::vector<std::string> sentences;
  Label label = Label::Unmarked;
};

// |detect(x_a) - y| - |detect(x) - y| on hard collection labels: +1 the attack broke a
// correct verdict, -1 it fixed a wrong one.
int ioa(const Detector& detector, const std::vector<std::string>& x, const std::vector<std::string>& x_attacked,
        Label y);

struct AttackedItem {
  std::vector<std::string> x;
  std::vector<std::string> x_attacked;
  Label y;
};

double mioa(const Detector& detector, const std::vector<AttackedItem>& dataset);

double msms_over_pairs(const SentenceEncoder& encoder,
                       const std::vector<std::pair<std::string, std::string>>& pairs);

struct Counts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

struct EvalReport {
  std::optional<double> msms;
  std::optional<double> mioa;
  std::optional<double> accuracy;
  std::optional<double> tpr;
  std::optional<double> fnr;
  Counts counts;
};

// Pairs of (predicted, true).
EvalReport confusion_metrics(const std::vector<std::pair<Label, Label>>& verdicts);

// Absent ratios are left out; numbers rounded to 4 places.
nlohmann::json to_json(const EvalReport& report);

}  // namespace textmark
