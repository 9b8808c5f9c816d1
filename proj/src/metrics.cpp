#include "textmark/metrics.hpp"

#include <cmath>
#include <cstdlib>

#include "textmark/error.hpp"

namespace textmark {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double round4(double v) { return std::round(v * 1e4) / 1e4; }

int ioa(const Detector& detector, const std::vector<std::string>& x, const std::vector<std::string>& x_attacked,
        Label y) {
  const int target = static_cast<int>(y);
  const int before = static_cast<int>(detect_collection(detector, x).label);
  const int after = static_cast<int>(detect_collection(detector, x_attacked).label);
  return (1 - std::abs(before - target)) - (1 - std::abs(after - target));
}

double mioa(const Detector& detector, const std::vector<AttackedItem>& dataset) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "mioa over no items");
  std::vector<double> v;
  v.reserve(dataset.size());
  for (const auto& item : dataset) v.push_back(ioa(detector, item.x, item.x_attacked, item.y));
  return pairwise_sum(v) / static_cast<double>(v.size());
}

double msms_over_pairs(const SentenceEncoder& encoder,
                       const std::vector<std::pair<std::string, std::string>>& pairs) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyDataset, "msms over no pairs");
  std::vector<double> v;
  v.reserve(pairs.size());
  for (const auto& [o, m] : pairs) v.push_back(sms(encoder, o, m));
  return pairwise_sum(v) / static_cast<double>(v.size());
}

EvalReport confusion_metrics(const std::vector<std::pair<Label, Label>>& verdicts) {
  if (verdicts.empty()) throw Error(ErrorCode::EmptyDataset, "no verdicts");
  EvalReport r;
  for (auto [pred, truth] : verdicts) {
    if (truth == Label::Watermarked) {
      pred == Label::Watermarked ? ++r.counts.tp : ++r.counts.fn;
    } else {
      pred == Label::Watermarked ? ++r.counts.fp : ++r.counts.tn;
    }
  }
  const auto& c = r.counts;
  r.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(verdicts.size());
  if (c.tp + c.fn > 0) {
    r.tpr = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    r.fnr = static_cast<double>(c.fn) / static_cast<double>(c.tp + c.fn);
  }
  return r;
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json j;
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) j[key] = round4(*v);
  };
  put("msms", report.msms);
  put("mioa", report.mioa);
  put("accuracy", report.accuracy);
  put("tpr", report.tpr);
  put("fnr", report.fnr);
  j["counts"] = {{"tp", report.counts.tp}, {"fp", report.counts.fp}, {"tn", report.counts.tn}, {"fn", report.counts.fn}};
  return j;
}

}  // namespace textmark
