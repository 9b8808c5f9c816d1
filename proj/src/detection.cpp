#include "textmark/detection.hpp"

#include <cmath>
#include <fstream>
#include "json.hpp"

#include "textmark/encoder.hpp"
#include "textmark/error.hpp"
#include "textmark/utf8.hpp"

namespace textmark {

std::string_view label_name(Label label) { return label == Label::Watermarked ? "watermarked" : "unmarked"; }

Detector::Detector(double threshold) : threshold_(threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be in (0, 1)");
}

RuleStubDetector::RuleStubDetector(std::map<std::string, double> scores, double threshold, std::string resource)
    : Detector(threshold), resource_(std::move(resource)) {
  for (auto& [k, v] : scores) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::MalformedData, "stub score outside [0, 1] for '" + k + "'");
    scores_.emplace(std::string(utf8::trim(k)), v);
  }
}

std::unique_ptr<RuleStubDetector> RuleStubDetector::load(const std::filesystem::path& path, double threshold) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ModelLoadFailure, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ModelLoadFailure, path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::ModelLoadFailure, "stub file must hold a JSON object");
  std::map<std::string, double> scores;
  for (auto& [k, v] : j.items()) {
    if (!v.is_number()) throw Error(ErrorCode::ModelLoadFailure, "stub score for '" + k + "' is not a number");
    scores[k] = v.get<double>();
  }
  return std::make_unique<RuleStubDetector>(std::move(scores), threshold, path.string());
}

double RuleStubDetector::score(std::string_view sentence) const {
  auto it = scores_.find(utf8::trim(sentence));
  return it == scores_.end() ? 0.0 : it->second;
}

PortableModelDetector::PortableModelDetector(const std::filesystem::path& path, double threshold)
    : Detector(threshold), model_(onnx::Model::load(path)), path_(path.string()) {
  check_string_to_float_signature(model_);
  const auto& out = model_.outputs()[0];
  for (auto d : out.dims)
    if (d > 1) throw Error(ErrorCode::UnsupportedModelSignature, "detector output must hold a single score");
}

double PortableModelDetector::score(std::string_view sentence) const {
  auto out = model_.run({string_input(model_.inputs()[0], sentence)});
  const auto& t = out.at(0);
  if (t.f.size() != 1) throw Error(ErrorCode::UnsupportedModelSignature, "detector produced more than one value");
  double s = t.f[0];
  if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorCode::UnsupportedModelSignature, "detector score outside [0, 1]");
  return s;
}

std::unique_ptr<Detector> load_detector(const std::filesystem::path& path, double threshold) {
  if (path.extension() == ".json") return RuleStubDetector::load(path, threshold);
  return std::make_unique<PortableModelDetector>(path, threshold);
}

SentenceVerdict detect_sentence(const Detector& detector, std::string_view sentence) {
  auto t = utf8::trim(sentence);
  if (t.empty()) throw Error(ErrorCode::EmptySentence, "nothing to score");
  double s = detector.score(t);
  return {s, s >= detector.threshold() ? Label::Watermarked : Label::Unmarked};
}

CollectionVerdict detect_collection(const Detector& detector, const std::vector<std::string>& sentences) {
  if (sentences.empty()) throw Error(ErrorCode::EmptyCollection, "no sentences");
  CollectionVerdict v;
  for (const auto& s : sentences) {
    v.per_sentence.push_back(detect_sentence(detector, s));
    if (v.per_sentence.back().label == Label::Watermarked) ++v.watermarked_count;
  }
  v.total = sentences.size();
  v.fraction = static_cast<double>(v.watermarked_count) / static_cast<double>(v.total);
  v.label = v.watermarked_count >= (v.total + 1) / 2 ? Label::Watermarked : Label::Unmarked;
  return v;
}

double binomial_collection_accuracy(double p, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "p must be in [0, 1]");
  if (n == 1) return p;
  if (p == 1.0) return 1.0;
  if (p == 0.0) return 0.0;
  const int lo = (n + 1) / 2;
  const double lp = std::log(p), lq = std::log1p(-p);
  // log C(n, i) p^i q^(n-i), summed with a running max for stability
  std::vector<double> terms;
  terms.reserve(n - lo + 1);
  double mx = -INFINITY;
  for (int i = lo; i <= n; ++i) {
    double t = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) + i * lp + (n - i) * lq;
    terms.push_back(t);
    mx = std::max(mx, t);
  }
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - mx);
  return std::min(1.0, std::exp(mx) * sum);
}

PercentageResult watermarked_percentage(const Detector& detector, const SentenceSplitter& splitter,
                                        std::string_view text) {
  std::vector<std::string> sentences;
  for (auto& s : splitter.split(text))
    if (!utf8::trim(s).empty()) sentences.push_back(std::move(s));
  auto v = detect_collection(detector, sentences);
  return {v.fraction, std::move(v.per_sentence)};
}

}  // namespace textmark
