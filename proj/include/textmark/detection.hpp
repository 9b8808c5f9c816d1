#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "textmark/onnx_runtime.hpp"
#include "textmark/segmentation.hpp"

namespace textmark {

enum class Label { Unmarked = 0, Watermarked = 1 };

std::string_view label_name(Label label);

enum class DetectorBackend { PortableModel, RuleStub };

class Detector {
 public:
  explicit Detector(double threshold);
  virtual ~Detector() = default;

  double threshold() const { return threshold_; }
  virtual DetectorBackend backend() const = 0;
  virtual std::string resource() const = 0;
  // Score in [0, 1] for an already trimmed, non-empty sentence.
  virtual double score(std::string_view sentence) const = 0;

 private:
  double threshold_;
};

// Test detector: fixed scores looked up by trimmed sentence text, 0 otherwise.
class RuleStubDetector : public Detector {
 public:
  explicit RuleStubDetector(std::map<std::string, double> scores, double threshold = 0.5,
                            std::string resource = "rule-stub");
  // JSON object mapping sentence text to score.
  static std::unique_ptr<RuleStubDetector> load(const std::filesystem::path& path, double threshold = 0.5);

  DetectorBackend backend() const override { return DetectorBackend::RuleStub; }
  std::string resource() const override { return resource_; }
  double score(std::string_view sentence) const override;

 private:
  std::map<std::string, double, std::less<>> scores_;
  std::string resource_;
};

class PortableModelDetector : public Detector {
 public:
  explicit PortableModelDetector(const std::filesystem::path& path, double threshold = 0.5);

  DetectorBackend backend() const override { return DetectorBackend::PortableModel; }
  std::string resource() const override { return path_; }
  double score(std::string_view sentence) const override;

 private:
  onnx::Model model_;
  std::string path_;
};

std::unique_ptr<Detector> load_detector(const std::filesystem::path& path, double threshold = 0.5);

struct SentenceVerdict {
  double score;
  Label label;
};

struct CollectionVerdict {
  std::vector<SentenceVerdict> per_sentence;
  std::size_t watermarked_count = 0;
  std::size_t total = 0;
  double fraction = 0.0;
  Label label = Label::Unmarked;
};

SentenceVerdict detect_sentence(const Detector& detector, std::string_view sentence);
CollectionVerdict detect_collection(const Detector& detector, const std::vector<std::string>& sentences);

// Probability that at least ceil(n/2) of n independent sentences are detected.
double binomial_collection_accuracy(double p, int n);

struct PercentageResult {
  double fraction;
  std::vector<SentenceVerdict> per_sentence;
};

PercentageResult watermarked_percentage(const Detector& detector, const SentenceSplitter& splitter,
                                        std::string_view text);

}  // namespace textmark
