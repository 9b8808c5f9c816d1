#pragma once

#include <cmath>
#include <functional>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "textmark/detection.hpp"
#include "textmark/embeddings.hpp"
#include "textmark/encoder.hpp"
#include "textmark/grammar.hpp"
#include "textmark/insertion.hpp"
#include "textmark/rng.hpp"
#include "textmark/segmentation.hpp"

namespace textmark::testing {

inline std::filesystem::path data_dir() { return TEXTMARK_DATA_DIR; }
inline std::filesystem::path test_data_dir() { return TEXTMARK_TEST_DATA_DIR; }

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Arbitrary bytes biased toward the interesting classes: words, connectors, spaces,
// multibyte characters and malformed sequences.
inline std::string random_text(Rng& rng, std::size_t max_len) {
  static const std::vector<std::string> pieces = {
      "a", "Z", "q", "7", "'", "-", "\xE2\x80\x99", " ", "  ", "\t", "\n", ".", ",", "!", "?", "\"", "(", ")",
      "\xC3\xA9", "\xE2\x80\x94", "\xF0\x9F\x98\x80", "\xC0", "\x80", "\xED\xA0\x80", "\xE2\x80", "$", "the", "don't"};
  std::string s;
  const std::size_t len = rng.below(max_len + 1);
  for (std::size_t i = 0; i < len; ++i) {
    if (rng.below(8) == 0) {
      s.push_back(static_cast<char>(rng.below(256)));
    } else {
      s += pieces[rng.below(pieces.size())];
    }
  }
  return s;
}

// Shipped resources, loaded once per process.
struct Shipped {
  std::shared_ptr<const EmbeddingTable> table;
  std::shared_ptr<const StopwordSet> stopwords;
  Tagger tagger;
  Inflector inflector;
  SentenceSplitter splitter;
  MeanWordVectorEncoder encoder;

  static const Shipped& get() {
    static const Shipped s = [] {
      auto table = std::make_shared<const EmbeddingTable>(
          load_embedding_table(data_dir() / "embeddings" / "desk-en-64.bin", EmbeddingFormat::Binary));
      auto stop = std::make_shared<const StopwordSet>(load_stopwords(data_dir() / "stopwords-en.txt"));
      return Shipped{table,
                     stop,
                     Tagger::load(data_dir() / "tagger-en.tmtag"),
                     Inflector::load(data_dir() / "inflections-en.tminf"),
                     SentenceSplitter::load(data_dir() / "abbreviations-en.txt"),
                     MeanWordVectorEncoder(table, stop)};
    }();
    return s;
  }

  InsertionContext context(InsertionConfig config = {}) const {
    return InsertionContext{*table, encoder, tagger, inflector, *stopwords, splitter, config};
  }
};

// Multiplies every output of another encoder by a positive constant.
class ScaledEncoder : public SentenceEncoder {
 public:
  ScaledEncoder(const SentenceEncoder& inner, float scale) : inner_(inner), scale_(scale) {}
  std::size_t dim() const override { return inner_.dim(); }
  EncoderBackend backend() const override { return inner_.backend(); }
  std::string resource() const override { return "scaled"; }
  SentenceEmbedding encode(std::string_view text) const override {
    auto v = inner_.encode(text);
    for (auto& x : v) x *= scale_;
    return v;
  }

 private:
  const SentenceEncoder& inner_;
  float scale_;
};

// Scores sentences through a callback.
class FunctionDetector : public Detector {
 public:
  template <class F>
  explicit FunctionDetector(F f, double threshold = 0.5) : Detector(threshold), f_(std::move(f)) {}
  DetectorBackend backend() const override { return DetectorBackend::RuleStub; }
  std::string resource() const override { return "function"; }
  double score(std::string_view s) const override { return f_(s); }

 private:
  std::function<double(std::string_view)> f_;
};

}  // namespace textmark::testing
