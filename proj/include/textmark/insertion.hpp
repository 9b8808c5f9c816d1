#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "textmark/detection.hpp"
#include "textmark/embeddings.hpp"
#include "textmark/encoder.hpp"
#include "textmark/grammar.hpp"
#include "textmark/segmentation.hpp"

namespace textmark {

enum class SubstitutionMode { Single, Multiple };

std::string_view mode_name(SubstitutionMode mode);

struct Substitution {
  std::size_t index;
  std::string original;
  std::string replacement;
  double similarity;
};

struct SentenceProposal {
  std::vector<Token> tokens;
  std::vector<Substitution> substitutions;
  std::optional<double> score;

  std::string text() const { return detokenize(tokens); }
};

struct WatermarkOutcome {
  std::string original;
  std::string marked;
  double sms = 1.0;
  std::vector<Substitution> substitutions;
  std::vector<ArticleFix> article_fixes;
  bool watermarkable = false;
};

struct InsertionConfig {
  std::size_t n = 5;
  SubstitutionMode mode = SubstitutionMode::Single;
  double sms_floor = 0.80;
  double word_floor = 0.0;
  bool grammar = true;
};

struct InsertionContext {
  const EmbeddingTable& table;
  const SentenceEncoder& encoder;
  const Tagger& tagger;
  const Inflector& inflector;
  const StopwordSet& stopwords;
  const SentenceSplitter& splitter;
  InsertionConfig config;
};

// Nearest neighbours of one candidate token that survive every filter, best first.
std::vector<Neighbor> agreeing_synonyms(const SentenceRecord& record, std::size_t index, const InsertionContext& ctx);

// `record` must be tagged. Single: one proposal per (candidate, synonym). Multiple: greedy stages.
std::vector<SentenceProposal> generate_proposals(const SentenceRecord& record, const InsertionContext& ctx);

std::optional<SentenceProposal> select_best(std::string_view original, std::vector<SentenceProposal> proposals,
                                            const SentenceEncoder& encoder);

WatermarkOutcome watermark_sentence(std::string_view sentence, const InsertionContext& ctx);

struct TextOutcome {
  std::string marked_text;
  std::vector<WatermarkOutcome> per_sentence;
  double msms = 1.0;
  std::size_t msms_count = 0;
};

// Sentences are independent; `jobs` workers keep input order in the result.
TextOutcome watermark_sentences(const std::vector<std::string>& sentences, const InsertionContext& ctx,
                                std::size_t jobs = 1);
TextOutcome watermark_text(std::string_view text, const InsertionContext& ctx, std::size_t jobs = 1);

struct PredetectionOutcome {
  std::string marked_text;
  std::vector<WatermarkOutcome> per_sentence;
  std::vector<bool> detected;
  double detectable_fraction = 0.0;
  bool text_watermarkable = false;
};

PredetectionOutcome watermark_with_predetection(std::string_view text, const InsertionContext& ctx,
                                                const Detector& detector, double threshold_fraction = 0.51,
                                                std::size_t jobs = 1);

}  // namespace textmark
