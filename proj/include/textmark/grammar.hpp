#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "textmark/embeddings.hpp"
#include "textmark/segmentation.hpp"

namespace textmark {

// Tag for a punctuation token, fixed by character class.
std::string punctuation_tag(std::string_view text);

// Bigram HMM tagger over the Penn Treebank tagset, loaded from a TMTAG1 file.
class Tagger {
 public:
  static Tagger load(const std::filesystem::path& path);

  const std::vector<std::string>& tagset() const { return tags_; }
  bool has_tag(std::string_view tag) const;

  // Tags every non-whitespace token; whitespace tokens are skipped.
  std::vector<std::string> tag_tokens(const std::vector<Token>& tokens) const;
  // Fills pos and number on Word and Stopword tokens.
  void annotate(SentenceRecord& record) const;

 private:
  struct Dist {
    std::vector<std::pair<int, double>> probs;  // tag id, P(tag | context)
  };

  int id(std::string_view tag) const;
  Dist normalize(const std::unordered_map<int, double>& counts) const;
  std::vector<double> emission(std::string_view word) const;

  std::vector<std::string> tags_;
  std::unordered_map<std::string, int> tag_ids_;
  std::vector<double> prior_;               // P(t)
  std::vector<double> start_;               // log P(t | start)
  std::vector<std::vector<double>> trans_;  // log P(t | prev)
  std::unordered_map<std::string, Dist> words_;
  std::unordered_map<std::string, Dist> shapes_;
  std::unordered_map<std::string, Dist> suffixes_;  // key "shape suffix"
};

GrammaticalNumber grammatical_number(std::string_view word, std::string_view tag);

// Noun inflection and a/an selection, loaded from a TMINF1 file.
class Inflector {
 public:
  static Inflector load(const std::filesystem::path& path);

  bool is_plural(std::string_view word) const;
  std::string pluralize(std::string_view word) const;
  std::string singularize(std::string_view word) const;
  std::string inflect(std::string_view word, GrammaticalNumber target) const;

  // "a" or "an" for the word that follows the article.
  std::string article_for(std::string_view next_word) const;

  const std::unordered_map<std::string, std::string>& irregular_plurals() const { return plural_; }
  const std::unordered_set<std::string>& uninflected() const { return uninflected_; }

 private:
  std::unordered_map<std::string, std::string> plural_;    // singular -> plural
  std::unordered_map<std::string, std::string> singular_;  // plural -> singular
  std::unordered_set<std::string> uninflected_;
  std::vector<std::string> an_prefixes_;
  std::vector<std::string> a_prefixes_;
};

struct Grammar {
  const Tagger& tagger;
  const Inflector& inflector;
};

// Keeps candidates whose in-context tag equals the original's. Nouns that differ only in
// number are inflected to match. Candidates equal to the original are dropped.
std::vector<Neighbor> filter_agreeing_synonyms(const SentenceRecord& record, std::size_t index,
                                               const std::vector<Neighbor>& candidates, const Grammar& grammar);

struct ArticleFix {
  std::size_t index;
  std::string from;
  std::string to;
};

// Corrects an "a"/"an" directly before each listed token index.
std::vector<ArticleFix> fix_articles(std::vector<Token>& tokens, const std::vector<std::size_t>& indices,
                                     const Inflector& inflector);

}  // namespace textmark
