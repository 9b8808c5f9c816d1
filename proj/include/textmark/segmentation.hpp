#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace textmark {

enum class TokenKind { Word, Stopword, Punctuation, Whitespace };

enum class GrammaticalNumber { Singular, Plural, NotApplicable };

std::string_view token_kind_name(TokenKind kind);

// Spans are byte offsets into the sentence.
struct Token {
  std::string text;
  TokenKind kind = TokenKind::Word;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string pos;  // empty until tagged
  GrammaticalNumber number = GrammaticalNumber::NotApplicable;

  bool lexical() const { return kind == TokenKind::Word || kind == TokenKind::Stopword; }
};

struct SentenceRecord {
  std::string source;
  std::vector<Token> tokens;
};

using StopwordSet = std::unordered_set<std::string>;

// One entry per line, '#' starts a comment, surrounding whitespace dropped.
std::vector<std::string> load_word_list(const std::filesystem::path& path);
StopwordSet load_stopwords(const std::filesystem::path& path);

bool is_stopword(std::string_view word, const StopwordSet& stopwords);

SentenceRecord tokenize(std::string_view sentence, const StopwordSet& stopwords);
std::string detokenize(const std::vector<Token>& tokens);
std::vector<std::size_t> candidate_indices(const SentenceRecord& record);

class SentenceSplitter {
 public:
  SentenceSplitter() = default;
  explicit SentenceSplitter(std::vector<std::string> abbreviations);
  static SentenceSplitter load(const std::filesystem::path& path);

  std::vector<std::string> split(std::string_view text) const;

 private:
  bool blocks_split(std::string_view text, std::size_t dot) const;

  std::unordered_set<std::string> abbreviations_;
};

}  // namespace textmark
