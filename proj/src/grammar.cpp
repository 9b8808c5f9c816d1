#include <unordered_set>

#include "textmark/grammar.hpp"
#include "textmark/utf8.hpp"

namespace textmark {

GrammaticalNumber grammatical_number(std::string_view, std::string_view tag) {
  if (tag == "NNS" || tag == "NNPS") return GrammaticalNumber::Plural;
  if (tag == "NN" || tag == "NNP") return GrammaticalNumber::Singular;
  return GrammaticalNumber::NotApplicable;
}

namespace {

bool is_noun(std::string_view tag) { return tag == "NN" || tag == "NNS" || tag == "NNP" || tag == "NNPS"; }

// NN/NNS and NNP/NNPS are the same class apart from number.
bool differ_only_in_number(std::string_view a, std::string_view b) {
  if (!is_noun(a) || !is_noun(b)) return false;
  return (a.substr(0, 3) == "NNP") == (b.substr(0, 3) == "NNP");
}

std::string tag_at(const Tagger& tagger, const std::vector<Token>& tokens, std::size_t index) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < index; ++i)
    if (tokens[i].kind != TokenKind::Whitespace) ++k;
  return tagger.tag_tokens(tokens)[k];
}

}  // namespace

std::vector<Neighbor> filter_agreeing_synonyms(const SentenceRecord& record, std::size_t index,
                                               const std::vector<Neighbor>& candidates, const Grammar& grammar) {
  const Token& orig = record.tokens.at(index);
  const std::string orig_key = utf8::fold(orig.text);
  std::vector<Token> tokens = record.tokens;
  std::unordered_set<std::string> seen;
  std::vector<Neighbor> out;

  auto tag_with = [&](const std::string& word) {
    tokens[index].text = word;
    return tag_at(grammar.tagger, tokens, index);
  };

  for (const auto& cand : candidates) {
    std::string word = recase_like(cand.word, orig.text);
    if (utf8::fold(word) == orig_key) continue;
    std::string tag = tag_with(word);
    if (tag != orig.pos) {
      if (!differ_only_in_number(orig.pos, tag)) continue;
      word = grammar.inflector.inflect(word, orig.number);
      if (utf8::fold(word) == orig_key) continue;
      if (tag_with(word) != orig.pos) continue;
    }
    if (seen.insert(utf8::fold(word)).second) out.push_back({word, cand.similarity});
  }
  return out;
}

std::vector<ArticleFix> fix_articles(std::vector<Token>& tokens, const std::vector<std::size_t>& indices,
                                     const Inflector& inflector) {
  std::vector<ArticleFix> fixes;
  for (std::size_t idx : indices) {
    if (idx == 0 || idx >= tokens.size()) continue;
    std::size_t j = idx - 1;
    if (tokens[j].kind != TokenKind::Whitespace || j == 0) continue;
    --j;
    Token& article = tokens[j];
    if (!article.lexical()) continue;
    std::string key = utf8::fold(article.text);
    if (key != "a" && key != "an") continue;
    std::string want = recase_like(inflector.article_for(tokens[idx].text), article.text);
    if (want == article.text) continue;
    fixes.push_back({j, article.text, want});
    article.text = want;
  }
  return fixes;
}

}  // namespace textmark
