#include <gtest/gtest.h>

#include "json.hpp"
#include "test_support.hpp"
#include "textmark/error.hpp"
#include "textmark/grammar.hpp"
#include "textmark/insertion.hpp"

using namespace textmark;
using namespace textmark::testing;

TEST(Tagger, GoldenAccuracyAtLeastNinetyPercent) {
  const auto& res = Shipped::get();
  std::size_t correct = 0, total = 0;
  for (const auto& line : read_lines(test_data_dir() / "pos-golden.jsonl")) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    auto rec = tokenize(j["text"].get<std::string>(), *res.stopwords);
    res.tagger.annotate(rec);
    std::vector<const Token*> lexical;
    for (const auto& t : rec.tokens)
      if (t.lexical()) lexical.push_back(&t);
    ASSERT_EQ(lexical.size(), j["tokens"].size()) << j["text"];
    for (std::size_t i = 0; i < lexical.size(); ++i) {
      ASSERT_EQ(lexical[i]->text, j["tokens"][i].get<std::string>());
      correct += lexical[i]->pos == j["tags"][i].get<std::string>();
      ++total;
    }
  }
  ASSERT_GT(total, 2000u);
  const double accuracy = static_cast<double>(correct) / static_cast<double>(total);
  std::cout << "tagger accuracy " << accuracy << " over " << total << " tokens\n";
  EXPECT_GE(accuracy, 0.90);
}

TEST(Tagger, TagsEveryNonWhitespaceToken) {
  const auto& res = Shipped::get();
  auto rec = tokenize("The dogs barked , loudly  at 3 cats!", *res.stopwords);
  auto tags = res.tagger.tag_tokens(rec.tokens);
  std::size_t nonspace = 0;
  for (const auto& t : rec.tokens) nonspace += t.kind != TokenKind::Whitespace;
  EXPECT_EQ(tags.size(), nonspace);
  for (const auto& t : tags) EXPECT_TRUE(res.tagger.has_tag(t)) << t;
}

TEST(Tagger, CommonSentence) {
  const auto& res = Shipped::get();
  auto rec = tokenize("The dogs chased a small cat.", *res.stopwords);
  res.tagger.annotate(rec);
  std::vector<std::string> tags;
  for (const auto& t : rec.tokens)
    if (t.lexical()) tags.push_back(t.pos);
  EXPECT_EQ(tags, (std::vector<std::string>{"DT", "NNS", "VBD", "DT", "JJ", "NN"}));
  EXPECT_EQ(rec.tokens[2].number, GrammaticalNumber::Plural);
  EXPECT_EQ(rec.tokens[10].number, GrammaticalNumber::Singular);
  EXPECT_EQ(rec.tokens[4].number, GrammaticalNumber::NotApplicable);
}

TEST(Tagger, MissingModel) {
  try {
    Tagger::load("/nonexistent.tmtag");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TaggerModelMissing);
  }
}

TEST(Tagger, PunctuationTags) {
  EXPECT_EQ(punctuation_tag(","), ",");
  EXPECT_EQ(punctuation_tag("?"), ".");
  EXPECT_EQ(punctuation_tag("("), "(");
  EXPECT_EQ(punctuation_tag("$"), "$");
  EXPECT_EQ(punctuation_tag("\xE2\x80\x94"), ":");
}

TEST(Grammar, NumberFromTag) {
  EXPECT_EQ(grammatical_number("cats", "NNS"), GrammaticalNumber::Plural);
  EXPECT_EQ(grammatical_number("Alps", "NNPS"), GrammaticalNumber::Plural);
  EXPECT_EQ(grammatical_number("cat", "NN"), GrammaticalNumber::Singular);
  EXPECT_EQ(grammatical_number("run", "VB"), GrammaticalNumber::NotApplicable);
}

TEST(Inflector, RegularAndIrregularForms) {
  const auto& inf = Shipped::get().inflector;
  EXPECT_EQ(inf.pluralize("cat"), "cats");
  EXPECT_EQ(inf.pluralize("box"), "boxes");
  EXPECT_EQ(inf.pluralize("city"), "cities");
  EXPECT_EQ(inf.pluralize("day"), "days");
  EXPECT_EQ(inf.pluralize("child"), "children");
  EXPECT_EQ(inf.pluralize("sheep"), "sheep");
  EXPECT_EQ(inf.singularize("cities"), "city");
  EXPECT_EQ(inf.singularize("boxes"), "box");
  EXPECT_EQ(inf.singularize("mice"), "mouse");
  EXPECT_EQ(inf.singularize("glass"), "glass");
  EXPECT_TRUE(inf.is_plural("dogs"));
  EXPECT_FALSE(inf.is_plural("glass"));
  EXPECT_FALSE(inf.is_plural("bus"));
  EXPECT_FALSE(inf.is_plural("analysis"));
  EXPECT_EQ(inf.pluralize("Child"), "Children");
}

TEST(Inflector, InflectIsIdempotent) {
  const auto& inf = Shipped::get().inflector;
  for (const auto& w : load_word_list(data_dir() / "words-en.txt")) {
    for (auto target : {GrammaticalNumber::Singular, GrammaticalNumber::Plural}) {
      auto once = inf.inflect(w, target);
      EXPECT_EQ(inf.inflect(once, target), once) << w;
    }
  }
  for (const auto& [s, p] : inf.irregular_plurals()) {
    EXPECT_EQ(inf.inflect(s, GrammaticalNumber::Plural), p);
    EXPECT_EQ(inf.inflect(p, GrammaticalNumber::Singular), s);
  }
}

TEST(Inflector, Articles) {
  const auto& inf = Shipped::get().inflector;
  EXPECT_EQ(inf.article_for("apple"), "an");
  EXPECT_EQ(inf.article_for("banana"), "a");
  EXPECT_EQ(inf.article_for("hour"), "an");
  EXPECT_EQ(inf.article_for("honest"), "an");
  EXPECT_EQ(inf.article_for("university"), "a");
  EXPECT_EQ(inf.article_for("European"), "a");
  EXPECT_EQ(inf.article_for("one"), "a");
  EXPECT_EQ(inf.article_for("FBI"), "an");
  EXPECT_EQ(inf.article_for("UFO"), "a");
  EXPECT_EQ(inf.article_for("8"), "an");
  EXPECT_EQ(inf.article_for("11"), "an");
  EXPECT_EQ(inf.article_for("18th"), "an");
  EXPECT_EQ(inf.article_for("110"), "a");
  EXPECT_EQ(inf.article_for("7"), "a");
}

TEST(Grammar, PluralNounCandidatesAreInflected) {
  const auto& res = Shipped::get();
  auto rec = tokenize("The dogs slept.", *res.stopwords);
  res.tagger.annotate(rec);
  ASSERT_EQ(rec.tokens[2].pos, "NNS");
  auto kept = filter_agreeing_synonyms(rec, 2, {{"cat", 0.9}, {"dogs", 0.8}, {"quickly", 0.7}},
                                       Grammar{res.tagger, res.inflector});
  ASSERT_FALSE(kept.empty());
  EXPECT_EQ(kept[0].word, "cats");
  for (const auto& nb : kept) {
    EXPECT_NE(nb.word, "dogs");
    EXPECT_NE(nb.word, "quickly");
  }
}

TEST(Grammar, FixArticles) {
  const auto& res = Shipped::get();
  auto rec = tokenize("She ate a apple and an pear.", *res.stopwords);
  auto tokens = rec.tokens;
  auto fixes = fix_articles(tokens, {6, 12}, res.inflector);
  EXPECT_EQ(detokenize(tokens), "She ate an apple and a pear.");
  ASSERT_EQ(fixes.size(), 2u);
  EXPECT_EQ(fixes[0].index, 4u);
  EXPECT_EQ(fixes[0].to, "an");
  auto upper = tokenize("A owl.", *res.stopwords).tokens;
  fix_articles(upper, {2}, res.inflector);
  EXPECT_EQ(detokenize(upper), "An owl.");
}

// Every substitution on the golden corpus keeps the original's tag when the
// sentence is re-tagged, and nouns keep their number.
TEST(Grammar, GoldenCorpusAgreement) {
  const auto& res = Shipped::get();
  auto ctx = res.context();
  auto lines = read_lines(test_data_dir() / "grammar-golden-100.txt");
  ASSERT_EQ(lines.size(), 100u);
  std::size_t checked = 0;
  for (const auto& s : lines) {
    auto out = watermark_sentence(s, ctx);
    if (!out.watermarkable) continue;
    auto before = tokenize(s, *res.stopwords);
    res.tagger.annotate(before);
    auto after = tokenize(out.marked, *res.stopwords);
    res.tagger.annotate(after);
    ASSERT_EQ(before.tokens.size(), after.tokens.size()) << s;
    for (const auto& sub : out.substitutions) {
      EXPECT_EQ(after.tokens[sub.index].text, sub.replacement);
      EXPECT_EQ(after.tokens[sub.index].pos, before.tokens[sub.index].pos) << s << " -> " << out.marked;
      EXPECT_EQ(after.tokens[sub.index].number, before.tokens[sub.index].number) << s;
      ++checked;
    }
  }
  EXPECT_GT(checked, 50u);
}
