#include <gtest/gtest.h>

#include <set>

#include "test_support.hpp"
#include "textmark/error.hpp"
#include "textmark/insertion.hpp"
#include "textmark/utf8.hpp"

using namespace textmark;
using namespace textmark::testing;

namespace {

SentenceRecord tagged(const std::string& s) {
  const auto& res = Shipped::get();
  auto rec = tokenize(s, *res.stopwords);
  res.tagger.annotate(rec);
  return rec;
}

std::vector<std::string> corpus() { return read_lines(data_dir() / "corpus" / "desk-200.txt"); }

}  // namespace

TEST(Insertion, SingleModeProposalsChangeOneCandidate) {
  const auto& res = Shipped::get();
  auto ctx = res.context();
  auto lines = corpus();
  lines.resize(30);
  for (const auto& s : lines) {
    auto rec = tagged(s);
    auto cands = candidate_indices(rec);
    std::set<std::size_t> cand_set(cands.begin(), cands.end());
    for (const auto& p : generate_proposals(rec, ctx)) {
      ASSERT_EQ(p.substitutions.size(), 1u);
      const auto& sub = p.substitutions[0];
      EXPECT_TRUE(cand_set.count(sub.index));
      EXPECT_EQ(sub.original, rec.tokens[sub.index].text);
      EXPECT_NE(utf8::fold(sub.replacement), utf8::fold(sub.original));
      EXPECT_FALSE(is_stopword(sub.replacement, *res.stopwords));
      ASSERT_EQ(p.tokens.size(), rec.tokens.size());
      for (std::size_t i = 0; i < p.tokens.size(); ++i)
        if (i != sub.index) ASSERT_EQ(p.tokens[i].text, rec.tokens[i].text);
      EXPECT_EQ(p.tokens[sub.index].text, sub.replacement);
    }
  }
}

TEST(Insertion, AtMostNSynonymsPerCandidate) {
  const auto& res = Shipped::get();
  for (std::size_t n : {1u, 3u, 5u}) {
    InsertionConfig cfg;
    cfg.n = n;
    auto ctx = res.context(cfg);
    auto rec = tagged("The old house stood near the quiet river.");
    for (auto i : candidate_indices(rec)) EXPECT_LE(agreeing_synonyms(rec, i, ctx).size(), n);
  }
}

TEST(Insertion, SelectBestPicksHighestSimilarity) {
  const auto& res = Shipped::get();
  auto ctx = res.context();
  const std::string s = "The committee approved the new budget after a long debate.";
  auto proposals = generate_proposals(tagged(s), ctx);
  ASSERT_FALSE(proposals.empty());
  auto best = select_best(s, proposals, res.encoder);
  ASSERT_TRUE(best);
  for (const auto& p : proposals) EXPECT_LE(sms(res.encoder, s, p.text()), *best->score + 1e-12);
  EXPECT_FALSE(select_best(s, {}, res.encoder));
}

TEST(Insertion, SelectBestTiePrefersEarlierIndex) {
  const auto& res = Shipped::get();
  auto rec = tagged("cat cat");
  SentenceProposal a, b;
  a.tokens = b.tokens = rec.tokens;
  b.substitutions = {{2, "cat", "dog", 0.5}};
  a.substitutions = {{0, "cat", "dog", 0.5}};
  b.tokens[2].text = "dog";
  a.tokens[0].text = "dog";
  // "dog cat" and "cat dog" have the same mean vector
  auto best = select_best("cat cat", {b, a}, res.encoder);
  ASSERT_TRUE(best);
  EXPECT_EQ(best->substitutions[0].index, 0u);
}

TEST(Insertion, SelectBestIsScaleInvariant) {
  const auto& res = Shipped::get();
  auto ctx = res.context();
  Rng rng(8);
  auto lines = corpus();
  int trials = 0;
  for (std::size_t i = 0; i < lines.size() && trials < 20; i += 3) {
    auto proposals = generate_proposals(tagged(lines[i]), ctx);
    if (proposals.size() < 2) continue;
    ScaledEncoder scaled(res.encoder, static_cast<float>(0.01 + rng.unit() * 100.0));
    auto a = select_best(lines[i], proposals, res.encoder);
    auto b = select_best(lines[i], proposals, scaled);
    ASSERT_EQ(a->text(), b->text());
    ++trials;
  }
  EXPECT_EQ(trials, 20);
}

TEST(Insertion, StopwordOnlySentenceIsLeftAlone) {
  auto ctx = Shipped::get().context();
  auto out = watermark_sentence("It is what it is, and so on.", ctx);
  EXPECT_FALSE(out.watermarkable);
  EXPECT_EQ(out.marked, out.original);
  EXPECT_DOUBLE_EQ(out.sms, 1.0);
  EXPECT_TRUE(out.substitutions.empty());
}

TEST(Insertion, FloorDemotesEverything) {
  InsertionConfig cfg;
  cfg.sms_floor = 1.01;
  auto ctx = Shipped::get().context(cfg);
  auto out = watermark_text("The old house stood near the quiet river. Dogs barked all night.", ctx);
  EXPECT_EQ(out.msms_count, 0u);
  EXPECT_DOUBLE_EQ(out.msms, 1.0);
  for (const auto& o : out.per_sentence) EXPECT_FALSE(o.watermarkable);
  EXPECT_EQ(out.marked_text, "The old house stood near the quiet river. Dogs barked all night.");
}

TEST(Insertion, OutcomesAreConsistent) {
  auto ctx = Shipped::get().context();
  for (const auto& s : corpus()) {
    auto out = watermark_sentence(s, ctx);
    EXPECT_EQ(out.original, s);
    if (!out.watermarkable) {
      EXPECT_EQ(out.marked, s);
      continue;
    }
    EXPECT_NE(out.marked, s);
    EXPECT_FALSE(out.substitutions.empty());
    EXPECT_GE(out.sms, 0.80);
    EXPECT_LE(out.sms, 1.0 + 1e-9);
    EXPECT_NEAR(out.sms, sms(Shipped::get().encoder, s, out.marked), 1e-9);
  }
}

TEST(Insertion, MultipleModeAppliesGreedyStages) {
  InsertionConfig cfg;
  cfg.mode = SubstitutionMode::Multiple;
  auto ctx = Shipped::get().context(cfg);
  const std::string s = "The committee approved the new budget after a long debate.";
  auto proposals = generate_proposals(tagged(s), ctx);
  ASSERT_GE(proposals.size(), 2u);
  for (std::size_t k = 0; k < proposals.size(); ++k) {
    EXPECT_EQ(proposals[k].substitutions.size(), k + 1);
    if (k > 0) {
      for (std::size_t j = 0; j < k; ++j)
        EXPECT_EQ(proposals[k].substitutions[j].index, proposals[k - 1].substitutions[j].index);
    }
  }
  auto out = watermark_sentence(s, ctx);
  EXPECT_TRUE(out.watermarkable);
  EXPECT_GE(out.substitutions.size(), 2u);
}

TEST(Insertion, ParallelMatchesSequential) {
  auto ctx = Shipped::get().context();
  auto lines = corpus();
  lines.resize(60);
  auto a = watermark_sentences(lines, ctx, 1);
  auto b = watermark_sentences(lines, ctx, 4);
  EXPECT_EQ(a.marked_text, b.marked_text);
  EXPECT_EQ(a.msms, b.msms);
  ASSERT_EQ(a.per_sentence.size(), b.per_sentence.size());
  for (std::size_t i = 0; i < lines.size(); ++i) EXPECT_EQ(a.per_sentence[i].original, lines[i]);
}

TEST(Insertion, TextIsReassembledInOrder) {
  auto ctx = Shipped::get().context();
  const std::string text = "Birds sang loudly.  The farmer walked home.\n\nIt is so.";
  auto out = watermark_text(text, ctx);
  std::string originals;
  for (const auto& o : out.per_sentence) originals += o.original;
  EXPECT_EQ(originals, text);
  EXPECT_GE(out.msms, 0.0);
  EXPECT_LE(out.msms, 1.0);
}

TEST(Insertion, PredetectionKeepsOnlyDetectedSentences) {
  auto ctx = Shipped::get().context();
  const std::string text = "The farmer walked home. The old house stood near the river. Birds sang loudly.";
  // one substitution cannot remove two of these words
  FunctionDetector det([](std::string_view s) {
    int hits = 0;
    for (auto w : {"farmer", "walked", "home"}) hits += s.find(w) != std::string_view::npos;
    return hits >= 2 ? 0.1 : 0.9;
  });
  auto out = watermark_with_predetection(text, ctx, det);
  ASSERT_EQ(out.per_sentence.size(), 3u);
  EXPECT_FALSE(out.detected[0]);
  EXPECT_EQ(out.per_sentence[0].marked, out.per_sentence[0].original);
  EXPECT_FALSE(out.per_sentence[0].watermarkable);
  EXPECT_NEAR(out.detectable_fraction, 2.0 / 3.0, 1e-12);
  EXPECT_TRUE(out.text_watermarkable);
  std::string joined;
  for (const auto& o : out.per_sentence) joined += o.marked;
  EXPECT_EQ(joined, out.marked_text);
}
