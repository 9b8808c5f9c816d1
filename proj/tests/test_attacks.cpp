#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "test_support.hpp"
#include "textmark/attacks.hpp"
#include "textmark/error.hpp"

using namespace textmark;
using namespace textmark::testing;

namespace {

const std::vector<std::string>& sentences() {
  static const auto s = read_lines(data_dir() / "corpus" / "desk-200.txt");
  return s;
}

const std::vector<std::string>& words() {
  static const auto w = load_word_list(data_dir() / "words-en.txt");
  return w;
}

std::vector<std::string> numbered(std::size_t n, const std::string& prefix = "s") {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(prefix + std::to_string(i) + ".");
  return v;
}

ErrorCode code_of(const std::vector<std::string>& c, const AttackSpec& spec) {
  try {
    apply_attack(c, spec);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Attacks, KindNames) {
  for (int k = 0; k < 6; ++k) {
    auto kind = static_cast<AttackKind>(k);
    EXPECT_EQ(parse_attack_kind(attack_kind_name(kind)), kind);
  }
  EXPECT_FALSE(parse_attack_kind("shuffle"));
  EXPECT_TRUE(is_token_attack(AttackKind::AddTokens));
  EXPECT_FALSE(is_token_attack(AttackKind::AddSentences));
}

TEST(Attacks, RandomizedStructuralInvariants) {
  Rng rng(500);
  for (int i = 0; i < 500; ++i) ASSERT_EQ(attack_case_failure(rng, sentences(), words()), "") << "case " << i;
}

TEST(Attacks, RemovalSetsAreNested) {
  auto c = numbered(20);
  std::set<std::string> previous;
  for (std::size_t n = 1; n < 20; ++n) {
    auto out = apply_attack(c, {AttackKind::RemoveSentences, n, 77});
    std::set<std::string> kept(out.begin(), out.end());
    std::set<std::string> removed;
    for (const auto& s : c)
      if (!kept.count(s)) removed.insert(s);
    EXPECT_EQ(removed.size(), n);
    for (const auto& s : previous) EXPECT_TRUE(removed.count(s)) << s;
    previous = removed;
  }
}

TEST(Attacks, SeedsChangeTheOutcome) {
  auto c = numbered(20);
  std::set<std::vector<std::string>> outcomes;
  for (uint64_t seed = 0; seed < 10; ++seed) outcomes.insert(apply_attack(c, {AttackKind::RemoveSentences, 5, seed}));
  EXPECT_GT(outcomes.size(), 5u);
}

TEST(Attacks, Errors) {
  auto c = numbered(3);
  auto pool = numbered(5, "p");
  std::vector<std::string> empty;
  std::vector<std::string> same{"s0."};
  EXPECT_EQ(code_of(c, {AttackKind::RemoveSentences, 0, 1}), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of(c, {AttackKind::RemoveSentences, 3, 1}), ErrorCode::AttackTooSevere);
  EXPECT_EQ(code_of(c, {AttackKind::ReplaceSentences, 4, 1, &pool}), ErrorCode::AttackTooSevere);
  EXPECT_EQ(code_of(c, {AttackKind::AddSentences, 1, 1}), ErrorCode::MissingPool);
  EXPECT_EQ(code_of(c, {AttackKind::AddSentences, 1, 1, &empty}), ErrorCode::PoolTooSmall);
  EXPECT_EQ(code_of({"s0."}, {AttackKind::ReplaceSentences, 1, 1, &same}), ErrorCode::PoolTooSmall);
  EXPECT_EQ(code_of({"Dogs bark."}, {AttackKind::RemoveTokens, 2, 1}), ErrorCode::AttackTooSevere);
  EXPECT_EQ(code_of({"Dogs bark."}, {AttackKind::ReplaceTokens, 3, 1, &words()}), ErrorCode::AttackTooSevere);
  EXPECT_EQ(code_of({"Dogs bark."}, {AttackKind::ReplaceTokens, 1, 1}), ErrorCode::MissingPool);
  EXPECT_NO_THROW(apply_attack(c, {AttackKind::ReplaceSentences, 3, 1, &pool}));
}

TEST(Attacks, TokenEditsKeepSpacing) {
  std::vector<std::string> pool{"blue"};
  auto removed = apply_attack({"Dogs bark loudly."}, {AttackKind::RemoveTokens, 2, 3});
  ASSERT_EQ(removed.size(), 1u);
  EXPECT_EQ(removed[0].find("  "), std::string::npos);
  EXPECT_EQ(removed[0].front() == ' ', false);
  EXPECT_EQ(lexical_words(removed[0]).size(), 1u);
  EXPECT_EQ(removed[0].back(), '.');

  auto added = apply_attack({"Dogs bark."}, {AttackKind::AddTokens, 3, 3, &pool});
  EXPECT_EQ(lexical_words(added[0]).size(), 5u);
  EXPECT_EQ(added[0].back(), '.');
  EXPECT_EQ(added[0].find("  "), std::string::npos);

  auto replaced = apply_attack({"Dogs bark."}, {AttackKind::ReplaceTokens, 2, 3, &pool});
  EXPECT_EQ(replaced[0], "blue blue.");
}

TEST(Attacks, DatasetShape) {
  auto wm = numbered(40, "w");
  auto um = numbered(30, "u");
  auto ds = build_attack_dataset(wm, um, 10, 20, 4);
  ASSERT_EQ(ds.size(), 20u);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& lc = ds[i];
    EXPECT_EQ(lc.label, i < 10 ? Label::Watermarked : Label::Unmarked);
    ASSERT_EQ(lc.sentences.size(), 20u);
    std::set<std::string> distinct(lc.sentences.begin(), lc.sentences.end());
    EXPECT_EQ(distinct.size(), 20u);
    for (const auto& s : lc.sentences) EXPECT_EQ(s[0], i < 10 ? 'w' : 'u');
  }
  EXPECT_NE(ds[0].sentences, ds[1].sentences);
  auto again = build_attack_dataset(wm, um, 10, 20, 4);
  for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(ds[i].sentences, again[i].sentences);
  EXPECT_THROW(build_attack_dataset(wm, numbered(19), 10, 20, 4), Error);
}

TEST(Attacks, DatasetAttacksUseOppositePool) {
  auto wm = numbered(40, "w");
  auto um = numbered(40, "u");
  auto ds = build_attack_dataset(wm, um, 5, 10, 1);
  AttackPools pools{&wm, &um, &words()};
  auto items = attack_dataset(ds, AttackKind::ReplaceSentences, 3, 9, pools);
  ASSERT_EQ(items.size(), ds.size());
  for (const auto& item : items) {
    EXPECT_EQ(count_differing(item.x, item.x_attacked), 3u);
    char other = item.y == Label::Watermarked ? 'u' : 'w';
    std::size_t foreign = 0;
    for (const auto& s : item.x_attacked) foreign += s[0] == other;
    EXPECT_EQ(foreign, 3u);
  }
  auto identity = attack_dataset(ds, AttackKind::RemoveSentences, 2, 9, pools);
  auto again = attack_dataset(ds, AttackKind::RemoveSentences, 2, 9, pools);
  for (std::size_t i = 0; i < identity.size(); ++i) EXPECT_EQ(identity[i].x_attacked, again[i].x_attacked);
}
