#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "textmark/config.hpp"
#include "textmark/corpus.hpp"
#include "textmark/error.hpp"

using namespace textmark;
using namespace textmark::testing;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  auto dir = std::filesystem::temp_directory_path() / "textmark-tests" / "cfg";
  std::filesystem::create_directories(dir);
  auto p = dir / name;
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST(Config, DefaultsPointAtShippedData) {
  auto c = default_config();
  EXPECT_TRUE(std::filesystem::exists(c.embeddings));
  EXPECT_TRUE(std::filesystem::exists(c.tagger));
  EXPECT_TRUE(std::filesystem::exists(c.words));
  EXPECT_EQ(c.n, 5u);
  EXPECT_DOUBLE_EQ(c.sms_floor, 0.80);
  EXPECT_EQ(c.mode, SubstitutionMode::Single);
  EXPECT_TRUE(c.encoder.empty());
  auto ic = insertion_config(c);
  EXPECT_EQ(ic.n, 5u);
  EXPECT_TRUE(ic.grammar);
}

TEST(Config, FileOverridesAndResolvesPaths) {
  auto p = write_temp("a.conf",
                      "# comment\n"
                      "mode = multiple\n"
                      "n = 3   # trailing\n"
                      "threshold = 0.7\n"
                      "detector = \"stub #1.json\"\n"
                      "embeddings = /abs/table.bin\n"
                      "grammar = false\n"
                      "seed = 12345678901\n"
                      "\n"
                      "format = text\n");
  auto c = default_config();
  apply_config_file(c, p);
  EXPECT_EQ(c.mode, SubstitutionMode::Multiple);
  EXPECT_EQ(c.n, 3u);
  EXPECT_DOUBLE_EQ(c.threshold, 0.7);
  EXPECT_EQ(c.detector, p.parent_path() / "stub #1.json");
  EXPECT_EQ(c.embeddings, "/abs/table.bin");
  EXPECT_FALSE(c.grammar);
  EXPECT_EQ(c.seed, 12345678901ULL);
  EXPECT_EQ(c.format, OutputFormat::Text);
  auto j = to_json(c);
  EXPECT_EQ(j["mode"], "multiple");
  EXPECT_EQ(j["n"], 3);
  EXPECT_EQ(j["encoder"], "mean-word-vector");
}

TEST(Config, RejectsBadInput) {
  auto c = default_config();
  for (auto [k, v] : std::vector<std::pair<std::string, std::string>>{
           {"colour", "red"}, {"n", "0"}, {"n", "-1"}, {"n", "3x"}, {"threshold", "1"}, {"threshold", "0"},
           {"mode", "many"}, {"grammar", "yes"}, {"jobs", "0"}, {"format", "xml"}, {"embeddings_format", "csv"}}) {
    try {
      apply_config_value(c, k, v);
      ADD_FAILURE() << k << "=" << v;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidArgument) << k;
    }
  }
  EXPECT_THROW(apply_config_file(c, write_temp("b.conf", "just words\n")), Error);
  try {
    apply_config_file(c, "/nonexistent/x.conf");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FileNotFound);
  }
}

TEST(Config, EnvironmentVariable) {
  auto p = write_temp("env.conf", "n = 2\n");
  ::setenv("TEXTMARK_CONFIG", p.c_str(), 1);
  auto c = load_config_from_env();
  ::unsetenv("TEXTMARK_CONFIG");
  EXPECT_EQ(c.n, 2u);
  EXPECT_EQ(load_config_from_env().n, 5u);
}

TEST(Corpus, ReadsLabelsAndSkipsBlankLines) {
  std::istringstream in("{\"text\": \"One.\", \"label\": 1}\n\n{\"text\": \"Two.\"}\n{\"text\":\"Three.\",\"label\":0}\n");
  auto recs = read_corpus(in);
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[0].label, Label::Watermarked);
  EXPECT_FALSE(recs[1].label);
  EXPECT_EQ(recs[2].label, Label::Unmarked);
  EXPECT_EQ(texts(recs), (std::vector<std::string>{"One.", "Two.", "Three."}));
}

TEST(Corpus, RoundTrip) {
  std::vector<CorpusRecord> recs = {{"Caf\xC3\xA9 \"quoted\"\nline", Label::Watermarked}, {"plain", std::nullopt}};
  std::stringstream ss;
  for (const auto& r : recs) write_corpus_record(ss, r);
  auto back = read_corpus(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].text, recs[0].text);
  EXPECT_EQ(back[0].label, recs[0].label);
  EXPECT_EQ(back[1].text, "plain");
  EXPECT_FALSE(back[1].label);
}

TEST(Corpus, MalformedLines) {
  for (const char* bad : {"not json", "[1,2]", "{\"label\": 1}", "{\"text\": 3}", "{\"text\": \"x\", \"label\": 2}",
                          "{\"text\": \"x\", \"label\": \"1\"}"}) {
    std::istringstream in(bad);
    try {
      read_corpus(in);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::MalformedData) << bad;
    }
  }
  EXPECT_THROW(read_corpus(std::filesystem::path("/nonexistent.jsonl")), Error);
}
