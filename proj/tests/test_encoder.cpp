#include <gtest/gtest.h>

#include "test_support.hpp"
#include "textmark/encoder.hpp"
#include "textmark/error.hpp"

using namespace textmark;
using namespace textmark::testing;

namespace {

std::shared_ptr<const EmbeddingTable> tiny_table() {
  auto t = std::make_shared<EmbeddingTable>(2);
  std::vector<float> cat{1, 0}, dog{0, 1}, the{1, 1}, big{3, 1};
  t->add("cat", cat);
  t->add("dog", dog);
  t->add("the", the);
  t->add("big", big);
  return t;
}

}  // namespace

TEST(Encoder, MeanOfKnownLexicalTokens) {
  auto stop = std::make_shared<const StopwordSet>(StopwordSet{"the"});
  MeanWordVectorEncoder enc(tiny_table(), stop);
  EXPECT_EQ(enc.dim(), 2u);
  auto v = enc.encode("The cat, the BIG dog and zebra!");
  // the(1,1) cat(1,0) the(1,1) big(3,1) dog(0,1): zebra and "and" are unknown
  ASSERT_EQ(v.size(), 2u);
  EXPECT_FLOAT_EQ(v[0], 6.0f / 5.0f);
  EXPECT_FLOAT_EQ(v[1], 4.0f / 5.0f);
}

TEST(Encoder, NothingEncodable) {
  MeanWordVectorEncoder enc(tiny_table(), nullptr);
  for (const char* text : {"", "   ", "!!!", "zebra unicorn"}) {
    try {
      enc.encode(text);
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::EmptyEncodable);
    }
  }
}

TEST(Encoder, SelfSimilarityIsOne) {
  const auto& res = Shipped::get();
  for (const auto& s : read_lines(data_dir() / "corpus" / "desk-200.txt")) {
    EXPECT_NEAR(sms(res.encoder, s, s), 1.0, 1e-6) << s;
  }
}

TEST(Encoder, SmsIsSymmetricAndBounded) {
  const auto& res = Shipped::get();
  auto lines = read_lines(data_dir() / "corpus" / "desk-200.txt");
  for (std::size_t i = 0; i + 1 < lines.size(); i += 7) {
    double ab = sms(res.encoder, lines[i], lines[i + 1]);
    EXPECT_NEAR(ab, sms(res.encoder, lines[i + 1], lines[i]), 1e-12);
    EXPECT_LE(std::abs(ab), 1.0);
  }
}

TEST(Encoder, StringInputRank) {
  onnx::ValueInfo flat{"text", onnx::DType::String, {1}, true};
  onnx::ValueInfo matrix{"text", onnx::DType::String, {1, 1}, true};
  onnx::ValueInfo scalar{"text", onnx::DType::String, {}, true};
  onnx::ValueInfo unknown{"text", onnx::DType::String, {}, false};
  EXPECT_EQ(string_input(flat, "x").shape, (std::vector<int64_t>{1}));
  EXPECT_EQ(string_input(matrix, "x").shape, (std::vector<int64_t>{1, 1}));
  EXPECT_TRUE(string_input(scalar, "x").shape.empty());
  EXPECT_EQ(string_input(unknown, "x").shape, (std::vector<int64_t>{1}));
  EXPECT_EQ(string_input(flat, "hello").s, (std::vector<std::string>{"hello"}));
}
