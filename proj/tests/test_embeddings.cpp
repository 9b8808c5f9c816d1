#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "oracles.hpp"
#include "test_support.hpp"
#include "textmark/embeddings.hpp"
#include "textmark/error.hpp"
#include "textmark/rng.hpp"

using namespace textmark;
using namespace textmark::testing;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "textmark-tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Embeddings, AddCachesNorm) {
  EmbeddingTable t(3);
  std::vector<float> v{3, 4, 12};
  t.add("x", v);
  EXPECT_NEAR(t.norm(0), 13.0, 1e-12);
  EXPECT_EQ(*t.find("x"), 0u);
}

TEST(Embeddings, AddRejectsBadEntries) {
  EmbeddingTable t(2);
  std::vector<float> ok{1, 0};
  t.add("a", ok);
  std::vector<float> three{1, 2, 3};
  std::vector<float> nan{NAN, 1};
  EXPECT_EQ(code_of([&] { t.add("a", ok); }), ErrorCode::DuplicateWord);
  EXPECT_EQ(code_of([&] { t.add("b", three); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([&] { t.add("", ok); }), ErrorCode::MalformedData);
  EXPECT_EQ(code_of([&] { t.add("c", nan); }), ErrorCode::MalformedData);
  EXPECT_EQ(code_of([&] { t.add(std::string("d\0e", 3), ok); }), ErrorCode::MalformedData);
}

TEST(Embeddings, LookupFallsBackToLowercase) {
  EmbeddingTable t(1);
  std::vector<float> v{1};
  t.add("paris", v);
  t.add("Apple", v);
  EXPECT_EQ(t.lookup("Paris"), t.find("paris"));
  EXPECT_EQ(t.lookup("Apple"), t.find("Apple"));
  EXPECT_FALSE(t.lookup("apple"));
}

TEST(Embeddings, BinaryAndTextRoundTrip) {
  Rng rng(3);
  auto t = random_table(rng, 50, 7);
  for (auto format : {EmbeddingFormat::Binary, EmbeddingFormat::Text}) {
    auto path = temp_file(format == EmbeddingFormat::Binary ? "rt.bin" : "rt.txt");
    save_embedding_table(t, path, format);
    auto back = load_embedding_table(path, format);
    ASSERT_EQ(back.size(), t.size());
    ASSERT_EQ(back.dim(), t.dim());
    for (std::size_t i = 0; i < t.size(); ++i) {
      EXPECT_EQ(back.word(i), t.word(i));
      for (std::size_t k = 0; k < t.dim(); ++k) EXPECT_EQ(back.vector(i)[k], t.vector(i)[k]);
    }
    auto limited = load_embedding_table(path, format, 10);
    EXPECT_EQ(limited.size(), 10u);
  }
}

TEST(Embeddings, TextWithoutHeader) {
  auto path = temp_file("noheader.txt");
  std::ofstream(path) << "cat 1 0 0\ndog 0.5 0.5 0\n";
  auto t = load_embedding_table(path, EmbeddingFormat::Text);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(t.dim(), 3u);
}

TEST(Embeddings, LoaderErrors) {
  EXPECT_EQ(code_of([] { load_embedding_table("/nonexistent.bin", EmbeddingFormat::Binary); }),
            ErrorCode::FileNotFound);
  auto bad_header = temp_file("badheader.bin");
  std::ofstream(bad_header) << "ten 3\n";
  EXPECT_EQ(code_of([&] { load_embedding_table(bad_header, EmbeddingFormat::Binary); }), ErrorCode::MalformedHeader);
  auto truncated = temp_file("trunc.bin");
  {
    std::ofstream out(truncated, std::ios::binary);
    out << "2 4\ncat ";
    float v[4] = {1, 2, 3, 4};
    out.write(reinterpret_cast<const char*>(v), sizeof v);
    out << "\ndog ";
    out.write(reinterpret_cast<const char*>(v), 6);
  }
  EXPECT_EQ(code_of([&] { load_embedding_table(truncated, EmbeddingFormat::Binary); }), ErrorCode::TruncatedVector);
  auto ragged = temp_file("ragged.txt");
  std::ofstream(ragged) << "2 3\ncat 1 0 0\ndog 1 0\n";
  EXPECT_EQ(code_of([&] { load_embedding_table(ragged, EmbeddingFormat::Text); }), ErrorCode::DimensionMismatch);
  auto empty = temp_file("empty.txt");
  std::ofstream(empty) << "";
  EXPECT_EQ(code_of([&] { load_embedding_table(empty, EmbeddingFormat::Text); }), ErrorCode::EmptyVocabulary);
}

TEST(Embeddings, CosineBasics) {
  std::vector<float> a{1, 2, 3}, b{2, 4, 6}, c{-1, -2, -3}, z{0, 0, 0}, d{1, 0};
  EXPECT_NEAR(cosine_similarity(a, a), 1.0, 1e-12);
  EXPECT_NEAR(cosine_similarity(a, b), 1.0, 1e-12);
  EXPECT_NEAR(cosine_similarity(a, c), -1.0, 1e-12);
  EXPECT_EQ(code_of([&] { cosine_similarity(a, z); }), ErrorCode::ZeroVector);
  EXPECT_EQ(code_of([&] { cosine_similarity(a, d); }), ErrorCode::DimensionMismatch);
}

TEST(Embeddings, CosineIsSymmetricAndBounded) {
  Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    std::vector<float> a(9), b(9);
    for (auto& x : a) x = static_cast<float>(rng.unit() - 0.5);
    for (auto& x : b) x = static_cast<float>(rng.unit() - 0.5);
    double ab = cosine_similarity(a, b);
    EXPECT_EQ(ab, cosine_similarity(b, a));
    EXPECT_LE(std::abs(ab), 1.0);
  }
}

TEST(Embeddings, NeighborsMatchBruteForce) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) ASSERT_EQ(knn_case_failure(rng), "") << "trial " << trial;
}

TEST(Embeddings, NeighborsExcludeQueryAndListedWords) {
  EmbeddingTable t(2);
  std::vector<float> a{1, 0}, b{0.9f, 0.1f}, c{0.8f, 0.2f}, d{0, 1};
  t.add("a", a);
  t.add("b", b);
  t.add("c", c);
  t.add("d", d);
  auto nb = nearest_neighbors(t, "a", 2);
  ASSERT_EQ(nb.size(), 2u);
  EXPECT_EQ(nb[0].word, "b");
  EXPECT_EQ(nb[1].word, "c");
  nb = nearest_neighbors(t, "a", 2, {"b"});
  EXPECT_EQ(nb[0].word, "c");
  EXPECT_EQ(nb[1].word, "d");
  EXPECT_EQ(nearest_neighbors(t, "a", 10).size(), 3u);
  EXPECT_EQ(code_of([&] { nearest_neighbors(t, "zzz", 2); }), ErrorCode::WordNotInVocabulary);
}

TEST(Embeddings, RecaseLike) {
  EXPECT_EQ(recase_like("quick", "Fast"), "Quick");
  EXPECT_EQ(recase_like("quick", "FAST"), "QUICK");
  EXPECT_EQ(recase_like("quick", "fast"), "quick");
  EXPECT_EQ(recase_like("quick", "A"), "Quick");
}

TEST(Embeddings, ShippedTableLoads) {
  const auto& t = *Shipped::get().table;
  EXPECT_EQ(t.dim(), 64u);
  EXPECT_GT(t.size(), 30000u);
  ASSERT_TRUE(t.find("house"));
  auto nb = nearest_neighbors(t, "house", 5);
  EXPECT_EQ(nb.size(), 5u);
}
