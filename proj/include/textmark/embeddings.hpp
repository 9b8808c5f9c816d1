#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace textmark {

enum class EmbeddingFormat { Binary, Text };

// Word vectors stored raw, row-major, with norms cached at insertion.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  // Throws DuplicateWord, DimensionMismatch, or MalformedData for an invalid word.
  void add(std::string word, std::span<const float> vec);

  const std::string& word(std::size_t i) const { return words_[i]; }
  std::span<const float> vector(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  double norm(std::size_t i) const { return norms_[i]; }

  std::optional<std::size_t> find(std::string_view word) const;
  // Exact form first, then ASCII lowercase.
  std::optional<std::size_t> lookup(std::string_view word) const;

 private:
  std::size_t dim_;
  std::vector<std::string> words_;
  std::vector<float> data_;
  std::vector<double> norms_;
  std::unordered_map<std::string, std::size_t> index_;
};

EmbeddingTable load_embedding_table(const std::filesystem::path& path, EmbeddingFormat format,
                                    std::optional<std::size_t> limit = std::nullopt);

void save_embedding_table(const EmbeddingTable& table, const std::filesystem::path& path,
                          EmbeddingFormat format);

double cosine_similarity(std::span<const float> a, std::span<const float> b);

struct Neighbor {
  std::string word;
  double similarity;
  bool operator==(const Neighbor&) const = default;
};

// Brute-force scan. Sorted by similarity descending, then insertion order.
std::vector<Neighbor> nearest_neighbors(const EmbeddingTable& table, std::string_view word, std::size_t n,
                                        const std::unordered_set<std::string>& exclude = {});

// Copies the casing pattern of `original` (Initial capital or ALL CAPS) onto `word`.
std::string recase_like(std::string_view word, std::string_view original);

}  // namespace textmark
