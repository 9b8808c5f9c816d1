#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "textmark/embeddings.hpp"
#include "textmark/onnx_runtime.hpp"
#include "textmark/segmentation.hpp"

namespace textmark {

using SentenceEmbedding = std::vector<float>;

enum class EncoderBackend { PortableModel, MeanWordVector };

class SentenceEncoder {
 public:
  virtual ~SentenceEncoder() = default;
  virtual std::size_t dim() const = 0;
  virtual EncoderBackend backend() const = 0;
  virtual std::string resource() const = 0;
  // Throws EmptyEncodable when nothing in the text can be encoded.
  virtual SentenceEmbedding encode(std::string_view text) const = 0;
};

// Mean of the table vectors of the Word and Stopword tokens found in the table.
class MeanWordVectorEncoder : public SentenceEncoder {
 public:
  MeanWordVectorEncoder(std::shared_ptr<const EmbeddingTable> table, std::shared_ptr<const StopwordSet> stopwords,
                        std::string resource = "embedding-table");

  std::size_t dim() const override { return table_->dim(); }
  EncoderBackend backend() const override { return EncoderBackend::MeanWordVector; }
  std::string resource() const override { return resource_; }
  SentenceEmbedding encode(std::string_view text) const override;

 private:
  std::shared_ptr<const EmbeddingTable> table_;
  std::shared_ptr<const StopwordSet> stopwords_;
  std::string resource_;
};

// A portable model mapping one string to one fixed-size float vector.
class PortableModelEncoder : public SentenceEncoder {
 public:
  explicit PortableModelEncoder(const std::filesystem::path& path);

  std::size_t dim() const override { return dim_; }
  EncoderBackend backend() const override { return EncoderBackend::PortableModel; }
  std::string resource() const override { return path_; }
  SentenceEmbedding encode(std::string_view text) const override;

 private:
  onnx::Model model_;
  std::size_t dim_;
  std::string path_;
};

// Builds the single string input tensor in the rank the model declares.
onnx::Tensor string_input(const onnx::ValueInfo& info, std::string_view text);
// Checks for exactly one string input and one float output.
void check_string_to_float_signature(const onnx::Model& model);

double sms(const SentenceEncoder& encoder, std::string_view original, std::string_view marked);

}  // namespace textmark
