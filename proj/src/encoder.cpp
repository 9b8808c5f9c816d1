#include "textmark/encoder.hpp"

#include "textmark/error.hpp"
#include "textmark/utf8.hpp"

namespace textmark {

MeanWordVectorEncoder::MeanWordVectorEncoder(std::shared_ptr<const EmbeddingTable> table,
                                             std::shared_ptr<const StopwordSet> stopwords, std::string resource)
    : table_(std::move(table)), stopwords_(std::move(stopwords)), resource_(std::move(resource)) {
  if (!table_) throw Error(ErrorCode::ModelLoadFailure, "no embedding table");
  if (!stopwords_) stopwords_ = std::make_shared<StopwordSet>();
}

SentenceEmbedding MeanWordVectorEncoder::encode(std::string_view text) const {
  auto rec = tokenize(text, *stopwords_);
  std::vector<double> acc(table_->dim(), 0.0);
  std::size_t count = 0;
  for (const auto& tok : rec.tokens) {
    if (!tok.lexical()) continue;
    auto idx = table_->lookup(tok.text);
    if (!idx) continue;
    auto v = table_->vector(*idx);
    for (std::size_t k = 0; k < v.size(); ++k) acc[k] += v[k];
    ++count;
  }
  if (count == 0) throw Error(ErrorCode::EmptyEncodable, "no in-vocabulary words in '" + std::string(text) + "'");
  SentenceEmbedding out(acc.size());
  for (std::size_t k = 0; k < acc.size(); ++k) out[k] = static_cast<float>(acc[k] / static_cast<double>(count));
  return out;
}

onnx::Tensor string_input(const onnx::ValueInfo& info, std::string_view text) {
  std::vector<int64_t> shape;
  if (!info.has_shape || !info.dims.empty()) shape.assign(std::max<std::size_t>(info.dims.size(), 1), 1);
  return onnx::Tensor::strings(shape, {std::string(text)});
}

void check_string_to_float_signature(const onnx::Model& model) {
  if (model.inputs().size() != 1 || model.inputs()[0].type != onnx::DType::String) {
    throw Error(ErrorCode::UnsupportedModelSignature, "model must take exactly one string input");
  }
  if (model.outputs().size() != 1 || model.outputs()[0].type != onnx::DType::Float) {
    throw Error(ErrorCode::UnsupportedModelSignature, "model must produce exactly one float output");
  }
}

PortableModelEncoder::PortableModelEncoder(const std::filesystem::path& path)
    : model_(onnx::Model::load(path)), path_(path.string()) {
  check_string_to_float_signature(model_);
  const auto& out = model_.outputs()[0];
  if (!out.has_shape || out.dims.empty() || out.dims.back() <= 0) {
    throw Error(ErrorCode::UnsupportedModelSignature, "encoder output needs a static last dimension");
  }
  dim_ = static_cast<std::size_t>(out.dims.back());
}

SentenceEmbedding PortableModelEncoder::encode(std::string_view text) const {
  if (utf8::trim(text).empty()) throw Error(ErrorCode::EmptyEncodable, "empty sentence");
  auto out = model_.run({string_input(model_.inputs()[0], text)});
  const auto& t = out.at(0);
  if (t.f.size() != dim_) {
    throw Error(ErrorCode::UnsupportedModelSignature,
                "encoder produced " + std::to_string(t.f.size()) + " values, expected " + std::to_string(dim_));
  }
  return t.f;
}

double sms(const SentenceEncoder& encoder, std::string_view original, std::string_view marked) {
  auto a = encoder.encode(original);
  auto b = encoder.encode(marked);
  return cosine_similarity(a, b);
}

}  // namespace textmark
