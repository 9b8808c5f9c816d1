#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace textmark::onnx {

enum class DType { Float, Int64, String, Bool };

std::string dtype_name(DType t);

struct Tensor {
  DType type = DType::Float;
  std::vector<int64_t> shape;
  std::vector<float> f;
  std::vector<int64_t> i;
  std::vector<std::string> s;
  std::vector<uint8_t> b;

  std::size_t size() const;

  static Tensor floats(std::vector<int64_t> shape, std::vector<float> v);
  static Tensor ints(std::vector<int64_t> shape, std::vector<int64_t> v);
  static Tensor strings(std::vector<int64_t> shape, std::vector<std::string> v);
  static Tensor bools(std::vector<int64_t> shape, std::vector<uint8_t> v);
};

struct ValueInfo {
  std::string name;
  DType type = DType::Float;
  std::vector<int64_t> dims;  // -1 for symbolic or unknown
  bool has_shape = false;
};

// Interpreter for a pinned subset of ONNX (default domain opset <= 21, ai.onnx.ml <= 4).
// The supported operator list lives in docs/portable-models.md.
class Model {
 public:
  static Model load(const std::filesystem::path& path);
  static Model parse(const std::string& bytes);

  Model(Model&&) noexcept;
  Model& operator=(Model&&) noexcept;
  ~Model();

  // Graph inputs that are not initializers.
  const std::vector<ValueInfo>& inputs() const;
  const std::vector<ValueInfo>& outputs() const;
  int64_t opset(const std::string& domain = "") const;
  const std::map<std::string, std::string>& metadata() const;

  std::vector<Tensor> run(const std::vector<Tensor>& inputs) const;

  static const std::vector<std::string>& supported_ops();

 private:
  struct Impl;
  explicit Model(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

}  // namespace textmark::onnx
