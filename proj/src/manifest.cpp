#include "textmark/manifest.hpp"

#include <fstream>

#include "json.hpp"
#include "textmark/error.hpp"

namespace textmark {

ModelManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  auto bad = [&](const std::string& what) { return Error(ErrorCode::MalformedData, path.string() + ": " + what); };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw bad(e.what());
  }
  if (!j.is_object()) throw bad("expected an object");
  ModelManifest m;
  const auto& dim = j.value("encoder_dim", nlohmann::json());
  if (!dim.is_number_unsigned() || dim.get<std::size_t>() == 0) throw bad("encoder_dim must be a positive integer");
  m.encoder_dim = dim.get<std::size_t>();
  const auto& hint = j.value("detector_threshold_hint", nlohmann::json());
  if (!hint.is_number() || !(hint.get<double>() > 0.0 && hint.get<double>() < 1.0))
    throw bad("detector_threshold_hint must be in (0, 1)");
  m.detector_threshold_hint = hint.get<double>();
  for (auto [key, field] : {std::pair{"training_config_hash", &m.training_config_hash}, std::pair{"version", &m.version}}) {
    if (!j.contains(key) || !j[key].is_string()) throw bad(std::string(key) + " must be a string");
    *field = j[key].get<std::string>();
  }
  return m;
}

void check_manifest(const ModelManifest& manifest, const SentenceEncoder& encoder) {
  if (encoder.dim() != manifest.encoder_dim)
    throw Error(ErrorCode::DimensionMismatch, "manifest says encoder_dim " + std::to_string(manifest.encoder_dim) +
                                                  ", encoder produces " + std::to_string(encoder.dim()));
}

}  // namespace textmark
