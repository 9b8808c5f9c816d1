#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "textmark/encoder.hpp"

namespace textmark {

// Written next to exported encoder and detector models.
struct ModelManifest {
  std::size_t encoder_dim = 0;
  double detector_threshold_hint = 0.5;
  std::string training_config_hash;
  std::string version;
};

// FileNotFound, or MalformedData when a field is missing or has the wrong type.
ModelManifest load_manifest(const std::filesystem::path& path);

// DimensionMismatch when the encoder does not produce `encoder_dim` values.
void check_manifest(const ModelManifest& manifest, const SentenceEncoder& encoder);

}  // namespace textmark
