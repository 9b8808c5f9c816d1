#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "textmark/embeddings.hpp"
#include "textmark/insertion.hpp"

namespace textmark {

enum class OutputFormat { Json, Text };

struct RunConfig {
  std::filesystem::path embeddings;
  EmbeddingFormat embeddings_format = EmbeddingFormat::Binary;
  std::filesystem::path encoder;   // empty: mean word vectors over `embeddings`
  std::filesystem::path detector;  // .json: rule stub, otherwise a portable model
  std::filesystem::path manifest;  // checked against the encoder when set
  std::filesystem::path stopwords;
  std::filesystem::path abbreviations;
  std::filesystem::path tagger;
  std::filesystem::path inflections;
  std::filesystem::path words;
  SubstitutionMode mode = SubstitutionMode::Single;
  std::size_t n = 5;
  double threshold = 0.5;
  double sms_floor = 0.80;
  double word_floor = 0.0;
  double predetect_fraction = 0.51;
  bool grammar = true;
  bool predetect = false;
  uint64_t seed = 0;
  std::size_t jobs = 1;
  OutputFormat format = OutputFormat::Json;
};

// Paths under the shipped data directory.
RunConfig default_config();

// `key = value` lines; '#' comments; values may be double-quoted. Relative paths resolve
// against the file's directory.
void apply_config_file(RunConfig& config, const std::filesystem::path& path);
void apply_config_value(RunConfig& config, std::string_view key, std::string_view value,
                        const std::filesystem::path& base = {});

// Defaults, then the file named by TEXTMARK_CONFIG when set.
RunConfig load_config_from_env();

nlohmann::json to_json(const RunConfig& config);

InsertionConfig insertion_config(const RunConfig& config);

}  // namespace textmark
