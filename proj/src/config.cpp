#include "textmark/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

#include "textmark/error.hpp"
#include "textmark/utf8.hpp"

namespace textmark {

namespace {

template <class T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw Error(ErrorCode::InvalidArgument, "bad value for " + std::string(key) + ": " + std::string(v));
  return out;
}

double parse_double(std::string_view key, std::string_view v) {
  std::string s(v);
  char* end = nullptr;
  double d = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw Error(ErrorCode::InvalidArgument, "bad value for " + std::string(key) + ": " + s);
  return d;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw Error(ErrorCode::InvalidArgument, "bad value for " + std::string(key) + ": " + std::string(v));
}

std::filesystem::path resolve(std::string_view v, const std::filesystem::path& base) {
  std::filesystem::path p{std::string(v)};
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

}  // namespace

RunConfig default_config() {
  const std::filesystem::path data = TEXTMARK_DATA_DIR;
  RunConfig c;
  c.embeddings = data / "embeddings" / "desk-en-64.bin";
  c.stopwords = data / "stopwords-en.txt";
  c.abbreviations = data / "abbreviations-en.txt";
  c.tagger = data / "tagger-en.tmtag";
  c.inflections = data / "inflections-en.tminf";
  c.words = data / "words-en.txt";
  return c;
}

void apply_config_value(RunConfig& c, std::string_view key, std::string_view value,
                        const std::filesystem::path& base) {
  if (key == "embeddings") {
    c.embeddings = resolve(value, base);
  } else if (key == "embeddings_format") {
    if (value == "binary") {
      c.embeddings_format = EmbeddingFormat::Binary;
    } else if (value == "text") {
      c.embeddings_format = EmbeddingFormat::Text;
    } else {
      throw Error(ErrorCode::InvalidArgument, "embeddings_format must be binary or text");
    }
  } else if (key == "encoder") {
    c.encoder = resolve(value, base);
  } else if (key == "detector") {
    c.detector = resolve(value, base);
  } else if (key == "manifest") {
    c.manifest = resolve(value, base);
  } else if (key == "stopwords") {
    c.stopwords = resolve(value, base);
  } else if (key == "abbreviations") {
    c.abbreviations = resolve(value, base);
  } else if (key == "tagger") {
    c.tagger = resolve(value, base);
  } else if (key == "inflections") {
    c.inflections = resolve(value, base);
  } else if (key == "words") {
    c.words = resolve(value, base);
  } else if (key == "mode") {
    if (value == "single") {
      c.mode = SubstitutionMode::Single;
    } else if (value == "multiple") {
      c.mode = SubstitutionMode::Multiple;
    } else {
      throw Error(ErrorCode::InvalidArgument, "mode must be single or multiple");
    }
  } else if (key == "n") {
    c.n = parse_number<std::size_t>(key, value);
    if (c.n == 0) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  } else if (key == "threshold") {
    c.threshold = parse_double(key, value);
    if (!(c.threshold > 0.0 && c.threshold < 1.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be in (0, 1)");
  } else if (key == "sms_floor") {
    c.sms_floor = parse_double(key, value);
  } else if (key == "word_floor") {
    c.word_floor = parse_double(key, value);
  } else if (key == "predetect_fraction") {
    c.predetect_fraction = parse_double(key, value);
  } else if (key == "grammar") {
    c.grammar = parse_bool(key, value);
  } else if (key == "predetect") {
    c.predetect = parse_bool(key, value);
  } else if (key == "seed") {
    c.seed = parse_number<uint64_t>(key, value);
  } else if (key == "jobs") {
    c.jobs = parse_number<std::size_t>(key, value);
    if (c.jobs == 0) throw Error(ErrorCode::InvalidArgument, "jobs must be positive");
  } else if (key == "format") {
    if (value == "json") {
      c.format = OutputFormat::Json;
    } else if (value == "text") {
      c.format = OutputFormat::Text;
    } else {
      throw Error(ErrorCode::InvalidArgument, "format must be json or text");
    }
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown config key: " + std::string(key));
  }
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  const auto base = path.parent_path();
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    std::string_view v = line;
    if (auto hash = v.find('#'); hash != std::string_view::npos && v.find('"') > hash) v = v.substr(0, hash);
    v = utf8::trim(v);
    if (v.empty()) continue;
    auto eq = v.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::InvalidArgument, path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    auto key = utf8::trim(v.substr(0, eq));
    auto value = utf8::trim(v.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"') {
      auto close = value.find('"', 1);
      if (close == std::string_view::npos)
        throw Error(ErrorCode::InvalidArgument, path.string() + ":" + std::to_string(lineno) + ": unterminated string");
      value = value.substr(1, close - 1);
    }
    apply_config_value(config, key, value, base);
  }
}

RunConfig load_config_from_env() {
  RunConfig c = default_config();
  if (const char* p = std::getenv("TEXTMARK_CONFIG"); p && *p) apply_config_file(c, p);
  return c;
}

nlohmann::json to_json(const RunConfig& c) {
  return {
      {"embeddings", c.embeddings.string()},
      {"embeddings_format", c.embeddings_format == EmbeddingFormat::Binary ? "binary" : "text"},
      {"encoder", c.encoder.empty() ? "mean-word-vector" : c.encoder.string()},
      {"detector", c.detector.string()},
      {"manifest", c.manifest.string()},
      {"stopwords", c.stopwords.string()},
      {"abbreviations", c.abbreviations.string()},
      {"tagger", c.tagger.string()},
      {"inflections", c.inflections.string()},
      {"words", c.words.string()},
      {"mode", std::string(mode_name(c.mode))},
      {"n", c.n},
      {"threshold", c.threshold},
      {"sms_floor", c.sms_floor},
      {"word_floor", c.word_floor},
      {"predetect", c.predetect},
      {"predetect_fraction", c.predetect_fraction},
      {"grammar", c.grammar},
      {"seed", c.seed},
      {"jobs", c.jobs},
  };
}

InsertionConfig insertion_config(const RunConfig& c) {
  InsertionConfig ic;
  ic.n = c.n;
  ic.mode = c.mode;
  ic.sms_floor = c.sms_floor;
  ic.word_floor = c.word_floor;
  ic.grammar = c.grammar;
  return ic;
}

}  // namespace textmark
