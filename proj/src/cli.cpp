#include "textmark/cli.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "textmark/attacks.hpp"
#include "textmark/config.hpp"
#include "textmark/corpus.hpp"
#include "textmark/detection.hpp"
#include "textmark/error.hpp"
#include "textmark/insertion.hpp"
#include "textmark/manifest.hpp"
#include "textmark/metrics.hpp"
#include "textmark/utf8.hpp"

namespace textmark {

namespace {

using nlohmann::json;

constexpr std::array<int, 7> kBinomialRows{1, 5, 10, 20, 30, 50, 60};
constexpr std::size_t kStreamChunk = 1 << 16;

std::string dump(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

void require_file(const std::filesystem::path& p, const char* what) {
  if (p.empty()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " is not configured");
  if (!std::filesystem::exists(p)) throw Error(ErrorCode::FileNotFound, std::string(what) + ": " + p.string());
}

struct Resources {
  explicit Resources(const RunConfig& c) : config(c) {}

  const RunConfig& config;
  std::shared_ptr<const EmbeddingTable> table;
  std::shared_ptr<const StopwordSet> stopwords;
  std::optional<Tagger> tagger;
  std::optional<Inflector> inflector;
  std::optional<SentenceSplitter> splitter;
  std::unique_ptr<SentenceEncoder> encoder;
  std::unique_ptr<Detector> detector;

  const SentenceSplitter& sentence_splitter() {
    if (!splitter) {
      require_file(config.abbreviations, "abbreviations");
      splitter = SentenceSplitter::load(config.abbreviations);
    }
    return *splitter;
  }

  const Detector& sentence_detector() {
    if (!detector) {
      require_file(config.detector, "detector");
      detector = load_detector(config.detector, config.threshold);
    }
    return *detector;
  }

  const SentenceEncoder& sentence_encoder() {
    if (!encoder) {
      if (config.encoder.empty()) {
        load_lexical();
        encoder = std::make_unique<MeanWordVectorEncoder>(table, stopwords, config.embeddings.string());
      } else {
        require_file(config.encoder, "encoder");
        encoder = std::make_unique<PortableModelEncoder>(config.encoder);
      }
      if (!config.manifest.empty()) check_manifest(load_manifest(config.manifest), *encoder);
    }
    return *encoder;
  }

  void load_lexical() {
    if (!table) {
      require_file(config.embeddings, "embeddings");
      table = std::make_shared<const EmbeddingTable>(load_embedding_table(config.embeddings, config.embeddings_format));
    }
    if (!stopwords) {
      require_file(config.stopwords, "stopwords");
      stopwords = std::make_shared<const StopwordSet>(load_stopwords(config.stopwords));
    }
  }

  InsertionContext insertion_context() {
    load_lexical();
    if (!tagger) {
      require_file(config.tagger, "tagger");
      tagger = Tagger::load(config.tagger);
    }
    if (!inflector) {
      require_file(config.inflections, "inflections");
      inflector = Inflector::load(config.inflections);
    }
    const auto& enc = sentence_encoder();
    return InsertionContext{*table, enc, *tagger, *inflector, *stopwords, sentence_splitter(), insertion_config(config)};
  }
};

std::string read_all(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string read_input(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") return read_all(in);
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::FileNotFound, path);
  return read_all(f);
}

std::vector<std::string> nonblank(std::vector<std::string> v) {
  std::erase_if(v, [](const std::string& s) { return utf8::trim(s).empty(); });
  return v;
}

// Sentences from plain text, or one per record for JSONL input.
std::vector<std::string> read_sentences(const std::string& path, bool jsonl, std::istream& in, Resources& res) {
  if (jsonl) {
    std::vector<CorpusRecord> records;
    if (path.empty() || path == "-") {
      records = read_corpus(in);
    } else {
      records = read_corpus(std::filesystem::path(path));
    }
    return nonblank(texts(records));
  }
  return nonblank(res.sentence_splitter().split(read_input(path, in)));
}

json outcome_json(std::size_t index, const WatermarkOutcome& o, std::optional<bool> detected) {
  json subs = json::array();
  for (const auto& s : o.substitutions)
    subs.push_back({{"index", s.index}, {"original", s.original}, {"replacement", s.replacement},
                    {"similarity", round4(s.similarity)}});
  json fixes = json::array();
  for (const auto& f : o.article_fixes) fixes.push_back({{"index", f.index}, {"from", f.from}, {"to", f.to}});
  json j = {{"schema", kInsertSchema},
            {"type", "sentence"},
            {"index", index},
            {"original", o.original},
            {"marked", o.marked},
            {"watermarkable", o.watermarkable},
            {"sms", round4(o.sms)},
            {"substitutions", subs},
            {"article_fixes", fixes}};
  if (detected) j["detected"] = *detected;
  return j;
}

struct InsertOptions {
  std::string input;
  std::string sidecar;
};

int cmd_insert(const RunConfig& config, const InsertOptions& opt, std::istream& in, std::ostream& out) {
  Resources res(config);
  auto ctx = res.insertion_context();
  const Detector* detector = config.predetect ? &res.sentence_detector() : nullptr;

  std::ifstream file;
  std::istream* src = &in;
  if (!opt.input.empty() && opt.input != "-") {
    file.open(opt.input, std::ios::binary);
    if (!file) throw Error(ErrorCode::FileNotFound, opt.input);
    src = &file;
  }
  std::ofstream sidecar;
  if (!opt.sidecar.empty()) {
    sidecar.open(opt.sidecar, std::ios::binary | std::ios::trunc);
    if (!sidecar) throw Error(ErrorCode::FileNotFound, "cannot write sidecar " + opt.sidecar);
  }

  std::size_t index = 0, watermarkable = 0, detected_count = 0, nonblank_count = 0;
  std::vector<double> scores;
  auto process = [&](const std::vector<std::string>& sentences) {
    auto batch = watermark_sentences(sentences, ctx, config.jobs);
    for (auto& o : batch.per_sentence) {
      std::optional<bool> detected;
      const bool blank = utf8::trim(o.original).empty();
      if (!blank) ++nonblank_count;
      if (detector) {
        detected = !blank && detect_sentence(*detector, o.marked).label == Label::Watermarked;
        if (!*detected) {
          o.marked = o.original;
          o.substitutions.clear();
          o.article_fixes.clear();
          o.sms = 1.0;
          o.watermarkable = false;
        } else {
          ++detected_count;
        }
      }
      if (o.watermarkable) {
        ++watermarkable;
        scores.push_back(o.sms);
      }
      out << o.marked;
      if (sidecar.is_open()) sidecar << dump(outcome_json(index, o, detected)) << '\n';
      ++index;
    }
    out.flush();
  };

  std::string buffer, line;
  bool eof = false;
  while (!eof) {
    const std::size_t target = buffer.size() + kStreamChunk;
    while (buffer.size() < target) {
      if (!std::getline(*src, line)) {
        eof = true;
        break;
      }
      buffer += line;
      if (!src->eof()) buffer += '\n';
    }
    if (buffer.empty()) break;
    auto parts = ctx.splitter.split(buffer);
    if (!eof) {
      if (parts.size() < 2) continue;
      buffer = std::move(parts.back());
      parts.pop_back();
    } else {
      buffer.clear();
    }
    process(parts);
  }

  if (sidecar.is_open()) {
    json summary = {{"schema", kInsertSchema},
                    {"type", "summary"},
                    {"sentences", index},
                    {"watermarkable", watermarkable},
                    {"msms", round4(scores.empty() ? 1.0 : pairwise_sum(scores) / static_cast<double>(scores.size()))},
                    {"msms_count", scores.size()},
                    {"config", to_json(config)}};
    if (detector) {
      const double fraction =
          nonblank_count == 0 ? 0.0 : static_cast<double>(detected_count) / static_cast<double>(nonblank_count);
      summary["detectable_fraction"] = round4(fraction);
      summary["text_watermarkable"] = nonblank_count > 0 && fraction >= config.predetect_fraction;
    }
    sidecar << dump(summary) << '\n';
  }
  return 0;
}

enum class DetectMode { PerSentence, Collection, Percentage };

struct DetectOptions {
  std::string input;
  bool jsonl = false;
  DetectMode mode = DetectMode::Collection;
};

int cmd_detect(const RunConfig& config, const DetectOptions& opt, std::istream& in, std::ostream& out) {
  Resources res(config);
  const auto& detector = res.sentence_detector();
  auto sentences = read_sentences(opt.input, opt.jsonl, in, res);
  const bool text = config.format == OutputFormat::Text;
  json j = {{"schema", kDetectSchema}};
  switch (opt.mode) {
    case DetectMode::PerSentence: {
      json rows = json::array();
      for (const auto& s : sentences) {
        auto v = detect_sentence(detector, s);
        if (text) {
          out << label_name(v.label) << '\t' << std::fixed << std::setprecision(4) << v.score << '\t' << utf8::trim(s)
              << '\n';
        }
        rows.push_back({{"text", std::string(utf8::trim(s))}, {"score", round4(v.score)},
                        {"label", std::string(label_name(v.label))}});
      }
      j["mode"] = "per-sentence";
      j["count"] = sentences.size();
      j["sentences"] = rows;
      break;
    }
    case DetectMode::Collection: {
      auto v = detect_collection(detector, sentences);
      if (text) out << label_name(v.label) << '\n';
      j["mode"] = "collection";
      j["label"] = std::string(label_name(v.label));
      j["watermarked_count"] = v.watermarked_count;
      j["total"] = v.total;
      j["fraction"] = round4(v.fraction);
      break;
    }
    case DetectMode::Percentage: {
      auto v = detect_collection(detector, sentences);
      if (text) out << std::fixed << std::setprecision(4) << v.fraction << '\n';
      j["mode"] = "percentage";
      j["fraction"] = round4(v.fraction);
      j["watermarked_count"] = v.watermarked_count;
      j["total"] = v.total;
      break;
    }
  }
  if (!text) out << dump(j) << '\n';
  return 0;
}

struct EvalOptions {
  std::string watermarked;
  std::string unmarked;
  std::string sidecar;
  std::string attack;
  std::size_t attack_n = 1;
  std::size_t collections = 50;
  std::size_t sentences = 20;
};

// Watermarkable (original, marked) pairs from an insert sidecar.
std::vector<std::pair<std::string, std::string>> sidecar_pairs(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::FileNotFound, path);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  while (std::getline(f, line)) {
    if (utf8::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::MalformedData, path + ": " + e.what());
    }
    if (j.value("type", "") != "sentence" || !j.value("watermarkable", false)) continue;
    pairs.emplace_back(j.at("original").get<std::string>(), j.at("marked").get<std::string>());
  }
  return pairs;
}

int cmd_eval(const RunConfig& config, const EvalOptions& opt, std::ostream& out) {
  Resources res(config);
  const auto& detector = res.sentence_detector();
  auto wm = nonblank(texts(read_corpus(std::filesystem::path(opt.watermarked))));
  auto um = nonblank(texts(read_corpus(std::filesystem::path(opt.unmarked))));
  if (wm.empty() && um.empty()) throw Error(ErrorCode::EmptyDataset, "both pools are empty");

  std::vector<std::pair<Label, Label>> verdicts;
  for (const auto& s : wm) verdicts.emplace_back(detect_sentence(detector, s).label, Label::Watermarked);
  for (const auto& s : um) verdicts.emplace_back(detect_sentence(detector, s).label, Label::Unmarked);
  EvalReport report = confusion_metrics(verdicts);

  if (!opt.sidecar.empty()) {
    auto pairs = sidecar_pairs(opt.sidecar);
    if (!pairs.empty()) report.msms = msms_over_pairs(res.sentence_encoder(), pairs);
  }

  json attack = nullptr;
  if (!opt.attack.empty()) {
    auto dataset = build_attack_dataset(wm, um, opt.collections, opt.sentences, config.seed);
    std::vector<AttackedItem> items;
    if (opt.attack == "none") {
      for (const auto& lc : dataset) items.push_back({lc.sentences, lc.sentences, lc.label});
    } else {
      auto kind = parse_attack_kind(opt.attack);
      if (!kind) throw Error(ErrorCode::InvalidArgument, "unknown attack: " + opt.attack);
      std::vector<std::string> words;
      AttackPools pools{&wm, &um, nullptr};
      if (*kind == AttackKind::AddTokens || *kind == AttackKind::ReplaceTokens) {
        require_file(config.words, "words");
        words = load_word_list(config.words);
        pools.words = &words;
      }
      items = attack_dataset(dataset, *kind, opt.attack_n, config.seed, pools);
    }
    report.mioa = mioa(detector, items);
    attack = {{"kind", opt.attack},
              {"n", opt.attack == "none" ? 0 : opt.attack_n},
              {"seed", config.seed},
              {"collections", opt.collections},
              {"sentences_per_collection", opt.sentences}};
  }

  json binomial = json::array();
  for (int n : kBinomialRows)
    binomial.push_back({{"n", n}, {"accuracy", round4(binomial_collection_accuracy(*report.accuracy, n))}});

  json j = {{"schema", kEvalSchema}, {"config", to_json(config)}, {"seed", config.seed},
            {"sentences", verdicts.size()}, {"metrics", to_json(report)}, {"binomial", binomial},
            {"attack", attack}};
  if (config.format == OutputFormat::Text) {
    const auto m = to_json(report);
    for (auto it = m.begin(); it != m.end(); ++it)
      if (it.key() != "counts") out << it.key() << '\t' << it.value() << '\n';
    for (const auto& row : binomial) out << "n=" << row["n"] << '\t' << row["accuracy"] << '\n';
  } else {
    out << dump(j) << '\n';
  }
  return 0;
}

uint64_t fnv1a(uint64_t h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

struct TimeOptions {
  std::string input;
  bool jsonl = false;
};

int cmd_time(RunConfig config, const TimeOptions& opt, std::istream& in, std::ostream& out) {
  config.jobs = 1;
  Resources res(config);
  auto ctx = res.insertion_context();
  const auto& detector = res.sentence_detector();
  auto sentences = read_sentences(opt.input, opt.jsonl, in, res);
  if (sentences.empty()) throw Error(ErrorCode::EmptyDataset, "no sentences to time");

  using clock = std::chrono::steady_clock;
  std::vector<std::string> marked;
  marked.reserve(sentences.size());
  auto t0 = clock::now();
  for (const auto& s : sentences) marked.push_back(watermark_sentence(s, ctx).marked);
  auto t1 = clock::now();
  std::vector<Label> labels;
  labels.reserve(marked.size());
  for (const auto& s : marked) labels.push_back(detect_sentence(detector, s).label);
  auto t2 = clock::now();

  uint64_t h = 0xCBF29CE484222325ULL;
  for (std::size_t i = 0; i < marked.size(); ++i) {
    h = fnv1a(h, marked[i]);
    h = fnv1a(h, label_name(labels[i]));
    h = fnv1a(h, std::string_view("\n", 1));
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  const double n = static_cast<double>(sentences.size());
  const double insert_s = std::chrono::duration<double>(t1 - t0).count() / n;
  const double detect_s = std::chrono::duration<double>(t2 - t1).count() / n;
  json j = {{"schema", kTimeSchema},
            {"sentences", sentences.size()},
            {"insert_seconds_per_sentence", insert_s},
            {"detect_seconds_per_sentence", detect_s},
            {"output_hash", hex},
            {"config", to_json(config)}};
  if (config.format == OutputFormat::Text) {
    out << "insert_seconds_per_sentence\t" << insert_s << "\ndetect_seconds_per_sentence\t" << detect_s
        << "\noutput_hash\t" << hex << '\n';
  } else {
    out << dump(j) << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synonym-substitution text watermarking", "textmark"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value config file (overrides TEXTMARK_CONFIG)");
    for (const char* key : {"mode", "n", "threshold", "seed", "jobs", "format", "embeddings", "encoder", "detector",
                            "manifest", "sms-floor", "word-floor"}) {
      std::string k = key;
      sub->add_option_function<std::string>(
          "--" + k,
          [&overrides, k](const std::string& v) {
            std::string key_name = k;
            std::replace(key_name.begin(), key_name.end(), '-', '_');
            overrides.emplace_back(key_name, v);
          },
          "see docs/config.md");
    }
    sub->add_flag_callback("--no-grammar", [&overrides] { overrides.emplace_back("grammar", "false"); },
                           "skip POS and number agreement checks");
  };

  InsertOptions ins;
  auto* insert = app.add_subcommand("insert", "watermark text from a file or stdin");
  add_common(insert);
  insert->add_option("input", ins.input, "input text (default stdin)");
  insert->add_option("--sidecar", ins.sidecar, "JSONL file of per-sentence outcomes");
  insert->add_flag_callback("--predetect", [&overrides] { overrides.emplace_back("predetect", "true"); },
                            "keep only substitutions the detector flags");

  DetectOptions det;
  auto* detect = app.add_subcommand("detect", "detect the watermark");
  add_common(detect);
  detect->add_option("input", det.input, "input text (default stdin)");
  detect->add_flag("--jsonl", det.jsonl, "input is JSONL, one sentence per record");
  auto* per = detect->add_flag_callback("--per-sentence", [&det] { det.mode = DetectMode::PerSentence; });
  auto* col = detect->add_flag_callback("--collection", [&det] { det.mode = DetectMode::Collection; });
  auto* pct = detect->add_flag_callback("--percentage", [&det] { det.mode = DetectMode::Percentage; });
  per->excludes(col)->excludes(pct);
  col->excludes(pct);

  EvalOptions ev;
  auto* eval = app.add_subcommand("eval", "accuracy, binomial table and attack impact");
  add_common(eval);
  eval->add_option("--watermarked", ev.watermarked, "watermarked JSONL pool")->required();
  eval->add_option("--unmarked", ev.unmarked, "unmarked JSONL pool")->required();
  eval->add_option("--sidecar", ev.sidecar, "insert sidecar for mSMS");
  eval->add_option("--attack", ev.attack, "none, remove-sentences, add-sentences, replace-sentences, remove-tokens, "
                                          "add-tokens or replace-tokens");
  eval->add_option("--attack-n", ev.attack_n, "attack size")->check(CLI::PositiveNumber);
  eval->add_option("--collections", ev.collections, "collections per label")->check(CLI::PositiveNumber);
  eval->add_option("--sentences", ev.sentences, "sentences per collection")->check(CLI::PositiveNumber);

  TimeOptions tm;
  auto* timing = app.add_subcommand("time", "per-sentence insertion and detection time");
  add_common(timing);
  timing->add_option("input", tm.input, "corpus (default stdin)");
  timing->add_flag("--jsonl", tm.jsonl, "input is JSONL");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    RunConfig config = load_config_from_env();
    if (!config_path.empty()) apply_config_file(config, config_path);
    for (const auto& [k, v] : overrides) apply_config_value(config, k, v);
    if (insert->parsed()) return cmd_insert(config, ins, in, out);
    if (detect->parsed()) return cmd_detect(config, det, in, out);
    if (eval->parsed()) return cmd_eval(config, ev, out);
    return cmd_time(config, tm, in, out);
  } catch (const Error& e) {
    err << "textmark: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "textmark: " << e.what() << '\n';
    return 2;
  }
}

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, in, out, err);
}

}  // namespace textmark
