#include "textmark/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "textmark/error.hpp"
#include "textmark/utf8.hpp"

namespace textmark {

std::vector<CorpusRecord> read_corpus(std::istream& in, const std::string& source) {
  std::vector<CorpusRecord> out;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (utf8::trim(line).empty()) continue;
    auto where = [&] { return source + ":" + std::to_string(lineno) + ": "; };
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::MalformedData, where() + e.what());
    }
    if (!j.is_object() || !j.contains("text") || !j["text"].is_string())
      throw Error(ErrorCode::MalformedData, where() + "expected an object with a string \"text\"");
    CorpusRecord r;
    r.text = j["text"].get<std::string>();
    if (j.contains("label") && !j["label"].is_null()) {
      const auto& l = j["label"];
      if (!l.is_number_integer() || (l.get<int>() != 0 && l.get<int>() != 1))
        throw Error(ErrorCode::MalformedData, where() + "label must be 0 or 1");
      r.label = static_cast<Label>(l.get<int>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CorpusRecord> read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  return read_corpus(in, path.string());
}

void write_corpus_record(std::ostream& out, const CorpusRecord& record) {
  nlohmann::json j = {{"text", record.text}};
  if (record.label) j["label"] = static_cast<int>(*record.label);
  out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
}

std::vector<std::string> texts(const std::vector<CorpusRecord>& records) {
  std::vector<std::string> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.text);
  return out;
}

}  // namespace textmark
