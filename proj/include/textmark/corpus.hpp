#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "textmark/detection.hpp"

namespace textmark {

struct CorpusRecord {
  std::string text;
  std::optional<Label> label;
};

// One JSON object per line: {"text": string, "label": 0|1}; label optional. Blank lines skipped.
std::vector<CorpusRecord> read_corpus(std::istream& in, const std::string& source = "<stream>");
std::vector<CorpusRecord> read_corpus(const std::filesystem::path& path);
void write_corpus_record(std::ostream& out, const CorpusRecord& record);

std::vector<std::string> texts(const std::vector<CorpusRecord>& records);

}  // namespace textmark
