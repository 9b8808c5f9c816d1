#include "textmark/embeddings.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "textmark/error.hpp"
#include "textmark/utf8.hpp"

namespace textmark {

static_assert(std::endian::native == std::endian::little, "binary vectors are read in place");

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw Error(ErrorCode::MalformedHeader, "dimension must be positive");
}

void EmbeddingTable::add(std::string word, std::span<const float> vec) {
  if (vec.size() != dim_) {
    throw Error(ErrorCode::DimensionMismatch,
                "'" + word + "' has " + std::to_string(vec.size()) + " components, expected " + std::to_string(dim_));
  }
  if (word.empty() || word.find('\0') != std::string::npos) {
    throw Error(ErrorCode::MalformedData, "empty word or interior NUL at entry " + std::to_string(size()));
  }
  double sq = 0.0;
  for (float x : vec) {
    if (!std::isfinite(x)) throw Error(ErrorCode::MalformedData, "non-finite component for '" + word + "'");
    sq += static_cast<double>(x) * x;
  }
  if (!index_.emplace(word, words_.size()).second) throw Error(ErrorCode::DuplicateWord, word);
  words_.push_back(std::move(word));
  data_.insert(data_.end(), vec.begin(), vec.end());
  norms_.push_back(std::sqrt(sq));
}

std::optional<std::size_t> EmbeddingTable::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> EmbeddingTable::lookup(std::string_view word) const {
  if (auto i = find(word)) return i;
  auto lower = utf8::ascii_lower(word);
  if (lower != word) return find(lower);
  return std::nullopt;
}

namespace {

bool parse_header(const std::string& line, std::size_t& vocab, std::size_t& dim) {
  std::istringstream in(line);
  std::string a, b, extra;
  if (!(in >> a >> b) || (in >> extra)) return false;
  auto parse = [](const std::string& s, std::size_t& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
  };
  return parse(a, vocab) && parse(b, dim);
}

EmbeddingTable load_binary(std::ifstream& in, std::optional<std::size_t> limit) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorCode::MalformedHeader, "missing header");
  std::size_t vocab = 0, dim = 0;
  if (!parse_header(header, vocab, dim) || dim == 0) throw Error(ErrorCode::MalformedHeader, header);
  std::size_t count = limit ? std::min(vocab, *limit) : vocab;
  EmbeddingTable table(dim);
  std::vector<float> buf(dim);
  for (std::size_t i = 0; i < count; ++i) {
    std::string word;
    int c;
    while ((c = in.get()) != EOF && c != ' ') {
      if (c == '\n' && word.empty()) continue;
      word += static_cast<char>(c);
    }
    if (c == EOF) throw Error(ErrorCode::TruncatedVector, "end of file in word " + std::to_string(i));
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(dim * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(dim * sizeof(float))) {
      throw Error(ErrorCode::TruncatedVector, "end of file in vector for '" + word + "'");
    }
    table.add(std::move(word), buf);
    if (in.peek() == '\n') in.get();
  }
  return table;
}

EmbeddingTable load_text(std::ifstream& in, std::optional<std::size_t> limit) {
  std::optional<EmbeddingTable> table;
  std::string line;
  std::vector<float> row;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      std::size_t v = 0, d = 0;
      if (parse_header(line, v, d)) {
        if (d == 0) throw Error(ErrorCode::MalformedHeader, line);
        table.emplace(d);
        if (v < limit.value_or(v)) limit = v;
        continue;
      }
    }
    if (limit && table && table->size() >= *limit) break;
    auto sp = line.find(' ');
    if (sp == std::string::npos || sp == 0) throw Error(ErrorCode::MalformedData, "line " + std::to_string(lineno));
    std::string word = line.substr(0, sp);
    row.clear();
    const char* p = line.data() + sp;
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      float x;
      auto [q, ec] = std::from_chars(p, end, x);
      if (ec != std::errc()) throw Error(ErrorCode::MalformedData, "bad number on line " + std::to_string(lineno));
      row.push_back(x);
      p = q;
    }
    if (!table) {
      if (row.empty()) throw Error(ErrorCode::MalformedData, "line " + std::to_string(lineno));
      table.emplace(row.size());
    }
    table->add(std::move(word), row);
    if (limit && table->size() >= *limit) break;
  }
  if (!table) throw Error(ErrorCode::EmptyVocabulary, "no vectors");
  return std::move(*table);
}

}  // namespace

EmbeddingTable load_embedding_table(const std::filesystem::path& path, EmbeddingFormat format,
                                    std::optional<std::size_t> limit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  if (limit && *limit == 0) throw Error(ErrorCode::InvalidArgument, "limit must be positive");
  EmbeddingTable table = format == EmbeddingFormat::Binary ? load_binary(in, limit) : load_text(in, limit);
  if (table.empty()) throw Error(ErrorCode::EmptyVocabulary, path.string());
  return table;
}

void save_embedding_table(const EmbeddingTable& table, const std::filesystem::path& path,
                          EmbeddingFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FileNotFound, path.string());
  out << table.size() << ' ' << table.dim() << '\n';
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.word(i);
    auto v = table.vector(i);
    if (format == EmbeddingFormat::Binary) {
      out << ' ';
      out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(float)));
    } else {
      char buf[32];
      for (float x : v) {
        auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
        out << ' ' << std::string_view(buf, p - buf);
      }
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::MalformedData, "write failed: " + path.string());
}

namespace {

double dot(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
  return s;
}

}  // namespace

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "cosine of unequal dimensions");
  double na = std::sqrt(dot(a, a));
  double nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::ZeroVector, "cosine with a zero vector");
  return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

std::vector<Neighbor> nearest_neighbors(const EmbeddingTable& table, std::string_view word, std::size_t n,
                                        const std::unordered_set<std::string>& exclude) {
  auto q = table.find(word);
  if (!q) throw Error(ErrorCode::WordNotInVocabulary, std::string(word));
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  auto qv = table.vector(*q);
  double qn = table.norm(*q);
  if (qn == 0.0) throw Error(ErrorCode::ZeroVector, std::string(word));

  struct Hit {
    double sim;
    std::size_t idx;
  };
  auto better = [](const Hit& a, const Hit& b) { return a.sim > b.sim || (a.sim == b.sim && a.idx < b.idx); };
  std::vector<Hit> heap;
  heap.reserve(n + 1);
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (i == *q || table.norm(i) == 0.0) continue;
    double sim = std::clamp(dot(qv, table.vector(i)) / (qn * table.norm(i)), -1.0, 1.0);
    if (heap.size() == n && !better({sim, i}, heap.front())) continue;
    if (!exclude.empty() && exclude.count(table.word(i))) continue;
    heap.push_back({sim, i});
    std::push_heap(heap.begin(), heap.end(), better);
    if (heap.size() > n) {
      std::pop_heap(heap.begin(), heap.end(), better);
      heap.pop_back();
    }
  }
  std::sort_heap(heap.begin(), heap.end(), better);
  std::vector<Neighbor> out;
  out.reserve(heap.size());
  for (const auto& h : heap) out.push_back({table.word(h.idx), h.sim});
  return out;
}

std::string recase_like(std::string_view word, std::string_view original) {
  auto is_upper = [](char c) { return c >= 'A' && c <= 'Z'; };
  auto is_lower = [](char c) { return c >= 'a' && c <= 'z'; };
  bool any_upper = false, any_lower = false;
  for (char c : original) {
    any_upper |= is_upper(c);
    any_lower |= is_lower(c);
  }
  std::string out(word);
  if (any_upper && !any_lower && original.size() > 1) {
    for (auto& c : out)
      if (is_lower(c)) c = static_cast<char>(c - 'a' + 'A');
  } else if (!original.empty() && is_upper(original[0])) {
    if (!out.empty() && is_lower(out[0])) out[0] = static_cast<char>(out[0] - 'a' + 'A');
  }
  return out;
}

}  // namespace textmark
