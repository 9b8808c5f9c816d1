#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "textmark/error.hpp"
#include "textmark/grammar.hpp"
#include "textmark/utf8.hpp"

namespace textmark {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kContextWeight = 0.95;
constexpr double kLowercaseWeight = 0.75;
constexpr double kSuffixWeight = 0.8;

std::unordered_map<std::string, double> parse_counts(std::istringstream& in) {
  std::unordered_map<std::string, double> out;
  std::string item;
  while (in >> item) {
    auto colon = item.rfind(':');
    if (colon == std::string::npos || colon == 0) throw Error(ErrorCode::MalformedModel, "bad count '" + item + "'");
    out[item.substr(0, colon)] += std::stod(item.substr(colon + 1));
  }
  return out;
}

std::string shape_of(std::string_view word) {
  if (std::any_of(word.begin(), word.end(), [](char c) { return c >= '0' && c <= '9'; })) return "digit";
  if (!word.empty() && word[0] >= 'A' && word[0] <= 'Z') return "cap";
  if (word.find('-') != std::string_view::npos) return "hyphen";
  return "lower";
}

std::string fold_apostrophe(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s.compare(i, 3, "\xE2\x80\x99") == 0) {
      out += '\'';
      i += 3;
    } else {
      out += s[i++];
    }
  }
  return out;
}

}  // namespace

std::string punctuation_tag(std::string_view text) {
  if (text.size() == 1) {
    switch (text[0]) {
      case ',': return ",";
      case '.': case '?': case '!': return ".";
      case ':': case ';': case '-': return ":";
      case '(': case '[': case '{': return "(";
      case ')': case ']': case '}': return ")";
      case '"': case '\'': case '`': return "''";
      case '$': return "$";
      case '#': return "#";
      default: return "SYM";
    }
  }
  auto d = utf8::decode(text, 0);
  switch (d.cp) {
    case 0x2018: case 0x2019: case 0x201C: case 0x201D: case 0xAB: case 0xBB: return "''";
    case 0x2013: case 0x2014: case 0x2026: return ":";
    default: return "SYM";
  }
}

Tagger Tagger::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::TaggerModelMissing, path.string());
  std::string line;
  if (!std::getline(in, line) || line != "TMTAG1") throw Error(ErrorCode::MalformedModel, "missing TMTAG1 magic");

  Tagger t;
  std::unordered_map<std::string, double> start;
  std::unordered_map<std::string, std::unordered_map<std::string, double>> trans;
  std::unordered_map<std::string, std::unordered_map<std::string, double>> words, shapes, suffixes;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "tagset") {
      std::string tag;
      while (ls >> tag) {
        t.tag_ids_.emplace(tag, static_cast<int>(t.tags_.size()));
        t.tags_.push_back(tag);
      }
    } else if (kind == "start") {
      start = parse_counts(ls);
    } else if (kind == "trans" || kind == "shape" || kind == "word") {
      std::string key;
      ls >> key;
      auto counts = parse_counts(ls);
      (kind == "trans" ? trans : kind == "shape" ? shapes : words)[key] = std::move(counts);
    } else if (kind == "suffix") {
      std::string shape, suf;
      ls >> shape >> suf;
      suffixes[shape + " " + suf] = parse_counts(ls);
    } else {
      throw Error(ErrorCode::MalformedModel, "unknown record '" + kind + "'");
    }
  }
  if (t.tags_.empty()) throw Error(ErrorCode::MalformedModel, "no tagset");
  const std::size_t T = t.tags_.size();

  auto ids = [&](const std::unordered_map<std::string, double>& counts) {
    std::unordered_map<int, double> out;
    for (auto& [tag, c] : counts) {
      auto it = t.tag_ids_.find(tag);
      if (it == t.tag_ids_.end()) throw Error(ErrorCode::MalformedModel, "tag '" + tag + "' not in tagset");
      out[it->second] += c;
    }
    return out;
  };

  std::vector<double> unigram(T, 1.0);
  for (auto& [tag, c] : ids(start)) unigram[tag] += c;
  for (auto& [prev, row] : trans)
    for (auto& [tag, c] : ids(row)) unigram[tag] += c;
  double total = 0.0;
  for (double u : unigram) total += u;
  t.prior_.resize(T);
  for (std::size_t i = 0; i < T; ++i) t.prior_[i] = unigram[i] / total;

  auto context_row = [&](const std::unordered_map<int, double>& counts) {
    double sum = 0.0;
    for (auto& [_, c] : counts) sum += c;
    std::vector<double> row(T);
    for (std::size_t i = 0; i < T; ++i) {
      double p = (1.0 - kContextWeight) * t.prior_[i];
      if (auto it = counts.find(static_cast<int>(i)); it != counts.end() && sum > 0) {
        p += kContextWeight * it->second / sum;
      } else if (sum == 0) {
        p = t.prior_[i];
      }
      row[i] = std::log(p);
    }
    return row;
  };
  t.start_ = context_row(ids(start));
  t.trans_.assign(T, std::vector<double>());
  for (std::size_t i = 0; i < T; ++i) {
    auto it = trans.find(t.tags_[i]);
    t.trans_[i] = context_row(it == trans.end() ? std::unordered_map<int, double>{} : ids(it->second));
  }
  for (auto& [w, c] : words) t.words_.emplace(w, t.normalize(ids(c)));
  for (auto& [s, c] : shapes) t.shapes_.emplace(s, t.normalize(ids(c)));
  for (auto& [s, c] : suffixes) t.suffixes_.emplace(s, t.normalize(ids(c)));
  return t;
}

bool Tagger::has_tag(std::string_view tag) const { return tag_ids_.count(std::string(tag)) > 0; }

int Tagger::id(std::string_view tag) const {
  auto it = tag_ids_.find(std::string(tag));
  if (it != tag_ids_.end()) return it->second;
  it = tag_ids_.find("SYM");
  return it == tag_ids_.end() ? 0 : it->second;
}

Tagger::Dist Tagger::normalize(const std::unordered_map<int, double>& counts) const {
  Dist d;
  double sum = 0.0;
  for (auto& [_, c] : counts) sum += c;
  for (auto& [tag, c] : counts) d.probs.emplace_back(tag, c / sum);
  std::sort(d.probs.begin(), d.probs.end());
  return d;
}

std::vector<double> Tagger::emission(std::string_view raw) const {
  const std::size_t T = tags_.size();
  std::vector<double> p(T, 0.0);
  auto add = [&](const Dist& d, double weight) {
    for (auto& [tag, prob] : d.probs) p[tag] += weight * prob;
  };
  auto unknown = [&](std::string_view word, double weight) {
    std::string shape = shape_of(word);
    std::string low = utf8::ascii_lower(word);
    const Dist* shape_dist = nullptr;
    if (auto it = shapes_.find(shape); it != shapes_.end()) shape_dist = &it->second;
    for (std::size_t k = 4; k >= 1; --k) {
      if (low.size() <= k) continue;
      auto it = suffixes_.find(shape + " " + low.substr(low.size() - k));
      if (it == suffixes_.end()) continue;
      add(it->second, weight * (shape_dist ? kSuffixWeight : 1.0));
      if (shape_dist) add(*shape_dist, weight * (1.0 - kSuffixWeight));
      return;
    }
    if (shape_dist) {
      add(*shape_dist, weight);
    } else {
      for (std::size_t i = 0; i < T; ++i) p[i] += weight * prior_[i];
    }
  };

  std::string word = fold_apostrophe(raw);
  if (auto it = words_.find(word); it != words_.end()) {
    add(it->second, 1.0);
  } else if (auto lo = words_.find(utf8::ascii_lower(word)); lo != words_.end()) {
    add(lo->second, kLowercaseWeight);
    unknown(word, 1.0 - kLowercaseWeight);
  } else {
    unknown(word, 1.0);
  }
  for (std::size_t i = 0; i < T; ++i) p[i] = p[i] > 0 ? std::log(p[i] / prior_[i]) : kNegInf;
  return p;
}

std::vector<std::string> Tagger::tag_tokens(const std::vector<Token>& tokens) const {
  const std::size_t T = tags_.size();
  std::vector<const Token*> seq;
  for (const auto& tok : tokens)
    if (tok.kind != TokenKind::Whitespace) seq.push_back(&tok);
  if (seq.empty()) return {};

  std::vector<std::vector<double>> score(seq.size(), std::vector<double>(T, kNegInf));
  std::vector<std::vector<int>> back(seq.size(), std::vector<int>(T, -1));
  for (std::size_t i = 0; i < seq.size(); ++i) {
    std::vector<double> emit;
    if (seq[i]->kind == TokenKind::Punctuation) {
      emit.assign(T, kNegInf);
      emit[id(punctuation_tag(seq[i]->text))] = 0.0;
    } else {
      emit = emission(seq[i]->text);
    }
    for (std::size_t t = 0; t < T; ++t) {
      if (emit[t] == kNegInf) continue;
      if (i == 0) {
        score[0][t] = start_[t] + emit[t];
        continue;
      }
      double best = kNegInf;
      int arg = -1;
      for (std::size_t s = 0; s < T; ++s) {
        if (score[i - 1][s] == kNegInf) continue;
        double v = score[i - 1][s] + trans_[s][t];
        if (v > best) best = v, arg = static_cast<int>(s);
      }
      if (arg >= 0) score[i][t] = best + emit[t], back[i][t] = arg;
    }
  }
  std::vector<std::string> out(seq.size());
  int cur = static_cast<int>(std::max_element(score.back().begin(), score.back().end()) - score.back().begin());
  for (std::size_t i = seq.size(); i-- > 0;) {
    out[i] = tags_[cur];
    if (i > 0) cur = back[i][cur] >= 0 ? back[i][cur] : 0;
  }
  return out;
}

void Tagger::annotate(SentenceRecord& record) const {
  auto tags = tag_tokens(record.tokens);
  std::size_t k = 0;
  for (auto& tok : record.tokens) {
    if (tok.kind == TokenKind::Whitespace) continue;
    const std::string& tag = tags[k++];
    if (tok.lexical()) {
      tok.pos = tag;
      tok.number = grammatical_number(tok.text, tag);
    }
  }
}

}  // namespace textmark
