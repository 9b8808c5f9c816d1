#include "textmark/segmentation.hpp"

#include <fstream>

#include "textmark/error.hpp"
#include "textmark/utf8.hpp"

namespace textmark {

std::string_view token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Word: return "word";
    case TokenKind::Stopword: return "stopword";
    case TokenKind::Punctuation: return "punctuation";
    case TokenKind::Whitespace: return "whitespace";
  }
  return "?";
}

std::vector<std::string> load_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto t = utf8::trim(line);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  StopwordSet out;
  for (auto& w : load_word_list(path)) out.insert(utf8::fold(w));
  return out;
}

bool is_stopword(std::string_view word, const StopwordSet& stopwords) {
  return stopwords.count(utf8::fold(word)) > 0;
}

SentenceRecord tokenize(std::string_view sentence, const StopwordSet& stopwords) {
  SentenceRecord rec;
  rec.source = std::string(sentence);
  const std::size_t n = sentence.size();
  std::size_t i = 0;
  while (i < n) {
    auto d = utf8::decode(sentence, i);
    std::size_t j = i + d.size;
    TokenKind kind;
    if (utf8::is_space(d.cp)) {
      while (j < n) {
        auto e = utf8::decode(sentence, j);
        if (!utf8::is_space(e.cp)) break;
        j += e.size;
      }
      kind = TokenKind::Whitespace;
    } else if (utf8::is_word_char(d.cp)) {
      while (j < n) {
        auto e = utf8::decode(sentence, j);
        if (utf8::is_word_char(e.cp)) {
          j += e.size;
          continue;
        }
        if (utf8::is_connector(e.cp) && j + e.size < n &&
            utf8::is_word_char(utf8::decode(sentence, j + e.size).cp)) {
          j += e.size;
          continue;
        }
        break;
      }
      kind = is_stopword(sentence.substr(i, j - i), stopwords) ? TokenKind::Stopword : TokenKind::Word;
    } else {
      kind = TokenKind::Punctuation;
    }
    Token t;
    t.text = std::string(sentence.substr(i, j - i));
    t.kind = kind;
    t.start = i;
    t.end = j;
    rec.tokens.push_back(std::move(t));
    i = j;
  }
  return rec;
}

std::string detokenize(const std::vector<Token>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += t.text;
  return out;
}

std::vector<std::size_t> candidate_indices(const SentenceRecord& record) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < record.tokens.size(); ++i)
    if (record.tokens[i].kind == TokenKind::Word) out.push_back(i);
  return out;
}

SentenceSplitter::SentenceSplitter(std::vector<std::string> abbreviations) {
  for (auto& a : abbreviations) {
    auto w = utf8::fold(a);
    while (!w.empty() && w.back() == '.') w.pop_back();
    if (!w.empty()) abbreviations_.insert(std::move(w));
  }
}

SentenceSplitter SentenceSplitter::load(const std::filesystem::path& path) {
  return SentenceSplitter(load_word_list(path));
}

namespace {

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_closer(char32_t cp) {
  return cp == '"' || cp == '\'' || cp == ')' || cp == ']' || cp == '}' || cp == 0x201D || cp == 0x2019 ||
         cp == 0xBB;
}

bool is_opener(char32_t cp) {
  return cp == '"' || cp == '\'' || cp == '(' || cp == '[' || cp == 0x201C || cp == 0x2018 || cp == 0xAB;
}

bool is_upper_or_digit(char32_t cp) {
  return (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9') || (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7);
}

bool starts_sentence(std::string_view text, std::size_t k) {
  auto d = utf8::decode(text, k);
  if (is_upper_or_digit(d.cp)) return true;
  if (is_opener(d.cp) && k + d.size < text.size()) return is_upper_or_digit(utf8::decode(text, k + d.size).cp);
  return false;
}

bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

}  // namespace

bool SentenceSplitter::blocks_split(std::string_view text, std::size_t dot) const {
  std::size_t s = dot;
  while (s > 0) {
    char c = text[s - 1];
    auto uc = static_cast<unsigned char>(c);
    if (c == '.' || is_ascii_alpha(c) || (c >= '0' && c <= '9') || uc >= 0x80) {
      --s;
    } else {
      break;
    }
  }
  while (s < dot && text[s] == '.') ++s;
  if (s == dot) return false;
  std::string word = utf8::fold(text.substr(s, dot - s));
  if (abbreviations_.count(word)) return true;
  if (word.size() == 1 && is_ascii_alpha(word[0]) && text[s] != 'I') return true;
  // dotted initialisms such as "u.s.a"
  if (word.size() >= 3) {
    bool dotted = true;
    for (std::size_t i = 0; i < word.size(); ++i)
      dotted &= (i % 2 == 0) ? is_ascii_alpha(word[i]) : word[i] == '.';
    if (dotted && word.size() % 2 == 1) return true;
  }
  return false;
}

std::vector<std::string> SentenceSplitter::split(std::string_view text) const {
  std::vector<std::string> out;
  const std::size_t n = text.size();
  std::size_t begin = 0;
  std::size_t i = 0;
  bool content = false;
  auto emit = [&](std::size_t end) {
    out.emplace_back(text.substr(begin, end - begin));
    begin = end;
    content = false;
  };
  auto skip_space = [&](std::size_t k, int* newlines) {
    while (k < n) {
      auto d = utf8::decode(text, k);
      if (!utf8::is_space(d.cp)) break;
      if (newlines && d.cp == '\n') ++*newlines;
      k += d.size;
    }
    return k;
  };
  while (i < n) {
    auto d = utf8::decode(text, i);
    if (utf8::is_space(d.cp)) {
      int newlines = 0;
      std::size_t j = skip_space(i, &newlines);
      if (newlines >= 2 && content && j < n) {
        emit(j);
      }
      i = j;
      continue;
    }
    content = true;
    if (!is_terminator(text[i])) {
      i += d.size;
      continue;
    }
    std::size_t j = i;
    while (j < n && is_terminator(text[j])) ++j;
    bool single_dot = (j == i + 1 && text[i] == '.');
    while (j < n) {
      auto c = utf8::decode(text, j);
      if (!is_closer(c.cp)) break;
      j += c.size;
    }
    std::size_t k = skip_space(j, nullptr);
    if (k > j && k < n && starts_sentence(text, k) && !(single_dot && blocks_split(text, i))) {
      emit(k);
      i = k;
      continue;
    }
    i = j;
  }
  if (begin < n) out.emplace_back(text.substr(begin));
  return out;
}

}  // namespace textmark
