#include <fstream>
#include <sstream>

#include "textmark/embeddings.hpp"
#include "textmark/error.hpp"
#include "textmark/grammar.hpp"
#include "textmark/utf8.hpp"

namespace textmark {

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

std::size_t longest_prefix(std::string_view word, const std::vector<std::string>& prefixes) {
  std::size_t best = 0;
  for (const auto& p : prefixes)
    if (p.size() > best && word.substr(0, p.size()) == p) best = p.size();
  return best;
}

}  // namespace

Inflector Inflector::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::string line;
  if (!std::getline(in, line) || line != "TMINF1") throw Error(ErrorCode::MalformedModel, "missing TMINF1 magic");
  Inflector inf;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kind, a, b;
    ls >> kind >> a;
    if (kind == "plural") {
      ls >> b;
      if (b.empty()) throw Error(ErrorCode::MalformedModel, line);
      inf.plural_[a] = b;
      inf.singular_[b] = a;
    } else if (kind == "uninflected") {
      inf.uninflected_.insert(a);
    } else if (kind == "an") {
      inf.an_prefixes_.push_back(a);
    } else if (kind == "a") {
      inf.a_prefixes_.push_back(a);
    } else {
      throw Error(ErrorCode::MalformedModel, "unknown record '" + kind + "'");
    }
  }
  return inf;
}

bool Inflector::is_plural(std::string_view word) const {
  std::string w = utf8::ascii_lower(word);
  if (uninflected_.count(w)) return false;
  if (singular_.count(w)) return true;
  if (plural_.count(w)) return false;
  if (ends_with(w, "ss") || ends_with(w, "us") || ends_with(w, "is")) return false;
  return w.size() > 2 && w.back() == 's';
}

std::string Inflector::pluralize(std::string_view word) const {
  std::string w = utf8::ascii_lower(word);
  if (uninflected_.count(w) || singular_.count(w)) return std::string(word);
  if (auto it = plural_.find(w); it != plural_.end()) return recase_like(it->second, word);
  if (ends_with(w, "s") || ends_with(w, "x") || ends_with(w, "z") || ends_with(w, "ch") || ends_with(w, "sh"))
    return recase_like(w + "es", word);
  if (w.size() > 1 && w.back() == 'y' && !is_vowel(w[w.size() - 2]))
    return recase_like(w.substr(0, w.size() - 1) + "ies", word);
  // "-us" and "-is" read as singular, so unlisted words ending in u or i stay as they are
  if (w.back() == 'u' || w.back() == 'i') return std::string(word);
  return recase_like(w + "s", word);
}

std::string Inflector::singularize(std::string_view word) const {
  std::string w = utf8::ascii_lower(word);
  if (uninflected_.count(w)) return std::string(word);
  if (auto it = singular_.find(w); it != singular_.end()) return recase_like(it->second, word);
  if (plural_.count(w)) return std::string(word);
  std::string out = w;
  if (w.size() > 4 && ends_with(w, "ies")) {
    out = w.substr(0, w.size() - 3) + "y";
  } else if (ends_with(w, "sses") || ends_with(w, "ches") || ends_with(w, "shes") || ends_with(w, "xes") ||
             ends_with(w, "zes")) {
    out = w.substr(0, w.size() - 2);
  } else if (ends_with(w, "ss") || ends_with(w, "us") || ends_with(w, "is")) {
    return std::string(word);
  } else if (w.size() > 2 && w.back() == 's') {
    out = w.substr(0, w.size() - 1);
  }
  // "peoples" -> "people" -> "person"
  if (auto it = singular_.find(out); it != singular_.end()) out = it->second;
  return recase_like(out, word);
}

std::string Inflector::inflect(std::string_view word, GrammaticalNumber target) const {
  std::string lower = utf8::ascii_lower(word);
  if (uninflected_.count(lower) || target == GrammaticalNumber::NotApplicable) return std::string(word);
  bool plural = is_plural(lower);
  if (target == GrammaticalNumber::Plural) return plural ? std::string(word) : pluralize(word);
  return plural ? singularize(word) : std::string(word);
}

std::string Inflector::article_for(std::string_view next_word) const {
  if (next_word.empty()) return "a";
  std::string lower = utf8::ascii_lower(next_word);
  std::size_t an = longest_prefix(lower, an_prefixes_);
  std::size_t a = longest_prefix(lower, a_prefixes_);
  if (an || a) return an > a ? "an" : "a";
  bool acronym = next_word.size() >= 2;
  for (char c : next_word) acronym &= (c >= 'A' && c <= 'Z');
  if (acronym) {
    return std::string_view("AEFHILMNORSX").find(next_word[0]) != std::string_view::npos ? "an" : "a";
  }
  char c = lower[0];
  if (c == '8') return "an";
  if (lower.rfind("11", 0) == 0 || lower.rfind("18", 0) == 0) {
    std::size_t digits = 0;
    while (digits < lower.size() && lower[digits] >= '0' && lower[digits] <= '9') ++digits;
    return digits % 3 == 2 ? "an" : "a";
  }
  return is_vowel(c) ? "an" : "a";
}

}  // namespace textmark
