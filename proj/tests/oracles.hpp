#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "textmark/attacks.hpp"
#include "textmark/embeddings.hpp"
#include "textmark/rng.hpp"
#include "textmark/segmentation.hpp"
#include "textmark/utf8.hpp"

namespace textmark::testing {

inline EmbeddingTable random_table(Rng& rng, std::size_t words, std::size_t dim) {
  EmbeddingTable t(dim);
  std::vector<float> v(dim);
  std::vector<float> previous;
  for (std::size_t i = 0; i < words; ++i) {
    if (!previous.empty() && rng.below(20) == 0) {
      v = previous;  // exact ties
    } else {
      for (auto& x : v) x = static_cast<float>(rng.unit() * 2.0 - 1.0);
    }
    previous = v;
    t.add("w" + std::to_string(i), v);
  }
  return t;
}

// Full sort of every other entry by (similarity desc, index asc).
inline std::vector<std::string> brute_force(const EmbeddingTable& t, std::size_t q, std::size_t n) {
  auto qv = t.vector(q);
  auto norm = [](std::span<const float> v) {
    double s = 0;
    for (float x : v) s += static_cast<double>(x) * x;
    return std::sqrt(s);
  };
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i == q) continue;
    double d = 0;
    for (std::size_t k = 0; k < t.dim(); ++k) d += static_cast<double>(qv[k]) * t.vector(i)[k];
    all.emplace_back(std::clamp(d / (norm(qv) * norm(t.vector(i))), -1.0, 1.0), i);
  }
  std::sort(all.begin(), all.end(), [](auto& a, auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
  std::vector<std::string> out;
  for (std::size_t k = 0; k < std::min(n, all.size()); ++k) out.push_back(t.word(all[k].second));
  return out;
}

// One random neighbor query; empty on agreement.
inline std::string knn_case_failure(Rng& rng) {
  std::size_t words = 2 + rng.below(999);
  std::size_t dim = 4 + rng.below(61);
  auto t = random_table(rng, words, dim);
  std::size_t q = rng.below(t.size());
  std::size_t n = 1 + rng.below(12);
  auto got = nearest_neighbors(t, t.word(q), n);
  std::vector<std::string> words_got;
  for (auto& nb : got) words_got.push_back(nb.word);
  if (words_got != brute_force(t, q, n)) return "neighbors differ for " + t.word(q);
  for (std::size_t k = 1; k < got.size(); ++k)
    if (got[k - 1].similarity < got[k].similarity) return "similarities not sorted";
  return {};
}

inline std::vector<std::string> lexical_words(const std::string& s) {
  std::vector<std::string> out;
  for (const auto& t : tokenize(s, {}).tokens)
    if (t.lexical()) out.push_back(utf8::fold(t.text));
  return out;
}

inline bool is_subsequence(const std::vector<std::string>& small, const std::vector<std::string>& big) {
  std::size_t i = 0;
  for (const auto& s : big)
    if (i < small.size() && s == small[i]) ++i;
  return i == small.size();
}

inline std::size_t count_differing(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

// Random attack on a random collection drawn from `sentences`, checked against the
// structural invariants of its kind. Returns an empty string when they all hold.
inline std::string attack_case_failure(Rng& rng, const std::vector<std::string>& sentences,
                                       const std::vector<std::string>& words) {
  std::vector<std::string> c(2 + rng.below(24));
  for (auto& s : c) s = sentences[rng.below(sentences.size())];
  const auto kind = static_cast<AttackKind>(rng.below(6));
  std::size_t min_lex = SIZE_MAX;
  for (const auto& s : c) min_lex = std::min(min_lex, lexical_words(s).size());
  std::size_t limit = 0;
  switch (kind) {
    case AttackKind::RemoveSentences: limit = c.size() - 1; break;
    case AttackKind::ReplaceSentences: limit = c.size(); break;
    case AttackKind::AddSentences: limit = 30; break;
    case AttackKind::RemoveTokens: limit = min_lex - 1; break;
    case AttackKind::ReplaceTokens: limit = min_lex; break;
    case AttackKind::AddTokens: limit = 6; break;
  }
  if (limit == 0) return {};
  AttackSpec spec;
  spec.kind = kind;
  spec.n = 1 + rng.below(limit);
  spec.seed = rng.next();
  spec.pool = is_token_attack(kind) ? &words : &sentences;
  const auto out = apply_attack(c, spec);
  std::ostringstream why;
  why << attack_kind_name(kind) << " n=" << spec.n << " size=" << c.size() << ": ";
  if (apply_attack(c, spec) != out) return why.str() + "not deterministic";
  switch (kind) {
    case AttackKind::RemoveSentences:
      if (out.size() != c.size() - spec.n || !is_subsequence(out, c)) return why.str() + "bad removal";
      break;
    case AttackKind::AddSentences:
      if (out.size() != c.size() + spec.n || !is_subsequence(c, out)) return why.str() + "bad insertion";
      break;
    case AttackKind::ReplaceSentences:
      if (out.size() != c.size() || count_differing(c, out) != spec.n) return why.str() + "bad replacement";
      break;
    default:
      if (out.size() != c.size()) return why.str() + "sentence count changed";
      for (std::size_t i = 0; i < c.size(); ++i) {
        auto before = lexical_words(c[i]);
        auto after = lexical_words(out[i]);
        bool ok = true;
        if (kind == AttackKind::RemoveTokens) ok = after.size() + spec.n == before.size() && is_subsequence(after, before);
        if (kind == AttackKind::AddTokens) ok = after.size() == before.size() + spec.n && is_subsequence(before, after);
        if (kind == AttackKind::ReplaceTokens)
          ok = after.size() == before.size() && count_differing(before, after) == spec.n;
        if (!ok) return why.str() + "sentence " + std::to_string(i) + ": " + c[i] + " -> " + out[i];
      }
  }
  return {};
}

}  // namespace textmark::testing
