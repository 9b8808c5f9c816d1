#include "textmark/attacks.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <utility>

#include "textmark/error.hpp"
#include "textmark/rng.hpp"
#include "textmark/segmentation.hpp"
#include "textmark/utf8.hpp"

namespace textmark {

namespace {

constexpr std::array<std::pair<AttackKind, std::string_view>, 6> kNames{{
    {AttackKind::RemoveSentences, "remove-sentences"},
    {AttackKind::AddSentences, "add-sentences"},
    {AttackKind::ReplaceSentences, "replace-sentences"},
    {AttackKind::RemoveTokens, "remove-tokens"},
    {AttackKind::AddTokens, "add-tokens"},
    {AttackKind::ReplaceTokens, "replace-tokens"},
}};

const std::vector<std::string>& require_pool(const AttackSpec& spec) {
  if (!spec.pool) throw Error(ErrorCode::MissingPool, std::string(attack_kind_name(spec.kind)) + " needs a pool");
  if (spec.pool->empty()) throw Error(ErrorCode::PoolTooSmall, "empty pool");
  return *spec.pool;
}

std::vector<std::size_t> permutation(std::size_t size, Rng& rng) {
  std::vector<std::size_t> idx(size);
  std::iota(idx.begin(), idx.end(), 0);
  rng.shuffle(idx);
  return idx;
}

// Draws a pool entry that differs from `original`; gives up after a full scan.
const std::string& draw_different(const std::vector<std::string>& pool, std::string_view original, Rng& rng,
                                  bool fold) {
  auto same = [&](const std::string& s) { return fold ? utf8::fold(s) == utf8::fold(original) : s == original; };
  for (int attempt = 0; attempt < 64; ++attempt) {
    const auto& s = pool[rng.below(pool.size())];
    if (!same(s)) return s;
  }
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (!same(pool[i])) others.push_back(i);
  if (others.empty()) throw Error(ErrorCode::PoolTooSmall, "pool has no entry different from the original");
  return pool[others[rng.below(others.size())]];
}

std::vector<std::string> remove_sentences(const std::vector<std::string>& c, std::size_t n, Rng& rng) {
  if (n >= c.size()) throw Error(ErrorCode::AttackTooSevere, "cannot remove every sentence");
  auto order = permutation(c.size(), rng);
  std::vector<bool> drop(c.size(), false);
  for (std::size_t k = 0; k < n; ++k) drop[order[k]] = true;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!drop[i]) out.push_back(c[i]);
  return out;
}

std::vector<std::string> add_sentences(const std::vector<std::string>& c, std::size_t n,
                                       const std::vector<std::string>& pool, Rng& rng) {
  std::vector<std::pair<std::size_t, std::string>> inserts;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t at = rng.below(c.size() + 1);
    inserts.emplace_back(at, pool[rng.below(pool.size())]);
  }
  std::stable_sort(inserts.begin(), inserts.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::string> out = c;
  for (auto& [at, s] : inserts) out.insert(out.begin() + static_cast<std::ptrdiff_t>(at), std::move(s));
  return out;
}

std::vector<std::string> replace_sentences(const std::vector<std::string>& c, std::size_t n,
                                           const std::vector<std::string>& pool, Rng& rng) {
  if (n > c.size()) throw Error(ErrorCode::AttackTooSevere, "more replacements than sentences");
  auto order = permutation(c.size(), rng);
  std::vector<std::string> out = c;
  for (std::size_t k = 0; k < n; ++k) out[order[k]] = draw_different(pool, c[order[k]], rng, false);
  return out;
}

std::vector<std::size_t> lexical_positions(const std::vector<Token>& tokens) {
  std::vector<std::size_t> lex;
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (tokens[i].lexical()) lex.push_back(i);
  return lex;
}

std::string remove_tokens(const std::string& sentence, std::size_t n, Rng& rng) {
  auto tokens = tokenize(sentence, {}).tokens;
  auto lex = lexical_positions(tokens);
  if (n >= lex.size()) throw Error(ErrorCode::AttackTooSevere, "cannot remove every token");
  auto order = permutation(lex.size(), rng);
  std::vector<std::size_t> chosen;
  for (std::size_t k = 0; k < n; ++k) chosen.push_back(lex[order[k]]);
  std::sort(chosen.rbegin(), chosen.rend());
  for (std::size_t i : chosen) {
    auto first = tokens.begin() + static_cast<std::ptrdiff_t>(i);
    auto last = first + 1;
    if (i > 0 && tokens[i - 1].kind == TokenKind::Whitespace) {
      --first;
    } else if (i + 1 < tokens.size() && tokens[i + 1].kind == TokenKind::Whitespace) {
      ++last;
    }
    tokens.erase(first, last);
  }
  return detokenize(tokens);
}

std::string add_tokens(const std::string& sentence, std::size_t n, const std::vector<std::string>& pool, Rng& rng) {
  auto tokens = tokenize(sentence, {}).tokens;
  auto lex = lexical_positions(tokens);
  std::vector<std::pair<std::size_t, std::string>> inserts;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t slot = rng.below(lex.size() + 1);
    const std::string& word = pool[rng.below(pool.size())];
    if (lex.empty()) {
      inserts.emplace_back(sentence.size(), sentence.empty() ? word : " " + word);
    } else if (slot < lex.size()) {
      inserts.emplace_back(tokens[lex[slot]].start, word + " ");
    } else {
      inserts.emplace_back(tokens[lex.back()].end, " " + word);
    }
  }
  std::stable_sort(inserts.begin(), inserts.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::string out = sentence;
  for (const auto& [at, s] : inserts) out.insert(at, s);
  return out;
}

std::string replace_tokens(const std::string& sentence, std::size_t n, const std::vector<std::string>& pool,
                           Rng& rng) {
  auto tokens = tokenize(sentence, {}).tokens;
  auto lex = lexical_positions(tokens);
  if (n > lex.size()) throw Error(ErrorCode::AttackTooSevere, "more replacements than tokens");
  auto order = permutation(lex.size(), rng);
  for (std::size_t k = 0; k < n; ++k) {
    auto& t = tokens[lex[order[k]]];
    t.text = draw_different(pool, t.text, rng, true);
  }
  return detokenize(tokens);
}

}  // namespace

std::string_view attack_kind_name(AttackKind kind) {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<AttackKind> parse_attack_kind(std::string_view name) {
  for (const auto& [k, n] : kNames)
    if (n == name) return k;
  return std::nullopt;
}

bool is_token_attack(AttackKind kind) {
  return kind == AttackKind::RemoveTokens || kind == AttackKind::AddTokens || kind == AttackKind::ReplaceTokens;
}

std::vector<std::string> apply_attack(const std::vector<std::string>& collection, const AttackSpec& spec) {
  if (spec.n == 0) throw Error(ErrorCode::InvalidArgument, "attack n must be positive");
  Rng rng(spec.seed);
  switch (spec.kind) {
    case AttackKind::RemoveSentences:
      return remove_sentences(collection, spec.n, rng);
    case AttackKind::AddSentences:
      return add_sentences(collection, spec.n, require_pool(spec), rng);
    case AttackKind::ReplaceSentences:
      return replace_sentences(collection, spec.n, require_pool(spec), rng);
    default:
      break;
  }
  const std::vector<std::string>* pool = nullptr;
  if (spec.kind != AttackKind::RemoveTokens) pool = &require_pool(spec);
  std::vector<std::string> out;
  out.reserve(collection.size());
  for (std::size_t i = 0; i < collection.size(); ++i) {
    Rng local = rng.split(i);
    switch (spec.kind) {
      case AttackKind::RemoveTokens: out.push_back(remove_tokens(collection[i], spec.n, local)); break;
      case AttackKind::AddTokens: out.push_back(add_tokens(collection[i], spec.n, *pool, local)); break;
      default: out.push_back(replace_tokens(collection[i], spec.n, *pool, local)); break;
    }
  }
  return out;
}

std::vector<LabeledCollection> build_attack_dataset(const std::vector<std::string>& watermarked_pool,
                                                    const std::vector<std::string>& unmarked_pool,
                                                    std::size_t collections, std::size_t sentences_per_collection,
                                                    uint64_t seed) {
  if (collections == 0 || sentences_per_collection == 0)
    throw Error(ErrorCode::InvalidArgument, "collections and sentences per collection must be positive");
  for (const auto* pool : {&watermarked_pool, &unmarked_pool})
    if (pool->size() < sentences_per_collection)
      throw Error(ErrorCode::PoolTooSmall, "pool has " + std::to_string(pool->size()) + " sentences, need " +
                                               std::to_string(sentences_per_collection));
  Rng root(seed);
  std::vector<LabeledCollection> out;
  std::size_t stream = 0;
  for (auto [pool, label] : {std::pair{&watermarked_pool, Label::Watermarked}, std::pair{&unmarked_pool, Label::Unmarked}}) {
    std::vector<std::size_t> idx(pool->size());
    for (std::size_t c = 0; c < collections; ++c) {
      Rng rng = root.split(stream++);
      std::iota(idx.begin(), idx.end(), 0);
      LabeledCollection lc;
      lc.label = label;
      for (std::size_t k = 0; k < sentences_per_collection; ++k) {
        std::swap(idx[k], idx[k + rng.below(idx.size() - k)]);
        lc.sentences.push_back((*pool)[idx[k]]);
      }
      out.push_back(std::move(lc));
    }
  }
  return out;
}

std::vector<AttackedItem> attack_dataset(const std::vector<LabeledCollection>& dataset, AttackKind kind,
                                         std::size_t n, uint64_t seed, const AttackPools& pools) {
  Rng root(seed);
  std::vector<AttackedItem> out;
  out.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& lc = dataset[i];
    AttackSpec spec;
    spec.kind = kind;
    spec.n = n;
    spec.seed = root.split(i).next();
    if (is_token_attack(kind)) {
      spec.pool = pools.words;
    } else {
      spec.pool = lc.label == Label::Watermarked ? pools.unmarked : pools.watermarked;
    }
    out.push_back({lc.sentences, apply_attack(lc.sentences, spec), lc.label});
  }
  return out;
}

}  // namespace textmark
