#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "textmark/metrics.hpp"

namespace textmark {

enum class AttackKind { RemoveSentences, AddSentences, ReplaceSentences, RemoveTokens, AddTokens, ReplaceTokens };

std::string_view attack_kind_name(AttackKind kind);
std::optional<AttackKind> parse_attack_kind(std::string_view name);
bool is_token_attack(AttackKind kind);

// `pool` holds sentences for sentence attacks and words for token attacks. Not owned.
struct AttackSpec {
  AttackKind kind = AttackKind::RemoveSentences;
  std::size_t n = 1;
  uint64_t seed = 0;
  const std::vector<std::string>* pool = nullptr;
};

// Positions come from a seeded permutation, so for one seed the set touched by n is a
// prefix of the set touched by n + 1. Token attacks act on the Word and Stopword tokens
// of every sentence, each sentence with its own stream.
std::vector<std::string> apply_attack(const std::vector<std::string>& collection, const AttackSpec& spec);

// `collections` from each pool (watermarked first), distinct sentences within one collection.
std::vector<LabeledCollection> build_attack_dataset(const std::vector<std::string>& watermarked_pool,
                                                    const std::vector<std::string>& unmarked_pool,
                                                    std::size_t collections, std::size_t sentences_per_collection,
                                                    uint64_t seed);

struct AttackPools {
  const std::vector<std::string>* watermarked = nullptr;
  const std::vector<std::string>* unmarked = nullptr;
  const std::vector<std::string>* words = nullptr;
};

// Attacks every collection with a per-item seed derived from `seed`. Sentence attacks draw
// from the pool of the opposite label.
std::vector<AttackedItem> attack_dataset(const std::vector<LabeledCollection>& dataset, AttackKind kind,
                                         std::size_t n, uint64_t seed, const AttackPools& pools);

}  // namespace textmark
