#include "textmark/insertion.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "textmark/error.hpp"
#include "textmark/metrics.hpp"
#include "textmark/utf8.hpp"

namespace textmark {

std::string_view mode_name(SubstitutionMode mode) { return mode == SubstitutionMode::Single ? "single" : "multiple"; }

namespace {

bool has_digit(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

void reindex(std::vector<Token>& tokens) {
  std::size_t pos = 0;
  for (auto& t : tokens) {
    t.start = pos;
    pos += t.text.size();
    t.end = pos;
  }
}

// A replacement must stay one non-stopword Word token.
bool usable_replacement(std::string_view word, const StopwordSet& stopwords) {
  if (word.empty() || has_digit(word)) return false;
  auto rec = tokenize(word, stopwords);
  return rec.tokens.size() == 1 && rec.tokens[0].kind == TokenKind::Word;
}

// b is a regular inflection or -er derivation of a, or the reverse.
bool inflectional_variant(std::string_view a, std::string_view b) {
  if (a.size() > b.size()) std::swap(a, b);
  static constexpr std::string_view kSuffixes[] = {"s", "es", "d", "ed", "ing", "ings", "er", "ers", "ied", "ies"};
  auto matches = [&](std::string_view base) {
    if (base.empty() || !b.starts_with(base)) return false;
    std::string_view rest = b.substr(base.size());
    if (rest.size() > 1 && rest[0] == base.back()) {
      for (auto suf : kSuffixes)
        if (rest.substr(1) == suf) return true;
    }
    for (auto suf : kSuffixes)
      if (rest == suf) return true;
    return false;
  };
  if (matches(a)) return true;
  if (a.size() > 2 && (a.back() == 'e' || a.back() == 'y')) return matches(a.substr(0, a.size() - 1));
  return false;
}

SentenceProposal substitute(const std::vector<Token>& base, std::vector<Substitution> prior, std::size_t index,
                            const std::string& original, const Neighbor& syn) {
  SentenceProposal p;
  p.tokens = base;
  p.tokens[index].text = syn.word;
  reindex(p.tokens);
  p.substitutions = std::move(prior);
  p.substitutions.push_back({index, original, syn.word, syn.similarity});
  return p;
}

std::size_t first_index(const SentenceProposal& p) {
  std::size_t m = SIZE_MAX;
  for (const auto& s : p.substitutions) m = std::min(m, s.index);
  return m;
}

}  // namespace

std::vector<Neighbor> agreeing_synonyms(const SentenceRecord& record, std::size_t index, const InsertionContext& ctx) {
  const Token& tok = record.tokens.at(index);
  if (tok.kind != TokenKind::Word || has_digit(tok.text)) return {};
  auto idx = ctx.table.lookup(tok.text);
  if (!idx) return {};
  auto neighbors = nearest_neighbors(ctx.table, ctx.table.word(*idx), ctx.config.n);
  const std::string key = utf8::fold(tok.text);
  std::vector<Neighbor> usable;
  for (auto& nb : neighbors) {
    std::string w = recase_like(nb.word, tok.text);
    const std::string folded = utf8::fold(w);
    // inflections of the original are not synonyms
    if (folded == key || inflectional_variant(folded, key) || !usable_replacement(w, ctx.stopwords)) continue;
    usable.push_back({w, nb.similarity});
  }
  if (!ctx.config.grammar) return usable;
  auto agreeing = filter_agreeing_synonyms(record, index, usable, Grammar{ctx.tagger, ctx.inflector});
  std::erase_if(agreeing, [&](const Neighbor& nb) { return !usable_replacement(nb.word, ctx.stopwords); });
  return agreeing;
}

std::vector<SentenceProposal> generate_proposals(const SentenceRecord& record, const InsertionContext& ctx) {
  if (ctx.config.n == 0) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  std::vector<SentenceProposal> out;
  const auto candidates = candidate_indices(record);
  if (ctx.config.mode == SubstitutionMode::Single) {
    for (std::size_t i : candidates)
      for (const auto& syn : agreeing_synonyms(record, i, ctx))
        out.push_back(substitute(record.tokens, {}, i, record.tokens[i].text, syn));
    return out;
  }
  SentenceRecord current = record;
  std::vector<Substitution> applied;
  for (std::size_t i : candidates) {
    std::optional<SentenceProposal> best;
    for (const auto& syn : agreeing_synonyms(current, i, ctx)) {
      auto p = substitute(current.tokens, applied, i, record.tokens[i].text, syn);
      p.score = sms(ctx.encoder, record.source, p.text());
      if (!best || *p.score > *best->score) best = std::move(p);
    }
    if (!best || *best->score < ctx.config.word_floor) continue;
    current.tokens = best->tokens;
    current.source = best->text();
    applied = best->substitutions;
    out.push_back(std::move(*best));
  }
  return out;
}

std::optional<SentenceProposal> select_best(std::string_view original, std::vector<SentenceProposal> proposals,
                                            const SentenceEncoder& encoder) {
  std::optional<SentenceProposal> best;
  for (auto& p : proposals) {
    p.score = sms(encoder, original, p.text());
    if (best) {
      const double a = *p.score, b = *best->score;
      if (a < b) continue;
      if (a == b) {
        if (p.substitutions.size() > best->substitutions.size()) continue;
        if (p.substitutions.size() == best->substitutions.size() && first_index(p) >= first_index(*best)) continue;
      }
    }
    best = std::move(p);
  }
  return best;
}

WatermarkOutcome watermark_sentence(std::string_view sentence, const InsertionContext& ctx) {
  WatermarkOutcome out;
  out.original = std::string(sentence);
  out.marked = out.original;
  SentenceRecord rec = tokenize(sentence, ctx.stopwords);
  if (ctx.config.grammar) ctx.tagger.annotate(rec);
  auto proposals = generate_proposals(rec, ctx);
  std::optional<SentenceProposal> best;
  if (ctx.config.mode == SubstitutionMode::Single) {
    best = select_best(sentence, std::move(proposals), ctx.encoder);
  } else if (!proposals.empty()) {
    best = std::move(proposals.back());
  }
  if (!best) return out;

  std::vector<Token> tokens = best->tokens;
  std::vector<Substitution> subs = best->substitutions;
  std::vector<ArticleFix> fixes;
  if (ctx.config.grammar) {
    std::vector<std::size_t> where;
    for (const auto& s : subs) where.push_back(s.index);
    fixes = fix_articles(tokens, where, ctx.inflector);
    // revert substitutions whose tag drifted once the whole sentence is re-tagged
    for (bool changed = true; changed && !subs.empty();) {
      changed = false;
      auto tags = ctx.tagger.tag_tokens(tokens);
      std::vector<std::size_t> slot(tokens.size(), 0);
      for (std::size_t i = 0, k = 0; i < tokens.size(); ++i)
        if (tokens[i].kind != TokenKind::Whitespace) slot[i] = k++;
      for (auto it = subs.begin(); it != subs.end();) {
        if (tags[slot[it->index]] == rec.tokens[it->index].pos) {
          ++it;
          continue;
        }
        tokens[it->index].text = it->original;
        for (auto f = fixes.begin(); f != fixes.end();) {
          if (f->index + 2 == it->index) {
            tokens[f->index].text = f->from;
            f = fixes.erase(f);
          } else {
            ++f;
          }
        }
        it = subs.erase(it);
        changed = true;
      }
    }
    if (subs.empty()) return out;
    reindex(tokens);
  }
  std::string marked = detokenize(tokens);
  double score = (fixes.empty() && subs.size() == best->substitutions.size() && best->score)
                     ? *best->score
                     : sms(ctx.encoder, sentence, marked);
  if (score < ctx.config.sms_floor) return out;
  out.marked = std::move(marked);
  out.sms = score;
  out.substitutions = std::move(subs);
  out.article_fixes = std::move(fixes);
  out.watermarkable = true;
  return out;
}

TextOutcome watermark_sentences(const std::vector<std::string>& sentences, const InsertionContext& ctx,
                                std::size_t jobs) {
  TextOutcome out;
  out.per_sentence.resize(sentences.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < sentences.size();) {
      try {
        out.per_sentence[i] = watermark_sentence(sentences[i], ctx);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next = sentences.size();
      }
    }
  };
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(sentences.size(), 1));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  std::vector<double> scores;
  for (const auto& o : out.per_sentence) {
    out.marked_text += o.marked;
    if (o.watermarkable) scores.push_back(o.sms);
  }
  out.msms_count = scores.size();
  out.msms = scores.empty() ? 1.0 : pairwise_sum(scores) / static_cast<double>(scores.size());
  return out;
}

TextOutcome watermark_text(std::string_view text, const InsertionContext& ctx, std::size_t jobs) {
  return watermark_sentences(ctx.splitter.split(text), ctx, jobs);
}

PredetectionOutcome watermark_with_predetection(std::string_view text, const InsertionContext& ctx,
                                                const Detector& detector, double threshold_fraction,
                                                std::size_t jobs) {
  auto base = watermark_text(text, ctx, jobs);
  PredetectionOutcome out;
  std::size_t detected = 0;
  for (auto& o : base.per_sentence) {
    bool hit = !utf8::trim(o.marked).empty() && detect_sentence(detector, o.marked).label == Label::Watermarked;
    if (hit) {
      ++detected;
    } else {
      o.marked = o.original;
      o.substitutions.clear();
      o.article_fixes.clear();
      o.sms = 1.0;
      o.watermarkable = false;
    }
    out.detected.push_back(hit);
    out.marked_text += o.marked;
  }
  out.per_sentence = std::move(base.per_sentence);
  out.detectable_fraction =
      out.per_sentence.empty() ? 0.0 : static_cast<double>(detected) / static_cast<double>(out.per_sentence.size());
  out.text_watermarkable = !out.per_sentence.empty() && out.detectable_fraction >= threshold_fraction;
  return out;
}

}  // namespace textmark
