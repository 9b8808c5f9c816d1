#!/usr/bin/env python3
"""Builds the shipped language resources from the pattern3 source distribution.

Usage: build_resources.py <pattern3-source-dir> <repo-root>

Inputs (from the pattern3 sdist):
  test/corpora/tagged-en-oanc.txt, test/corpora/tagged-en-wsj.txt  POS-tagged sentences
  pattern3/text/en/en-lexicon.txt                                  Brill tag lexicon
  pattern3/text/en/en-frequency.txt                                word frequency list
  pattern3/text/en/en-verbs.txt                                    verb conjugation table
  pattern3/text/en/wordnet/dict/                                   WordNet 3.0 database

Outputs:
  data/tagger-en.tmtag                 tagger model (TMTAG1)
  data/words-en.txt                    word pool for token attacks
  data/corpus/desk-200.txt             200-sentence desk corpus
  data/embeddings/desk-en-64.bin       desk-scale word embedding table (binary word2vec layout)
  tests/data/pos-golden.jsonl          200 held-out tagged sentences
  tests/data/grammar-golden-100.txt    100 held-out sentences for agreement checks
  tests/data/real-corpus-1000.txt      1,000 raw corpus sentences

Everything is deterministic: fixed seeds, sorted iteration.
"""
import collections
import json
import math
import pathlib
import random
import re
import struct
import sys
import zlib

import numpy as np

WORD_RE = re.compile(r"[A-Za-z0-9]+(?:['\-][A-Za-z0-9]+)*|\s+|.", re.S)
CLITICS = {"n't", "'s", "'re", "'ll", "'ve", "'d", "'m", "N'T", "'S", "'RE", "'LL", "'VE", "'D", "'M"}
PUNCT_TAGS = {",": ",", ".": ".", "?": ".", "!": ".", ":": ":", ";": ":", "-": ":",
              "(": "(", "[": "(", "{": "(", ")": ")", "]": ")", "}": ")",
              '"': "''", "'": "''", "`": "''", "$": "$", "#": "#"}
PTB_TAGS = set("CC CD DT EX FW IN JJ JJR JJS LS MD NN NNS NNP NNPS PDT POS PRP PRP$ RB RBR RBS RP "
               "SYM TO UH VB VBD VBG VBN VBP VBZ WDT WP WP$ WRB".split())
DIM = 64


def mirror_tokens(text):
    """ASCII mirror of the C++ tokenizer: word runs with internal ' or -, whitespace runs, single chars."""
    return WORD_RE.findall(text)


def is_lexical(tok):
    return bool(re.match(r"[A-Za-z0-9]", tok))


def punct_tag(ch):
    return PUNCT_TAGS.get(ch, "SYM")


def norm_ptb_token(tok):
    return {"``": '"', "''": '"', "-LRB-": "(", "-RRB-": ")", "-LCB-": "{", "-RCB-": "}",
            "-LSB-": "[", "-RSB-": "]", "`": "'"}.get(tok, tok)


def parse_tagged_line(line):
    out = []
    for item in line.split():
        if "/" not in item:
            continue
        word, tag = item.rsplit("/", 1)
        tag = tag.split("|")[0]
        out.append((norm_ptb_token(word), tag))
    return out


def split_wsj(tokens):
    sentences, cur = [], []
    for w, t in tokens:
        cur.append((w, t))
        if t == ".":
            sentences.append(cur)
            cur = []
    if cur:
        sentences.append(cur)
    return sentences


def to_training_sequence(tagged):
    """PTB tokens -> (token, tag) under this project's tokenization (clitics merged, punctuation split)."""
    seq = []
    for word, tag in tagged:
        if word in CLITICS and seq and is_lexical(seq[-1][0]):
            seq[-1] = (seq[-1][0] + word.replace("N'T", "n't"), seq[-1][1])
            continue
        for piece in mirror_tokens(word):
            if piece.isspace():
                continue
            if is_lexical(piece):
                seq.append((piece, tag if tag in PTB_TAGS else "NN"))
            else:
                seq.append((piece, punct_tag(piece)))
    return seq


def detokenize(tagged):
    """PTB tokens -> running text."""
    out = ""
    quote_open = False
    no_space_before = {",", ".", ";", ":", "!", "?", ")", "]", "}", "%"}
    no_space_after = {"(", "[", "{", "$", "#"}
    prev = None
    for word, _ in tagged:
        attach = False
        if prev is None:
            attach = True
        elif word in no_space_before or word in CLITICS or prev in no_space_after:
            attach = True
        elif word == '"':
            attach = quote_open  # closing quote attaches left
        elif prev == '"' and quote_open:
            attach = True  # word right after an opening quote
        if word == '"':
            quote_open = not quote_open
        out += ("" if attach else " ") + word
        prev = word
    return out


def clean_sentence(tagged, text):
    if not (8 <= len(tagged) <= 40):
        return False
    if not text.isascii() or not re.match(r"[A-Z]", text) or text[-1] not in ".?!":
        return False
    if any(w in {"--", "(", ")", "[", "]", "{", "}", ";", "...", "'", "/"} for w, _ in tagged):
        return False
    if text.count('"') % 2:
        return False
    nnp = sum(1 for _, t in tagged if t in ("NNP", "NNPS"))
    return nnp <= 0.3 * len(tagged)


def aligned(tagged, text):
    expected = [w for w, _ in to_training_sequence(tagged)]
    got = [t for t in mirror_tokens(text) if not t.isspace()]
    return expected == got


def counts_field(counter):
    return " ".join(f"{t}:{c}" for t, c in sorted(counter.items(), key=lambda kv: (-kv[1], kv[0])))


def shape_of(word):
    if any(ch.isdigit() for ch in word):
        return "digit"
    if word[0].isupper():
        return "cap"
    if "-" in word:
        return "hyphen"
    return "lower"


def build_tagger(train_sequences, lexicon_path, out_path):
    word_tags = collections.defaultdict(collections.Counter)
    trans = collections.defaultdict(collections.Counter)
    start = collections.Counter()
    for seq in train_sequences:
        prev = None
        for tok, tag in seq:
            if is_lexical(tok):
                word_tags[tok][tag] += 1
            if prev is None:
                start[tag] += 1
            else:
                trans[prev][tag] += 1
            prev = tag
    # unknown-word statistics from rare words
    suffix = collections.defaultdict(collections.Counter)
    shapes = collections.defaultdict(collections.Counter)
    for word, tags in word_tags.items():
        if sum(tags.values()) > 1:
            continue
        shape = shape_of(word)
        shapes[shape].update(tags)
        low = word.lower()
        for k in range(1, 5):
            if len(low) > k:
                suffix[(shape, low[-k:])].update(tags)
    lexicon_extra = {}
    for line in pathlib.Path(lexicon_path).read_text(encoding="utf-8", errors="replace").splitlines():
        if line.startswith(";;;") or not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            continue
        word, tag = parts
        if tag not in PTB_TAGS or word in word_tags or not re.fullmatch(r"[A-Za-z]+(?:['\-][A-Za-z]+)*", word):
            continue
        lexicon_extra[word] = tag
    tagset = sorted(PTB_TAGS | set(PUNCT_TAGS.values()))
    lines = ["TMTAG1",
             "# Statistical POS tagger model: tag distributions, suffix rules, tag transitions.",
             "# Trained on held-in portions of the OANC and WSJ tagged samples plus the Brill lexicon.",
             "tagset " + " ".join(tagset),
             "start " + counts_field(start)]
    for prev in sorted(trans):
        lines.append(f"trans {prev} " + counts_field(trans[prev]))
    for shape in sorted(shapes):
        lines.append(f"shape {shape} " + counts_field(shapes[shape]))
    for (shape, suf) in sorted(suffix):
        c = suffix[(shape, suf)]
        if sum(c.values()) >= 3:
            lines.append(f"suffix {shape} {suf} " + counts_field(c))
    for word in sorted(word_tags):
        lines.append(f"word {word} " + counts_field(word_tags[word]))
    for word in sorted(lexicon_extra):
        lines.append(f"word {word} {lexicon_extra[word]}:1")
    pathlib.Path(out_path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"tagger: {len(word_tags)} trained words, {len(lexicon_extra)} lexicon words")


# ---------------------------------------------------------------- WordNet embeddings

def read_wordnet(dict_dir):
    d = pathlib.Path(dict_dir)
    synsets = {}
    for pos, files in (("n", ["data.noun1", "data.noun2"]), ("v", ["data.verb"]),
                       ("a", ["data.adj"]), ("r", ["data.adv"])):
        for fname in files:
            for line in (d / fname).read_text(encoding="latin-1").splitlines():
                if line.startswith("  ") or not line.strip():
                    continue
                head = line.split("|")[0].split()
                offset = head[0]
                wcnt = int(head[3], 16)
                words = [head[4 + 2 * i].lower() for i in range(wcnt)]
                i = 4 + 2 * wcnt
                pcnt = int(head[i])
                hypers = []
                for j in range(pcnt):
                    sym, off, ppos = head[i + 1 + 4 * j: i + 4 + 4 * j]
                    if sym in ("@", "@i", "&", "^"):
                        hypers.append(("a" if ppos == "s" else ppos) + off)
                synsets[pos + offset] = (words, hypers, head[1])
    index = {}
    for pos, fname in (("n", "index.noun"), ("v", "index.verb"), ("a", "index.adj"), ("r", "index.adv")):
        for line in (d / fname).read_text(encoding="latin-1").splitlines():
            if line.startswith("  ") or not line.strip():
                continue
            parts = line.split()
            lemma = parts[0]
            scnt = int(parts[2])
            pcnt = int(parts[3])
            tagsense = int(parts[5 + pcnt])
            offsets = parts[6 + pcnt: 6 + pcnt + scnt]
            index[(lemma, pos)] = ([pos + o for o in offsets], tagsense)
    return synsets, index


def rng_vec(key):
    seed = zlib.crc32(key.encode("utf-8"))
    return np.random.RandomState(seed).standard_normal(DIM)


def unit(v):
    n = np.linalg.norm(v)
    return v / n if n > 0 else v


def regular_plural(word):
    if re.search(r"(s|x|z|ch|sh)$", word):
        return word + "es"
    if re.search(r"[^aeiou]y$", word):
        return word[:-1] + "ies"
    return word + "s"


def build_embeddings(synsets, index, base_words, freq_words, stopwords, verbs_path, irregular, out_path):
    # inflected form -> (lemma, kind)
    form_of = {}
    verb_forms = {}
    for line in pathlib.Path(verbs_path).read_text(encoding="utf-8").splitlines():
        if line.startswith(";;;") or not line.strip():
            continue
        forms = [f for f in line.split(",") if f]
        lemma = forms[0]
        verb_forms[lemma] = sorted({f for f in forms[1:] if f != lemma and re.fullmatch(r"[a-z]+", f)})
        for f in verb_forms[lemma]:
            kind = "ing" if f.endswith("ing") else "ed" if f.endswith("ed") or f.endswith("en") else "verb"
            form_of.setdefault(f, (lemma, kind))
    singular_of = {p: s for s, p in irregular.items()}

    def lemma_of(w):
        if w in form_of:
            return form_of[w]
        if w in singular_of:
            return singular_of[w], "plural"
        if (w, "n") in index or (w, "v") in index or (w, "a") in index or (w, "r") in index:
            return None
        for suffix, repl in (("ies", "y"), ("ches", "ch"), ("shes", "sh"), ("sses", "ss"), ("xes", "x"), ("s", "")):
            if w.endswith(suffix) and len(w) > len(suffix) + 2:
                cand = w[: -len(suffix)] + repl
                if (cand, "n") in index:
                    return cand, "plural"
        return None

    vocab = []
    seen = set()

    def add(w):
        if w not in seen and re.fullmatch(r"[a-z0-9]+(?:['\-][a-z0-9]+)*", w):
            seen.add(w)
            vocab.append(w)

    for w in freq_words:
        add(w)
    for w in sorted(base_words):
        add(w)
    for w in sorted(stopwords):
        add(w)
    for w in list(vocab):
        lem = lemma_of(w)
        if lem:
            add(lem[0])
    core = list(vocab)
    for w in core:
        for pos in "nvar":
            entry = index.get((w, pos))
            if not entry:
                continue
            for off in entry[0][:2]:
                for syn in synsets.get(off, ([], [], ""))[0]:
                    add(syn)
    # plural forms for noun lemmas and conjugations for verb lemmas
    for w in list(vocab):
        if w in stopwords or lemma_of(w):
            continue
        if (w, "n") in index and (not re.search(r"[^su]s$", w) or w in irregular):
            add(irregular.get(w, regular_plural(w)))
        if (w, "v") in index:
            for f in verb_forms.get(w, []):
                add(f)

    synset_cache = {}

    def synset_vec(off, depth=0):
        # own direction + recursive hypernym chain + lexicographer-file topic for nouns and verbs
        if off not in synset_cache:
            _, hypers, lexfile = synsets.get(off, ([], [], "00"))
            v = unit(rng_vec("syn:" + off))
            if off[0] in "nv":
                v = v + 0.5 * unit(rng_vec("lex:" + lexfile))
            if hypers and depth < 12:
                v = v + 0.9 * unit(np.sum([synset_vec(h, depth + 1) for h in hypers], axis=0))
            synset_cache[off] = unit(v)
        return synset_cache[off]

    def lemma_vec(w):
        total = np.zeros(DIM)
        found = False
        for pos in "nvar":
            entry = index.get((w, pos))
            if not entry:
                continue
            found = True
            offsets, tagsense = entry
            base = np.zeros(DIM)
            for j, off in enumerate(offsets[:6]):
                base += synset_vec(off) / (j + 1) ** 2
            total += (tagsense + 1) ** 2 * unit(base)
        return unit(total) if found else None

    vectors = {}

    def vec(w):
        if w in vectors:
            return vectors[w]
        noise = unit(rng_vec("word:" + w))
        lem = None if w in stopwords else lemma_of(w)
        if lem and lem[0] != w:
            v = unit(vec(lem[0]) + 0.3 * unit(rng_vec("infl:" + lem[1])) + 0.15 * noise)
        else:
            sem = None if w in stopwords else lemma_vec(w)
            v = noise if sem is None else unit(sem + 0.25 * noise)
        vectors[w] = v
        return v

    with open(out_path, "wb") as f:
        f.write(f"{len(vocab)} {DIM}\n".encode("ascii"))
        for w in vocab:
            scale = 0.8 + 0.8 * (zlib.crc32(("norm:" + w).encode()) % 1000) / 1000.0
            f.write(w.encode("utf-8") + b" ")
            f.write(struct.pack(f"<{DIM}f", *(vec(w) * scale)))
            f.write(b"\n")
    print(f"embeddings: {len(vocab)} words x {DIM}")


def main(src, root):
    src = pathlib.Path(src)
    root = pathlib.Path(root)
    corpora = src / "test" / "corpora"
    en = src / "pattern3" / "text" / "en"

    oanc = [parse_tagged_line(l) for l in (corpora / "tagged-en-oanc.txt").read_text(encoding="utf-8").splitlines()]
    oanc = [s for s in oanc if s]
    wsj = []
    for l in (corpora / "tagged-en-wsj.txt").read_text(encoding="utf-8").splitlines():
        wsj.extend(split_wsj(parse_tagged_line(l)))

    rng = random.Random(7)
    rng.shuffle(oanc)
    rng.shuffle(wsj)

    def take_clean(pool, count, used):
        picked = []
        for i, s in enumerate(pool):
            if len(picked) == count:
                break
            if i in used:
                continue
            text = detokenize(s)
            if clean_sentence(s, text) and aligned(s, text):
                picked.append((s, text))
                used.add(i)
        return picked

    used_oanc, used_wsj = set(), set()
    golden = take_clean(oanc, 100, used_oanc) + take_clean(wsj, 100, used_wsj)
    grammar = take_clean(oanc, 100, used_oanc)
    desk = take_clean(oanc, 200, used_oanc)
    real = []
    for i, s in enumerate(oanc):
        if len(real) == 1000:
            break
        if i not in used_oanc:
            real.append(detokenize(s))
            used_oanc.add(i)

    train = [to_training_sequence(s) for i, s in enumerate(oanc) if i not in used_oanc]
    train += [to_training_sequence(s) for i, s in enumerate(wsj) if i not in used_wsj]
    build_tagger(train, en / "en-lexicon.txt", root / "data" / "tagger-en.tmtag")

    with open(root / "tests" / "data" / "pos-golden.jsonl", "w", encoding="utf-8") as f:
        for s, text in golden:
            seq = [(w, t) for w, t in to_training_sequence(s) if is_lexical(w)]
            f.write(json.dumps({"text": text, "tokens": [w for w, _ in seq], "tags": [t for _, t in seq]}) + "\n")
    (root / "tests" / "data" / "grammar-golden-100.txt").write_text("\n".join(t for _, t in grammar) + "\n", encoding="utf-8")
    (root / "data" / "corpus" / "desk-200.txt").write_text("\n".join(t for _, t in desk) + "\n", encoding="utf-8")
    (root / "tests" / "data" / "real-corpus-1000.txt").write_text("\n".join(real) + "\n", encoding="utf-8")

    freq_words = []
    for line in (en / "en-frequency.txt").read_text(encoding="utf-8").splitlines():
        if line.startswith(";;;") or not line.strip():
            continue
        freq_words.append(line.split()[0].lower())
    pool = [w for w in freq_words if re.fullmatch(r"[a-z]{3,}", w)][:8000]
    (root / "data" / "words-en.txt").write_text(
        "# English word pool for token-level attacks (frequency-ranked, lowercase).\n" + "\n".join(pool) + "\n",
        encoding="utf-8")

    stopwords = {l.strip() for l in (root / "data" / "stopwords-en.txt").read_text().splitlines()
                 if l.strip() and not l.startswith("#")}
    irregular = {}
    for line in (root / "data" / "inflections-en.tminf").read_text().splitlines():
        parts = line.split()
        if len(parts) == 3 and parts[0] == "plural":
            irregular[parts[1]] = parts[2]
    base_words = set()
    for text in [t for _, t in golden + grammar + desk] + real:
        for tok in mirror_tokens(text):
            if is_lexical(tok):
                base_words.add(tok.lower())
    synsets, index = read_wordnet(en / "wordnet" / "dict")
    build_embeddings(synsets, index, base_words, freq_words[:9000], stopwords, en / "en-verbs.txt", irregular,
                     root / "data" / "embeddings" / "desk-en-64.bin")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
