"""Wordpiece trainer vs a hand-computed score oracle, plus greedy
longest-match encoding semantics."""

import random
from fractions import Fraction

import pytest

from toklab.errors import ConfigError
from toklab.subword import SubwordModel, TrainConfig, decode, encode, train_wordpiece

M = "##"


def positional_symbols(word):
    chars = list(word)
    return [chars[0]] + [M + c for c in chars[1:]]


def pooled(symbol):
    return symbol[len(M):] if symbol.startswith(M) and len(symbol) > len(M) else symbol


def oracle_wordpiece_merges(word_freqs, vocab_size, min_frequency):
    """Full recount each round; scores as exact fractions to dodge float ties."""
    segmented = {w: positional_symbols(w) for w in word_freqs}
    vocab = {s for syms in segmented.values() for s in syms}
    merges = []
    while len(vocab) < vocab_size:
        pair_counts = {}
        pooled_counts = {}
        for word, count in word_freqs.items():
            syms = segmented[word]
            for s in syms:
                pooled_counts[pooled(s)] = pooled_counts.get(pooled(s), 0) + count
            for pair in zip(syms, syms[1:]):
                pair_counts[pair] = pair_counts.get(pair, 0) + count
        eligible = {
            p: Fraction(c, pooled_counts[pooled(p[0])] * pooled_counts[pooled(p[1])])
            for p, c in pair_counts.items()
            if c >= min_frequency
        }
        if not eligible:
            break
        best_score = max(eligible.values())
        best = min(p for p, s in eligible.items() if s == best_score)
        merges.append(best)
        merged_sym = best[0] + pooled(best[1])
        for word, syms in segmented.items():
            out, i = [], 0
            while i < len(syms):
                if i + 1 < len(syms) and (syms[i], syms[i + 1]) == best:
                    out.append(merged_sym)
                    i += 2
                else:
                    out.append(syms[i])
                    i += 1
            segmented[word] = out
        vocab.add(merged_sym)
    return merges


class TestSpecExamples:
    def test_likelihood_score_beats_raw_frequency(self):
        # {"aab":4}: pair (a,##a) scores 4/(8*8); (##a,##b) scores 4/(8*4) and wins.
        cfg = TrainConfig(algorithm="wordpiece", vocab_size=4, min_frequency=1)
        model = train_wordpiece({"aab": 4}, cfg)
        assert model.merges[0] == (M + "a", M + "b")
        assert M + "ab" in model.token_to_id

    def test_single_word_corpus(self):
        cfg = TrainConfig(algorithm="wordpiece", vocab_size=1, min_frequency=1)
        model = train_wordpiece({"x": 5}, cfg)
        assert model.merges == []
        assert model.vocab == [model.unk_token, "x"]

    def test_vocab_size_below_alphabet_rejected(self):
        with pytest.raises(ConfigError, match="alphabet"):
            train_wordpiece({"abc": 2}, TrainConfig(algorithm="wordpiece", vocab_size=1))


class TestOracleEquivalence:
    def test_60_random_instances(self):
        rng = random.Random(777)
        for trial in range(60):
            alphabet = rng.sample("abcd", rng.randint(2, 4))
            freqs = {}
            while len(freqs) < rng.randint(1, 12):
                word = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 5)))
                freqs[word] = rng.randint(1, 5)
            alphabet_size = len({s for w in freqs for s in positional_symbols(w)})
            vocab_size = alphabet_size + rng.randint(0, 8)
            min_frequency = rng.randint(1, 2)
            cfg = TrainConfig(
                algorithm="wordpiece", vocab_size=vocab_size, min_frequency=min_frequency
            )
            model = train_wordpiece(freqs, cfg)
            expected = oracle_wordpiece_merges(freqs, vocab_size, min_frequency)
            assert model.merges == expected, f"trial {trial}: {freqs}"


class TestGreedyEncode:
    def make_model(self, vocab):
        return SubwordModel(algorithm="wordpiece", vocab=["<UNK>"] + vocab)

    def test_longest_match(self):
        model = self.make_model(["un", "##able", "u", "##n"])
        seg = model.encode_word("unable")
        assert seg.tokens == ["un", "##able"]
        assert seg.offsets == [(0, 2), (2, 6)]

    def test_unmatchable_word_is_unk(self):
        model = self.make_model(["un", "##able"])
        seg = model.encode_word("unfit")
        assert seg.tokens == [model.unk_token]
        assert seg.ids == [model.unk_id]
        assert seg.offsets == [(0, 5)]

    def test_decode_strips_continuation(self):
        model = self.make_model(["un", "##able"])
        assert decode(model, encode(model, "unable")) == "unable"

    def test_unseen_character_breaks_round_trip(self):
        cfg = TrainConfig(algorithm="wordpiece", vocab_size=20, min_frequency=1)
        model = train_wordpiece({"ab": 3}, cfg)
        text = "aXb"
        assert decode(model, encode(model, text)) != text

    def test_training_words_reencode_to_training_segmentation(self):
        cfg = TrainConfig(algorithm="wordpiece", vocab_size=6, min_frequency=1)
        model = train_wordpiece({"aab": 4, "ab": 2}, cfg)
        for word in ("aab", "ab"):
            seg = model.encode_word(word)
            assert "".join(t[len(M):] if t.startswith(M) else t for t in seg.tokens) == word

    def test_worker_count_does_not_change_model(self, small_texts):
        freqs = {}
        for text in small_texts[:40]:
            for w in text.split():
                freqs[w] = freqs.get(w, 0) + 1
        cfg1 = TrainConfig(algorithm="wordpiece", vocab_size=150, workers=1)
        cfg4 = TrainConfig(algorithm="wordpiece", vocab_size=150, workers=4)
        assert train_wordpiece(freqs, cfg1).to_dict() == train_wordpiece(freqs, cfg4).to_dict()
