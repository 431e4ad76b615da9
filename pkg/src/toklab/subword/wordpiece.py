"""Wordpiece training: the byte-pair merge loop re-ranked by a likelihood score.

Words are segmented into positional symbols (first character raw, the rest
prefixed with the continuation marker). A candidate pair (x, y) scores
pair_count / (freq(x) * freq(y)) where freq pools both positional forms of
a symbol, i.e. the marker is ignored when counting how often the underlying
piece occurs. Ties break on the lexicographically smallest positional pair.

Scores have moving denominators, so instead of a priority queue the trainer
keeps flat numpy arrays of (pair count, denominator indices) and re-scans
them each round; that is the literal recount-every-round semantics,
vectorized.

Known aliasing corner shared with other wordpiece implementations: a word
whose literal text starts with ``##`` produces symbols that collide with the
continuation marker. Such words may segment oddly; nothing else is affected.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from ._merges import MergeCorpus, prepare_word_items
from .model import CONTINUATION_MARKER, UNK_TOKEN, SubwordModel, TrainConfig

_M = CONTINUATION_MARKER


def _pooled_key(symbol: str) -> str:
    if symbol.startswith(_M) and len(symbol) > len(_M):
        return symbol[len(_M):]
    return symbol


class _Slots:
    """Append-only string -> dense index registry backed by a numpy value array."""

    def __init__(self, dtype=np.int64):
        self.index: dict = {}
        self.values = np.zeros(64, dtype=dtype)

    def slot(self, key) -> int:
        idx = self.index.get(key)
        if idx is None:
            idx = len(self.index)
            self.index[key] = idx
            if idx >= len(self.values):
                self.values = np.concatenate([self.values, np.zeros_like(self.values)])
        return idx

    def __len__(self) -> int:
        return len(self.index)


def train_wordpiece(word_freqs: dict[str, int], cfg: TrainConfig) -> SubwordModel:
    items = prepare_word_items(word_freqs)
    symbol_lists = []
    counts = []
    for word, count in items:
        chars = list(word)
        symbol_lists.append([chars[0]] + [_M + c for c in chars[1:]])
        counts.append(count)

    alphabet = sorted({s for syms in symbol_lists for s in syms})
    if cfg.vocab_size < len(alphabet):
        raise ConfigError(
            f"vocab_size {cfg.vocab_size} is smaller than the alphabet ({len(alphabet)} symbols)"
        )

    state = MergeCorpus(symbol_lists, counts, workers=cfg.workers)

    pooled = _Slots()
    for sym, c in sorted(state.symbol_counts.items()):
        idx = pooled.slot(_pooled_key(sym))
        pooled.values[idx] += c

    pairs = _Slots()
    pair_list: list[tuple[str, str]] = []
    left_keys = np.zeros(64, dtype=np.int64)
    right_keys = np.zeros(64, dtype=np.int64)

    def pair_slot(pair: tuple[str, str]) -> int:
        nonlocal left_keys, right_keys
        known = len(pairs.index)
        idx = pairs.slot(pair)
        if idx == known:  # freshly registered
            pair_list.append(pair)
            if idx >= len(left_keys):
                left_keys = np.concatenate([left_keys, np.zeros_like(left_keys)])
                right_keys = np.concatenate([right_keys, np.zeros_like(right_keys)])
            left_keys[idx] = pooled.slot(_pooled_key(pair[0]))
            right_keys[idx] = pooled.slot(_pooled_key(pair[1]))
        return idx

    for pair, c in sorted(state.pair_counts.items()):
        idx = pair_slot(pair)
        pairs.values[idx] = c

    vocab_set = set(alphabet)
    merges: list[tuple[str, str]] = []
    products: list[str] = []
    while len(vocab_set) < cfg.vocab_size:
        n = len(pair_list)
        if n == 0:
            break
        cnt = pairs.values[:n]
        eligible = cnt >= cfg.min_frequency
        if not eligible.any():
            break
        denom = pooled.values[left_keys[:n]] * pooled.values[right_keys[:n]]
        scores = np.full(n, -1.0)
        np.divide(cnt, denom, out=scores, where=eligible)
        candidates = np.nonzero(scores == scores.max())[0]
        best = min(pair_list[i] for i in candidates)

        merges.append(best)
        new_sym = best[0] + _pooled_key(best[1])
        if new_sym not in vocab_set:
            vocab_set.add(new_sym)
            products.append(new_sym)

        touched, symbol_deltas = state.apply_merge(best, new_sym)
        for pair in sorted(touched):
            idx = pair_slot(pair)
            pairs.values[idx] = state.pair_counts.get(pair, 0)
        key_deltas: dict[str, int] = {}
        for sym, delta in symbol_deltas.items():
            key = _pooled_key(sym)
            key_deltas[key] = key_deltas.get(key, 0) + delta
        for key, delta in sorted(key_deltas.items()):
            idx = pooled.slot(key)
            pooled.values[idx] += delta

    vocab = [UNK_TOKEN] + alphabet + products
    return SubwordModel(
        algorithm="wordpiece",
        vocab=vocab,
        merges=merges,
        train_config=cfg.to_dict(),
    )
