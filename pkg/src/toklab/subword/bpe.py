"""Byte-pair training: greedily merge the most frequent adjacent symbol pair.

Initial symbols are the word's characters with the end-of-word marker
appended to the last one. Each round merges the pair with the highest
weighted frequency; ties go to the lexicographically smallest (left, right)
pair. Selection uses a lazy max-heap over pair counts: every count change
pushes a fresh entry and stale entries are discarded on pop, which is
exactly equivalent to recounting all pairs each round.
"""

from __future__ import annotations

import heapq

from ..errors import ConfigError
from ._merges import MergeCorpus, prepare_word_items
from .model import UNK_TOKEN, WORD_END_MARKER, SubwordModel, TrainConfig


def train_bpe(word_freqs: dict[str, int], cfg: TrainConfig) -> SubwordModel:
    items = prepare_word_items(word_freqs)
    symbol_lists = []
    counts = []
    for word, count in items:
        syms = list(word)
        syms[-1] += WORD_END_MARKER
        symbol_lists.append(syms)
        counts.append(count)

    alphabet = sorted({s for syms in symbol_lists for s in syms})
    if cfg.vocab_size < len(alphabet):
        raise ConfigError(
            f"vocab_size {cfg.vocab_size} is smaller than the alphabet ({len(alphabet)} symbols)"
        )

    state = MergeCorpus(symbol_lists, counts, workers=cfg.workers)
    heap = [
        (-count, pair)
        for pair, count in state.pair_counts.items()
        if count >= cfg.min_frequency
    ]
    heapq.heapify(heap)

    vocab_set = set(alphabet)
    merges: list[tuple[str, str]] = []
    products: list[str] = []
    while len(vocab_set) < cfg.vocab_size:
        best = None
        while heap:
            neg_count, pair = heap[0]
            current = state.pair_counts.get(pair, 0)
            if current != -neg_count:
                heapq.heappop(heap)
                continue
            if current >= cfg.min_frequency:
                best = pair
            break
        if best is None:
            break
        merges.append(best)
        new_sym = best[0] + best[1]
        if new_sym not in vocab_set:
            vocab_set.add(new_sym)
            products.append(new_sym)
        touched, _ = state.apply_merge(best)
        for pair in touched:
            count = state.pair_counts.get(pair, 0)
            if count >= cfg.min_frequency:
                heapq.heappush(heap, (-count, pair))

    vocab = [UNK_TOKEN] + alphabet + products
    return SubwordModel(
        algorithm="bpe",
        vocab=vocab,
        merges=merges,
        train_config=cfg.to_dict(),
    )
