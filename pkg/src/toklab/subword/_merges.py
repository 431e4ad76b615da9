"""Shared corpus state for merge-based training (byte-pair and wordpiece).

Holds every training word as a list of symbols plus incrementally maintained
adjacent-pair counts, symbol counts, and a pair -> word-ids index, so one
merge only touches the words that actually contain the pair. Initial counting
may be sharded across worker threads; partial counters are merged in chunk
order, which keeps the result identical for any worker count.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor


def _count_chunk(symbol_lists: list[list[str]], counts: list[int], lo: int, hi: int):
    pair_counts: Counter = Counter()
    pair_words: dict[tuple[str, str], set[int]] = {}
    symbol_counts: Counter = Counter()
    for wid in range(lo, hi):
        syms = symbol_lists[wid]
        c = counts[wid]
        for s in syms:
            symbol_counts[s] += c
        for pair in zip(syms, syms[1:]):
            pair_counts[pair] += c
            pair_words.setdefault(pair, set()).add(wid)
    return pair_counts, pair_words, symbol_counts


class MergeCorpus:
    def __init__(self, symbol_lists: list[list[str]], counts: list[int], workers: int = 1):
        self.symbols = symbol_lists
        self.counts = counts
        n = len(symbol_lists)
        chunks = []
        if workers > 1 and n > 1:
            size = (n + workers - 1) // workers
            bounds = [(lo, min(lo + size, n)) for lo in range(0, n, size)]
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futures = [
                    pool.submit(_count_chunk, symbol_lists, counts, lo, hi) for lo, hi in bounds
                ]
                chunks = [f.result() for f in futures]  # merged in chunk order
        else:
            chunks = [_count_chunk(symbol_lists, counts, 0, n)]

        self.pair_counts: dict[tuple[str, str], int] = {}
        self.pair_words: dict[tuple[str, str], set[int]] = {}
        self.symbol_counts: dict[str, int] = {}
        for pc, pw, sc in chunks:
            for pair, c in pc.items():
                self.pair_counts[pair] = self.pair_counts.get(pair, 0) + c
            for pair, wids in pw.items():
                self.pair_words.setdefault(pair, set()).update(wids)
            for sym, c in sc.items():
                self.symbol_counts[sym] = self.symbol_counts.get(sym, 0) + c

    def apply_merge(self, pair: tuple[str, str], new_sym: str = None) -> tuple[set, dict]:
        """Merge every left-to-right occurrence of ``pair`` in every word that
        contains it, writing ``new_sym`` (plain concatenation by default).
        Returns (pairs whose count changed, symbol count deltas)."""
        if new_sym is None:
            new_sym = pair[0] + pair[1]
        touched: set[tuple[str, str]] = set()
        symbol_deltas: dict[str, int] = {}
        word_ids = sorted(self.pair_words.get(pair, ()))
        for wid in word_ids:
            syms = self.symbols[wid]
            c = self.counts[wid]
            out: list[str] = []
            i = 0
            while i < len(syms):
                if i + 1 < len(syms) and syms[i] == pair[0] and syms[i + 1] == pair[1]:
                    out.append(new_sym)
                    i += 2
                else:
                    out.append(syms[i])
                    i += 1
            old_pairs = Counter(zip(syms, syms[1:]))
            new_pairs = Counter(zip(out, out[1:]))
            for p in set(old_pairs) | set(new_pairs):
                delta = (new_pairs.get(p, 0) - old_pairs.get(p, 0)) * c
                if delta:
                    value = self.pair_counts.get(p, 0) + delta
                    if value:
                        self.pair_counts[p] = value
                    else:
                        self.pair_counts.pop(p, None)
                    touched.add(p)
                if new_pairs.get(p, 0):
                    self.pair_words.setdefault(p, set()).add(wid)
                elif old_pairs.get(p, 0):
                    words = self.pair_words.get(p)
                    if words is not None:
                        words.discard(wid)
            old_syms = Counter(syms)
            new_syms = Counter(out)
            for s in set(old_syms) | set(new_syms):
                delta = (new_syms.get(s, 0) - old_syms.get(s, 0)) * c
                if delta:
                    value = self.symbol_counts.get(s, 0) + delta
                    if value:
                        self.symbol_counts[s] = value
                    else:
                        self.symbol_counts.pop(s, None)
                    symbol_deltas[s] = symbol_deltas.get(s, 0) + delta
            self.symbols[wid] = out
        return touched, symbol_deltas


def prepare_word_items(word_freqs: dict[str, int]) -> list[tuple[str, int]]:
    """Validate and deterministically order the training word-frequency map."""
    from ..errors import ConfigError

    items = sorted(word_freqs.items())
    for word, count in items:
        if not word:
            raise ConfigError("empty word in training frequencies")
        if not isinstance(count, int) or count <= 0:
            raise ConfigError(f"word {word!r} has non-positive count {count!r}")
    if not items:
        raise ConfigError("empty training frequency map")
    return items
