"""Unigram language-model training: EM over segmentation lattices plus
likelihood-driven vocabulary pruning.

Pipeline:

1. Seed vocabulary: every substring of length <= max_piece_len occurring at
   least min_frequency times, ranked by count * length (ties lexicographic),
   capped at seed_multiplier * vocab_size, plus all single characters.
   Initial probabilities are proportional to count * length.
2. Rounds: a fixed number of EM iterations (expected piece counts via
   forward-backward over each word's lattice, then re-normalization),
   followed by pruning the prune_fraction of multi-character pieces whose
   removal least increases the corpus negative log-likelihood. The loss of
   a piece is expected_count * (score - best alternative segmentation of the
   piece's own string without it). Single characters are never pruned, so
   every string stays representable.
3. Once at most vocab_size pieces remain, one final EM round re-estimates
   the scores; they are normalized log-probabilities.

Per-iteration corpus log-likelihoods are recorded on the returned model
(``em_log``, one list per round); within a round the sequence is
non-decreasing, the standard EM guarantee.

All accumulation runs in a fixed word order, so results are byte-identical
for any worker count (workers only shard the integer substring counting).
The float-heavy lattice loops are JIT-compiled when numba is available;
both paths execute the identical operation sequence.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..errors import ConfigError
from ._merges import prepare_word_items
from .model import UNK_TOKEN, SubwordModel, TrainConfig

# Finite stand-in for log(0); pieces at the floor are pruned first anyway.
_SCORE_FLOOR = -1e30


def _estep_kernel(
    n_words,
    word_lens,
    word_counts,
    edge_offsets,
    edge_i,
    edge_j,
    edge_pid,
    logp,
    expected,
    alpha,
    beta,
):
    neg_inf = -np.inf
    total_ll = 0.0
    for w in range(n_words):
        length = word_lens[w]
        for t in range(length + 1):
            alpha[t] = neg_inf
            beta[t] = neg_inf
        alpha[0] = 0.0
        beta[length] = 0.0
        lo = edge_offsets[w]
        hi = edge_offsets[w + 1]
        for e in range(lo, hi):  # sorted by (end, start): alpha[i] is final
            v = alpha[edge_i[e]] + logp[edge_pid[e]]
            a = alpha[edge_j[e]]
            if a == neg_inf:
                alpha[edge_j[e]] = v
            elif v != neg_inf:
                if a >= v:
                    alpha[edge_j[e]] = a + math.log1p(math.exp(v - a))
                else:
                    alpha[edge_j[e]] = v + math.log1p(math.exp(a - v))
        for e in range(hi - 1, lo - 1, -1):  # reverse order: beta[j] is final
            v = logp[edge_pid[e]] + beta[edge_j[e]]
            b = beta[edge_i[e]]
            if b == neg_inf:
                beta[edge_i[e]] = v
            elif v != neg_inf:
                if b >= v:
                    beta[edge_i[e]] = b + math.log1p(math.exp(v - b))
                else:
                    beta[edge_i[e]] = v + math.log1p(math.exp(b - v))
        log_z = alpha[length]
        count = word_counts[w]
        total_ll += count * log_z
        for e in range(lo, hi):
            post = alpha[edge_i[e]] + logp[edge_pid[e]] + beta[edge_j[e]] - log_z
            expected[edge_pid[e]] += count * math.exp(post)
    return total_ll


try:  # pragma: no cover - exercised implicitly when numba is installed
    from numba import njit

    _estep_kernel = njit(cache=True)(_estep_kernel)
except ImportError:  # pragma: no cover
    pass


def _count_substrings(words: list[str], counts: list[int], max_piece_len: int, workers: int) -> Counter:
    def chunk_counts(lo: int, hi: int) -> Counter:
        acc: Counter = Counter()
        for idx in range(lo, hi):
            word = words[idx]
            c = counts[idx]
            n = len(word)
            for i in range(n):
                top = min(n, i + max_piece_len)
                for j in range(i + 1, top + 1):
                    acc[word[i:j]] += c
        return acc

    n = len(words)
    if workers > 1 and n > 1:
        size = (n + workers - 1) // workers
        bounds = [(lo, min(lo + size, n)) for lo in range(0, n, size)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(chunk_counts, lo, hi) for lo, hi in bounds]
            partials = [f.result() for f in futures]
        total: Counter = Counter()
        for part in partials:  # chunk order; counts are ints, order-independent
            total.update(part)
        return total
    return chunk_counts(0, n)


class _Lattices:
    """Flat edge arrays for the current vocabulary, shared by the EM iterations
    of one round. Edges are sorted by (end, start) per word."""

    def __init__(self, words: list[str], counts: list[int], piece_ids: dict[str, int], max_piece_len: int):
        edge_i: list[int] = []
        edge_j: list[int] = []
        edge_pid: list[int] = []
        offsets = [0]
        for word in words:
            n = len(word)
            for j in range(1, n + 1):
                for i in range(max(0, j - max_piece_len), j):
                    pid = piece_ids.get(word[i:j])
                    if pid is not None:
                        edge_i.append(i)
                        edge_j.append(j)
                        edge_pid.append(pid)
            offsets.append(len(edge_i))
        self.n_words = len(words)
        self.word_lens = np.array([len(w) for w in words], dtype=np.int64)
        self.word_counts = np.array(counts, dtype=np.float64)
        self.edge_offsets = np.array(offsets, dtype=np.int64)
        self.edge_i = np.array(edge_i, dtype=np.int64)
        self.edge_j = np.array(edge_j, dtype=np.int64)
        self.edge_pid = np.array(edge_pid, dtype=np.int64)
        max_len = int(self.word_lens.max()) if len(words) else 1
        self._alpha = np.zeros(max_len + 1, dtype=np.float64)
        self._beta = np.zeros(max_len + 1, dtype=np.float64)

    def estep(self, logp: np.ndarray) -> tuple[float, np.ndarray]:
        expected = np.zeros(len(logp), dtype=np.float64)
        ll = _estep_kernel(
            self.n_words,
            self.word_lens,
            self.word_counts,
            self.edge_offsets,
            self.edge_i,
            self.edge_j,
            self.edge_pid,
            logp,
            expected,
            self._alpha,
            self._beta,
        )
        return float(ll), expected


def _viterbi_alt(piece: str, scores: dict[str, float], max_piece_len: int) -> float:
    """Best log-probability of segmenting ``piece`` without using it whole."""
    n = len(piece)
    best = [-math.inf] * (n + 1)
    best[0] = 0.0
    for j in range(1, n + 1):
        for i in range(max(0, j - max_piece_len), j):
            if i == 0 and j == n:
                continue  # the piece itself
            s = scores.get(piece[i:j])
            if s is None or best[i] == -math.inf:
                continue
            v = best[i] + s
            if v > best[j]:
                best[j] = v
    return best[n]


def train_unigram(word_freqs: dict[str, int], cfg: TrainConfig) -> SubwordModel:
    items = prepare_word_items(word_freqs)
    words = [w for w, _ in items]
    counts = [c for _, c in items]

    chars = sorted({c for w in words for c in w})
    if cfg.vocab_size < len(chars):
        raise ConfigError(
            f"vocab_size {cfg.vocab_size} is smaller than the character count ({len(chars)})"
        )

    sub_counts = _count_substrings(words, counts, cfg.max_piece_len, cfg.workers)
    multi = [
        (piece, count)
        for piece, count in sub_counts.items()
        if len(piece) >= 2 and count >= cfg.min_frequency
    ]
    multi.sort(key=lambda pc: (-pc[1] * len(pc[0]), pc[0]))
    cap = cfg.unigram_seed_multiplier * cfg.vocab_size
    multi = multi[:cap]

    pieces = list(chars) + [p for p, _ in multi]
    weights = [float(sub_counts[c]) if sub_counts[c] > 0 else 1.0 for c in chars]
    weights += [float(count * len(piece)) for piece, count in multi]
    total = sum(weights)
    scores = {p: math.log(w / total) for p, w in zip(pieces, weights)}

    em_log: list[list[float]] = []

    def em_round(current: dict[str, float]) -> tuple[dict[str, float], dict[str, float]]:
        ordered = sorted(current)
        piece_ids = {p: i for i, p in enumerate(ordered)}
        lattices = _Lattices(words, counts, piece_ids, cfg.max_piece_len)
        logp = np.array([current[p] for p in ordered], dtype=np.float64)
        lls: list[float] = []
        expected = None
        for _ in range(cfg.unigram_em_iters_per_round):
            ll, expected = lattices.estep(logp)
            lls.append(ll)
            total_e = float(expected.sum())
            ratios = [e / total_e for e in expected.tolist()]
            logp = np.array(
                [math.log(r) if r > 0.0 else _SCORE_FLOOR for r in ratios],
                dtype=np.float64,
            )
        em_log.append(lls)
        new_scores = {p: float(logp[i]) for p, i in piece_ids.items()}
        freqs = {p: float(expected[i]) for p, i in piece_ids.items()}
        return new_scores, freqs

    char_set = set(chars)
    while len(scores) > cfg.vocab_size:
        scores, freqs = em_round(scores)
        prunable = sorted(p for p in scores if p not in char_set)
        excess = len(scores) - cfg.vocab_size
        k = max(1, int(cfg.unigram_prune_fraction * len(prunable)))
        k = min(k, excess, len(prunable))
        losses = []
        for piece in prunable:
            alt = _viterbi_alt(piece, scores, cfg.max_piece_len)
            losses.append((freqs[piece] * (scores[piece] - alt), piece))
        losses.sort(key=lambda lp: (lp[0], lp[1]))
        for _, piece in losses[:k]:
            del scores[piece]
        # Re-normalize the survivors so scores stay a proper distribution.
        log_z = math.log(sum(math.exp(s) for s in sorted(scores.values(), reverse=True)))
        scores = {p: s - log_z for p, s in scores.items()}

    scores, _ = em_round(scores)

    vocab = [UNK_TOKEN] + sorted(scores)
    model = SubwordModel(
        algorithm="unigram",
        vocab=vocab,
        scores=scores,
        train_config=cfg.to_dict(),
    )
    model.em_log = em_log
    return model
