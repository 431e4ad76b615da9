"""Trained subword model artifact: vocabulary, merges or piece scores,
markers, and the versioned JSON serialization with a content checksum.

Encoding/decoding semantics shared by all three algorithms:

* the end-of-word marker ``</w>`` travels with a word's last character
  symbol (byte-pair models), the continuation marker ``##`` prefixes
  non-initial pieces (wordpiece), unigram pieces are plain substrings;
* characters never seen in training are emitted as per-character pieces
  carrying the unknown id (byte-pair / unigram), while wordpiece maps the
  whole unmatchable word to the unknown token;
* decoding concatenates piece strings, strips markers, and joins words
  with single spaces, so ``decode(encode(t)) == normalize_whitespace(t)``
  whenever every piece string carries the original characters.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from ..errors import ConfigError, ModelFormatError

MODEL_FORMAT_VERSION = "1"

UNK_TOKEN = "<UNK>"
WORD_END_MARKER = "</w>"
CONTINUATION_MARKER = "##"

ALGORITHMS = ("bpe", "wordpiece", "unigram")


@dataclass(frozen=True)
class TrainConfig:
    algorithm: str
    vocab_size: int
    min_frequency: int = 2
    seed: int = 0
    max_piece_len: int = 16
    unigram_seed_multiplier: int = 8
    unigram_prune_fraction: float = 0.2
    unigram_em_iters_per_round: int = 2
    workers: int = 1

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.vocab_size < 1:
            raise ConfigError("vocab_size must be >= 1")
        if self.min_frequency < 1:
            raise ConfigError("min_frequency must be >= 1")
        if not (0 < self.unigram_prune_fraction < 1):
            raise ConfigError("unigram_prune_fraction must be in (0,1)")
        if self.max_piece_len < 1 or self.unigram_seed_multiplier < 1:
            raise ConfigError("max_piece_len and unigram_seed_multiplier must be >= 1")
        if self.unigram_em_iters_per_round < 1:
            raise ConfigError("unigram_em_iters_per_round must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> "TrainConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown training config keys: {sorted(unknown)}")
        if "algorithm" not in data or "vocab_size" not in data:
            raise ConfigError("training config requires 'algorithm' and 'vocab_size'")
        return cls(**data)

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "vocab_size": self.vocab_size,
            "min_frequency": self.min_frequency,
            "seed": self.seed,
            "max_piece_len": self.max_piece_len,
            "unigram_seed_multiplier": self.unigram_seed_multiplier,
            "unigram_prune_fraction": self.unigram_prune_fraction,
            "unigram_em_iters_per_round": self.unigram_em_iters_per_round,
        }


@dataclass
class Segmentation:
    """One word's subword decomposition; offsets tile the word exactly."""

    tokens: list[str]
    ids: list[int]
    offsets: list[tuple[int, int]]


class SubwordModel:
    def __init__(
        self,
        algorithm: str,
        vocab: list[str],
        merges: Optional[list[tuple[str, str]]] = None,
        scores: Optional[dict[str, float]] = None,
        train_config: Optional[dict] = None,
    ):
        if algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {algorithm!r}")
        if len(set(vocab)) != len(vocab):
            raise ModelFormatError("vocabulary contains duplicate tokens")
        self.algorithm = algorithm
        self.vocab = list(vocab)
        self.merges = list(merges or [])
        self.scores = dict(scores or {})
        self.train_config = dict(train_config or {})
        self.unk_token = UNK_TOKEN
        self.word_end_marker = WORD_END_MARKER
        self.continuation_marker = CONTINUATION_MARKER
        self.version = MODEL_FORMAT_VERSION
        self.token_to_id = {tok: i for i, tok in enumerate(self.vocab)}
        if self.unk_token not in self.token_to_id:
            raise ModelFormatError(f"vocabulary must contain {self.unk_token}")
        self.unk_id = self.token_to_id[self.unk_token]
        self._merge_rank = {pair: i for i, pair in enumerate(self.merges)}
        self._max_piece_len = max((len(p) for p in self.scores), default=1)
        # word -> (tokens, ids, offsets); read-mostly cache, safe under the GIL
        self._encode_cache: dict[str, tuple] = {}
        self.em_log: list[list[float]] = []  # unigram only; not serialized

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    # -- encoding ---------------------------------------------------------

    def encode_word(self, word: str) -> Segmentation:
        cached = self._encode_cache.get(word)
        if cached is None:
            if self.algorithm == "bpe":
                cached = self._encode_bpe(word)
            elif self.algorithm == "wordpiece":
                cached = self._encode_wordpiece(word)
            else:
                cached = self._encode_unigram(word)
            self._encode_cache[word] = cached
        tokens, ids, offsets = cached
        return Segmentation(list(tokens), list(ids), list(offsets))

    def _encode_bpe(self, word: str) -> tuple:
        chars = list(word)
        symbols = [(c, i, i + 1) for i, c in enumerate(chars)]
        last = symbols[-1]
        symbols[-1] = (last[0] + self.word_end_marker, last[1], last[2])
        rank = self._merge_rank
        while len(symbols) > 1:
            best_rank = None
            for left, right in zip(symbols, symbols[1:]):
                r = rank.get((left[0], right[0]))
                if r is not None and (best_rank is None or r < best_rank):
                    best_rank = r
            if best_rank is None:
                break
            pair = self.merges[best_rank]
            merged = []
            i = 0
            while i < len(symbols):
                if (
                    i + 1 < len(symbols)
                    and symbols[i][0] == pair[0]
                    and symbols[i + 1][0] == pair[1]
                ):
                    merged.append((pair[0] + pair[1], symbols[i][1], symbols[i + 1][2]))
                    i += 2
                else:
                    merged.append(symbols[i])
                    i += 1
            symbols = merged
        tokens = [s[0] for s in symbols]
        ids = [self.token_to_id.get(t, self.unk_id) for t in tokens]
        offsets = [(s[1], s[2]) for s in symbols]
        return tokens, ids, offsets

    def _encode_wordpiece(self, word: str) -> tuple:
        tokens: list[str] = []
        offsets: list[tuple[int, int]] = []
        pos = 0
        n = len(word)
        while pos < n:
            end = n
            found = None
            while end > pos:
                candidate = word[pos:end]
                stored = candidate if pos == 0 else self.continuation_marker + candidate
                if stored in self.token_to_id:
                    found = (stored, end)
                    break
                end -= 1
            if found is None:
                return [self.unk_token], [self.unk_id], [(0, n)]
            tokens.append(found[0])
            offsets.append((pos, found[1]))
            pos = found[1]
        ids = [self.token_to_id[t] for t in tokens]
        return tokens, ids, offsets

    def _encode_unigram(self, word: str) -> tuple:
        n = len(word)
        scores = self.scores
        max_len = self._max_piece_len
        # dp[i]: best (logp, ntokens, tokens, offsets) for word[:i];
        # ties prefer fewer tokens, then the lexicographically smaller tuple.
        dp: list[Optional[tuple]] = [None] * (n + 1)
        dp[0] = (0.0, 0, (), ())
        unseen_penalty = -1e9  # keeps the lattice connected on unknown chars
        for j in range(1, n + 1):
            best = None
            for i in range(max(0, j - max_len), j):
                if dp[i] is None:
                    continue
                piece = word[i:j]
                s = scores.get(piece)
                if s is None:
                    if j - i != 1:
                        continue
                    s = unseen_penalty
                prev = dp[i]
                cand = (prev[0] + s, prev[1] + 1, prev[2] + (piece,), prev[3] + ((i, j),))
                if best is None:
                    best = cand
                elif cand[0] > best[0] or (
                    cand[0] == best[0]
                    and (cand[1] < best[1] or (cand[1] == best[1] and cand[2] < best[2]))
                ):
                    best = cand
            dp[j] = best
        final = dp[n]
        tokens = list(final[2])
        ids = [self.token_to_id.get(t, self.unk_id) for t in tokens]
        return tokens, ids, list(final[3])

    # -- decoding ---------------------------------------------------------

    def decode_word(self, seg: Segmentation) -> str:
        for i in seg.ids:
            if not (0 <= i < len(self.vocab)):
                raise ModelFormatError(f"unknown token id {i}")
        if self.algorithm == "wordpiece":
            parts = [seg.tokens[0]] if seg.tokens else []
            for tok in seg.tokens[1:]:
                if tok.startswith(self.continuation_marker):
                    tok = tok[len(self.continuation_marker):]
                parts.append(tok)
            return "".join(parts)
        joined = "".join(seg.tokens)
        if self.algorithm == "bpe" and joined.endswith(self.word_end_marker):
            joined = joined[: -len(self.word_end_marker)]
        return joined

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format_version": self.version,
            "algorithm": self.algorithm,
            "vocab": self.vocab,
            "merges": [[l, r] for l, r in self.merges],
            "scores": {k: self.scores[k] for k in sorted(self.scores)},
            "unk_token": self.unk_token,
            "word_end_marker": self.word_end_marker,
            "continuation_marker": self.continuation_marker,
            "train_config": self.train_config,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SubwordModel":
        try:
            model = cls(
                algorithm=data["algorithm"],
                vocab=list(data["vocab"]),
                merges=[tuple(m) for m in data.get("merges", [])],
                scores=dict(data.get("scores", {})),
                train_config=data.get("train_config", {}),
            )
        except KeyError as exc:
            raise ModelFormatError(f"model file missing field {exc}") from exc
        return model


def _canonical_payload(payload: dict) -> str:
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def save_model(model: SubwordModel, path: Union[str, Path]) -> None:
    """Write the model as canonical JSON with a sha256 content checksum."""
    payload = model.to_dict()
    body = _canonical_payload(payload)
    checksum = hashlib.sha256(body.encode("utf-8")).hexdigest()
    envelope = dict(payload)
    envelope["checksum"] = checksum
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write(_canonical_payload(envelope))
        fh.write("\n")


def load_model(path: Union[str, Path]) -> SubwordModel:
    try:
        with Path(path).open("r", encoding="utf-8") as fh:
            envelope = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"corrupt model file: {exc.msg}") from exc
    if not isinstance(envelope, dict) or "format_version" not in envelope:
        raise ModelFormatError("not a model file: missing format_version")
    if envelope["format_version"] != MODEL_FORMAT_VERSION:
        raise ModelFormatError(
            f"unsupported model format version {envelope['format_version']!r}; "
            f"this build reads version {MODEL_FORMAT_VERSION!r}"
        )
    checksum = envelope.pop("checksum", None)
    if checksum is None:
        raise ModelFormatError("model file has no checksum")
    body = _canonical_payload(envelope)
    actual = hashlib.sha256(body.encode("utf-8")).hexdigest()
    if actual != checksum:
        raise ModelFormatError("model file checksum mismatch; file is corrupt")
    return SubwordModel.from_dict(envelope)
