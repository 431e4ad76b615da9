"""Subword model training, encoding, decoding, and serialization."""

from __future__ import annotations

import unicodedata
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterable, Optional, Union

from ..surface import SurfaceTokenizer, tokenize
from .bpe import train_bpe
from .model import (
    ALGORITHMS,
    CONTINUATION_MARKER,
    MODEL_FORMAT_VERSION,
    UNK_TOKEN,
    WORD_END_MARKER,
    Segmentation,
    SubwordModel,
    TrainConfig,
    load_model,
    save_model,
)
from .unigram import train_unigram
from .wordpiece import train_wordpiece

__all__ = [
    "ALGORITHMS",
    "CONTINUATION_MARKER",
    "MODEL_FORMAT_VERSION",
    "Segmentation",
    "SubwordModel",
    "TrainConfig",
    "UNK_TOKEN",
    "WORD_END_MARKER",
    "count_words",
    "decode",
    "encode",
    "encode_word",
    "load_model",
    "load_word_freqs",
    "save_model",
    "save_word_freqs",
    "train",
    "train_bpe",
    "train_unigram",
    "train_wordpiece",
]

_TRAINERS = {"bpe": train_bpe, "wordpiece": train_wordpiece, "unigram": train_unigram}


def train(word_freqs: dict[str, int], cfg: TrainConfig) -> SubwordModel:
    """Train a subword model; ``word_freqs`` must come from the train split only."""
    return _TRAINERS[cfg.algorithm](word_freqs, cfg)


def encode_word(model: SubwordModel, word: str) -> list[Segmentation]:
    if not word:
        return []
    return [model.encode_word(word)]


def encode(
    model: SubwordModel,
    text: str,
    pre_tokenizer: Optional[SurfaceTokenizer] = None,
) -> list[Segmentation]:
    """Segment each pre-tokenized word of ``text``; one Segmentation per word."""
    if pre_tokenizer is None:
        pre_tokenizer = SurfaceTokenizer()
    text = unicodedata.normalize("NFC", text)
    segmentations = []
    for word in tokenize(text, pre_tokenizer):
        if word:
            segmentations.append(model.encode_word(word))
    return segmentations


def decode(model: SubwordModel, segmentations: Iterable[Segmentation]) -> str:
    """Concatenate pieces, strip markers, join words with single spaces."""
    return " ".join(model.decode_word(seg) for seg in segmentations)


def count_words(
    texts: Iterable[str],
    pre_tokenizer: Optional[SurfaceTokenizer] = None,
    workers: int = 1,
) -> dict[str, int]:
    """Whitespace (or pattern) word frequencies over NFC-normalized texts.

    With several workers the texts are sharded and the partial counters
    merged in shard order; counts are integers, so the reduction is exact
    and independent of scheduling.
    """
    if pre_tokenizer is None:
        pre_tokenizer = SurfaceTokenizer()
    text_list = list(texts)

    def chunk(lo: int, hi: int) -> Counter:
        acc: Counter = Counter()
        for idx in range(lo, hi):
            normalized = unicodedata.normalize("NFC", text_list[idx])
            acc.update(w for w in tokenize(normalized, pre_tokenizer) if w)
        return acc

    n = len(text_list)
    if workers > 1 and n > 1:
        size = (n + workers - 1) // workers
        bounds = [(lo, min(lo + size, n)) for lo in range(0, n, size)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(chunk, lo, hi) for lo, hi in bounds]
            partials = [f.result() for f in futures]
        total: Counter = Counter()
        for part in partials:
            total.update(part)
        return dict(total)
    return dict(chunk(0, n))


def save_word_freqs(word_freqs: dict[str, int], path: Union[str, Path]) -> None:
    """Write the `word<TAB>count` intermediate, sorted by word."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for word in sorted(word_freqs):
            fh.write(f"{word}\t{word_freqs[word]}\n")


def load_word_freqs(path: Union[str, Path]) -> dict[str, int]:
    from ..errors import ConfigError

    freqs: dict[str, int] = {}
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ConfigError(f"word-frequency line {line_no}: expected `word<TAB>count`")
            try:
                freqs[parts[0]] = int(parts[1])
            except ValueError as exc:
                raise ConfigError(f"word-frequency line {line_no}: bad count {parts[1]!r}") from exc
    return freqs
