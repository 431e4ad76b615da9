"""Seeded synthetic-corpus generators shared by unit and acceptance tests.

Words come from a morphology-like bank (stems x suffixes over Cyrillic
syllables) sampled with a 1/rank law, so subword trainers see realistic
pair/substring structure and Zipf fits have the expected shape.
"""

from __future__ import annotations

import bisect
import json
import random
from pathlib import Path

_CONSONANTS = "бвгдзклмнпрстфхчш"
_VOWELS = "аеиоуыэя"
_SUFFIXES = [
    "", "а", "и", "ы", "у", "е", "ой", "ам", "ах", "ами", "ов", "ев",
    "ой", "ия", "ть", "ет", "ут", "ал", "или", "ный", "ная", "ное",
]


def word_bank(seed: int, size: int) -> list[str]:
    rng = random.Random(seed)
    stems = set()
    while len(stems) < max(1, size // len(_SUFFIXES) + 1):
        n_syll = rng.choice((2, 2, 3, 3, 4))
        stem = "".join(
            rng.choice(_CONSONANTS) + rng.choice(_VOWELS) for _ in range(n_syll)
        )
        stems.add(stem)
    words = []
    for stem in sorted(stems):
        for suffix in _SUFFIXES:
            words.append(stem + suffix)
    rng.shuffle(words)
    # Deduplicate while preserving the shuffled rank order.
    seen = set()
    unique = []
    for w in words:
        if w not in seen:
            seen.add(w)
            unique.append(w)
    return unique[:size]


def zipf_sampler(seed: int, bank: list[str]):
    """Returns a () -> word sampler with P(rank r) proportional to 1/r."""
    rng = random.Random(seed)
    cumulative = []
    total = 0.0
    for r in range(1, len(bank) + 1):
        total += 1.0 / r
        cumulative.append(total)

    def sample() -> str:
        u = rng.random() * total
        return bank[bisect.bisect_left(cumulative, u)]

    return sample


def make_texts(seed: int, n_tokens: int, bank_size: int = 2000, doc_tokens: int = 100) -> list[str]:
    bank = word_bank(seed, bank_size)
    sample = zipf_sampler(seed + 1, bank)
    texts = []
    remaining = n_tokens
    while remaining > 0:
        take = min(doc_tokens, remaining)
        texts.append(" ".join(sample() for _ in range(take)))
        remaining -= take
    return texts


def write_corpus_jsonl(path: Path, texts: list[str], language: str = "ru") -> None:
    categories = ("news", "science", "sport")
    with path.open("w", encoding="utf-8") as fh:
        for i, text in enumerate(texts):
            rec = {
                "id": f"doc-{i:06d}",
                "text": text,
                "source": "synthetic",
                "category": categories[i % len(categories)],
                "language": language,
            }
            fh.write(json.dumps(rec, ensure_ascii=False))
            fh.write("\n")
