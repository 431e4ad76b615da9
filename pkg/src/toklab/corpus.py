"""JSONL corpus loading, validation, splitting, leakage checks and datasheets.

A corpus is one JSON object per line, UTF-8. Mandatory fields per document:
``id``, ``text``, ``source``, ``language``. Optional: ``title``, ``category``,
``date``, ``url``, ``tokens_approx``. Unknown fields are preserved verbatim
on round-trip.

Corpus-level "token" always means a whitespace token of the NFC-normalized
text; that is the unit behind ``total_tokens``, split volumes and OOV counts.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Union

from ._rng import SplitMix64, fisher_yates
from .errors import CorpusError

_LANG_RE = re.compile(r"^[a-z]{2,3}$")

# Canonical field order for serialization; extras follow in original order.
_KNOWN_FIELDS = (
    "id",
    "text",
    "title",
    "source",
    "category",
    "language",
    "date",
    "url",
    "tokens_approx",
)
_MANDATORY_FIELDS = ("id", "text", "source", "language")

RECOMMENDED_MIN_TOKENS = 5_000_000


@dataclass
class Document:
    id: str
    text: str
    source: str
    language: str
    title: Optional[str] = None
    category: Optional[str] = None
    date: Optional[str] = None
    url: Optional[str] = None
    tokens_approx: Optional[int] = None
    extra: dict = field(default_factory=dict)

    def token_count(self) -> int:
        return len(self.text.split())

    def to_record(self) -> dict:
        rec = {}
        for name in _KNOWN_FIELDS:
            value = getattr(self, name)
            if value is not None:
                rec[name] = value
        rec.update(self.extra)
        return rec


@dataclass
class Corpus:
    documents: list[Document]
    total_tokens: int = 0

    def __post_init__(self) -> None:
        self.total_tokens = sum(d.token_count() for d in self.documents)

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def by_id(self) -> dict[str, Document]:
        return {d.id: d for d in self.documents}

    def ids(self) -> list[str]:
        return [d.id for d in self.documents]


@dataclass(frozen=True)
class SplitSpec:
    """Seeded split request. ``test_fraction`` is kept as an exact rational.

    Floats are converted through their shortest decimal representation, so
    ``SplitSpec(seed, 0.2)`` means exactly 1/5 and ``ceil(0.2 * 10) == 2``,
    which binary floating point alone would get wrong.
    """

    seed: int
    test_fraction: Fraction

    def __init__(self, seed: int, test_fraction: Union[Fraction, float, str]) -> None:
        if isinstance(test_fraction, float):
            test_fraction = Fraction(str(test_fraction))
        else:
            test_fraction = Fraction(test_fraction)
        if not (0 < test_fraction < 1):
            raise ValueError(f"test_fraction must be in (0,1), got {test_fraction}")
        object.__setattr__(self, "seed", seed)
        object.__setattr__(self, "test_fraction", test_fraction)


@dataclass
class SplitReport:
    train_tokens: int
    test_tokens: int
    test_fraction_actual: float
    id_intersection: list[str]
    oov_token_count: int
    oov_rate: float
    vocab_overlap: float

    @property
    def valid(self) -> bool:
        return not self.id_intersection

    def to_dict(self) -> dict:
        return {
            "train_tokens": self.train_tokens,
            "test_tokens": self.test_tokens,
            "test_fraction_actual": self.test_fraction_actual,
            "id_intersection": self.id_intersection,
            "oov_token_count": self.oov_token_count,
            "oov_rate": self.oov_rate,
            "vocab_overlap": self.vocab_overlap,
            "valid": self.valid,
        }


@dataclass
class Datasheet:
    name: str
    version: str
    languages: list[str]
    document_count: int
    token_count: int
    sources: list[dict]
    category_distribution: dict[str, int]
    time_span: Optional[dict]
    processing_description: str
    known_limitations: list[str]

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "version": self.version,
            "languages": self.languages,
            "document_count": self.document_count,
            "token_count": self.token_count,
            "sources": self.sources,
            "category_distribution": self.category_distribution,
            "processing_description": self.processing_description,
            "known_limitations": self.known_limitations,
        }
        if self.time_span is not None:
            d["time_span"] = self.time_span
        return d


def _document_from_record(rec: dict, line_no: int) -> Document:
    if not isinstance(rec, dict):
        raise CorpusError(f"line {line_no}: expected a JSON object, got {type(rec).__name__}")
    for name in _MANDATORY_FIELDS:
        if name not in rec:
            raise CorpusError(f"line {line_no}: missing mandatory field '{name}'")
    doc_id = rec["id"]
    if not isinstance(doc_id, str) or not doc_id:
        raise CorpusError(f"line {line_no}: 'id' must be a non-empty string")
    language = rec["language"]
    if not isinstance(language, str) or not _LANG_RE.match(language):
        raise CorpusError(
            f"line {line_no}: 'language' must match [a-z]{{2,3}}, got {language!r}"
        )
    text = rec["text"]
    if not isinstance(text, str):
        raise CorpusError(f"line {line_no}: 'text' must be a string")

    tokens_approx = rec.get("tokens_approx")
    if tokens_approx is not None and (not isinstance(tokens_approx, int) or tokens_approx < 0):
        raise CorpusError(f"line {line_no}: 'tokens_approx' must be a non-negative integer")

    known = {k: rec.get(k) for k in _KNOWN_FIELDS}
    extra = {k: v for k, v in rec.items() if k not in _KNOWN_FIELDS}
    title = known["title"]
    return Document(
        id=doc_id,
        text=unicodedata.normalize("NFC", text),
        source=str(rec["source"]),
        language=language,
        title=unicodedata.normalize("NFC", title) if isinstance(title, str) else title,
        category=known["category"],
        date=known["date"],
        url=known["url"],
        tokens_approx=tokens_approx,
        extra=extra,
    )


def load_corpus(path: Union[str, Path]) -> Corpus:
    """Load and validate a JSONL corpus.

    Raises CorpusError with the offending line number on parse failures,
    on missing mandatory fields, and on duplicate ids (all listed).
    """
    path = Path(path)
    documents: list[Document] = []
    seen: dict[str, int] = {}
    duplicates: list[str] = []
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {line_no}: invalid JSON: {exc.msg}") from exc
            doc = _document_from_record(rec, line_no)
            if doc.id in seen:
                duplicates.append(doc.id)
            else:
                seen[doc.id] = line_no
            documents.append(doc)
    if duplicates:
        listed = ", ".join(sorted(set(duplicates)))
        raise CorpusError(f"duplicate document ids: {listed}")
    return Corpus(documents)


def save_corpus(corpus: Corpus, path: Union[str, Path]) -> None:
    """Write a corpus back to JSONL (known fields first, extras preserved)."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for doc in corpus.documents:
            fh.write(json.dumps(doc.to_record(), ensure_ascii=False))
            fh.write("\n")


def split_corpus(corpus: Corpus, spec: SplitSpec) -> tuple[list[str], list[str]]:
    """Deterministic train/test split of document ids.

    Ids are sorted lexicographically, permuted by a Fisher-Yates shuffle
    driven by splitmix64(seed), and the first ceil(test_fraction * N)
    permuted positions become the test set. A pure function of
    (set of ids, seed, test_fraction): input order is irrelevant.
    """
    if not corpus.documents:
        raise CorpusError("cannot split an empty corpus")
    ids = sorted(corpus.ids())
    rng = SplitMix64(spec.seed)
    fisher_yates(ids, rng)
    n = len(ids)
    frac = spec.test_fraction
    test_size = -((-frac.numerator * n) // frac.denominator)  # ceil(frac * n), exact
    test_ids = ids[:test_size]
    train_ids = ids[test_size:]
    return train_ids, test_ids


def verify_split(
    corpus: Corpus,
    train_ids: Iterable[str],
    test_ids: Iterable[str],
    vocab: set[str],
) -> SplitReport:
    """Leakage and representativeness check for a documented split.

    ``vocab`` is the token vocabulary the caller trained on (normally the
    train split's whitespace vocabulary); OOV counts test-set token
    occurrences absent from it. Vocabulary overlap is type-level:
    |V_train ∩ V_all| / |V_all|.
    """
    train_ids = list(train_ids)
    test_ids = list(test_ids)
    docs = corpus.by_id()
    unknown = [i for i in (*train_ids, *test_ids) if i not in docs]
    if unknown:
        raise CorpusError(f"unknown document ids: {', '.join(sorted(set(unknown)))}")

    intersection = sorted(set(train_ids) & set(test_ids))

    train_tokens = 0
    v_train: set[str] = set()
    for i in train_ids:
        toks = docs[i].text.split()
        train_tokens += len(toks)
        v_train.update(toks)

    test_tokens = 0
    oov = 0
    v_test: set[str] = set()
    for i in test_ids:
        toks = docs[i].text.split()
        test_tokens += len(toks)
        v_test.update(toks)
        oov += sum(1 for t in toks if t not in vocab)

    v_all = v_train | v_test
    total = train_tokens + test_tokens
    return SplitReport(
        train_tokens=train_tokens,
        test_tokens=test_tokens,
        test_fraction_actual=test_tokens / total if total else 0.0,
        id_intersection=intersection,
        oov_token_count=oov,
        oov_rate=oov / test_tokens if test_tokens else 0.0,
        vocab_overlap=len(v_train & v_all) / len(v_all) if v_all else 1.0,
    )


def build_datasheet(
    corpus: Corpus,
    processing_description: str,
    name: str = "corpus",
    version: str = "1.0.0",
    known_limitations: Optional[list[str]] = None,
    source_licenses: Optional[dict[str, str]] = None,
) -> Datasheet:
    """Aggregate a corpus passport: volumes, sources, categories, time span."""
    limitations = list(known_limitations or [])
    licenses = source_licenses or {}
    categories: dict[str, int] = {}
    sources_seen: list[str] = []
    dates: list[str] = []
    for doc in corpus.documents:
        if doc.category is not None:
            categories[doc.category] = categories.get(doc.category, 0) + 1
        if doc.source not in sources_seen:
            sources_seen.append(doc.source)
        if doc.date:
            dates.append(doc.date)
    if corpus.total_tokens < RECOMMENDED_MIN_TOKENS:
        limitations.append(
            f"corpus holds {corpus.total_tokens} tokens, below the recommended "
            f"{RECOMMENDED_MIN_TOKENS}; subword metrics may be less stable"
        )
    time_span = {"min_date": min(dates), "max_date": max(dates)} if dates else None
    return Datasheet(
        name=name,
        version=version,
        languages=sorted({d.language for d in corpus.documents}),
        document_count=len(corpus.documents),
        token_count=corpus.total_tokens,
        sources=[{"name": s, "license": licenses.get(s, "unknown")} for s in sources_seen],
        category_distribution=dict(sorted(categories.items())),
        time_span=time_span,
        processing_description=processing_description,
        known_limitations=limitations,
    )


def corpus_stats(corpus: Corpus) -> dict:
    """Descriptive statistics bundle used by the ``stats`` subcommand and reports.

    Text-length histogram buckets are [0,1), [1,2), [2,4), ... up to the
    smallest power of two exceeding the longest text.
    """
    text_lengths = [d.token_count() for d in corpus.documents]
    title_lengths = [len(d.title.split()) for d in corpus.documents if d.title]
    unique: set[str] = set()
    for d in corpus.documents:
        unique.update(d.text.split())

    per_category: dict[str, list[int]] = {}
    for d in corpus.documents:
        if d.category is not None:
            per_category.setdefault(d.category, []).append(d.token_count())

    buckets = []
    if text_lengths:
        max_len = max(text_lengths)
        edges = [0, 1]
        while edges[-1] <= max_len:
            edges.append(edges[-1] * 2)
        for lo, hi in zip(edges, edges[1:]):
            buckets.append(
                {"lo": lo, "hi": hi, "count": sum(1 for n in text_lengths if lo <= n < hi)}
            )

    def summary(lengths: list[int]) -> dict:
        return {
            "count": len(lengths),
            "mean": sum(lengths) / len(lengths),
            "min": min(lengths),
            "max": max(lengths),
        }

    return {
        "documents": len(corpus.documents),
        "total_tokens": corpus.total_tokens,
        "unique_tokens": len(unique),
        "mean_text_length": (sum(text_lengths) / len(text_lengths)) if text_lengths else None,
        "mean_title_length": (sum(title_lengths) / len(title_lengths)) if title_lengths else None,
        "per_category": {c: summary(v) for c, v in sorted(per_category.items())},
        "text_length_histogram": buckets,
    }
