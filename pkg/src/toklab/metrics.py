"""The method comparison harness: vocabulary size, OOV rate, nest compression
and semantic consistency, fragmentation, compression ratios, reconstruction
rate, wall time, and Zipf rank-frequency fitting.

Every metric is an occurrence-level aggregate over the correct split
(vocabulary on train, OOV/reconstruction/compression on test), so reports
are invariant under reordering of the input corpus.
"""

from __future__ import annotations

import csv
import math
import time
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Hashable, Iterable, Optional, Sequence, Union

from .corpus import Corpus, Document
from .errors import ConfigError, LeakageError
from .subword import SubwordModel
from .surface import LemmaMap, StemRuleTable, SurfaceTokenizer, lemmatize, stem, tokenize

CSV_COLUMNS = (
    "method",
    "vocab_size",
    "oov_rate",
    "semantic_consistency",
    "fragmentation",
    "char_compression",
    "token_compression",
    "reconstruction_rate",
    "ms_per_mtoken",
)

# Timing slice: enough tokens for a stable per-volume figure, small enough
# to keep eval runs fast.
_TIMING_TOKEN_BUDGET = 200_000


@dataclass
class LexemeNest:
    lemma: str
    forms: list[str]

    def __post_init__(self) -> None:
        if not self.forms:
            raise ConfigError(f"nest {self.lemma!r} has no forms")
        if len(set(self.forms)) != len(self.forms):
            raise ConfigError(f"nest {self.lemma!r} has duplicate forms")


@dataclass
class MethodReport:
    method_name: str
    vocab_size: Optional[int] = None
    oov_rate: Optional[float] = None
    semantic_consistency: Optional[float] = None
    fragmentation: Optional[float] = None
    char_compression: Optional[float] = None
    token_compression: Optional[float] = None
    reconstruction_rate: Optional[float] = None
    ms_per_mtoken: Optional[float] = None
    error: Optional[str] = None
    # piece length -> count over the model vocabulary; report JSON only,
    # never a CSV column
    token_lengths: Optional[dict[int, int]] = None

    def to_dict(self) -> dict:
        return {
            "method": self.method_name,
            "vocab_size": self.vocab_size,
            "oov_rate": self.oov_rate,
            "semantic_consistency": self.semantic_consistency,
            "fragmentation": self.fragmentation,
            "char_compression": self.char_compression,
            "token_compression": self.token_compression,
            "reconstruction_rate": self.reconstruction_rate,
            "ms_per_mtoken": self.ms_per_mtoken,
            "error": self.error,
            "token_lengths": self.token_lengths,
        }


@dataclass
class ZipfFit:
    slope: float
    intercept: float
    rmse: float
    points: int

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "rmse": self.rmse,
            "points": self.points,
        }


def nest_compression(method: Callable[[str], Hashable], nest: LexemeNest) -> float:
    """|distinct outputs over the nest's forms| / |forms|; in [1/n, 1]."""
    outputs = {method(form) for form in nest.forms}
    return len(outputs) / len(nest.forms)


def semantic_consistency(method: Callable[[str], Hashable], nests: Sequence[LexemeNest]) -> float:
    """Unweighted mean of nest compression coefficients."""
    if not nests:
        raise ConfigError("semantic_consistency requires at least one nest")
    return sum(nest_compression(method, nest) for nest in nests) / len(nests)


def oov_rate(vocab: set[str], heldout_tokens: Sequence[str]) -> float:
    """Fraction of held-out token occurrences absent from the vocabulary."""
    if not heldout_tokens:
        raise ConfigError("oov_rate requires a non-empty held-out token list")
    missing = sum(1 for t in heldout_tokens if t not in vocab)
    return missing / len(heldout_tokens)


def fragmentation(model: SubwordModel, corpus_words: Sequence[str]) -> float:
    """Mean number of pieces per word occurrence."""
    if not corpus_words:
        raise ConfigError("fragmentation requires a non-empty word list")
    total = sum(len(model.encode_word(w).tokens) for w in corpus_words)
    return total / len(corpus_words)


def _visible_piece_len(model: SubwordModel, token: str) -> int:
    if model.algorithm == "wordpiece" and token.startswith(model.continuation_marker):
        return len(token) - len(model.continuation_marker)
    if model.algorithm == "bpe" and token.endswith(model.word_end_marker):
        return len(token) - len(model.word_end_marker)
    return len(token)


def compression_ratio(model: SubwordModel, texts: Iterable[str]) -> tuple[float, float]:
    """(char_ratio, token_ratio): original characters over emitted piece
    characters with markers excluded, and piece count over whitespace
    word count."""
    orig_chars = 0
    piece_chars = 0
    words = 0
    pieces = 0
    for text in texts:
        for word in unicodedata.normalize("NFC", text).split():
            words += 1
            orig_chars += len(word)
            seg = model.encode_word(word)
            pieces += len(seg.tokens)
            piece_chars += sum(_visible_piece_len(model, t) for t in seg.tokens)
    if words == 0:
        raise ConfigError("compression_ratio requires non-empty input")
    return orig_chars / piece_chars, pieces / words


def reconstruction_rate(model: SubwordModel, texts: Iterable[str]) -> float:
    """Fraction of documents whose whitespace-normalized text survives an
    encode/decode round trip exactly. Empty documents count as successes."""
    from .normalize import normalize_whitespace
    from .subword import decode, encode

    total = 0
    ok = 0
    for text in texts:
        total += 1
        reference = normalize_whitespace(unicodedata.normalize("NFC", text))
        if decode(model, encode(model, reference)) == reference:
            ok += 1
    if total == 0:
        return 1.0
    return ok / total


def zipf_points(freq_table: dict[str, int]) -> list[tuple[int, int, float, float]]:
    """(rank, count, log_rank, log_count) rows, ranked by descending count,
    ties by lexicographic token."""
    items = sorted(freq_table.items(), key=lambda kv: (-kv[1], kv[0]))
    rows = []
    rank = 0
    for token, count in items:
        if count < 1:
            continue
        rank += 1
        rows.append((rank, count, math.log(rank), math.log(count)))
    return rows


def zipf_fit(freq_table: dict[str, int]) -> ZipfFit:
    """Ordinary least squares of log(count) on log(rank)."""
    rows = zipf_points(freq_table)
    if len(rows) < 2:
        raise ConfigError("zipf_fit requires at least 2 distinct tokens")
    xs = [r[2] for r in rows]
    ys = [r[3] for r in rows]
    n = len(rows)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    sxx = sum((x - mean_x) ** 2 for x in xs)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = mean_y - slope * mean_x
    rmse = math.sqrt(sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys)) / n)
    return ZipfFit(slope=slope, intercept=intercept, rmse=rmse, points=n)


# -- method wrappers --------------------------------------------------------


@dataclass
class Method:
    """One comparable tokenization/normalization method.

    ``doc_tokens`` maps a document to its token list; ``word_output`` (when
    the method has a per-word form) feeds nest compression; ``reconstruct``
    rebuilds text from a document for the invertibility check.
    """

    name: str
    doc_tokens: Callable[[Document], list[str]]
    word_output: Optional[Callable[[str], Hashable]] = None
    reconstruct: Optional[Callable[[str], str]] = None
    model: Optional[SubwordModel] = None


def surface_method(
    name: str,
    tokenizer: Optional[SurfaceTokenizer] = None,
    stem_table: Optional[StemRuleTable] = None,
    lemma_map: Optional[LemmaMap] = None,
) -> Method:
    tok = tokenizer or SurfaceTokenizer()

    def normalize_token(t: str) -> str:
        if stem_table is not None:
            t = stem(t, stem_table)
        if lemma_map is not None:
            t = lemmatize(t, lemma_map)
        return t

    def doc_tokens(doc: Document) -> list[str]:
        return [normalize_token(t) for t in tokenize(doc.text, tok)]

    return Method(
        name=name,
        doc_tokens=doc_tokens,
        word_output=normalize_token,
        reconstruct=lambda text: " ".join(
            normalize_token(t) for t in tokenize(unicodedata.normalize("NFC", text), tok)
        ),
    )


def subword_method(name: str, model: SubwordModel) -> Method:
    from .subword import decode, encode

    def doc_tokens(doc: Document) -> list[str]:
        out: list[str] = []
        for word in doc.text.split():
            out.extend(model.encode_word(word).tokens)
        return out

    return Method(
        name=name,
        doc_tokens=doc_tokens,
        word_output=lambda word: tuple(model.encode_word(word).tokens),
        reconstruct=lambda text: decode(model, encode(model, text)),
        model=model,
    )


def external_method(name: str, tokens_by_doc: dict[str, list[str]]) -> Method:
    def doc_tokens(doc: Document) -> list[str]:
        if doc.id not in tokens_by_doc:
            raise ConfigError(f"external tokenization {name!r} lacks document {doc.id!r}")
        return list(tokens_by_doc[doc.id])

    return Method(name=name, doc_tokens=doc_tokens)


def load_nests(path: Union[str, Path]) -> list[LexemeNest]:
    """Load a nest list TSV: `lemma<TAB>form1,form2,...` per line."""
    nests = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ConfigError(f"nest line {line_no}: expected `lemma<TAB>forms`")
            forms = [f for f in parts[1].split(",") if f]
            nests.append(LexemeNest(lemma=parts[0], forms=forms))
    return nests


def load_external_tokenization(path: Union[str, Path]) -> dict[str, list[str]]:
    """Load a JSONL file of {doc_id, tokens} records."""
    import json

    mapping: dict[str, list[str]] = {}
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"external tokenization line {line_no}: {exc.msg}") from exc
            if "doc_id" not in rec or "tokens" not in rec:
                raise ConfigError(f"external tokenization line {line_no}: need doc_id and tokens")
            mapping[str(rec["doc_id"])] = [str(t) for t in rec["tokens"]]
    return mapping


# -- the comparison harness --------------------------------------------------


def _evaluate_method(
    method: Method,
    train_docs: list[Document],
    test_docs: list[Document],
    nests: Optional[Sequence[LexemeNest]],
) -> MethodReport:
    from .normalize import normalize_whitespace

    vocab: set[str] = set()
    for doc in train_docs:
        vocab.update(method.doc_tokens(doc))

    test_token_count = 0
    oov = 0
    piece_chars = 0
    for doc in test_docs:
        tokens = method.doc_tokens(doc)
        test_token_count += len(tokens)
        oov += sum(1 for t in tokens if t not in vocab)
        if method.model is not None:
            piece_chars += sum(_visible_piece_len(method.model, t) for t in tokens)
        else:
            piece_chars += sum(len(t) for t in tokens)

    ws_words = 0
    ws_chars = 0
    for doc in test_docs:
        for word in doc.text.split():
            ws_words += 1
            ws_chars += len(word)

    frag = None
    if method.model is not None:
        test_words = [w for doc in test_docs for w in doc.text.split()]
        frag = fragmentation(method.model, test_words) if test_words else None

    recon = None
    if method.reconstruct is not None:
        total = 0
        ok = 0
        for doc in test_docs:
            total += 1
            reference = normalize_whitespace(doc.text)
            if method.reconstruct(reference) == reference:
                ok += 1
        recon = ok / total if total else 1.0

    consistency = None
    if nests and method.word_output is not None:
        consistency = semantic_consistency(method.word_output, nests)

    # Warm run over a bounded slice, then the timed run.
    slice_docs: list[Document] = []
    slice_tokens = 0
    for doc in test_docs:
        slice_docs.append(doc)
        slice_tokens += doc.token_count()
        if slice_tokens >= _TIMING_TOKEN_BUDGET:
            break
    ms = None
    if slice_tokens:
        for doc in slice_docs:
            method.doc_tokens(doc)
        started = time.perf_counter()
        for doc in slice_docs:
            method.doc_tokens(doc)
        elapsed = time.perf_counter() - started
        ms = (elapsed * 1000.0) * (1_000_000 / slice_tokens)

    token_lengths = None
    if method.model is not None:
        token_lengths = {}
        for piece in method.model.vocab:
            if piece == method.model.unk_token:
                continue
            n = _visible_piece_len(method.model, piece)
            token_lengths[n] = token_lengths.get(n, 0) + 1
        token_lengths = dict(sorted(token_lengths.items()))

    return MethodReport(
        method_name=method.name,
        vocab_size=len(vocab),
        oov_rate=(oov / test_token_count) if test_token_count else 0.0,
        semantic_consistency=consistency,
        fragmentation=frag,
        char_compression=(ws_chars / piece_chars) if piece_chars else None,
        token_compression=(test_token_count / ws_words) if ws_words else None,
        reconstruction_rate=recon,
        ms_per_mtoken=ms,
        token_lengths=token_lengths,
    )


def compare_methods(
    corpus: Corpus,
    train_ids: Sequence[str],
    test_ids: Sequence[str],
    methods: Sequence[Method],
    nests: Optional[Sequence[LexemeNest]] = None,
) -> list[MethodReport]:
    """Evaluate every method on the given split; a failing method yields a
    row carrying its error message, other rows are unaffected."""
    overlap = set(train_ids) & set(test_ids)
    if overlap:
        raise LeakageError(
            f"split has {len(overlap)} shared ids (e.g. {sorted(overlap)[:3]}); "
            "refusing to evaluate on a leaking split"
        )
    docs = corpus.by_id()
    missing = [i for i in (*train_ids, *test_ids) if i not in docs]
    if missing:
        raise ConfigError(f"split references unknown ids: {sorted(set(missing))[:5]}")
    train_docs = [docs[i] for i in train_ids]
    test_docs = [docs[i] for i in test_ids]

    reports = []
    for method in methods:
        try:
            reports.append(_evaluate_method(method, train_docs, test_docs, nests))
        except Exception as exc:  # isolate failures to the method's row
            reports.append(MethodReport(method_name=method.name, error=str(exc)))
    return reports


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


def write_reports_csv(reports: Sequence[MethodReport], path: Union[str, Path]) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for report in reports:
            if report.error is not None:
                writer.writerow([report.method_name] + ["ERROR"] * (len(CSV_COLUMNS) - 1))
                continue
            writer.writerow(
                [
                    report.method_name,
                    _format_cell(report.vocab_size),
                    _format_cell(report.oov_rate),
                    _format_cell(report.semantic_consistency),
                    _format_cell(report.fragmentation),
                    _format_cell(report.char_compression),
                    _format_cell(report.token_compression),
                    _format_cell(report.reconstruction_rate),
                    _format_cell(report.ms_per_mtoken),
                ]
            )


def write_zipf_csv(rows: Sequence[tuple[int, int, float, float]], path: Union[str, Path]) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rank", "count", "log_rank", "log_count"])
        for rank, count, log_rank, log_count in rows:
            writer.writerow([rank, count, _format_cell(log_rank), _format_cell(log_count)])
