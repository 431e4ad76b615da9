"""Classical tokenizers, rule-table stemming, lemma-map lookup, and the
unified fit/transform preprocessor with versioned JSON serialization."""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import regex

from .errors import ConfigError, ModelFormatError, NotFittedError
from .normalize import CleanConfig, RuleSet, clean, standardize

PREPROCESSOR_FORMAT_VERSION = "1"


@dataclass
class SurfaceTokenizer:
    kind: str = "whitespace"  # whitespace | pattern
    pattern: Optional[str] = None

    def __post_init__(self) -> None:
        if self.kind not in ("whitespace", "pattern"):
            raise ConfigError(f"unknown tokenizer kind {self.kind!r}")
        if self.kind == "pattern":
            if not self.pattern:
                raise ConfigError("pattern tokenizer requires a pattern")
            try:
                self._compiled = regex.compile(self.pattern)
            except regex.error as exc:
                raise ConfigError(f"invalid tokenizer pattern: {exc}") from exc
        elif self.pattern is not None:
            raise ConfigError("whitespace tokenizer takes no pattern")

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.pattern is not None:
            d["pattern"] = self.pattern
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "SurfaceTokenizer":
        return cls(kind=data.get("kind", "whitespace"), pattern=data.get("pattern"))


def tokenize(text: str, tok: SurfaceTokenizer) -> list[str]:
    """Whitespace split, or all non-overlapping pattern matches in order."""
    if tok.kind == "whitespace":
        return text.split()
    return [m.group(0) for m in tok._compiled.finditer(text)]


@dataclass(frozen=True)
class StemRule:
    suffix: str
    replacement: str
    min_stem_len: int


class StemRuleTable:
    """Longest-suffix-first stemming rules; at most one rule fires per token.

    Load-time closure check: a non-empty replacement must not end with any
    rule's suffix (and no suffix may end with it), otherwise a second
    application could fire again and stem would not be idempotent.
    Re-matching caused by the token's own remaining characters cannot be
    detected statically; shipped tables are curated against it.
    """

    def __init__(self, language: str, rules: Sequence[StemRule]):
        for r in rules:
            if r.min_stem_len < 1:
                raise ConfigError(f"rule {r.suffix!r}: min_stem_len must be >= 1")
            if not r.suffix:
                raise ConfigError("empty suffix in stem rule")
        for r in rules:
            if not r.replacement:
                continue
            for other in rules:
                if r.replacement.endswith(other.suffix) or other.suffix.endswith(r.replacement):
                    raise ConfigError(
                        f"replacement {r.replacement!r} can re-trigger suffix "
                        f"{other.suffix!r}; table violates closure"
                    )
        self.language = language
        self.rules = sorted(rules, key=lambda r: -len(r.suffix))

    def to_dict(self) -> dict:
        return {
            "language": self.language,
            "rules": [
                {"suffix": r.suffix, "replacement": r.replacement, "min_stem_len": r.min_stem_len}
                for r in self.rules
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StemRuleTable":
        try:
            rules = [
                StemRule(r["suffix"], r.get("replacement", ""), int(r.get("min_stem_len", 1)))
                for r in data["rules"]
            ]
            return cls(data.get("language", "und"), rules)
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed stem table: {exc}") from exc


def load_stem_table(path: Union[str, Path]) -> StemRuleTable:
    with Path(path).open("r", encoding="utf-8") as fh:
        return StemRuleTable.from_dict(json.load(fh))


def stem(token: str, table: StemRuleTable) -> str:
    """Apply the first (longest-suffix) rule that matches and leaves a stem of
    at least min_stem_len characters; no match returns the token unchanged."""
    for rule in table.rules:
        if token.endswith(rule.suffix) and len(token) - len(rule.suffix) >= rule.min_stem_len:
            return token[: len(token) - len(rule.suffix)] + rule.replacement
    return token


class LemmaMap:
    """Exact surface-form -> lemma lookup; keys folded to NFC + lowercase.

    Closure check at load: a lemma that is itself a key must map to itself,
    so lemmatize(lemmatize(t)) == lemmatize(t).
    """

    def __init__(self, mapping: dict[str, str]):
        folded: dict[str, str] = {}
        for form, lemma in mapping.items():
            key = _fold(form)
            if key in folded and folded[key] != lemma:
                raise ConfigError(f"duplicate form after folding: {form!r}")
            folded[key] = lemma
        for lemma in folded.values():
            key = _fold(lemma)
            if key in folded and folded[key] != lemma:
                raise ConfigError(
                    f"lemma {lemma!r} is itself mapped to {folded[key]!r}; map violates closure"
                )
        self.mapping = folded

    def __len__(self) -> int:
        return len(self.mapping)

    def to_dict(self) -> dict[str, str]:
        return dict(self.mapping)


def _fold(token: str) -> str:
    return unicodedata.normalize("NFC", token).lower()


def load_lemma_map(path: Union[str, Path]) -> LemmaMap:
    """Load a TSV of `form<TAB>lemma` lines; blank lines and #-comments skipped."""
    mapping: dict[str, str] = {}
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ConfigError(f"lemma map line {line_no}: expected `form<TAB>lemma`")
            form, lemma = parts
            key = _fold(form)
            if key in mapping:
                raise ConfigError(f"lemma map line {line_no}: duplicate form {form!r}")
            mapping[key] = lemma
    return LemmaMap(mapping)


def lemmatize(token: str, lemma_map: LemmaMap) -> str:
    return lemma_map.mapping.get(_fold(token), token)


class Preprocessor:
    """Fitted clean -> standardize -> tokenize -> normalize (-> subword) pipeline.

    All learned state lives on the instance; transform is callable only after
    fit and is a pure function of (serialized state, input text).
    """

    def __init__(
        self,
        clean_config: Optional[CleanConfig] = None,
        rules: Optional[RuleSet] = None,
        tokenizer: Optional[SurfaceTokenizer] = None,
        stem_table: Optional[StemRuleTable] = None,
        lemma_map: Optional[LemmaMap] = None,
        subword_config: Optional[dict] = None,
    ):
        self.clean_config = clean_config
        self.rules = rules
        self.tokenizer = tokenizer or SurfaceTokenizer()
        self.stem_table = stem_table
        self.lemma_map = lemma_map
        self.subword_config = subword_config
        self.subword_model = None
        self.fitted = False

    @classmethod
    def from_config(cls, config: dict) -> "Preprocessor":
        """Build an unfitted preprocessor from a JSON-style stage config."""
        known = {"clean", "standardize", "tokenizer", "stem_table", "lemma_map", "subword"}
        unknown = set(config) - known
        if unknown:
            raise ConfigError(f"unknown preprocessor stages: {sorted(unknown)}")
        return cls(
            clean_config=CleanConfig.from_dict(config["clean"]) if "clean" in config else None,
            rules=RuleSet.from_list(config["standardize"]) if "standardize" in config else None,
            tokenizer=SurfaceTokenizer.from_dict(config.get("tokenizer", {"kind": "whitespace"})),
            stem_table=StemRuleTable.from_dict(config["stem_table"])
            if "stem_table" in config
            else None,
            lemma_map=LemmaMap(config["lemma_map"]) if "lemma_map" in config else None,
            subword_config=config.get("subword"),
        )

    def stage_config(self) -> dict:
        config: dict = {"tokenizer": self.tokenizer.to_dict()}
        if self.clean_config is not None:
            config["clean"] = self.clean_config.to_dict()
        if self.rules is not None:
            config["standardize"] = self.rules.to_list()
        if self.stem_table is not None:
            config["stem_table"] = self.stem_table.to_dict()
        if self.lemma_map is not None:
            config["lemma_map"] = self.lemma_map.to_dict()
        if self.subword_config is not None:
            config["subword"] = dict(self.subword_config)
        return config

    def _pre_tokens(self, text: str) -> list[str]:
        text = unicodedata.normalize("NFC", text)
        if self.clean_config is not None:
            text = clean(text, self.clean_config)
        if self.rules is not None:
            text = standardize(text, self.rules)
        tokens = tokenize(text, self.tokenizer)
        if self.stem_table is not None:
            tokens = [stem(t, self.stem_table) for t in tokens]
        if self.lemma_map is not None:
            tokens = [lemmatize(t, self.lemma_map) for t in tokens]
        return tokens

    def fit(self, texts: Iterable[str]) -> "Preprocessor":
        """Learn the pipeline state. ``texts`` must come from the train split only."""
        if self.subword_config is not None:
            from . import subword

            counts: dict[str, int] = {}
            for text in texts:
                for token in self._pre_tokens(text):
                    counts[token] = counts.get(token, 0) + 1
            cfg = subword.TrainConfig.from_dict(self.subword_config)
            self.subword_model = subword.train(counts, cfg)
        self.fitted = True
        return self

    def transform(self, text: str) -> list[str]:
        if not self.fitted:
            raise NotFittedError("transform() called before fit()")
        tokens = self._pre_tokens(text)
        if self.subword_model is None:
            return tokens
        from . import subword

        pieces: list[str] = []
        for token in tokens:
            for seg in subword.encode_word(self.subword_model, token):
                pieces.extend(seg.tokens)
        return pieces

    def save(self, path: Union[str, Path]) -> None:
        if not self.fitted:
            raise NotFittedError("cannot save an unfitted preprocessor")
        envelope = {
            "format_version": PREPROCESSOR_FORMAT_VERSION,
            "fitted": True,
            "stages": self.stage_config(),
            "subword_model": self.subword_model.to_dict() if self.subword_model else None,
        }
        with Path(path).open("w", encoding="utf-8") as fh:
            json.dump(envelope, fh, ensure_ascii=False, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Preprocessor":
        try:
            with Path(path).open("r", encoding="utf-8") as fh:
                envelope = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"corrupt preprocessor file: {exc.msg}") from exc
        if not isinstance(envelope, dict) or "format_version" not in envelope:
            raise ModelFormatError("not a preprocessor file: missing format_version")
        if envelope["format_version"] != PREPROCESSOR_FORMAT_VERSION:
            raise ModelFormatError(
                f"unsupported preprocessor format version {envelope['format_version']!r}; "
                f"this build reads version {PREPROCESSOR_FORMAT_VERSION!r}"
            )
        prep = cls.from_config(envelope.get("stages", {}))
        if envelope.get("subword_model") is not None:
            from . import subword

            prep.subword_model = subword.SubwordModel.from_dict(envelope["subword_model"])
        prep.fitted = bool(envelope.get("fitted"))
        return prep


def preprocessor_fit(texts: Iterable[str], config: dict) -> Preprocessor:
    """Convenience wrapper: build from config and fit on the train texts."""
    return Preprocessor.from_config(config).fit(texts)
