"""Text cleaning and marker standardization.

The cleaner is tolerant by design: markup stripping is scanner-based, never
parses HTML fully, and never raises on malformed input. ``clean`` iterates
its stage pipeline until the text stops changing, which makes the whole
operation idempotent by construction (clean(clean(t)) == clean(t)) even on
inputs where one pass would reveal new entities or tags.
"""

from __future__ import annotations

import html
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import regex

from .errors import ConfigError

_SCRIPT_RE = regex.compile(r"<(script|style)\b[^>]*>.*?</\1\s*>", regex.IGNORECASE | regex.DOTALL)
_COMMENT_RE = regex.compile(r"<!--.*?-->", regex.DOTALL)
_TAG_RE = regex.compile(r"<[^>]*>")
_WS_RE = regex.compile(r"\s+")

STOPWORD_STAGES = ("before_normalization", "after_normalization", "off")

# Hard cap on pipeline fixpoint iterations; real text converges in <= 3.
_MAX_PASSES = 100


@dataclass
class CleanConfig:
    strip_markup: bool = True
    lowercase: bool = False
    preserve_patterns: list[str] = field(default_factory=list)
    stopwords: set[str] = field(default_factory=set)
    stopword_stage: str = "off"

    def __post_init__(self) -> None:
        if self.stopword_stage not in STOPWORD_STAGES:
            raise ConfigError(
                f"stopword_stage must be one of {STOPWORD_STAGES}, got {self.stopword_stage!r}"
            )
        self.stopwords = {w.lower() for w in self.stopwords}
        self._compiled = []
        for pat in self.preserve_patterns:
            try:
                self._compiled.append(regex.compile(pat))
            except regex.error as exc:
                raise ConfigError(f"invalid preserve pattern {pat!r}: {exc}") from exc

    @classmethod
    def from_dict(cls, data: dict) -> "CleanConfig":
        unknown = set(data) - {
            "strip_markup",
            "lowercase",
            "preserve_patterns",
            "stopwords",
            "stopword_stage",
        }
        if unknown:
            raise ConfigError(f"unknown clean config keys: {sorted(unknown)}")
        return cls(
            strip_markup=bool(data.get("strip_markup", True)),
            lowercase=bool(data.get("lowercase", False)),
            preserve_patterns=list(data.get("preserve_patterns", [])),
            stopwords=set(data.get("stopwords", [])),
            stopword_stage=data.get("stopword_stage", "off"),
        )

    def to_dict(self) -> dict:
        return {
            "strip_markup": self.strip_markup,
            "lowercase": self.lowercase,
            "preserve_patterns": list(self.preserve_patterns),
            "stopwords": sorted(self.stopwords),
            "stopword_stage": self.stopword_stage,
        }


@dataclass(frozen=True)
class Rule:
    name: str
    pattern: str
    marker: str


class RuleSet:
    """Ordered standardization rules; application order is declaration order."""

    def __init__(self, rules: list[Rule]):
        names = [r.name for r in rules]
        if len(names) != len(set(names)):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ConfigError(f"duplicate rule names: {dupes}")
        self.rules = list(rules)
        self._compiled = []
        for rule in self.rules:
            try:
                self._compiled.append(regex.compile(rule.pattern))
            except regex.error as exc:
                raise ConfigError(f"rule {rule.name!r}: invalid pattern: {exc}") from exc
        # Markers must be fixed points of the rule set, otherwise repeated
        # standardization would keep rewriting its own output.
        for rule in self.rules:
            for other, compiled in zip(self.rules, self._compiled):
                if compiled.search(rule.marker):
                    raise ConfigError(
                        f"marker {rule.marker!r} of rule {rule.name!r} matches "
                        f"pattern of rule {other.name!r}; markers must not match any rule"
                    )

    def __len__(self) -> int:
        return len(self.rules)

    def to_list(self) -> list[dict]:
        return [{"name": r.name, "pattern": r.pattern, "marker": r.marker} for r in self.rules]

    @classmethod
    def from_list(cls, data: list) -> "RuleSet":
        if not isinstance(data, list):
            raise ConfigError("rule config must be a JSON array")
        rules = []
        for i, item in enumerate(data):
            if not isinstance(item, dict):
                raise ConfigError(f"rule #{i}: expected an object")
            missing = {"name", "pattern", "marker"} - set(item)
            if missing:
                name = item.get("name", f"#{i}")
                raise ConfigError(f"rule {name!r}: missing keys {sorted(missing)}")
            rules.append(Rule(str(item["name"]), str(item["pattern"]), str(item["marker"])))
        return cls(rules)


def load_rules(path: Union[str, Path]) -> RuleSet:
    """Load standardization rules from a JSON array of {name, pattern, marker}."""
    with Path(path).open("r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"rule file is not valid JSON: {exc.msg}") from exc
    return RuleSet.from_list(data)


def standardize(text: str, rules: RuleSet) -> str:
    """Replace every non-overlapping match of each rule with its marker, in order."""
    for rule, compiled in zip(rules.rules, rules._compiled):
        text = compiled.sub(rule.marker, text)
    return text


def strip_markup(text: str) -> str:
    """Remove residual markup: script/style elements with their content,
    comments, tag spans, and decode character entities.

    Runs to a fixed point, so entity-encoded markup revealed by decoding is
    stripped too and the result contains no decodable entity or tag span.
    """
    for _ in range(_MAX_PASSES):
        before = text
        text = _SCRIPT_RE.sub("", text)
        text = _COMMENT_RE.sub("", text)
        text = _TAG_RE.sub("", text)
        text = html.unescape(text)
        if text == before:
            return text
    return text


def normalize_whitespace(text: str) -> str:
    """Collapse every run of Unicode whitespace to one space and trim the ends."""
    return _WS_RE.sub(" ", text).strip()


def _filter_stopwords(text: str, stopwords: set[str]) -> str:
    if not stopwords or not text:
        return text
    return " ".join(t for t in text.split(" ") if t.lower() not in stopwords)


def _lowercase_preserving(text: str, config: CleanConfig) -> str:
    if not config._compiled:
        return text.lower()
    keep = [False] * len(text)
    for compiled in config._compiled:
        for m in compiled.finditer(text):
            for i in range(m.start(), m.end()):
                keep[i] = True
    out = []
    for i, ch in enumerate(text):
        out.append(ch if keep[i] else ch.lower())
    return "".join(out)


def _clean_pass(text: str, config: CleanConfig) -> str:
    if config.strip_markup:
        text = strip_markup(text)
    text = normalize_whitespace(text)
    if config.stopword_stage == "before_normalization":
        text = _filter_stopwords(text, config.stopwords)
    if config.lowercase:
        text = _lowercase_preserving(text, config)
    if config.stopword_stage == "after_normalization":
        text = _filter_stopwords(text, config.stopwords)
    return text


def clean(text: str, config: Optional[CleanConfig] = None) -> str:
    """Full cleaning pipeline: markup removal, whitespace collapse, staged
    stop-word filtering, conditional lowercasing with preserve patterns.

    The stage list is iterated until the output stops changing, so the
    result is always a fixed point: clean(clean(t)) == clean(t).
    """
    if config is None:
        config = CleanConfig()
    for _ in range(_MAX_PASSES):
        after = _clean_pass(text, config)
        if after == text:
            return after
        text = after
    return text
