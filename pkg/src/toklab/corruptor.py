"""Controlled, language-aware typo injection with exact accounting.

Each selected word receives exactly one rule application at one site, so a
word-level diff of input and output counts exactly ceil(ratio * eligible)
changed positions. Word boundaries are never touched: splitting the
corrupted text yields the same number of words as the original.

The per-call random stream is splitmix64(seed); corpus corruption derives a
per-document sub-seed as mix64(seed XOR fnv1a64(id)), so document order does
not matter and documents can be processed in parallel.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

import regex

from ._rng import SplitMix64, fisher_yates, fnv1a64, mix64
from .corpus import Corpus
from .errors import ConfigError, LeakageError

RULE_KINDS = (
    "delete_char",
    "insert_char",
    "substitute",
    "transpose_adjacent",
    "omit_random",
    "duplicate_random",
)


@dataclass
class CorruptionRule:
    name: str
    kind: str
    params: dict = field(default_factory=dict)
    rationale: str = ""

    def __post_init__(self) -> None:
        if self.kind not in RULE_KINDS:
            raise ConfigError(f"rule {self.name!r}: unknown kind {self.kind!r}")
        if not self.rationale:
            raise ConfigError(f"rule {self.name!r}: missing rationale")
        self._condition = None
        if self.kind in ("delete_char", "insert_char"):
            char = self.params.get("char")
            if not isinstance(char, str) or len(char) != 1:
                raise ConfigError(f"rule {self.name!r}: params.char must be a single character")
            condition = self.params.get("condition")
            if condition is not None:
                try:
                    self._condition = regex.compile(condition)
                except regex.error as exc:
                    raise ConfigError(f"rule {self.name!r}: bad condition pattern: {exc}") from exc
        elif self.kind == "substitute":
            mapping = self.params.get("map")
            if not isinstance(mapping, dict) or not mapping:
                raise ConfigError(f"rule {self.name!r}: params.map must be a non-empty object")
            for src, dst in mapping.items():
                if len(src) != 1 or not isinstance(dst, str) or len(dst) != 1:
                    raise ConfigError(
                        f"rule {self.name!r}: map entries must be single characters"
                    )

    def sites(self, word: str) -> list[int]:
        """Positions where this rule can change the word; empty if inapplicable."""
        if self.kind == "delete_char":
            char = self.params["char"]
            positions = [i for i, c in enumerate(word) if c == char]
            return self._within_condition(word, positions)
        if self.kind == "insert_char":
            if self._condition is not None:
                return sorted({m.end() for m in self._condition.finditer(word)})
            return list(range(len(word) + 1))
        if self.kind == "substitute":
            mapping = self.params["map"]
            return [i for i, c in enumerate(word) if c in mapping and mapping[c] != c]
        if self.kind == "transpose_adjacent":
            return [i for i in range(len(word) - 1) if word[i] != word[i + 1]]
        # omit_random / duplicate_random: any position changes the word
        return list(range(len(word)))

    def _within_condition(self, word: str, positions: list[int]) -> list[int]:
        if self._condition is None:
            return positions
        spans = [(m.start(), m.end()) for m in self._condition.finditer(word)]
        return [i for i in positions if any(lo <= i < hi for lo, hi in spans)]

    def apply(self, word: str, site: int) -> str:
        if self.kind == "delete_char" or self.kind == "omit_random":
            return word[:site] + word[site + 1:]
        if self.kind == "insert_char":
            return word[:site] + self.params["char"] + word[site:]
        if self.kind == "substitute":
            return word[:site] + self.params["map"][word[site]] + word[site + 1:]
        if self.kind == "transpose_adjacent":
            return word[:site] + word[site + 1] + word[site] + word[site + 2:]
        # duplicate_random
        return word[: site + 1] + word[site] + word[site + 1:]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "params": self.params,
            "rationale": self.rationale,
        }


@dataclass
class CorruptionRuleSet:
    language: str
    rules: list[CorruptionRule]
    min_word_len: int = 2

    def __post_init__(self) -> None:
        if not self.rules:
            raise ConfigError("rule set must contain at least one rule")
        if self.min_word_len < 1:
            raise ConfigError("min_word_len must be >= 1")
        names = [r.name for r in self.rules]
        if len(names) != len(set(names)):
            raise ConfigError("duplicate rule names in rule set")

    def applicable(self, word: str) -> list[CorruptionRule]:
        if len(word) < self.min_word_len:
            return []
        return [r for r in self.rules if r.sites(word)]

    def to_dict(self) -> dict:
        return {
            "language": self.language,
            "min_word_len": self.min_word_len,
            "rules": [r.to_dict() for r in self.rules],
        }


@dataclass
class CorruptionResult:
    text: str
    corrupted_indices: list[int]
    ratio_requested: float
    ratio_actual: float
    seed: int
    warning: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "corrupted_indices": self.corrupted_indices,
            "ratio_requested": self.ratio_requested,
            "ratio_actual": self.ratio_actual,
            "seed": self.seed,
            "warning": self.warning,
        }


def load_corruption_rules(path: Union[str, Path]) -> CorruptionRuleSet:
    """Load a rule file: {language, min_word_len, rules:[{name, kind, params, rationale}]}."""
    with Path(path).open("r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"rule file is not valid JSON: {exc.msg}") from exc
    return ruleset_from_dict(data)


def ruleset_from_dict(data: dict) -> CorruptionRuleSet:
    if not isinstance(data, dict):
        raise ConfigError("rule file must hold a JSON object")
    raw_rules = data.get("rules")
    if not isinstance(raw_rules, list) or not raw_rules:
        raise ConfigError("rule file must declare a non-empty 'rules' array")
    rules = []
    for i, item in enumerate(raw_rules):
        if not isinstance(item, dict):
            raise ConfigError(f"rule #{i}: expected an object")
        rules.append(
            CorruptionRule(
                name=str(item.get("name", f"rule-{i}")),
                kind=str(item.get("kind", "")),
                params=item.get("params", {}),
                rationale=str(item.get("rationale", "")),
            )
        )
    return CorruptionRuleSet(
        language=str(data.get("language", "und")),
        rules=rules,
        min_word_len=int(data.get("min_word_len", 2)),
    )


def _exact_ceil(ratio: Union[float, str, Fraction], n: int) -> int:
    frac = Fraction(str(ratio)) if isinstance(ratio, float) else Fraction(ratio)
    if not (0 < frac <= 1):
        raise ValueError(f"ratio must be in (0,1], got {ratio}")
    return -((-frac.numerator * n) // frac.denominator)


def corrupt(
    text: str,
    rules: CorruptionRuleSet,
    ratio: Union[float, str, Fraction],
    seed: int,
) -> CorruptionResult:
    """Inject exactly ceil(ratio * eligible) single-rule typos into the text.

    Eligible words are those of at least min_word_len characters that at
    least one rule can change. Selection is a seeded Fisher-Yates draw,
    then one uniformly chosen applicable rule is applied at one uniformly
    chosen valid site per selected word. Deterministic in
    (text, rules, ratio, seed).
    """
    ratio_value = float(Fraction(str(ratio)) if isinstance(ratio, float) else Fraction(ratio))
    words = text.split(" ") if text else []
    eligible = [i for i, w in enumerate(words) if rules.applicable(w)]
    if not eligible:
        return CorruptionResult(
            text=text,
            corrupted_indices=[],
            ratio_requested=ratio_value,
            ratio_actual=0.0,
            seed=seed,
            warning="no eligible words",
        )
    k = _exact_ceil(ratio, len(eligible))
    rng = SplitMix64(seed)
    order = list(eligible)
    fisher_yates(order, rng)
    selected = order[:k]

    out = list(words)
    for pos in selected:
        word = words[pos]
        applicable = rules.applicable(word)
        rule = applicable[rng.randbelow(len(applicable))]
        sites = rule.sites(word)
        out[pos] = rule.apply(word, sites[rng.randbelow(len(sites))])

    return CorruptionResult(
        text=" ".join(out),
        corrupted_indices=sorted(selected),
        ratio_requested=ratio_value,
        ratio_actual=k / len(eligible),
        seed=seed,
    )


def corrupt_corpus(
    corpus: Corpus,
    rules: CorruptionRuleSet,
    ratio: Union[float, str, Fraction],
    seed: int,
    allowed_test_ids: Optional[set[str]] = None,
) -> Corpus:
    """Corrupt every document's text; adds the mandatory ``corruption_ratio``
    field. When a split manifest is supplied, refuses documents outside the
    test split."""
    if allowed_test_ids is not None:
        offenders = [d.id for d in corpus.documents if d.id not in allowed_test_ids]
        if offenders:
            raise LeakageError(
                f"documents {sorted(offenders)[:5]} are not in the test split; "
                "corruption is restricted to the test set to prevent leakage"
            )
    ratio_value = float(Fraction(str(ratio)) if isinstance(ratio, float) else Fraction(ratio))
    documents = []
    for doc in corpus.documents:
        sub_seed = mix64(seed ^ fnv1a64(doc.id))
        result = corrupt(doc.text, rules, ratio, sub_seed)
        extra = dict(doc.extra)
        extra["corruption_ratio"] = ratio_value
        documents.append(replace(doc, text=result.text, extra=extra))
    return Corpus(documents)
