"""Built-in invariant checks behind the ``selftest`` subcommand.

A quick, dependency-free pass/fail sweep over the package's core contracts;
the full pytest suite is the authoritative verification.
"""

from __future__ import annotations

from ._rng import SplitMix64
from .corpus import Corpus, Document, SplitSpec, split_corpus, verify_split
from .corruptor import CorruptionRule, CorruptionRuleSet, corrupt
from .metrics import LexemeNest, nest_compression, zipf_fit
from .normalize import CleanConfig, clean
from .subword import TrainConfig, decode, encode, train


def _random_htmlish(rng: SplitMix64) -> str:
    atoms = [
        "word", "слово", "x1", "<p>", "</p>", "<b>", "</b>", "&amp;", "&lt;",
        "  ", "\t", "\n", "UPPER", "ПрОбА", "<script>v=1</script>", "a&b",
        "<div class='x'>", "&nbsp;", "tail", "middle<br>",
    ]
    n = 1 + rng.randbelow(20)
    return "".join(atoms[rng.randbelow(len(atoms))] for _ in range(n))


def _check_clean_idempotent() -> bool:
    rng = SplitMix64(7)
    config = CleanConfig(lowercase=True, preserve_patterns=[r"\b[A-ZА-Я]{2,}\b"])
    for _ in range(200):
        text = _random_htmlish(rng)
        once = clean(text, config)
        if clean(once, config) != once:
            return False
    return True


def _check_split_disjoint() -> bool:
    rng = SplitMix64(11)
    for trial in range(50):
        n = 2 + rng.randbelow(40)
        docs = [
            Document(id=f"d{i}", text=f"tok{i} tok{(i * 7) % n}", source="s", language="ru")
            for i in range(n)
        ]
        corpus = Corpus(docs)
        spec = SplitSpec(seed=trial, test_fraction="0.25")
        train_ids, test_ids = split_corpus(corpus, spec)
        if set(train_ids) & set(test_ids):
            return False
        if set(train_ids) | set(test_ids) != {d.id for d in docs}:
            return False
        report = verify_split(corpus, train_ids, test_ids, vocab=set())
        if report.id_intersection:
            return False
    return True


def _check_bpe_roundtrip() -> bool:
    freqs = {"alpha": 4, "beta": 3, "alps": 2, "bet": 2}
    model = train(freqs, TrainConfig(algorithm="bpe", vocab_size=40, min_frequency=1))
    for text in ("alpha beta", "bet alps alpha", "alpha alpha"):
        if decode(model, encode(model, text)) != text:
            return False
    return True


def _check_nest_bounds() -> bool:
    rng = SplitMix64(23)
    for _ in range(100):
        n_forms = 2 + rng.randbelow(6)
        forms = [f"form{i}_{rng.randbelow(1000)}" for i in range(n_forms)]
        if len(set(forms)) != len(forms):
            continue
        nest = LexemeNest(lemma="lemma", forms=forms)
        c_identity = nest_compression(lambda t: t, nest)
        c_const = nest_compression(lambda t: "stem", nest)
        if not (abs(c_identity - 1.0) < 1e-12 and abs(c_const - 1 / len(forms)) < 1e-12):
            return False
    return True


def _check_corruptor_accounting() -> bool:
    rules = CorruptionRuleSet(
        language="und",
        rules=[
            CorruptionRule(name="omit", kind="omit_random", rationale="drop one letter"),
            CorruptionRule(name="dup", kind="duplicate_random", rationale="double one letter"),
        ],
    )
    text = "alpha beta gamma delta epsilon zeta"
    result_a = corrupt(text, rules, 0.5, seed=99)
    result_b = corrupt(text, rules, 0.5, seed=99)
    if result_a.text != result_b.text:
        return False
    original = text.split(" ")
    mutated = result_a.text.split(" ")
    if len(original) != len(mutated):
        return False
    changed = sum(1 for a, b in zip(original, mutated) if a != b)
    return changed == 3  # ceil(0.5 * 6)


def _check_zipf_exact() -> bool:
    table = {f"t{r}": round(100_000 / r) for r in range(1, 2001)}
    fit = zipf_fit(table)
    return abs(fit.slope + 1.0) < 0.02


def run_selftest() -> list[tuple[str, bool]]:
    checks = [
        ("cleaner idempotency (200 random html-ish strings)", _check_clean_idempotent),
        ("split disjointness and leakage detection (50 corpora)", _check_split_disjoint),
        ("bpe encode/decode round trip", _check_bpe_roundtrip),
        ("nest compression anchors and bounds", _check_nest_bounds),
        ("corruptor determinism and exact ratio accounting", _check_corruptor_accounting),
        ("zipf slope on an exact 1/r table", _check_zipf_exact),
    ]
    results = []
    for name, check in checks:
        try:
            ok = check()
        except Exception:
            ok = False
        results.append((name, ok))
    return results
