import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toklab.errors import ConfigError
from toklab.normalize import (
    CleanConfig,
    RuleSet,
    clean,
    load_rules,
    normalize_whitespace,
    standardize,
    strip_markup,
)


class TestStripMarkup:
    def test_tags_removed(self):
        assert strip_markup("<p>Hi <b>x</b></p>") == "Hi x"

    def test_entity_decoded(self):
        assert strip_markup("a &amp; b") == "a & b"

    def test_script_content_removed(self):
        assert strip_markup("<script>v=1</script>ok") == "ok"

    def test_style_and_comments_removed(self):
        assert strip_markup("<style>p{}</style>a<!-- hidden -->b") == "ab"

    def test_malformed_markup_best_effort(self):
        assert strip_markup("<unclosed hello") == "<unclosed hello"

    def test_entity_encoded_markup_stripped_at_fixpoint(self):
        # decoding reveals a tag; one more pass must strip it
        assert strip_markup("&lt;b&gt;bold&lt;/b&gt;") == "bold"


class TestNormalizeWhitespace:
    def test_mixed_whitespace(self):
        assert normalize_whitespace("a\t b\n\nc") == "a b c"

    def test_trim(self):
        assert normalize_whitespace("  x  ") == "x"

    def test_empty(self):
        assert normalize_whitespace("") == ""

    def test_no_double_spaces(self):
        out = normalize_whitespace("a    b\r\n c")
        assert "  " not in out


class TestClean:
    def test_preserved_abbreviation(self):
        config = CleanConfig(lowercase=True, preserve_patterns=[r"\b[A-ZА-Я]{2,}\b"])
        assert clean("<p>СССР wins</p>", config) == "СССР wins"

    def test_stopwords_after_normalization(self):
        config = CleanConfig(lowercase=True, stopwords={"and"}, stopword_stage="after_normalization")
        assert clean("cats AND dogs", config) == "cats dogs"

    def test_stopword_stage_off(self):
        config = CleanConfig(stopwords={"and"}, stopword_stage="off")
        assert clean("cats and dogs", config) == "cats and dogs"

    def test_stopwords_before_normalization(self):
        config = CleanConfig(
            lowercase=True, stopwords={"и"}, stopword_stage="before_normalization"
        )
        assert clean("кошки И собаки", config) == "кошки собаки"

    def test_invalid_pattern_rejected(self):
        with pytest.raises(ConfigError):
            CleanConfig(preserve_patterns=["("])

    def test_invalid_stage_rejected(self):
        with pytest.raises(ConfigError):
            CleanConfig(stopword_stage="sometimes")

    def test_config_round_trip(self):
        config = CleanConfig(lowercase=True, stopwords={"и", "в"}, stopword_stage="off")
        assert CleanConfig.from_dict(config.to_dict()) == config


_htmlish_atom = st.sampled_from(
    [
        "word", "слово", "UPPER", "ПрОбА", "x1",
        "<p>", "</p>", "<b>", "<div class='a'>", "<br>",
        "<script>var x = 1;</script>", "<style>p { }</style>", "<!-- note -->",
        "&amp;", "&lt;", "&gt;", "&amp;lt;", "&nbsp;",
        " ", "  ", "\t", "\n", "<", ">", "&",
    ]
)


@st.composite
def htmlish(draw):
    return "".join(draw(st.lists(_htmlish_atom, max_size=30)))


class TestCleanIdempotency:
    CONFIGS = [
        CleanConfig(),
        CleanConfig(lowercase=True),
        CleanConfig(lowercase=True, preserve_patterns=[r"\b[A-ZА-Я]{2,}\b"]),
        CleanConfig(lowercase=True, stopwords={"and", "и"}, stopword_stage="after_normalization"),
        CleanConfig(stopwords={"and", "и"}, stopword_stage="before_normalization"),
    ]

    @settings(max_examples=300, deadline=None)
    @given(text=htmlish())
    def test_idempotent_on_htmlish(self, text):
        for config in self.CONFIGS:
            once = clean(text, config)
            assert clean(once, config) == once

    @settings(max_examples=200, deadline=None)
    @given(text=st.text(max_size=200))
    def test_idempotent_on_arbitrary_text(self, text):
        config = CleanConfig(lowercase=True)
        once = clean(text, config)
        assert clean(once, config) == once

    @settings(max_examples=300, deadline=None)
    @given(text=htmlish())
    def test_never_adds_scalars_except_entity_decoding(self, text):
        # entity decoding can only shrink; on entity-free input the
        # non-whitespace scalar count must never grow
        if "&" in text:
            return
        config = CleanConfig(lowercase=True)
        before = sum(1 for c in text if not c.isspace())
        after = sum(1 for c in clean(text, config) if not c.isspace())
        assert after <= before


class TestRules:
    def rules(self):
        return RuleSet.from_list(
            [
                {"name": "url", "pattern": r"https?://\S+", "marker": "<URL>"},
                {"name": "email", "pattern": r"[\w.+-]+@[\w-]+\.\w+", "marker": "<EMAIL>"},
                {"name": "number", "pattern": r"(?<!\S)\d+(?!\S)", "marker": "<NUMBER>"},
            ]
        )

    def test_load_order_preserved(self, tmp_path):
        path = tmp_path / "rules.json"
        path.write_text(
            json.dumps(
                [
                    {"name": "url", "pattern": r"https?://\S+", "marker": "<URL>"},
                    {"name": "email", "pattern": r"[\w.+-]+@[\w-]+\.\w+", "marker": "<EMAIL>"},
                ]
            ),
            encoding="utf-8",
        )
        ruleset = load_rules(path)
        assert [r.name for r in ruleset.rules] == ["url", "email"]

    def test_duplicate_name_rejected(self):
        with pytest.raises(ConfigError, match="duplicate"):
            RuleSet.from_list(
                [
                    {"name": "a", "pattern": "x", "marker": "<X>"},
                    {"name": "a", "pattern": "y", "marker": "<Y>"},
                ]
            )

    def test_empty_ruleset_is_identity(self):
        empty = RuleSet.from_list([])
        assert standardize("anything 42", empty) == "anything 42"

    def test_url_marker(self):
        assert standardize("see http://x.y now", self.rules()) == "see <URL> now"

    def test_email_and_number(self):
        assert standardize("a@b.c wrote 42", self.rules()) == "<EMAIL> wrote <NUMBER>"

    def test_no_match_identity(self):
        assert standardize("plain text", self.rules()) == "plain text"

    def test_marker_matching_rule_rejected(self):
        with pytest.raises(ConfigError, match="marker"):
            RuleSet.from_list([{"name": "num", "pattern": r"\d+", "marker": "x1"}])

    def test_standardize_idempotent(self):
        rules = self.rules()
        text = "see http://x.y or mail a@b.c about 42 things"
        once = standardize(text, rules)
        assert standardize(once, rules) == once

    def test_shipped_default_rules(self):
        from importlib.resources import files

        ruleset = RuleSet.from_list(
            json.loads(files("toklab.data").joinpath("standardize_rules.json").read_text("utf-8"))
        )
        out = standardize("пиши на a@b.ru или смотри https://x.y/z, цена 1500", ruleset)
        assert out == "пиши на <EMAIL> или смотри <URL> цена <NUMBER>"
