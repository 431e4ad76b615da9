import pytest

from toklab.errors import ConfigError, ModelFormatError, NotFittedError
from toklab.surface import (
    LemmaMap,
    Preprocessor,
    StemRule,
    StemRuleTable,
    SurfaceTokenizer,
    lemmatize,
    load_lemma_map,
    load_stem_table,
    stem,
    tokenize,
)


class TestTokenize:
    def test_whitespace(self):
        assert tokenize("a b  c", SurfaceTokenizer()) == ["a", "b", "c"]

    def test_pattern(self):
        tok = SurfaceTokenizer(kind="pattern", pattern=r"[\p{L}\p{N}-]+")
        assert tokenize("x-1, y", tok) == ["x-1", "y"]

    def test_empty(self):
        assert tokenize("", SurfaceTokenizer()) == []

    def test_invalid_pattern(self):
        with pytest.raises(ConfigError):
            SurfaceTokenizer(kind="pattern", pattern="(")

    def test_pattern_required(self):
        with pytest.raises(ConfigError):
            SurfaceTokenizer(kind="pattern")


RU_TABLE = StemRuleTable("ru", [StemRule("и", "", 3)])


class TestStem:
    def test_rule_applies(self):
        assert stem("кошки", RU_TABLE) == "кошк"

    def test_stem_too_short_guard(self):
        assert stem("да", RU_TABLE) == "да"

    def test_no_match_identity(self):
        assert stem("стол", RU_TABLE) == "стол"

    def test_longest_suffix_first(self):
        table = StemRuleTable("ru", [StemRule("и", "", 2), StemRule("ами", "", 2)])
        assert stem("книгами", table) == "книг"

    def test_never_longer_never_empty(self):
        table = load_stem_table_from_data("stem_ru.json")
        for token in ["кошками", "столов", "книгу", "а", "бы", "писать"]:
            out = stem(token, table)
            assert out
            assert len(out) <= len(token)

    def test_closure_violation_rejected(self):
        with pytest.raises(ConfigError, match="closure"):
            StemRuleTable("xx", [StemRule("ss", "s", 1), StemRule("s", "", 2)])

    def test_shipped_tables_idempotent_on_wordlist(self):
        ru = load_stem_table_from_data("stem_ru.json")
        en = load_stem_table_from_data("stem_en.json")
        ru_words = ["кошки", "кошками", "столов", "домах", "синий", "писать", "книгу"]
        en_words = ["cats", "walked", "walking", "ladies", "dogs", "dog"]
        for table, words in ((ru, ru_words), (en, en_words)):
            for w in words:
                once = stem(w, table)
                assert stem(once, table) == once


def load_stem_table_from_data(name):
    import json
    from importlib.resources import files

    return StemRuleTable.from_dict(
        json.loads(files("toklab.data").joinpath(name).read_text("utf-8"))
    )


class TestLemmatize:
    def test_case_folded_hit(self):
        lm = LemmaMap({"кошки": "кошка"})
        assert lemmatize("Кошки", lm) == "кошка"

    def test_miss_identity(self):
        lm = LemmaMap({"кошки": "кошка"})
        assert lemmatize("собаки", lm) == "собаки"

    def test_empty_map_identity(self):
        lm = LemmaMap({})
        assert lemmatize("кошки", lm) == "кошки"

    def test_idempotent(self):
        lm = LemmaMap({"кошки": "кошка", "кошке": "кошка"})
        for token in ("кошки", "кошке", "кошка", "другое"):
            assert lemmatize(lemmatize(token, lm), lm) == lemmatize(token, lm)

    def test_closure_violation_rejected(self):
        # value 'b' is itself a key mapping to something else
        with pytest.raises(ConfigError, match="closure"):
            LemmaMap({"a": "b", "b": "c"})

    def test_tsv_loader(self, tmp_path):
        path = tmp_path / "lemmas.tsv"
        path.write_text("# comment\nкошки\tкошка\nсобаки\tсобака\n", encoding="utf-8")
        lm = load_lemma_map(path)
        assert len(lm) == 2

    def test_tsv_duplicate_rejected(self, tmp_path):
        path = tmp_path / "lemmas.tsv"
        path.write_text("кошки\tкошка\nКОШКИ\tкот\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="duplicate"):
            load_lemma_map(path)

    def test_shipped_sample_loads(self):
        from importlib.resources import files

        with files("toklab.data").joinpath("lemma_ru_sample.tsv").open("rb") as fh:
            import tempfile, pathlib

            data = fh.read()
        path = pathlib.Path(tempfile.mkdtemp()) / "lemma.tsv"
        path.write_bytes(data)
        lm = load_lemma_map(path)
        assert lemmatize("шла", lm) == "идти"


BASIC_CONFIG = {
    "clean": {"strip_markup": True, "lowercase": False},
    "tokenizer": {"kind": "whitespace"},
}


class TestPreprocessor:
    def test_fit_then_transform(self):
        prep = Preprocessor.from_config(BASIC_CONFIG).fit(["a b", "c"])
        assert prep.transform("<b>a</b> b") == ["a", "b"]

    def test_transform_before_fit_raises(self):
        prep = Preprocessor.from_config(BASIC_CONFIG)
        with pytest.raises(NotFittedError):
            prep.transform("x")

    def test_transform_deterministic(self):
        prep = Preprocessor.from_config(BASIC_CONFIG).fit(["x"])
        assert prep.transform("a b c") == prep.transform("a b c")

    def test_stem_stage(self):
        config = dict(BASIC_CONFIG)
        config["stem_table"] = {"language": "ru", "rules": [{"suffix": "и", "min_stem_len": 3}]}
        prep = Preprocessor.from_config(config).fit([])
        assert prep.transform("кошки") == ["кошк"]

    def test_subword_stage_trains_on_fit(self, small_texts):
        config = {
            "tokenizer": {"kind": "whitespace"},
            "subword": {"algorithm": "bpe", "vocab_size": 100, "min_frequency": 1},
        }
        prep = Preprocessor.from_config(config).fit(small_texts[:20])
        assert prep.subword_model is not None
        assert prep.subword_model.vocab_size <= 100 + 1  # one special token
        out = prep.transform(small_texts[0])
        assert out and all(isinstance(t, str) for t in out)

    def test_fit_matches_directly_trained_model(self, small_texts):
        # fitting must train exactly the model the subword module would
        # produce on the same word counts
        from toklab import subword

        config = {
            "tokenizer": {"kind": "whitespace"},
            "subword": {"algorithm": "bpe", "vocab_size": 100, "min_frequency": 1},
        }
        texts = small_texts[:3]
        prep = Preprocessor.from_config(config).fit(texts)
        freqs = subword.count_words(texts)
        reference = subword.train(
            freqs, subword.TrainConfig(algorithm="bpe", vocab_size=100, min_frequency=1)
        )
        assert prep.subword_model.to_dict() == reference.to_dict()

    def test_save_load_extensional_equality(self, tmp_path, small_texts):
        config = {
            "clean": {"strip_markup": True, "lowercase": True},
            "tokenizer": {"kind": "whitespace"},
            "subword": {"algorithm": "bpe", "vocab_size": 80, "min_frequency": 1},
        }
        prep = Preprocessor.from_config(config).fit(small_texts[:20])
        path = tmp_path / "prep.json"
        prep.save(path)
        loaded = Preprocessor.load(path)
        for text in small_texts[:100]:
            assert loaded.transform(text) == prep.transform(text)

    def test_load_unknown_version(self, tmp_path):
        path = tmp_path / "prep.json"
        path.write_text('{"format_version": "999", "stages": {}}', encoding="utf-8")
        with pytest.raises(ModelFormatError, match="version"):
            Preprocessor.load(path)

    def test_load_corrupt_file(self, tmp_path):
        path = tmp_path / "prep.json"
        path.write_text("{nope", encoding="utf-8")
        with pytest.raises(ModelFormatError):
            Preprocessor.load(path)

    def test_save_unfitted_rejected(self, tmp_path):
        prep = Preprocessor.from_config(BASIC_CONFIG)
        with pytest.raises(NotFittedError):
            prep.save(tmp_path / "p.json")

    def test_unknown_stage_rejected(self):
        with pytest.raises(ConfigError, match="unknown"):
            Preprocessor.from_config({"bogus": {}})
