import json

import pytest
from fastapi.testclient import TestClient

from toklab.service import ServiceState, create_app
from toklab.subword import TrainConfig, save_model, train


@pytest.fixture(scope="module")
def client(tmp_path_factory):
    state_dir = tmp_path_factory.mktemp("service")
    freqs = {"alpha": 5, "beta": 4, "alps": 2, "unable": 3, "un": 2, "able": 2}
    save_model(
        train(freqs, TrainConfig(algorithm="bpe", vocab_size=60, min_frequency=1)),
        state_dir / "fixture-bpe.model.json",
    )
    save_model(
        train(freqs, TrainConfig(algorithm="wordpiece", vocab_size=60, min_frequency=1)),
        state_dir / "fixture-wp.model.json",
    )
    from importlib.resources import files

    (state_dir / "ru.rules.json").write_text(
        files("toklab.data").joinpath("corruption_ru.json").read_text("utf-8"),
        encoding="utf-8",
    )
    (state_dir / "demo.report.json").write_text(
        json.dumps(
            {
                "corpus_id": "demo",
                "rows": [{"method": "whitespace", "vocab_size": 10, "oov_rate": 0.5}],
                "zipf": {"fit": {"slope": -1.0, "intercept": 9.0, "rmse": 0.1, "points": 2},
                         "points": [[1, 100, 0.0, 4.6], [2, 50, 0.69, 3.9]]},
            }
        ),
        encoding="utf-8",
    )
    state = ServiceState.from_directory(state_dir)
    return TestClient(create_app(state))


class TestModels:
    def test_healthz(self, client):
        assert client.get("/healthz").json() == {"status": "ok"}

    def test_models_sorted_with_descriptors(self, client):
        models = client.get("/models").json()
        assert [m["model_id"] for m in models] == ["fixture-bpe", "fixture-wp"]
        assert models[0]["algorithm"] == "bpe"
        assert models[0]["vocab_size"] > 0

    def test_empty_state(self):
        empty = TestClient(create_app(ServiceState()))
        assert empty.get("/models").json() == []


class TestSegment:
    def test_segmentation_matches_model(self, client):
        body = {"text": "alpha", "model_ids": ["fixture-bpe"]}
        data = client.post("/segment", json=body).json()
        words = data["results"]["fixture-bpe"]["words"]
        assert len(words) == 1
        joined = "".join(words[0]["tokens"])
        assert joined.replace("</w>", "") == "alpha"
        assert len(words[0]["tokens"]) == len(words[0]["ids"]) == len(words[0]["offsets"])

    def test_two_models_keyed_response(self, client):
        body = {"text": "alpha beta", "model_ids": ["fixture-bpe", "fixture-wp"]}
        data = client.post("/segment", json=body).json()
        assert set(data["results"]) == {"fixture-bpe", "fixture-wp"}
        assert data["results"]["fixture-wp"]["word_count"] == 2

    def test_unknown_model_404_echoes_id(self, client):
        response = client.post("/segment", json={"text": "x", "model_ids": ["ghost"]})
        assert response.status_code == 404
        assert "ghost" in response.json()["detail"]

    def test_oversize_text_413(self, client):
        response = client.post(
            "/segment", json={"text": "x" * 20_000, "model_ids": ["fixture-bpe"]}
        )
        assert response.status_code == 413

    def test_unknown_flags_for_unseen_chars(self, client):
        data = client.post(
            "/segment", json={"text": "zzz", "model_ids": ["fixture-bpe"]}
        ).json()
        flags = data["results"]["fixture-bpe"]["words"][0]["is_unknown"]
        assert any(flags)


class TestCorrupt:
    def test_deterministic(self, client):
        body = {"text": "длинное слово опять тут", "ruleset_id": "ru", "ratio": 0.5, "seed": 4}
        first = client.post("/corrupt", json=body).json()
        second = client.post("/corrupt", json=body).json()
        assert first == second
        assert first["corrupted_indices"]

    def test_unknown_ruleset_404(self, client):
        response = client.post(
            "/corrupt", json={"text": "x y", "ruleset_id": "xx", "ratio": 0.5, "seed": 1}
        )
        assert response.status_code == 404

    def test_ratio_zero_400(self, client):
        response = client.post(
            "/corrupt", json={"text": "x y", "ruleset_id": "ru", "ratio": 0, "seed": 1}
        )
        assert response.status_code == 400

    def test_identical_to_library_call(self, client):
        from importlib.resources import files

        from toklab.corruptor import corrupt, ruleset_from_dict

        ruleset = ruleset_from_dict(
            json.loads(files("toklab.data").joinpath("corruption_ru.json").read_text("utf-8"))
        )
        text = "рыба плавает в синей реке"
        via_http = client.post(
            "/corrupt", json={"text": text, "ruleset_id": "ru", "ratio": 0.3, "seed": 21}
        ).json()
        direct = corrupt(text, ruleset, 0.3, 21).to_dict()
        assert via_http == direct


class TestReport:
    def test_stored_report_returned(self, client):
        data = client.get("/report/demo").json()
        assert data["corpus_id"] == "demo"
        assert data["rows"][0]["method"] == "whitespace"

    def test_missing_report_404(self, client):
        assert client.get("/report/nope").status_code == 404
