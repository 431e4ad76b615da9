"""Read-only HTTP JSON service backing the segmentation playground.

State (models, corruption rule sets, eval reports) is loaded once at startup
from a directory and never mutated, so handlers share it without locks:

* ``*.model.json``  -> subword models, id = filename without the suffix
* ``*.rules.json``  -> corruption rule sets
* ``*.report.json`` -> stored eval reports, keyed by their corpus_id
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import FileResponse
from pydantic import BaseModel

from .corruptor import CorruptionRuleSet, corrupt, load_corruption_rules
from .errors import ToklabError
from .subword import SubwordModel, load_model

DEFAULT_MAX_TEXT_LEN = 10_000


@dataclass
class ServiceState:
    models: dict[str, SubwordModel] = field(default_factory=dict)
    rulesets: dict[str, CorruptionRuleSet] = field(default_factory=dict)
    reports: dict[str, dict] = field(default_factory=dict)
    max_text_len: int = DEFAULT_MAX_TEXT_LEN
    static_dir: Optional[Path] = None

    @classmethod
    def from_directory(cls, directory: Path, static_dir: Optional[Path] = None) -> "ServiceState":
        state = cls(static_dir=static_dir)
        if not directory.is_dir():
            return state
        for path in sorted(directory.glob("*.model.json")):
            state.models[path.name[: -len(".model.json")]] = load_model(path)
        for path in sorted(directory.glob("*.rules.json")):
            state.rulesets[path.name[: -len(".rules.json")]] = load_corruption_rules(path)
        for path in sorted(directory.glob("*.report.json")):
            with path.open("r", encoding="utf-8") as fh:
                report = json.load(fh)
            corpus_id = report.get("corpus_id", path.name[: -len(".report.json")])
            state.reports[corpus_id] = report
        return state


class SegmentRequest(BaseModel):
    text: str
    model_ids: list[str]


class CorruptRequest(BaseModel):
    text: str
    ruleset_id: str
    ratio: float
    seed: int = 0


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="toklab", version="0.1.0")

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.get("/models")
    def list_models() -> list[dict]:
        return [
            {
                "model_id": model_id,
                "algorithm": state.models[model_id].algorithm,
                "vocab_size": state.models[model_id].vocab_size,
            }
            for model_id in sorted(state.models)
        ]

    @app.post("/segment")
    def segment(body: SegmentRequest) -> dict:
        if len(body.text) > state.max_text_len:
            raise HTTPException(
                status_code=413,
                detail=f"text exceeds the {state.max_text_len}-character limit",
            )
        for model_id in body.model_ids:
            if model_id not in state.models:
                raise HTTPException(status_code=404, detail=f"unknown model_id {model_id!r}")
        results = {}
        for model_id in body.model_ids:
            model = state.models[model_id]
            words = []
            token_total = 0
            for word in body.text.split():
                seg = model.encode_word(word)
                token_total += len(seg.tokens)
                words.append(
                    {
                        "word": word,
                        "tokens": seg.tokens,
                        "ids": seg.ids,
                        "offsets": [list(o) for o in seg.offsets],
                        "is_unknown": [i == model.unk_id for i in seg.ids],
                    }
                )
            results[model_id] = {
                "algorithm": model.algorithm,
                "words": words,
                "word_count": len(words),
                "token_count": token_total,
                "fragmentation": (token_total / len(words)) if words else None,
            }
        return {"text": body.text, "results": results}

    @app.post("/corrupt")
    def corrupt_text(body: CorruptRequest) -> dict:
        if body.ruleset_id not in state.rulesets:
            raise HTTPException(status_code=404, detail=f"unknown ruleset_id {body.ruleset_id!r}")
        if not (0 < body.ratio <= 1):
            raise HTTPException(status_code=400, detail="ratio must be in (0, 1]")
        try:
            result = corrupt(body.text, state.rulesets[body.ruleset_id], body.ratio, body.seed)
        except (ToklabError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return result.to_dict()

    @app.get("/report/{corpus_id}")
    def report(corpus_id: str) -> dict:
        if corpus_id not in state.reports:
            raise HTTPException(status_code=404, detail=f"no report for corpus {corpus_id!r}")
        return state.reports[corpus_id]

    if state.static_dir is not None and state.static_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        index = state.static_dir / "index.html"
        if index.is_file():

            @app.get("/")
            def root() -> FileResponse:
                return FileResponse(index)

        app.mount("/static", StaticFiles(directory=state.static_dir), name="static")

    return app


def serve(
    models_dir: Path,
    addr: str = "127.0.0.1:8080",
    static_dir: Optional[Path] = None,
) -> None:
    import uvicorn

    state = ServiceState.from_directory(models_dir, static_dir=static_dir)
    app = create_app(state)
    host, _, port = addr.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
