import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gen import make_texts, write_corpus_jsonl  # noqa: E402


@pytest.fixture(scope="session")
def small_texts() -> list[str]:
    """~5k tokens; quick unit-level training."""
    return make_texts(seed=101, n_tokens=5_000, bank_size=600)


@pytest.fixture(scope="session")
def medium_corpus_path(tmp_path_factory) -> Path:
    """~50k-token JSONL corpus used by the determinism acceptance check."""
    path = tmp_path_factory.mktemp("fixtures") / "medium.jsonl"
    write_corpus_jsonl(path, make_texts(seed=202, n_tokens=50_000, bank_size=4_000))
    return path
