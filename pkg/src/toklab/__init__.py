"""toklab: a corpus tokenization and normalization laboratory.

Clean and standardize JSONL text corpora, train and apply byte-pair,
wordpiece and unigram subword models plus classical tokenizers and
stemmers, measure every method with a uniform metric suite, verify
train/test splits for leakage, and inject controlled per-language typos.
"""

__version__ = "0.1.0"

from . import corpus, corruptor, metrics, normalize, subword, surface  # noqa: F401
from .errors import (  # noqa: F401
    ConfigError,
    CorpusError,
    LeakageError,
    ModelFormatError,
    NotFittedError,
    ToklabError,
)
