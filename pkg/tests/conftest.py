import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from _synth import build_corpus  # noqa: E402


@pytest.fixture(scope="session")
def small_corpus():
    """60 docs with 3 planted pairs; fast enough for unit tests."""
    return build_corpus(n_docs=60, n_planted=3, seed=11)


@pytest.fixture(scope="session")
def small_index(small_corpus):
    from nontext_pd.index import build_index

    docs, _ = small_corpus
    return build_index(docs)
