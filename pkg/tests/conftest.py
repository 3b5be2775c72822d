import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from parsegame.corpus import CorpusFile
from parsegame.fixtures import default_corpus, default_lexicon


@pytest.fixture(scope="session")
def corpus() -> CorpusFile:
    return default_corpus()


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()
