from pathlib import Path

import numpy as np
import pytest

from feedbackclf.corpus import Language
from feedbackclf.embeddings import EmbeddingTable
from feedbackclf.synthetic import synthetic_dataset

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = Path(__file__).resolve().parent / "fixtures"

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)


def random_table(words, dim, seed=0, language=Language.EN) -> EmbeddingTable:
    rng = np.random.default_rng(seed)
    return EmbeddingTable(tuple(words), rng.normal(0.0, 1.0, size=(len(words), dim)), language)


def corpus_vocabulary(ds) -> list[str]:
    from feedbackclf.experiments import preprocess_all

    words = set()
    for p in preprocess_all(ds.documents):
        words.update(t.surface for t in p.tokens if t.is_word)
    return sorted(words)


@pytest.fixture(scope="session")
def synth_en():
    return synthetic_dataset(200, Language.EN, seed=42)


@pytest.fixture(scope="session")
def synth_it():
    return synthetic_dataset(200, Language.IT, seed=42)
