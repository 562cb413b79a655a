import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pkgraph import Iri, PkgEngine, RuleAnnotator  # noqa: E402

OWNER = Iri("https://pkg.example/users/alice")


@pytest.fixture
def owner() -> Iri:
    return OWNER


@pytest.fixture
def engine(owner) -> PkgEngine:
    eng = PkgEngine(annotator=RuleAnnotator(), seed=7)
    eng.register_owner(owner)
    return eng
