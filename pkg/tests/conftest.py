import io
import os
import warnings
from pathlib import Path

import pytest

from hkcluster import Graph, load_edge_list

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> Path:
    """Bundled fixture, or a user-supplied dataset next to it / in $HKPR_FIXTURES."""
    env = os.environ.get("HKPR_FIXTURES")
    if env and (Path(env) / name).exists():
        return Path(env) / name
    return FIXTURES / name


def graph_from_text(text: str) -> Graph:
    return load_edge_list(io.StringIO(text))


@pytest.fixture
def k2():
    return graph_from_text("a b\n")


@pytest.fixture
def k3():
    return graph_from_text("0 1\n1 2\n2 0\n")


@pytest.fixture
def path3():
    return graph_from_text("0 1\n1 2\n")


@pytest.fixture
def bridge():
    # two triangles joined by one edge; the cut around either triangle has
    # boundary 1 and volume 7
    return graph_from_text("a b\nb c\nc a\nc d\nd e\ne f\nf d\n")


@pytest.fixture
def two_pods():
    return load_edge_list(fixture_path("two_pods.edges"))


@pytest.fixture
def quiet_sigma_warning():
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message="sigma = .* exceeds")
        yield
