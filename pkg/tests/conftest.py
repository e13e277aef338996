import sys
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from cutperc.bigraph import Bigraph, ColoredBigraph, Flag  # noqa: E402
from cutperc.catalog import complete, complete_minus_matching, even_cycle, hypercube, path  # noqa: E402

settings.register_profile("suite", max_examples=60, deadline=None)
settings.load_profile("suite")

SMALL = {
    "K11": complete(1, 1),
    "K12": complete(1, 2),
    "C4": even_cycle(2),
    "C6": even_cycle(3),
    "C8": even_cycle(4),
    "K23": complete(2, 3),
    "K33-M": complete_minus_matching(3),
    "P3": path(3),
}


@pytest.fixture(params=sorted(SMALL))
def small_graph(request):
    return SMALL[request.param]


@pytest.fixture(scope="session")
def q3():
    return hypercube(3)


@st.composite
def bigraphs(draw, max_left=3, max_right=3, connected=False):
    n1 = draw(st.integers(1, max_left))
    n2 = draw(st.integers(1, max_right))
    v1 = tuple(f"a{i}" for i in range(n1))
    v2 = tuple(f"b{j}" for j in range(n2))
    pairs = [(u, v) for u in v1 for v in v2]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    G = Bigraph(v1, v2, tuple(p for p, b in zip(pairs, mask) if b))
    if connected:
        from cutperc.bigraph import is_connected
        from hypothesis import assume
        assume(G.m >= 1 and is_connected(G))
    return G


@st.composite
def colored_bigraphs(draw, colors=2, **kw):
    G = draw(bigraphs(**kw))
    c = draw(st.lists(st.integers(0, colors - 1), min_size=G.m, max_size=G.m))
    return ColoredBigraph(G, tuple(c))


@st.composite
def flags(draw, max_labels=2, **kw):
    H = draw(colored_bigraphs(**kw))
    k = draw(st.integers(0, min(max_labels, H.graph.n)))
    theta = draw(st.permutations(H.graph.vertices))[:k]
    return Flag(H, tuple(theta))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
