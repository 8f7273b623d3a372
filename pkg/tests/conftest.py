import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from strongedge import Graph

settings.register_profile(
    "default", deadline=None, max_examples=100, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", deadline=None, max_examples=1000)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def graphs(draw, max_n: int = 9, max_m: int | None = None) -> Graph:
    """Arbitrary simple graphs (not necessarily 2-degenerate)."""
    n = draw(st.integers(0, max_n))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=max_m)) if pairs else []
    return Graph(chosen, range(n))


@st.composite
def two_degenerate(draw, max_n: int = 14) -> Graph:
    """Built by attaching each new vertex to at most two earlier ones."""
    n = draw(st.integers(1, max_n))
    g = Graph(vertices=range(n))
    for v in range(1, n):
        k = draw(st.integers(0, min(2, v)))
        for x in draw(st.lists(st.integers(0, v - 1), min_size=k, max_size=k, unique=True)):
            g.add_edge(v, x)
    return g


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
