import pytest
from conftest import graphs
from hypothesis import given

from strongedge import Graph, ResourceLimitError, greedy_color, verify_strong
from strongedge.coloring import greedy_bound
from strongedge.genlab import gen_named
from strongedge.oracle import conflict_clique_lower_bound, conflict_graph, exact_strong_index


def exhaustive_index(g: Graph) -> int:
    """Smallest k admitting a strong coloring, by enumerating set partitions of the edges."""
    edges, nbr = conflict_graph(g)
    m = len(edges)
    if m == 0:
        return 0
    best = [m]
    labels = [0] * m

    def grow(i: int, used: int) -> None:
        if used >= best[0]:
            return
        if i == m:
            best[0] = used
            return
        for c in range(used + 1):
            if all(labels[j] != c for j in nbr[i] if j < i):
                labels[i] = c
                grow(i + 1, max(used, c + 1))

    grow(0, 0)
    return best[0]


def is_clique(nbr, m: int) -> bool:
    return all(j in nbr[i] for i in range(m) for j in range(m) if i != j)


class TestConflictGraph:
    def test_c5_complete(self):
        _, nbr = conflict_graph(gen_named("cycle", 5))
        assert len(nbr) == 5 and is_clique(nbr, 5)

    def test_p4_triangle(self):
        _, nbr = conflict_graph(gen_named("path", 4))
        assert len(nbr) == 3 and is_clique(nbr, 3)

    def test_far_matching_empty(self):
        _, nbr = conflict_graph(Graph([(0, 1), (2, 3), (4, 5)]))
        assert nbr == [set(), set(), set()]


class TestExact:
    @pytest.mark.parametrize("g,k", [
        (gen_named("path", 4), 3), (gen_named("cycle", 5), 5), (gen_named("star", 7), 7),
        (gen_named("k2n", 3), 6), (gen_named("cycle", 6), 3), (gen_named("cycle", 7), 4),
        (Graph(), 0),
    ])
    def test_fixtures(self, g, k):
        val, witness = exact_strong_index(g)
        assert val == k
        if g.number_of_edges():
            assert verify_strong(g, witness) is None and witness.num_colors() == k

    def test_edge_limit(self):
        g = gen_named("path", 20)
        with pytest.raises(ResourceLimitError) as exc:
            exact_strong_index(g, max_edges=16)
        assert exc.value.lower <= exc.value.upper

    def test_time_budget(self):
        g = gen_named("theta", 5)
        with pytest.raises(ResourceLimitError):
            exact_strong_index(g, max_edges=20, time_budget=0.0)

    @given(graphs(max_n=8, max_m=8))
    def test_matches_exhaustive_enumeration(self, g):
        assert exact_strong_index(g)[0] == exhaustive_index(g)

    @given(graphs(max_n=9, max_m=12))
    def test_sandwich(self, g):
        lb = conflict_clique_lower_bound(g)
        ex, _ = exact_strong_index(g)
        gr = greedy_color(g).num_colors()
        assert lb <= ex <= gr <= max(greedy_bound(g.max_degree()), 0)


class TestCliqueBound:
    @pytest.mark.parametrize("g,k", [(gen_named("star", 6), 6), (gen_named("k2n", 3), 6),
                                     (Graph([(0, 1), (2, 3), (4, 5)]), 1)])
    def test_examples(self, g, k):
        assert conflict_clique_lower_bound(g) == k
