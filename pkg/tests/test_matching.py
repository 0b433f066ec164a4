import random

import pytest

from structctrl import (
    BipartiteGraph,
    Matching,
    SystemDigraph,
    avoidable_right_vertices,
    build_digraph,
    force_edge,
    force_unmatched,
    force_unmatched_all,
    matching_from_pairs,
    maximum_matching,
    stem_cycle_decomposition,
    to_state_bipartite,
)
from brute import (
    all_matchings,
    all_unmatched_sets,
    brute_max_matching_size,
    random_pattern,
)


def _random_bipartite(rng, n, density):
    return to_state_bipartite(build_digraph(random_pattern(rng, n, density)))


def test_to_state_bipartite_worked_example(sync6_graph):
    bg = to_state_bipartite(sync6_graph)
    assert bg.left_size == bg.right_size == 6
    assert len(bg.edges) == 10


def test_to_state_bipartite_edgeless():
    bg = to_state_bipartite(SystemDigraph(3, frozenset()))
    assert bg.edges == frozenset()


def test_to_state_bipartite_self_loop():
    bg = to_state_bipartite(SystemDigraph(1, {(0, 0)}))
    assert bg.edges == frozenset({(0, 0)})


def test_matching_rejects_shared_vertices():
    with pytest.raises(ValueError):
        Matching(frozenset({(0, 0), (0, 1)}), ())
    with pytest.raises(ValueError):
        Matching(frozenset({(0, 1), (2, 1)}), ())


def test_maximum_matching_worked_example(sync6_graph):
    bg = to_state_bipartite(sync6_graph)
    m = maximum_matching(bg)
    assert m.size == 4
    assert len(m.right_unmatched) == 2
    assert m.pairs <= bg.edges
    # deterministic for a fixed input
    assert maximum_matching(bg) == m


def test_maximum_matching_empty_edges():
    m = maximum_matching(BipartiteGraph(3, 3, frozenset()))
    assert m.size == 0
    assert m.right_unmatched == (0, 1, 2)


def test_maximum_matching_path():
    bg = BipartiteGraph(3, 3, {(0, 1), (1, 2)})
    m = maximum_matching(bg)
    assert m.pairs == frozenset({(0, 1), (1, 2)})
    assert m.right_unmatched == (0,)


def test_maximum_matching_agrees_with_exhaustive_search():
    rng = random.Random(21)
    for _ in range(80):
        bg = _random_bipartite(rng, rng.randint(1, 6), rng.random())
        m = maximum_matching(bg)
        assert m.size == brute_max_matching_size(bg)
        covered = {r for _, r in m.pairs}
        assert set(m.right_unmatched) == set(range(bg.right_size)) - covered


def test_force_unmatched_worked_example(sync6_graph):
    bg = to_state_bipartite(sync6_graph)
    m = force_unmatched(bg, 0)  # vertex 1 one-based
    assert m.size == 4
    assert 0 in m.right_unmatched


def test_force_unmatched_pinned_pair(sync6_graph):
    # With vertex 6 excluded as well, vertex 4 cannot take over a slot:
    # the matching drops to 3 edges.
    bg = to_state_bipartite(sync6_graph)
    m = force_unmatched_all(bg, {3, 5})
    assert m.size == 3


def test_force_unmatched_single_self_loop():
    bg = to_state_bipartite(SystemDigraph(1, {(0, 0)}))
    assert force_unmatched(bg, 0).size == 0


def test_force_unmatched_rejects_out_of_range(sync6_graph):
    bg = to_state_bipartite(sync6_graph)
    with pytest.raises(ValueError):
        force_unmatched(bg, 6)


def test_force_unmatched_properties():
    rng = random.Random(33)
    for _ in range(60):
        bg = _random_bipartite(rng, rng.randint(1, 6), rng.random())
        best = brute_max_matching_size(bg)
        avoidable = {v for s in all_unmatched_sets(bg) for v in s}
        for v in range(bg.right_size):
            m = force_unmatched(bg, v)
            assert v in m.right_unmatched
            assert m.size in (best, best - 1)
            assert (m.size == best) == (v in avoidable)


def test_force_edge_self_loop():
    bg = to_state_bipartite(SystemDigraph(1, {(0, 0)}))
    assert force_edge(bg, (0, 0)).pairs == frozenset({(0, 0)})


def test_force_edge_worked_example(sync6_graph):
    bg = to_state_bipartite(sync6_graph)
    m = force_edge(bg, (3, 4))
    assert (3, 4) in m.pairs
    assert m.size == 4
    # exhaustive: 4 really is the best among matchings containing (3, 4)
    best_with = max(len(mm) for mm in all_matchings(bg) if (3, 4) in mm)
    assert best_with == 4


def test_force_edge_path_unique_completion():
    bg = BipartiteGraph(3, 3, {(0, 1), (1, 2)})
    assert force_edge(bg, (0, 1)).pairs == frozenset({(0, 1), (1, 2)})


def test_force_edge_rejects_non_edge(sync6_graph):
    bg = to_state_bipartite(sync6_graph)
    with pytest.raises(ValueError):
        force_edge(bg, (0, 5))


def test_force_edge_properties():
    rng = random.Random(44)
    for _ in range(40):
        bg = _random_bipartite(rng, rng.randint(1, 6), rng.random())
        if not bg.edges:
            continue
        best = brute_max_matching_size(bg)
        for e in sorted(bg.edges):
            m = force_edge(bg, e)
            assert e in m.pairs
            assert m.size in (best, best - 1)
            assert m.size == max(len(mm) for mm in all_matchings(bg) if e in mm)


def test_avoidable_right_vertices_matches_exhaustive():
    rng = random.Random(55)
    for _ in range(60):
        bg = _random_bipartite(rng, rng.randint(1, 6), rng.random())
        m = maximum_matching(bg)
        expected = {v for s in all_unmatched_sets(bg) for v in s}
        assert avoidable_right_vertices(bg, m) == frozenset(expected)


def test_stem_cycle_worked_example(sync6_graph, sync6_witness):
    d = stem_cycle_decomposition(sync6_graph, sync6_witness)
    assert d.cycles == ((0,), (1,))
    assert d.stems == ((2, 3, 4), (5,))


def test_stem_cycle_perfect_match_two_cycle():
    g = SystemDigraph(2, {(0, 1), (1, 0)})
    m = matching_from_pairs({(0, 1), (1, 0)}, 2)
    d = stem_cycle_decomposition(g, m)
    assert d.stems == ()
    assert d.cycles == ((0, 1),)


def test_stem_cycle_edgeless_graph():
    g = SystemDigraph(3, frozenset())
    d = stem_cycle_decomposition(g, matching_from_pairs(set(), 3))
    assert d.stems == ((0,), (1,), (2,))
    assert d.cycles == ()


def test_stem_cycle_rejects_foreign_edge():
    g = SystemDigraph(2, {(0, 1)})
    with pytest.raises(ValueError):
        stem_cycle_decomposition(g, matching_from_pairs({(1, 0)}, 2))


def _assert_decomposition_ok(g, m, d):
    pieces = list(d.stems) + list(d.cycles)
    flat = [v for piece in pieces for v in piece]
    assert sorted(flat) == list(range(g.n))  # disjoint and spanning
    for stem in d.stems:
        for a, b in zip(stem, stem[1:]):
            assert (a, b) in g.edges
    for cyc in d.cycles:
        ring = list(cyc) + [cyc[0]]
        for a, b in zip(ring, ring[1:]):
            assert (a, b) in g.edges
    covered = {r for _, r in m.pairs}
    roots = {stem[0] for stem in d.stems}
    assert roots == set(range(g.n)) - covered
    assert len(d.stems) == g.n - len(m.pairs)


def test_stem_cycle_properties_random_matchings():
    rng = random.Random(66)
    for _ in range(80):
        g = build_digraph(random_pattern(rng, rng.randint(1, 6), rng.random()))
        bg = to_state_bipartite(g)
        _assert_decomposition_ok(g, maximum_matching(bg), stem_cycle_decomposition(g, maximum_matching(bg)))
        # also non-maximum matchings
        candidates = all_matchings(bg)
        for pairs in rng.sample(candidates, min(5, len(candidates))):
            m = matching_from_pairs(pairs, g.n)
            _assert_decomposition_ok(g, m, stem_cycle_decomposition(g, m))


def test_no_spanning_decomposition_has_fewer_stems():
    # Every spanning stem/cycle decomposition corresponds to a matching, so
    # enumerating all matchings enumerates all decompositions.
    rng = random.Random(77)
    for _ in range(40):
        g = build_digraph(random_pattern(rng, rng.randint(1, 5), rng.random()))
        bg = to_state_bipartite(g)
        m_star = maximum_matching(bg)
        min_stems = g.n - m_star.size
        for pairs in all_matchings(bg):
            d = stem_cycle_decomposition(g, matching_from_pairs(pairs, g.n))
            assert len(d.stems) >= min_stems
