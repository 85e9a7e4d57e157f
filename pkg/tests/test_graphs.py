import random

import pytest

import oracles
from conftest import random_word
from gmccool.errors import InputError
from gmccool.freegroup import format_word, letter, signed_permutations
from gmccool.graphs import (
    LabeledGraph,
    apply_signed_permutation,
    canonical_code,
    core,
    cycle_graph,
    disjoint_union,
    dumps,
    fold,
    fold_with_basepoint,
    path_graph,
    rose_equivalent,
    wedge,
)


def to_oracle(g: LabeledGraph):
    """Single-component graph in the oracle's ``(nverts, edges)`` form."""
    ren = {v: k for k, v in enumerate(g.vertices)}
    return len(g.vertices), [(ren[t], letter(lab), ren[h]) for t, h, lab in g.edges]


def shuffle_ids(g: LabeledGraph, rng: random.Random) -> LabeledGraph:
    new = list(range(100, 100 + len(g.vertices)))
    rng.shuffle(new)
    ren = dict(zip(g.vertices, new))
    edges = [(ren[t], ren[h], lab) for t, h, lab in g.edges]
    rng.shuffle(edges)
    return LabeledGraph(tuple(ren[v] for v in g.vertices), tuple(edges),
                        tuple(tuple(ren[v] for v in c) for c in g.components))


def random_words(rng, rank, count, max_len=6):
    return [random_word(rng, rank, rng.randint(1, max_len)) for _ in range(count)]


def test_constructors():
    g, base = wedge([(1, 2), (-1,)])
    assert base == 0 and len(g.edges) == 3 and len(g.vertices) == 2
    assert len(path_graph((1, 2, 1)).edges) == 3
    c = cycle_graph((1, 1, 2))
    assert c.valence() == {0: 2, 1: 2, 2: 2}
    with pytest.raises(InputError):
        LabeledGraph((0,), ((0, 1, 1),), ((0,),))
    with pytest.raises(InputError):
        LabeledGraph((0,), ((0, 0, -1),), ((0,),))


def test_fold_agrees_with_naive_folding(rng):
    for _ in range(300):
        rank = rng.choice((2, 3))
        words = random_words(rng, rank, rng.randint(1, 3))
        g, base = wedge(words)
        folded = core(fold(g, base))
        expected = oracles.naive_stallings([format_word(w) for w in words])
        if not folded.edges:
            assert expected == (0, [])
            continue
        assert folded.is_immersed()
        assert oracles.naive_isomorphic(to_oracle(folded), expected)


def test_fold_is_confluent(rng):
    """500 inputs, each folded under three random orders."""
    for k in range(500):
        rank = rng.choice((2, 3))
        g, base = wedge(random_words(rng, rank, rng.randint(1, 4), 8))
        reference, b0 = fold_with_basepoint(g, base)
        for s in range(3):
            other, b1 = fold_with_basepoint(g, base, random.Random(1000 * k + s))
            assert other.is_immersed()
            assert canonical_code(other) == canonical_code(reference)
            assert len(other.vertices) == len(reference.vertices)


def test_code_invariant_under_vertex_renaming(rng):
    for _ in range(200):
        g, base = wedge(random_words(rng, 3, rng.randint(1, 3)))
        f = core(fold(g, base))
        if not f.edges:
            continue
        assert canonical_code(shuffle_ids(f, rng)) == canonical_code(f)


def test_code_separates_non_isomorphic(rng):
    graphs = []
    for _ in range(120):
        g, base = wedge(random_words(rng, 2, rng.randint(1, 2), 5))
        f = core(fold(g, base))
        if f.edges:
            graphs.append(f)
    for a in graphs[:60]:
        for b in graphs[60:]:
            same = canonical_code(a) == canonical_code(b)
            assert same == oracles.naive_isomorphic(to_oracle(a), to_oracle(b))


def test_core_removes_hanging_trees():
    g = core(fold(wedge([(1, 2, -1)])[0], 0))
    assert len(g.edges) == 1 and g.edges[0][2] == 2
    assert not core(fold(wedge([(1, -1)])[0], 0)).edges


def test_rose_equivalent_matches_exhaustive_search(rng):
    for _ in range(150):
        words = random_words(rng, 2, 1, 5)
        g = core(fold(wedge(words)[0], 0))
        if rng.random() < 0.5:
            p = rng.choice(list(signed_permutations(2)))
            h = apply_signed_permutation(g, p)
        else:
            h = core(fold(wedge(random_words(rng, 2, 1, 5))[0], 0))
        if not g.edges or not h.edges:
            continue
        found = rose_equivalent(g, h, 2)
        brute = [p for p in signed_permutations(2)
                 if oracles.naive_isomorphic(to_oracle(apply_signed_permutation(g, p)), to_oracle(h))]
        assert (found is None) == (not brute)
        if found is not None:
            assert found == brute[0]


def test_json_round_trip(rng):
    for _ in range(100):
        parts = [core(fold(wedge(random_words(rng, 3, 2))[0], 0)) for _ in range(2)]
        g = disjoint_union([p for p in parts if p.edges] or [cycle_graph((1,))])
        again = LabeledGraph.from_json(g.to_json())
        assert again == g
        assert dumps(again) == dumps(g)


def test_dot_export_mentions_every_edge():
    g = cycle_graph((1, 1, 2))
    dot = g.to_dot("x")
    assert dot.startswith("digraph x {") and dot.count("->") == 3
