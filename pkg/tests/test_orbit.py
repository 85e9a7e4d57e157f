import json
from collections import deque

import pytest

import oracles
from conftest import as_strings, random_automorphism, random_word
from gmccool.errors import BudgetExhausted
from gmccool.freegroup import inverse, invert, multiply
from gmccool.orbit import (
    DomainCache,
    SearchBudget,
    decide_orbit,
    minimize,
    rose_class_key,
    verify_witness,
)
from gmccool.stallings import SubgroupTuple, stallings_tuple


def brute_force_minimum(comps: list[list[str]], rank: int, cap: int | None = None):
    """Breadth-first search over every Whitehead automorphism.

    States never exceed the starting volume, and with several components each
    component is also kept at most ``cap`` long so the search stays finite.
    Returns the minimal volume and the set of relabel-class keys of the
    minimal tuples reached.
    """
    autos = oracles.all_whitehead_automorphisms(rank)
    start_volume = oracles.naive_volume(comps)
    cap = cap if cap is not None else max(start_volume)

    def key(cs):
        return stallings_tuple(SubgroupTuple.of(rank, *cs)).code

    seen = {key(comps): comps}
    queue = deque([comps])
    while queue:
        cs = queue.popleft()
        for f in autos:
            image = [[oracles.substitute(f, w) for w in comp] for comp in cs]
            vol = oracles.naive_volume(image)
            if vol > start_volume or max(vol) > cap:
                continue
            k = key(image)
            if k not in seen:
                seen[k] = image
                queue.append(image)
    best = min(tuple(oracles.naive_volume(cs)) for cs in seen.values())
    classes = {rose_class_key(stallings_tuple(SubgroupTuple.of(rank, *cs)))[0]
               for cs in seen.values() if tuple(oracles.naive_volume(cs)) == best}
    return best, classes


@pytest.mark.parametrize("comps,expected", [
    ([["ab"]], (1,)),
    ([["aa"]], (2,)),
    ([["a", "b"]], (2,)),
    ([["abAB"]], (4,)),
    ([["a"], ["b"]], (1, 1)),
    ([["aab"], ["bba"]], (1, 4)),
])
def test_minimal_volumes(comps, expected):
    assert minimize(SubgroupTuple.of(2, *comps)).min_volume == expected


@pytest.mark.parametrize("comps", [
    [["aab"]], [["abAB"]], [["aabb"]], [["ab", "aB"]], [["a"], ["ab"]], [["aab"], ["b"]], [["abb"], ["aab"]],
    [["aab"], ["bba"]],
])
def test_domain_matches_brute_force(comps):
    D = minimize(SubgroupTuple.of(2, *comps))
    best, classes = brute_force_minimum(comps, 2, cap=6)
    assert D.min_volume == best
    assert {rose_class_key(r.tuple)[0] for _, r in D.ordered()} == classes


def test_domain_reps_are_correctly_marked(rng):
    for _ in range(20):
        w = random_word(rng, 3, rng.randint(2, 6))
        K = SubgroupTuple.of(3, [w], [random_word(rng, 3, 3)])
        D = minimize(K)
        for code, rose in D.ordered():
            assert stallings_tuple(K.map(invert(rose.marking))).code == code
            assert rose.tuple.volume == D.min_volume


def test_domain_is_independent_of_generating_set(rng):
    for _ in range(20):
        rank = 2
        gens = [random_word(rng, rank, rng.randint(1, 5)) for _ in range(2)]
        K = SubgroupTuple.of(rank, gens)
        try:
            stallings_tuple(K)
        except Exception:
            continue
        c = random_word(rng, rank, 3)
        moved = [multiply(c, gens[0], gens[1], inverse(c)), multiply(c, gens[1], inverse(c))]
        D1, D2 = minimize(K), minimize(SubgroupTuple.of(rank, moved))
        assert D1.min_volume == D2.min_volume
        assert [code for code, _ in D1.ordered()] == [code for code, _ in D2.ordered()]


def test_minimize_is_deterministic():
    K = SubgroupTuple.of(3, ["abcAB"], ["cab"])
    a = json.dumps(minimize(K).to_json(), sort_keys=True)
    b = json.dumps(minimize(K).to_json(), sort_keys=True)
    assert a == b


def test_ordered_pairs_are_distinguished():
    aab, bba = SubgroupTuple.of(2, ["aab"]), SubgroupTuple.of(2, ["bba"])
    assert decide_orbit(aab, bba) is not None
    assert decide_orbit(SubgroupTuple.of(2, ["aab"], ["aab"]), SubgroupTuple.of(2, ["aab"], ["bba"])) is None
    w = decide_orbit(SubgroupTuple.of(2, ["aab"], ["bba"]), SubgroupTuple.of(2, ["bba"], ["aab"]))
    assert w is not None and w.verified


def test_decide_round_trip_and_symmetry(rng):
    cache = DomainCache()
    for _ in range(40):
        rank = rng.choice((2, 3))
        K = SubgroupTuple.of(rank, [random_word(rng, rank, rng.randint(1, 5))],
                             [random_word(rng, rank, rng.randint(1, 4))])
        theta = random_automorphism(rng, rank, rng.randint(0, 5))
        K2 = K.map(theta)
        w = decide_orbit(K, K2, cache=cache)
        assert w is not None and verify_witness(w.theta, K, K2)
        back = decide_orbit(K2, K, cache=cache)
        assert back is not None
        comps2 = as_strings([[theta(g) for g in comp] for comp in K.components])
        image = as_strings([[w.theta(g) for g in comp] for comp in K.components])
        assert oracles.naive_same_tuple(image, comps2)


def test_mismatched_shapes_are_no():
    assert decide_orbit(SubgroupTuple.of(2, ["a"]), SubgroupTuple.of(2, ["a"], ["b"])) is None
    assert decide_orbit(SubgroupTuple.of(2, ["a"]), SubgroupTuple.of(3, ["a"])) is None


def test_rank_one_tuples():
    D = minimize(SubgroupTuple.of(1, ["aaa"]))
    assert D.min_volume == (3,)
    assert decide_orbit(SubgroupTuple.of(1, ["aa"]), SubgroupTuple.of(1, ["AA"])) is not None
    assert decide_orbit(SubgroupTuple.of(1, ["aa"]), SubgroupTuple.of(1, ["aaa"])) is None


def test_budget_exhaustion():
    with pytest.raises(BudgetExhausted):
        minimize(SubgroupTuple.of(2, ["aabb"]), SearchBudget(max_states=1))
    with pytest.raises(BudgetExhausted):
        minimize(SubgroupTuple.of(2, ["aaaab"]), SearchBudget(max_restarts=0))
    with pytest.raises(ValueError):
        SearchBudget(max_states=0)
