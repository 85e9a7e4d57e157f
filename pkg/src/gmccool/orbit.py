"""Volume minimisation over marked roses and the orbit decision procedure."""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field

from gmccool.errors import BudgetExhausted, ConventionError
from gmccool.freegroup import (
    Automorphism,
    SignedPermutation,
    compose,
    invert,
    signed_permutations,
)
from gmccool.graphs import CanonicalCode, apply_signed_permutation, canonical_code, code_to_str
from gmccool.stallings import StallingsTuple, SubgroupTuple, stallings_tuple, transform
from gmccool.whitehead import (
    WhiteheadMove,
    enumerate_moves,
    move_to_automorphism,
    next_marking,
    predicted_volume,
)


@dataclass(frozen=True)
class SearchBudget:
    max_states: int = 200_000
    max_restarts: int = 10_000

    def __post_init__(self):
        if self.max_states < 1 or self.max_restarts < 0:
            raise ValueError("budgets must be positive")


@dataclass(frozen=True)
class MarkedRose:
    marking: Automorphism
    tuple: StallingsTuple = field(compare=False)

    @property
    def code(self) -> CanonicalCode:
        return self.tuple.code


@dataclass(frozen=True)
class FundamentalDomain:
    K: SubgroupTuple
    min_volume: tuple[int, ...]
    reps: dict[CanonicalCode, MarkedRose]
    restarts: int
    states: int

    def ordered(self) -> list[tuple[CanonicalCode, MarkedRose]]:
        return sorted(self.reps.items())

    def to_json(self) -> dict:
        return {
            "min_volume": list(self.min_volume),
            "reps": [{"code": code_to_str(c), "marking": r.marking.to_json()}
                     for c, r in self.ordered()],
            "restarts": self.restarts,
            "states": self.states,
        }


@dataclass(frozen=True)
class OrbitWitness:
    theta: Automorphism
    verified: bool
    permutation: SignedPermutation

    def to_json(self) -> dict:
        return {"theta": self.theta.to_json(), "verified": self.verified}


def _moves_for(rank: int) -> list[WhiteheadMove]:
    return enumerate_moves(rank) if rank >= 2 else []


def minimize(K: SubgroupTuple, budget: SearchBudget = SearchBudget()) -> FundamentalDomain:
    """Minimal volume tuple and the closed set of minimal roses (up to code).

    Frontier states are processed in code order.  A strictly smaller predicted
    volume restarts the search from that neighbour; otherwise equal-volume
    neighbours not seen before join the frontier.
    """
    moves = _moves_for(K.rank)
    u = Automorphism.identity(K.rank)
    S = stallings_tuple(K)
    states = 1
    restarts = 0
    while True:
        best = S.volume
        reps: dict[CanonicalCode, MarkedRose] = {S.code: MarkedRose(u, S)}
        heap = [S.code]
        descent = None
        while heap and descent is None:
            rose = reps[heapq.heappop(heap)]
            lowest = None
            for m in moves:
                p = predicted_volume(rose.tuple, m)
                if p < best and (lowest is None or p < lowest[0]):
                    lowest = (p, m)
                elif p == best and lowest is None:
                    S2 = transform(rose.tuple, move_to_automorphism(m))
                    if S2.code not in reps:
                        states += 1
                        if states > budget.max_states:
                            raise BudgetExhausted(f"more than {budget.max_states} states")
                        reps[S2.code] = MarkedRose(next_marking(rose.marking, m), S2)
                        heapq.heappush(heap, S2.code)
            if lowest is not None:
                descent = (rose, lowest[1])
        if descent is None:
            return FundamentalDomain(K, best, reps, restarts, states)
        rose, m = descent
        restarts += 1
        states += 1
        if restarts > budget.max_restarts or states > budget.max_states:
            raise BudgetExhausted(f"search exceeded {budget}")
        u = next_marking(rose.marking, m)
        S = transform(rose.tuple, move_to_automorphism(m))


def rose_class_key(S: StallingsTuple) -> tuple[CanonicalCode, SignedPermutation]:
    """Smallest code over all relabelings of the rose, with the relabeling used."""
    best = None
    union = S.union()
    for p in signed_permutations(S.rank):
        code = canonical_code(apply_signed_permutation(union, p))
        if best is None or code < best[0]:
            best = (code, p)
    return best


def apply_outer_to_tuple(theta: Automorphism, K: SubgroupTuple) -> SubgroupTuple:
    return K.map(theta)


def same_tuple(K: SubgroupTuple, K2: SubgroupTuple) -> bool:
    """Equality of the ordered tuples of conjugacy classes (refolded codes)."""
    if len(K.components) != len(K2.components) or K.rank != K2.rank:
        return False
    return stallings_tuple(K).code == stallings_tuple(K2).code


def verify_witness(theta: Automorphism, K: SubgroupTuple, K2: SubgroupTuple) -> bool:
    return same_tuple(apply_outer_to_tuple(theta, K), K2)


def _keyed_reps(D: FundamentalDomain):
    keyed = {}
    for code, rose in D.ordered():
        key, p = rose_class_key(rose.tuple)
        keyed.setdefault(key, (rose, p))
    return keyed


class DomainCache:
    """Memo of fundamental domains keyed by the Stallings code of the tuple."""

    def __init__(self):
        self._domains: dict = {}
        self._keyed: dict = {}

    def get_domain(self, K: SubgroupTuple, budget: SearchBudget) -> FundamentalDomain:
        key = (K.rank, stallings_tuple(K).code)
        if key not in self._domains:
            self._domains[key] = minimize(K, budget)
        return self._domains[key]

    def keyed_reps(self, D: FundamentalDomain) -> dict:
        key = (D.K.rank, stallings_tuple(D.K).code)
        if key not in self._keyed:
            self._keyed[key] = _keyed_reps(D)
        return self._keyed[key]


def decide_orbit(K: SubgroupTuple, K2: SubgroupTuple, budget: SearchBudget = SearchBudget(),
                 cache: DomainCache | None = None) -> OrbitWitness | None:
    """``None`` for NO; otherwise a witness ``theta`` with ``theta(K) = K2``."""
    if K.rank != K2.rank or len(K.components) != len(K2.components):
        return None
    if cache is None:
        cache = DomainCache()
    D = cache.get_domain(K, budget)
    D2 = cache.get_domain(K2, budget)
    if D.min_volume != D2.min_volume:
        return None
    (key, (rose, p)), = itertools.islice(cache.keyed_reps(D).items(), 1)
    match = cache.keyed_reps(D2).get(key)
    if match is None:
        return None
    rose2, p2 = match
    # p(S) and p2(S2) agree, so S2 = q(S) with q = p2^-1 p
    q_perm = SignedPermutation(tuple(p2.inverse()(p(i)) for i in range(1, K.rank + 1)))
    q = Automorphism.identity(K.rank) if q_perm.is_identity() else Automorphism.of(q_perm)
    theta = compose(rose2.marking, compose(q, invert(rose.marking)))
    if not verify_witness(theta, K, K2):
        raise ConventionError("assembled orbit witness failed verification")
    return OrbitWitness(theta, True, q_perm)
