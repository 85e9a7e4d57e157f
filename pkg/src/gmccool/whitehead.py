"""Whitehead moves between marked roses and the exact volume change they cause.

A marked rose is recorded by its marking ``u``; the Stallings tuple seen from
it is ``stallings_tuple(u^-1 K)``.  Performing the move ``m`` replaces ``u`` by
``u o T^-1`` where ``T`` is the Whitehead automorphism of ``m``, so the new
tuple is the old one pushed forward by ``T``.  With that order the volume
change is ``separation_count(A) - label_count(a)``; the oracle test in the
suite pins this down.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from gmccool.errors import ConventionError, InputError
from gmccool.freegroup import (
    Automorphism,
    WhiteheadII,
    compose,
    dart_index,
    invert,
    letter,
    parse_dart,
)
from gmccool.stallings import (
    StallingsTuple,
    SubgroupTuple,
    label_count,
    separation_count,
    stallings_tuple,
    transform,
)


@dataclass(frozen=True)
class WhiteheadMove:
    rank: int
    A: frozenset[int]
    collapse: int

    def __post_init__(self):
        n = self.rank
        if not 2 <= len(self.A) <= 2 * n - 2:
            raise InputError("ideal edge sides need at least two darts each")
        if self.collapse not in self.A or -self.collapse in self.A:
            raise InputError("the collapsed dart must lie in A with its inverse outside")

    def automorphism(self) -> Automorphism:
        return move_to_automorphism(self)

    def inverse(self) -> WhiteheadMove:
        a = self.collapse
        return WhiteheadMove(self.rank, (self.A - {a}) | {-a}, -a)

    def to_json(self) -> dict:
        return {"A": [letter(d) for d in sorted(self.A, key=dart_index)],
                "collapse": letter(self.collapse)}

    @classmethod
    def from_json(cls, rank: int, obj: dict) -> WhiteheadMove:
        return cls(rank, frozenset(parse_dart(c) for c in obj["A"]), parse_dart(obj["collapse"]))


@lru_cache(maxsize=None)
def _moves(n: int) -> tuple[WhiteheadMove, ...]:
    darts = [d for i in range(1, n + 1) for d in (i, -i)]
    out = []
    for a in darts:
        rest = [d for d in darts if d not in (a, -a)]
        for k in range(1, 2 * n - 2):
            for extra in itertools.combinations(rest, k):
                out.append(WhiteheadMove(n, frozenset((a,) + extra), a))
    return tuple(out)


def enumerate_moves(n: int) -> list[WhiteheadMove]:
    """All moves of rank ``n`` in a fixed order (collapsed dart, then size, then set)."""
    if n < 2:
        raise InputError("Whitehead moves need rank at least 2")
    return list(_moves(n))


def move_to_automorphism(m: WhiteheadMove) -> Automorphism:
    return Automorphism.of(WhiteheadII(m.rank, m.A, m.collapse))


def predicted_volume(S: StallingsTuple, m: WhiteheadMove) -> tuple[int, ...]:
    sep = separation_count(S, m.A)
    lab = label_count(S, m.collapse)
    return tuple(v + s - c for v, s, c in zip(S.volume, sep, lab))


def refolded_volume(S: StallingsTuple, m: WhiteheadMove) -> tuple[int, ...]:
    """Slow path: push the tuple through the move's automorphism and refold."""
    return transform(S, move_to_automorphism(m)).volume


def next_marking(u: Automorphism, m: WhiteheadMove) -> Automorphism:
    return compose(u, invert(move_to_automorphism(m)))


def apply_move(K: SubgroupTuple, u: Automorphism, m: WhiteheadMove,
               S: StallingsTuple | None = None) -> tuple[Automorphism, StallingsTuple]:
    """Move from the rose marked by ``u``; returns the new marking and tuple.

    Raises :class:`ConventionError` if the refolded volume disagrees with the
    predicted one.
    """
    if S is None:
        S = stallings_tuple(K.map(invert(u)))
    u2 = next_marking(u, m)
    S2 = stallings_tuple(K.map(invert(u2)))
    expected = predicted_volume(S, m)
    if S2.volume != expected:
        raise ConventionError(f"volume {S2.volume} after move, formula predicted {expected}")
    return u2, S2
