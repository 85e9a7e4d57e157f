"""Finite-group-equivariant separation norms and a checking harness.

Darts are indexed ``0 .. 2m-1`` with inversion ``d ^ 1``; subsets of darts are
bitmasks.  A group acts on darts commuting with inversion.  For a set ``A`` and
a piece ``Z``, ``|A|*_Z`` is 1 when ``Z`` meets both ``A`` and its complement,
and ``|A|_{Z,H}`` sums that indicator over ``hZ`` for ``h`` in a subgroup ``H``.

The harness evaluates two inequalities between such norms over ideal-edge
pairs ``alpha, beta`` whose stabilizers are ``P`` and ``Q``:

* nested case (``P <= Q``, ``alpha`` meets ``beta`` and meets no translate
  ``g beta`` with ``g`` outside ``Q``)::

      p |alpha & beta| + q |beta | Q alpha|  <=  p |alpha| + q |beta|

* crossing case, for each double coset ``P x Q``::

      p |alpha - gamma| + q |beta - gamma'|  <=  p |alpha| + q |beta|
      gamma = alpha & P x beta,  gamma' = beta & Q x^-1 alpha
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from gmccool.errors import InputError
from gmccool.freegroup import Automorphism, invert
from gmccool.stallings import StallingsTuple, SubgroupTuple, stallings_tuple


# --- finite groups ------------------------------------------------------------


@dataclass(frozen=True)
class FiniteGroupTable:
    name: str
    mul: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = len(self.mul)
        if any(len(row) != m or sorted(row) != list(range(m)) for row in self.mul):
            raise InputError("multiplication table is not a Latin square")
        e = self.identity
        if any(self.mul[e][a] != a or self.mul[a][e] != a for a in range(m)):
            raise InputError("identity element 0 expected")
        for a, b, c in itertools.product(range(m), repeat=3):
            if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]]:
                raise InputError("multiplication is not associative")

    @property
    def order(self) -> int:
        return len(self.mul)

    @property
    def identity(self) -> int:
        return 0

    @cached_property
    def inv(self) -> tuple[int, ...]:
        return tuple(next(b for b in range(self.order) if self.mul[a][b] == 0)
                     for a in range(self.order))

    @cached_property
    def subgroups(self) -> tuple[frozenset[int], ...]:
        found = set()
        for gens in itertools.chain.from_iterable(
                itertools.combinations(range(self.order), k) for k in range(3)):
            found.add(self.generated(gens))
        return tuple(sorted(found, key=lambda s: (len(s), sorted(s))))

    def generated(self, gens: Iterable[int]) -> frozenset[int]:
        sub = {0}
        frontier = list(gens)
        while frontier:
            a = frontier.pop()
            if a in sub:
                continue
            sub.add(a)
            frontier.extend(self.mul[a][b] for b in list(sub))
            frontier.extend(self.mul[b][a] for b in list(sub))
        return frozenset(sub)

    def double_coset_reps(self, P: frozenset[int], Q: frozenset[int]) -> list[int]:
        reps, covered = [], set()
        for x in range(self.order):
            if x in covered:
                continue
            reps.append(x)
            covered |= {self.mul[self.mul[p][x]][q] for p in P for q in Q}
        return reps


def _table_from_permutations(name: str, perms: Sequence[tuple[int, ...]]) -> FiniteGroupTable:
    index = {p: k for k, p in enumerate(perms)}
    mul = tuple(tuple(index[tuple(a[b[i]] for i in range(len(a)))] for b in perms) for a in perms)
    return FiniteGroupTable(name, mul)


def cyclic_group(m: int) -> FiniteGroupTable:
    return FiniteGroupTable(f"z{m}", tuple(tuple((a + b) % m for b in range(m)) for a in range(m)))


def symmetric_group_3() -> FiniteGroupTable:
    perms = sorted(itertools.permutations(range(3)))
    return _table_from_permutations("s3", perms)


def group_by_name(name: str) -> FiniteGroupTable:
    groups = {"trivial": lambda: cyclic_group(1), "z2": lambda: cyclic_group(2),
              "z3": lambda: cyclic_group(3), "s3": symmetric_group_3}
    if name not in groups:
        raise InputError(f"unknown group {name!r}; expected one of {sorted(groups)}")
    return groups[name]()


# --- actions on darts ---------------------------------------------------------


def _homs_to_z2(G: FiniteGroupTable, S: frozenset[int]) -> list[dict[int, int]]:
    elems = sorted(S)
    out = []
    for values in itertools.product((0, 1), repeat=len(elems)):
        chi = dict(zip(elems, values))
        if all(chi[G.mul[a][b]] == (chi[a] + chi[b]) % 2 for a in elems for b in elems):
            out.append(chi)
    return out


def orbit_types(G: FiniteGroupTable) -> list[tuple[frozenset[int], tuple[int, ...]]]:
    """Transitive dart-set types: a subgroup with a sign character, sizes 2|G|/|S|."""
    types = []
    for S in G.subgroups:
        for chi in _homs_to_z2(G, S):
            types.append((S, tuple(chi[s] for s in sorted(S))))
    return types


@dataclass(frozen=True)
class DartAction:
    group: FiniteGroupTable
    ndarts: int
    perms: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        G = self.group
        if self.ndarts % 2 or len(self.perms) != G.order:
            raise InputError("an action needs an even number of darts and one permutation per element")
        for a in range(G.order):
            pa = self.perms[a]
            if any(pa[d ^ 1] != pa[d] ^ 1 for d in range(self.ndarts)):
                raise InputError("the action must commute with inversion")
            for b in range(G.order):
                pb, pab = self.perms[b], self.perms[G.mul[a][b]]
                if any(pa[pb[d]] != pab[d] for d in range(self.ndarts)):
                    raise InputError("the permutations do not form an action")

    @classmethod
    def from_types(cls, G: FiniteGroupTable, types: Sequence[tuple[frozenset[int], tuple[int, ...]]]):
        perms: list[list[int]] = [[] for _ in range(G.order)]
        darts: list[frozenset] = []
        for block, (S, chi_values) in enumerate(types):
            chi = dict(zip(sorted(S), chi_values))
            cosets: list[frozenset] = []
            seen = set()
            for g in range(G.order):
                for e in (0, 1):
                    if (g, e) in seen:
                        continue
                    coset = frozenset((G.mul[g][s], (e + chi[s]) % 2) for s in S)
                    seen |= coset
                    cosets.append(coset)
                    cosets.append(frozenset((h, 1 - f) for h, f in coset))
                    seen |= cosets[-1]
            darts.extend((block, c) for c in cosets)
        index = {d: k for k, d in enumerate(darts)}
        for k in range(G.order):
            for block, coset in darts:
                image = frozenset((G.mul[k][h], f) for h, f in coset)
                perms[k].append(index[(block, image)])
        return cls(G, len(darts), tuple(tuple(p) for p in perms))

    @property
    def full(self) -> int:
        return (1 << self.ndarts) - 1

    def apply(self, g: int, mask: int) -> int:
        p = self.perms[g]
        out = 0
        for d in range(self.ndarts):
            if mask >> d & 1:
                out |= 1 << p[d]
        return out

    def apply_array(self, g: int, masks: np.ndarray) -> np.ndarray:
        p = self.perms[g]
        out = np.zeros_like(masks)
        for d in range(self.ndarts):
            out |= ((masks >> d) & 1) << p[d]
        return out

    @cached_property
    def tables(self) -> np.ndarray:
        """``tables[g][Z] = g Z`` for every mask ``Z``."""
        allz = np.arange(1 << self.ndarts, dtype=np.int64)
        return np.stack([self.apply_array(g, allz) for g in range(self.group.order)])

    def orbit_union(self, H: Iterable[int], mask: int) -> int:
        out = 0
        for h in H:
            out |= self.apply(h, mask)
        return out

    def stabilizer(self, mask: int) -> frozenset[int]:
        return frozenset(g for g in range(self.group.order) if self.apply(g, mask) == mask)

    def dart_stabilizer(self, d: int) -> frozenset[int]:
        return frozenset(g for g in range(self.group.order) if self.perms[g][d] == d)

    def dart_orbits(self) -> list[list[int]]:
        seen, out = set(), []
        for d in range(self.ndarts):
            if d not in seen:
                orb = sorted({self.perms[g][d] for g in range(self.group.order)})
                seen |= set(orb)
                out.append(orb)
        return out


def has_edge_property(action: DartAction, A: int) -> bool:
    """``A`` meets ``gA`` only for ``g`` stabilizing ``A``."""
    for g in range(action.group.order):
        gA = action.apply(g, A)
        if gA & A and gA != A:
            return False
    return True


# --- norms --------------------------------------------------------------------


def separates(A: int, Z: int, full: int) -> int:
    return int(bool(Z & A) and bool(Z & ~A & full))


def norm_star(action: DartAction, A: int, Z: int, sub: Iterable[int]) -> int:
    """``sum over g in sub`` of the separation indicator of ``g Z`` by ``A``."""
    return sum(separates(A, action.apply(g, Z), action.full) for g in sub)


def _sep_array(A: int, Z: np.ndarray, full: int) -> np.ndarray:
    return (((Z & A) != 0) & ((Z & (full & ~A)) != 0)).astype(np.int64)


def norm_array(action: DartAction, A: int, Z: np.ndarray, sub: Iterable[int],
               images: dict[int, np.ndarray] | None = None) -> np.ndarray:
    total = np.zeros(len(Z), dtype=np.int64)
    for g in sub:
        gz = images[g] if images is not None else action.apply_array(g, Z)
        total += _sep_array(A, gz, action.full)
    return total


# --- scenarios and the two checks ---------------------------------------------


@dataclass(frozen=True)
class EquivariantScenario:
    action: DartAction
    alpha: int
    beta: int
    pieces: tuple[int, ...]

    @cached_property
    def P(self) -> frozenset[int]:
        return self.action.stabilizer(self.alpha)

    @cached_property
    def Q(self) -> frozenset[int]:
        return self.action.stabilizer(self.beta)


@dataclass
class Report:
    applicable: bool
    holds: bool
    lhs: list[int] = field(default_factory=list)
    rhs: list[int] = field(default_factory=list)
    reason: str = ""


def nested_hypotheses(s: EquivariantScenario) -> str:
    """Empty string when the nested-case hypotheses hold, else the failed one."""
    a, G = s.action, s.action.group
    if not (s.alpha and s.beta):
        return "empty ideal edge"
    if not (has_edge_property(a, s.alpha) and has_edge_property(a, s.beta)):
        return "edge property fails"
    if not s.alpha & s.beta:
        return "alpha and beta are disjoint"
    if not s.P <= s.Q:
        return "P is not contained in Q"
    for g in range(G.order):
        if g not in s.Q and s.alpha & a.apply(g, s.beta):
            return "alpha meets a translate of beta outside Q"
    return ""


def _pieces_array(s: EquivariantScenario) -> np.ndarray:
    return np.array(s.pieces, dtype=np.int64)


def nested_sets(s: EquivariantScenario) -> tuple[int, int]:
    """``(alpha & beta, beta | Q alpha)``."""
    return s.alpha & s.beta, s.beta | s.action.orbit_union(s.Q, s.alpha)


def check_lemma_71(s: EquivariantScenario) -> Report:
    reason = nested_hypotheses(s)
    if reason:
        return Report(False, True, reason=reason)
    G = s.action.group
    p, q = G.order // len(s.P), G.order // len(s.Q)
    gamma, B = nested_sets(s)
    Z = _pieces_array(s)
    every = range(G.order)
    lhs = p * norm_array(s.action, gamma, Z, every).sum() + q * norm_array(s.action, B, Z, every).sum()
    rhs = p * norm_array(s.action, s.alpha, Z, every).sum() + q * norm_array(s.action, s.beta, Z, every).sum()
    return Report(True, bool(lhs <= rhs), [int(lhs)], [int(rhs)])


def check_intermediate(s: EquivariantScenario) -> Report:
    """Per-piece version of the nested inequality with sums over ``Q`` only."""
    reason = nested_hypotheses(s)
    if reason:
        return Report(False, True, reason=reason)
    G = s.action.group
    p, q = G.order // len(s.P), G.order // len(s.Q)
    gamma, B = nested_sets(s)
    Z = _pieces_array(s)
    lhs = p * norm_array(s.action, gamma, Z, s.Q) + q * norm_array(s.action, B, Z, s.Q)
    rhs = p * norm_array(s.action, s.alpha, Z, s.Q) + q * norm_array(s.action, s.beta, Z, s.Q)
    return Report(True, bool(np.all(lhs <= rhs)), lhs.tolist(), rhs.tolist())


def crossing_sets(s: EquivariantScenario) -> list[tuple[int, int, int]]:
    """``(x, gamma_x, gamma'_x)`` for double coset representatives of P\\G/Q."""
    a, G = s.action, s.action.group
    out = []
    for x in G.double_coset_reps(s.P, s.Q):
        gamma = s.alpha & a.orbit_union(s.P, a.apply(x, s.beta))
        gamma2 = s.beta & a.orbit_union(s.Q, a.apply(G.inv[x], s.alpha))
        out.append((x, gamma, gamma2))
    return out


def crossing_hypotheses(s: EquivariantScenario) -> str:
    a = s.action
    if not (s.alpha and s.beta):
        return "empty ideal edge"
    if not (has_edge_property(a, s.alpha) and has_edge_property(a, s.beta)):
        return "edge property fails"
    if not any(g for _, g, _ in crossing_sets(s)):
        return "the orbits do not cross"
    return ""


def check_lemma_72(s: EquivariantScenario) -> Report:
    reason = crossing_hypotheses(s)
    if reason:
        return Report(False, True, reason=reason)
    G = s.action.group
    p, q = G.order // len(s.P), G.order // len(s.Q)
    Z = _pieces_array(s)
    every = range(G.order)
    base = (p * norm_array(s.action, s.alpha, Z, every).sum()
            + q * norm_array(s.action, s.beta, Z, every).sum())
    lhs, rhs = [], []
    for _, gamma, gamma2 in crossing_sets(s):
        value = (p * norm_array(s.action, s.alpha & ~gamma, Z, every).sum()
                 + q * norm_array(s.action, s.beta & ~gamma2, Z, every).sum())
        lhs.append(int(value))
        rhs.append(int(base))
    return Report(True, all(x <= y for x, y in zip(lhs, rhs)), lhs, rhs)


def check_separation_invariance(action: DartAction, A: int, Z: int, sub: Sequence[int]) -> bool:
    """``|gA|*_{gZ} = |A|*_Z`` for all g, and ``|A|_{Z,H} = |A|_{gZ,H}`` for g in H."""
    full = action.full
    for g in range(action.group.order):
        if separates(action.apply(g, A), action.apply(g, Z), full) != separates(A, Z, full):
            return False
    base = norm_star(action, A, Z, sub)
    return all(norm_star(action, A, action.apply(g, Z), sub) == base for g in sub)


def check_b_translates(s: EquivariantScenario) -> bool:
    """``B`` meets ``gB`` exactly when ``g`` lies in ``Q`` (nested case)."""
    _, B = nested_sets(s)
    return all(bool(B & s.action.apply(g, B)) == (g in s.Q) for g in range(s.action.group.order))


# --- norms of subgroup tuples -------------------------------------------------


def equivariant_norm(orbit: Sequence[SubgroupTuple], marking: Automorphism | None = None) -> list[int]:
    """Per component, the total volume of the tuples in ``orbit`` seen from a marked rose."""
    if not orbit:
        raise InputError("empty orbit")
    inv = invert(marking) if marking is not None else None
    totals = [0] * len(orbit[0].components)
    for K in orbit:
        S = stallings_tuple(K.map(inv) if inv is not None else K)
        totals = [t + v for t, v in zip(totals, S.volume)]
    return totals


def invariant_norm_identity(S: StallingsTuple, orbit: Sequence[SubgroupTuple]) -> bool:
    """For an orbit of copies of one tuple the norm is ``|orbit| * volume``."""
    return equivariant_norm(orbit) == [len(orbit) * v for v in S.volume]


# --- sweeps -------------------------------------------------------------------


@dataclass
class Tally:
    checked: int = 0
    vacuous: int = 0
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"checked": self.checked, "vacuous": self.vacuous, "violations": self.violations[:20],
                "violation_count": len(self.violations)}


@dataclass
class SweepReport:
    group: str
    mode: str
    seed: int | None
    max_darts: int
    actions: int = 0
    lemma71: Tally = field(default_factory=Tally)
    intermediate: Tally = field(default_factory=Tally)
    lemma72: Tally = field(default_factory=Tally)
    invariance: Tally = field(default_factory=Tally)
    translates: Tally = field(default_factory=Tally)

    @property
    def ok(self) -> bool:
        return not any(t.violations for t in self.tallies().values())

    def tallies(self) -> dict[str, Tally]:
        return {"lemma71": self.lemma71, "intermediate": self.intermediate, "lemma72": self.lemma72,
                "invariance": self.invariance, "translates": self.translates}

    def to_json(self) -> dict:
        out = {"group": self.group, "mode": self.mode, "seed": self.seed,
               "max_darts": self.max_darts, "actions": self.actions, "ok": self.ok}
        out.update({k: t.to_json() for k, t in self.tallies().items()})
        return out


def edge_property_sets(action: DartAction) -> list[int]:
    """All nonempty dart sets with the edge property, built from orbit pieces."""
    G = action.group
    found = set()
    orbits = action.dart_orbits()
    for P in G.subgroups:
        per_orbit = []
        for orb in orbits:
            choices = {0}
            for d in orb:
                if action.dart_stabilizer(d) <= P:
                    choices.add(action.orbit_union(P, 1 << d))
            per_orbit.append(sorted(choices))
        for combo in itertools.product(*per_orbit):
            mask = 0
            for c in combo:
                mask |= c
            if mask:
                found.add(mask)
    return sorted(m for m in found if has_edge_property(action, m))


def random_edge_property_set(action: DartAction, rng: random.Random) -> int:
    G = action.group
    P = rng.choice(G.subgroups)
    mask = 0
    for orb in action.dart_orbits():
        if rng.random() < 0.5:
            continue
        allowed = [d for d in orb if action.dart_stabilizer(d) <= P]
        if allowed:
            mask |= action.orbit_union(P, 1 << rng.choice(allowed))
    return mask


def _check_pair_vectorized(action: DartAction, alpha: int, beta: int, Z: np.ndarray,
                           images: dict[int, np.ndarray], report: SweepReport, label) -> None:
    """Single-piece checks of every inequality for all pieces in ``Z`` at once."""
    G = action.group
    every = range(G.order)
    s = EquivariantScenario(action, alpha, beta, ())
    P, Q = s.P, s.Q
    p, q = G.order // len(P), G.order // len(Q)
    nZ = len(Z)

    def norm(A, sub):
        return norm_array(action, A, Z, sub, images)

    if not nested_hypotheses(s):
        gamma, B = nested_sets(s)
        lhs = p * norm(gamma, every) + q * norm(B, every)
        rhs = p * norm(alpha, every) + q * norm(beta, every)
        report.lemma71.checked += nZ
        for k in np.nonzero(lhs > rhs)[0][:5]:
            report.lemma71.violations.append({"case": label, "alpha": alpha, "beta": beta, "piece": int(Z[k])})
        lhs = p * norm(gamma, Q) + q * norm(B, Q)
        rhs = p * norm(alpha, Q) + q * norm(beta, Q)
        report.intermediate.checked += nZ
        for k in np.nonzero(lhs > rhs)[0][:5]:
            report.intermediate.violations.append({"case": label, "alpha": alpha, "beta": beta,
                                                   "piece": int(Z[k])})
        report.translates.checked += 1
        if not check_b_translates(s):
            report.translates.violations.append({"case": label, "alpha": alpha, "beta": beta})
    else:
        report.lemma71.vacuous += nZ
        report.intermediate.vacuous += nZ

    if not crossing_hypotheses(s):
        base = p * norm(alpha, every) + q * norm(beta, every)
        for x, gamma, gamma2 in crossing_sets(s):
            lhs = p * norm(alpha & ~gamma, every) + q * norm(beta & ~gamma2, every)
            report.lemma72.checked += nZ
            for k in np.nonzero(lhs > base)[0][:5]:
                report.lemma72.violations.append({"case": label, "alpha": alpha, "beta": beta, "x": x,
                                                  "piece": int(Z[k])})
    else:
        report.lemma72.vacuous += nZ * len(G.double_coset_reps(P, Q))


def _check_invariance(action: DartAction, A: int, Z: np.ndarray, images: dict[int, np.ndarray],
                      report: SweepReport, label) -> None:
    """Vectorized ``check_separation_invariance`` over the stabilizer of ``A`` and G."""
    G = action.group
    every = frozenset(range(G.order))
    nZ = len(Z)
    plain = _sep_array(A, Z, action.full)
    for g in every:
        report.invariance.checked += nZ
        if np.any(_sep_array(action.apply(g, A), images[g], action.full) != plain):
            report.invariance.violations.append({"case": label, "set": A, "g": g})
    for H in (action.stabilizer(A), every):
        base = norm_array(action, A, Z, H, images)
        for g in H:
            moved = np.zeros(nZ, dtype=np.int64)
            for h in H:
                moved += _sep_array(A, images[G.mul[h][g]], action.full)
            report.invariance.checked += nZ
            if np.any(moved != base):
                report.invariance.violations.append({"case": label, "set": A, "g": g, "sub": sorted(H)})


def actions_up_to_relabeling(G: FiniteGroupTable, max_darts: int) -> list[DartAction]:
    """One action per multiset of orbit types with at most ``max_darts`` darts."""
    types = orbit_types(G)
    sizes = [2 * G.order // len(S) for S, _ in types]
    out = []

    def extend(start, chosen, total):
        if chosen:
            out.append(DartAction.from_types(G, [types[k] for k in chosen]))
        for k in range(start, len(types)):
            if total + sizes[k] <= max_darts:
                extend(k, chosen + [k], total + sizes[k])

    extend(0, [], 0)
    return out


def exhaustive_sweep(group: str = "z2", max_darts: int = 8) -> SweepReport:
    """Every action (up to relabeling), every pair of edge-property sets, every piece."""
    G = group_by_name(group)
    report = SweepReport(group, "exhaustive", None, max_darts)
    for k, action in enumerate(actions_up_to_relabeling(G, max_darts)):
        report.actions += 1
        Z = np.arange(1, 1 << action.ndarts, dtype=np.int64)
        images = {g: action.tables[g][Z] for g in range(G.order)}
        sets = edge_property_sets(action)
        for A in sets:
            _check_invariance(action, A, Z, images, report, k)
        for alpha in sets:
            for beta in sets:
                _check_pair_vectorized(action, alpha, beta, Z, images, report, k)
    return report


def random_action(G: FiniteGroupTable, max_darts: int, rng: random.Random) -> DartAction:
    types = orbit_types(G)
    chosen = []
    total = 0
    while True:
        fitting = [t for t in types if total + 2 * G.order // len(t[0]) <= max_darts]
        if not fitting or (chosen and rng.random() < 0.25):
            break
        t = rng.choice(fitting)
        chosen.append(t)
        total += 2 * G.order // len(t[0])
    return DartAction.from_types(G, chosen)


def random_sweep(group: str, max_darts: int = 12, samples: int = 100_000, seed: int = 0,
                 pieces_per_pair: int = 64, max_draws: int = 10_000_000) -> SweepReport:
    """Random scenarios until each inequality has ``samples`` hypothesis-satisfying cases.

    Each scenario is an action, two edge-property sets and one random piece;
    the pieces drawn for one pair are evaluated together.
    """
    G = group_by_name(group)
    rng = random.Random(seed)
    report = SweepReport(group, "random", seed, max_darts)
    draws = 0
    action = None
    while report.lemma71.checked < samples or report.lemma72.checked < samples:
        draws += 1
        if draws > max_draws:
            break
        if action is None or rng.random() < 0.02:
            action = random_action(G, max_darts, rng)
            report.actions += 1
        alpha = random_edge_property_set(action, rng)
        beta = random_edge_property_set(action, rng)
        if not alpha or not beta:
            continue
        if rng.random() < 0.5 and alpha & beta == 0:
            # bias towards overlapping pairs, which carry the hypotheses
            g = rng.randrange(G.order)
            beta = action.apply(g, beta)
        s = EquivariantScenario(action, alpha, beta, ())
        need71 = report.lemma71.checked < samples and not nested_hypotheses(s)
        need72 = report.lemma72.checked < samples and not crossing_hypotheses(s)
        if not (need71 or need72):
            report.lemma71.vacuous += 1
            continue
        Z = np.array([rng.randrange(1, 1 << action.ndarts) for _ in range(pieces_per_pair)], dtype=np.int64)
        images = {g: action.apply_array(g, Z) for g in range(G.order)}
        _check_pair_vectorized(action, alpha, beta, Z, images, report, draws)
        _check_invariance(action, alpha, Z, images, report, draws)
    return report
