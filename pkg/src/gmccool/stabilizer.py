"""Stabilizers of subgroup tuples in Out(F_n) and their finite presentations.

The group acts on the complex of marked graphs that collapse onto a
minimal-volume rose.  Vertex stabilizers are finite and are read off from
graph isomorphisms; a tree of representatives, edge orbits and triangle
orbits then give a presentation in the style of Brown.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from gmccool.errors import BudgetExhausted, ConventionError, UnsupportedRank
from gmccool.freegroup import (
    Automorphism,
    compose,
    invert,
    is_inner,
    outer_equal,
    outer_key,
)
from gmccool.markedgraphs import (
    MarkedGraph,
    blowups,
    collapse,
    forests,
    isomorphisms,
    marked_equal,
    maximal_trees,
    transporter_element,
)
from gmccool.orbit import SearchBudget, minimize
from gmccool.stallings import SubgroupTuple, stallings_tuple

DEFAULT_RANK_BOUND = 3


def star_vertices(rose: MarkedGraph, rank_bound: int = DEFAULT_RANK_BOUND) -> list[MarkedGraph]:
    if rose.rank > rank_bound:
        raise UnsupportedRank(f"star enumeration is limited to rank {rank_bound}")
    if not rose.is_rose():
        raise ValueError("star_vertices expects a rose")
    return blowups(rose)


def transporters(x: MarkedGraph, y: MarkedGraph) -> list[Automorphism]:
    """Distinct outer classes ``g`` with ``g . x = y``."""
    out: list[Automorphism] = []
    keys: dict[tuple, list[Automorphism]] = {}
    for iso in isomorphisms(x, y):
        g = transporter_element(x, y, iso)
        bucket = keys.setdefault(outer_key(g), [])
        if any(outer_equal(g, h) for h in bucket):
            continue
        bucket.append(g)
        out.append(g)
    return out


class Fixer:
    """Tests whether an automorphism fixes a tuple of conjugacy classes."""

    def __init__(self, K: SubgroupTuple):
        self.K = K
        self.code = stallings_tuple(K).code

    def __call__(self, g: Automorphism) -> bool:
        return stallings_tuple(self.K.map(g)).code == self.code


@dataclass
class FiniteGroup:
    elements: list[Automorphism]
    table: list[list[int]]

    def index(self, g: Automorphism) -> int:
        for k, h in enumerate(self.elements):
            if outer_equal(g, h):
                return k
        raise KeyError("element not in group")

    @property
    def order(self) -> int:
        return len(self.elements)

    def identity_index(self) -> int:
        return self.index(Automorphism.identity(self.elements[0].rank))

    def inverse_index(self, k: int) -> int:
        e = self.identity_index()
        return next(j for j in range(self.order) if self.table[k][j] == e)


def _group_from(elements: list[Automorphism]) -> FiniteGroup:
    elements = list(elements)
    keyed: dict[tuple, list[int]] = {}

    def find(g):
        for k in keyed.get(outer_key(g), []):
            if outer_equal(g, elements[k]):
                return k
        return None

    for k, g in enumerate(elements):
        keyed.setdefault(outer_key(g), []).append(k)
    table = []
    for a in range(len(elements)):
        row = []
        for b in range(len(elements)):
            p = compose(elements[a], elements[b])
            j = find(p)
            if j is None:
                raise ConventionError("stabilizer is not closed under composition")
            row.append(j)
        table.append(row)
    return FiniteGroup(elements, table)


def vertex_stabilizer_in_GMc(x: MarkedGraph, K: SubgroupTuple, fixer: Fixer | None = None) -> FiniteGroup:
    fixer = fixer or Fixer(K)
    elements = [g for g in transporters(x, x) if fixer(g)]
    # identity first
    elements.sort(key=lambda g: is_inner(g) is None)
    return _group_from(elements)


# --- the complex --------------------------------------------------------------


@dataclass
class Presentation:
    rank: int
    generators: dict[str, Automorphism]
    relators: list[list[tuple[str, int]]]
    verified: bool = False
    info: dict = field(default_factory=dict)

    def evaluate(self, relator: list[tuple[str, int]]) -> Automorphism:
        value = Automorphism.identity(self.rank)
        for name, s in relator:
            g = self.generators[name]
            value = compose(value, g if s > 0 else invert(g))
        return value

    def verify(self, K: SubgroupTuple) -> bool:
        fixer = Fixer(K)
        ok = all(fixer(g) for g in self.generators.values())
        ok = ok and all(is_inner(self.evaluate(r)) is not None for r in self.relators)
        self.verified = ok
        return ok

    def relator_matrix(self) -> list[list[int]]:
        names = list(self.generators)
        col = {name: k for k, name in enumerate(names)}
        rows = []
        for r in self.relators:
            row = [0] * len(names)
            for name, s in r:
                row[col[name]] += s
            rows.append(row)
        return rows

    def to_json(self, generators_only: bool = False) -> dict:
        out = {"generators": [{"name": name, **g.to_json()} for name, g in self.generators.items()],
               "verified": self.verified}
        if not generators_only:
            out["relators"] = [[name if s > 0 else name + "^-1" for name, s in r] for r in self.relators]
            out["info"] = self.info
        return out


class _Complex:
    """Quotient data of the action on the complex of marked graphs."""

    def __init__(self, K: SubgroupTuple, budget: SearchBudget, rank_bound: int, max_vertices: int):
        if K.rank > rank_bound:
            raise UnsupportedRank(f"presentations are limited to rank {rank_bound}")
        if K.rank < 2:
            raise UnsupportedRank("presentations need rank at least 2")
        self.K = K
        self.fixer = Fixer(K)
        self.domain = minimize(K, budget)
        self.rank_bound = rank_bound
        self.max_vertices = max_vertices
        self.reps: list[MarkedGraph] = []
        self.stabs: list[FiniteGroup] = []
        self.tree_edges: set[tuple[int, int]] = set()

    # membership in the complex
    def in_complex(self, x: MarkedGraph) -> bool:
        if "in_L" not in x._cache:
            x._cache["in_L"] = any(
                stallings_tuple(self.K.map(invert(rose.marking))).volume == self.domain.min_volume
                for rose in (collapse(x, T) if T else x for T in maximal_trees(x.nverts, x.edges)))
        return x._cache["in_L"]

    def down(self, x: MarkedGraph) -> list[tuple[frozenset[int], MarkedGraph]]:
        out = []
        for F in forests(x.nverts, x.edges):
            y = collapse(x, F)
            if self.in_complex(y):
                out.append((F, y))
        return out

    def up(self, x: MarkedGraph) -> list[MarkedGraph]:
        if not x.is_rose():
            return []
        return [y for y in star_vertices(x, self.rank_bound)[1:] if self.in_complex(y)]

    def locate(self, y: MarkedGraph) -> tuple[int, Automorphism] | None:
        """``(k, g)`` with ``y = g . reps[k]`` and ``g`` in the stabilizer of K."""
        key = (y.nverts, len(y.edges))
        for k, w in enumerate(self.reps):
            if (w.nverts, len(w.edges)) != key:
                continue
            if marked_equal(w, y):
                return k, Automorphism.identity(y.rank)
            for iso in isomorphisms(w, y):
                g = transporter_element(w, y, iso)
                if self.fixer(g):
                    return k, g
        return None

    def build_vertices(self):
        start = MarkedGraph.rose(self.domain.ordered()[0][1].marking)
        self.reps.append(start)
        queue = deque([0])
        while queue:
            k = queue.popleft()
            v = self.reps[k]
            nbrs = [y for _, y in self.down(v)] + self.up(v)
            for y in nbrs:
                if self.locate(y) is None:
                    self.reps.append(y)
                    j = len(self.reps) - 1
                    big, small = (k, j) if v.nverts > y.nverts else (j, k)
                    self.tree_edges.add((big, small))
                    queue.append(j)
                    if len(self.reps) > self.max_vertices:
                        raise BudgetExhausted("too many vertex orbits")
        self.stabs = [vertex_stabilizer_in_GMc(v, self.K, self.fixer) for v in self.reps]

    def same_vertex_under(self, h: Automorphism, y: MarkedGraph, z: MarkedGraph) -> bool:
        return marked_equal(y.act(h), z)


def brown_presentation(K: SubgroupTuple, budget: SearchBudget = SearchBudget(),
                       rank_bound: int = DEFAULT_RANK_BOUND, max_vertices: int = 500) -> Presentation:
    cx = _Complex(K, budget, rank_bound, max_vertices)
    cx.build_vertices()
    reps, stabs = cx.reps, cx.stabs
    n = K.rank

    generators: dict[str, Automorphism] = {}
    relators: list[list[tuple[str, int]]] = []

    def sname(v: int, k: int) -> str:
        return f"s{v}_{k}"

    for v, G in enumerate(stabs):
        for k, g in enumerate(G.elements):
            generators[sname(v, k)] = g
        relators.append([(sname(v, G.identity_index()), 1)])
        for a in range(G.order):
            for b in range(G.order):
                relators.append([(sname(v, a), 1), (sname(v, b), 1), (sname(v, G.table[a][b]), -1)])

    # edge orbit representatives: (origin, target graph, far rep, g_e, name)
    edges: list[dict] = []
    for v, x in enumerate(reps):
        G = stabs[v]
        targets = []
        for _, y in cx.down(x):
            if any(marked_equal(y, z) for z in targets):
                continue
            targets.append(y)
        located = [(y, cx.locate(y)) for y in targets]
        # edges of the tree of representatives first
        located.sort(key=lambda p: (not (p[1][1].images == tuple((i,) for i in range(1, n + 1))
                                        and (v, p[1][0]) in cx.tree_edges),))
        chosen: list[dict] = []
        for y, (w, g) in located:
            if any(cx.same_vertex_under(h, e["target"], y) for e in chosen for h in G.elements):
                continue
            tree = (v, w) in cx.tree_edges and marked_equal(y, reps[w])
            e = {"origin": v, "target": y, "rep": w, "g": Automorphism.identity(n) if tree else g,
                 "tree": tree, "name": None}
            if not tree:
                e["name"] = f"t{len(edges) + len(chosen)}"
                generators[e["name"]] = e["g"]
            chosen.append(e)
        edges.extend(chosen)

    def t_word(e, s):
        return [(e["name"], s)] if e["name"] is not None else []

    # edge relations
    for e in edges:
        G = stabs[e["origin"]]
        W = stabs[e["rep"]]
        g = e["g"]
        for a, h in enumerate(G.elements):
            if not marked_equal(e["target"].act(h), e["target"]):
                continue
            conj = compose(invert(g), compose(h, g))
            b = W.index(conj)
            relators.append(t_word(e, -1) + [(sname(e["origin"], a), 1)] + t_word(e, 1)
                            + [(sname(e["rep"], b), -1)])

    def step_down(w: int, gamma: Automorphism, z: MarkedGraph):
        """Edge from gamma.reps[w] down to z."""
        local = z.act(invert(gamma))
        for e in edges:
            if e["origin"] != w:
                continue
            for a, h in enumerate(stabs[w].elements):
                if marked_equal(e["target"].act(h), local):
                    return [(sname(w, a), 1)] + t_word(e, 1), compose(gamma, compose(h, e["g"])), e["rep"]
        raise ConventionError("edge not found among orbit representatives")

    def step_up(w: int, gamma: Automorphism, z: MarkedGraph):
        """Edge from gamma.reps[w] up to z."""
        local = z.act(invert(gamma))
        for e in edges:
            if e["rep"] != w:
                continue
            for a, s in enumerate(stabs[w].elements):
                k = compose(s, invert(e["g"]))
                if marked_equal(reps[e["origin"]].act(k), local):
                    return [(sname(w, a), 1)] + t_word(e, -1), compose(gamma, k), e["origin"]
        raise ConventionError("edge not found among orbit representatives")

    triangles = 0
    for v, x in enumerate(reps):
        G = stabs[v]
        seen: list[tuple[MarkedGraph, MarkedGraph]] = []
        fs = list(forests(x.nverts, x.edges))
        for F1, F2 in itertools.permutations(fs, 2):
            if not F1 < F2:
                continue
            c = collapse(x, F2)
            if not cx.in_complex(c):
                continue
            b = collapse(x, F1)
            if any(marked_equal(b.act(h), b2) and marked_equal(c.act(h), c2)
                   for b2, c2 in seen for h in G.elements):
                continue
            seen.append((b, c))
            triangles += 1
            word: list[tuple[str, int]] = []
            gamma = Automorphism.identity(n)
            w = v
            for nxt, direction in ((b, "down"), (c, "down"), (x, "up")):
                step = step_down if direction == "down" else step_up
                part, gamma, w = step(w, gamma, nxt)
                word.extend(part)
            if w != v:
                raise ConventionError("triangle walk did not return to its start")
            word.append((sname(v, G.index(gamma)), -1))
            relators.append(word)

    pres = Presentation(n, generators, relators)
    pres.info = {
        "vertex_orbits": [{"vertices": x.nverts, "edges": len(x.edges), "stabilizer_order": G.order}
                          for x, G in zip(reps, stabs)],
        "edge_orbits": len(edges),
        "tree_edges": sum(1 for e in edges if e["tree"]),
        "triangle_orbits": triangles,
        "min_volume": list(cx.domain.min_volume),
    }
    if not pres.verify(K):
        raise ConventionError("presentation failed verification")
    return pres
