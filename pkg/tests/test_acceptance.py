"""Acceptance criteria 1-10.

Each ``criterion_N`` builds a JSON-serialisable report from fixed seeds; the
test records one PASS/FAIL line per criterion (shown in the pytest terminal
summary, or printed when this file is run as a script).  Criterion 10 rebuilds
every report and compares the serialised bytes.
"""

import hashlib
import itertools
import json
import random
import time

import oracles
from conftest import ACCEPTANCE_LINES, as_strings, images_as_strings, random_automorphism, random_tuple_words
from gmccool.abelian import abelian_invariants
from gmccool.equivariant import exhaustive_sweep, random_sweep
from gmccool.errors import InputError
from gmccool.freegroup import format_word, is_inner
from gmccool.graphs import rose_equivalent
from gmccool.orbit import DomainCache, SearchBudget, decide_orbit, minimize
from gmccool.stabilizer import Fixer, brown_presentation
from gmccool.stallings import SubgroupTuple, check_submodularity, stallings_tuple
from gmccool.whitehead import enumerate_moves, predicted_volume, refolded_volume

SEEDS = {1: 101, 4: 404, 6: 606, 7: 707}
REPORTS: dict[int, dict] = {}
TITLES = {
    1: "volume formula matches refolding",
    2: "rose equivalence of the aab and bba circles",
    3: "rank-1 agreement with classical Whitehead closure",
    4: "orbit round trips verified by independent refolding",
    5: "negative controls answer NO",
    6: "submodularity of separation counts",
    7: "equivariant inequality sweeps",
    8: "stabilizer generators and relators are sound",
    9: "abelianization of the presented Out(F_2)",
    10: "reports are byte-identical across runs",
}


def digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()


def random_stallings_input(rng, rank):
    while True:
        comps = random_tuple_words(rng, rank)
        K = SubgroupTuple.of(rank, *comps)
        try:
            return K, stallings_tuple(K)
        except InputError:
            continue


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {TITLES[n]} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)


# --- the criteria -------------------------------------------------------------


def criterion_1() -> dict:
    rng = random.Random(SEEDS[1])
    cases = mismatches = naive_checked = 0
    records = []
    for rank in (2, 3):
        moves = enumerate_moves(rank)
        for k in range(100):
            K, S = random_stallings_input(rng, rank)
            strings = as_strings(K.components)
            for m in moves:
                predicted = predicted_volume(S, m)
                refolded = refolded_volume(S, m)
                cases += 1
                mismatches += predicted != refolded
                records.append(list(predicted))
                if rank == 2 or k < 10:
                    # independent string-level refold on a subset
                    images = oracles.whitehead_images(rank, {format_word((d,)) for d in m.A},
                                                      format_word((m.collapse,)))
                    moved = [[oracles.substitute(images, w) for w in comp] for comp in strings]
                    naive_checked += 1
                    mismatches += list(predicted) != oracles.naive_volume(moved)
    return {"cases": cases, "naive_checked": naive_checked, "mismatches": mismatches,
            "seed": SEEDS[1], "digest": digest(records)}


def criterion_2() -> dict:
    aab, bba = SubgroupTuple.of(2, ["aab"]), SubgroupTuple.of(2, ["bba"])
    p = rose_equivalent(stallings_tuple(aab).graphs[0], stallings_tuple(bba).graphs[0], 2)
    swaps = p is not None and p.images in ((2, 1), (-2, -1), (2, -1), (-2, 1))
    single = decide_orbit(aab, bba)
    pair = decide_orbit(SubgroupTuple.of(2, ["aab"], ["aab"]), SubgroupTuple.of(2, ["aab"], ["bba"]))
    return {"relabeling": None if p is None else list(p.images), "relabeling_swaps_letters": swaps,
            "single_yes": single is not None, "ordered_pair_no": pair is None}


def cyclic_words(max_len: int) -> list[str]:
    """Cyclically reduced words of F_2 up to rotation."""
    out = set()
    for L in range(1, max_len + 1):
        for w in itertools.product("abAB", repeat=L):
            w = "".join(w)
            if oracles.cyclic_core(w) == w:
                out.add(min(w[k:] + w[:k] for k in range(L)))
    return sorted(out, key=lambda s: (len(s), s))


def criterion_3() -> dict:
    words = cyclic_words(6)
    minimal = {w: oracles.whitehead_orbit_minimal_set(w, 2) for w in words}
    tuples = {w: SubgroupTuple.of(2, [w]) for w in words}
    cache = DomainCache()
    budget = SearchBudget()
    volume_mismatch = []
    for w in words:
        D = cache.get_domain(tuples[w], budget)
        if D.min_volume != (len(next(iter(minimal[w]))),):
            volume_mismatch.append(w)
    disagreements = []
    yes = 0
    for a in words:
        for b in words:
            answer = decide_orbit(tuples[a], tuples[b], budget, cache) is not None
            yes += answer
            if answer != (minimal[a] == minimal[b]):
                disagreements.append([a, b])
    return {"words": len(words), "pairs": len(words) ** 2, "yes": yes,
            "disagreements": disagreements[:20], "disagreement_count": len(disagreements),
            "volume_mismatches": volume_mismatch}


def criterion_4() -> dict:
    rng = random.Random(SEEDS[4])
    cache = DomainCache()
    failures = []
    witnesses = []
    for k in range(500):
        rank = rng.choice((2, 3))
        K, _ = random_stallings_input(rng, rank)
        theta = random_automorphism(rng, rank, rng.randint(0, 5))
        K2 = K.map(theta)
        w = decide_orbit(K, K2, cache=cache)
        if w is None:
            failures.append(k)
            continue
        image = as_strings(K.map(w.theta).components)
        if not oracles.naive_same_tuple(image, as_strings(K2.components)):
            failures.append(k)
        witnesses.append(images_as_strings(w.theta))
    return {"pairs": 500, "failures": failures, "seed": SEEDS[4], "digest": digest(witnesses)}


def criterion_5() -> dict:
    a, aa = SubgroupTuple.of(2, ["a"]), SubgroupTuple.of(2, ["aa"])
    ab_full = SubgroupTuple.of(2, ["a", "b"])
    return {
        "a_vs_aa": decide_orbit(a, aa) is None,
        "min_volumes": [list(minimize(a).min_volume), list(minimize(aa).min_volume)],
        "full_vs_a": decide_orbit(ab_full, a) is None,
    }


def criterion_6() -> dict:
    rng = random.Random(SEEDS[6])
    darts2 = [1, -1, 2, -2]
    subsets2 = [s for r in range(5) for s in itertools.combinations(darts2, r)]
    violations = exhaustive = sampled = 0
    for _ in range(100):
        _, S = random_stallings_input(rng, 2)
        for A, B in itertools.product(subsets2, repeat=2):
            exhaustive += 1
            violations += not check_submodularity(S, A, B)
    darts3 = [1, -1, 2, -2, 3, -3]
    for _ in range(100):
        _, S = random_stallings_input(rng, 3)
        for _ in range(100):
            A = [d for d in darts3 if rng.random() < 0.5]
            B = [d for d in darts3 if rng.random() < 0.5]
            sampled += 1
            violations += not check_submodularity(S, A, B)
    return {"exhaustive_pairs": exhaustive, "sampled_pairs": sampled, "violations": violations,
            "seed": SEEDS[6]}


def criterion_7() -> dict:
    start = time.perf_counter()
    reports = [exhaustive_sweep("z2", 8).to_json(),
               random_sweep("z3", 12, 100_000, SEEDS[7]).to_json(),
               random_sweep("s3", 12, 100_000, SEEDS[7]).to_json()]
    elapsed = time.perf_counter() - start
    return {"sweeps": reports, "runtime_under_15_min": elapsed < 900}


STABILIZER_CASES = {"a": [["a"]], "ab": [["ab"]], "a,b": [["a", "b"]], "(a),(b)": [["a"], ["b"]]}


def criterion_8() -> dict:
    out = {}
    for name, comps in STABILIZER_CASES.items():
        K = SubgroupTuple.of(2, *comps)
        P = brown_presentation(K)
        fixer = Fixer(K)
        strings = as_strings(K.components)
        gens_fix = sum(fixer(g) and oracles.naive_same_tuple(as_strings(K.map(g).components), strings)
                       for g in P.generators.values())
        trivial = 0
        for r in P.relators:
            value = P.evaluate(r)
            trivial += is_inner(value) is not None and \
                oracles.conjugator_of(images_as_strings(value), 2) is not None
        out[name] = {"generators": len(P.generators), "generators_fixing": int(gens_fix),
                     "relators": len(P.relators), "relators_outer_trivial": int(trivial),
                     "verified": P.verified}
    return out


GL2Z_REFERENCE = {"presentation": "<x, y, r | x^4, x^2 y^-3, r^2, (rx)^2, (ry)^2>",
                  "rows": [[4, 0, 0], [2, -3, 0], [0, 0, 2], [2, 0, 2], [0, 2, 2]]}


def criterion_9() -> dict:
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form

    m = smith_normal_form(Matrix(GL2Z_REFERENCE["rows"]), domain=ZZ)
    ref_diag = [abs(int(m[i, i])) for i in range(min(m.shape)) if m[i, i] != 0]
    reference = [3 - len(ref_diag), [d for d in ref_diag if d > 1]]
    P = brown_presentation(SubgroupTuple.of(2, ["a", "b"]))
    free, torsion = abelian_invariants(P.relator_matrix(), len(P.generators))
    return {"reference": reference, "presented": [free, torsion], "verified": P.verified}


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9}


def report_for(n: int) -> dict:
    if n not in REPORTS:
        REPORTS[n] = CRITERIA[n]()
    return REPORTS[n]


# --- tests --------------------------------------------------------------------


def test_criterion_1_volume_formula():
    r = report_for(1)
    ok = r["mismatches"] == 0 and r["cases"] >= 100 * (8 + 84)
    record(1, ok, f"{r['cases']} tuple-move cases, {r['naive_checked']} also refolded on strings, "
                  f"{r['mismatches']} mismatches, seed {r['seed']}")
    assert ok, r


def test_criterion_2_example_pairs():
    r = report_for(2)
    ok = r["relabeling_swaps_letters"] and r["single_yes"] and r["ordered_pair_no"]
    record(2, ok, f"relabeling {r['relabeling']}, single YES, ordered pair NO")
    assert ok, r


def test_criterion_3_rank_one_agreement():
    r = report_for(3)
    ok = r["disagreement_count"] == 0 and not r["volume_mismatches"]
    record(3, ok, f"{r['words']} cyclic words, {r['pairs']} ordered pairs, {r['yes']} YES, "
                  f"{r['disagreement_count']} disagreements")
    assert ok, r


def test_criterion_4_round_trips():
    r = report_for(4)
    ok = not r["failures"]
    record(4, ok, f"{r['pairs']} pairs, {len(r['failures'])} failures, seed {r['seed']}")
    assert ok, r


def test_criterion_5_negative_controls():
    r = report_for(5)
    ok = r["a_vs_aa"] and r["full_vs_a"] and r["min_volumes"] == [[1], [2]]
    record(5, ok, f"min volumes {r['min_volumes']}")
    assert ok, r


def test_criterion_6_submodularity():
    r = report_for(6)
    ok = r["violations"] == 0 and r["exhaustive_pairs"] >= 100 * 256 and r["sampled_pairs"] >= 10_000
    record(6, ok, f"{r['exhaustive_pairs']} exhaustive and {r['sampled_pairs']} sampled pairs, "
                  f"{r['violations']} violations")
    assert ok, r


def test_criterion_7_equivariant_sweeps():
    r = report_for(7)
    sweeps = r["sweeps"]
    enough = all(s["lemma71"]["checked"] >= 100_000 and s["lemma72"]["checked"] >= 100_000
                 for s in sweeps[1:])
    ok = all(s["ok"] for s in sweeps) and enough and r["runtime_under_15_min"]
    detail = ", ".join(f"{s['group']} {s['mode']} seed {s['seed']}: "
                       f"{s['lemma71']['checked']}/{s['lemma72']['checked']} checks" for s in sweeps)
    record(7, ok, detail)
    assert ok, r


def test_criterion_8_stabilizer_soundness():
    r = report_for(8)
    ok = all(v["generators_fixing"] == v["generators"] and v["relators_outer_trivial"] == v["relators"]
             and v["verified"] for v in r.values())
    record(8, ok, "; ".join(f"{k}: {v['generators']} gens, {v['relators']} relators" for k, v in r.items()))
    assert ok, r


def test_criterion_9_gl2z_abelianization():
    r = report_for(9)
    ok = r["presented"] == r["reference"] == [0, [2, 2]] and r["verified"]
    record(9, ok, f"presented {r['presented']}, reference {r['reference']}")
    assert ok, r


def test_criterion_10_determinism():
    first = {n: json.dumps(report_for(n), sort_keys=True) for n in CRITERIA}
    second = {n: json.dumps(CRITERIA[n](), sort_keys=True) for n in CRITERIA}
    differing = [n for n in CRITERIA if first[n] != second[n]]
    ok = not differing
    record(10, ok, f"criteria 1-9 recomputed, differing: {differing or 'none'}")
    assert ok, differing


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
