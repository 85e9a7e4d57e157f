import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gmccool.freegroup import (  # noqa: E402
    Automorphism,
    SignedPermutation,
    WhiteheadII,
    format_word,
    reduce,
)

ACCEPTANCE_LINES: list[str] = []


def random_word(rng: random.Random, rank: int, length: int) -> tuple[int, ...]:
    letters = [d for i in range(1, rank + 1) for d in (i, -i)]
    w: list[int] = []
    while len(w) < length:
        d = rng.choice(letters)
        if w and w[-1] == -d:
            continue
        w.append(d)
    return tuple(w)


def random_tuple_words(rng: random.Random, rank: int, max_comps: int = 3, max_gens: int = 3,
                       max_len: int = 6) -> list[list[tuple[int, ...]]]:
    comps = []
    for _ in range(rng.randint(1, max_comps)):
        gens = []
        while not gens:
            for _ in range(rng.randint(1, max_gens)):
                w = random_word(rng, rank, rng.randint(1, max_len))
                if w:
                    gens.append(w)
        comps.append(gens)
    return comps


def random_elementary(rng: random.Random, rank: int):
    if rng.random() < 0.3:
        perm = list(range(1, rank + 1))
        rng.shuffle(perm)
        return SignedPermutation(tuple(p * rng.choice((1, -1)) for p in perm))
    darts = [d for i in range(1, rank + 1) for d in (i, -i)]
    a = rng.choice(darts)
    rest = [d for d in darts if abs(d) != abs(a)]
    A = {a} | {d for d in rest if rng.random() < 0.5}
    return WhiteheadII(rank, frozenset(A), a)


def random_automorphism(rng: random.Random, rank: int, nfactors: int) -> Automorphism:
    return Automorphism.of(*(random_elementary(rng, rank) for _ in range(nfactors))) \
        if nfactors else Automorphism.identity(rank)


def as_strings(comps) -> list[list[str]]:
    return [[format_word(reduce(w)) for w in comp] for comp in comps]


def images_as_strings(f: Automorphism) -> dict[str, str]:
    return {chr(ord("a") + i): format_word(w) for i, w in enumerate(f.images)}


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
