"""Words in a free group F_n, free/cyclic reduction and automorphisms.

Darts of the rose are encoded as nonzero integers: ``i`` is the generator
x_i and ``-i`` its inverse, for ``1 <= i <= n``.  A word is a tuple of darts.
Automorphisms are kept as a factored product of elementary automorphisms
(signed permutations and Whitehead automorphisms of the second kind) together
with a cache of the basis images.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from gmccool.errors import InputError

Word = tuple[int, ...]

MAX_RANK = 26


# --- alphabet and words -------------------------------------------------------


@dataclass(frozen=True)
class RoseAlphabet:
    rank: int

    def __post_init__(self):
        if not 1 <= self.rank <= MAX_RANK:
            raise InputError(f"rank must be in 1..{MAX_RANK}, got {self.rank}")

    @property
    def darts(self) -> tuple[int, ...]:
        return tuple(d for i in range(1, self.rank + 1) for d in (i, -i))

    @staticmethod
    def involution(d: int) -> int:
        return -d

    def __contains__(self, d: int) -> bool:
        return d != 0 and abs(d) <= self.rank


def dart_index(d: int) -> int:
    """Position of a dart in the fixed order x1, X1, x2, X2, ..."""
    return 2 * (abs(d) - 1) + (d < 0)


def letter(d: int) -> str:
    c = string.ascii_lowercase[abs(d) - 1]
    return c if d > 0 else c.upper()


def parse_dart(c: str) -> int:
    if c in string.ascii_lowercase:
        return string.ascii_lowercase.index(c) + 1
    if c in string.ascii_uppercase:
        return -(string.ascii_uppercase.index(c) + 1)
    raise InputError(f"unknown letter {c!r}")


def parse_word(text: str, rank: int | None = None) -> Word:
    """Parse ``"abA B"`` style syntax (upper case = inverse, spaces ignored)."""
    letters = [parse_dart(c) for c in text if not c.isspace()]
    if rank is not None:
        for d in letters:
            if abs(d) > rank:
                raise InputError(f"letter {letter(d)!r} outside rank {rank}")
    return reduce(letters)


def format_word(w: Iterable[int]) -> str:
    return "".join(letter(d) for d in w)


def reduce(letters: Iterable[int]) -> Word:
    out: list[int] = []
    for d in letters:
        if d == 0:
            raise InputError("0 is not a dart")
        if out and out[-1] == -d:
            out.pop()
        else:
            out.append(d)
    return tuple(out)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-d for d in reversed(w))


def multiply(*words: Sequence[int]) -> Word:
    return reduce(itertools.chain.from_iterable(words))


def cyclic_reduce(w: Sequence[int]) -> tuple[Word, Word]:
    """Return ``(k, c)`` with ``w = c k c^-1`` and ``k`` cyclically reduced."""
    w = reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j], w[:i]


def is_cyclically_reduced(w: Sequence[int]) -> bool:
    return reduce(w) == tuple(w) and (len(w) < 2 or w[0] != -w[-1])


def canonical_rotation(w: Sequence[int]) -> Word:
    """Lexicographically least rotation (in dart order) of a cyclic word."""
    k, _ = cyclic_reduce(w)
    if not k:
        return ()
    rots = [k[i:] + k[:i] for i in range(len(k))]
    return min(rots, key=lambda r: [dart_index(d) for d in r])


# --- elementary automorphisms -------------------------------------------------


@dataclass(frozen=True)
class SignedPermutation:
    """Bijection of the darts commuting with inversion; ``images[i-1] = p(x_i)``."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(abs(d) for d in self.images) != list(range(1, len(self.images) + 1)):
            raise InputError(f"not a signed permutation: {self.images}")

    @property
    def rank(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, rank: int) -> SignedPermutation:
        return cls(tuple(range(1, rank + 1)))

    def __call__(self, d: int) -> int:
        image = self.images[abs(d) - 1]
        return image if d > 0 else -image

    def image(self, i: int) -> Word:
        return (self.images[i - 1],)

    def inverse(self) -> SignedPermutation:
        inv = [0] * self.rank
        for i, d in enumerate(self.images, start=1):
            inv[abs(d) - 1] = i if d > 0 else -i
        return SignedPermutation(tuple(inv))

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.rank + 1))


@dataclass(frozen=True)
class WhiteheadII:
    """Whitehead automorphism ``(A, a)`` with ``a`` in ``A`` and ``a^-1`` not in ``A``.

    x -> x a if only x in A; x -> a^-1 x if only x^-1 in A;
    x -> a^-1 x a if both are; a -> a.
    """

    rank: int
    A: frozenset[int]
    a: int

    def __post_init__(self):
        if self.a not in self.A or -self.a in self.A:
            raise InputError("WhiteheadII needs a in A and a^-1 not in A")
        if any(d == 0 or abs(d) > self.rank for d in self.A):
            raise InputError("WhiteheadII set contains darts outside the alphabet")

    def image(self, i: int) -> Word:
        a = self.a
        if i == abs(a):
            return (i,)
        pre = (-a,) if -i in self.A else ()
        post = (a,) if i in self.A else ()
        return pre + (i,) + post

    def inverse(self) -> WhiteheadII:
        return WhiteheadII(self.rank, (self.A - {self.a}) | {-self.a}, -self.a)


Elementary = Union[SignedPermutation, WhiteheadII]


def _elementary_images(e: Elementary) -> tuple[Word, ...]:
    return tuple(e.image(i) for i in range(1, e.rank + 1))


def substitute(images: Sequence[Word], w: Iterable[int]) -> Word:
    out: list[int] = []
    for d in w:
        piece = images[d - 1] if d > 0 else inverse(images[-d - 1])
        for x in piece:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


# --- automorphisms ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Automorphism:
    """Product ``factors[0] o factors[1] o ...`` of elementary automorphisms."""

    rank: int
    factors: tuple[Elementary, ...] = ()
    images: tuple[Word, ...] = field(default=(), repr=False)

    def __post_init__(self):
        if not self.images:
            object.__setattr__(self, "images", _images_of(self.rank, self.factors))

    @classmethod
    def identity(cls, rank: int) -> Automorphism:
        return cls(rank, ())

    @classmethod
    def of(cls, *factors: Elementary) -> Automorphism:
        return cls(factors[0].rank, tuple(factors))

    def __call__(self, w: Iterable[int]) -> Word:
        return substitute(self.images, w)

    def __matmul__(self, other: Automorphism) -> Automorphism:
        return compose(self, other)

    def __repr__(self) -> str:
        return f"Automorphism({', '.join(format_word(w) for w in self.images)})"

    def to_json(self) -> dict:
        return {
            "factors": [elementary_to_json(e) for e in self.factors],
            "images": [format_word(w) for w in self.images],
        }


def _images_of(rank: int, factors: Sequence[Elementary]) -> tuple[Word, ...]:
    images = tuple((i,) for i in range(1, rank + 1))
    for e in factors:
        if e.rank != rank:
            raise InputError("factor rank mismatch")
        images = tuple(substitute(images, e.image(i)) for i in range(1, rank + 1))
    return images


def elementary_to_json(e: Elementary) -> dict:
    if isinstance(e, SignedPermutation):
        return {"perm": [letter(d) for d in e.images]}
    return {"A": sorted((letter(d) for d in e.A), key=lambda c: dart_index(parse_dart(c))),
            "collapse": letter(e.a)}


def elementary_from_json(rank: int, obj: dict) -> Elementary:
    if "perm" in obj:
        return SignedPermutation(tuple(parse_dart(c) for c in obj["perm"]))
    return WhiteheadII(rank, frozenset(parse_dart(c) for c in obj["A"]), parse_dart(obj["collapse"]))


def automorphism_from_json(rank: int, obj: dict) -> Automorphism:
    return Automorphism(rank, tuple(elementary_from_json(rank, e) for e in obj["factors"]))


def apply(f: Automorphism, w: Iterable[int]) -> Word:
    return f(w)


def compose(f: Automorphism, g: Automorphism) -> Automorphism:
    """``f o g``: apply ``g`` first."""
    if f.rank != g.rank:
        raise InputError("rank mismatch")
    images = tuple(substitute(f.images, w) for w in g.images)
    return Automorphism(f.rank, f.factors + g.factors, images)


def invert(f: Automorphism) -> Automorphism:
    return Automorphism(f.rank, tuple(e.inverse() for e in reversed(f.factors)))


def _conjugate(c: Word, x: Word) -> Word:
    return multiply(c, x, inverse(c))


def is_inner(f: Automorphism) -> Word | None:
    """Return ``w`` with ``f(x) = w x w^-1`` for every generator, or ``None``.

    Candidates come from the conjugating prefixes of the basis images; each
    candidate is verified on every generator.
    """
    n = f.rank
    if n == 1:
        return () if f.images[0] == (1,) else None
    candidates: list[Word] = []
    for i, y in enumerate(f.images, start=1):
        k, c = cyclic_reduce(y)
        if k != (i,):
            return None
        candidates.append(c)
    for c in sorted(set(candidates), key=lambda w: (-len(w), [dart_index(d) for d in w])):
        if all(_conjugate(c, (i,)) == y for i, y in enumerate(f.images, start=1)):
            return c
    return None


def outer_equal(f: Automorphism, g: Automorphism) -> bool:
    return is_inner(compose(f, invert(g))) is not None


def outer_key(f: Automorphism) -> tuple:
    """Hashable invariant of the outer class (conjugacy classes of images and pairs)."""
    n = f.rank
    keys = [canonical_rotation(w) for w in f.images]
    for i, j in itertools.combinations(range(n), 2):
        keys.append(canonical_rotation(f.images[i] + f.images[j]))
    return tuple(keys)


def inner_automorphism(rank: int, w: Sequence[int]) -> Automorphism:
    """Conjugation x -> w x w^-1 written as a product of Whitehead automorphisms."""
    factors: list[Elementary] = []
    every = frozenset(d for i in range(1, rank + 1) for d in (i, -i))
    for d in reduce(w):
        # x -> d x d^-1 for x != d^{+-1} is the Whitehead move (H - {d}, d^-1)
        factors.append(WhiteheadII(rank, every - {d}, -d))
    return Automorphism(rank, tuple(factors))


def signed_permutations(rank: int) -> Iterable[SignedPermutation]:
    """All 2^n n! signed permutations; lexicographic, identity first."""
    for perm in itertools.permutations(range(1, rank + 1)):
        for signs in itertools.product((1, -1), repeat=rank):
            yield SignedPermutation(tuple(s * p for s, p in zip(signs, perm)))


# --- factoring by Nielsen reduction -------------------------------------------


def _nielsen_moves(words: tuple[Word, ...]):
    """Yield ``(new_words, elementary)`` for the moves y_i -> y_i y_j^e, y_j^e y_i."""
    n = len(words)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for e in (1, -1):
                a = e * (j + 1)
                yj = words[j] if e > 0 else inverse(words[j])
                right = WhiteheadII(n, frozenset({a, i + 1}), a)
                yield words[:i] + (multiply(words[i], yj),) + words[i + 1:], right
                left = WhiteheadII(n, frozenset({-a, -(i + 1)}), -a)
                yield words[:i] + (multiply(yj, words[i]),) + words[i + 1:], left


def _total(words) -> int:
    return sum(len(w) for w in words)


def factor_images(images: Sequence[Sequence[int]], max_plateau: int = 20000) -> Automorphism:
    """Factor the endomorphism ``x_i -> images[i]`` into elementary automorphisms.

    Nielsen reduction: right-multiplications strictly shortening the tuple are
    applied greedily; on a plateau a breadth-first search over length-preserving
    moves looks for a shortening one.  Raises :class:`InputError` if the images
    do not form a basis.
    """
    words = tuple(reduce(w) for w in images)
    n = len(words)
    moves: list[WhiteheadII] = []
    while _total(words) > n:
        best = None
        for new, nu in _nielsen_moves(words):
            if _total(new) < _total(words) and (best is None or _total(new) < _total(best[0])):
                best = (new, nu)
        if best is not None:
            words = best[0]
            moves.append(best[1])
            continue
        path = _plateau_escape(words, max_plateau)
        if path is None:
            raise InputError("images do not form a free basis")
        for new, nu in path:
            words = new
            moves.append(nu)
    if any(len(w) != 1 for w in words):
        raise InputError("images do not form a free basis")
    try:
        p = SignedPermutation(tuple(w[0] for w in words))
    except InputError:
        raise InputError("images do not form a free basis") from None
    factors: list[Elementary] = [] if p.is_identity() else [p]
    factors.extend(nu.inverse() for nu in reversed(moves))
    result = Automorphism(n, tuple(factors))
    if result.images != words_of(images):
        raise AssertionError("factorisation does not reproduce the images")
    return result


def words_of(images) -> tuple[Word, ...]:
    return tuple(reduce(w) for w in images)


def _plateau_escape(start: tuple[Word, ...], limit: int):
    level = _total(start)
    parent: dict[tuple[Word, ...], tuple] = {start: None}
    frontier = [start]
    while frontier:
        nxt = []
        for words in frontier:
            for new, nu in _nielsen_moves(words):
                t = _total(new)
                if t < level:
                    path = [(new, nu)]
                    cur = words
                    while parent[cur] is not None:
                        prev, move = parent[cur]
                        path.append((cur, move))
                        cur = prev
                    return list(reversed(path))
                if t == level and new not in parent:
                    parent[new] = (words, nu)
                    nxt.append(new)
                    if len(parent) > limit:
                        return None
        frontier = nxt
    return None


def automorphism_from_images(images: Sequence[Sequence[int]]) -> Automorphism:
    return factor_images(images)
