"""Christoffel words and rank-two primitivity."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .words import Word, WordError, cyclic_reduce, exponent_sum, rotation_offset


@dataclass(frozen=True)
class Slope:
    """A slope ``p/q``.  ``0/1`` and ``1/0`` are the degenerate slopes."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or (self.p, self.q) == (0, 0):
            raise WordError(f"invalid slope {self.p}/{self.q}")
        if gcd(self.p, self.q) != 1:
            raise WordError(f"slope {self.p}/{self.q} is not in lowest terms")

    @classmethod
    def parse(cls, text: str) -> "Slope":
        text = text.strip()
        if "/" in text:
            p, q = text.split("/", 1)
            return cls(int(p), int(q))
        return cls(int(text), 1)

    @property
    def degenerate(self) -> bool:
        return self.p == 0 or self.q == 0

    @property
    def is_integer(self) -> bool:
        return self.q == 1 and self.p > 0

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"

    def as_fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


def christoffel_steps(slope: Slope) -> list[bool]:
    """Steps of the lower lattice path from (0,0) to (q,p); ``True`` is horizontal."""
    p, q = slope.p, slope.q
    n = p + q
    return [(i * p) // n == ((i - 1) * p) // n for i in range(1, n + 1)]


def christoffel_word(slope: Slope, x: Word, y: Word) -> Word:
    """``pr_{p/q}(x, y)``: substitute ``x`` for horizontal and ``y`` for vertical steps.

    >>> from orel.words import w
    >>> str(christoffel_word(Slope(5, 6), w("a"), w("b")))
    'aababababab'
    """
    if not x or not y:
        raise WordError("christoffel_word needs nonempty x and y")
    if slope.p == 0:
        return x
    if slope.q == 0:
        return y
    letters = []
    for horizontal in christoffel_steps(slope):
        letters.extend((x if horizontal else y).letters)
    return Word(letters)


@dataclass(frozen=True)
class PrimitivityVerdict:
    primitive: bool
    letter: tuple[str, int] | None = None     # single-letter representative
    slope: Slope | None = None                 # or pr_slope(g1^s1, g2^s2)
    signs: tuple[int, int] | None = None
    generators: tuple[str, str] | None = None

    def representative(self) -> Word | None:
        if not self.primitive:
            return None
        if self.letter is not None:
            return Word((self.letter,))
        g1, g2 = self.generators
        s1, s2 = self.signs
        return christoffel_word(self.slope, Word.gen(g1, s1), Word.gen(g2, s2))


def classify_primitive_rank2(w: Word, alphabet) -> PrimitivityVerdict:
    """Decide primitivity in the free group on the two generators of ``alphabet``.

    Uses the classification of primitive elements of F(a, b) up to conjugacy:
    single letters and Christoffel words ``pr_{p/q}(a^±1, b^±1)``.  The slope is
    forced by the exponent sums, so one rotation comparison per candidate
    suffices.
    """
    gens = tuple(alphabet)
    if len(gens) != 2:
        raise WordError(f"rank-2 classification needs exactly 2 generators, got {len(gens)}")
    if not w.generators() <= set(gens):
        raise WordError(f"word {w} not over alphabet {gens}")
    g1, g2 = gens
    core = cyclic_reduce(w).core
    if len(core) == 0:
        return PrimitivityVerdict(False)
    if len(core) == 1:
        return PrimitivityVerdict(True, letter=core.letters[0], generators=gens)
    s1, s2 = exponent_sum(core, g1), exponent_sum(core, g2)
    if s1 == 0 or s2 == 0 or gcd(abs(s1), abs(s2)) != 1:
        return PrimitivityVerdict(False)
    slope = Slope(abs(s2), abs(s1))
    signs = (1 if s1 > 0 else -1, 1 if s2 > 0 else -1)
    if abs(s1) + abs(s2) != len(core):
        return PrimitivityVerdict(False)
    template = christoffel_word(slope, Word.gen(g1, signs[0]), Word.gen(g2, signs[1]))
    if rotation_offset(template.letters, core.letters) is None:
        return PrimitivityVerdict(False)
    return PrimitivityVerdict(True, slope=slope, signs=signs, generators=gens)


def is_primitive_rank2(w: Word, alphabet) -> bool:
    return classify_primitive_rank2(w, alphabet).primitive


def complement_candidates(slope: Slope):
    """Slopes ``c/d`` with ``|qc - pd| = 1``, ``0 <= c <= p``, ``0 <= d <= q``.

    Non-degenerate candidates come first, each group in lexicographic order.
    """
    p, q = slope.p, slope.q
    cands = [(c, d) for c in range(p + 1) for d in range(q + 1)
             if (c, d) != (0, 0) and gcd(c, d) == 1 and abs(q * c - p * d) == 1]
    cands.sort(key=lambda cd: (cd[0] == 0 or cd[1] == 0, cd))
    return [Slope(c, d) for c, d in cands]


def complement_slope_word(slope: Slope, a: str = "a", b: str = "b") -> tuple[Word, Slope]:
    """Return ``(pr_{c/d}(a, b), c/d)`` completing ``pr_{p/q}(a, b)`` to a free basis."""
    from .stallings import is_free_basis

    if slope.degenerate:
        raise WordError("complement_slope_word needs a non-degenerate slope")
    A, B = Word.gen(a), Word.gen(b)
    first = christoffel_word(slope, A, B)
    for cand in complement_candidates(slope):
        second = christoffel_word(cand, A, B)
        if is_free_basis([first, second], (a, b)):
            return second, cand
    raise AssertionError(f"no verified complement found for slope {slope}")
