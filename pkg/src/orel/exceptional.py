"""Primitive exceptional intersection (PEI) words.

Recognition takes the decomposition ``(x, y[, z], slope)`` as input.  The
quantifier over ``B``-shifts in the refactorization condition is checked only
up to a shift budget; every verdict records the budget it was checked at.
:func:`find_pei_decompositions` is a bounded, incomplete search for
decompositions of a bare word.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct

from .christoffel import Slope, christoffel_word
from .stallings import malnormal_cyclic_family
from .words import Word, WordError, abelianization, cyclic_reduce

MAX_SHIFT_WORDS = 4096


@dataclass(frozen=True)
class MagnusPartition:
    A: frozenset
    B: frozenset
    C: frozenset

    def __post_init__(self):
        for name in "ABC":
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if not self.A or not self.C:
            raise WordError("partition blocks A and C must be nonempty")
        if self.A & self.B or self.A & self.C or self.B & self.C:
            raise WordError("partition blocks must be disjoint")

    @classmethod
    def of(cls, A, B, C) -> "MagnusPartition":
        return cls(frozenset(A), frozenset(B), frozenset(C))

    @property
    def generators(self) -> tuple[str, ...]:
        return tuple(sorted(self.A | self.B | self.C))

    def in_B(self, w: Word) -> bool:
        return w.generators() <= self.B

    def in_AB_not_B(self, w: Word) -> bool:
        gens = w.generators()
        return gens <= self.A | self.B and bool(gens & self.A)

    def in_BC_not_B(self, w: Word) -> bool:
        gens = w.generators()
        return gens <= self.B | self.C and bool(gens & self.C)

    def to_dict(self) -> dict:
        return {k: sorted(getattr(self, k)) for k in "ABC"}


def b_words(B, max_len: int) -> list[Word]:
    """All reduced words over ``B`` of length at most ``max_len``, shortest first."""
    letters = [(g, s) for g in sorted(B) for s in (1, -1)]
    out = [Word()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for t in frontier:
            for g, s in letters:
                if t and t[-1] == (g, -s):
                    continue
                nxt.append(t + ((g, s),))
        out.extend(Word(t) for t in nxt)
        frontier = nxt
    return out


@lru_cache(maxsize=None)
def count_b_words(nb: int, max_len: int) -> int:
    if nb == 0:
        return 1
    return 1 + sum(2 * nb * (2 * nb - 1) ** (k - 1) for k in range(1, max_len + 1))


def default_shift_budget(w: Word, part: MagnusPartition, cap: int = MAX_SHIFT_WORDS) -> int:
    """``2|w|``, lowered until the number of shifts is at most ``cap``."""
    s = 2 * len(w)
    while s > 0 and count_b_words(len(part.B), s) > cap:
        s -= 1
    return s


def enumerate_product_factorizations(v: Word, part: MagnusPartition, shift_budget: int) -> list[tuple[Word, Word]]:
    """Pairs ``(a, c)`` with ``a c = v``, ``a`` in <A,B> - <B>, ``c`` in <B,C> - <B>.

    Every solution has the form ``(a0 b, b^-1 c0)`` for ``b`` in <B>, with
    ``a0`` the longest prefix of ``v`` inside <A,B>; only ``|b| <= shift_budget``
    is enumerated.
    """
    L = v.letters
    ab = part.A | part.B
    i = 0
    while i < len(L) and L[i][0] in ab:
        i += 1
    a0, c0 = Word(L[:i]), Word(L[i:])
    if not c0.generators() <= part.B | part.C:
        return []
    out = []
    for b in b_words(part.B, shift_budget):
        a, c = a0 * b, b.inverse() * c0
        if part.in_AB_not_B(a) and part.in_BC_not_B(c):
            out.append((a, c))
    return out


@dataclass(frozen=True)
class PEIClassification:
    tag: str                          # FirstType | SecondType | Rejected
    slope: Slope | None = None
    x: Word | None = None
    y: Word | None = None
    z: Word | None = None
    word: Word | None = None
    reason: str | None = None
    witness: tuple | None = None
    budget: int | None = None
    strength: str = "exact"

    @property
    def accepted(self) -> bool:
        return self.tag != "Rejected"

    def to_dict(self) -> dict:
        def s(v):
            return None if v is None else str(v)
        return {
            "verdict": "accepted" if self.accepted else "rejected",
            "type": self.tag,
            "slope": s(self.slope),
            "x": s(self.x),
            "y": s(self.y),
            "z": s(self.z),
            "word": s(self.word),
            "reason": self.reason,
            "budget": self.budget,
            "strength": self.strength,
            "witness": None if self.witness is None else [str(u) for u in self.witness],
        }


@lru_cache(maxsize=4096)
def _refactorization_witness(word: Word, part: MagnusPartition, budget: int):
    for a, c in enumerate_product_factorizations(word, part, budget):
        if not malnormal_cyclic_family([a, c]):
            return a, c
    return None


def check_first_type(x: Word, y: Word, slope: Slope, part: MagnusPartition,
                     shift_budget: int | None = None) -> PEIClassification:
    """Is ``pr_slope(x, y)`` a PEI word of the first type?"""
    kw = dict(slope=slope, x=x, y=y)
    if not part.in_AB_not_B(x):
        return PEIClassification("Rejected", reason="x not in <A,B> - <B>", witness=(x, y), **kw)
    if not part.in_BC_not_B(y):
        return PEIClassification("Rejected", reason="y not in <B,C> - <B>", witness=(x, y), **kw)
    word = christoffel_word(slope, x, y)
    mv = malnormal_cyclic_family([x, y])
    if not mv:
        return PEIClassification("Rejected", word=word, reason=f"{{<x>, <y>}} not malnormal: {mv.reason}",
                                 witness=(x, y), **kw)
    if (slope.p, slope.q) != (1, 1):
        return PEIClassification("FirstType", word=word, **kw)
    budget = default_shift_budget(word, part) if shift_budget is None else shift_budget
    bad = _refactorization_witness(word, part, budget)
    if bad is not None:
        return PEIClassification("Rejected", word=word, budget=budget,
                                 reason="pr_1(x, y) = pr_1(u, v) with {<u>, <v>} not malnormal",
                                 witness=bad, **kw)
    return PEIClassification("FirstType", word=word, budget=budget,
                             strength=f"verified up to budget {budget}", **kw)


def check_second_type(x: Word, y: Word, z: Word, slope: Slope, part: MagnusPartition,
                      shift_budget: int | None = None) -> PEIClassification:
    """Is ``pr_slope(xy, z)`` a PEI word of the second type?"""
    kw = dict(slope=slope, x=x, y=y, z=z)
    if not part.in_AB_not_B(x):
        return PEIClassification("Rejected", reason="x not in <A,B> - <B>", witness=(x, y, z), **kw)
    if not part.in_BC_not_B(y):
        return PEIClassification("Rejected", reason="y not in <B,C> - <B>", witness=(x, y, z), **kw)
    if not z or not part.in_B(z):
        return PEIClassification("Rejected", reason="z not in <B> - 1", witness=(x, y, z), **kw)
    word = christoffel_word(slope, x * y, z)
    mv = malnormal_cyclic_family([z])
    if not mv:
        return PEIClassification("Rejected", word=word, reason=f"<z> not malnormal: {mv.reason}",
                                 witness=(z,), **kw)
    if not slope.is_integer:
        return PEIClassification("SecondType", word=word, **kw)
    budget = default_shift_budget(word, part) if shift_budget is None else shift_budget
    bad = _refactorization_witness(word, part, budget)
    if bad is not None:
        return PEIClassification("Rejected", word=word, budget=budget,
                                 reason="pr_k(xy, z) = pr_1(u, v) with {<u>, <v>} not malnormal",
                                 witness=bad, **kw)
    return PEIClassification("SecondType", word=word, budget=budget,
                             strength=f"verified up to budget {budget}", **kw)


@dataclass(frozen=True)
class IntersectionDescription:
    """``<A,B> ∩ <B,C> = <base> * <extra>`` in the one-relator group."""

    base: frozenset
    extra: Word | None

    def __str__(self) -> str:
        b = ", ".join(sorted(self.base))
        return f"<{b}> * <{self.extra}>" if self.extra is not None else f"<{b}>"


def magnus_intersection(cls: PEIClassification, part: MagnusPartition) -> IntersectionDescription:
    if cls.tag == "FirstType":
        return IntersectionDescription(part.B, cls.x ** cls.slope.q)
    if cls.tag == "SecondType":
        return IntersectionDescription(part.B, cls.x.inverse() * cls.z * cls.x)
    raise WordError("magnus_intersection needs an accepted classification")


# --- graph of groups --------------------------------------------------------

@dataclass(frozen=True)
class VertexGroup:
    name: str
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def to_dict(self) -> dict:
        return {"name": self.name, "generators": list(self.generators),
                "relators": [str(r) for r in self.relators]}


@dataclass(frozen=True)
class EdgeGroup:
    left: str
    left_words: tuple[Word, ...]
    right: str
    right_words: tuple[Word, ...]

    def to_dict(self) -> dict:
        return {"left": self.left, "left_words": [str(u) for u in self.left_words],
                "right": self.right, "right_words": [str(u) for u in self.right_words]}


@dataclass(frozen=True)
class GraphOfGroups:
    vertices: tuple[VertexGroup, ...]
    edges: tuple[EdgeGroup, ...]

    def vertex(self, name: str) -> VertexGroup:
        return next(v for v in self.vertices if v.name == name)

    def is_valid(self) -> bool:
        for e in self.edges:
            for side, words in ((e.left, e.left_words), (e.right, e.right_words)):
                gens = set(self.vertex(side).generators)
                if any(not u.generators() <= gens for u in words):
                    return False
            if len(e.left_words) != len(e.right_words):
                return False
        return True

    def to_dict(self) -> dict:
        return {"vertices": [v.to_dict() for v in self.vertices],
                "edges": [e.to_dict() for e in self.edges]}


def _fresh(base: str, used: set) -> str:
    name, k = base, 0
    while name in used:
        k += 1
        name = f"{base}{k}"
    used.add(name)
    return name


def exceptional_splitting(cls: PEIClassification, part: MagnusPartition) -> GraphOfGroups:
    """Three-vertex splitting of the one-relator group along its Magnus subgroups."""
    if not cls.accepted:
        raise WordError("exceptional_splitting needs an accepted classification")
    used = set(part.generators)
    B = tuple(sorted(part.B))
    Bw = tuple(Word.gen(b) for b in B)
    left = VertexGroup("<A,B>", tuple(sorted(part.A | part.B)))
    right = VertexGroup("<B,C>", tuple(sorted(part.B | part.C)))
    fa, fc = Word.gen(_fresh("p_a", used)), Word.gen(_fresh("p_c", used))
    r = christoffel_word(cls.slope, fa, fc)
    if cls.tag == "FirstType":
        mid = VertexGroup("H", B + (str(fa), str(fc)), (r,))
        edges = (
            EdgeGroup("<A,B>", Bw + (cls.x,), "H", Bw + (fa,)),
            EdgeGroup("H", Bw + (fc,), "<B,C>", Bw + (cls.y,)),
        )
    else:
        fd, fe = Word.gen(_fresh("p_d", used)), Word.gen(_fresh("p_e", used))
        rels = (r, fc.inverse() * cls.z, fa.inverse() * fd * fe)
        mid = VertexGroup("H", B + (str(fa), str(fc), str(fd), str(fe)), rels)
        edges = (
            EdgeGroup("<A,B>", Bw + (cls.x,), "H", Bw + (fd,)),
            EdgeGroup("H", Bw + (fe,), "<B,C>", Bw + (cls.y,)),
        )
    return GraphOfGroups((left, mid, right), edges)


# --- bounded decomposition search ---------------------------------------------

def _coprime_slopes(n: int):
    from math import gcd
    for total in range(2, n + 1):
        for q in range(1, total):
            p = total - q
            if gcd(p, q) == 1:
                yield Slope(p, q)


def find_pei_decompositions(w: Word, part: MagnusPartition, shift_budget: int = 2,
                            rotations: bool = False, check_budget: int | None = None,
                            second_type: bool = True) -> list[PEIClassification]:
    """Search Christoffel templates for PEI decompositions of ``w`` (incomplete)."""
    gens = part.generators
    targets = [w]
    if rotations:
        core = cyclic_reduce(w).core.letters
        targets = list(dict.fromkeys(Word(core[k:] + core[:k]) for k in range(len(core))))
    shifts = b_words(part.B, shift_budget)
    found: dict = {}
    for t in targets:
        n = len(t)
        sig = abelianization(t, gens)
        L = t.letters
        xs = {a0 * b for i in range(1, n) for a0 in (Word(L[:i]),) for b in shifts}
        ys = {b * c0 for j in range(1, n) for c0 in (Word(L[j:]),) for b in shifts}
        xs = sorted((x for x in xs if part.in_AB_not_B(x)), key=Word.sort_key)
        ys = sorted((y for y in ys if part.in_BC_not_B(y)), key=Word.sort_key)
        xsig = {x: abelianization(x, gens) for x in xs}
        ysig = {y: abelianization(y, gens) for y in ys}
        slopes = list(_coprime_slopes(n))
        for slope in slopes:
            p, q = slope.p, slope.q
            for x, y in iproduct(xs, ys):
                if any(q * a + p * b != s for a, b, s in zip(xsig[x], ysig[y], sig)):
                    continue
                if christoffel_word(slope, x, y) != t:
                    continue
                cls = check_first_type(x, y, slope, part, check_budget)
                if cls.accepted:
                    found.setdefault(("FirstType", str(slope), x, y, None), cls)
        if not second_type or not part.B:
            continue
        Xs = sorted({Word(L[:i]) * b for i in range(1, n + 1) for b in shifts}, key=Word.sort_key)
        Xs = [X for X in Xs if X.generators() & part.A and X.generators() & part.C]
        j = n
        while j > 0 and L[j - 1][0] in part.B:
            j -= 1
        zs = sorted({b * Word(L[k:]) for k in range(j, n + 1) for b in shifts}, key=Word.sort_key)
        zs = [z for z in zs if z]
        Xsig = {X: abelianization(X, gens) for X in Xs}
        zsig = {z: abelianization(z, gens) for z in zs}
        for slope in slopes:
            p, q = slope.p, slope.q
            for X, z in iproduct(Xs, zs):
                if any(q * a + p * b != s for a, b, s in zip(Xsig[X], zsig[z], sig)):
                    continue
                if christoffel_word(slope, X, z) != t:
                    continue
                # the verdict does not depend on which factorization of X is used
                facs = enumerate_product_factorizations(X, part, shift_budget)
                if facs:
                    x, y = facs[0]
                    cls = check_second_type(x, y, z, slope, part, check_budget)
                    if cls.accepted:
                        found.setdefault(("SecondType", str(slope), x, y, z), cls)
    return sorted(found.values(), key=lambda c: (c.tag, len(c.x) + len(c.y) + len(c.z or ()), str(c.slope), str(c.x), str(c.y)))


def in_normal_closure_bounded(target: Word, relator: Word, alphabet, max_conjugates: int = 2,
                              max_conjugator_length: int = 2) -> bool:
    """Semi-decision: is ``target`` a product of few short conjugates of ``relator^±1``?

    ``False`` means only "not found within the bounds".
    """
    from .words import Word as W
    conjs = set()
    letters = [(g, s) for g in alphabet for s in (1, -1)]
    gs = [W()]
    frontier = [()]
    for _ in range(max_conjugator_length):
        nxt = [t + (l,) for t in frontier for l in letters if not (t and t[-1] == (l[0], -l[1]))]
        gs.extend(W(t) for t in nxt)
        frontier = nxt
    for g in gs:
        for r in (relator, relator.inverse()):
            conjs.add(g.inverse() * r * g)
    half = [{W()}]
    for _ in range((max_conjugates + 1) // 2):
        half.append({u * c for u in half[-1] for c in conjs} | half[-1])
    left = half[-1]
    right_n = max_conjugates // 2
    right = half[right_n]
    return any(u.inverse() * target in right for u in left)
