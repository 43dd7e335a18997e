"""Free group words: reduction, cyclic reduction, roots, conjugacy and text syntax.

A letter is a pair ``(name, sign)`` with ``sign`` in ``{+1, -1}``.  Words are
immutable and always freely reduced; every constructor reduces.

Text syntax
-----------
Compact form, for alphabets of single-character generators: ``aBa`` is
``a b^-1 a`` (uppercase means inverse).  General form: whitespace separated
tokens with an optional integer exponent, ``a b^-1 a^2``.  The identity is
printed as ``1``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

Letter = tuple[str, int]

_GEN_RE = re.compile(r"[a-z][a-z0-9_]*\Z")
_TOKEN_RE = re.compile(r"([a-z][a-z0-9_]*)(?:\^(-?\d+))?\Z")


class WordError(ValueError):
    pass


def _reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for name, sign in letters:
        if out and out[-1][0] == name and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((name, sign))
    return tuple(out)


@dataclass(frozen=True)
class Alphabet:
    """Ordered generator list with an optional ``(A, B, C)`` partition."""

    generators: tuple[str, ...]
    partition: tuple[frozenset, frozenset, frozenset] | None = None

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        for g in gens:
            if not _GEN_RE.match(g):
                raise WordError(f"invalid generator name {g!r}")
        if len(set(gens)) != len(gens):
            raise WordError(f"duplicate generator in {gens}")
        if self.partition is not None:
            parts = tuple(frozenset(p) for p in self.partition)
            object.__setattr__(self, "partition", parts)
            for i, p in enumerate(parts):
                if not p <= set(gens):
                    raise WordError(f"partition block {'ABC'[i]} not contained in alphabet")
                for q in parts[i + 1:]:
                    if p & q:
                        raise WordError("partition blocks must be disjoint")

    def __contains__(self, name) -> bool:
        return name in self.generators

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    @property
    def compact(self) -> bool:
        return all(len(g) == 1 for g in self.generators)


@dataclass(frozen=True, order=False)
class Word:
    """A freely reduced word.  ``Word([("a", 1), ("a", -1)])`` is the identity."""

    letters: tuple[Letter, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce((n, 1 if s > 0 else -1) for n, s in self.letters))

    @classmethod
    def gen(cls, name: str, exponent: int = 1) -> "Word":
        sign = 1 if exponent > 0 else -1
        return cls(((name, sign),) * abs(exponent))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.letters[item])
        return self.letters[item]

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        return Word(self.letters * n)

    def inverse(self) -> "Word":
        return Word(tuple((g, -s) for g, s in reversed(self.letters)))

    def generators(self) -> frozenset:
        return frozenset(g for g, _ in self.letters)

    def substitute(self, images: dict) -> "Word":
        """Apply the homomorphism sending each generator ``g`` to ``images[g]``."""
        out: list[Letter] = []
        for g, s in self.letters:
            img = images[g] if g in images else Word(((g, 1),))
            out.extend(img.letters if s > 0 else img.inverse().letters)
        return Word(out)

    def sort_key(self):
        return (len(self.letters), tuple((g, -s) for g, s in self.letters))

    def __lt__(self, other: "Word") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


IDENTITY = Word()


@dataclass(frozen=True)
class CyclicDecomposition:
    """``word = conjugator^-1 * core * conjugator`` with ``core`` cyclically reduced."""

    conjugator: Word
    core: Word


@dataclass(frozen=True)
class PowerDecomposition:
    root: Word
    exponent: int


def free_reduce(raw: Sequence[Letter] | Word, alphabet: Alphabet | Iterable[str] | None = None) -> Word:
    """Freely reduce a sequence of signed letters.

    Raises ``WordError`` if a letter is not in ``alphabet`` (when given).
    """
    letters = raw.letters if isinstance(raw, Word) else tuple(raw)
    if alphabet is not None:
        names = set(alphabet)
        for g, s in letters:
            if g not in names:
                raise WordError(f"unknown generator {g!r}")
            if s not in (1, -1):
                raise WordError(f"bad sign {s!r} on generator {g!r}")
    return Word(letters)


def is_cyclically_reduced(w: Word) -> bool:
    L = w.letters
    return len(L) < 2 or not (L[0][0] == L[-1][0] and L[0][1] == -L[-1][1])


def cyclic_reduce(w: Word) -> CyclicDecomposition:
    L = w.letters
    i, j = 0, len(L) - 1
    while i < j and L[i][0] == L[j][0] and L[i][1] == -L[j][1]:
        i += 1
        j -= 1
    # w = L[:i] core L[j+1:], and L[j+1:] is the inverse of L[:i]
    return CyclicDecomposition(conjugator=Word(L[j + 1:]), core=Word(L[i:j + 1]))


def exponent_sum(w: Word, g: str) -> int:
    return sum(s for h, s in w.letters if h == g)


def _core_period(core: tuple) -> int:
    n = len(core)
    for d in range(1, n + 1):
        if n % d == 0 and core[:d] * (n // d) == core:
            return d
    return n


def primitive_root(w: Word) -> PowerDecomposition:
    """Maximal power decomposition ``w = root^exponent``."""
    if not w:
        raise WordError("the identity has no primitive root")
    dec = cyclic_reduce(w)
    core = dec.core.letters
    d = _core_period(core)
    y = dec.conjugator
    root = y.inverse() * Word(core[:d]) * y
    return PowerDecomposition(root=root, exponent=len(core) // d)


def is_proper_power(w: Word) -> bool:
    return bool(w) and primitive_root(w).exponent > 1


def rotation_offset(u: Sequence, v: Sequence) -> int | None:
    """Return ``k`` with ``v == u[k:] + u[:k]``, or ``None``."""
    u, v = tuple(u), tuple(v)
    if len(u) != len(v):
        return None
    if not u:
        return 0
    for k in range(len(u)):
        if u[k:] + u[:k] == v:
            return k
    return None


def conjugator(u: Word, v: Word) -> Word | None:
    """Some ``g`` with ``v == g^-1 u g``, or ``None`` if not conjugate."""
    du, dv = cyclic_reduce(u), cyclic_reduce(v)
    k = rotation_offset(du.core.letters, dv.core.letters)
    if k is None:
        return None
    # core_v = s^-1 core_u s with s the rotated prefix
    s = Word(du.core.letters[:k])
    return du.conjugator.inverse() * s * dv.conjugator


def is_conjugate(u: Word, v: Word) -> bool:
    return conjugator(u, v) is not None


def cyclic_normal_form(w: Word) -> tuple:
    """Lexicographically least rotation of the cyclic core (a conjugacy invariant)."""
    core = cyclic_reduce(w).core.letters
    if not core:
        return ()
    keyed = [tuple((g, -s) for g, s in core[k:] + core[:k]) for k in range(len(core))]
    best = min(range(len(core)), key=lambda k: keyed[k])
    return core[best:] + core[:best]


def abelianization(w: Word, alphabet: Iterable[str]) -> tuple[int, ...]:
    return tuple(exponent_sum(w, g) for g in alphabet)


def exponent_gcd(w: Word, alphabet: Iterable[str]) -> int:
    out = 0
    for e in abelianization(w, alphabet):
        out = gcd(out, abs(e))
    return out


# --- text syntax -----------------------------------------------------------

def parse_word(text: str, alphabet: Alphabet | Iterable[str] | None = None) -> Word:
    """Parse a word in compact (``aBa``) or general (``a b^-1 a^2``) syntax."""
    if alphabet is not None and not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(tuple(alphabet))
    s = text.strip()
    if s in ("", "1"):
        return IDENTITY
    general = any(c.isspace() for c in s) or "^" in s or "_" in s or any(c.isdigit() for c in s)
    if not general and alphabet is not None and not alphabet.compact:
        general = True
    letters: list[Letter] = []
    if general:
        for tok in s.split():
            m = _TOKEN_RE.match(tok)
            if not m:
                raise WordError(f"bad token {tok!r}")
            name, exp = m.group(1), int(m.group(2) or 1)
            letters.extend([(name, 1 if exp > 0 else -1)] * abs(exp))
    else:
        for c in s:
            if not c.isalpha() or not c.isascii():
                raise WordError(f"bad character {c!r} in compact word {text!r}")
            letters.append((c.lower(), 1 if c.islower() else -1))
    return free_reduce(letters, alphabet)


def format_word(w: Word, compact: bool | None = None) -> str:
    if not w:
        return "1"
    if compact is None:
        compact = all(len(g) == 1 for g, _ in w.letters)
    if compact:
        return "".join(g if s > 0 else g.upper() for g, s in w.letters)
    runs: list[list] = []
    for g, s in w.letters:
        if runs and runs[-1][0] == g and (runs[-1][1] > 0) == (s > 0):
            runs[-1][1] += s
        else:
            runs.append([g, s])
    return " ".join(g if e == 1 else f"{g}^{e}" for g, e in runs)


def w(text: str) -> Word:
    """Shorthand used heavily in tests and scripts."""
    return parse_word(text)
