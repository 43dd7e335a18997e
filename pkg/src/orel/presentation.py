"""One-relator presentations and the ``.pres`` text format.

Grammar, one ``key: value`` per line, ``#`` starts a comment::

    gens: a b c
    partition: A=a B=b C=c        # optional; blocks are comma separated
    rel: a a c c
    budget: 5000                  # optional
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .words import Alphabet, Word, WordError, cyclic_reduce, format_word, is_cyclically_reduced, parse_word

KEYS = ("gens", "partition", "rel", "budget")


class PresentationError(WordError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class OneRelatorPresentation:
    alphabet: Alphabet
    relator: Word
    budget: int | None = None
    auto_reduced: bool = False

    def __post_init__(self):
        if not self.relator:
            raise WordError("relator must be nonempty")
        if not is_cyclically_reduced(self.relator):
            raise WordError(f"relator {self.relator} is not cyclically reduced")
        if not self.relator.generators() <= set(self.alphabet):
            raise WordError(f"relator {self.relator} uses generators outside {self.alphabet.generators}")

    @classmethod
    def of(cls, gens, relator: Word | str, partition=None) -> "OneRelatorPresentation":
        alpha = Alphabet(tuple(gens), partition)
        r = parse_word(relator, alpha) if isinstance(relator, str) else relator
        core = cyclic_reduce(r).core
        return cls(alpha, core, auto_reduced=core != r)

    @property
    def generators(self) -> tuple[str, ...]:
        return self.alphabet.generators

    @property
    def euler_characteristic(self) -> int:
        return 2 - len(self.generators)

    def format(self) -> str:
        lines = ["gens: " + " ".join(self.generators)]
        if self.alphabet.partition is not None:
            blocks = [f"{n}={','.join(sorted(b))}" for n, b in zip("ABC", self.alphabet.partition)]
            lines.append("partition: " + " ".join(blocks))
        lines.append("rel: " + format_word(self.relator, compact=False))
        if self.budget is not None:
            lines.append(f"budget: {self.budget}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"alphabet": list(self.generators), "relator": str(self.relator)}


def parse_presentation(text: str) -> OneRelatorPresentation:
    """Parse the ``.pres`` format; a non cyclically reduced relator is reduced and flagged."""
    fields: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if ":" not in line:
            col = len(line) - len(line.lstrip()) + 1
            raise PresentationError("expected 'key: value'", lineno, col)
        key, value = line.split(":", 1)
        k = key.strip()
        col = len(key) - len(key.lstrip()) + 1
        if k not in KEYS:
            raise PresentationError(f"unknown key {k!r}", lineno, col)
        if k in fields:
            raise PresentationError(f"duplicate key {k!r}", lineno, col)
        fields[k] = (value.strip(), lineno, len(key) + 2)
    if "gens" not in fields:
        raise PresentationError("missing 'gens' declaration")
    if "rel" not in fields:
        raise PresentationError("missing 'rel' declaration")

    value, ln, col = fields["gens"]
    gens = tuple(value.split())
    seen = set()
    for g in gens:
        if g in seen:
            raise PresentationError(f"duplicate generator {g!r}", ln, col + value.index(g))
        seen.add(g)
    partition = None
    if "partition" in fields:
        value, ln, col = fields["partition"]
        blocks = {}
        for tok in value.split():
            name, eq, members = tok.partition("=")
            if not eq or name not in ("A", "B", "C") or name in blocks:
                raise PresentationError(f"bad partition block {tok!r}", ln, col + value.index(tok))
            blocks[name] = frozenset(m for m in members.split(",") if m)
        partition = tuple(blocks.get(n, frozenset()) for n in "ABC")
    try:
        alpha = Alphabet(gens, partition)
    except WordError as exc:
        raise PresentationError(str(exc), *fields["gens"][1:]) from None

    value, ln, col = fields["rel"]
    try:
        r = parse_word(value, alpha)
    except WordError as exc:
        raise PresentationError(str(exc), ln, col) from None
    core = cyclic_reduce(r).core
    if not core:
        raise PresentationError("relator reduces to the identity", ln, col)

    budget = None
    if "budget" in fields:
        value, ln, col = fields["budget"]
        if not value.isdigit():
            raise PresentationError(f"budget must be a nonnegative integer, got {value!r}", ln, col)
        budget = int(value)
    return OneRelatorPresentation(alpha, core, budget, auto_reduced=core != r)
