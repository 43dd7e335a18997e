"""Stallings graphs of subgroups of free groups.

Graphs are labelled by generator names; an edge ``(s, t, g)`` is read as ``g``
from ``s`` to ``t`` and as ``g^-1`` from ``t`` to ``s``.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .words import (
    IDENTITY,
    PowerDecomposition,
    Word,
    WordError,
    conjugator,
    primitive_root,
)

Edge = tuple[Hashable, Hashable, str]


@dataclass(frozen=True)
class LabeledGraph:
    vertices: tuple
    edges: tuple[Edge, ...]
    basepoint: Hashable | None = None
    alphabet: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex")
        for s, t, _ in self.edges:
            if s not in vs or t not in vs:
                raise ValueError(f"edge endpoint not a vertex: {(s, t)}")
        if self.basepoint is not None and self.basepoint not in vs:
            raise ValueError("basepoint not a vertex")

    # -- basic invariants -------------------------------------------------

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges)

    @property
    def rank(self) -> int:
        """Rank of the fundamental group, summed over components."""
        return len(self.edges) - len(self.vertices) + len(self.components())

    def degree(self, v) -> int:
        return sum((s == v) + (t == v) for s, t, _ in self.edges)

    def is_folded(self) -> bool:
        seen = set()
        for s, t, l in self.edges:
            for key in ((s, l, 1), (t, l, -1)):
                if key in seen:
                    return False
                seen.add(key)
        return True

    def labels(self) -> frozenset:
        return frozenset(l for _, _, l in self.edges)

    def incidences(self, v):
        """Yield ``(letter, other_end, edge_index)`` for every way to leave ``v``."""
        for i, (s, t, l) in enumerate(self.edges):
            if s == v:
                yield (l, 1), t, i
            if t == v:
                yield (l, -1), s, i

    def _adjacency(self) -> dict:
        adj: dict = {v: {} for v in self.vertices}
        for i, (s, t, l) in enumerate(self.edges):
            adj[s].setdefault((l, 1), (t, i))
            adj[t].setdefault((l, -1), (s, i))
        return adj

    def components(self) -> list[frozenset]:
        adj: dict = {v: set() for v in self.vertices}
        for s, t, _ in self.edges:
            adj[s].add(t)
            adj[t].add(s)
        out, seen = [], set()
        for v in self.vertices:
            if v in seen:
                continue
            comp, todo = {v}, [v]
            while todo:
                u = todo.pop()
                for x in adj[u]:
                    if x not in comp:
                        comp.add(x)
                        todo.append(x)
            seen |= comp
            out.append(frozenset(comp))
        return out

    def subgraph(self, vertices: Iterable, basepoint="keep") -> "LabeledGraph":
        vs = set(vertices)
        base = self.basepoint if basepoint == "keep" else basepoint
        if base not in vs:
            base = None
        return LabeledGraph(
            tuple(v for v in self.vertices if v in vs),
            tuple(e for e in self.edges if e[0] in vs and e[1] in vs),
            base,
            self.alphabet,
        )

    # -- paths ------------------------------------------------------------

    def trace(self, word: Word, start=None):
        """End vertex of the path reading ``word`` from ``start`` (folded graphs)."""
        adj = self._adjacency()
        v = self.basepoint if start is None else start
        for letter in word.letters:
            step = adj[v].get(letter)
            if step is None:
                return None
            v = step[0]
        return v

    def accepts(self, word: Word, start=None) -> bool:
        """Whether ``word`` reads a closed path at ``start`` (default: basepoint)."""
        start = self.basepoint if start is None else start
        return self.trace(word, start) == start

    def shortest_paths(self, start=None) -> dict:
        """Lexicographically least shortest path words from ``start`` to each vertex."""
        start = self.basepoint if start is None else start
        adj = self._adjacency()
        paths = {start: IDENTITY}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for letter in sorted(adj[v], key=lambda gs: (gs[0], -gs[1])):
                u = adj[v][letter][0]
                if u not in paths:
                    paths[u] = paths[v] * Word((letter,))
                    queue.append(u)
        return paths

    # -- canonical forms and export ---------------------------------------

    def _bfs_order(self, start) -> list:
        adj: dict = {v: [] for v in self.vertices}
        for s, t, l in self.edges:
            adj[s].append(((l, 0), t))
            adj[t].append(((l, 1), s))
        for v in adj:
            adj[v].sort(key=lambda x: x[0])
        order, seen = [start], {start}
        i = 0
        while i < len(order):
            for _, u in adj[order[i]]:
                if u not in seen:
                    seen.add(u)
                    order.append(u)
            i += 1
        return order

    def _encode(self, order: list, based: bool):
        m = {v: i for i, v in enumerate(order)}
        vs = set(order)
        edges = tuple(sorted((m[s], m[t], l) for s, t, l in self.edges if s in vs))
        return (len(order), edges, 0 if based else None)

    def canonical_form(self):
        """Isomorphism invariant (complete for folded graphs)."""
        if self.basepoint is not None:
            main = self._bfs_order(self.basepoint)
            rest = self.subgraph(set(self.vertices) - set(main), basepoint=None)
            return (self._encode(main, True), rest.canonical_form() if rest.vertices else ())
        comps = []
        for comp in self.components():
            comps.append(min(self._encode(self._bfs_order(v), False) for v in sorted(comp, key=repr)))
        return (None, tuple(sorted(comps)))

    def isomorphic(self, other: "LabeledGraph") -> bool:
        return self.canonical_form() == other.canonical_form()

    def export_order(self) -> list:
        order = self._bfs_order(self.basepoint) if self.basepoint is not None else []
        placed = set(order)
        for comp in self.components():
            if placed & comp:
                continue
            start = min(comp, key=repr)
            order.extend(self._bfs_order(start))
            placed |= comp
        return order

    def relabeled(self) -> "LabeledGraph":
        """Copy with vertices renamed ``0..n-1`` in export order."""
        m = {v: i for i, v in enumerate(self.export_order())}
        return LabeledGraph(
            tuple(range(len(m))),
            tuple(sorted((m[s], m[t], l) for s, t, l in self.edges)),
            None if self.basepoint is None else m[self.basepoint],
            self.alphabet,
        )

    def to_dict(self) -> dict:
        g = self.relabeled()
        return {
            "vertices": list(g.vertices),
            "edges": [{"src": s, "dst": t, "label": l} for s, t, l in g.edges],
            "basepoint": g.basepoint,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "LabeledGraph":
        return cls(tuple(d["vertices"]), tuple((e["src"], e["dst"], e["label"]) for e in d["edges"]),
                   d.get("basepoint"))

    def to_dot(self, name: str = "G") -> str:
        g = self.relabeled()
        lines = [f"digraph {name} {{"]
        for v in g.vertices:
            shape = "doublecircle" if v == g.basepoint else "circle"
            lines.append(f'  {v} [shape={shape}];')
        for s, t, l in g.edges:
            lines.append(f'  {s} -> {t} [label="{l}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


# --- folding ---------------------------------------------------------------

class _Folder:
    """Stallings folding that tracks, for each edge, a word in formal generators.

    Invariant: for any path the product of its edge decorations is the element
    it represents written in the formal generators, up to the adjustment
    ``delta`` applied at merged vertices.  Closed paths at the basepoint keep
    their decoration exactly, which is what makes rewriting possible.
    """

    def __init__(self, vertices, edges, deco, basepoint):
        self.vertices = list(vertices)
        self.edges = {i: [s, t, l, d] for i, ((s, t, l), d) in enumerate(zip(edges, deco))}
        self.basepoint = basepoint
        self.relations: list[Word] = []

    def _conflict(self):
        seen = {}
        for eid, (s, t, l, _) in self.edges.items():
            for key in ((s, l, 1), (t, l, -1)):
                if key in seen:
                    return seen[key], eid, key[2]
                seen[key] = eid
        return None

    def run(self):
        while True:
            c = self._conflict()
            if c is None:
                return self
            e1, e2, direction = c
            s1, t1, _, d1 = self.edges[e1]
            s2, t2, _, d2 = self.edges[e2]
            v1, v2 = (t1, t2) if direction == 1 else (s1, s2)
            if v1 == v2:
                rel = d1 * d2.inverse() if direction == 1 else d1.inverse() * d2
                if rel:
                    self.relations.append(rel)
                del self.edges[e2]
                continue
            if v2 == self.basepoint:
                keep, drop, dk, dr, er = v2, v1, d2, d1, e1
            else:
                keep, drop, dk, dr, er = v1, v2, d1, d2, e2
            delta = dk.inverse() * dr if direction == 1 else dk * dr.inverse()
            del self.edges[er]
            for e in self.edges.values():
                s, t, _, d = e
                if s == drop:
                    d = delta * d
                    e[0] = keep
                if t == drop:
                    d = d * delta.inverse()
                    e[1] = keep
                e[3] = d
            self.vertices.remove(drop)

    def graph(self, alphabet=None) -> LabeledGraph:
        ids = sorted(self.edges)
        return LabeledGraph(tuple(self.vertices), tuple(tuple(self.edges[i][:3]) for i in ids),
                            self.basepoint, alphabet)

    def decorations(self) -> tuple[Word, ...]:
        return tuple(self.edges[i][3] for i in sorted(self.edges))


@dataclass(frozen=True)
class DecoratedGraph:
    """A folded subgroup graph whose edges remember words in the input generators."""

    graph: LabeledGraph
    decorations: tuple[Word, ...]
    names: tuple[str, ...]
    relations: tuple[Word, ...] = field(default=())

    def express(self, word: Word) -> Word | None:
        """Write ``word`` in the input generators, or ``None`` if not a member."""
        g = self.graph
        adj = g._adjacency()
        v = g.basepoint
        out = IDENTITY
        for letter in word.letters:
            step = adj[v].get(letter)
            if step is None:
                return None
            u, i = step
            d = self.decorations[i]
            out = out * (d if letter[1] > 0 else d.inverse())
            v = u
        return out if v == g.basepoint else None


def _wedge(generators: Sequence[Word], names: Sequence[str]):
    vertices, edges, deco = [0], [], []
    nxt = 1
    for word, name in zip(generators, names):
        if not word:
            continue
        cur = 0
        n = len(word)
        for k, (g, s) in enumerate(word.letters):
            if k == n - 1:
                tgt = 0
            else:
                tgt = nxt
                vertices.append(nxt)
                nxt += 1
            d = Word.gen(name) if k == 0 else IDENTITY
            if s > 0:
                edges.append((cur, tgt, g))
                deco.append(d)
            else:
                edges.append((tgt, cur, g))
                deco.append(d.inverse())
            cur = tgt
    return vertices, edges, deco


def decorated_subgroup_graph(generators: Sequence[Word], names: Sequence[str] | None = None,
                             alphabet=None) -> DecoratedGraph:
    if names is None:
        names = tuple(f"x{i}" for i in range(len(generators)))
    vertices, edges, deco = _wedge(generators, names)
    f = _Folder(vertices, edges, deco, 0).run()
    return DecoratedGraph(f.graph(alphabet), f.decorations(), tuple(names), tuple(f.relations))


def subgroup_graph(generators: Sequence[Word], alphabet=None) -> LabeledGraph:
    """Based folded graph of the subgroup generated by ``generators``."""
    return decorated_subgroup_graph(list(generators), alphabet=alphabet).graph


def fold(g: LabeledGraph) -> LabeledGraph:
    f = _Folder(g.vertices, g.edges, [IDENTITY] * len(g.edges), g.basepoint).run()
    return f.graph(g.alphabet)


def core(g: LabeledGraph, keep_basepoint: bool = True) -> LabeledGraph:
    """Iteratively strip vertices of degree at most one."""
    vertices = set(g.vertices)
    edges = list(g.edges)
    keep = g.basepoint if keep_basepoint else None
    while True:
        deg = {v: 0 for v in vertices}
        for s, t, _ in edges:
            deg[s] += 1
            deg[t] += 1
        dead = {v for v, d in deg.items() if d <= 1 and v != keep}
        if not dead:
            break
        vertices -= dead
        edges = [e for e in edges if e[0] in vertices and e[1] in vertices]
    base = g.basepoint if keep_basepoint else None
    return LabeledGraph(tuple(v for v in g.vertices if v in vertices), tuple(edges), base, g.alphabet)


def rose(alphabet: Sequence[str]) -> LabeledGraph:
    return LabeledGraph((0,), tuple((0, 0, a) for a in alphabet), 0, tuple(alphabet))


def cycle_graph(word: Word) -> LabeledGraph:
    """The based cycle reading ``word`` (not necessarily folded)."""
    n = len(word)
    edges = []
    for i, (g, s) in enumerate(word.letters):
        a, b = i, (i + 1) % n
        edges.append((a, b, g) if s > 0 else (b, a, g))
    return LabeledGraph(tuple(range(n)), tuple(edges), 0)


def is_free_basis(words: Sequence[Word], alphabet: Sequence[str]) -> bool:
    words = [x for x in words if x]
    if len(words) != len(alphabet):
        return False
    return subgroup_graph(words).isomorphic(rose(alphabet))


# --- spanning trees ----------------------------------------------------------

def spanning_tree(g: LabeledGraph):
    """BFS tree from the basepoint: returns (tree edge indices, path words)."""
    adj = g._adjacency()
    paths = {g.basepoint: IDENTITY}
    tree = set()
    queue = deque([g.basepoint])
    while queue:
        v = queue.popleft()
        for letter in sorted(adj[v], key=lambda gs: (gs[0], -gs[1])):
            u, i = adj[v][letter]
            if u not in paths:
                paths[u] = paths[v] * Word((letter,))
                tree.add(i)
                queue.append(u)
    return tree, paths


def spanning_tree_basis(g: LabeledGraph) -> list[tuple[int, Word]]:
    """Free basis of the based component, one word per non-tree edge."""
    tree, paths = spanning_tree(g)
    out = []
    for i, (s, t, l) in enumerate(g.edges):
        if i in tree or s not in paths:
            continue
        out.append((i, paths[s] * Word.gen(l) * paths[t].inverse()))
    return out


def rewrite_in_basis(g: LabeledGraph, word: Word, names: Sequence[str] | None = None):
    """Rewrite a closed basepoint word over the spanning-tree basis of ``g``.

    Returns ``(basis, rewritten)`` where ``rewritten`` uses ``names[k]`` for
    the k-th basis element; ``rewritten`` is ``None`` for non-members.
    """
    basis = spanning_tree_basis(g)
    if names is None:
        names = tuple(f"e{k}" for k in range(len(basis)))
    sym = {i: names[k] for k, (i, _) in enumerate(basis)}
    adj = g._adjacency()
    v = g.basepoint
    out = []
    for letter in word.letters:
        step = adj[v].get(letter)
        if step is None:
            return [b for _, b in basis], None
        u, i = step
        if i in sym:
            out.append((sym[i], letter[1]))
        v = u
    if v != g.basepoint:
        return [b for _, b in basis], None
    return [b for _, b in basis], Word(out)


# --- fibre products -----------------------------------------------------------

@dataclass(frozen=True)
class FibreProduct:
    product: LabeledGraph
    left: dict     # vertex -> vertex of the first factor
    right: dict
    left_edges: dict   # edge index -> edge index
    right_edges: dict


def fibre_product(g1: LabeledGraph, g2: LabeledGraph) -> FibreProduct:
    if g1.alphabet is not None and g2.alphabet is not None and set(g1.alphabet) != set(g2.alphabet):
        raise WordError(f"alphabet mismatch: {g1.alphabet} vs {g2.alphabet}")
    vertices = tuple((u, v) for u in g1.vertices for v in g2.vertices)
    by_label: dict = {}
    for j, (s, t, l) in enumerate(g2.edges):
        by_label.setdefault(l, []).append((j, s, t))
    edges, le, re_ = [], {}, {}
    for i, (s1, t1, l) in enumerate(g1.edges):
        for j, s2, t2 in by_label.get(l, ()):
            le[len(edges)] = i
            re_[len(edges)] = j
            edges.append(((s1, s2), (t1, t2), l))
    base = None
    if g1.basepoint is not None and g2.basepoint is not None:
        base = (g1.basepoint, g2.basepoint)
    alphabet = g1.alphabet or g2.alphabet
    return FibreProduct(
        LabeledGraph(vertices, tuple(edges), base, alphabet),
        {v: v[0] for v in vertices},
        {v: v[1] for v in vertices},
        le,
        re_,
    )


def intersect_subgroups(h: Sequence[Word], k: Sequence[Word]) -> list[Word]:
    """Free basis of the intersection of two finitely generated subgroups."""
    fp = fibre_product(subgroup_graph(h), subgroup_graph(k)).product
    base = fp.basepoint
    comp = next(c for c in fp.components() if base in c)
    g = core(fp.subgraph(comp), keep_basepoint=True)
    return [b for _, b in spanning_tree_basis(g)]


def conjugate_intersections(h: Sequence[Word], k: Sequence[Word]) -> list[tuple[Word, int]]:
    """One ``(g, rank)`` per core component: ``H ∩ g K g^-1`` is nontrivial of that rank."""
    g1, g2 = subgroup_graph(h), subgroup_graph(k)
    paths1, paths2 = g1.shortest_paths(), g2.shortest_paths()
    fp = fibre_product(core(g1, False), core(g2, False)).product
    c = core(fp, keep_basepoint=False)
    out = []
    for comp in c.components():
        sub = c.subgraph(comp, basepoint=None)
        witness = min((paths1[u] * paths2[v].inverse() for u, v in comp), key=Word.sort_key)
        out.append((witness, sub.rank))
    out.sort(key=lambda wr: wr[0].sort_key())
    return out


# --- malnormality of cyclic families -----------------------------------------

@dataclass(frozen=True)
class MalnormalVerdict:
    malnormal: bool
    reason: str | None = None
    witness: object = None
    indices: tuple = ()

    def __bool__(self) -> bool:
        return self.malnormal


def malnormal_cyclic_family(ws: Sequence[Word]) -> MalnormalVerdict:
    """Decide whether ``{<w> : w in ws}`` is a malnormal family.

    In a free group this holds iff no two roots are conjugate up to inversion
    and no member is a proper power.  For conjugate roots the witness ``g``
    satisfies ``root_j^±1 = g^-1 root_i g``.
    """
    ws = list(ws)
    for x in ws:
        if not x:
            raise WordError("malnormal_cyclic_family: trivial word")
    decs = [primitive_root(x) for x in ws]
    for i in range(len(ws)):
        for j in range(i + 1, len(ws)):
            ri, rj = decs[i].root, decs[j].root
            g = conjugator(ri, rj)
            if g is None:
                g = conjugator(ri, rj.inverse())
            if g is not None:
                return MalnormalVerdict(False, "conjugate roots", g, (i, j))
    for i, d in enumerate(decs):
        if d.exponent > 1:
            return MalnormalVerdict(False, "proper power", PowerDecomposition(d.root, d.exponent), (i,))
    return MalnormalVerdict(True)
