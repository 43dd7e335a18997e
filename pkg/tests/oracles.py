"""Independent reference implementations used as test oracles.

Nothing here imports the graph or Christoffel code under test; only the
``Word`` value type is shared.
"""
from __future__ import annotations

import random
from functools import lru_cache
from itertools import product

from orel.words import Word


def reduced_words(gens, max_len: int, min_len: int = 0):
    """All freely reduced words over ``gens`` with length in [min_len, max_len]."""
    letters = [(g, s) for g in gens for s in (1, -1)]
    frontier = [()]
    out = [Word()] if min_len == 0 else []
    for n in range(1, max_len + 1):
        frontier = [t + (l,) for t in frontier for l in letters if not (t and t[-1] == (l[0], -l[1]))]
        if n >= min_len:
            out.extend(Word(t) for t in frontier)
    return out


def cyclically_reduced_words(gens, max_len: int, min_len: int = 1):
    return [w for w in reduced_words(gens, max_len, min_len)
            if len(w) < 2 or w.letters[0] != (w.letters[-1][0], -w.letters[-1][1])]


def random_word(rng: random.Random, gens, length: int) -> Word:
    letters = []
    while len(letters) < length:
        l = (rng.choice(gens), rng.choice((1, -1)))
        if letters and letters[-1] == (l[0], -l[1]):
            continue
        letters.append(l)
    return Word(letters)


def random_cyclic_word(rng, gens, length: int) -> Word:
    while True:
        w = random_word(rng, gens, length)
        if len(w) < 2 or w.letters[0] != (w.letters[-1][0], -w.letters[-1][1]):
            return w


# --- lattice path -------------------------------------------------------------

def lattice_path_word(p: int, q: int, x: str = "a", y: str = "b") -> str:
    """Walk from (0,0) to (q,p) staying weakly below the segment; up when allowed."""
    i = j = 0
    out = []
    while (i, j) != (q, p):
        # up is allowed iff (i, j+1) is on or below the line y = p x / q
        if j < p and (j + 1) * q <= p * i:
            out.append(y)
            j += 1
        else:
            out.append(x)
            i += 1
    return "".join(out)


# --- Whitehead reduction in rank two -----------------------------------------

def _cyclic_len(w: Word) -> int:
    L = w.letters
    i, j = 0, len(L) - 1
    while i < j and L[i][0] == L[j][0] and L[i][1] == -L[j][1]:
        i += 1
        j -= 1
    return max(0, j - i + 1)


def _whitehead_autos(a="a", b="b"):
    A, B = Word.gen(a), Word.gen(b)
    out = []
    for u, v in ((a, b), (b, a)):
        U, V = Word.gen(u), Word.gen(v)
        for e in (1, -1):
            Ve = V ** e
            for img in (U * Ve, Ve.inverse() * U, Ve.inverse() * U * Ve):
                out.append({u: img})
    return out


def whitehead_is_primitive(w: Word, a="a", b="b") -> bool:
    autos = _whitehead_autos(a, b)
    cur = w
    n = _cyclic_len(cur)
    while True:
        if n == 1:
            return True
        if n == 0:
            return False
        for phi in autos:
            nxt = cur.substitute(phi)
            m = _cyclic_len(nxt)
            if m < n:
                cur, n = nxt, m
                break
        else:
            return False


# --- naive folding --------------------------------------------------------------

def naive_folded(gens_words):
    """Stallings graph by repeated identification.  Returns (out-edge dict, basepoint)."""
    parent = {}

    def find(v):
        while parent.setdefault(v, v) != v:
            v = parent[v]
        return v

    edges = set()
    nxt = 1
    for word in gens_words:
        cur = 0
        for k, (g, s) in enumerate(word.letters):
            tgt = 0 if k == len(word) - 1 else nxt
            if tgt:
                nxt += 1
            edges.add((cur, tgt, g) if s > 0 else (tgt, cur, g))
            cur = tgt
    changed = True
    while changed:
        changed = False
        edges = {(find(s), find(t), g) for s, t, g in edges}
        seen = {}
        for s, t, g in sorted(edges):
            for key, other in (((s, g, 1), t), ((t, g, -1), s)):
                if key in seen and find(seen[key]) != find(other):
                    parent[find(other)] = find(seen[key])
                    changed = True
                seen.setdefault(key, other)
            if changed:
                break
    out = {}
    for s, t, g in edges:
        out[(s, (g, 1))] = t
        out[(t, (g, -1))] = s
    return out, find(0)


def naive_member(u: Word, folded) -> bool:
    out, base = folded
    v = base
    for l in u.letters:
        if (v, l) not in out:
            return False
        v = out[(v, l)]
    return v == base


def product_closure(gens_words, max_factors: int, max_len: int) -> set:
    """Reduced products of at most ``max_factors`` generators^±1 of length <= max_len."""
    pool = [g for g in gens_words if g] + [g.inverse() for g in gens_words if g]
    level = {Word()}
    seen = {Word()}
    for _ in range(max_factors):
        level = {u * g for u in level for g in pool} - seen
        seen |= level
    return {u for u in seen if len(u) <= max_len}


# --- brute-force malnormality ---------------------------------------------------

def malnormal_violation(ws, conj_len: int = 3, max_exp: int = 3):
    """Search for g x_i^m g^-1 = x_j^n violating malnormality (sound, bounded)."""
    powers = {}
    for j, y in enumerate(ws):
        for n in range(1, max_exp + 1):
            for s in (1, -1):
                powers.setdefault(y ** (s * n), []).append(j)
    gens = sorted(set().union(*(w.generators() for w in ws)))
    for g in reduced_words(gens, conj_len):
        for i, x in enumerate(ws):
            for m in range(1, max_exp + 1):
                c = g * x ** m * g.inverse()
                for j in powers.get(c, ()):
                    if j != i:
                        return ("pair", i, j, g)
                    # same subgroup: need g outside <x_i>
                    if not _in_cyclic(g, x):
                        return ("self", i, j, g)
    return None


def _in_cyclic(g: Word, x: Word, bound: int = 8) -> bool:
    return any(g == x ** k for k in range(-bound, bound + 1))


# --- rank <= 2 subgroup oracle for pi-rank -----------------------------------

def _tree_basis_rewrite(out, base, vertices, w: Word):
    """Rewrite ``w`` (closed at base) in the spanning-tree basis of the graph ``out``."""
    # BFS tree
    tree = {base: Word()}
    order = [base]
    tree_edges = set()
    for v in order:
        for (u, l), t in sorted(out.items(), key=lambda kv: (str(kv[0]), kv[1])):
            if u == v and t not in tree:
                tree[t] = tree[v] * Word((l,))
                tree_edges.add((v, l))
                tree_edges.add((t, (l[0], -l[1])))
                order.append(t)
    names = {}
    for (u, l), t in sorted(out.items(), key=lambda kv: (str(kv[0]), kv[1])):
        if l[1] > 0 and (u, l) not in tree_edges:
            names[(u, l)] = f"e{len(names)}"
    v, res = base, []
    for l in w.letters:
        t = out[(v, l)]
        if l[1] > 0 and (v, l) in names:
            res.append((names[(v, l)], 1))
        elif l[1] < 0 and (t, (l[0], 1)) in names:
            res.append((names[(t, (l[0], 1))], -1))
        v = t
    return Word(res), len(names)


def _arc_graph(arcs):
    """Graph from arcs (src junction, dst junction, word); returns out-dict and vertices or None."""
    out = {}
    nv = max(max(s, t) for s, t, _ in arcs) + 1
    for s, t, word in arcs:
        cur = s
        for k, l in enumerate(word.letters):
            nxt = t if k == len(word) - 1 else nv
            if nxt == nv:
                nv += 1
            inv = (l[0], -l[1])
            if (cur, l) in out or (nxt, inv) in out:
                return None
            out[(cur, l)] = nxt
            out[(nxt, inv)] = cur
            cur = nxt
    return out, list(range(nv))


def rank_le2_graphs(gens, max_edges: int):
    """Every folded core graph of rank 1 or 2 with at most ``max_edges`` edges (with repeats)."""
    words = {n: reduced_words(gens, n, n) for n in range(1, max_edges + 1)}
    # cycles
    for n in range(1, max_edges + 1):
        for u in words[n]:
            g = _arc_graph([(0, 0, u)])
            if g:
                yield 1, g
    # rose, theta, spectacles
    for n1 in range(1, max_edges + 1):
        for n2 in range(1, max_edges + 1 - n1):
            for u1 in words[n1]:
                for u2 in words[n2]:
                    g = _arc_graph([(0, 0, u1), (0, 0, u2)])
                    if g:
                        yield 2, g
                    for n3 in range(1, max_edges + 1 - n1 - n2):
                        for u3 in words[n3]:
                            for arcs in ([(0, 1, u1), (0, 1, u2), (0, 1, u3)],
                                         [(0, 0, u1), (0, 1, u2), (1, 1, u3)]):
                                g = _arc_graph(arcs)
                                if g:
                                    yield 2, g


def _closed_paths(out, v, max_len):
    res = []

    def rec(u, path):
        if path and u == v:
            res.append(Word(tuple(path)))
        if len(path) == max_len:
            return
        for l in (("a", 1), ("a", -1), ("b", 1), ("b", -1)):
            if path and path[-1] == (l[0], -l[1]):
                continue
            if (u, l) in out:
                path.append(l)
                rec(out[(u, l)], path)
                path.pop()
    rec(v, [])
    return res


@lru_cache(maxsize=None)
def brute_pi_table(max_len: int) -> dict:
    """Map cyclically reduced words over {a, b} of length <= max_len to 1 or 2 when pi <= 2."""
    best: dict = {}
    for rank, (out, vertices) in rank_le2_graphs(("a", "b"), max_len):
        for v in vertices:
            for w in _closed_paths(out, v, max_len):
                L = w.letters
                if len(L) > 1 and L[0] == (L[-1][0], -L[-1][1]):
                    continue
                if best.get(w, 3) <= rank:
                    continue
                rw, k = _tree_basis_rewrite(out, v, vertices, w)
                if k == 1:
                    imprim = len(rw) != 1
                else:
                    imprim = not whitehead_is_primitive(rw, "e0", "e1")
                if imprim:
                    best[w] = rank
    return best


# --- Baumslag-Solitar templates ------------------------------------------------

def bs_template_forms(max_len: int, c="c", a="a") -> set:
    """Cyclic normal forms of all generalized BS templates and inverses up to length max_len."""
    from math import gcd

    from orel.words import cyclic_normal_form

    def pr(p, q, x, y):
        n = p + q
        word = Word()
        for i in range(1, n + 1):
            word = word * (x if (i * p) // n == ((i - 1) * p) // n else y)
        return word

    forms = set()
    for n in range(2, max_len + 1):
        for q in range(1, n):
            p = n - q
            if gcd(p, q) != 1:
                continue
            for cc, aa in ((c, a), (a, c)):
                for e1, e2, d in product((1, -1), repeat=3):
                    t = pr(p, q, Word.gen(cc, e1), Word.gen(aa, -d) * Word.gen(cc, e2) * Word.gen(aa, d))
                    if len(t) <= max_len:
                        forms.add(cyclic_normal_form(t))
                        forms.add(cyclic_normal_form(t.inverse()))
    return forms
