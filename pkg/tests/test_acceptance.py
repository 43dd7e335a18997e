"""The twelve acceptance criteria, each timed against its limit.

Every test records one PASS/FAIL line, printed at the end of the run by
``conftest.pytest_terminal_summary``.
"""
import random
import time
from math import gcd

import pytest

from orel.christoffel import Slope, christoffel_word, classify_primitive_rank2
from orel.exceptional import MagnusPartition, check_first_type, check_second_type, find_pei_decompositions
from orel.presentation import OneRelatorPresentation
from orel.stallings import intersect_subgroups, malnormal_cyclic_family, subgroup_graph
from orel.tower import classify_presentation, expand_subscripts, magnus_rewrite, recognize_bs_relator
from orel.words import (Word, abelianization, cyclic_normal_form, exponent_sum, is_cyclically_reduced,
                        is_proper_power, w)
from orel.wsubgroups import INFINITE, pi_rank_bounded, two_free_certificate

from oracles import (bs_template_forms, brute_pi_table, cyclically_reduced_words, lattice_path_word,
                     naive_folded, naive_member, product_closure, random_cyclic_word, random_word,
                     reduced_words, whitehead_is_primitive)

pytestmark = pytest.mark.acceptance
ABC = MagnusPartition.of("a", "b", "c")


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def finish(acceptance, n, title, ok, detail, elapsed, limit):
    in_time = elapsed <= limit
    line = f"{title}: {detail} ({elapsed:.2f}s, limit {limit:g}s)"
    if not in_time:
        line += " OVER TIME"
    acceptance(n, ok and in_time, line)
    assert ok, detail
    assert in_time, f"{elapsed:.2f}s > {limit}s"


def test_01_christoffel(acceptance):
    with Timer() as t:
        exact = str(christoffel_word(Slope(5, 6), w("a"), w("b"))) == "aababababab"
        slopes = [(p, q) for p in range(1, 30) for q in range(1, 30 - p + 1) if gcd(p, q) == 1]
        bad = [(p, q) for p, q in slopes
               if str(christoffel_word(Slope(p, q), w("a"), w("b"))) != lattice_path_word(p, q)]
    finish(acceptance, 1, "Christoffel exactness", exact and not bad,
           f"5/6 exact={exact}, {len(slopes) - len(bad)}/{len(slopes)} slopes match lattice path",
           t.elapsed, 1)


def test_02_osborne_vs_whitehead(acceptance):
    with Timer() as t:
        words = [u for u in reduced_words("ab", 8) if u]
        bad = [u for u in words if classify_primitive_rank2(u, "ab").primitive != whitehead_is_primitive(u)]
    finish(acceptance, 2, "Osborne classification", not bad,
           f"{len(words) - len(bad)}/{len(words)} words of length <= 8 agree", t.elapsed, 300)


def test_03_not_first_type(acceptance):
    with Timer() as t:
        v = check_first_type(w("aaB"), w("bcc"), Slope(1, 1), ABC)
        fam = malnormal_cyclic_family([w("aaB"), w("bcc")])
    ok = v.tag == "Rejected" and v.witness == (w("aa"), w("cc")) and bool(fam)
    finish(acceptance, 3, "Example not_first_type", ok,
           f"verdict={v.tag}, witness={tuple(map(str, v.witness or ()))}, malnormal={bool(fam)}",
           t.elapsed, 1)


def test_04_not_second_type(acceptance):
    parts = []
    ok = True
    with Timer() as t:
        for k in (1, 2):
            word = w("aabbcc") * w("b") ** k
            second = check_second_type(w("aabb"), w("cc"), w("b"), Slope(k, 1), ABC)
            found = find_pei_decompositions(word, ABC)
            first = [f for f in found if f.tag == "FirstType" and christoffel_word(f.slope, f.x, f.y) == word]
            ok &= second.word == word and second.tag == "Rejected" and bool(first)
            parts.append(f"k={k}: second={second.tag}, first-type found={len(first)}")
    finish(acceptance, 4, "Example not_second_type", ok, "; ".join(parts), t.elapsed, 60)


def _occurrences(hay, needle):
    n = len(needle)
    return [k for k in range(len(hay) - n + 1) if hay[k:k + n] == needle]


def test_05_overlap_lemmas(acceptance):
    rng = random.Random(2024)
    bad = 0
    n1 = n2 = 0
    with Timer() as t:
        while n1 < 10_000:
            z = random_word(rng, "ab", rng.randint(1, 8))
            if not z or not is_cyclically_reduced(z) or is_proper_power(z):
                continue
            n1 += 1
            for i in range(-3, 4):
                bad += any(not (i >= 1 and k % len(z) == 0) for k in _occurrences((z ** i).letters, z.letters))
        while n2 < 10_000:
            z = random_word(rng, "ab", rng.randint(1, 8))
            if not z or z.letters[0][0] != "a" or z.letters[-1][0] != "a":
                continue
            zb = z * random_word(rng, "b", rng.randint(0, 3))
            if is_proper_power(zb):
                continue
            n2 += 1
            for i in range(-3, 4):
                bad += any(not (i >= 1 and k % len(zb) == 0) for k in _occurrences((zb ** i).letters, z.letters))
    finish(acceptance, 5, "Overlap lemmas", bad == 0,
           f"{n1} + {n2} instances, {bad} counterexamples", t.elapsed, 120)


def test_06_intersection_oracle(acceptance):
    rng = random.Random(6)
    universe = reduced_words("ab", 6)
    bad = 0
    with Timer() as t:
        for _ in range(100):
            h = [random_word(rng, "ab", rng.randint(1, 4)) for _ in range(rng.randint(1, 3))]
            k = [random_word(rng, "ab", rng.randint(1, 4)) for _ in range(rng.randint(1, 3))]
            basis = intersect_subgroups(h, k)
            gi = subgroup_graph(basis) if basis else None
            rh, rk = naive_folded(h), naive_folded(k)
            for u in universe:
                expect = naive_member(u, rh) and naive_member(u, rk)
                got = not u or (gi is not None and gi.accepts(u))
                bad += got != expect
            for u in product_closure(h, 3, 6) & product_closure(k, 3, 6):
                bad += bool(u) and not (gi is not None and gi.accepts(u))
    finish(acceptance, 6, "Intersection oracle", bad == 0,
           f"100 pairs x {len(universe)} words, {bad} disagreements", t.elapsed, 300)


def test_07_pi_rank(acceptance):
    desk = {"aa": 1, "aaa": 1, "abAB": 2, "aabb": 2, "ab": INFINITE}
    with Timer() as t:
        got = {s: pi_rank_bounded(w(s)).rank for s in desk}
        table = brute_pi_table(6)
        words = list(cyclically_reduced_words("ab", 6))
        bad = [u for u in words
               if pi_rank_bounded(u).rank != table.get(u, INFINITE if whitehead_is_primitive(u) else None)]
    ok = got == desk and not bad
    finish(acceptance, 7, "pi-rank desk table", ok,
           f"desk {'ok' if got == desk else got}, {len(words) - len(bad)}/{len(words)} words agree with brute force",
           t.elapsed, 600)


def _pei_words():
    """Accepted PEI words of length <= 12 over {a, b, c}, built from both types."""
    xs = ["a", "ab", "aab", "aB", "abb", "abab", "aaB"]
    ys = ["c", "bc", "cb", "bcc", "Bc", "cbc", "cc"]
    seen = {}
    for x in xs:
        for y in ys:
            for s in (Slope(1, 1), Slope(1, 2), Slope(2, 1), Slope(2, 3), Slope(1, 3)):
                if len(christoffel_word(s, w(x), w(y))) > 12:
                    continue
                v = check_first_type(w(x), w(y), s, ABC)
                if v.accepted:
                    seen.setdefault(v.word, v)
    for x, y, z, s in (("a", "c", "b", Slope(1, 2)), ("a", "c", "b", Slope(2, 1)), ("aa", "c", "b", Slope(1, 1)),
                       ("a", "cc", "b", Slope(1, 1)), ("a", "c", "b", Slope(1, 3))):
        v = check_second_type(w(x), w(y), w(z), s, ABC)
        if v.accepted and len(v.word) <= 12:
            seen.setdefault(v.word, v)
    return list(seen.values())


def test_08_two_free_consistency(acceptance):
    with Timer() as t:
        accepted = _pei_words()
        tags = [two_free_certificate(v.word).tag for v in accepted]
    kinds = sorted({v.tag for v in accepted})
    ok = len(accepted) >= 20 and "NotTwoFree" not in tags
    finish(acceptance, 8, "2-freeness consistency", ok,
           f"{len(accepted)} accepted words ({', '.join(kinds)}), NotTwoFree count {tags.count('NotTwoFree')}",
           t.elapsed, 600)


def test_09_magnus_roundtrip(acceptance):
    rng = random.Random(9)
    n = bad = 0
    with Timer() as t:
        while n < 1000:
            r = random_cyclic_word(rng, "at", rng.randint(1, 12))
            if not r or exponent_sum(r, "t") != 0:
                continue
            n += 1
            s = magnus_rewrite(OneRelatorPresentation.of("at", r), "t")
            bad += cyclic_normal_form(expand_subscripts(s.vertex.relator, "a", "t")) != cyclic_normal_form(r)
    finish(acceptance, 9, "Magnus round trip", bad == 0, f"{n} relators, {bad} mismatches", t.elapsed, 60)


def test_10_bs_recognition(acceptance):
    forms = bs_template_forms(10)
    rng = random.Random(10)
    with Timer() as t:
        params = []
        for p, q in ((1, 2), (2, 3), (3, 4)):
            v = recognize_bs_relator(christoffel_word(Slope(p, q), w("C"), w("Aca")), "ac")
            params.append(v.tag == "BSWitness" and (v.params["p"], v.params["q"]) == (p, q))
        tried = false_pos = screened = 0
        while tried < 100:
            r = random_cyclic_word(rng, "ac", rng.randint(2, 10))
            if not r or cyclic_normal_form(r) in forms:
                continue
            tried += 1
            # a template needs one generator with exponent sum 0
            screened += 0 not in abelianization(r, "ac")
            false_pos += recognize_bs_relator(r, "ac").tag == "BSWitness"
    ok = all(params) and false_pos == 0
    finish(acceptance, 10, "BS recognition", ok,
           f"templates {sum(params)}/3, {tried} non-templates ({screened} excluded by abelianization), "
           f"{false_pos} false positives", t.elapsed, 1)


def test_11_meskin(acceptance):
    parts = []
    ok = True
    with Timer() as t:
        for p, q, m, n in ((1, 2, 2, 2), (2, 3, 2, 3)):
            r = christoffel_word(Slope(p, q), Word.gen("c0", m), Word.gen("c1", -n))
            rep = classify_presentation(OneRelatorPresentation.of(("c0", "c1"), r))
            pw = rep.finding("Powered")
            got = (pw[0].params["m"], pw[0].params["n"]) if pw else None
            good = got == (q * m, p * n) and bool(rep.finding("NotTwoFree"))
            ok &= good
            parts.append(f"({p},{q},{m},{n}): Powered{got}, NotTwoFree={bool(rep.finding('NotTwoFree'))}")
    finish(acceptance, 11, "Meskin family", ok, "; ".join(parts), t.elapsed, 60)


def test_12_bs12_identification(acceptance):
    with Timer() as t:
        rep = classify_presentation(OneRelatorPresentation.of("at", w("TatAA")))
    pe = rep.finding("PrimitiveExtension")
    bs = [(f.params["p"], f.params["q"]) for f in rep.finding("BSWitness")]
    flag = any(f.params["ascending"] and f.params["form"] == "E" for f in pe)
    finish(acceptance, 12, "BS(1,2) identification", flag and (1, 2) in bs,
           f"ascending E-form PE={flag}, BSWitness={bs} (per Corollary pe_corollary)", t.elapsed, 1)
