"""``orel`` command line front end."""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .christoffel import Slope, christoffel_word, classify_primitive_rank2
from .exceptional import (MagnusPartition, check_first_type, check_second_type,
                          exceptional_splitting, find_pei_decompositions, magnus_intersection)
from .presentation import OneRelatorPresentation, parse_presentation
from .stallings import (conjugate_intersections, core, cycle_graph, intersect_subgroups,
                        malnormal_cyclic_family, subgroup_graph)
from .tower import (build_tower, classify_presentation, construct_primitive_extension, magnus_rewrite,
                    rebalance, subscript_word)
from .words import Word, WordError, cyclic_reduce, exponent_sum, parse_word, primitive_root
from .wsubgroups import PiRankBudget, pi_rank_bounded, two_free_certificate


class Outcome:
    def __init__(self, payload: dict, text: str, graph=None, negative: bool = False):
        self.payload, self.text, self.graph, self.negative = payload, text, graph, negative


def _word(text: str) -> Word:
    return parse_word(text)


def _words(items) -> list[Word]:
    out = []
    for item in items:
        out.extend(_word(t) for t in item.split(","))
    return out


def _pi_budget(args) -> PiRankBudget | None:
    return PiRankBudget(max_nodes=args.budget) if args.budget is not None else None


def _partition(text: str) -> MagnusPartition:
    blocks = {}
    for tok in text.replace(";", " ").split():
        name, _, members = tok.partition("=")
        if name not in ("A", "B", "C"):
            raise WordError(f"bad partition block {tok!r}")
        blocks[name] = {m for m in members.split(",") if m}
    return MagnusPartition.of(blocks.get("A", ()), blocks.get("B", ()), blocks.get("C", ()))


def load_presentation(arg: str, gens: str | None = None) -> OneRelatorPresentation:
    """A ``.pres`` file, inline ``.pres`` text, or a bare relator word."""
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return parse_presentation(fh.read())
    if "gens:" in arg:
        return parse_presentation(arg.replace("\\n", "\n"))
    r = _word(arg)
    names = tuple(gens.replace(",", " ").split()) if gens else tuple(sorted(r.generators()))
    return OneRelatorPresentation.of(names, r)


# --- handlers -----------------------------------------------------------------

def cmd_reduce(args) -> Outcome:
    w = _word(args.word)
    dec = cyclic_reduce(w)
    payload = {"reduced": str(w), "cyclic_core": str(dec.core), "conjugator": str(dec.conjugator)}
    if w:
        root = primitive_root(w)
        payload.update(root=str(root.root), exponent=root.exponent)
    text = str(w)
    if args.cyclic:
        text = f"{w}\ncyclic core: {dec.core} (conjugator {dec.conjugator})"
    return Outcome(payload, text, cycle_graph(dec.core) if dec.core else None)


def cmd_christoffel(args) -> Outcome:
    slope = Slope.parse(args.slope)
    word = christoffel_word(slope, _word(args.x), _word(args.y))
    return Outcome({"slope": str(slope), "word": str(word)}, str(word), cycle_graph(word))


def cmd_primitive(args) -> Outcome:
    w = _word(args.word)
    gens = tuple(args.gens.split(",")) if args.gens else tuple(sorted(w.generators()))
    if len(gens) == 1:
        gens = gens + (next(g for g in "abcdefgh" if g not in gens),)
    v = classify_primitive_rank2(w, gens)
    rep = v.representative()
    payload = {"primitive": v.primitive, "generators": list(gens),
               "slope": None if v.slope is None else str(v.slope),
               "representative": None if rep is None else str(rep)}
    text = (f"primitive; conjugate to {rep}" if v.primitive else "not primitive") + f" in F({', '.join(gens)})"
    return Outcome(payload, text, cycle_graph(cyclic_reduce(w).core) if w else None, not v.primitive)


def cmd_graph(args) -> Outcome:
    ws = _words(args.words)
    g = subgroup_graph(ws)
    if args.action == "core":
        g = core(g)
    g = g.relabeled()
    text = g.to_dot() if args.action == "dot" else g.to_json()
    return Outcome(g.to_dict() | {"rank": g.rank}, text, g)


def cmd_intersect(args) -> Outcome:
    h, k = _words([args.h]), _words([args.k])
    basis = intersect_subgroups(h, k)
    conj = conjugate_intersections(h, k)
    payload = {"basis": [str(b) for b in basis], "rank": len(basis),
               "conjugates": [{"g": str(g), "rank": r} for g, r in conj]}
    lines = [f"H ∩ K has rank {len(basis)}: " + (", ".join(map(str, basis)) or "trivial")]
    lines += [f"H ∩ gKg^-1 nontrivial for g = {g} (rank {r})" for g, r in conj]
    return Outcome(payload, "\n".join(lines), subgroup_graph(basis) if basis else None)


def cmd_malnormal(args) -> Outcome:
    ws = _words(args.words)
    v = malnormal_cyclic_family(ws)
    payload = {"malnormal": bool(v), "reason": v.reason,
               "witness": None if v.witness is None else str(v.witness),
               "indices": None if v.indices is None else list(v.indices)}
    text = "MalnormalFamily" if v else f"NotMalnormal: {v.reason}"
    return Outcome(payload, text, subgroup_graph(ws), not v)


def cmd_pei(args) -> Outcome:
    w = _word(args.word)
    part = _partition(args.partition)
    if args.x is not None:
        slope = Slope.parse(args.slope or "1")
        x, y = _word(args.x), _word(args.y)
        if args.z is not None:
            cls = check_second_type(x, y, _word(args.z), slope, part, args.budget)
        else:
            cls = check_first_type(x, y, slope, part, args.budget)
        if cls.accepted and cls.word != w:
            raise WordError(f"decomposition spells {cls.word}, not {w}")
        found = [cls]
    else:
        found = find_pei_decompositions(w, part, shift_budget=args.budget if args.budget is not None else 2,
                                        rotations=args.rotations)
        found = found or [None]
    cls = found[0]
    if cls is None:
        payload = {"verdict": "rejected", "type": "Rejected", "reason": "no decomposition found within budget",
                   "budget": args.budget, "slope": None, "x": None, "y": None, "z": None, "witness": None}
        return Outcome(payload, "Rejected: no PEI decomposition found within budget (not a proof)",
                       cycle_graph(cyclic_reduce(w).core), True)
    payload = cls.to_dict()
    if cls.accepted:
        payload["intersection"] = str(magnus_intersection(cls, part))
        payload["splitting"] = exceptional_splitting(cls, part).to_dict()
        zs = f", z = {cls.z}" if cls.z is not None else ""
        text = (f"{cls.tag}: slope {cls.slope}, x = {cls.x}, y = {cls.y}{zs} ({cls.strength})\n"
                f"<A,B> ∩ <B,C> = {payload['intersection']} (per Theorem exceptional_intersection)")
    else:
        wit = ", ".join(map(str, cls.witness or ()))
        text = f"Rejected: {cls.reason}; witness ({wit})"
    return Outcome(payload, text, cycle_graph(cyclic_reduce(w).core), not cls.accepted)


def cmd_pirank(args) -> Outcome:
    w = _word(args.word)
    res = pi_rank_bounded(w, _pi_budget(args))
    text = f"pi({w}) = {res.rank}" + ("" if res.exhaustive else " (search hit the budget)")
    for x in res.witnesses:
        text += f"\n  witness basis {', '.join(map(str, x.basis))}; w = {x.w_in_basis}"
    g = res.witnesses[0].graph if res.witnesses else None
    return Outcome(res.to_dict(), text, g, res.rank in (1, 2))


def cmd_twofree(args) -> Outcome:
    w = _word(args.word)
    v = two_free_certificate(w, _pi_budget(args))
    text = f"{v.tag}: {v.provenance}"
    for x in v.witnesses:
        text += f"\n  non-free 2-generator subgroup <{', '.join(map(str, x.basis))}>"
    g = v.witnesses[0].graph if v.witnesses else None
    return Outcome(v.to_dict(), text, g, v.tag != "TwoFreeVerified")


def _step_text(i, s) -> str:
    pre = ""
    if s.rebalanced is not None:
        im = s.rebalanced.images
        pre = f"  rebalance: x = {im['x']}, y = {im['y']} -> {s.rebalanced.presentation.relator}\n"
    return (pre + f"  step {i}: stable {s.stable}, vertex <{', '.join(s.vertex.generators)} | "
            f"{s.vertex.relator}>, range {list(s.range)}")


def cmd_rewrite(args) -> Outcome:
    p = load_presentation(args.presentation, args.gens)
    stable = args.stable or p.generators[-1]
    if exponent_sum(p.relator, stable) != 0 and args.rebalance:
        reb = rebalance(p)
        p, stable = reb.presentation, reb.presentation.generators[1]
    step = magnus_rewrite(p, stable)
    return Outcome(step.to_dict(), _step_text(0, step), cycle_graph(step.vertex.relator))


def _report_text(rep) -> str:
    lines = [f"presentation <{', '.join(rep.presentation.generators)} | {rep.presentation.relator}>"]
    lines += [_step_text(i, s) for i, s in enumerate(rep.steps)]
    for f in rep.findings:
        lines.append(f"  finding {f.tag} {json.dumps(_short(f.params), sort_keys=True)} [{f.strength}]")
    lines.append(f"terminal: {rep.terminal.tag} [{rep.terminal.strength}]")
    lines += rep.notes
    return "\n".join(lines)


def _short(params: dict) -> dict:
    return {k: v for k, v in params.items() if k not in ("witnesses", "partition", "vertex")}


def _last_graph(rep):
    r = rep.steps[-1].vertex.relator if rep.steps else rep.presentation.relator
    return cycle_graph(r)


def cmd_tower(args) -> Outcome:
    p = load_presentation(args.presentation, args.gens)
    rep = build_tower(p, args.budget if args.budget is not None else 12)
    return Outcome(rep.to_dict(), _report_text(rep), _last_graph(rep),
                   rep.terminal.tag in ("BudgetExhausted", "UnknownAtBudget"))


def _classify_one(job):
    arg, gens, budget = job
    p = load_presentation(arg, gens)
    rep = classify_presentation(p, pi_budget=PiRankBudget(budget) if budget is not None else None)
    return rep


def cmd_classify(args) -> Outcome:
    jobs = [(a, args.gens, args.budget) for a in args.presentations]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            reps = list(ex.map(_classify_one, jobs))
    else:
        reps = [_classify_one(s) for s in jobs]
    if len(reps) == 1:
        rep = reps[0]
        return Outcome(rep.to_dict(), _report_text(rep), _last_graph(rep),
                       rep.terminal.tag in ("BudgetExhausted", "UnknownAtBudget"))
    payload = {"reports": [r.to_dict() for r in reps]}
    text = "\n\n".join(_report_text(r) for r in reps)
    neg = any(r.terminal.tag in ("BudgetExhausted", "UnknownAtBudget") for r in reps)
    return Outcome(payload, text, _last_graph(reps[-1]), neg)


def _sub_word(text: str) -> Word:
    w = _word(text)
    if w.generators() <= {"a", "t"}:
        return subscript_word(w, "a", "t")
    return w


def cmd_construct_pe(args) -> Outcome:
    slope = Slope.parse(args.slope)
    x, y = _sub_word(args.x), _sub_word(args.y)
    z = _sub_word(args.z) if args.z is not None else None
    p = construct_primitive_extension(args.kind, slope, x, y, z, shift_budget=args.budget)
    payload = {"kind": args.kind, "slope": str(slope), "x": str(x), "y": str(y),
               "z": None if z is None else str(z), "presentation": p.to_dict()}
    return Outcome(payload, p.format().rstrip(), cycle_graph(p.relator))


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=None,
                        help="search budget (quotient nodes, shift length or tower depth, per command)")
    common.add_argument("--json", action="store_true", help="emit key-sorted JSON")
    common.add_argument("--dot", metavar="PATH", help="write the relevant graph as DOT")
    common.add_argument("--strict", action="store_true", help="exit 1 on negative verdicts")

    ap = argparse.ArgumentParser(prog="orel", description="One-relator groups: words, graphs, PEI words, towers.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("reduce", cmd_reduce, "free and cyclic reduction, primitive root")
    sp.add_argument("word")
    sp.add_argument("--cyclic", action="store_true")
    sp = add("christoffel", cmd_christoffel, "Christoffel word pr_{p/q}(x, y)")
    sp.add_argument("slope")
    sp.add_argument("--x", default="a")
    sp.add_argument("--y", default="b")
    sp = add("primitive", cmd_primitive, "rank-2 primitivity")
    sp.add_argument("word")
    sp.add_argument("--gens")
    sp = add("graph", cmd_graph, "Stallings graph of a subgroup")
    sp.add_argument("action", choices=("fold", "core", "dot"))
    sp.add_argument("words", nargs="+")
    sp = add("intersect", cmd_intersect, "intersection of two subgroups")
    sp.add_argument("--h", required=True, help="comma separated generators")
    sp.add_argument("--k", required=True)
    sp = add("malnormal", cmd_malnormal, "malnormality of a family of cyclic subgroups")
    sp.add_argument("words", nargs="+")
    sp = add("pei", cmd_pei, "primitive exceptional intersection check or search")
    sp.add_argument("word")
    sp.add_argument("--partition", required=True, help='e.g. "A=a B=b C=c"')
    sp.add_argument("--slope")
    sp.add_argument("--x")
    sp.add_argument("--y")
    sp.add_argument("--z")
    sp.add_argument("--rotations", action="store_true")
    sp = add("pirank", cmd_pirank, "bounded primitivity rank")
    sp.add_argument("word")
    sp = add("twofree", cmd_twofree, "2-freeness certificate")
    sp.add_argument("word")
    for name, fn, h in (("rewrite", cmd_rewrite, "one Magnus rewriting step"),
                        ("tower", cmd_tower, "one-relator tower")):
        sp = add(name, fn, h)
        sp.add_argument("presentation", help=".pres file, inline text or relator word")
        sp.add_argument("--gens")
        if name == "rewrite":
            sp.add_argument("--stable")
            sp.add_argument("--rebalance", action="store_true")
    sp = add("classify", cmd_classify, "classification report")
    sp.add_argument("presentations", nargs="+")
    sp.add_argument("--gens")
    sp.add_argument("--jobs", type=int, default=1)
    sp = add("construct-pe", cmd_construct_pe, "build E_{p/q} or F_{p/q} over {a, t}")
    sp.add_argument("--kind", choices=("E", "F"), required=True)
    sp.add_argument("--slope", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--z")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        out = args.fn(args)
    except (WordError, ValueError) as exc:
        print(f"orel: error: {exc}", file=sys.stderr)
        return 2
    if args.dot and out.graph is not None:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(out.graph.to_dot())
    print(json.dumps(out.payload, sort_keys=True, indent=2) if args.json else out.text)
    return 1 if args.strict and out.negative else 0


if __name__ == "__main__":
    sys.exit(main())
