"""Classify the powered family <c0, c1 | pr_{p/q}(c0^m, c1^-n)>.

Prints one row per parameter tuple: the Powered parameters, whether the
relator is 2-free, and the tower terminal.  Cost grows quickly with the
relator length (the tower's primitive-extension search dominates); the
defaults finish in seconds, ``--max-slope 5`` takes minutes.

    python scripts/meskin_table.py --max-slope 4 --max-exp 3
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass
from math import gcd

from orel.christoffel import Slope, christoffel_word
from orel.presentation import OneRelatorPresentation
from orel.tower import classify_presentation
from orel.words import Word


@dataclass
class TableConfig:
    max_slope: int = 3      # p + q bound
    max_exp: int = 3        # m, n bound
    max_depth: int = 6


def rows(cfg: TableConfig):
    for s in range(2, cfg.max_slope + 1):
        for p in range(1, s):
            q = s - p
            if gcd(p, q) != 1:
                continue
            # m or n = 1 can make the relator primitive, so start at 2
            for m in range(2, cfg.max_exp + 1):
                for n in range(2, cfg.max_exp + 1):
                    r = christoffel_word(Slope(p, q), Word.gen("c0", m), Word.gen("c1", -n))
                    rep = classify_presentation(OneRelatorPresentation.of(("c0", "c1"), r), max_depth=cfg.max_depth)
                    pw = rep.finding("Powered")
                    yield (p, q, m, n, (pw[0].params["m"], pw[0].params["n"]) if pw else None,
                           bool(rep.finding("NotTwoFree")), rep.terminal.tag)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-slope", type=int, default=TableConfig.max_slope)
    ap.add_argument("--max-exp", type=int, default=TableConfig.max_exp)
    ap.add_argument("--max-depth", type=int, default=TableConfig.max_depth)
    a = ap.parse_args(argv)
    cfg = TableConfig(a.max_slope, a.max_exp, a.max_depth)
    print(f"{'p/q':>5} {'m':>2} {'n':>2}  {'Powered':>9}  {'expected':>9}  NotTwoFree  terminal")
    for p, q, m, n, got, ntf, term in rows(cfg):
        print(f"{p}/{q:<3} {m:>2} {n:>2}  {str(got):>9}  {str((q * m, p * n)):>9}  {str(ntf):10s}  {term}", flush=True)


if __name__ == "__main__":
    main()
