"""Survey random words over {a, b, c} for PEI decompositions.

For each sampled cyclically reduced word the bounded search looks for a
first- or second-type decomposition; accepted words are then passed to the
2-freeness certificate.  Prints a summary table and optionally a JSON dump.

    python scripts/pei_survey.py --samples 400 --max-len 10 --seed 7
"""
from __future__ import annotations

import argparse
import json
import random
from collections import Counter
from dataclasses import asdict, dataclass

from orel.exceptional import MagnusPartition, find_pei_decompositions
from orel.words import Word, cyclic_normal_form, cyclic_reduce
from orel.wsubgroups import two_free_certificate


@dataclass
class SurveyConfig:
    samples: int = 300
    min_len: int = 3
    max_len: int = 10
    seed: int = 0
    shift_budget: int = 2
    rotations: bool = True


def sample_word(rng: random.Random, length: int) -> Word:
    letters = []
    while len(letters) < length:
        l = (rng.choice("abc"), rng.choice((1, -1)))
        if letters and letters[-1] == (l[0], -l[1]):
            continue
        letters.append(l)
    return cyclic_reduce(Word(letters)).core


def run(cfg: SurveyConfig) -> dict:
    rng = random.Random(cfg.seed)
    part = MagnusPartition.of("a", "b", "c")
    seen = set()
    tags: Counter = Counter()
    two_free: Counter = Counter()
    examples = []
    while len(seen) < cfg.samples:
        u = sample_word(rng, rng.randint(cfg.min_len, cfg.max_len))
        key = cyclic_normal_form(u) if u else None
        if not u or key in seen:
            continue
        seen.add(key)
        found = find_pei_decompositions(u, part, shift_budget=cfg.shift_budget, rotations=cfg.rotations)
        if not found:
            tags["none found"] += 1
            continue
        tags[found[0].tag] += 1
        verdict = two_free_certificate(u).tag
        two_free[verdict] += 1
        if len(examples) < 10:
            examples.append({"word": str(u), **found[0].to_dict(), "two_free": verdict})
    return {"config": asdict(cfg), "decompositions": dict(tags), "two_free": dict(two_free), "examples": examples}


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in asdict(SurveyConfig()).items():
        flag = "--" + name.replace("_", "-")
        if isinstance(default, bool):
            ap.add_argument(flag, action=argparse.BooleanOptionalAction, default=default)
        else:
            ap.add_argument(flag, type=type(default), default=default)
    ap.add_argument("--json", action="store_true")
    args = vars(ap.parse_args(argv))
    as_json = args.pop("json")
    report = run(SurveyConfig(**args))
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=True))
        return
    print(f"{report['config']['samples']} words, lengths {report['config']['min_len']}..{report['config']['max_len']}")
    for tag, n in sorted(report["decompositions"].items()):
        print(f"  {tag:12s} {n}")
    print("2-freeness of accepted words:")
    for tag, n in sorted(report["two_free"].items()):
        print(f"  {tag:16s} {n}")
    if report["two_free"].get("NotTwoFree"):
        print("WARNING: accepted word reported NotTwoFree")


if __name__ == "__main__":
    main()
