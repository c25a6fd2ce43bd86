"""Command-line front end: enumerate, verify, invariants, bounds.

Exit codes: 0 success, 1 internal invariant violation, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._backend import configure_logging
from .bounds import BOUND_CSV_COLUMNS, UNMODELED, bound_table, constant_checks, ordering_threshold
from .census import (
    EXHAUSTIVE_MAX_S,
    all_tensors,
    check_report,
    classify_exhaustive,
    classify_sampled,
    parallel_map,
)
from .constructions import (
    ConstructionUndefined,
    construction_validity,
    pair_constraints,
    sample_constrained_tensors,
    sample_tensors,
    t2_words,
    v2_words,
)
from .gf2 import rank_rows
from .group import StructureTensor, make_group
from .invariants import CSV_COLUMNS, InvariantViolation, invariant_rows

log = logging.getLogger("isoprod")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    s: list[int]
    q: list[int]
    seed: int
    sample_count: int | None
    exhaustive: bool
    jobs: int
    output_path: str | None
    format: str
    uniform: bool = False
    direct: bool = False


def parse_int_list(text: str) -> list[int]:
    """'3', '2-5', '1,3,6-8' or '' (empty)."""
    out: list[int] = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def fmt_number(v):
    """Exact for integers, 12 significant digits otherwise."""
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else float(f"{float(v):.12g}")
    if isinstance(v, float):
        return float(f"{v:.12g}")
    if isinstance(v, dict):
        return {k: fmt_number(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [fmt_number(x) for x in v]
    return v


def csv_cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def dumps(obj) -> str:
    return json.dumps(fmt_number(obj), sort_keys=True)


# --------------------------------------------------------------------------
# commands


def cmd_enumerate(cfg: RunConfig) -> tuple[str, int]:
    if len(cfg.s) != 1:
        raise UsageError("enumerate takes a single --s")
    s = cfg.s[0]
    if cfg.format != "json":
        raise UsageError("enumerate writes JSON only")
    if cfg.exhaustive and cfg.sample_count is not None:
        raise UsageError("--exhaustive and --sample are exclusive")
    if cfg.exhaustive:
        if s > EXHAUSTIVE_MAX_S:
            raise UsageError(f"--exhaustive needs s <= {EXHAUSTIVE_MAX_S}; use --sample N")
        rep, _ = classify_exhaustive(s, cfg.jobs, cfg.q or None)
    elif cfg.sample_count is not None:
        if len(cfg.q) > 1:
            raise UsageError("sampling takes at most one --q")
        q = cfg.q[0] if cfg.q else None
        rep, _ = classify_sampled(s, cfg.sample_count, cfg.seed, q, cfg.jobs)
    else:
        raise UsageError("enumerate needs --exhaustive (s <= 2) or --sample N")
    bad = check_report(rep)
    out = rep.as_dict()
    out["invariant_violations"] = bad
    return dumps(out) + "\n", 1 if bad else 0


def _verify_one(args: tuple[int, int, int, bool]) -> dict:
    s, bits, q, direct = args
    rep = construction_validity(make_group(StructureTensor(s, bits)), q, direct)
    return rep.to_dict()


def _construction_defined(s: int, q: int) -> str | None:
    try:
        if q == 0:
            t2_words(s)
        else:
            v2_words(s, q)
    except ConstructionUndefined as exc:
        return str(exc)
    return None


def cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    if len(cfg.s) != 1 or len(cfg.q) > 1:
        raise UsageError("verify takes a single --s and --q")
    s = cfg.s[0]
    q = cfg.q[0] if cfg.q else 0
    if cfg.sample_count is not None:
        rng = np.random.default_rng(cfg.seed)
        if cfg.uniform or _construction_defined(s, q) is not None:
            tensors = sample_tensors(s, cfg.sample_count, rng)
        else:
            tensors = sample_constrained_tensors(pair_constraints(s, q), cfg.sample_count, rng)
    elif s <= EXHAUSTIVE_MAX_S:
        tensors = [t for t in all_tensors(s) if rank_rows(t.cvectors()) == s]
    else:
        raise UsageError(f"verify needs --sample N for s > {EXHAUSTIVE_MAX_S}")
    records = parallel_map(_verify_one, [(s, t.bits, q, cfg.direct) for t in tensors], cfg.jobs)
    buf = io.StringIO()
    flags = ("order_2_ok", "generation_ok", "relation_ok", "disjointness_ok", "all_ok")
    passed = dict.fromkeys(flags, 0)
    undefined = 0
    for rec in records:
        buf.write(dumps(rec) + "\n")
        undefined += rec["undefined"] is not None
        for f in flags:
            passed[f] += rec["flags"][f]
    summary = {
        "summary": True, "s": s, "q": q, "seed": cfg.seed if cfg.sample_count is not None else None,
        "examined": len(records), "undefined": undefined,
        "pass": passed, "fail": {f: len(records) - passed[f] for f in flags},
        "construction_undefined": _construction_defined(s, q),
    }
    buf.write(dumps(summary) + "\n")
    return buf.getvalue(), 0


def cmd_invariants(cfg: RunConfig) -> tuple[str, int]:
    qs = cfg.q if cfg.q else [0]
    rows = invariant_rows([(s, q) for s in cfg.s for q in qs])
    if cfg.format == "json":
        return dumps(rows) + "\n", 0
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue(), 0


def cmd_bounds(cfg: RunConfig) -> tuple[str, int]:
    if len(cfg.s) == 1:
        s_values = list(range(2, cfg.s[0] + 1))
    else:
        s_values = sorted(x for x in set(cfg.s) if x >= 2)
    reports = bound_table(max(s_values), min(s_values)) if s_values else []
    reports = [r for r in reports if r.s in s_values]
    checks = constant_checks()
    if cfg.format == "json":
        doc = {
            "rows": [r.as_dict() for r in reports],
            "constant_checks": [vars(c) for c in checks],
            "ordering_threshold": ordering_threshold(),
            "error_terms": UNMODELED,
        }
        return dumps(doc) + "\n", 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BOUND_CSV_COLUMNS)
    for r in reports:
        w.writerow([csv_cell(getattr(r, c)) for c in BOUND_CSV_COLUMNS])
    for c in checks:
        buf.write(f"# check,{c.name},{c.value},{'pass' if c.holds and c.agrees_to_12_digits else 'fail'}\n")
    buf.write(f"# error_terms,{UNMODELED}\n")
    return buf.getvalue(), 0


COMMANDS = {
    "enumerate": cmd_enumerate,
    "verify": cmd_verify,
    "invariants": cmd_invariants,
    "bounds": cmd_bounds,
}


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--s", default=None, help="value, range a-b, or comma list")
    common.add_argument("--q", default=None, help="value, range a-b, or comma list")
    common.add_argument("--exhaustive", action="store_true")
    common.add_argument("--sample", type=int, default=None, metavar="N")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--out", default=None, metavar="PATH")
    p = argparse.ArgumentParser(prog="isoprod", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("enumerate", parents=[common], help="tensor census and isomorphism classes")
    v = sub.add_parser("verify", parents=[common], help="construction checks, one JSON line per tensor")
    v.add_argument("--uniform", action="store_true", help="sample all independent tensors, not the solution space")
    v.add_argument("--direct", action="store_true", help="always intersect stabilizer sets")
    sub.add_parser("invariants", parents=[common], help="surface invariants over an (s, q) grid")
    sub.add_parser("bounds", parents=[common], help="leading-term bound table")
    return p


DEFAULT_FORMAT = {"enumerate": "json", "verify": "json", "invariants": "csv", "bounds": "csv"}


def make_config(ns: argparse.Namespace) -> RunConfig:
    try:
        s = parse_int_list(ns.s) if ns.s is not None else ([10] if ns.command == "bounds" else None)
        q = parse_int_list(ns.q) if ns.q is not None else []
    except ValueError as exc:
        raise UsageError(f"bad integer list: {exc}") from None
    if s is None:
        raise UsageError("--s is required")
    if any(x < 1 for x in s) or any(x < 0 for x in q):
        raise UsageError("need s >= 1 and q >= 0")
    if ns.sample is not None and ns.sample < 1:
        raise UsageError("--sample must be positive")
    if ns.jobs < 1:
        raise UsageError("--jobs must be positive")
    return RunConfig(
        command=ns.command, s=s, q=q, seed=ns.seed, sample_count=ns.sample,
        exhaustive=ns.exhaustive, jobs=ns.jobs, output_path=ns.out,
        format=ns.format or DEFAULT_FORMAT[ns.command],
        uniform=getattr(ns, "uniform", False), direct=getattr(ns, "direct", False),
    )


def main(argv: Sequence[str] | None = None) -> int:
    configure_logging()
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = make_config(ns)
        text, code = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"isoprod: error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"isoprod: invariant violation: {exc}", file=sys.stderr)
        return 1
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
