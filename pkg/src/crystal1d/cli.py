"""Command-line entry point: ``crystal1d <command> --potential FILE ...``.

Exit status is 0 on success, 1 when a verification fails (the potential is
not admissible, the oracle finds a better non-interval, a property campaign
records a failure), and 2 on input errors. Failures also produce a
machine-readable ``error`` record in the result document.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

from . import figures
from .errors import InputError, NoCandidates, NotAdmissible, QuadratureNonconvergence
from .optimizer import DEFAULT_TOL, minimize_translation, verify_origin_membership
from .oracle import THREADS_ENV, OracleConfig, oracle_minimize
from .potential import Potential, check_admissible, classify_zero_structure, load
from .schema import SCHEMA_VERSION
from .sets import canonicalize, split_signed
from .transport import build_monotone_map, plan_checks, rearrangement_check, run_campaign, transport_gap

log = logging.getLogger("crystal1d")

COMMANDS = ("validate", "minimize", "oracle", "transport", "sweep")
EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    potential_path: str
    masses: List[float] = field(default_factory=list)
    tolerance: float = DEFAULT_TOL
    window: Optional[float] = None
    grid_step: float = 0.02
    k_max: int = 3
    output_path: Optional[str] = None
    output_format: str = "structured"
    figures_dir: Optional[str] = None
    samples: int = 4001
    union: Optional[str] = None
    trials: int = 1000
    transport_trials: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.output_format not in ("structured", "tabular"):
            raise InputError(f"--format must be structured or tabular, got {self.output_format!r}")
        if self.command in ("minimize", "oracle", "sweep"):
            if not self.masses:
                raise InputError(f"{self.command} needs --mass")
            if any(not m > 0 for m in self.masses):
                raise InputError("every mass must be positive")
        if not self.tolerance > 0:
            raise InputError("--tol must be positive")


def _parse_masses(text: str) -> List[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad mass list {text!r}") from None


def _parse_union(text: str):
    pairs = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        try:
            lo, hi = (float(v) for v in chunk.split(","))
        except ValueError:
            raise InputError(f"bad interval {chunk!r}; expected 'lo,hi'") from None
        if lo > hi:
            raise InputError(f"interval with lo > hi: {chunk!r}")
        pairs.append((lo, hi))
    u = canonicalize(pairs)
    if not u:
        raise InputError("--set describes an empty union")
    return u


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    return max(1, int(raw)) if raw and raw.isdigit() else (os.cpu_count() or 1)


# ---------------------------------------------------------------------------
# commands: each returns (document, tabular rows, ok)
# ---------------------------------------------------------------------------

def _potential_doc(p: Potential) -> dict:
    return getattr(p, "family_spec", None) or p.to_dict()


def _cmd_validate(cfg: RunConfig, p: Potential):
    window = cfg.window or 10.0
    report = check_admissible(p, window=window, n_samples=cfg.samples)
    doc = {"admissibility": report.to_dict(), "zero_structure": None}
    if report.is_admissible:
        zs = classify_zero_structure(p, window=1.0, mass=max(cfg.masses or [1.0]))
        doc["zero_structure"] = {"tag": zs.tag, "witness_xr": zs.witness_xr, "witness_xl": zs.witness_xl,
                                 "scan_cap": zs.scan_cap}
    header = ["x", "kind"]
    rows = [[v.x, v.kind] for v in report.violations]
    return doc, (header, rows), report.is_admissible


def _require_admissible(p: Potential, masses):
    report = check_admissible(p, window=max(10.0, 4.0 * max(masses or [1.0])), n_samples=4001)
    if not report.is_admissible:
        raise NotAdmissible(report)


def _minimize_all(cfg: RunConfig, p: Potential):
    _require_admissible(p, cfg.masses)

    def one(m):
        return minimize_translation(p, m, tol=cfg.tolerance, check=False)

    if len(cfg.masses) == 1:
        return [one(cfg.masses[0])]
    with ThreadPoolExecutor(max_workers=min(_threads(), len(cfg.masses))) as pool:
        return list(pool.map(one, cfg.masses))  # map keeps input order


def _cmd_minimize(cfg: RunConfig, p: Potential):
    results = _minimize_all(cfg, p)
    docs = []
    for r in results:
        d = r.to_dict()
        d["origin_check"] = verify_origin_membership(r, p)
        docs.append(d)
    doc = {"results": docs}
    if cfg.figures_dir:
        paths = []
        for i, r in enumerate(results):
            stem = "profile" if len(results) == 1 else f"profile_{i:03d}"
            paths += figures.write_profile(p, r, cfg.figures_dir, stem)
        doc["figures"] = [str(x) for x in paths]
    rows = [figures.sweep_row(r) for r in results]
    return doc, (figures.SWEEP_COLUMNS, rows), all(d["origin_check"] for d in docs)


def _cmd_sweep(cfg: RunConfig, p: Potential):
    results = _minimize_all(cfg, p)
    doc = {"results": [r.to_dict() for r in results]}
    if cfg.figures_dir:
        doc["figures"] = [str(x) for x in figures.write_sweep(results, cfg.figures_dir)]
    return doc, (figures.SWEEP_COLUMNS, [figures.sweep_row(r) for r in results]), True


def _cmd_oracle(cfg: RunConfig, p: Potential):
    reports = []
    for m in cfg.masses:
        oc = OracleConfig(mass=m, grid_step=cfg.grid_step, window=cfg.window, k_max=cfg.k_max)
        reports.append(oracle_minimize(p, oc))
    header = ["mass", "candidates", "best_union", "best_total", "analytic_total", "gap", "tolerance_bound",
              "dominance_checked", "dominance_violations", "verified"]
    rows = [[r.config.mass, r.candidates_evaluated, json.dumps(r.best_union.to_list()), r.best_energy.total,
             r.analytic_energy, r.gap, r.tolerance_bound, r.dominance_checked, r.dominance_violations,
             r.verified()] for r in reports]
    ok = all(r.verified() and r.dominance_violations == 0 for r in reports)
    return {"oracle": [r.to_dict() for r in reports]}, (header, rows), ok


def _cmd_transport(cfg: RunConfig, p: Potential):
    _require_admissible(p, [])
    if cfg.union:
        u = _parse_union(cfg.union)
        chk = rearrangement_check(p, u)
        e_minus, e_plus = split_signed(u)
        summary = {"set": u.to_list(), "positive": {"lhs": chk.lhs, "rhs": chk.rhs},
                   "negative": {"lhs": chk.lhs_neg, "rhs": chk.rhs_neg}, "holds": chk.holds}
        plans = {}
        ok = chk.holds
        for name, side, sign in (("positive", e_plus, 1.0), ("negative", e_minus.reflected(), -1.0)):
            if not side:
                continue
            plan = build_monotone_map(side)
            disc, contracts, mismatch, identity = plan_checks(p, side)
            gap = transport_gap(p, side, sign)
            lhs, rhs = (chk.lhs, chk.rhs) if sign > 0 else (chk.lhs_neg, chk.rhs_neg)
            summary[name].update({"pushforward_discrepancy": disc, "contraction": contracts,
                                  "mass_mismatch": mismatch, "transport_gap": gap,
                                  "gap_consistency_error": abs((lhs - rhs) - gap)})
            plans[name] = plan.to_list()
            ok = ok and contracts and disc <= 1e-10 and abs((lhs - rhs) - gap) <= 1e-8
        summary["passed"] = bool(ok)
        rows = [[k, json.dumps(v)] for k, v in summary.items()]
        return {"transport": summary, "plans": plans}, (["key", "value"], rows), ok
    camp = run_campaign(p, trials=cfg.trials, transport_trials=min(cfg.transport_trials, cfg.trials), seed=cfg.seed)
    summary = camp.to_dict()
    summary["seed"] = cfg.seed
    rows = [[k, v] for k, v in summary.items()]
    return {"transport": summary}, (["key", "value"], rows), camp.passed


_HANDLERS = {"validate": _cmd_validate, "minimize": _cmd_minimize, "sweep": _cmd_sweep,
             "oracle": _cmd_oracle, "transport": _cmd_transport}


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _render(doc: dict, table, fmt: str) -> str:
    if fmt == "tabular" and table is not None:
        header, rows = table
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])
        return buf.getvalue()
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _emit(text: str, path: Optional[str]):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error_doc(kind: str, message: str, **extra) -> dict:
    err = {"kind": kind, "message": message}
    err.update(extra)
    return {"schema_version": SCHEMA_VERSION, "error": err}


def run(cfg: RunConfig) -> int:
    """Execute one command and write its result document; returns the exit status."""
    try:
        p = load(cfg.potential_path)
        body, table, ok = _HANDLERS[cfg.command](cfg, p)
    except (InputError, NoCandidates) as exc:
        log.error("%s", exc)
        _emit(json.dumps(_error_doc("input-error", str(exc)), indent=2) + "\n", cfg.output_path)
        return EXIT_INPUT
    except NotAdmissible as exc:
        log.error("%s", exc)
        doc = _error_doc("not-admissible", str(exc), admissibility=exc.report.to_dict())
        _emit(json.dumps(doc, indent=2) + "\n", cfg.output_path)
        return EXIT_FAILED
    except QuadratureNonconvergence as exc:
        log.error("%s", exc)
        _emit(json.dumps(_error_doc("numerical-error", str(exc)), indent=2) + "\n", cfg.output_path)
        return EXIT_FAILED

    doc = {"schema_version": SCHEMA_VERSION, "command": cfg.command, "potential": _potential_doc(p)}
    doc.update(body)
    if not ok:
        doc["error"] = {"kind": "verification-failed", "message": f"{cfg.command}: verification failed"}
    _emit(_render(doc, table, cfg.output_format), cfg.output_path)
    if not ok:
        log.error("%s: verification failed", cfg.command)
        return EXIT_FAILED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--potential", required=True, help="potential file (JSON)")
    common.add_argument("--mass", type=_parse_masses, default=[], help="mass or comma-separated list")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="translation tolerance")
    common.add_argument("--window", type=float, default=None, help="sampling / search half-width")
    common.add_argument("--grid-step", type=float, default=0.02)
    common.add_argument("--k-max", type=int, default=3)
    common.add_argument("--out", default=None, help="result file (default: stdout)")
    common.add_argument("--format", choices=("structured", "tabular"), default="structured")
    common.add_argument("--figures", default=None, metavar="DIR",
                        help="write plot data (.csv) and rendered figures (.png) here")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="crystal1d", description="One-dimensional crystal free-energy solver")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("validate", parents=[common], help="check admissibility of a potential")
    v.add_argument("--samples", type=int, default=4001)
    sub.add_parser("minimize", parents=[common], help="optimal interval for each mass")
    sub.add_parser("oracle", parents=[common], help="exhaustive grid search over interval unions")
    t = sub.add_parser("transport", parents=[common], help="rearrangement and transport checks")
    t.add_argument("--set", dest="union", default=None, help="union as 'lo,hi;lo,hi;...'")
    t.add_argument("--trials", type=int, default=1000)
    t.add_argument("--transport-trials", type=int, default=200)
    t.add_argument("--seed", type=int, default=0)
    sub.add_parser("sweep", parents=[common], help="minimize over a list of masses")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig(
            command=args.command, potential_path=args.potential, masses=args.mass, tolerance=args.tol,
            window=args.window, grid_step=args.grid_step, k_max=args.k_max, output_path=args.out,
            output_format=args.format, figures_dir=args.figures,
            samples=getattr(args, "samples", 4001), union=getattr(args, "union", None),
            trials=getattr(args, "trials", 1000), transport_trials=getattr(args, "transport_trials", 200),
            seed=getattr(args, "seed", 0),
        )
    except InputError as exc:
        log.error("%s", exc)
        _emit(json.dumps(_error_doc("input-error", str(exc)), indent=2) + "\n", args.out)
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
