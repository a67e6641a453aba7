"""Command-line front end.

Commands:
- compute           Poincaré table, Euler characteristic and Alexander verdict
- relations         non-local relations of one resolution
- check-invariance  compare two braids, or one braid against a move battery
- alexander         Alexander polynomial from the Burau representation
- dump-diagram      layered diagram (or one resolution) as an adjacency table

Exit codes: 0 success / PASS, 1 computation failure or FAIL, 2 usage or
validation error.

Environment variables:
- HFK_THREADS: size of the per-resolution work pool (default 1).
- HFK_DEBUG_LOG: NDJSON file receiving per-resolution timing records.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import pandas as pd

from braid import BraidError, build_layered_diagram, dump_diagram, parse_braid, random_moves
from config import DEFAULT_DEGREE_CAP, DEFAULT_MOVES, DEFAULT_SEED, DEFAULT_SUBSET_CAP
from homology import (
    InvarianceReport,
    assemble_cube,
    compare_tables,
    compute_table,
    euler_characteristic,
    generator_counts,
)
from oracle import IntLaurentPoly, burau_alexander, equal_up_to_unit
from resolution import dump_resolution, nonlocal_relations, parse_index, resolve, singular_index

COMMANDS = ("compute", "relations", "check-invariance", "alexander", "dump-diagram")
METHODS = ("cycles", "regions", "subsets")
FORMATS = ("json", "csv", "text")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    braids: List[str] = field(default_factory=list)
    resolution: Optional[str] = None
    method: Optional[str] = None
    minimal: bool = False
    reduced: bool = True
    output_format: str = "text"
    subset_cap: int = DEFAULT_SUBSET_CAP
    degree_cap: int = DEFAULT_DEGREE_CAP
    auto: bool = False
    moves: int = DEFAULT_MOVES
    seed: int = DEFAULT_SEED

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.method is not None and self.command != "relations":
            raise ConfigError("--method only applies to the relations command")
        if self.minimal and self.command != "relations":
            raise ConfigError("--minimal only applies to the relations command")
        if self.resolution is not None and self.command not in ("relations", "dump-diagram"):
            raise ConfigError("--resolution only applies to relations and dump-diagram")
        if self.auto and self.command != "check-invariance":
            raise ConfigError("--auto only applies to check-invariance")
        if not self.reduced and self.command != "compute":
            raise ConfigError("--unreduced only applies to compute")
        expected = 1 if self.command != "check-invariance" or self.auto else 2
        if len(self.braids) != expected:
            raise ConfigError(f"{self.command} needs exactly {expected} --braid value(s), got {len(self.braids)}")
        if self.output_format not in FORMATS:
            raise ConfigError(f"--format must be one of {', '.join(FORMATS)}")
        if self.subset_cap <= 0 or self.degree_cap <= 0:
            raise ConfigError("caps must be positive integers")
        if self.moves < 0:
            raise ConfigError("--moves must be a non-negative integer")
        if self.auto and self.moves < 1:
            raise ConfigError("--auto needs at least one move")


def build_parser() -> argparse.ArgumentParser:
    # Every flag lives on the shared parent; RunConfig.validate rejects the
    # ones that do not apply to the chosen command.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--braid", action="append", default=[], help='braid word, e.g. "b=3; 1 -2 1 -2"')
    common.add_argument("--resolution", help="bit string, one bit per crossing")
    common.add_argument("--method", choices=METHODS, help="relation family (default: regions)")
    common.add_argument("--minimal", action="store_true", help="minimal subsets / drop redundant regions")
    common.add_argument("--format", dest="output_format", choices=FORMATS, default="text")
    common.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP, help="Groebner degree safety bound")
    common.add_argument("--subset-cap", type=int, default=DEFAULT_SUBSET_CAP, help="max vertex subsets enumerated")
    common.add_argument("--auto", action="store_true", help="generate moves from the single --braid")
    common.add_argument("--moves", type=int, default=DEFAULT_MOVES)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    reduced = common.add_mutually_exclusive_group()
    reduced.add_argument("--reduced", dest="reduced", action="store_true", default=True, help="set x0 = 0 (default)")
    reduced.add_argument("--unreduced", dest="reduced", action="store_false", help="keep x0; Hilbert series only")

    ap = argparse.ArgumentParser(prog="hfk-cube", description="Knot Floer cube of resolutions over F2(t).")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("compute", parents=[common], help="homology table, Euler characteristic and Alexander check")
    sub.add_parser("relations", parents=[common], help="non-local relations of one resolution (default: all singular)")
    sub.add_parser("check-invariance", parents=[common], help="compare homology across Markov moves")
    sub.add_parser("alexander", parents=[common], help="Burau-oracle Alexander polynomial")
    sub.add_parser("dump-diagram", parents=[common], help="edge table of the diagram, or of one resolution")
    return ap


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        braids=list(args.braid),
        resolution=args.resolution,
        method=args.method,
        minimal=args.minimal,
        reduced=args.reduced,
        output_format=args.output_format,
        subset_cap=args.subset_cap,
        degree_cap=args.degree_cap,
        auto=args.auto,
        moves=args.moves,
        seed=args.seed,
    )


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _status(cfg: RunConfig, msg: str) -> None:
    print(msg, file=sys.stdout if cfg.output_format == "text" else sys.stderr)


def _emit(cfg: RunConfig, payload: dict, frame: pd.DataFrame, text: str) -> None:
    if cfg.output_format == "json":
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    elif cfg.output_format == "csv":
        sys.stdout.write(frame.to_csv(index=False))
    else:
        print(text)


def format_half_integer(poly: IntLaurentPoly) -> str:
    """Render a doubled-exponent polynomial in q."""
    if all(e % 2 == 0 for e, _ in poly.terms):
        return str(IntLaurentPoly(tuple((e // 2, c) for e, c in poly.terms)))
    return f"{poly}  [exponents in q^1/2]"


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_compute(cfg: RunConfig) -> int:
    w = parse_braid(cfg.braids[0])
    D = build_layered_diagram(w)
    _status(cfg, f"🚀 {w}: {2 ** len(D.crossing_layers)} resolutions, {D.num_edges} edges")

    if not cfg.reduced:
        C = assemble_cube(D, reduced=False, degree_cap=cfg.degree_cap)
        records = [
            {"resolution": "".join(map(str, I)), "zero": P.is_zero, "hilbert": str(P.hilbert)}
            for I, P in sorted(C.vertices.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        ]
        frame = pd.DataFrame(records, columns=["resolution", "zero", "hilbert"])
        text = "\n".join(f"{r['resolution']}: {r['hilbert']}" for r in records)
        _emit(cfg, {"braid": str(w), "reduced": False, "resolutions": records}, frame, text)
        return 0

    C, table = compute_table(w, degree_cap=cfg.degree_cap, progress=cfg.output_format == "text")
    chi = euler_characteristic(C)
    delta = burau_alexander(w)
    match = equal_up_to_unit(chi, delta.doubled())
    counts = generator_counts(C, table)

    payload = {
        "braid": str(w),
        "reduced": True,
        **table.to_dict(),
        "alexander": [[e, c] for e, c in delta.terms],
        "verdict": "MATCH" if match else "MISMATCH",
        "generators": counts,
    }
    text = "\n".join(
        [
            table.to_text(),
            "-" * 40,
            f"total rank      : {table.total_rank} (homological shift {table.shift})",
            f"generators      : {counts['total_reduced_rank']} over {counts['nonzero_resolutions']} non-zero resolutions",
            f"Euler char      : {format_half_integer(chi)}",
            f"Alexander (Δ)   : {delta}",
            f"{'✅ MATCH' if match else '❌ MISMATCH'}",
        ]
    )
    _emit(cfg, payload, table.to_frame(), text)
    return 0 if match else 1


def cmd_relations(cfg: RunConfig) -> int:
    w = parse_braid(cfg.braids[0])
    D = build_layered_diagram(w)
    I = parse_index(cfg.resolution, D) if cfg.resolution else singular_index(D)
    G = resolve(D, I)
    method = cfg.method or "regions"
    relations = nonlocal_relations(G, method=method, minimal=cfg.minimal, cap=cfg.subset_cap)

    seen, unique = set(), []
    for r in relations:
        if r.key() not in seen:
            seen.add(r.key())
            unique.append(r)
    records = [
        {
            "source": r.source,
            "provenance": r.provenance.value,
            "relation": str(r),
            "weight": r.weight,
            "w_out": list(r.w_out),
            "w_in": list(r.w_in),
        }
        for r in unique
    ]
    payload = {"braid": str(w), "resolution": "".join(map(str, I)), "method": method, "relations": records}
    text = "\n".join(f"{r['source']}\t{r['relation']}" for r in records)
    frame = pd.DataFrame(records, columns=["source", "provenance", "relation", "weight", "w_out", "w_in"])
    _emit(cfg, payload, frame, text)
    return 0


def cmd_check_invariance(cfg: RunConfig) -> int:
    base = parse_braid(cfg.braids[0])
    if cfg.auto:
        others = [(str(mv), moved) for mv, moved in random_moves(base, cfg.moves, cfg.seed)]
    else:
        others = [("given", parse_braid(cfg.braids[1]))]

    _, base_table = compute_table(base, degree_cap=cfg.degree_cap)
    reports: List[Dict] = []
    all_pass = True
    for label, other in others:
        _status(cfg, f"🔍 {base}  vs  {other}  ({label})")
        _, table = compute_table(other, degree_cap=cfg.degree_cap)
        equal, diff = compare_tables(base_table, table)
        report = InvarianceReport(str(base), str(other), equal, table.shift - base_table.shift, diff, base_table, table)
        all_pass = all_pass and equal
        reports.append(dict(report.to_dict(), move=label))
        _status(cfg, f"   {'✅ PASS' if equal else '❌ FAIL'} (homological shift {report.shift})")
        for a, h, left, right in diff:
            _status(cfg, f"   A={a}/2 h={h}: {left} vs {right}")

    payload = {"verdict": "PASS" if all_pass else "FAIL", "comparisons": reports}
    frame = pd.DataFrame(
        [{"left": r["left"], "right": r["right"], "move": r["move"], "verdict": r["verdict"]} for r in reports],
        columns=["left", "right", "move", "verdict"],
    )
    text = f"{'🎉 PASS' if all_pass else '❌ FAIL'}: {sum(r['verdict'] == 'PASS' for r in reports)}/{len(reports)}"
    _emit(cfg, payload, frame, text)
    return 0 if all_pass else 1


def cmd_alexander(cfg: RunConfig) -> int:
    w = parse_braid(cfg.braids[0])
    delta = burau_alexander(w)
    frame = pd.DataFrame([{"exponent": e, "coefficient": c} for e, c in delta.terms], columns=["exponent", "coefficient"])
    _emit(cfg, {"braid": str(w), "alexander": [[e, c] for e, c in delta.terms]}, frame, str(delta))
    return 0


def cmd_dump_diagram(cfg: RunConfig) -> int:
    w = parse_braid(cfg.braids[0])
    D = build_layered_diagram(w)
    if cfg.resolution:
        G = resolve(D, parse_index(cfg.resolution, D))
        text = dump_resolution(G)
        edges = [{"label": e, "tail": G.tails[e], "head": G.heads[e]} for e in range(G.nvars)]
    else:
        text = dump_diagram(D)
        edges = [
            {
                "label": e.label,
                "tail": None if e.tail is None else list(e.tail),
                "head": None if e.head is None else list(e.head),
                "boundary": e.boundary,
                "position": e.position,
            }
            for e in D.edges
        ]
    frame = pd.DataFrame(edges)
    _emit(cfg, {"braid": str(w), "resolution": cfg.resolution, "edges": edges}, frame, text)
    return 0


HANDLERS = {
    "compute": cmd_compute,
    "relations": cmd_relations,
    "check-invariance": cmd_check_invariance,
    "alexander": cmd_alexander,
    "dump-diagram": cmd_dump_diagram,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        cfg.validate()
        return HANDLERS[cfg.command](cfg)
    except (BraidError, ConfigError, ValueError) as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except (RuntimeError, ArithmeticError) as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
