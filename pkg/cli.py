# cli.py
"""
Command-line front door.

    python cli.py cohomology --surface F1 --div 1,0            -> 1 0 0
    python cli.py table --surface F2 --bundle ext:0,-2/0,0#0 --window -2,2,-2,2 --format csv
    python cli.py decide --surface F0 --bundle ext:0,0/2,-1#0
    python cli.py decide --surface F2 --bundle ext:0,-2/0,0#0 --against sum:0,-1/0,-1
    python cli.py decide --surface F0 --table table.json
    python cli.py corpus

Exit codes (decide): 0 split, 1 not split, 2 inconclusive, 3 error.
Exit codes (corpus): 0 every pinned instance matched, 1 otherwise, 3 error.

Output on stdout is deterministic for a given job; logs go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from jsonschema import Draft202012Validator

import cech_engine
from bundles import (
    ORACLES,
    SplitBundle,
    Window,
    h_table,
    parse_bundle,
    parse_window,
    table_from_json,
    table_to_csv,
    table_to_json,
)
from cech_engine import TruncationUnstable, cech_line_h
from line_cohomology import CohomologyTriple, line_h
from logging_utils import configure_logging, log_event
from picard_lattice import ChernData, DivisorClass, Surface, chi_rank2, parse_divisor, parse_surface, twist_chern
from regression_corpus import REGRESSION_BUNDLES
from splitting_criterion import (
    CohomologyOracle,
    NotSplitWithin,
    Split,
    SplitVerdict,
    decide,
    theorem1_decide,
    theorem5_decide,
    verdict_to_json,
)

logger = logging.getLogger("cli")
logger.setLevel(logging.INFO)

EXIT_SPLIT = 0
EXIT_NOT_SPLIT = 1
EXIT_INCONCLUSIVE = 2
EXIT_ERROR = 3

COMMANDS = ("cohomology", "table", "decide", "corpus")
FORMATS = ("text", "json", "csv")
DEFAULT_WINDOW_RADIUS = 3
# flags whose values may start with a minus sign
VALUE_FLAGS = ("--div", "--window")

SCHEMA_DIR = Path(__file__).resolve().parent / "schemas"


class JobSpecError(ValueError):
    """A job description that cannot be run as given."""


# --------------------------------------------------------------------
# Job specs
# --------------------------------------------------------------------


@dataclass(frozen=True)
class JobSpec:
    """
    Everything a run depends on. Textual form: `key=value` pairs joined by
    `;` in field order, empty fields omitted, e.g.
        command=decide;surface=F2;bundle=ext:0,-2/0,0#0;format=json;oracle=closed
    """

    command: str
    surface: str = ""
    bundle: str = ""
    divisor: str = ""
    window: str = ""
    format: str = ""
    oracle: str = "closed"
    against: str = ""
    table: str = ""

    def to_text(self) -> str:
        return ";".join(f"{f.name}={getattr(self, f.name)}" for f in fields(self) if getattr(self, f.name))

    @classmethod
    def from_text(cls, text: str) -> "JobSpec":
        known = {f.name for f in fields(cls)}
        values: Dict[str, str] = {}
        for part in (text or "").split(";"):
            if not part:
                continue
            key, sep, value = part.partition("=")
            if not sep or key not in known:
                raise JobSpecError(f"Bad job spec field {part!r}")
            values[key] = value
        if "command" not in values:
            raise JobSpecError(f"Job spec {text!r} has no command")
        if "oracle" not in values:
            values["oracle"] = ""
        return cls(**values)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "JobSpec":
        return cls(
            command=args.command,
            surface=getattr(args, "surface", "") or "",
            bundle=getattr(args, "bundle", "") or "",
            divisor=getattr(args, "div", "") or "",
            window=getattr(args, "window", "") or "",
            format=getattr(args, "format", "") or "",
            oracle=getattr(args, "oracle", "") or "",
            against=getattr(args, "against", "") or "",
            table=getattr(args, "table", "") or "",
        )

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise JobSpecError(f"Unknown command {self.command!r}")
        if self.format and self.format not in FORMATS:
            raise JobSpecError(f"Unknown format {self.format!r}")
        if self.oracle and self.oracle not in ORACLES:
            raise JobSpecError(f"Unknown oracle {self.oracle!r}")
        if self.command == "corpus":
            return
        if not self.surface:
            raise JobSpecError(f"{self.command} needs a surface")
        if self.command == "cohomology" and not self.divisor:
            raise JobSpecError("cohomology needs --div")
        if self.command == "table" and not self.bundle:
            raise JobSpecError("table needs --bundle")
        if self.command == "decide" and bool(self.bundle) == bool(self.table):
            raise JobSpecError("decide needs exactly one of --bundle or --table")


def _surface(spec: JobSpec) -> Surface:
    try:
        return parse_surface(spec.surface)
    except ValueError as e:
        raise JobSpecError(str(e)) from e


def _window(spec: JobSpec, surface: Surface) -> Window:
    if not spec.window:
        return Window.square(surface, DEFAULT_WINDOW_RADIUS)
    try:
        return parse_window(surface, spec.window)
    except ValueError as e:
        raise JobSpecError(str(e)) from e


# --------------------------------------------------------------------
# JSON output
# --------------------------------------------------------------------


def _validator(name: str) -> Draft202012Validator:
    schema = json.loads((SCHEMA_DIR / name).read_text(encoding="utf-8"))
    return Draft202012Validator(schema)


def validate_payload(payload: dict, schema_name: str) -> None:
    error = next(_validator(schema_name).iter_errors(payload), None)
    if error is not None:
        raise ValueError(f"output does not match {schema_name}: {error.message}")


def _dumps(payload: object) -> str:
    return json.dumps(payload, ensure_ascii=False, sort_keys=True)


# --------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------


def cmd_cohomology(spec: JobSpec) -> str:
    surface = _surface(spec)
    try:
        d = parse_divisor(surface, spec.divisor)
    except ValueError as e:
        raise JobSpecError(str(e)) from e
    oracle = spec.oracle or "closed"
    if oracle == "closed":
        h = line_h(surface, d)
    else:
        h = cech_line_h(surface, d)
        if oracle == "both" and h != line_h(surface, d):
            raise AssertionError(f"closed form {tuple(line_h(surface, d))} vs Čech {tuple(h)} for {d} on {surface}")
    if spec.format == "json":
        return _dumps({"surface": surface.label, "divisor": d.to_list(), "h": h.to_list()})
    return " ".join(str(x) for x in h)


def cmd_table(spec: JobSpec) -> str:
    surface = _surface(spec)
    try:
        bundle = parse_bundle(surface, spec.bundle)
    except ValueError as e:
        raise JobSpecError(str(e)) from e
    table = h_table(bundle, _window(spec, surface), spec.oracle or "closed")
    if spec.format == "csv":
        return table_to_csv(table)
    payload = table_to_json(table)
    validate_payload(payload, "table.schema.json")
    return _dumps(payload)


def _oracle_for(spec: JobSpec, surface: Surface) -> CohomologyOracle:
    if spec.table:
        data = json.loads(Path(spec.table).read_text(encoding="utf-8"))
        validate_payload(data, "table.schema.json")
        table = table_from_json(data)
        if table.surface != surface:
            raise JobSpecError(f"table is for {table.surface.label}, job is for {surface.label}")
        return CohomologyOracle.from_table(table)
    try:
        bundle = parse_bundle(surface, spec.bundle)
    except ValueError as e:
        raise JobSpecError(str(e)) from e
    return CohomologyOracle.from_bundle(bundle, spec.oracle or "closed")


def run_decision(spec: JobSpec) -> SplitVerdict:
    surface = _surface(spec)
    q = _oracle_for(spec, surface)
    if not spec.against:
        return decide(surface, q)
    try:
        reference = parse_bundle(surface, spec.against)
    except ValueError as e:
        raise JobSpecError(str(e)) from e
    if not isinstance(reference, SplitBundle):
        raise JobSpecError(f"--against needs a direct sum, got {spec.against!r}")
    if surface.is_hirzebruch:
        return theorem1_decide(surface, q, reference)
    return theorem5_decide(q, reference)


def exit_code(verdict: SplitVerdict) -> int:
    if isinstance(verdict, Split):
        return EXIT_SPLIT
    if isinstance(verdict, NotSplitWithin):
        return EXIT_NOT_SPLIT
    return EXIT_INCONCLUSIVE


def cmd_decide(spec: JobSpec) -> tuple:
    verdict = run_decision(spec)
    payload = verdict_to_json(verdict)
    validate_payload(payload, "verdict.schema.json")
    return _dumps(payload), exit_code(verdict)


# --------------------------------------------------------------------
# Regression corpus
# --------------------------------------------------------------------


def euler_table(surface: Surface, ch: ChernData, window: Window) -> Dict[DivisorClass, CohomologyTriple]:
    """Entries carrying only the Euler characteristic predicted by ch, all in h⁰ or h¹."""
    entries = {}
    for t in window:
        chi = chi_rank2(surface, twist_chern(surface, ch, t))
        entries[t] = CohomologyTriple(chi, 0, 0) if chi >= 0 else CohomologyTriple(0, -chi, 0)
    return entries


def _corpus_verdict(instance: dict) -> SplitVerdict:
    surface = parse_surface(instance["surface"])
    if "chern" in instance:
        ch = ChernData(c1=DivisorClass(tuple(instance["chern"]["c1"])), c2=instance["chern"]["c2"])
        entries = euler_table(surface, ch, Window.square(surface, DEFAULT_WINDOW_RADIUS))
        return decide(surface, CohomologyOracle(surface, entries.__getitem__, instance["slug"]))
    spec = JobSpec(command="decide", surface=instance["surface"], bundle=instance["bundle"], against=instance.get("against", ""))
    return run_decision(spec)


def check_instance(instance: dict, verdict: SplitVerdict) -> bool:
    payload = verdict_to_json(verdict)
    if payload["verdict"] != instance["expected"]:
        return False
    if "summands" in instance:
        return sorted(payload["summands"]) == sorted(instance["summands"])
    if "certificate_twist" in instance:
        return any(entry["twist"] == instance["certificate_twist"] for entry in payload["certificate"])
    return True


def run_corpus(instances: Optional[Sequence[dict]] = None) -> dict:
    """Run every pinned instance; one status entry per slug plus an overall status."""
    results = {}
    for instance in REGRESSION_BUNDLES if instances is None else instances:
        slug = instance["slug"]
        try:
            verdict = _corpus_verdict(instance)
            payload = verdict_to_json(verdict)
            results[slug] = {
                "status": "success" if check_instance(instance, verdict) else "mismatch",
                "expected": instance["expected"],
                "verdict": payload,
            }
        except Exception as e:
            logger.exception("Error running corpus instance %s: %s", slug, e)
            results[slug] = {"status": "error", "expected": instance["expected"], "error": str(e)}

    overall = "success" if all(r["status"] == "success" for r in results.values()) else "partial"
    log_event("cli", "corpus_run", status=overall, instances=len(results))
    return {"status": overall, "instances": results}


def cmd_corpus(spec: JobSpec) -> tuple:
    report = run_corpus()
    return _dumps(report), 0 if report["status"] == "success" else 1


# --------------------------------------------------------------------
# Entrypoint
# --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Cohomology tables and splitting verdicts for rank-2 bundles on F_n and P².")
    parser.add_argument("--dump-dir", type=str, default="", help="Write sparse Čech differentials here (overrides CECH_DUMP_DIR)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cohomology", help="h⁰ h¹ h² of a line bundle")
    p.add_argument("--surface", required=True, help="F<n> or P2")
    p.add_argument("--div", required=True, help="a,b (aσ + bf) or d (dH)")
    p.add_argument("--oracle", choices=ORACLES, default="closed")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("table", help="cohomology table of a rank-2 bundle over a window of twists")
    p.add_argument("--surface", required=True)
    p.add_argument("--bundle", required=True, help="sum:L1/L2 or ext:sub/quot[#seed]")
    p.add_argument("--window", default="", help="amin,amax,bmin,bmax (dmin,dmax on P2)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--oracle", choices=ORACLES, default="closed")
    p.add_argument("--output", default="", help="write here instead of stdout")

    p = sub.add_parser("decide", help="splitting verdict")
    p.add_argument("--surface", required=True)
    p.add_argument("--bundle", default="")
    p.add_argument("--table", default="", help="JSON cohomology table to use as the oracle")
    p.add_argument("--against", default="", help="compare with this direct sum")
    p.add_argument("--oracle", choices=ORACLES, default="closed")
    p.add_argument("--format", choices=("json",), default="json")

    sub.add_parser("corpus", help="run the pinned regression instances")
    return parser


def _emit(text: str, output: str = "") -> None:
    if output:
        Path(output).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def join_negative_values(argv: Sequence[str]) -> List[str]:
    """`--div -1,0` -> `--div=-1,0`; argparse would read `-1,0` as an option."""
    out: List[str] = []
    i = 0
    while i < len(argv):
        token = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if token in VALUE_FLAGS and nxt.startswith("-") and not nxt.startswith("--"):
            out.append(f"{token}={nxt}")
            i += 2
        else:
            out.append(token)
            i += 1
    return out


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    try:
        args = build_parser().parse_args(join_negative_values(sys.argv[1:] if argv is None else argv))
    except SystemExit as e:
        return EXIT_ERROR if e.code else 0
    if args.dump_dir:
        cech_engine.CECH_DUMP_DIR = args.dump_dir

    spec = JobSpec.from_args(args)
    try:
        spec.validate()
        if spec.command == "cohomology":
            _emit(cmd_cohomology(spec))
            return 0
        if spec.command == "table":
            _emit(cmd_table(spec), getattr(args, "output", ""))
            return 0
        if spec.command == "decide":
            text, code = cmd_decide(spec)
            _emit(text)
            log_event("cli", "decide", job=spec.to_text(), exit_code=code)
            return code
        text, code = cmd_corpus(spec)
        _emit(text)
        return code
    except JobSpecError as e:
        logger.error("Invalid job %s: %s", spec.to_text(), e)
        return EXIT_ERROR
    except TruncationUnstable as e:
        logger.error("Truncation box unstable: %s", e)
        return EXIT_ERROR
    except Exception as e:
        logger.exception("Job %s failed: %s", spec.to_text(), e)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
