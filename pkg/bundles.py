# bundles.py
"""
Rank-2 bundle presentations and their cohomology tables.

- SplitBundle(L1, L2):       O(L1) ⊕ O(L2)
- ExtensionBundle(e):        0 -> O(sub) -> E -> O(quot) -> 0 with Čech class e
- Textual descriptors (also used by the CLI and the regression corpus):
    sum:a1,b1/a2,b2
    ext:sub/quot          (zero class, i.e. the split extension)
    ext:sub/quot#seed     (seed = index into cech_engine.ext_basis)
  P² classes are single integers: sum:0/-2, ext:-1/1#0

Tables map every twist of a window to (h⁰, h¹, h²). The window is iterated
row-major in ascending order; that order is the output order of JSON and CSV.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import itertools
import logging
import os
import re
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Tuple, Union

from dotenv import load_dotenv

from cech_engine import ExtClass, cech_line_h, ext_basis, rank2_cech_h
from line_cohomology import CohomologyTriple, add_triples, euler, line_h
from logging_utils import log_event
from picard_lattice import (
    ChernData,
    DivisorClass,
    Surface,
    check_classes,
    chi_rank2,
    parse_divisor,
    parse_surface,
    split_chern,
    twist_chern,
)

load_dotenv()

logger = logging.getLogger("bundles")
logger.setLevel(logging.INFO)

TABLE_WORKERS = int(os.environ.get("TABLE_WORKERS", "1"))

ORACLES = ("closed", "cech", "both")


class OracleDisagreement(RuntimeError):
    """Two cohomology routes that must agree returned different triples."""


# --------------------------------------------------------------------
# Presentations
# --------------------------------------------------------------------


@dataclass(frozen=True)
class SplitBundle:
    surface: Surface
    l1: DivisorClass
    l2: DivisorClass

    def __post_init__(self) -> None:
        check_classes(self.surface, self.l1, self.l2)


@dataclass(frozen=True)
class ExtensionBundle:
    surface: Surface
    ext: ExtClass
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        check_classes(self.surface, self.ext.sub, self.ext.quot)

    @property
    def sub(self) -> DivisorClass:
        return self.ext.sub

    @property
    def quot(self) -> DivisorClass:
        return self.ext.quot


Bundle2 = Union[SplitBundle, ExtensionBundle]


def make_extension(surface: Surface, sub: DivisorClass, quot: DivisorClass, seed: Optional[int] = None) -> ExtensionBundle:
    """Extension of O(quot) by O(sub) whose class is basis cocycle `seed` (None = zero class)."""
    if seed is None:
        return ExtensionBundle(surface, ExtClass(sub=sub, quot=quot), None)
    basis = ext_basis(surface, quot, sub)
    if not 0 <= seed < len(basis):
        raise ValueError(
            f"cocycle seed {seed} out of range: Ext¹(O({quot}), O({sub})) on {surface.label} has dimension {len(basis)}"
        )
    return ExtensionBundle(surface, basis[seed], seed)


def twist(e: Bundle2, m: DivisorClass) -> Bundle2:
    if isinstance(e, SplitBundle):
        return SplitBundle(e.surface, e.l1 + m, e.l2 + m)
    return ExtensionBundle(e.surface, e.ext.shifted(m), e.seed)


def chern(e: Bundle2) -> ChernData:
    if isinstance(e, SplitBundle):
        return split_chern(e.surface, e.l1, e.l2)
    return split_chern(e.surface, e.sub, e.quot)


def bundle_label(e: Bundle2) -> str:
    if isinstance(e, SplitBundle):
        return f"sum:{e.l1}/{e.l2}"
    label = f"ext:{e.sub}/{e.quot}"
    if e.seed is not None:
        label += f"#{e.seed}"
    return label


_BUNDLE_RE = re.compile(r"^(sum|ext):([-\d,\s]+)/([-\d,\s]+?)(?:#(\d+))?$")


def parse_bundle(surface: Surface, text: str) -> Bundle2:
    m = _BUNDLE_RE.match((text or "").strip())
    if not m:
        raise ValueError(f"Bundle {text!r} is not sum:L1/L2 or ext:sub/quot[#seed]")
    kind, first, second, seed = m.groups()
    d1 = parse_divisor(surface, first)
    d2 = parse_divisor(surface, second)
    if kind == "sum":
        if seed is not None:
            raise ValueError(f"A direct sum takes no cocycle seed: {text!r}")
        return SplitBundle(surface, d1, d2)
    return make_extension(surface, d1, d2, int(seed) if seed is not None else None)


# --------------------------------------------------------------------
# Windows and tables
# --------------------------------------------------------------------


@dataclass(frozen=True)
class Window:
    """Rectangle of twists, one (min, max) range per Picard coordinate."""

    ranges: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        for lo, hi in self.ranges:
            if lo > hi:
                raise ValueError(f"Empty window range {lo}..{hi}")

    @classmethod
    def square(cls, surface: Surface, radius: int) -> "Window":
        return cls(((-radius, radius),) * surface.picard_rank)

    def __iter__(self) -> Iterator[DivisorClass]:
        for coords in itertools.product(*(range(lo, hi + 1) for lo, hi in self.ranges)):
            yield DivisorClass(coords)

    def __len__(self) -> int:
        size = 1
        for lo, hi in self.ranges:
            size *= hi - lo + 1
        return size

    def __contains__(self, d: DivisorClass) -> bool:
        return len(d.coords) == len(self.ranges) and all(
            lo <= x <= hi for x, (lo, hi) in zip(d.coords, self.ranges)
        )

    def to_list(self) -> List[int]:
        return [x for r in self.ranges for x in r]

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.to_list())


def parse_window(surface: Surface, text: str) -> Window:
    """`amin,amax,bmin,bmax` on F_n, `dmin,dmax` on P²."""
    try:
        values = [int(p) for p in (text or "").split(",") if p.strip()]
    except ValueError:
        raise ValueError(f"Window {text!r} is not a comma list of integers")
    if len(values) != 2 * surface.picard_rank:
        raise ValueError(f"Window {text!r} needs {2 * surface.picard_rank} integers on {surface.label}")
    return Window(tuple((values[i], values[i + 1]) for i in range(0, len(values), 2)))


@dataclass(frozen=True)
class CohomologyTable:
    surface: Surface
    bundle: str
    window: Window
    entries: Mapping[DivisorClass, CohomologyTriple]

    def __getitem__(self, twist_class: DivisorClass) -> CohomologyTriple:
        return self.entries[twist_class]

    def __contains__(self, twist_class: DivisorClass) -> bool:
        return twist_class in self.entries

    def items(self):
        return self.entries.items()


def bundle_h(e: Bundle2, twist_class: DivisorClass, oracle: str = "closed") -> CohomologyTriple:
    """
    h^i(E ⊗ O(twist)). Sums use the closed form ("closed"), the Čech engine
    ("cech") or both with an equality check. Extensions always go through the
    Čech engine; "both" there cross-checks the long exact sequence route
    against the total complex.
    """
    if oracle not in ORACLES:
        raise ValueError(f"Unknown oracle {oracle!r}; expected one of {ORACLES}")
    s = e.surface
    if isinstance(e, SplitBundle):
        closed = add_triples(line_h(s, e.l1 + twist_class), line_h(s, e.l2 + twist_class))
        if oracle == "closed":
            return closed
        cech = add_triples(cech_line_h(s, e.l1 + twist_class), cech_line_h(s, e.l2 + twist_class))
        if oracle == "both" and cech != closed:
            raise OracleDisagreement(f"{bundle_label(e)} ⊗ O({twist_class}): closed {tuple(closed)} vs Čech {tuple(cech)}")
        return cech

    h = rank2_cech_h(s, e.ext, twist_class, "les")
    if oracle == "both":
        total = rank2_cech_h(s, e.ext, twist_class, "total")
        if total != h:
            raise OracleDisagreement(f"{bundle_label(e)} ⊗ O({twist_class}): les {tuple(h)} vs total {tuple(total)}")
    return h


def h_table(e: Bundle2, window: Window, oracle: str = "closed", workers: Optional[int] = None) -> CohomologyTable:
    workers = TABLE_WORKERS if workers is None else workers
    twists = list(window)
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
            triples = list(executor.map(lambda t: bundle_h(e, t, oracle), twists))
    else:
        triples = [bundle_h(e, t, oracle) for t in twists]

    base = chern(e)
    for t, h in zip(twists, triples):
        assert euler(h) == chi_rank2(e.surface, twist_chern(e.surface, base, t)), (
            f"Euler characteristic of {bundle_label(e)} ⊗ O({t}) disagrees with Riemann–Roch"
        )

    log_event("bundles", "table_built", surface=e.surface.label, bundle=bundle_label(e), size=len(twists), oracle=oracle)
    return CohomologyTable(
        surface=e.surface,
        bundle=bundle_label(e),
        window=window,
        entries=dict(zip(twists, triples)),
    )


def line_table(surface: Surface, d: DivisorClass, window: Window) -> CohomologyTable:
    return CohomologyTable(
        surface=surface,
        bundle=f"line:{d}",
        window=window,
        entries={t: line_h(surface, d + t) for t in window},
    )


# --------------------------------------------------------------------
# Serialization
# --------------------------------------------------------------------


def table_to_json(table: CohomologyTable) -> dict:
    return {
        "surface": table.surface.label,
        "bundle": table.bundle,
        "window": table.window.to_list(),
        "entries": [{"twist": t.to_list(), "h": h.to_list()} for t, h in table.items()],
    }


def table_from_json(data: dict) -> CohomologyTable:
    surface = parse_surface(data["surface"])
    values = data["window"]
    window = Window(tuple((values[i], values[i + 1]) for i in range(0, len(values), 2)))
    entries: Dict[DivisorClass, CohomologyTriple] = {}
    for row in data.get("entries", []):
        t = DivisorClass(tuple(int(x) for x in row["twist"]))
        check_classes(surface, t)
        entries[t] = CohomologyTriple(*(int(x) for x in row["h"]))
    return CohomologyTable(surface=surface, bundle=data.get("bundle", ""), window=window, entries=entries)


def table_to_csv(table: CohomologyTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    coords = ["a", "b"] if table.surface.is_hirzebruch else ["d"]
    writer.writerow(coords + ["h0", "h1", "h2"])
    for t, h in table.items():
        writer.writerow(t.to_list() + h.to_list())
    return buf.getvalue()
