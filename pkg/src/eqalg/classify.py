"""Freeness of free incomplete Tambara functors as Mackey functors.

For a transfer system O on G and a generator level G/H, the underlying
Mackey functor is free exactly when H is normal, O restricted to H is
trivial, and (H, G) is admissible.  When G/H is solvable the failure of any
condition already rules out flatness; a non-solvable quotient with only the
admissibility condition failing is reported as ``Unknown``.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .groups import FiniteGroup, GroupError, Subgroup, is_solvable, quotient_group
from .transfer import TransferSystem, enumerate_systems

FREE, NOT_FLAT, UNKNOWN = "Free", "NotFlat", "Unknown"


@dataclass(frozen=True)
class Condition:
    name: str
    holds: bool


@dataclass(frozen=True)
class Verdict:
    status: str
    reasons: tuple[Condition, ...]

    def holds(self, name: str) -> bool:
        return next(c.holds for c in self.reasons if c.name == name)

    def to_dict(self) -> dict:
        return {"status": self.status, "reasons": [{"name": c.name, "holds": c.holds} for c in self.reasons]}


def restriction_is_trivial(system: TransferSystem, H: int) -> bool:
    inside = system.group.lattice.inclusion[:, H]
    return not any(k != h and inside[h] for k, h in system.rel)


def quotient_is_solvable(G: FiniteGroup, H: int) -> bool:
    """Solvability of G/H; False when H is not normal, since there is no quotient."""
    cache = G.__dict__.setdefault("_quotient_solvable", {})
    if H not in cache:
        if not G.lattice.normal[H]:
            cache[H] = False
        else:
            Q, _ = quotient_group(G, G.subgroups[H])
            cache[H] = is_solvable(Q)
    return cache[H]


def classify(G: FiniteGroup, system: TransferSystem, H) -> Verdict:
    H = H.id if isinstance(H, Subgroup) else int(H)
    if system.group is not G:
        raise GroupError("transfer system belongs to a different group")
    trivial_res = restriction_is_trivial(system, H)
    normal = bool(G.lattice.normal[H])
    admissible = (H, G.whole.id) in system.rel
    solvable = quotient_is_solvable(G, H)
    reasons = (
        Condition("restriction-trivial", trivial_res),
        Condition("H-normal", normal),
        Condition("G/H-admissible", admissible),
        Condition("quotient-solvable", solvable),
    )
    if trivial_res and normal and admissible:
        status = FREE
    elif not trivial_res or not normal or solvable:
        status = NOT_FLAT
    else:
        status = UNKNOWN
    return Verdict(status, reasons)


def classify_grid(G: FiniteGroup, systems=None) -> list[list[Verdict]]:
    """Verdicts for every (system, subgroup) pair, rows in enumeration order."""
    systems = enumerate_systems(G) if systems is None else systems
    return [[classify(G, O, H) for H in range(len(G.subgroups))] for O in systems]


@dataclass
class GroupStats:
    group: str
    n: int
    T: int
    P: int
    d: int
    solvable: bool
    unknown: int = 0

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.P, self.T)

    @property
    def bound_holds(self) -> bool | None:
        """P/T ≤ 1/d, checked only for solvable groups."""
        return self.ratio <= Fraction(1, self.d) if self.solvable else None

    def to_dict(self) -> dict:
        return {"group": self.group, "n": self.n, "T": self.T, "P": self.P, "d": self.d,
                "solvable": self.solvable, "unknown": self.unknown, "bound_holds": self.bound_holds}


def stats(G: FiniteGroup) -> GroupStats:
    grid = classify_grid(G)
    flat = sum(v.status == FREE for row in grid for v in row)
    unknown = sum(v.status == UNKNOWN for row in grid for v in row)
    return GroupStats(G.name, len(grid), len(grid) * len(G.subgroups), flat,
                      G.lattice.depth, is_solvable(G), unknown)


# ---------------------------------------------------------------------------
# appendix tables
# ---------------------------------------------------------------------------

TABLE_GROUPS = ("C2", "C3", "C4", "C9", "C8", "C6", "C10", "D6")


def subgroup_names(G: FiniteGroup) -> list[str]:
    """Display names: e, C<d> for cyclic subgroups, H1.. for D6's involution subgroups."""
    L = G.lattice
    names = []
    if G.name == "D6":
        count = 0
        for s in G.subgroups:
            if s.order == 2:
                count += 1
                names.append(f"H{count}")
            else:
                names.append({1: "e", 3: "C3", 6: "D6"}[s.order])
        return names
    orders = [s.order for s in G.subgroups]
    if len(set(orders)) != len(orders):
        raise GroupError(f"no naming scheme for {G.name}")
    for s in L.subgroups:
        names.append("e" if s.order == 1 else f"C{s.order}")
    return names


@dataclass
class GoldenTable:
    group: str
    columns: list[str]
    rows: list[dict]
    row_order: list[int]
    labels: list[str] = field(default_factory=list)


def load_golden(name: str) -> GoldenTable:
    path = resources.files("eqalg") / "data" / "appendix" / f"{name}.json"
    data = json.loads(path.read_text())
    return GoldenTable(data["group"], data["columns"], data["rows"], data["row_order"],
                       [r.get("label", "") for r in data["rows"]])


@dataclass
class AppendixTable:
    group: str
    columns: list[str]
    labels: list[str]
    edges: list[list[tuple[str, str]]]
    cells: list[list[str]]
    systems: list[TransferSystem]

    def render(self, fmt: str = "md") -> str:
        header = ["system"] + [f"{self.group}/{c}" for c in self.columns]
        body = [[lab] + cells for lab, cells in zip(self.labels, self.cells)]
        if fmt == "md":
            lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
            lines += ["| " + " | ".join(row) + " |" for row in body]
            return "\n".join(lines) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(body)
            return buf.getvalue()
        if fmt == "txt":
            rows = [header] + body
            widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
            return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows) + "\n"
        if fmt == "json":
            return json.dumps({"group": self.group, "columns": self.columns,
                               "rows": [{"label": lab, "edges": [list(e) for e in ed], "cells": cells}
                                        for lab, ed, cells in zip(self.labels, self.edges, self.cells)]},
                              indent=2) + "\n"
        raise ValueError(f"unknown format {fmt!r}")


def system_edges(system: TransferSystem, names: list[str]) -> list[tuple[str, str]]:
    return sorted((names[k], names[h]) for k, h in system.nontrivial_pairs())


def appendix_table(G: FiniteGroup) -> AppendixTable:
    """Regenerate the freeness table, rows arranged in the stored golden order."""
    if G.name not in TABLE_GROUPS:
        raise GroupError(f"no appendix table for {G.name}; expected one of {', '.join(TABLE_GROUPS)}")
    golden = load_golden(G.name)
    names = subgroup_names(G)
    col_ids = [names.index(c) for c in golden.columns]
    systems = enumerate_systems(G)
    ordered = [systems[i] for i in golden.row_order]
    cells = [["free" if classify(G, O, h).status == FREE else "" for h in col_ids] for O in ordered]
    edges = [system_edges(O, names) for O in ordered]
    labels = golden.labels or [""] * len(ordered)
    labels = [lab or ", ".join(f"{a}->{b}" for a, b in ed) or "none" for lab, ed in zip(labels, edges)]
    return AppendixTable(G.name, golden.columns, labels, edges, cells, ordered)


@dataclass
class TableComparison:
    group: str
    edges_match: bool
    mismatched_cells: list[tuple[int, str]]

    @property
    def ok(self) -> bool:
        return self.edges_match and not self.mismatched_cells


def compare_with_golden(G: FiniteGroup) -> TableComparison:
    table = appendix_table(G)
    golden = load_golden(G.name)
    edges_match = all(sorted(map(tuple, row["edges"])) == ed for row, ed in zip(golden.rows, table.edges))
    bad = []
    for i, (row, cells) in enumerate(zip(golden.rows, table.cells)):
        for col, cell in zip(golden.columns, cells):
            if (col in row["free"]) != (cell == "free"):
                bad.append((i + 1, col))
    return TableComparison(G.name, edges_match and len(golden.rows) == len(table.cells), bad)
