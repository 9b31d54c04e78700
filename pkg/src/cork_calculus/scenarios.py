"""Scenario runners: build the record families, compare them, check clauses.

Every runner returns a :class:`ScenarioReport`. Reports are deterministic:
the JSON form is emitted with sorted keys and the records appear in
construction order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .fourmanifold import (
    ClosedRecord,
    blow_up,
    compare_sw,
    connected_sum,
    cork_twist_record,
    homeo_classify,
    knot_surgery_record,
    plug_twist_record,
    rational_blowdown_record,
    record_preset,
    sw_count,
    two_path_consistency,
    with_cusp_cork_pieces,
    y_family,
)
from .knots import ONE, LaurentPoly
from .swalgebra import CONVENTIONS, SWComparison, elliptic_polynomial

__all__ = [
    "Clause",
    "KnotInput",
    "ScenarioReport",
    "SCENARIOS",
    "run_scenario",
    "scenario_knotting",
    "scenario_disjoint",
    "scenario_involutions",
    "scenario_two_path",
]


@dataclass(frozen=True)
class KnotInput:
    label: str
    delta: LaurentPoly


@dataclass(frozen=True)
class Clause:
    cid: str
    text: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"id": self.cid, "text": self.text, "passed": self.passed, "detail": self.detail}


@dataclass
class ScenarioReport:
    scenario: str
    parameters: dict
    convention: str
    warnings: list[str] = field(default_factory=list)
    records: list[ClosedRecord] = field(default_factory=list)
    verdicts: list[dict] = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    clauses: list[Clause] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    def add(self, rec: ClosedRecord) -> ClosedRecord:
        self.records.append(rec)
        return rec

    def check(self, cid: str, text: str, ok: bool, detail: str = "") -> None:
        self.clauses.append(Clause(cid, text, bool(ok), detail))

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "parameters": self.parameters,
            "convention": self.convention,
            "warnings": list(self.warnings),
            "records": [r.to_dict() for r in self.records],
            "verdicts": self.verdicts,
            "tables": self.tables,
            "clauses": [c.to_dict() for c in self.clauses],
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def render_text(self) -> str:
        lines = [f"scenario: {self.scenario}"]
        for k in sorted(self.parameters):
            lines.append(f"  {k}: {self.parameters[k]}")
        lines.append(f"parity convention: {self.convention}")
        for w in self.warnings:
            lines.append(f"WARNING: {w}")
        lines.append("")
        lines.append("records:")
        for r in self.records:
            n = sw_count(r)
            lines.append(
                f"  {r.name}: e={r.e} sigma={r.sigma} b2+={r.b2plus} b2-={r.b2minus} "
                f"parity={r.parity} spin={r.spin} sw={'UNKNOWN' if n is None else n}"
            )
            lines.append(f"    via: {' > '.join(r.provenance)}")
        if self.tables:
            lines.append("")
            lines.append("tables:")
            for name in sorted(self.tables):
                lines.append(f"  {name}: {json.dumps(self.tables[name], sort_keys=True, ensure_ascii=False)}")
        if self.verdicts:
            lines.append("")
            lines.append("verdicts:")
            for v in self.verdicts:
                lines.append(f"  {v['a']} vs {v['b']}: {v['homeo']['verdict']}, sw {v['sw']} ({v['justification']})")
        lines.append("")
        lines.append("clauses:")
        for c in self.clauses:
            lines.append(f"  [{'PASS' if c.passed else 'FAIL'}] {c.cid} {c.text}" + (f": {c.detail}" if c.detail else ""))
        lines.append(f"result: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


# -- helpers ---------------------------------------------------------------


def _verdict(a: ClosedRecord, b: ClosedRecord) -> dict:
    h = homeo_classify(a, b)
    s = compare_sw(a, b)
    return {
        "a": a.name,
        "b": b.name,
        "homeo": h.to_dict(),
        "sw": s.value,
        "sw_counts": [sw_count(a), sw_count(b)],
        "invariants": {
            a.name: {"e": a.e, "sigma": a.sigma, "parity": a.parity},
            b.name: {"e": b.e, "sigma": b.sigma, "parity": b.parity},
        },
        "justification": f"(e, sigma, parity) {(a.e, a.sigma, a.parity)} vs {(b.e, b.sigma, b.parity)}; "
        f"N = {sw_count(a)} vs {sw_count(b)}",
    }


def _matrix(report: ScenarioReport, recs: Sequence[ClosedRecord]) -> list[dict]:
    out = [_verdict(a, b) for a, b in combinations(recs, 2)]
    report.verdicts.extend(out)
    return out


def _odd_warning(n: int) -> str:
    def classes(c: int) -> str:
        return f"{c} class" if c == 1 else f"{c} classes"

    return (
        f"n = {n} is odd: the paper convention takes k even (|k| <= n-2, {classes(n - 2)} on the fiber axis, "
        f"placeholder values) while the standard convention takes k = n mod 2 ({classes(n - 1)})"
    )


def _check_convention(convention: str) -> None:
    if convention not in CONVENTIONS:
        raise ValueError(f"parity convention must be one of {CONVENTIONS}")


def _twist(rec: ClosedRecord, via: str, piece: str, component: int | None = None, name: str | None = None) -> ClosedRecord:
    fn = cork_twist_record if via == "cork" else plug_twist_record
    return fn(rec, piece, component, name)


# -- knotting --------------------------------------------------------------


def _expected_knot_count(n: int, delta: LaurentPoly) -> int:
    # one blow-up doubles the fiber-axis support
    return 2 * (delta.substitute(2) * elliptic_polynomial(n)).support_size


def scenario_knotting(
    n: int = 2,
    knots: Sequence[KnotInput] = (),
    convention: str = "paper",
    via: str = "cork",
) -> ScenarioReport:
    """X_0 = twist of E(n) # CP2bar, and X_i = E(n)_{K_i} # CP2bar."""
    _check_convention(convention)
    if n < 2:
        raise ValueError("knotting scenario needs n >= 2")
    if len(knots) < 1:
        raise ValueError("knotting scenario needs at least one knot")
    report = ScenarioReport(
        scenario=("plug-" if via == "plug" else "") + "knotting",
        parameters={"n": n, "knots": [f"{k.label}: {k.delta}" for k in knots], "via": via},
        convention=convention,
    )
    used = convention
    if n % 2:
        report.warnings.append(_odd_warning(n))
        if convention == "paper":
            used = "standard"
            report.warnings.append(
                "knot surgery multiplies SW values, which the paper convention leaves as placeholders for odd n; "
                "the knotted records use the standard convention"
            )
    report.parameters["convention_used"] = used
    seen: dict[LaurentPoly, str] = {}
    for k in knots:
        if k.delta == ONE:
            report.warnings.append(f"{k.label} has trivial Alexander polynomial; its record is not expected to differ")
        elif k.delta in seen:
            report.warnings.append(f"{k.label} and {seen[k.delta]} share an Alexander polynomial")
        seen.setdefault(k.delta, k.label)

    piece = "W1" if via == "cork" else "W1,2"
    base = with_cusp_cork_pieces(connected_sum(record_preset("En", n, convention=used), record_preset("CP2bar")))
    base = base.renamed(f"E({n})#CP2bar")
    x0 = _twist(base, via, piece, name="X0")
    report.add(base)
    report.add(x0)

    xs: list[ClosedRecord] = [x0]
    count_rows = {"X0": {"N": sw_count(x0), "expected": 0}}
    xk_ok, back_ok, plug_ok = [], [], []
    for i, k in enumerate(knots, start=1):
        direct = knot_surgery_record(base, k.delta, k.label).renamed(f"X{i}")
        report.add(direct)
        xs.append(direct)
        count_rows[f"X{i}"] = {"N": sw_count(direct), "expected": _expected_knot_count(n, k.delta), "knot": k.label}
        xk = knot_surgery_record(x0, k.delta, k.label)
        xk_ok.append(xk == x0)
        back = _twist(xk, via, piece, name=f"X{i}")
        report.add(back.renamed(f"X{i} (twist of X0_{k.label})"))
        back_ok.append(back == direct)
        if via == "plug":
            cork_side = cork_twist_record(knot_surgery_record(cork_twist_record(base, "W1"), k.delta, k.label), "W1")
            plug_ok.append(cork_side == back)

    report.tables["N"] = count_rows
    target = record_preset("nCP2_mCP2bar", 2 * n - 1, 10 * n).renamed(f"{2 * n - 1}CP2#{10 * n}CP2bar")
    report.add(target)
    _matrix(report, xs + [target])

    report.check(
        "K1",
        "SW counts match the product rule (X0 has none)",
        all(row["N"] == row["expected"] for row in count_rows.values()),
        ", ".join(f"{name}={row['N']}" for name, row in count_rows.items()),
    )
    homeo = [homeo_classify(a, b).verdict for a, b in combinations(xs + [target], 2)]
    report.check(
        "K2",
        f"all records pairwise homeomorphic and homeomorphic to {target.name}",
        all(v == "homeomorphic" for v in homeo),
    )
    required = []
    for a, b in combinations(range(len(xs)), 2):
        if a == 0:
            required.append((a, b))
            continue
        da, db = knots[a - 1].delta, knots[b - 1].delta
        if da != db and ONE not in (da, db):
            required.append((a, b))
    distinct = [compare_sw(xs[a], xs[b]).distinguishes for a, b in required]
    report.check(
        "K3",
        "SW distinguishes every pair whose knots have distinct nontrivial Alexander polynomials",
        all(distinct),
        f"{sum(distinct)}/{len(required)} pairs distinguished",
    )
    report.check("K4", "knot surgery on X0 returns X0 exactly", all(xk_ok))
    report.check("K5", f"twisting {piece} in X0_K gives E({n})_K # CP2bar", all(back_ok))
    report.check("K6", "the twist is an involution on records", _twist(x0, via, piece) == base)
    if via == "plug":
        report.check("K7", "plug path records equal cork path records", all(plug_ok) and cork_twist_record(base, "W1") == x0)
    return report


# -- disjoint pieces and involutions ---------------------------------------


def _family_intro(p_list: Sequence[int], convention: str, name: str, via: str) -> tuple[ScenarioReport, ClosedRecord]:
    _check_convention(convention)
    if len(p_list) < 1 or any(p < 2 for p in p_list):
        raise ValueError("p_list needs entries >= 2")
    report = ScenarioReport(
        scenario=("plug-" if via == "plug" else "") + name,
        parameters={"p_list": list(p_list), "via": via},
        convention=convention,
    )
    total = sum(p_list)
    if total % 2:
        report.warnings.append(_odd_warning(total))
    if len(set(p_list)) != len(p_list):
        report.warnings.append(
            "p_list has repeated entries: the matching Y_i have equal counts and SW cannot tell them apart"
        )
    y0 = y_family(p_list, convention)
    report.add(y0)
    return report, y0


def _family_checks(report: ScenarioReport, y0: ClosedRecord, ys: list[ClosedRecord], p_list: Sequence[int]) -> None:
    n0 = sw_count(y0)
    table = {"Y0": {"N": n0, "expected": n0}}
    for i, (y, p) in enumerate(zip(ys, p_list), start=1):
        table[f"Y{i}"] = {"N": sw_count(y), "expected": 2 ** (p - 1) * n0, "p": p}
    report.tables["N"] = table
    report.check(
        "F1",
        "N(Y_i) = 2^(p_i - 1) N(Y_0)",
        all(r["N"] == r["expected"] for r in table.values()),
        ", ".join(f"{k}={v['N']}" for k, v in table.items()),
    )
    fam = [y0] + ys
    report.check(
        "F2",
        "(e, sigma, parity) identical across the family",
        len({(r.e, r.sigma, r.parity) for r in fam}) == 1,
        str(sorted({(r.e, r.sigma, r.parity) for r in fam}, key=str)),
    )
    _matrix(report, fam)
    report.check(
        "F3",
        "all pairs homeomorphic",
        all(homeo_classify(a, b).verdict == "homeomorphic" for a, b in combinations(fam, 2)),
    )
    required = [(a, b) for a, b in combinations(range(len(fam)), 2) if a == 0 or p_list[a - 1] != p_list[b - 1]]
    results = {(a, b): compare_sw(fam[a], fam[b]) for a, b in combinations(range(len(fam)), 2)}
    report.check(
        "F4",
        "SW distinguishes every pair with different p",
        all(results[k] is SWComparison.DISTINCT_BY_COUNT for k in required),
        f"{sum(results[k].distinguishes for k in required)}/{len(required)} pairs distinct by count",
    )
    for k, v in results.items():
        if k not in required:
            report.warnings.append(f"{fam[k[0]].name} vs {fam[k[1]].name}: {v.value}")
    bd_ok = []
    for i, (y, p) in enumerate(zip(ys, p_list), start=1):
        bd = blow_up(rational_blowdown_record(y0, f"D{p}#{i}"), p - 1)
        bd_ok.append(bd == y)
    report.check("F5", "each Y_i equals blowdown of C_{p_i} followed by p_i - 1 blow-ups", all(bd_ok))


def scenario_disjoint(p_list: Sequence[int] = (2, 4), convention: str = "paper", via: str = "cork") -> ScenarioReport:
    """Y_i from twisting the i-th of the disjoint pieces in Y_0."""
    report, y0 = _family_intro(p_list, convention, "disjoint", via)
    ys, inv_ok, plug_ok = [], [], []
    for i, p in enumerate(p_list, start=1):
        piece = f"W{p - 1}#{i}" if via == "cork" else f"W1,{p}#{i}"
        y = report.add(_twist(y0, via, piece, name=f"Y{i}"))
        ys.append(y)
        inv_ok.append(_twist(y, via, piece) == y0)
        if via == "plug":
            plug_ok.append(cork_twist_record(y0, f"W{p - 1}#{i}") == y)
    _family_checks(report, y0, ys, p_list)
    report.check("F6", "each twist is an involution on records", all(inv_ok))
    if via == "plug":
        report.check("F7", "plug path records equal cork path records", all(plug_ok))
    return report


def scenario_involutions(p_list: Sequence[int] = (2, 4), convention: str = "paper", via: str = "cork") -> ScenarioReport:
    """Y_i from one fixed boundary-sum piece, changing only the involution f^i."""
    report, y0 = _family_intro(p_list, convention, "involutions", via)
    fixed = (
        "W(" + ",".join(str(p - 1) for p in p_list) + ")"
        if via == "cork"
        else "♮".join(f"W1,{p}" for p in p_list)
    )
    report.parameters["piece"] = fixed
    ys, inv_ok, same_ok = [], [], []
    for i, p in enumerate(p_list, start=1):
        y = report.add(_twist(y0, via, fixed, component=i, name=f"Y{i}"))
        ys.append(y)
        inv_ok.append(_twist(y, via, fixed, component=i) == y0)
        single = f"W{p - 1}#{i}" if via == "cork" else f"W1,{p}#{i}"
        same_ok.append(_twist(y0, via, single) == y)
    _family_checks(report, y0, ys, p_list)
    report.check("F6", "each f^i twist is an involution on records", all(inv_ok))
    report.check("F8", "twisting the fixed piece by f^i equals twisting the i-th single piece", all(same_ok))
    if via == "plug":
        plug_ok = [
            cork_twist_record(y0, "W(" + ",".join(str(q - 1) for q in p_list) + ")", i) == y
            for i, y in enumerate(ys, start=1)
        ]
        report.check("F7", "plug path records equal cork path records", all(plug_ok))
    return report


# -- two-path consistency --------------------------------------------------


def scenario_two_path(p_list: Sequence[int] = (2, 3, 4), convention: str = "paper") -> ScenarioReport:
    """For each p: blowdown of C_p then p-1 blow-ups, against the cork and plug twists in D_p."""
    _check_convention(convention)
    report = ScenarioReport("two-path", {"p_list": list(p_list)}, convention)
    table = {}
    for p in p_list:
        if p % 2:
            report.warnings.append(_odd_warning(p))
        host = y_family((p,), convention).renamed(f"E({p})#CP2bar")
        report.add(host)
        r = two_path_consistency(host, f"D{p}#1")
        report.add(r.blowdown_path.renamed(f"p={p} blowdown path"))
        report.add(r.cork_path.renamed(f"p={p} cork path"))
        if r.plug_path is not None:
            report.add(r.plug_path.renamed(f"p={p} plug path"))
        table[str(p)] = r.to_dict()["counts"]
        report.check(
            f"T{p}",
            f"p={p}: blowdown path, cork path and plug path give identical records",
            r.agree and r.plug_path is not None,
            "; ".join(r.mismatches),
        )
    report.tables["N"] = table
    return report


SCENARIOS = (
    "knotting",
    "disjoint",
    "involutions",
    "plug-knotting",
    "plug-disjoint",
    "plug-involutions",
    "two-path",
)


def run_scenario(
    sid: str,
    n: int = 2,
    p_list: Sequence[int] | None = None,
    knots: Sequence[KnotInput] = (),
    convention: str = "paper",
) -> ScenarioReport:
    if sid not in SCENARIOS:
        raise ValueError(f"unknown scenario {sid!r}; choose from {', '.join(SCENARIOS)}")
    via = "plug" if sid.startswith("plug-") else "cork"
    base = sid.removeprefix("plug-")
    if base == "knotting":
        return scenario_knotting(n, knots, convention, via)
    if base == "disjoint":
        return scenario_disjoint(tuple(p_list or (2, 4)), convention, via)
    if base == "involutions":
        return scenario_involutions(tuple(p_list or (2, 4)), convention, via)
    return scenario_two_path(tuple(p_list or (2, 3, 4)), convention)
