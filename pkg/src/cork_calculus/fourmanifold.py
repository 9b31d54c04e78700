"""Closed simply connected 4-manifolds as records of exact invariants.

A :class:`ClosedRecord` stores the topological invariants (e, sigma, b2+-,
parity, spin), which no operation here is allowed to change except by the
documented arithmetic, together with the smooth data that twists and
surgeries act on: the Seiberg-Witten state and summand markers.

Embedded pieces (corks, plugs, copies of D_p) are carried as markers. A cork
or plug twist swaps the record's smooth data with the data on the other side
of the twist; the other side is either known from a construction rule or
rebuilt from the C_p inside a host D_p. Records never claim two manifolds are
diffeomorphic except through the two rewrite rules implemented here: the
stabilization Y # CP2 # CP2-bar = Y # S2xS2 for non-spin Y, and knot surgery
on a cusp disjoint from an S2xS2 summand.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence, Union

from .handlebody import (
    W_N_LEGENDRIAN_TB,
    HandlePresentation,
    LegendrianData,
    boundary_sum,
    eliashberg_check,
    homology,
    preset,
)
from .knots import ONE, LaurentPoly
from .swalgebra import (
    BasicClassSet,
    BasicClassVector,
    EmbeddingProfile,
    RbdTag,
    SWComparison,
    beta_elliptic,
    blowup_formula,
    characteristic_extensions,
    evaluate_on_profile,
    knot_surgery,
    rbd_transfer,
    restriction_square,
    sw3_lift_condition,
    sw_compare,
)

__all__ = [
    "SWState",
    "SmoothState",
    "EmbeddedPiece",
    "Markers",
    "ClosedRecord",
    "HomeoVerdict",
    "TwoPathReport",
    "record_preset",
    "connected_sum",
    "normalize",
    "with_cusp_cork_pieces",
    "y_family",
    "cork_twist_record",
    "plug_twist_record",
    "knot_surgery_record",
    "rational_blowdown_record",
    "blow_up",
    "two_path_consistency",
    "homeo_classify",
    "compare_sw",
    "sw_count",
    "piece_presentation",
    "piece_checks",
]


class SWState(str, Enum):
    ZERO = "ZERO"
    UNKNOWN = "UNKNOWN"


SW = Union[BasicClassSet, SWState]


@dataclass(frozen=True)
class SmoothState:
    """The part of a record a twist can change."""

    name: str
    sw: SW
    s2xs2_summands: int
    cp2_summands: int
    cp2bar_summands: int
    core_parity: str | None
    cusp: bool
    pieces: tuple[EmbeddedPiece, ...]


@dataclass(frozen=True)
class EmbeddedPiece:
    name: str
    kind: str  # "cork" | "plug" | "Dp"
    presets: tuple[tuple, ...]  # handlebody presets whose boundary sum is the piece
    p: int | None = None
    profile: EmbeddingProfile | None = None
    # D_p pieces whose C_p this twist rebuilds, one per involution f^i
    hosts: tuple[str, ...] = ()
    partner: SmoothState | None = None
    partner_component: int | None = None

    def padded(self, slots: int) -> EmbeddedPiece:
        if self.profile is None or self.profile.slots == slots:
            return self
        return replace(self, profile=self.profile.padded(slots))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "presets": [list(p) for p in self.presets],
            "p": self.p,
            "profile": self.profile.to_dict() if self.profile else None,
            "hosts": list(self.hosts),
            "twisted_from": self.partner.name if self.partner else None,
            "component": self.partner_component,
        }


@dataclass(frozen=True)
class Markers:
    cusp: bool = False
    fiber_class: bool = False
    s2xs2_summands: int = 0
    cp2_summands: int = 0
    cp2bar_summands: int = 0
    # parity of what is left after removing the counted split summands
    core_parity: str | None = None
    embedded: tuple[EmbeddedPiece, ...] = field(default=(), compare=False)

    @property
    def s2xs2_summand(self) -> bool:
        return self.s2xs2_summands > 0


@dataclass(frozen=True)
class ClosedRecord:
    e: int
    sigma: int
    b2plus: int
    b2minus: int
    parity: str | None  # None: not determined by the operations applied
    spin: bool
    sw: SW
    markers: Markers = Markers()
    simply_connected: bool = True
    name: str = field(default="", compare=False)
    handle_count_meta: int | None = field(default=None, compare=False)
    provenance: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if self.simply_connected and self.e != 2 + self.b2plus + self.b2minus:
            raise ValueError(f"{self.name}: e = {self.e} but 2 + b2+ + b2- = {2 + self.b2plus + self.b2minus}")
        if self.sigma != self.b2plus - self.b2minus:
            raise ValueError(f"{self.name}: sigma = {self.sigma} but b2+ - b2- = {self.b2plus - self.b2minus}")
        if min(self.b2plus, self.b2minus) < 0:
            raise ValueError(f"{self.name}: negative Betti number")
        if self.parity not in ("even", "odd", None):
            raise ValueError(f"bad parity {self.parity!r}")
        if self.spin and self.parity != "even":
            raise ValueError(f"{self.name}: spin requires an even form")
        m = self.markers
        if (m.cp2_summands or m.cp2bar_summands) and self.parity != "odd":
            raise ValueError(f"{self.name}: a CP2 or CP2-bar summand forces an odd form")
        if m.s2xs2_summand and self.sw is not SWState.ZERO:
            raise ValueError(f"{self.name}: an S2xS2 summand forces SW = ZERO")
        if isinstance(self.sw, BasicClassSet) and (self.sw.e, self.sw.sigma) != (self.e, self.sigma):
            raise ValueError(
                f"{self.name}: SW ambient ({self.sw.e}, {self.sw.sigma}) != record ({self.e}, {self.sigma})"
            )

    @property
    def b2(self) -> int:
        return self.b2plus + self.b2minus

    @property
    def embedded(self) -> tuple[EmbeddedPiece, ...]:
        return self.markers.embedded

    def piece(self, name: str) -> EmbeddedPiece:
        for pc in self.embedded:
            if pc.name == name:
                return pc
        raise KeyError(f"{self.name} carries no piece {name!r}; has {[p.name for p in self.embedded]}")

    def invariants(self) -> tuple:
        return (self.e, self.sigma, self.b2plus, self.b2minus, self.parity, self.spin)

    def renamed(self, name: str, step: str | None = None) -> ClosedRecord:
        return replace(self, name=name, provenance=self.provenance + ((step,) if step else ()))

    def to_dict(self, include_classes: bool = True) -> dict:
        m = self.markers
        sw: object
        if isinstance(self.sw, BasicClassSet):
            sw = self.sw.to_dict() if include_classes else {"count": self.sw.count}
        else:
            sw = self.sw.value
        return {
            "name": self.name,
            "e": self.e,
            "sigma": self.sigma,
            "b2plus": self.b2plus,
            "b2minus": self.b2minus,
            "parity": self.parity,
            "spin": self.spin,
            "simply_connected": self.simply_connected,
            "markers": {
                "cusp": m.cusp,
                "fiber_class_T": m.fiber_class,
                "s2xs2_summand": m.s2xs2_summand,
                "s2xs2_summands": m.s2xs2_summands,
                "cp2_summands": m.cp2_summands,
                "cp2bar_summands": m.cp2bar_summands,
                "core_parity": m.core_parity,
                "embedded": [pc.to_dict() for pc in m.embedded],
            },
            "sw": sw,
            "sw_count": sw_count(self),
            "handle_count_meta": self.handle_count_meta,
            "provenance": list(self.provenance),
        }


def sw_count(rec: ClosedRecord) -> int | None:
    if isinstance(rec.sw, BasicClassSet):
        return rec.sw.count
    return 0 if rec.sw is SWState.ZERO else None


def _slots(sw: SW) -> int | None:
    return sw.slots if isinstance(sw, BasicClassSet) else None


def _pad_pieces(pieces: Sequence[EmbeddedPiece], sw: SW) -> tuple[EmbeddedPiece, ...]:
    slots = _slots(sw)
    if slots is None:
        return tuple(pieces)
    return tuple(pc.padded(slots) for pc in pieces)


# -- presets -----------------------------------------------------------------


def record_preset(name: str, *params: int, convention: str = "paper", decomposition: Sequence[int] | None = None) -> ClosedRecord:
    """En(n), CP2, CP2bar, S2xS2, nCP2_mCP2bar(a, b).

    ``decomposition`` (for En) records n = p_1 + ... + p_k and stores the
    handle count 9(p_1 + ... + p_k) - 5k - 4 of that decomposition.
    """
    key = name.lower()
    if key == "en":
        (n,) = params
        if n < 1:
            raise ValueError("E(n) needs n >= 1")
        parity = "even" if n % 2 == 0 else "odd"
        meta = None
        if decomposition is not None:
            if sum(decomposition) != n or any(p < 2 for p in decomposition):
                raise ValueError(f"decomposition {tuple(decomposition)} must consist of p_i >= 2 summing to {n}")
            meta = 9 * n - 5 * len(decomposition) - 4
        return ClosedRecord(
            e=12 * n,
            sigma=-8 * n,
            b2plus=2 * n - 1,
            b2minus=10 * n - 1,
            parity=parity,
            spin=parity == "even",
            sw=beta_elliptic(n, 0, convention) if n >= 2 else SWState.UNKNOWN,
            markers=Markers(cusp=True, fiber_class=True, core_parity=parity),
            name=f"E({n})",
            handle_count_meta=meta,
            provenance=(f"E({n})",),
        )
    if key == "cp2":
        return ClosedRecord(3, 1, 1, 0, "odd", False, SWState.UNKNOWN, Markers(cp2_summands=1, core_parity="even"), name="CP2", provenance=("CP2",))
    if key == "cp2bar":
        return ClosedRecord(3, -1, 0, 1, "odd", False, SWState.UNKNOWN, Markers(cp2bar_summands=1, core_parity="even"), name="CP2bar", provenance=("CP2bar",))
    if key == "s2xs2":
        return ClosedRecord(4, 0, 1, 1, "even", True, SWState.ZERO, Markers(s2xs2_summands=1, core_parity="even"), name="S2xS2", provenance=("S2xS2",))
    if key == "ncp2_mcp2bar":
        a, b = params
        if a < 0 or b < 0:
            raise ValueError("summand counts must be nonnegative")
        parity = "odd" if a + b else "even"
        rec = ClosedRecord(
            e=2 + a + b,
            sigma=a - b,
            b2plus=a,
            b2minus=b,
            parity=parity,
            spin=parity == "even",
            sw=SWState.ZERO if a >= 2 else SWState.UNKNOWN,
            markers=Markers(cp2_summands=a, cp2bar_summands=b, core_parity="even"),
            name=f"{a}CP2#{b}CP2bar",
            provenance=(f"{a}CP2#{b}CP2bar",),
        )
        return normalize(rec)
    raise ValueError(f"unknown record preset {name!r}")


# -- connected sum and stabilization -----------------------------------------


def _is_cp2bar(rec: ClosedRecord) -> bool:
    m = rec.markers
    return (rec.e, rec.sigma, rec.b2plus) == (3, -1, 0) and m.cp2bar_summands == 1


def _sum_parity(a: str | None, b: str | None) -> str | None:
    if a == "odd" or b == "odd":
        return "odd"
    if a == "even" and b == "even":
        return "even"
    return None


def normalize(rec: ClosedRecord) -> ClosedRecord:
    """Rewrite CP2 # CP2-bar pairs as S2xS2 wherever the rest is non-spin."""
    m = rec.markers
    cp2, cp2bar, s2 = m.cp2_summands, m.cp2bar_summands, m.s2xs2_summands
    changed = False
    while cp2 >= 1 and cp2bar >= 1 and (m.core_parity == "odd" or cp2 + cp2bar - 2 > 0):
        cp2, cp2bar, s2 = cp2 - 1, cp2bar - 1, s2 + 1
        changed = True
    if not changed:
        return rec
    markers = replace(m, cp2_summands=cp2, cp2bar_summands=cp2bar, s2xs2_summands=s2)
    return replace(
        rec,
        markers=markers,
        sw=SWState.ZERO,
        provenance=rec.provenance + ("stabilize: CP2#CP2bar -> S2xS2",),
    )


def connected_sum(a: ClosedRecord, b: ClosedRecord) -> ClosedRecord:
    if not (a.simply_connected and b.simply_connected):
        raise ValueError("connected sum is only modeled for simply connected summands")
    ma, mb = a.markers, b.markers
    if ma.s2xs2_summand or mb.s2xs2_summand or (a.b2plus > 0 and b.b2plus > 0):
        sw: SW = SWState.ZERO
    elif _is_cp2bar(b) and a.sw is not SWState.UNKNOWN:
        sw = blowup_formula(a.sw) if isinstance(a.sw, BasicClassSet) else SWState.ZERO
    elif _is_cp2bar(a) and b.sw is not SWState.UNKNOWN:
        sw = blowup_formula(b.sw) if isinstance(b.sw, BasicClassSet) else SWState.ZERO
    else:
        sw = SWState.UNKNOWN
    pieces = _pad_pieces(ma.embedded + mb.embedded, sw)
    parity = _sum_parity(a.parity, b.parity)
    markers = Markers(
        cusp=ma.cusp or mb.cusp,
        fiber_class=ma.fiber_class or mb.fiber_class,
        s2xs2_summands=ma.s2xs2_summands + mb.s2xs2_summands,
        cp2_summands=ma.cp2_summands + mb.cp2_summands,
        cp2bar_summands=ma.cp2bar_summands + mb.cp2bar_summands,
        core_parity=_sum_parity(ma.core_parity, mb.core_parity),
        embedded=pieces,
    )
    meta = None
    if a.handle_count_meta is not None and b.handle_count_meta is not None:
        meta = a.handle_count_meta + b.handle_count_meta
    rec = ClosedRecord(
        e=a.e + b.e - 2,
        sigma=a.sigma + b.sigma,
        b2plus=a.b2plus + b.b2plus,
        b2minus=a.b2minus + b.b2minus,
        parity=parity,
        spin=a.spin and b.spin,
        sw=sw,
        markers=markers,
        simply_connected=True,
        name=f"{a.name}#{b.name}",
        handle_count_meta=meta,
        provenance=a.provenance + (f"# {b.name}",),
    )
    return normalize(rec)


def blow_up(rec: ClosedRecord, times: int = 1) -> ClosedRecord:
    cp2bar = record_preset("CP2bar")
    for _ in range(times):
        rec = connected_sum(rec, cp2bar)
    return rec


# -- twists ------------------------------------------------------------------


def _state_of(rec: ClosedRecord, exclude: int) -> SmoothState:
    m = rec.markers
    return SmoothState(
        name=rec.name,
        sw=rec.sw,
        s2xs2_summands=m.s2xs2_summands,
        cp2_summands=m.cp2_summands,
        cp2bar_summands=m.cp2bar_summands,
        core_parity=m.core_parity,
        cusp=m.cusp,
        pieces=tuple(pc for k, pc in enumerate(m.embedded) if k != exclude),
    )


def _apply_state(rec: ClosedRecord, state: SmoothState, index: int, piece: EmbeddedPiece, step: str) -> ClosedRecord:
    pieces = list(state.pieces)
    pieces.insert(min(index, len(pieces)), piece)
    markers = replace(
        rec.markers,
        cusp=state.cusp,
        s2xs2_summands=state.s2xs2_summands,
        cp2_summands=state.cp2_summands,
        cp2bar_summands=state.cp2bar_summands,
        core_parity=state.core_parity,
        embedded=_pad_pieces(pieces, state.sw),
    )
    return replace(rec, sw=state.sw, markers=markers, name=state.name, provenance=rec.provenance + (step,))


def _find(rec: ClosedRecord, name: str) -> tuple[int, EmbeddedPiece]:
    for k, pc in enumerate(rec.embedded):
        if pc.name == name:
            return k, pc
    raise KeyError(f"{rec.name or 'record'} carries no piece {name!r}; has {[p.name for p in rec.embedded]}")


def _rebuild_from_host(rec: ClosedRecord, host: EmbeddedPiece, exclude: int, name: str) -> SmoothState:
    """Smooth data after twisting the cork/plug that sits in ``host`` (a D_p).

    The classes of the result are computed on the lattice of the original
    manifold: each basic class must satisfy the lift criterion on C_p
    (square 1-p, boundary class m*p); its C_p part is then replaced by every
    characteristic vector of square 1-p in the diagonal lattice of the
    (p-1) spheres that replace C_p, with the value unchanged.
    """
    p = host.p
    if p is None or host.profile is None:
        raise ValueError(f"host {host.name} has no C_p profile")
    sw = rec.sw
    profile = host.profile
    consumed = profile.consumed()
    if isinstance(sw, BasicClassSet):
        profile = profile.padded(sw.slots)
        out: dict[BasicClassVector, int] = {}
        for vec, value in sw.classes:
            evals = evaluate_on_profile(vec, profile)
            if not sw3_lift_condition(evals, p):
                raise ValueError(f"class {vec} violates the lift criterion on C{p}; twist rule does not apply")
            square = restriction_square(evals, p)
            tag = RbdTag(p, tuple((i, vec.e[i]) for i in consumed))
            e = tuple(0 if i in consumed else x for i, x in enumerate(vec.e))
            tags = tuple(sorted(vec.tags + (tag,)))
            for ext in characteristic_extensions(int(square), p - 1):
                key = BasicClassVector(vec.t, e + ext, tags)
                if key in out:
                    raise ValueError(f"restriction collision at {key}")
                out[key] = value
        new_sw: SW = BasicClassSet.build(
            sw.e, sw.sigma, sw.slots + p - 1, out, sw.convention, sw.placeholder_values
        )
    else:
        new_sw = sw
    m = rec.markers
    keep = tuple(
        pc
        for k, pc in enumerate(m.embedded)
        if k != exclude and pc.name != host.name and host.name not in pc.hosts
    )
    return SmoothState(
        name=name,
        sw=new_sw,
        s2xs2_summands=m.s2xs2_summands,
        cp2_summands=m.cp2_summands,
        cp2bar_summands=m.cp2bar_summands - len(consumed) + (p - 1),
        core_parity=None,
        cusp=m.cusp,
        pieces=keep,
    )


def _twist(rec: ClosedRecord, piece_name: str, kind: str, component: int | None, name: str | None) -> ClosedRecord:
    index, pc = _find(rec, piece_name)
    if pc.kind != kind:
        raise ValueError(f"{piece_name} is a {pc.kind}, not a {kind}")
    here = _state_of(rec, index)
    label = f"{kind} twist on {piece_name}" + (f" via f^{component}" if component is not None else "")
    if pc.partner is not None:
        if component != pc.partner_component:
            raise ValueError(
                f"{piece_name} was last twisted via component {pc.partner_component}; twist it back first"
            )
        state = pc.partner
    else:
        if not pc.hosts:
            raise ValueError(f"no twist rule is known for {piece_name}")
        if len(pc.hosts) == 1 and component is None:
            host_name = pc.hosts[0]
        else:
            if component is None or not 1 <= component <= len(pc.hosts):
                raise ValueError(f"{piece_name} has {len(pc.hosts)} involutions; pick component 1..{len(pc.hosts)}")
            host_name = pc.hosts[component - 1]
        _, host = _find(rec, host_name)
        state = _rebuild_from_host(rec, host, index, name or f"{rec.name}[{label}]")
    if name is not None:
        state = replace(state, name=name)
    twisted = replace(pc, partner=here, partner_component=component)
    return _apply_state(rec, state, index, twisted, label)


def cork_twist_record(rec: ClosedRecord, piece: str, component: int | None = None, name: str | None = None) -> ClosedRecord:
    """Remove the named cork and reglue it by its involution (f^component for boundary sums)."""
    return _twist(rec, piece, "cork", component, name)


def plug_twist_record(rec: ClosedRecord, piece: str, component: int | None = None, name: str | None = None) -> ClosedRecord:
    return _twist(rec, piece, "plug", component, name)


def with_cusp_cork_pieces(rec: ClosedRecord) -> ClosedRecord:
    """Attach the copies of W_1 and W_{1,2} that E(n) # CP2-bar carries off its cusp.

    Twisting either one gives the manifold that splits off S2xS2 (with the
    cusp neighborhood on the other side), so its SW invariant vanishes.
    """
    m = rec.markers
    if not m.cusp or m.cp2bar_summands < 1 or rec.b2plus < 3:
        raise ValueError("needs E(n) # CP2bar with n >= 2 (a cusp, a CP2bar summand)")
    split = SmoothState(
        name="X",
        sw=SWState.ZERO,
        s2xs2_summands=m.s2xs2_summands + 1,
        cp2_summands=m.cp2_summands,
        cp2bar_summands=m.cp2bar_summands,
        core_parity=None,
        cusp=True,
        pieces=(),
    )
    w1 = EmbeddedPiece("W1", "cork", (("Wn", 1),), partner=split)
    w12 = EmbeddedPiece("W1,2", "plug", (("Wmn", 1, 2),), partner=split)
    return replace(
        rec,
        markers=replace(m, embedded=m.embedded + (w1, w12)),
        provenance=rec.provenance + ("locate W1 and W1,2 off the cusp",),
    )


def y_family(p_list: Sequence[int], convention: str = "paper") -> ClosedRecord:
    """Y_0 = E(p_1 + ... + p_n) # n CP2-bar with its disjoint D_{p_i} pieces.

    Each D_{p_i} carries the canonical profile (its distinguished sphere pairs
    with E_i at weight p_i), a cork W_{p_i - 1} and a plug W_{1,p_i}. One
    boundary-sum cork W(p_1 - 1, ..., p_n - 1) and one boundary-sum plug cover
    all D's, with the i-th involution acting through D_{p_i}.
    """
    if not p_list or any(p < 2 for p in p_list):
        raise ValueError("p_list must be nonempty with every p_i >= 2")
    k = len(p_list)
    total = sum(p_list)
    rec = record_preset("En", total, convention=convention, decomposition=p_list)
    rec = blow_up(rec, k)
    pieces: list[EmbeddedPiece] = []
    d_names = []
    for i, p in enumerate(p_list, start=1):
        d_name = f"D{p}#{i}"
        d_names.append(d_name)
        pieces.append(EmbeddedPiece(d_name, "Dp", (("Dp", p),), p=p, profile=EmbeddingProfile.canonical(p, k, i - 1)))
        pieces.append(EmbeddedPiece(f"W{p - 1}#{i}", "cork", (("Wn", p - 1),), hosts=(d_name,)))
        pieces.append(EmbeddedPiece(f"W1,{p}#{i}", "plug", (("Wmn", 1, p),), hosts=(d_name,)))
    pieces.append(
        EmbeddedPiece(
            "W(" + ",".join(str(p - 1) for p in p_list) + ")",
            "cork",
            tuple(("Wn", p - 1) for p in p_list),
            hosts=tuple(d_names),
        )
    )
    pieces.append(
        EmbeddedPiece(
            "♮".join(f"W1,{p}" for p in p_list),
            "plug",
            tuple(("Wmn", 1, p) for p in p_list),
            hosts=tuple(d_names),
        )
    )
    markers = replace(rec.markers, embedded=_pad_pieces(pieces, rec.sw))
    return replace(
        rec,
        markers=markers,
        name="Y0",
        handle_count_meta=11 * total + k - 4,
        provenance=rec.provenance + ("locate disjoint D_p pieces",),
    )


# -- knot surgery and rational blowdown --------------------------------------


def _knot_sw(sw: SW, s2xs2: int, delta: LaurentPoly) -> SW:
    if s2xs2:
        # cusp disjoint from the S2xS2 summand: the surgered manifold is unchanged
        return sw
    if isinstance(sw, BasicClassSet):
        return knot_surgery(sw, delta)
    return sw


def _knot_pieces(pieces: Sequence[EmbeddedPiece], delta: LaurentPoly) -> tuple[EmbeddedPiece, ...]:
    out = []
    for pc in pieces:
        if pc.partner is not None and pc.partner.cusp:
            st = pc.partner
            st = replace(
                st,
                sw=_knot_sw(st.sw, st.s2xs2_summands, delta),
                name=st.name if st.s2xs2_summands or delta == ONE else f"{st.name}_K",
                pieces=_knot_pieces(st.pieces, delta),
            )
            pc = replace(pc, partner=st)
        out.append(pc)
    return tuple(out)


def knot_surgery_record(rec: ClosedRecord, delta: LaurentPoly, label: str = "K") -> ClosedRecord:
    """Knot surgery in the cusp neighborhood; every invariant but SW is kept.

    Twists on pieces disjoint from the cusp commute with the surgery, so the
    data on the far side of each twist is surgered too.
    """
    if not rec.markers.cusp:
        raise ValueError(f"{rec.name} has no cusp neighborhood marker")
    if not delta.is_alexander_normalized():
        raise ValueError(f"{delta} is not a normalized Alexander polynomial")
    m = rec.markers
    sw = _knot_sw(rec.sw, m.s2xs2_summands, delta)
    markers = replace(m, embedded=_knot_pieces(m.embedded, delta))
    unchanged = m.s2xs2_summand or delta == ONE
    return replace(
        rec,
        sw=sw,
        markers=markers,
        name=rec.name if unchanged else f"{rec.name}_{label}",
        provenance=rec.provenance + (f"knot surgery {label}: {delta}",),
    )


def rational_blowdown_record(rec: ClosedRecord, piece: str, name: str | None = None) -> ClosedRecord:
    """Replace the C_p inside the named piece by the rational ball B_p.

    Simple connectivity of the result is asserted, not derived.
    """
    index, pc = _find(rec, piece)
    if pc.kind != "Dp" or pc.p is None or pc.profile is None:
        raise ValueError(f"{piece} is not a C_p/D_p piece with a profile")
    p = pc.p
    if isinstance(rec.sw, BasicClassSet):
        sw: SW = rbd_transfer(rec.sw, pc.profile.padded(rec.sw.slots))
    else:
        sw = rec.sw
    m = rec.markers
    cp2bar = max(0, m.cp2bar_summands - len(pc.profile.consumed()))
    parity = "odd" if cp2bar or m.cp2_summands else None
    keep = tuple(q for k, q in enumerate(m.embedded) if k != index and pc.name not in q.hosts)
    markers = replace(m, cp2bar_summands=cp2bar, core_parity=None, embedded=keep)
    return ClosedRecord(
        e=rec.e - (p - 1),
        sigma=rec.sigma + (p - 1),
        b2plus=rec.b2plus,
        b2minus=rec.b2minus - (p - 1),
        parity=parity,
        spin=False,
        sw=sw,
        markers=markers,
        simply_connected=True,
        name=name or f"{rec.name}_({p})",
        handle_count_meta=None,
        provenance=rec.provenance + (f"rational blowdown of C{p} in {piece}",),
    )


# -- two-path consistency ----------------------------------------------------


@dataclass(frozen=True)
class TwoPathReport:
    host: str
    p: int
    blowdown_path: ClosedRecord
    cork_path: ClosedRecord
    plug_path: ClosedRecord | None
    agree: bool
    mismatches: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "host": self.host,
            "p": self.p,
            "agree": self.agree,
            "mismatches": list(self.mismatches),
            "counts": {
                "blowdown_path": sw_count(self.blowdown_path),
                "cork_path": sw_count(self.cork_path),
                "plug_path": sw_count(self.plug_path) if self.plug_path else None,
            },
        }


def _diff(a: ClosedRecord, b: ClosedRecord, label: str) -> list[str]:
    out = []
    for attr in ("e", "sigma", "b2plus", "b2minus", "parity", "spin", "markers"):
        if getattr(a, attr) != getattr(b, attr):
            out.append(f"{label}: {attr} {getattr(a, attr)!r} != {getattr(b, attr)!r}")
    if a.sw != b.sw:
        out.append(f"{label}: sw differs (counts {sw_count(a)} vs {sw_count(b)})")
    return out


def two_path_consistency(rec: ClosedRecord, host: str) -> TwoPathReport:
    """Blow down C_p in ``host`` then blow up p-1 times, versus twisting the
    cork W_{p-1} (and the plug W_{1,p}) inside the same D_p."""
    _, d = _find(rec, host)
    if d.kind != "Dp" or d.p is None:
        raise ValueError(f"{host} is not a D_p piece")
    p = d.p
    a = blow_up(rational_blowdown_record(rec, host), p - 1)
    cork = next((pc for pc in rec.embedded if pc.kind == "cork" and pc.hosts == (host,)), None)
    if cork is None:
        raise ValueError(f"no cork recorded inside {host}")
    b = cork_twist_record(rec, cork.name)
    plug = next((pc for pc in rec.embedded if pc.kind == "plug" and pc.hosts == (host,)), None)
    c = plug_twist_record(rec, plug.name) if plug else None
    mismatches = _diff(a, b, "blowdown vs cork")
    if c is not None:
        mismatches += _diff(a, c, "blowdown vs plug")
    return TwoPathReport(host, p, a, b, c, not mismatches, tuple(mismatches))


# -- classification ------------------------------------------------------------


# definite unimodular forms determined by (rank, parity): I_n for n <= 8, E8
_UNIQUE_DEFINITE = {("odd", r) for r in range(1, 9)} | {("even", 0), ("odd", 0), ("even", 8)}


@dataclass(frozen=True)
class HomeoVerdict:
    same_rank: bool
    same_signature: bool
    same_parity: bool | None
    verdict: str  # "homeomorphic" | "not_homeomorphic" | "inconclusive"
    reasons: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "same_rank": self.same_rank,
            "same_signature": self.same_signature,
            "same_parity": self.same_parity,
            "verdict": self.verdict,
            "reasons": list(self.reasons),
        }


def homeo_classify(a: ClosedRecord, b: ClosedRecord) -> HomeoVerdict:
    """Freedman's classification read off (rank, signature, parity)."""
    if not (a.simply_connected and b.simply_connected):
        raise ValueError("homeomorphism classification needs simply connected records")
    same_rank = a.b2 == b.b2
    same_sig = a.sigma == b.sigma
    same_par = None if a.parity is None or b.parity is None else a.parity == b.parity
    facts = f"(b2, sigma, parity) = ({a.b2}, {a.sigma}, {a.parity}) vs ({b.b2}, {b.sigma}, {b.parity})"
    if not same_rank or not same_sig or same_par is False:
        return HomeoVerdict(same_rank, same_sig, same_par, "not_homeomorphic", (facts,))
    if same_par is None:
        return HomeoVerdict(same_rank, same_sig, same_par, "inconclusive", (facts, "parity undetermined"))
    definite = a.b2plus == 0 or a.b2minus == 0
    if definite and (a.parity, a.b2) not in _UNIQUE_DEFINITE:
        return HomeoVerdict(
            same_rank, same_sig, same_par, "inconclusive", (facts, "definite form not fixed by rank and parity")
        )
    kind = "definite, unique lattice" if definite else "indefinite"
    return HomeoVerdict(same_rank, same_sig, same_par, "homeomorphic", (facts, kind))


def compare_sw(a: ClosedRecord, b: ClosedRecord) -> SWComparison:
    def as_set(r: ClosedRecord) -> BasicClassSet | None:
        if isinstance(r.sw, BasicClassSet):
            return r.sw
        if r.sw is SWState.ZERO:
            return BasicClassSet.empty(r.e, r.sigma)
        return None

    sa, sb = as_set(a), as_set(b)
    if sa is None or sb is None:
        return SWComparison.INCONCLUSIVE
    return sw_compare(sa, sb)


# -- piece sanity ------------------------------------------------------------


def piece_presentation(pc: EmbeddedPiece) -> HandlePresentation:
    return boundary_sum([preset(spec[0], *spec[1:]) for spec in pc.presets])


def piece_checks(pc: EmbeddedPiece) -> dict:
    """Homology facts of a piece's presentation, plus the Stein check for corks."""
    pres = piece_presentation(pc)
    h = homology(pres)
    out = {"piece": pc.name, "presentation": pres.name, "homology": h.to_dict()}
    if pc.kind == "cork":
        tb = W_N_LEGENDRIAN_TB.tb * len(pres.two_handles)
        out["contractible"] = h.is_acyclic and h.boundary_h1.is_trivial
        out["eliashberg"] = all(eliashberg_check(pres, LegendrianData(tb)))
    elif pc.kind == "plug":
        out["h2_rank"] = h.h2.free_rank
        out["simply_connected_h1"] = h.h1.is_trivial
    elif pc.kind == "Dp" and pc.p is not None:
        c = homology(preset("Cp", pc.p))
        out["c_p_boundary_order"] = c.boundary_h1.torsion_order
        out["c_p_boundary_expected"] = pc.p**2
    return out

