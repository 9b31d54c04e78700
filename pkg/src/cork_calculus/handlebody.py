"""Handle presentations of compact 4-manifolds at the linking-matrix level.

A presentation has dotted circles (1-handles), framed 2-handles and a count
of 3-handles. Dotted circles are pairwise unlinked; each 2-handle records its
framing, its linking number with every other 2-handle, and its algebraic
run-over count through every dotted circle. That is all the homology and
boundary data below depends on.

Handle indices in every move refer to positions in ``two_handles``; dotted
circles are addressed separately (``dot=`` arguments or :class:`Dot`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Sequence

from .exactlin import (
    AbelianGroup,
    FormInvariants,
    IntMatrix,
    cokernel,
    form_invariants,
    kernel_basis,
)

__all__ = [
    "TwoHandle",
    "HandlePresentation",
    "HomologyReport",
    "LegendrianData",
    "Dot",
    "preset",
    "handle_slide",
    "blowup_pres",
    "blowdown_pres",
    "dot_zero_swap",
    "homology",
    "boundary_sum",
    "eliashberg_check",
    "normal_form",
    "W_N_LEGENDRIAN_TB",
]


@dataclass(frozen=True)
class TwoHandle:
    framing: int
    linking: tuple[int, ...]  # one slot per 2-handle; own slot is 0
    over: tuple[int, ...]  # one slot per dotted circle

    def to_dict(self) -> dict:
        return {"framing": self.framing, "linking": list(self.linking), "over": list(self.over)}


@dataclass(frozen=True)
class HandlePresentation:
    name: str
    one_handles: int
    two_handles: tuple[TwoHandle, ...]
    three_handles: int = 0
    # 2-handles known only by existence (their attaching data is not modeled);
    # they contribute to the Euler characteristic and nothing else
    opaque_two_handles: int = 0
    flags: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if min(self.one_handles, self.three_handles, self.opaque_two_handles) < 0:
            raise ValueError("handle counts must be nonnegative")
        h = len(self.two_handles)
        for i, th in enumerate(self.two_handles):
            if len(th.linking) != h:
                raise ValueError(f"2-handle {i}: linking vector has length {len(th.linking)}, expected {h}")
            if th.linking[i] != 0:
                raise ValueError(f"2-handle {i}: own linking slot must be 0 (framing is stored separately)")
            if len(th.over) != self.one_handles:
                raise ValueError(f"2-handle {i}: over vector has length {len(th.over)}, expected {self.one_handles}")
            for j in range(i):
                if th.linking[j] != self.two_handles[j].linking[i]:
                    raise ValueError(f"linking between 2-handles {j} and {i} is not symmetric")

    @property
    def euler(self) -> int:
        return 1 - self.one_handles + len(self.two_handles) + self.opaque_two_handles - self.three_handles

    def linking_matrix(self) -> IntMatrix:
        """Framings on the diagonal, pairwise linking numbers off it."""
        h = len(self.two_handles)
        return IntMatrix.of(
            ([th.framing if i == j else th.linking[j] for j in range(h)] for i, th in enumerate(self.two_handles)),
            h,
        )

    def over_matrix(self) -> IntMatrix:
        """Rows are dotted circles, columns 2-handles: the boundary map C_2 -> C_1."""
        h = len(self.two_handles)
        return IntMatrix.of(([th.over[d] for th in self.two_handles] for d in range(self.one_handles)), h)

    def extended_matrix(self) -> IntMatrix:
        """Linking matrix of the whole link with dotted circles read as 0-framed unknots."""
        d = self.one_handles
        a = self.over_matrix()
        lk = self.linking_matrix()
        n = d + lk.rows
        out = [[0] * n for _ in range(n)]
        for i in range(d):
            for j in range(lk.rows):
                out[i][d + j] = out[d + j][i] = a[i, j]
        for i in range(lk.rows):
            for j in range(lk.rows):
                out[d + i][d + j] = lk[i, j]
        return IntMatrix.of(out, n)

    def to_dict(self) -> dict:
        out: dict = {
            "name": self.name,
            "one_handles": self.one_handles,
            "two_handles": [th.to_dict() for th in self.two_handles],
            "three_handles": self.three_handles,
        }
        if self.opaque_two_handles:
            out["opaque_two_handles"] = self.opaque_two_handles
        if self.flags:
            out["flags"] = sorted(self.flags)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> HandlePresentation:
        return cls(
            name=str(data.get("name", "")),
            one_handles=int(data.get("one_handles", 0)),
            two_handles=tuple(
                TwoHandle(int(th["framing"]), tuple(int(x) for x in th["linking"]), tuple(int(x) for x in th.get("over", ())))
                for th in data.get("two_handles", ())
            ),
            three_handles=int(data.get("three_handles", 0)),
            opaque_two_handles=int(data.get("opaque_two_handles", 0)),
            flags=frozenset(data.get("flags", ())),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def loads(cls, text: str) -> HandlePresentation:
        return cls.from_dict(json.loads(text))


def _from_matrices(
    name: str,
    one_handles: int,
    lk: Sequence[Sequence[int]],
    over: Sequence[Sequence[int]],
    **kw,
) -> HandlePresentation:
    """Build from a full linking matrix (framings on the diagonal) and per-handle over vectors."""
    handles = tuple(
        TwoHandle(lk[i][i], tuple(0 if j == i else lk[i][j] for j in range(len(lk))), tuple(over[i]))
        for i in range(len(lk))
    )
    return HandlePresentation(name, one_handles, handles, **kw)


@dataclass(frozen=True)
class HomologyReport:
    h1: AbelianGroup
    h2: AbelianGroup
    h3: AbelianGroup
    boundary_h1: AbelianGroup
    euler: int
    intersection_form: FormInvariants

    @property
    def is_acyclic(self) -> bool:
        return self.h1.is_trivial and self.h2.is_trivial and self.h3.is_trivial

    def to_dict(self) -> dict:
        return {
            "h1": str(self.h1),
            "h2": str(self.h2),
            "h3": str(self.h3),
            "boundary_h1": str(self.boundary_h1),
            "euler": self.euler,
            "intersection_form": self.intersection_form.to_dict(),
        }


def homology(pres: HandlePresentation) -> HomologyReport:
    """Homology of the handlebody and of its boundary.

    The chain complex is Z^3h -> Z^2h -> Z^1h -> Z with the 3-handle boundary
    map taken to be zero (attaching data of 3-handles is not modeled) and the
    2-handle boundary map given by the run-over counts. Opaque 2-handles are
    excluded. The intersection form is the linking matrix restricted to the
    2-cycles.
    """
    a = pres.over_matrix()
    h1 = cokernel(a)
    ker = kernel_basis(a)
    h2 = AbelianGroup(ker.cols)
    h3 = AbelianGroup(pres.three_handles)
    q = ker.T @ pres.linking_matrix() @ ker
    return HomologyReport(
        h1=h1,
        h2=h2,
        h3=h3,
        boundary_h1=cokernel(pres.extended_matrix()),
        euler=pres.euler,
        intersection_form=form_invariants(q),
    )


# -- presets ---------------------------------------------------------------


def _w_n(n: int, framing: int = 0) -> HandlePresentation:
    if n < 1:
        raise ValueError("W_n needs n >= 1")
    # the twist parameter n is invisible at the algebraic level
    return _from_matrices(f"W{n}", 1, [[framing]], [[1]])


def _c_p(p: int) -> HandlePresentation:
    if p < 2:
        raise ValueError("C_p needs p >= 2")
    n = p - 1
    lk = [[0] * n for _ in range(n)]
    for i in range(n):
        lk[i][i] = -p - 2 if i == 0 else -2
        if i + 1 < n:
            lk[i][i + 1] = lk[i + 1][i] = 1
    return _from_matrices(f"C{p}", 0, lk, [[] for _ in range(n)])


def _d_p(p: int) -> HandlePresentation:
    c = _c_p(p)
    return replace(
        c,
        name=f"D{p}",
        opaque_two_handles=2,
        flags=frozenset({f"contains:W{p - 1}", f"contains:W1,{p}"}),
    )


def _b_p(p: int) -> HandlePresentation:
    if p < 2:
        raise ValueError("B_p needs p >= 2")
    return _from_matrices(f"B{p}", 1, [[p - 1]], [[p]])


def _w_mn(m: int, n: int) -> HandlePresentation:
    if m < 1 or n < 2:
        raise ValueError("W_{m,n} needs m >= 1 and n >= 2")
    # algebraic stand-in: a 0-framed handle through the dot once, plus one
    # handle away from the dot carrying H_2 = Z
    return _from_matrices(f"W{m},{n}", 1, [[0, m], [m, -n]], [[1], [0]])


def preset(name: str, *params: int, framing: int = 0) -> HandlePresentation:
    """Named presentations: Wn(n), Wfamily(k1, ..., kn), Wmn(m, n), Cp(p), Dp(p), Bp(p).

    Handle 0 of C_p is the (-p-2)-framed end of the chain; the remaining
    handles are -2-framed, consecutive ones linking +1.
    """
    key = name.lower()
    if key == "wn":
        (n,) = params
        return _w_n(n, framing)
    if key == "wfamily":
        if not params:
            raise ValueError("Wfamily needs at least one parameter")
        out = boundary_sum([_w_n(k, framing) for k in params])
        return replace(out, name="W(" + ",".join(map(str, params)) + ")")
    if key == "wmn":
        m, n = params
        return _w_mn(m, n)
    if key == "cp":
        (p,) = params
        return _c_p(p)
    if key == "dp":
        (p,) = params
        return _d_p(p)
    if key == "bp":
        (p,) = params
        return _b_p(p)
    raise ValueError(f"unknown preset {name!r}")


# -- moves -----------------------------------------------------------------


@dataclass(frozen=True)
class Dot:
    """Reference to a dotted circle, to make intent explicit in move arguments."""

    index: int


def _check_two_handle(pres: HandlePresentation, i) -> int:
    if isinstance(i, Dot):
        raise ValueError("2-handles cannot slide over (or be) a dotted circle")
    if not 0 <= i < len(pres.two_handles):
        raise IndexError(f"no 2-handle {i}")
    return i


def handle_slide(pres: HandlePresentation, i: int, j: int | Dot, sign: int = 1) -> HandlePresentation:
    """Slide 2-handle ``i`` over 2-handle ``j`` (handle subtraction when sign = -1)."""
    i = _check_two_handle(pres, i)
    j = _check_two_handle(pres, j)
    if i == j:
        raise ValueError("a handle cannot slide over itself")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    hs = pres.two_handles
    hi, hj = hs[i], hs[j]
    lk_ij = hi.linking[j]
    new_framing = hi.framing + hj.framing + 2 * sign * lk_ij
    new_link = list(hi.linking)
    for k in range(len(hs)):
        if k not in (i, j):
            new_link[k] += sign * hj.linking[k]
    new_link[j] = lk_ij + sign * hj.framing
    new_over = tuple(a + sign * b for a, b in zip(hi.over, hj.over))
    out = []
    for k, hk in enumerate(hs):
        if k == i:
            out.append(TwoHandle(new_framing, tuple(new_link), new_over))
        else:
            row = list(hk.linking)
            row[i] = new_link[k]
            out.append(replace(hk, linking=tuple(row)))
    return replace(pres, two_handles=tuple(out))


def blowup_pres(pres: HandlePresentation, sign: int = -1) -> HandlePresentation:
    """Add an isolated unknot with framing ``sign`` (connected sum with CP^2-bar for -1)."""
    if sign not in (1, -1):
        raise ValueError("blow-up framing must be +1 or -1")
    out = [replace(th, linking=th.linking + (0,)) for th in pres.two_handles]
    out.append(TwoHandle(sign, (0,) * (len(out) + 1), (0,) * pres.one_handles))
    return replace(pres, two_handles=tuple(out))


def blowdown_pres(pres: HandlePresentation, i: int) -> HandlePresentation:
    i = _check_two_handle(pres, i)
    th = pres.two_handles[i]
    if th.framing not in (1, -1):
        raise ValueError(f"2-handle {i} has framing {th.framing}; only +-1 can be blown down")
    if any(th.linking) or any(th.over):
        raise ValueError(f"2-handle {i} is linked; only an isolated unknot can be blown down")
    rest = [
        replace(h, linking=h.linking[:i] + h.linking[i + 1 :])
        for k, h in enumerate(pres.two_handles)
        if k != i
    ]
    return replace(pres, two_handles=tuple(rest))


def dot_zero_swap(pres: HandlePresentation, dot: int, handle: int, plug: bool = False) -> HandlePresentation:
    """Exchange a dotted circle with a 0-framed 2-handle passing through it once.

    In the extended linking matrix this only relabels which of the two
    components carries the dot, so it is an involution and leaves the boundary
    untouched; handle counts (hence the Euler characteristic) are unchanged.
    ``plug`` marks the swap as a plug involution; the algebra is the same.
    """
    handle = _check_two_handle(pres, handle)
    if not 0 <= dot < pres.one_handles:
        raise IndexError(f"no dotted circle {dot}")
    th = pres.two_handles[handle]
    kind = "plug" if plug else "cork"
    if th.framing != 0:
        raise ValueError(f"{kind} swap needs a 0-framed handle; handle {handle} has framing {th.framing}")
    if th.over[dot] not in (1, -1):
        raise ValueError(f"{kind} swap needs the handle to run over the dot algebraically once, got {th.over[dot]}")
    if any(c for d, c in enumerate(th.over) if d != dot):
        raise ValueError("the swapped handle must not run over any other dotted circle")

    s = th.over[dot]
    out = []
    for k, hk in enumerate(pres.two_handles):
        over = list(hk.over)
        link = list(hk.linking)
        if k == handle:
            # the old dotted circle, now a 0-framed 2-handle
            link = [pres.two_handles[j].over[dot] if j != handle else 0 for j in range(len(link))]
            over = [0] * pres.one_handles
            over[dot] = s
            out.append(TwoHandle(0, tuple(link), tuple(over)))
        else:
            over[dot], link[handle] = hk.linking[handle], hk.over[dot]
            out.append(TwoHandle(hk.framing, tuple(link), tuple(over)))
    return replace(pres, two_handles=tuple(out))


def boundary_sum(parts: Sequence[HandlePresentation]) -> HandlePresentation:
    if not parts:
        raise ValueError("boundary sum of nothing")
    if len(parts) == 1:
        return parts[0]
    total_dots = sum(p.one_handles for p in parts)
    total_h = sum(len(p.two_handles) for p in parts)
    out = []
    d0 = h0 = 0
    for p in parts:
        for th in p.two_handles:
            link = [0] * total_h
            link[h0 : h0 + len(th.linking)] = th.linking
            over = [0] * total_dots
            over[d0 : d0 + len(th.over)] = th.over
            out.append(TwoHandle(th.framing, tuple(link), tuple(over)))
        d0 += p.one_handles
        h0 += len(p.two_handles)
    return HandlePresentation(
        name=" ♮ ".join(p.name for p in parts),
        one_handles=total_dots,
        two_handles=tuple(out),
        three_handles=sum(p.three_handles for p in parts),
        opaque_two_handles=sum(p.opaque_two_handles for p in parts),
        flags=frozenset().union(*(p.flags for p in parts)),
    )


def normal_form(pres: HandlePresentation) -> HandlePresentation:
    """Deterministic reordering of 2-handles for structural comparison.

    Handles are sorted by (framing, over vector, sorted off-diagonal linking
    values); ties keep their original order.
    """
    hs = pres.two_handles
    order = sorted(
        range(len(hs)),
        key=lambda k: (hs[k].framing, hs[k].over, sorted(x for j, x in enumerate(hs[k].linking) if j != k)),
    )
    out = tuple(
        TwoHandle(hs[k].framing, tuple(hs[k].linking[j] for j in order), hs[k].over) for k in order
    )
    return replace(pres, two_handles=out)


# -- Stein criterion --------------------------------------------------------


@dataclass(frozen=True)
class LegendrianData:
    """Thurston-Bennequin number of each 2-handle in a Legendrian diagram (input data)."""

    tb: tuple[int, ...]


# Fixture: the single 2-handle of W_n in Legendrian position with the
# 1-handle drawn as a pair of balls. Assumed value, not derived here.
W_N_LEGENDRIAN_TB = LegendrianData((1,))


def eliashberg_check(pres: HandlePresentation, leg: LegendrianData) -> tuple[bool, ...]:
    """Per 2-handle: framing <= tb - 1."""
    if len(leg.tb) != len(pres.two_handles):
        raise ValueError(f"need one tb value per 2-handle ({len(pres.two_handles)}), got {len(leg.tb)}")
    return tuple(th.framing <= tb - 1 for th, tb in zip(pres.two_handles, leg.tb))
