"""Formal Seiberg-Witten basic-class bookkeeping.

Classes live in the lattice spanned by PD(T) (the fiber class of an elliptic
surface, square 0) and exceptional classes E_1..E_m (square -1, pairwise
orthogonal, orthogonal to T). A rational blowdown replaces the E-coordinates
it consumes by an :class:`RbdTag`, which remembers enough (the piece, and the
signs of the consumed coordinates) to keep distinct classes distinct and to
recover the square.

Two parity conventions are supported for the elliptic family:

``paper``
    classes k*PD(T) with k even and |k| <= n-2, for every n.
``standard``
    k = n (mod 2), |k| <= n-2, values the coefficients of (t - 1/t)^(n-2).

For even n both give the same classes; the values are then the standard
coefficients under either convention. For odd n the ``paper`` convention
carries placeholder values 1 (counts only).
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .exactlin import IntMatrix, smith_normal_form, solve_rational
from .knots import ONE, LaurentPoly, T

__all__ = [
    "CONVENTIONS",
    "RbdTag",
    "BasicClassVector",
    "BasicClassSet",
    "EmbeddingProfile",
    "SWComparison",
    "elliptic_polynomial",
    "beta_elliptic",
    "blowup_formula",
    "knot_surgery",
    "knot_surgery_beta",
    "d_degree",
    "evaluate_on_profile",
    "rbd_lift_filter",
    "rbd_transfer",
    "sw_compare",
    "chain_form",
    "restriction_square",
    "sw3_lift_condition",
    "characteristic_extensions",
]

CONVENTIONS = ("paper", "standard")


@dataclass(frozen=True, order=True)
class RbdTag:
    """Marker left by a rational blowdown along C_p on the classes it carried over."""

    p: int
    consumed: tuple[tuple[int, int], ...]  # (E index, sign) pairs

    @property
    def square(self) -> int:
        # K^2 = lift^2 + (p - 1); the zeroed coordinates gave -1 each
        return self.p - 1 - len(self.consumed)

    def __str__(self) -> str:
        return f"C{self.p}:" + ",".join(f"E{i + 1}{'+' if s > 0 else '-'}" for i, s in self.consumed)

    _PATTERN = re.compile(r"^C(\d+):((?:E\d+[+-](?:,E\d+[+-])*)?)$")

    @classmethod
    def parse(cls, text: str) -> RbdTag:
        m = cls._PATTERN.match(text)
        if not m:
            raise ValueError(f"bad tag {text!r}")
        consumed = []
        if m.group(2):
            for part in m.group(2).split(","):
                consumed.append((int(part[1:-1]) - 1, 1 if part[-1] == "+" else -1))
        return cls(int(m.group(1)), tuple(consumed))


@dataclass(frozen=True, order=True)
class BasicClassVector:
    t: int  # coefficient on PD(T)
    e: tuple[int, ...] = ()  # coefficients on E_1..E_m
    tags: tuple[RbdTag, ...] = ()

    @property
    def square(self) -> int:
        return -sum(x * x for x in self.e) + sum(tag.square for tag in self.tags)

    def pairing_with_fiber(self) -> int:
        # PD(T).T = 0 and E_i.T = 0
        return 0

    def has_characteristic_parity(self) -> bool:
        """Odd pairing with every live E_i, even pairing with T; consumed slots are exempt."""
        consumed = {i for tag in self.tags for i, _ in tag.consumed}
        return self.pairing_with_fiber() % 2 == 0 and all(
            x % 2 == 1 for i, x in enumerate(self.e) if i not in consumed
        )

    def padded(self, m: int) -> BasicClassVector:
        if m < len(self.e):
            raise ValueError("cannot pad to a shorter length")
        return BasicClassVector(self.t, self.e + (0,) * (m - len(self.e)), self.tags)

    def tag_label(self) -> str | None:
        return ";".join(map(str, self.tags)) if self.tags else None

    def __str__(self) -> str:
        parts = [f"{self.t}T"]
        parts += [f"{'+' if x >= 0 else '-'}{abs(x) if abs(x) != 1 else ''}E{i + 1}" for i, x in enumerate(self.e) if x]
        if self.tags:
            parts.append(f"[{self.tag_label()}]")
        return "".join(parts)


@dataclass(frozen=True)
class BasicClassSet:
    """Basic classes with their (nonzero) SW values, in an ambient with given (e, sigma)."""

    e: int
    sigma: int
    slots: int  # number of E coordinates
    classes: tuple[tuple[BasicClassVector, int], ...]
    convention: str = "standard"
    placeholder_values: bool = False

    def __post_init__(self) -> None:
        seen = set()
        for vec, value in self.classes:
            if vec in seen:
                raise ValueError(f"duplicate basic class {vec}")
            if value == 0:
                raise ValueError(f"class {vec} has SW value 0; not a basic class")
            if len(vec.e) != self.slots:
                raise ValueError(f"class {vec} has {len(vec.e)} E coordinates, expected {self.slots}")
            seen.add(vec)
        if list(self.classes) != sorted(self.classes):
            raise ValueError("classes must be in canonical order; use BasicClassSet.build")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown convention {self.convention!r}")

    @classmethod
    def build(
        cls,
        e: int,
        sigma: int,
        slots: int,
        values: Mapping[BasicClassVector, int] | Iterable[tuple[BasicClassVector, int]],
        convention: str = "standard",
        placeholder_values: bool = False,
    ) -> BasicClassSet:
        items = values.items() if isinstance(values, Mapping) else values
        return cls(e, sigma, slots, tuple(sorted((v, x) for v, x in items if x)), convention, placeholder_values)

    @classmethod
    def empty(cls, e: int, sigma: int, slots: int = 0, convention: str = "standard") -> BasicClassSet:
        return cls(e, sigma, slots, (), convention)

    @property
    def count(self) -> int:
        return len(self.classes)

    def __len__(self) -> int:
        return len(self.classes)

    def vectors(self) -> list[BasicClassVector]:
        return [v for v, _ in self.classes]

    def as_dict(self) -> dict[BasicClassVector, int]:
        return dict(self.classes)

    def to_dict(self) -> dict:
        return {
            "ambient": {"e": self.e, "sigma": self.sigma},
            "convention": self.convention,
            "placeholder_values": self.placeholder_values,
            "slots": self.slots,
            "classes": [
                {"t": v.t, "k_e": list(v.e), "tag": v.tag_label(), "value": x} for v, x in self.classes
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> BasicClassSet:
        classes = []
        for c in data["classes"]:
            tags = tuple(RbdTag.parse(s) for s in c["tag"].split(";")) if c.get("tag") else ()
            classes.append((BasicClassVector(int(c["t"]), tuple(int(x) for x in c["k_e"]), tags), int(c["value"])))
        slots = data.get("slots")
        if slots is None:
            slots = len(classes[0][0].e) if classes else 0
        return cls.build(
            int(data["ambient"]["e"]),
            int(data["ambient"]["sigma"]),
            int(slots),
            classes,
            data.get("convention", "standard"),
            bool(data.get("placeholder_values", False)),
        )


@dataclass(frozen=True)
class EmbeddingProfile:
    """How classes pair with the spheres u_1..u_{p-1} of an embedded C_p.

    Row j (0-based, j = p-2 is the distinguished u_{p-1}) gives the pairing of
    PD(T) with u_j per unit of t-coefficient and of each E_i per unit of its
    coefficient.
    """

    p: int
    eval_t: tuple[int, ...]
    eval_e: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.p < 2:
            raise ValueError("profile needs p >= 2")
        if len(self.eval_t) != self.p - 1 or len(self.eval_e) != self.p - 1:
            raise ValueError(f"profile for p={self.p} needs exactly {self.p - 1} rows")
        if len({len(r) for r in self.eval_e}) > 1:
            raise ValueError("profile rows have inconsistent lengths")

    @property
    def slots(self) -> int:
        return len(self.eval_e[0])

    @classmethod
    def canonical(cls, p: int, slots: int, index: int) -> EmbeddingProfile:
        """Rows u_1..u_{p-2} pair with nothing; u_{p-1} pairs with E_index at weight p."""
        if not 0 <= index < slots:
            raise IndexError(f"E index {index} out of range for {slots} slots")
        rows = [(0,) * slots for _ in range(p - 2)]
        last = [0] * slots
        last[index] = p
        rows.append(tuple(last))
        return cls(p, (0,) * (p - 1), tuple(rows))

    def padded(self, slots: int) -> EmbeddingProfile:
        if slots < self.slots:
            raise ValueError("cannot pad to fewer slots")
        extra = (0,) * (slots - self.slots)
        return EmbeddingProfile(self.p, self.eval_t, tuple(r + extra for r in self.eval_e))

    def consumed(self) -> tuple[int, ...]:
        """E indices the distinguished sphere pairs with."""
        return tuple(i for i, w in enumerate(self.eval_e[-1]) if w)

    def to_dict(self) -> dict:
        return {"p": self.p, "eval_t": list(self.eval_t), "eval_e": [list(r) for r in self.eval_e]}

    @classmethod
    def from_dict(cls, data: dict) -> EmbeddingProfile:
        return cls(int(data["p"]), tuple(data["eval_t"]), tuple(tuple(r) for r in data["eval_e"]))


class SWComparison(str, Enum):
    EQUAL = "equal"
    DISTINCT_BY_COUNT = "distinct_by_count"
    DISTINCT_BY_VALUES = "distinct_by_values"
    # same count and value multiset, different vectors: not decidable without
    # knowing the lattice isomorphism
    INCONCLUSIVE = "inconclusive"

    @property
    def distinguishes(self) -> bool:
        return self in (SWComparison.DISTINCT_BY_COUNT, SWComparison.DISTINCT_BY_VALUES)


# -- elliptic family ---------------------------------------------------------


def elliptic_polynomial(n: int) -> LaurentPoly:
    """(t - 1/t)^(n-2)."""
    if n < 2:
        raise ValueError("elliptic SW polynomial needs n >= 2")
    return (T - T**-1) ** (n - 2)


def _check_convention(convention: str) -> None:
    if convention not in CONVENTIONS:
        raise ValueError(f"parity convention must be one of {CONVENTIONS}, got {convention!r}")


def beta_elliptic(n: int, m: int = 0, convention: str = "paper") -> BasicClassSet:
    """Basic classes of E(n) # m CP^2-bar."""
    _check_convention(convention)
    if n < 2:
        raise ValueError(f"E(n) basic classes need n >= 2, got {n}")
    if m < 0:
        raise ValueError("m must be nonnegative")
    placeholder = convention == "paper" and n % 2 == 1
    if placeholder:
        base = {BasicClassVector(k): 1 for k in range(-(n - 2), n - 1) if k % 2 == 0}
    else:
        base = {BasicClassVector(k): c for k, c in elliptic_polynomial(n).terms}
    out = BasicClassSet.build(12 * n, -8 * n, 0, base, convention, placeholder)
    for _ in range(m):
        out = blowup_formula(out)
    return out


def blowup_formula(beta: BasicClassSet) -> BasicClassSet:
    """K -> K +- E_new with the same value; e += 1, sigma -= 1."""
    out = {}
    for vec, value in beta.classes:
        for s in (1, -1):
            out[BasicClassVector(vec.t, vec.e + (s,), vec.tags)] = value
    return BasicClassSet.build(
        beta.e + 1, beta.sigma - 1, beta.slots + 1, out, beta.convention, beta.placeholder_values
    )


def knot_surgery(beta: BasicClassSet, delta: LaurentPoly) -> BasicClassSet:
    """Multiply the SW series along the fiber direction by delta(t^2).

    Each term c*t^a of delta(t^2) shifts every class by a*PD(T) and scales
    its value by c; coinciding classes add, zero sums drop out.
    """
    if not delta.is_alexander_normalized():
        raise ValueError(f"{delta} is not a normalized Alexander polynomial")
    if beta.placeholder_values and delta != ONE:
        raise ValueError("knot surgery needs genuine SW values; placeholder values (paper convention, odd n) cannot be multiplied")
    acc: dict[BasicClassVector, int] = {}
    for a, c in delta.substitute(2).terms:
        for vec, value in beta.classes:
            key = BasicClassVector(vec.t + a, vec.e, vec.tags)
            acc[key] = acc.get(key, 0) + c * value
    return BasicClassSet.build(beta.e, beta.sigma, beta.slots, acc, beta.convention, beta.placeholder_values)


def knot_surgery_beta(n: int, delta: LaurentPoly, convention: str = "standard") -> BasicClassSet:
    """Basic classes of E(n)_K: product rule delta(t^2) * (t - 1/t)^(n-2)."""
    _check_convention(convention)
    if not delta.is_alexander_normalized():
        raise ValueError(f"{delta} is not a normalized Alexander polynomial")
    if convention == "paper" and n % 2 == 1:
        raise ValueError("the product rule has parity n; for odd n use convention='standard'")
    return knot_surgery(beta_elliptic(n, 0, convention), delta)


def d_degree(k: BasicClassVector, e: int, sigma: int) -> int:
    num = k.square - 2 * e - 3 * sigma
    if num % 4:
        raise ValueError(f"(K^2 - 2e - 3sigma)/4 = {num}/4 is not integral; {k} is not characteristic here")
    return num // 4


# -- rational blowdown -------------------------------------------------------


def evaluate_on_profile(vec: BasicClassVector, profile: EmbeddingProfile) -> tuple[int, ...]:
    if len(vec.e) != profile.slots:
        raise ValueError(f"profile has {profile.slots} E columns but the class has {len(vec.e)}")
    return tuple(
        vec.t * wt + sum(x * w for x, w in zip(vec.e, row))
        for wt, row in zip(profile.eval_t, profile.eval_e)
    )


def _passes(evals: Sequence[int], p: int) -> bool:
    return all(x == 0 for x in evals[:-1]) and abs(evals[-1]) == p


def rbd_lift_filter(
    beta: BasicClassSet, profile: EmbeddingProfile
) -> tuple[list[BasicClassVector], list[BasicClassVector]]:
    """Split classes into (lifts, non-lifts): zero on u_1..u_{p-2}, +-p on u_{p-1}."""
    if profile.slots != beta.slots:
        raise ValueError(f"profile has {profile.slots} E columns, class set has {beta.slots}")
    passing, failing = [], []
    for vec, _ in beta.classes:
        (passing if _passes(evaluate_on_profile(vec, profile), profile.p) else failing).append(vec)
    return passing, failing


def _blowdown_vector(vec: BasicClassVector, profile: EmbeddingProfile) -> BasicClassVector:
    consumed = profile.consumed()
    tag = RbdTag(profile.p, tuple((i, vec.e[i]) for i in consumed))
    e = tuple(0 if i in consumed else x for i, x in enumerate(vec.e))
    return BasicClassVector(vec.t, e, tuple(sorted(vec.tags + (tag,))))


def rbd_transfer(beta: BasicClassSet, profile: EmbeddingProfile) -> BasicClassSet:
    """Carry every basic class across a rational blowdown along C_p.

    All classes must be lifts; each keeps its value, the E coordinates the
    distinguished sphere pairs with are zeroed and recorded in a tag, and the
    ambient loses p-1 from e and gains p-1 in sigma.
    """
    passing, failing = rbd_lift_filter(beta, profile)
    if failing:
        raise ValueError(
            f"{len(failing)} classes are not lifts for C{profile.p}: " + ", ".join(map(str, failing[:5]))
        )
    out: dict[BasicClassVector, int] = {}
    for vec, value in beta.classes:
        image = _blowdown_vector(vec, profile)
        if image in out:
            raise ValueError(f"restriction collision: two classes map to {image}")
        out[image] = value
    p = profile.p
    return BasicClassSet.build(
        beta.e - (p - 1), beta.sigma + (p - 1), beta.slots, out, beta.convention, beta.placeholder_values
    )


# -- independent lift criterion on the C_p lattice ---------------------------


def chain_form(p: int) -> IntMatrix:
    """Intersection form of C_p in the order u_1..u_{p-1}: -2's ending in -(p+2)."""
    if p < 2:
        raise ValueError("C_p needs p >= 2")
    n = p - 1
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = -2 if i < n - 1 else -(p + 2)
        if i + 1 < n:
            rows[i][i + 1] = rows[i + 1][i] = 1
    return IntMatrix.of(rows, n)


def restriction_square(evals: Sequence[int], p: int) -> Fraction:
    """Square of a class on C_p from its values on u_1..u_{p-1}: v^T Q^{-1} v."""
    q = chain_form(p)
    x = solve_rational(q, list(evals))
    return sum(Fraction(v) * xi for v, xi in zip(evals, x))


def _boundary_residue(evals: Sequence[int], p: int) -> int:
    """Image of the class in H^2(boundary) = Z/p^2, in the basis where u_{p-1}* is 1."""
    q = chain_form(p)
    snf = smith_normal_form(q)
    mod = p * p
    if snf.diagonal[-1] != mod or any(d != 1 for d in snf.diagonal[:-1]):
        raise ArithmeticError(f"coker of the C_{p} form is not cyclic of order {mod}")
    last = snf.left.entries[-1]
    image = sum(a * v for a, v in zip(last, evals)) % mod
    gen = last[-1] % mod  # image of the dual of u_{p-1}
    return image * pow(gen, -1, mod) % mod


def sw3_lift_condition(evals: Sequence[int], p: int) -> bool:
    """Square 1-p on C_p and boundary restriction m*p in Z/p^2 with m = p-1 mod 2."""
    if len(evals) != p - 1:
        raise ValueError(f"need {p - 1} evaluations")
    if restriction_square(evals, p) != 1 - p:
        return False
    c = _boundary_residue(evals, p)
    if c % p:
        return False
    if p % 2:
        # m is only defined mod p; for odd p either parity is available
        return True
    return (c // p) % 2 == (p - 1) % 2


def characteristic_extensions(square: int, rank: int) -> list[tuple[int, ...]]:
    """Characteristic vectors of the diagonal lattice <-1>^rank with the given square.

    Enumerated over the box the square allows; entries of a characteristic
    vector are odd.
    """
    if rank == 0:
        return [()] if square == 0 else []
    bound = int((-square) ** 0.5) + 1 if square < 0 else 0
    odd = [x for x in range(-bound, bound + 1) if x % 2]
    return [c for c in product(odd, repeat=rank) if -sum(x * x for x in c) == square]


# -- comparison --------------------------------------------------------------


def sw_compare(a: BasicClassSet, b: BasicClassSet) -> SWComparison:
    if a.count != b.count:
        return SWComparison.DISTINCT_BY_COUNT
    if not (a.placeholder_values or b.placeholder_values):
        if Counter(x for _, x in a.classes) != Counter(x for _, x in b.classes):
            return SWComparison.DISTINCT_BY_VALUES
    if (a.e, a.sigma) == (b.e, b.sigma):
        m = max(a.slots, b.slots)
        if Counter((v.padded(m), x) for v, x in a.classes) == Counter((v.padded(m), x) for v, x in b.classes):
            return SWComparison.EQUAL
    return SWComparison.INCONCLUSIVE
