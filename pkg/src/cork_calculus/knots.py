"""Integer Laurent polynomials and Alexander polynomials of knots.

Knots enter only as data: a Seifert matrix, or a member of one of two
parametric families. Nothing here looks at a diagram.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactlin import IntMatrix, determinant

__all__ = [
    "LaurentPoly",
    "alexander_from_seifert",
    "alexander_family",
    "ONE",
    "T",
]


@dataclass(frozen=True)
class LaurentPoly:
    """Sparse integer Laurent polynomial in one variable ``t``.

    ``terms`` is sorted by exponent and never contains a zero coefficient.
    """

    terms: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        exps = [e for e, _ in self.terms]
        if exps != sorted(set(exps)) or any(c == 0 for _, c in self.terms):
            raise ValueError("terms must be sorted, unique and nonzero; use LaurentPoly.from_dict")

    @classmethod
    def from_dict(cls, coeffs: Mapping[int, int]) -> LaurentPoly:
        return cls(tuple(sorted((int(e), int(c)) for e, c in coeffs.items() if c)))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]]) -> LaurentPoly:
        acc: dict[int, int] = {}
        for e, c in pairs:
            acc[int(e)] = acc.get(int(e), 0) + int(c)
        return cls.from_dict(acc)

    @classmethod
    def const(cls, c: int) -> LaurentPoly:
        return cls.from_dict({0: c})

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> LaurentPoly:
        return cls.from_dict({exp: coeff})

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    def coefficient(self, exp: int) -> int:
        return self.as_dict().get(exp, 0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def support_size(self) -> int:
        return len(self.terms)

    @property
    def min_degree(self) -> int:
        return self.terms[0][0]

    @property
    def max_degree(self) -> int:
        return self.terms[-1][0]

    def __add__(self, other: LaurentPoly | int) -> LaurentPoly:
        other = _coerce(other)
        acc = self.as_dict()
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return LaurentPoly.from_dict(acc)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: LaurentPoly | int) -> LaurentPoly:
        return self + (-_coerce(other))

    def __rsub__(self, other: int) -> LaurentPoly:
        return _coerce(other) - self

    def __mul__(self, other: LaurentPoly | int) -> LaurentPoly:
        other = _coerce(other)
        acc: dict[int, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly.from_dict(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            if len(self.terms) == 1 and abs(self.terms[0][1]) == 1:
                e, c = self.terms[0]
                return LaurentPoly.monomial(e * k, c ** abs(k))
            raise ValueError("only units have negative powers")
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, x: int | Fraction) -> Fraction | int:
        if x == 0 and self.terms and self.min_degree < 0:
            raise ZeroDivisionError("negative exponent evaluated at 0")
        total: Fraction | int = 0
        for e, c in self.terms:
            total += c * (Fraction(x) ** e if e < 0 else x**e)
        if isinstance(total, Fraction) and total.denominator == 1:
            return int(total)
        return total

    def substitute(self, k: int) -> LaurentPoly:
        """t -> t**k (k = 2 doubles every exponent)."""
        if k == 0:
            return LaurentPoly.const(sum(c for _, c in self.terms))
        return LaurentPoly.from_dict({e * k: c for e, c in self.terms})

    def shift(self, m: int) -> LaurentPoly:
        """Multiply by t**m."""
        return LaurentPoly(tuple((e + m, c) for e, c in self.terms))

    def is_symmetric(self) -> bool:
        d = self.as_dict()
        return all(d.get(-e) == c for e, c in d.items())

    def normalized(self) -> LaurentPoly:
        """The representative ``+-t**m * self`` with P(t) = P(1/t) and P(1) = 1.

        Raises ValueError when no such representative exists.
        """
        if self.is_zero:
            raise ValueError("zero polynomial cannot be normalized")
        span = self.min_degree + self.max_degree
        if span % 2:
            raise ValueError(f"{self} has odd degree span; no symmetric representative")
        p = self.shift(-span // 2)
        at_one = p(1)
        if at_one == -1:
            p = -p
        elif at_one != 1:
            raise ValueError(f"{self} evaluates to {at_one} at t=1; not an Alexander polynomial")
        if not p.is_symmetric():
            raise ValueError(f"{self} is not symmetric up to units")
        return p

    def is_alexander_normalized(self) -> bool:
        return not self.is_zero and self.is_symmetric() and self(1) == 1

    def to_pairs(self) -> list[list[int]]:
        return [[e, c] for e, c in self.terms]

    def dumps(self) -> str:
        return json.dumps(self.to_pairs())

    @classmethod
    def loads(cls, text: str) -> LaurentPoly:
        return cls.from_pairs(json.loads(text))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = ""
        for e, c in reversed(self.terms):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "t" if e == 1 else f"t^{e}"
                body = var if mag == 1 else f"{mag}*{var}"
            if not out:
                out = body if c > 0 else f"-{body}"
            else:
                out += f" + {body}" if c > 0 else f" - {body}"
        return out


def _coerce(x: LaurentPoly | int) -> LaurentPoly:
    return x if isinstance(x, LaurentPoly) else LaurentPoly.const(int(x))


ONE = LaurentPoly(((0, 1),))
T = LaurentPoly(((1, 1),))


def _interpolate(points: Sequence[tuple[int, int]]) -> LaurentPoly:
    """Exact Lagrange interpolation through integer points; result must be integral."""
    coeffs = [Fraction(0)] * len(points)
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k, b in enumerate(basis):
            coeffs[k] += yi * b / denom
    if any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError("interpolated polynomial is not integral")
    return LaurentPoly.from_dict({k: int(c) for k, c in enumerate(coeffs)})


def alexander_from_seifert(v: IntMatrix | Sequence[Sequence[int]]) -> LaurentPoly:
    """Normalized Alexander polynomial det(V - t V^T) of a Seifert matrix.

    The determinant is a polynomial of degree at most dim V; it is sampled at
    integer points with the exact determinant and interpolated.
    """
    if not isinstance(v, IntMatrix):
        v = IntMatrix.of(v)
    if not v.is_square() or v.rows % 2:
        raise ValueError("Seifert matrix must be square of even size")
    n = v.rows
    if n == 0:
        return ONE
    vt = v.T
    pairing = IntMatrix.of([[v[i, j] - vt[i, j] for j in range(n)] for i in range(n)])
    if abs(determinant(pairing)) != 1:
        raise ValueError("V - V^T is not unimodular; not a knot Seifert matrix")
    samples = []
    for x in range(n + 1):
        m = IntMatrix.of([[v[i, j] - x * vt[i, j] for j in range(n)] for i in range(n)])
        samples.append((x, determinant(m)))
    return _interpolate(samples).normalized()


def alexander_family(kind: str, k: int) -> LaurentPoly:
    """Alexander polynomials of two standard knot families.

    ``torus_2q``: the (2, 2k+1) torus knot, sum of (-1)^(k-j) t^j for |j| <= k.
    ``twist``: the k-twist knot, -k t + (2k+1) - k t^-1 (k = 1 is the figure-eight).
    """
    if k < 1:
        raise ValueError(f"family index must be >= 1, got {k}")
    if kind == "torus_2q":
        return LaurentPoly.from_dict({j: (-1) ** (k - j) for j in range(-k, k + 1)})
    if kind == "twist":
        return LaurentPoly.from_dict({1: -k, 0: 2 * k + 1, -1: -k})
    raise ValueError(f"unknown knot family {kind!r}")
