"""Exact integer linear algebra.

Everything here works on Python integers (and ``Fraction`` where a rational
pivot is unavoidable), so results never depend on floating point and never
overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "IntMatrix",
    "SNFResult",
    "FormInvariants",
    "AbelianGroup",
    "smith_normal_form",
    "determinant",
    "form_invariants",
    "kernel_basis",
    "cokernel",
    "solve_rational",
]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix. A 0x0 (or 0xk) matrix is allowed."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entries do not match the stated shape")
        for row in self.entries:
            for x in row:
                if not isinstance(x, int) or isinstance(x, bool):
                    raise TypeError(f"non-integer entry {x!r}")

    @classmethod
    def of(cls, rows: Iterable[Iterable[int]], cols: int | None = None) -> IntMatrix:
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> IntMatrix:
        n = len(values)
        return cls(n, n, tuple(tuple(values[i] if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def block_diagonal(cls, blocks: Sequence[IntMatrix]) -> IntMatrix:
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = [[0] * cols for _ in range(rows)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[r0 + i][c0 + j] = b.entries[i][j]
            r0 += b.rows
            c0 += b.cols
        return cls.of(out, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix.of(zip(*self.entries), self.rows) if self.rows else IntMatrix.zeros(self.cols, 0)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.entries[i][j] == self.entries[j][i] for i in range(self.rows) for j in range(i)
        )

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols_b = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix.of(
            ([sum(a * b for a, b in zip(row, col)) for col in cols_b] for row in self.entries),
            other.cols,
        )

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> IntMatrix:
        return IntMatrix.of(([self.entries[i][j] for j in cols] for i in rows), len(cols))

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in self.entries) + "]"


@dataclass(frozen=True)
class SNFResult:
    """``left @ M @ right`` equals the rows x cols matrix with ``diagonal`` on its diagonal."""

    diagonal: tuple[int, ...]
    rank: int
    left: IntMatrix
    right: IntMatrix

    def diagonal_matrix(self) -> IntMatrix:
        rows, cols = self.left.rows, self.right.cols
        return IntMatrix.of(
            ([self.diagonal[i] if i == j else 0 for j in range(cols)] for i in range(rows)), cols
        )


def _swap_rows(a: list[list[int]], i: int, j: int) -> None:
    a[i], a[j] = a[j], a[i]


def _swap_cols(a: list[list[int]], i: int, j: int) -> None:
    for row in a:
        row[i], row[j] = row[j], row[i]


def _add_row(a: list[list[int]], dst: int, src: int, q: int) -> None:
    # row[dst] += q * row[src]
    rs, rd = a[src], a[dst]
    for k in range(len(rd)):
        rd[k] += q * rs[k]


def _add_col(a: list[list[int]], dst: int, src: int, q: int) -> None:
    for row in a:
        row[dst] += q * row[src]


def _min_pivot(a: list[list[int]], s: int) -> tuple[int, int] | None:
    best = None
    best_abs = 0
    for i in range(s, len(a)):
        row = a[i]
        for j in range(s, len(row)):
            v = abs(row[j])
            if v and (best is None or v < best_abs):
                best, best_abs = (i, j), v
    return best


def smith_normal_form(m: IntMatrix) -> SNFResult:
    """Smith normal form with unimodular transforms.

    Pivot rule: smallest nonzero absolute value in the active block, ties broken
    by lowest (row, column) index. The diagonal has ``min(rows, cols)`` entries,
    trailing zeros included, and each entry divides the next.
    """
    a = m.tolist()
    nr, nc = m.rows, m.cols
    u = IntMatrix.identity(nr).tolist()
    # V is tracked transposed so column operations become row operations on it
    vt = IntMatrix.identity(nc).tolist()
    diagonal: list[int] = []

    for s in range(min(nr, nc)):
        while True:
            piv = _min_pivot(a, s)
            if piv is None:
                break
            i, j = piv
            if i != s:
                _swap_rows(a, s, i)
                _swap_rows(u, s, i)
            if j != s:
                _swap_cols(a, s, j)
                _swap_rows(vt, s, j)
            p = a[s][s]
            clean = True
            for i in range(s + 1, nr):
                q = a[i][s] // p
                if q:
                    _add_row(a, i, s, -q)
                    _add_row(u, i, s, -q)
                if a[i][s]:
                    clean = False
            for j in range(s + 1, nc):
                q = a[s][j] // p
                if q:
                    _add_col(a, j, s, -q)
                    _add_row(vt, j, s, -q)
                if a[s][j]:
                    clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(s + 1, nr) for j in range(s + 1, nc) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            _add_row(a, s, bad, 1)
            _add_row(u, s, bad, 1)
        if a[s][s] < 0:
            a[s] = [-x for x in a[s]]
            u[s] = [-x for x in u[s]]
        diagonal.append(a[s][s])

    rank = sum(1 for d in diagonal if d)
    return SNFResult(
        diagonal=tuple(diagonal),
        rank=rank,
        left=IntMatrix.of(u, nr),
        right=IntMatrix.of(vt, nc).T if nc else IntMatrix.zeros(0, 0),
    )


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if not m.is_square():
        raise ValueError(f"determinant needs a square matrix, got {m.shape}")
    n = m.rows
    if n == 0:
        return 1
    a = m.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            _swap_rows(a, k, swap)
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class FormInvariants:
    rank: int
    signature: int
    parity: str  # "even" | "odd"
    definiteness: str  # "positive" | "negative" | "indefinite" | "degenerate"
    b_plus: int
    b_minus: int
    nullity: int

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "signature": self.signature,
            "parity": self.parity,
            "definiteness": self.definiteness,
            "b_plus": self.b_plus,
            "b_minus": self.b_minus,
            "nullity": self.nullity,
        }


def _congruence_pivots(m: IntMatrix) -> list[Fraction]:
    """Diagonal of a rational congruence diagonalization (nonzero part only)."""
    n = m.rows
    a = [[Fraction(x) for x in row] for row in m.entries]
    pivots: list[Fraction] = []
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][i] != 0), None)
        if p is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if pair is None:
                break
            # all remaining diagonal entries vanish: x_i -> x_i + x_j gives 2*a_ij on the diagonal
            i, j = pair
            for c in range(n):
                a[i][c] += a[j][c]
            for r in range(n):
                a[r][i] += a[r][j]
            p = i
        if p != k:
            a[k], a[p] = a[p], a[k]
            for row in a:
                row[k], row[p] = row[p], row[k]
        d = a[k][k]
        pivots.append(d)
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] / d
                for c in range(n):
                    a[i][c] -= f * a[k][c]
                for r in range(n):
                    a[r][i] -= f * a[r][k]
    return pivots


def form_invariants(m: IntMatrix) -> FormInvariants:
    """Rank, signature, parity and definiteness of a symmetric integer form.

    For a degenerate form the signature is that of its nondegenerate part.
    The empty form counts as (vacuously) positive definite and even.
    """
    if not m.is_symmetric():
        raise ValueError("form_invariants needs a symmetric matrix")
    pivots = _congruence_pivots(m)
    b_plus = sum(1 for d in pivots if d > 0)
    b_minus = len(pivots) - b_plus
    nullity = m.rows - len(pivots)
    parity = "even" if all(m.entries[i][i] % 2 == 0 for i in range(m.rows)) else "odd"
    if nullity:
        definiteness = "degenerate"
    elif b_minus == 0:
        definiteness = "positive"
    elif b_plus == 0:
        definiteness = "negative"
    else:
        definiteness = "indefinite"
    return FormInvariants(m.rows, b_plus - b_minus, parity, definiteness, b_plus, b_minus, nullity)


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of ``{x : m @ x = 0}`` (a saturated sublattice)."""
    snf = smith_normal_form(m)
    keep = list(range(snf.rank, m.cols))
    return snf.right.submatrix(range(m.cols), keep)


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group Z^free_rank + sum of Z/t for t in torsion."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def torsion_order(self) -> int:
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


def cokernel(m: IntMatrix) -> AbelianGroup:
    """Z^rows / image(m)."""
    snf = smith_normal_form(m)
    torsion = tuple(d for d in snf.diagonal if d > 1)
    return AbelianGroup(m.rows - snf.rank, torsion)


def solve_rational(m: IntMatrix, b: Sequence[int]) -> list[Fraction]:
    """Solve ``m x = b`` over Q for square nonsingular ``m``."""
    if not m.is_square():
        raise ValueError("solve_rational needs a square matrix")
    n = m.rows
    if len(b) != n:
        raise ValueError("right-hand side has the wrong length")
    a = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(m.entries)]
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            raise ValueError("matrix is singular")
        a[k], a[p] = a[p], a[k]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k] / a[k][k]
                for c in range(k, n + 1):
                    a[i][c] -= f * a[k][c]
    return [a[i][n] / a[i][i] for i in range(n)]
