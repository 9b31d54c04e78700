import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cork_calculus.exactlin import (
    AbelianGroup,
    IntMatrix,
    cokernel,
    determinant,
    form_invariants,
    kernel_basis,
    smith_normal_form,
    solve_rational,
)
from oracles import chain_matrix, cofactor_det, determinantal_divisors, sylvester_signature


def test_snf_identity():
    r = smith_normal_form(IntMatrix.identity(2))
    assert r.diagonal == (1, 1) and r.rank == 2


def test_snf_diag_2_3():
    r = smith_normal_form(IntMatrix.diagonal([2, 3]))
    assert r.diagonal == (1, 6)
    assert determinantal_divisors([[2, 0], [0, 3]]) == [1, 6]


def test_snf_empty():
    r = smith_normal_form(IntMatrix.zeros(0, 0))
    assert r.diagonal == () and r.rank == 0


def test_snf_reconstruction_and_unimodularity():
    rng = random.Random(7)
    for _ in range(300):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        m = IntMatrix.of([[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)], cols)
        r = smith_normal_form(m)
        assert r.left @ m @ r.right == r.diagonal_matrix()
        assert abs(determinant(r.left)) == 1 and abs(determinant(r.right)) == 1
        assert all(b % a == 0 for a, b in zip(r.diagonal, r.diagonal[1:]) if a)
        assert list(r.diagonal[: r.rank]) == determinantal_divisors(m.tolist())


def test_snf_pivot_rule_is_deterministic():
    m = IntMatrix.of([[4, 6], [6, 9]])
    assert smith_normal_form(m) == smith_normal_form(m)


def test_determinant_examples():
    assert determinant(IntMatrix.of([[-4]])) == -4
    assert determinant(IntMatrix.of([[-5, 1], [1, -2]])) == 9
    with pytest.raises(ValueError):
        determinant(IntMatrix.zeros(2, 3))


@pytest.mark.parametrize("p", range(2, 9))
def test_chain_determinant_matches_recurrence(p):
    expected = (-1) ** (p - 1) * p * p
    assert determinant(IntMatrix.of(chain_matrix(p))) == expected == cofactor_det(chain_matrix(p))


def test_determinant_against_cofactor_oracle():
    rng = random.Random(11)
    for _ in range(2000):
        n = rng.randint(1, 4)
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        m = IntMatrix.of(rows)
        d = determinant(m)
        assert d == cofactor_det(rows)
        r = smith_normal_form(m)
        prod = 1
        for x in r.diagonal:
            prod *= x
        assert abs(d) == (prod if r.rank == n else 0)


def test_large_entries_do_not_overflow():
    m = IntMatrix.of(chain_matrix(50))
    assert determinant(m) == -2500
    assert cokernel(m) == AbelianGroup(0, (2500,))


def test_form_examples():
    f = form_invariants(IntMatrix.diagonal([1, -1]))
    assert (f.rank, f.signature, f.parity, f.definiteness) == (2, 0, "odd", "indefinite")
    f = form_invariants(IntMatrix.of([[-5, 1], [1, -2]]))
    assert (f.rank, f.signature, f.parity, f.definiteness) == (2, -2, "odd", "negative")
    f = form_invariants(IntMatrix.diagonal([1] * 3 + [-1] * 20))
    assert (f.rank, f.signature, f.parity) == (23, -17, "odd")


def test_form_zero_diagonal_and_degenerate():
    h = form_invariants(IntMatrix.of([[0, 1], [1, 0]]))
    assert (h.signature, h.parity, h.definiteness) == (0, "even", "indefinite")
    d = form_invariants(IntMatrix.of([[1, 1], [1, 1]]))
    assert (d.definiteness, d.signature, d.nullity) == ("degenerate", 1, 1)
    with pytest.raises(ValueError):
        form_invariants(IntMatrix.of([[0, 1], [0, 0]]))


def test_signature_matches_sylvester_oracle():
    for p in range(2, 8):
        q = chain_matrix(p)
        assert form_invariants(IntMatrix.of(q)).signature == sylvester_signature(q) == -(p - 1)


def _unimodular(rng, n):
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(6):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        c = rng.randint(-2, 2)
        for k in range(n):
            u[i][k] += c * u[j][k]
    return IntMatrix.of(u)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5), st.integers(0, 10**6))
def test_signature_congruence_invariant(n, seed):
    rng = random.Random(seed)
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            a[i][j] = a[j][i] = rng.randint(-4, 4)
    m = IntMatrix.of(a)
    u = _unimodular(rng, n)
    f, g = form_invariants(m), form_invariants(u.T @ m @ u)
    assert (f.signature, f.parity, f.nullity) == (g.signature, g.parity, g.nullity)


def test_kernel_and_cokernel():
    m = IntMatrix.of([[1, 1, 0]], 3)
    k = kernel_basis(m)
    assert k.cols == 2 and (m @ k) == IntMatrix.zeros(1, 2)
    assert cokernel(IntMatrix.diagonal([2, 0])) == AbelianGroup(1, (2,))
    assert str(AbelianGroup(2, (4,))) == "Z^2 + Z/4" and str(AbelianGroup(0)) == "0"


def test_solve_rational():
    x = solve_rational(IntMatrix.of([[-5, 1], [1, -2]]), [0, 3])
    assert [int(v * 9) for v in x] == [-3, -15]
