from fractions import Fraction

import pytest

from cork_calculus.knots import ONE, alexander_family
from cork_calculus.swalgebra import (
    BasicClassSet,
    BasicClassVector,
    EmbeddingProfile,
    RbdTag,
    SWComparison,
    beta_elliptic,
    blowup_formula,
    chain_form,
    characteristic_extensions,
    d_degree,
    knot_surgery_beta,
    rbd_lift_filter,
    rbd_transfer,
    restriction_square,
    sw3_lift_condition,
    sw_compare,
)
from oracles import binomial_support, elliptic_classes_bruteforce, inverse_quadratic


def _as_pairs(beta):
    return {(v.t, v.e) for v in beta.vectors()}


def test_beta_examples():
    assert beta_elliptic(2).vectors() == [BasicClassVector(0)]
    assert beta_elliptic(4, 2).count == 12
    assert [v.t for v in beta_elliptic(6).vectors()] == [-4, -2, 0, 2, 4]
    with pytest.raises(ValueError):
        beta_elliptic(1)


@pytest.mark.parametrize("convention", ["paper", "standard"])
@pytest.mark.parametrize("n,m", [(2, 0), (3, 1), (4, 2), (5, 0), (6, 3), (7, 2)])
def test_beta_matches_bruteforce(n, m, convention):
    assert _as_pairs(beta_elliptic(n, m, convention)) == elliptic_classes_bruteforce(n, m, convention)


@pytest.mark.parametrize("n", range(2, 10))
def test_standard_values_are_binomial(n):
    beta = beta_elliptic(n, 0, "standard")
    assert {v.t: x for v, x in beta.classes} == binomial_support(n)


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_odd_n_counts_differ_by_convention(n):
    assert beta_elliptic(n, 0, "paper").count == n - 2
    assert beta_elliptic(n, 0, "standard").count == n - 1
    assert beta_elliptic(n, 0, "paper").placeholder_values


def test_blowup_formula():
    b = blowup_formula(beta_elliptic(2))
    assert b.count == 2 and (b.e, b.sigma) == (25, -17)
    for m in range(5):
        assert beta_elliptic(2, m) == _iterate_blowup(beta_elliptic(2), m)


def _iterate_blowup(b, m):
    for _ in range(m):
        b = blowup_formula(b)
    return b


def test_d_degree():
    assert d_degree(BasicClassVector(2), 48, -32) == 0
    assert d_degree(BasicClassVector(0, (1,)), 25, -17) == 0
    assert d_degree(BasicClassVector(0), 24, -16) == 0
    with pytest.raises(ValueError):
        d_degree(BasicClassVector(0, (1,)), 24, -16)


def test_knot_surgery_beta():
    assert knot_surgery_beta(2, ONE) == beta_elliptic(2, 0, "standard")
    tref = knot_surgery_beta(2, alexander_family("torus_2q", 1))
    assert {v.t: x for v, x in tref.classes} == {-2: 1, 0: -1, 2: 1}
    for k in range(1, 6):
        assert knot_surgery_beta(2, alexander_family("torus_2q", k)).count == 2 * k + 1
    for n in range(2, 8):
        assert knot_surgery_beta(n, ONE, "standard") == beta_elliptic(n, 0, "standard")
    with pytest.raises(ValueError):
        knot_surgery_beta(3, ONE, "paper")


def test_knot_surgery_rejects_unnormalized():
    from cork_calculus.knots import LaurentPoly

    with pytest.raises(ValueError):
        knot_surgery_beta(2, LaurentPoly.from_dict({0: 2}))


def test_lift_filter_examples():
    beta = beta_elliptic(6, 2)
    prof = EmbeddingProfile.canonical(4, 2, 1)
    passing, failing = rbd_lift_filter(beta, prof)
    assert len(passing) == 20 and not failing
    bad = EmbeddingProfile(2, (0,), ((3, 0),))
    assert rbd_lift_filter(beta, bad)[0] == []
    mixed = EmbeddingProfile(3, (0, 0), ((0, 0), (3, 0)))
    assert len(rbd_lift_filter(beta, mixed)[0]) == 20
    with pytest.raises(ValueError):
        rbd_lift_filter(beta, EmbeddingProfile.canonical(2, 3, 0))


def test_rbd_transfer_and_count_lemma():
    beta = beta_elliptic(6, 2)
    t2 = rbd_transfer(beta, EmbeddingProfile.canonical(2, 2, 0))
    assert (t2.count, t2.e, t2.sigma) == (20, 73, -49)
    up = blowup_formula(t2)
    assert (up.count, up.e, up.sigma) == (40, 74, -50)
    t4 = _iterate_blowup(rbd_transfer(beta, EmbeddingProfile.canonical(4, 2, 1)), 3)
    assert (t4.count, t4.e, t4.sigma) == (160, 74, -50)
    for b in (t2, up, t4):
        assert all(d_degree(v, b.e, b.sigma) == 0 and v.has_characteristic_parity() for v in b.vectors())


def test_rbd_transfer_rejects_non_lifts():
    with pytest.raises(ValueError):
        rbd_transfer(beta_elliptic(4, 1), EmbeddingProfile(2, (0,), ((1,),)))


@pytest.mark.parametrize("p", range(2, 9))
def test_sw3_on_chain(p):
    q = chain_form(p).tolist()
    for sign in (1, -1):
        evals = [0] * (p - 2) + [sign * p]
        assert restriction_square(evals, p) == inverse_quadratic(q, evals) == Fraction(1 - p)
        assert sw3_lift_condition(evals, p)
    assert not sw3_lift_condition([0] * (p - 2) + [p - 1], p)


def test_characteristic_extensions():
    assert sorted(characteristic_extensions(-1, 1)) == [(-1,), (1,)]
    assert len(characteristic_extensions(-3, 3)) == 8
    assert characteristic_extensions(-2, 1) == []
    assert characteristic_extensions(0, 0) == [()]


def test_compare():
    a = knot_surgery_beta(2, alexander_family("torus_2q", 1))
    b = knot_surgery_beta(2, alexander_family("torus_2q", 2))
    assert sw_compare(BasicClassSet.empty(24, -16), a) is SWComparison.DISTINCT_BY_COUNT
    assert sw_compare(a, b) is SWComparison.DISTINCT_BY_COUNT
    assert sw_compare(a, a) is SWComparison.EQUAL
    c = BasicClassSet.build(24, -16, 0, {BasicClassVector(-2): 1, BasicClassVector(0): 1, BasicClassVector(2): 1})
    assert sw_compare(a, c) is SWComparison.DISTINCT_BY_VALUES


def test_serialization_roundtrip():
    t = rbd_transfer(beta_elliptic(6, 2), EmbeddingProfile.canonical(4, 2, 1))
    assert BasicClassSet.from_dict(t.to_dict()) == t
    tag = RbdTag(4, ((1, -1),))
    assert RbdTag.parse(str(tag)) == tag and tag.square == 2
    prof = EmbeddingProfile.canonical(3, 2, 0)
    assert EmbeddingProfile.from_dict(prof.to_dict()) == prof


def test_set_invariants_enforced():
    with pytest.raises(ValueError):
        BasicClassSet(24, -16, 0, ((BasicClassVector(0), 0),))
    with pytest.raises(ValueError):
        BasicClassSet(24, -16, 1, ((BasicClassVector(0), 1),))
