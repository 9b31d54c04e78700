import random

import pytest

from cork_calculus.exactlin import AbelianGroup
from cork_calculus.handlebody import (
    W_N_LEGENDRIAN_TB,
    Dot,
    HandlePresentation,
    LegendrianData,
    TwoHandle,
    blowdown_pres,
    blowup_pres,
    boundary_sum,
    dot_zero_swap,
    eliashberg_check,
    handle_slide,
    homology,
    normal_form,
    preset,
)
from generators import random_presentation, random_preset, random_slides, random_swappable
from oracles import chain_matrix, cofactor_det, determinantal_divisors

EMPTY = HandlePresentation("B4", 0, ())


def test_c3_chain_and_boundary():
    c3 = preset("Cp", 3)
    assert c3.linking_matrix().tolist() == [[-5, 1], [1, -2]]
    assert homology(c3).boundary_h1 == AbelianGroup(0, (9,))


@pytest.mark.parametrize("p", range(2, 11))
def test_c_p_boundary_order(p):
    h = homology(preset("Cp", p))
    assert h.boundary_h1.torsion_order == p * p == abs(cofactor_det(chain_matrix(p)))
    assert h.h2 == AbelianGroup(p - 1)
    assert h.intersection_form.definiteness == "negative"


def test_b_p():
    h = homology(preset("Bp", 2))
    assert h.h1 == AbelianGroup(0, (2,)) and h.boundary_h1 == AbelianGroup(0, (4,))
    for p in range(2, 8):
        assert homology(preset("Bp", p)).boundary_h1.torsion_order == p * p


@pytest.mark.parametrize("n", range(1, 11))
def test_w_n_is_point_like(n):
    for framing in (0, -1, 3):
        h = homology(preset("Wn", n, framing=framing))
        assert h.is_acyclic and h.boundary_h1.is_trivial and h.euler == 1


def test_w_family_and_w_mn():
    h = homology(preset("Wfamily", 1, 2, 3))
    assert h.is_acyclic and h.euler == 1
    wmn = homology(preset("Wmn", 1, 2))
    assert wmn.h1.is_trivial and wmn.h2 == AbelianGroup(1)


def test_d_p_opaque_handles():
    d = preset("Dp", 4)
    assert d.euler == preset("Cp", 4).euler + 2
    assert "contains:W3" in d.flags and "contains:W1,4" in d.flags


@pytest.mark.parametrize(
    "args", [("Wn", 0), ("Cp", 1), ("Bp", 1), ("Wmn", 0, 2), ("Wmn", 1, 1), ("Nope", 2), ("Wfamily",)]
)
def test_preset_errors(args):
    with pytest.raises(ValueError):
        preset(*args)


def test_empty_presentation():
    h = homology(EMPTY)
    assert h.is_acyclic and h.boundary_h1.is_trivial and h.euler == 1


def test_slide_example_and_inverse():
    p = HandlePresentation("d", 0, (TwoHandle(-1, (0, 0), ()), TwoHandle(-1, (0, 0), ())))
    s = handle_slide(p, 0, 1, 1)
    assert s.two_handles[0].framing == -2 and s.two_handles[1].framing == -1
    assert s.two_handles[0].linking[1] == -1 and s.two_handles[1].linking[0] == -1
    assert handle_slide(s, 0, 1, -1) == p


def test_slide_rejects_dots_and_self():
    w = preset("Wmn", 1, 2)
    with pytest.raises(ValueError):
        handle_slide(w, 0, Dot(0))
    with pytest.raises(ValueError):
        handle_slide(w, 0, 0)


def test_slides_preserve_invariants():
    rng = random.Random(3)
    for _ in range(200):
        pres = random_presentation(rng)
        before = homology(pres)
        for i, j, s in random_slides(rng, pres, rng.randint(1, 10)):
            pres = handle_slide(pres, i, j, s)
        after = homology(pres)
        assert before.intersection_form == after.intersection_form
        assert before.boundary_h1 == after.boundary_h1 and before.h1 == after.h1


def test_blowup_blowdown():
    b = blowup_pres(EMPTY)
    assert b.euler == 2 and b.two_handles[0].framing == -1
    c3 = preset("Cp", 3)
    f = homology(blowup_pres(c3)).intersection_form
    assert (f.rank, f.signature, f.parity) == (3, -3, "odd")
    assert blowdown_pres(blowup_pres(c3), 2) == c3
    with pytest.raises(ValueError):
        blowdown_pres(c3, 0)


def test_swap_on_w1():
    w1 = preset("Wn", 1)
    s = dot_zero_swap(w1, 0, 0)
    assert homology(s).boundary_h1.is_trivial
    assert dot_zero_swap(s, 0, 0) == w1
    assert s.euler == w1.euler


def test_swap_is_involution_on_random_presentations():
    rng = random.Random(5)
    for _ in range(200):
        pres, dot, k = random_swappable(rng)
        once = dot_zero_swap(pres, dot, k)
        assert normal_form(dot_zero_swap(once, dot, k)) == normal_form(pres)
        assert homology(once).boundary_h1 == homology(pres).boundary_h1


def test_swap_errors():
    with pytest.raises(ValueError):
        dot_zero_swap(preset("Wn", 1, framing=1), 0, 0)
    with pytest.raises(ValueError):
        dot_zero_swap(preset("Bp", 2), 0, 0)


def test_boundary_sum():
    w1 = preset("Wn", 1)
    assert boundary_sum([w1]) == w1
    s = boundary_sum([w1, preset("Wn", 2)])
    h = homology(s)
    assert h.is_acyclic and h.euler == 1 == w1.euler + w1.euler - 1
    c = homology(boundary_sum([preset("Cp", 2), preset("Cp", 2)]))
    assert c.boundary_h1 == AbelianGroup(0, (4, 4))
    ext = boundary_sum([preset("Cp", 2), preset("Cp", 2)]).extended_matrix().tolist()
    assert determinantal_divisors(ext) == [4, 4]


def test_eliashberg():
    one = HandlePresentation("u", 0, (TwoHandle(-1, (0,), ()),))
    assert eliashberg_check(one, LegendrianData((0,))) == (True,)
    zero = HandlePresentation("u", 0, (TwoHandle(0, (0,), ()),))
    assert eliashberg_check(zero, LegendrianData((0,))) == (False,)
    assert all(eliashberg_check(preset("Wn", 3), W_N_LEGENDRIAN_TB))
    with pytest.raises(ValueError):
        eliashberg_check(zero, LegendrianData(()))


def test_serialization_roundtrip():
    rng = random.Random(9)
    for _ in range(50):
        p = random_preset(rng)
        assert HandlePresentation.loads(p.dumps()) == p


def test_linking_must_be_symmetric():
    with pytest.raises(ValueError):
        HandlePresentation("bad", 0, (TwoHandle(0, (0, 1), ()), TwoHandle(0, (2, 0), ())))
