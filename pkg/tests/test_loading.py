import numpy as np
import pytest
from hypothesis import given, strategies as st

from wfcrack import (Face, FaceTraction, InputDomainError, LoadCase, Mode, PointForce, check_balance,
                     decompose, hutchinson_case, split_symmetric, three_point_case)
from wfcrack.loading import SmoothTraction, r_to_x1, x1_to_r
from oracles import random_balanced_points


def _poly(c):
    return lambda x: np.stack([0 * np.asarray(x), np.polyval(c, x)], axis=-1)


def test_equal_faces_are_purely_symmetric():
    dec = decompose(hutchinson_case(1.0, 0.0, 2.0))
    assert set(dec.sym_atoms) == {-2.0}
    assert np.array_equal(dec.sym_atoms[-2.0], [0.0, -1.0])
    assert dec.skew_atoms == {}


def test_three_point_split():
    dec = decompose(three_point_case(1.0, 1.0, 0.5))
    assert np.array_equal(dec.sym_atoms[-1.0], [0.0, -0.5])
    assert np.array_equal(dec.sym_atoms[-1.5], [0.0, -0.25])
    assert np.array_equal(dec.sym_atoms[-0.5], [0.0, -0.25])
    assert np.array_equal(dec.skew_atoms[-1.0], [0.0, -1.0])
    assert np.array_equal(dec.skew_atoms[-1.5], [0.0, 0.5])
    assert np.array_equal(dec.skew_atoms[-0.5], [0.0, 0.5])


def test_one_sided_smooth_load_splits_in_half():
    f = _poly([1.0, 3.0, 2.0])
    lc = LoadCase(Mode.PLANE_STRAIN, (FaceTraction(Face.UPPER, SmoothTraction(f, -3.0, -1.0)),),
                  allow_unbalanced=True)
    dec = decompose(lc)
    x = np.linspace(-3.0, -1.0, 7)
    assert np.allclose(dec.evaluate("sym", x), 0.5 * f(x), rtol=0, atol=1e-15)
    assert np.allclose(dec.evaluate("skew", x), f(x), rtol=0, atol=1e-15)
    assert np.all(dec.evaluate("sym", np.array([-0.5, -4.0])) == 0)


def test_balance_reports():
    rep = check_balance(three_point_case(1.0, 1.0, 0.5))
    assert rep.balanced and np.all(rep.force == 0) and rep.moment == 0
    one = LoadCase(Mode.PLANE_STRAIN, (FaceTraction(Face.UPPER, PointForce(-1.0, (0.0, 2.5))),),
                   allow_unbalanced=True)
    rep = check_balance(one)
    assert not rep.balanced and rep.force[1] == 2.5
    assert check_balance(hutchinson_case(1.0, 0.3, 1.0)).balanced
    with pytest.raises(InputDomainError):
        LoadCase(Mode.PLANE_STRAIN, one.tractions)


def test_three_point_domain():
    b0 = decompose(three_point_case(1.0, 1.0, 0.0))
    assert np.array_equal(b0.reconstruct(Face.UPPER)[-1.0], [0.0, -1.0])
    assert np.array_equal(b0.reconstruct(Face.LOWER)[-1.0], [0.0, -1.0])
    assert three_point_case(1.0, 1.0, 0.5).gap == 0.5
    with pytest.raises(InputDomainError):
        three_point_case(1.0, 1.0, 1.0)


def test_invalid_tractions_rejected():
    with pytest.raises(InputDomainError):
        PointForce(0.0, (1.0, 0.0))
    with pytest.raises(InputDomainError):
        SmoothTraction(_poly([1.0]), -1.0, 0.0)
    with pytest.raises(InputDomainError):
        LoadCase(Mode.MODE_III, (FaceTraction(Face.UPPER, PointForce(-1.0, (1.0, 0.0))),), allow_unbalanced=True)
    with pytest.raises(InputDomainError):
        LoadCase(Mode.PLANE_STRAIN, hutchinson_case(1.0, 0.0, 1.0).tractions, gap=2.0)


def test_smooth_balance_by_quadrature():
    # p2 = x (x+2) on [-2, -1] both faces plus matching moment-free pieces: self-balanced by symmetry
    f = _poly([1.0, 2.0, 0.0])
    lc = LoadCase(Mode.PLANE_STRAIN, (FaceTraction(Face.UPPER, SmoothTraction(f, -2.0, -1.0)),
                                      FaceTraction(Face.LOWER, SmoothTraction(f, -2.0, -1.0))))
    assert check_balance(lc).balanced


def test_split_symmetric_adds_back():
    lc = three_point_case(1.0, 1.0, 0.5)
    sym, skew = split_symmetric(lc)
    full = decompose(lc)
    ds, dk = decompose(sym), decompose(skew)
    assert ds.skew_atoms == {} and dk.sym_atoms == {}
    for pos in full.sym_atoms:
        assert np.array_equal(ds.sym_atoms[pos], full.sym_atoms[pos])
    for pos in full.skew_atoms:
        assert np.array_equal(dk.skew_atoms[pos], full.skew_atoms[pos])


def test_shift_moves_loads_away_from_tip():
    lc = hutchinson_case(1.0, 0.0, 1.0).shifted(0.25)
    assert lc.gap == 1.25 and lc.points[0].load.position == -1.25


@given(st.integers(0, 10_000))
def test_decompose_reconstruct_identity(seed):
    import random
    lc = random_balanced_points(random.Random(seed))
    dec = decompose(lc)
    for face in (Face.UPPER, Face.LOWER):
        want = {}
        for tr in lc.points:
            if tr.face is face:
                want[tr.load.position] = want.get(tr.load.position, 0) + np.asarray(tr.load.components)
        got = dec.reconstruct(face)
        for pos, val in want.items():
            if np.any(val != 0):
                assert np.allclose(got[pos], val, rtol=0, atol=1e-15)
        assert set(got) <= set(want)


@given(st.floats(1e-6, 1e6))
def test_radial_round_trip(r):
    assert r_to_x1(r) == -r and x1_to_r(r_to_x1(r)) == r
