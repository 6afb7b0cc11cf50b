import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wfcrack import (InputDomainError, NumericalError, field_asymptotics, hutchinson_case, mellin_inverse,
                     mellin_state, params_from_eta, sif_closed_form, split_symmetric, three_point_case,
                     tip_expansion)
from wfcrack.fullfield import (delta_fn, delta_prime, linear_term_display, mellin_coefficients, pole_pair,
                               quadratic_term_display, rotation, s_tensor_display, series_terms)
from conftest import rel
from oracles import coefficients_by_solve, random_balanced_points

ROOT_2PI = math.sqrt(2 * math.pi)
ANGLES = (0.7, -2.2, math.pi, -math.pi, 0.0, -0.0)


@pytest.fixture(scope="module")
def three_point(request):
    p = params_from_eta(0.5, 0.2, 0.3)
    lc = three_point_case(1.0, 1.0, 0.5)
    return p, lc, tip_expansion(p, lc)


@pytest.fixture(scope="module")
def shear_jump():
    """Balanced point loads with a nonzero shear jump, so every jump integral is active."""
    p = params_from_eta(0.5, 0.2, 0.3)
    lc = random_balanced_points(random.Random(1))
    return p, lc, tip_expansion(p, lc)


def test_interface_poles(params):
    for n in (1, 2, 3):
        sp, sm = pole_pair(n, params)
        assert abs(delta_fn(sp, params)) < 1e-12 and abs(delta_fn(sm, params)) < 1e-12
    sp, sm = pole_pair(1, params)
    assert abs(delta_prime(sp, params) - 2j * math.pi * params.d_star) < 1e-10
    assert abs(delta_prime(sm, params) + 2j * math.pi * params.d_star) < 1e-10


@given(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_delta_without_mismatch_is_cos_squared(s):
    p = params_from_eta(0.0, 0.3, 0.3)
    assert abs(delta_fn(s, p) - np.cos(np.pi * s) ** 2) < 1e-12 * (1 + abs(np.cos(np.pi * s)) ** 2)


@settings(max_examples=40)
@given(st.floats(-0.45, 0.45), st.floats(-3, 3), st.floats(-0.95, 0.95), st.floats(0, 0.49), st.floats(0, 0.49),
       st.lists(st.floats(-2, 2), min_size=4, max_size=4))
def test_coefficients_solve_the_boundary_value_problem(re, im, eta, n1, n2, loads):
    s = complex(re, im)
    if abs(s) < 1e-3:
        s += 0.1
    p = params_from_eta(eta, n1, n2)
    C = mellin_coefficients(np.array([s]), np.array([loads], dtype=complex), p)[0]
    up, lo = coefficients_by_solve(s, *loads, p)
    scale = max(1.0, np.max(np.abs(up)), np.max(np.abs(lo)))
    assert np.max(np.abs(C[0] - up)) < 1e-10 * scale
    assert np.max(np.abs(C[1] - lo)) < 1e-10 * scale


def test_scaled_coefficients(params):
    s = np.array([0.1 + 30j])
    T = np.array([[1.0, 0.5, -0.2, 0.3]], dtype=complex)
    a = mellin_coefficients(s, T, params)
    b = mellin_coefficients(s, T, params, scaled=True)
    assert np.allclose(b * math.exp(-30 * math.pi), a, rtol=1e-12, atol=0)


def test_state_and_poles(params):
    lc = hutchinson_case(1.0, 0.0, 2.0)
    st_ = mellin_state(0.2 + 0.3j, params, lc)
    assert st_.load_transforms[0] == pytest.approx(-(2.0 ** (0.2 + 0.3j)), rel=1e-14)
    assert st_.delta == pytest.approx(delta_fn(0.2 + 0.3j, params))
    for bad in (pole_pair(1, params)[0], 0.0, 1.0):
        with pytest.raises(InputDomainError):
            mellin_state(bad, params, lc)


def test_residues_reproduce_closed_forms(three_point):
    p, lc, exp = three_point
    ref = sif_closed_form(p, lc)
    assert rel(exp.K, ref.K) < 1e-10 and rel(exp.A, ref.A) < 1e-10 and rel(exp.B, ref.B) < 1e-10
    assert max(exp.diagnostics.values()) < 1e-10


def test_t_stress_strain_compatibility(shear_jump):
    p, _, exp = shear_jump
    assert exp.T_plus != pytest.approx(exp.T_minus, rel=1e-3)
    up, lo = p.plus, p.minus
    assert (1 - up.nu) * exp.T_plus / up.mu == pytest.approx((1 - lo.nu) * exp.T_minus / lo.mu, rel=1e-12)


def test_translation_two_readings(shear_jump):
    _, _, exp = shear_jump
    assert exp.mean_integrals["jq_log"] != 0
    for shown in exp.w0_display:
        assert np.allclose(shown, exp.w0, rtol=1e-10, atol=1e-12 * np.max(np.abs(exp.w0)))


def test_symmetric_load_has_no_jump_terms(params):
    exp = tip_expansion(params, hutchinson_case(1.0, 0.4, 1.5))
    assert exp.T_plus == 0 and exp.T_minus == 0
    assert all(v == 0 for v in exp.jump_integrals.values())
    assert exp.mean_integrals["jq_log"] == 0
    stress, disp = series_terms(0.1, 1.0, exp, params)
    assert np.max(np.abs(stress[1])) < 1e-14 and np.max(np.abs(stress[3])) < 1e-14
    assert np.max(np.abs(disp[2])) < 1e-14 and np.max(np.abs(disp[4])) < 1e-14


@pytest.mark.parametrize("theta", ANGLES)
def test_residue_terms_equal_displays(shear_jump, theta):
    p, _, exp = shear_jump
    r = 0.3
    stress, disp = series_terms(r, theta, exp, p)
    sign = 1 if math.copysign(1.0, theta) > 0 else -1
    Q = rotation(theta)
    T = Q @ np.diag([exp.T(sign), 0.0]) @ Q.T
    assert np.allclose(stress[1], T, rtol=0, atol=1e-12)
    assert np.allclose(stress[3], r * s_tensor_display(theta, exp.jump_integrals | exp.mean_integrals, p),
                       rtol=0, atol=1e-12)
    integ = exp.jump_integrals | exp.mean_integrals
    x1, x2 = r * math.cos(theta), r * math.sin(theta)
    assert np.allclose(disp[0], Q @ exp.w0, rtol=0, atol=1e-12)
    assert np.allclose(disp[2], Q @ linear_term_display(x1, x2, integ, p, sign), rtol=0, atol=1e-12)
    assert np.allclose(disp[4], Q @ quadratic_term_display(x1, x2, integ, p, sign), rtol=0, atol=1e-12)


def test_leading_interface_traction(three_point):
    p, _, exp = three_point
    for r in (1e-3, 0.05):
        lead = series_terms(r, 0.0, exp, p)[0][0]
        want = exp.K / ROOT_2PI * r ** complex(-0.5, p.epsilon)
        assert abs(complex(lead[1, 1], lead[0, 1]) - want) < 1e-12 * abs(want)


def test_leading_opening(three_point):
    p, _, exp = three_point
    eps = p.epsilon
    r = 0.02
    up = series_terms(r, math.pi, exp, p)[1][1]
    lo = series_terms(r, -math.pi, exp, p)[1][1]
    jump = up - lo
    want = -p.b / ((0.5 + 1j * eps) * math.cosh(math.pi * eps)) * exp.K / ROOT_2PI * r ** complex(0.5, eps)
    assert abs(complex(jump[1], jump[0]) - want) < 1e-12 * abs(want)


@pytest.mark.parametrize("theta", (0.4, -2.9, math.pi))
def test_polynomial_blocks_are_homogeneous(shear_jump, theta):
    p, _, exp = shear_jump
    d1 = series_terms(0.1, theta, exp, p)[1]
    d2 = series_terms(0.2, theta, exp, p)[1]
    assert np.allclose(d2[2], 2 * d1[2], rtol=1e-12, atol=1e-16)
    assert np.allclose(d2[4], 4 * d1[4], rtol=1e-12, atol=1e-16)
    s1 = series_terms(0.1, theta, exp, p)[0]
    s2 = series_terms(0.2, theta, exp, p)[0]
    assert np.allclose(s2[3], 2 * s1[3], rtol=1e-12, atol=1e-16)
    assert np.allclose(s2[1], s1[1], rtol=1e-12, atol=1e-16)


def test_series_and_inverse_converge_together(three_point):
    p, lc, exp = three_point
    errs = []
    for r in (0.04, 0.02, 0.01):
        inv = mellin_inverse(r, 0.9, p, lc)
        ser = field_asymptotics(r, 0.9, 5, exp, p)[0]
        errs.append(np.max(np.abs(ser - inv.stress)))
    # first neglected term is of order r^2
    assert errs[0] / errs[1] > 3 and errs[1] / errs[2] > 3


@pytest.mark.parametrize("r", [0.05, 0.3, 4.0])
def test_inverse_crack_faces_are_traction_free(three_point, r):
    p, lc, _ = three_point
    for theta in (math.pi, -math.pi):
        sig = mellin_inverse(r, theta, p, lc, quantity="stress").stress
        assert abs(sig[1, 1]) < 1e-10 and abs(sig[0, 1]) < 1e-10


def test_inverse_tip_displacement(shear_jump):
    p, lc, exp = shear_jump
    radii = (1e-2, 1e-4, 1e-6, 1e-8)
    for theta in (0.3, -1.4, math.pi):
        v0 = rotation(theta) @ exp.w0
        u = [mellin_inverse(r, theta, p, lc, quantity="displacement").displacement for r in radii]
        # u - V0 = O(r^(1/2)) and u - V0 - V1/2 = O(r), so u(0, theta) = V0
        half = [np.max(np.abs(ui - v0)) / r ** 0.5 for ui, r in zip(u, radii)]
        one = [np.max(np.abs(ui - field_asymptotics(r, theta, 1, exp, p)[1])) / r for ui, r in zip(u, radii)]
        assert max(half) < 3 * min(half)
        assert max(one) < 1.5 * min(one)


def test_inverse_far_field_decay(three_point):
    p, lc, _ = three_point
    a = 1.0
    s1 = np.max(np.abs(mellin_inverse(1e3 * a, 0.5, p, lc, quantity="stress").stress))
    s2 = np.max(np.abs(mellin_inverse(2e3 * a, 0.5, p, lc, quantity="stress").stress))
    # balanced loads leave r^(-3/2) at infinity, faster than r^(-1)
    assert math.log2(s1 / s2) > 1.2


def test_inverse_domain_errors(three_point):
    p, lc, _ = three_point
    with pytest.raises(InputDomainError):
        mellin_inverse(0.1, 0.0, p, lc, omega=-0.1)
    with pytest.raises(InputDomainError):
        mellin_inverse(0.1, 0.0, p, lc, omega=0.6, quantity="stress")
    with pytest.raises(InputDomainError):
        mellin_inverse(-1.0, 0.0, p, lc)
    with pytest.raises(NumericalError):
        mellin_inverse(1.0, math.pi, p, lc, quantity="stress", t_max=200.0)


def test_expansion_needs_balance(params):
    _, skew = split_symmetric(three_point_case(1.0, 1.0, 0.5))
    sym_only, _ = split_symmetric(hutchinson_case(1.0, 0.0, 1.0))
    tip_expansion(params, sym_only)
    from wfcrack import Face, FaceTraction, LoadCase, Mode, PointForce
    lone = LoadCase(Mode.PLANE_STRAIN, (FaceTraction(Face.UPPER, PointForce(-1.0, (0.0, 1.0))),),
                    allow_unbalanced=True)
    with pytest.raises(InputDomainError):
        tip_expansion(params, lone)
    with pytest.raises(InputDomainError):
        field_asymptotics(0.1, 0.0, 6, tip_expansion(params, skew), params)


@settings(max_examples=8)
@given(st.integers(0, 10_000), st.floats(-0.95, 0.95))
def test_residue_K_matches_closed_form_on_random_loads(seed, eta):
    p = params_from_eta(eta, 0.2, 0.3)
    lc = random_balanced_points(random.Random(seed))
    exp = tip_expansion(p, lc)
    ref = sif_closed_form(p, lc)
    assert abs(exp.K - ref.K) < 1e-10 * max(1.0, abs(ref.K))
