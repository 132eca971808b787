import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cmeig.ba import (
    SeriesExpansion,
    check_antisymmetry,
    check_shift_invariance,
    check_vanishing,
    psi_coeffs,
    psi_eval,
    psi_leading_closed,
    psi_native,
    residue_constant,
    vanishing_sum,
    varphi2_coeff,
    varphi_coeffs,
    varphi_eval,
    varphi_eval_batch,
    varphi_leading_closed,
)
from cmeig.errors import DomainError, PoleError, PreconditionError
from cmeig.params import build_params, rel_residual, weight_vectors
from cmeig.quadrature import ContourSpec, contour_integral, varphi2_contour

from conftest import separated


def test_base_case_is_plane_wave():
    P = build_params(2.5, 2)
    assert varphi_eval(P, [0.3], [-0.7]) == pytest.approx(np.exp(2j * np.pi * 0.3 * -0.7 / 2.5))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_varphi2_equals_coefficient_sum(m, rng):
    P = build_params(2.5, m)
    for _ in range(5):
        x, y = separated(rng, 2), rng.uniform(-1, 1, 2)
        ref = sum(
            np.exp(2j * np.pi * np.dot(x, y) / P.a) * varphi2_coeff(P, l, x)
            * np.exp(2 * np.pi * ((m - 1) / 2 - l) * (y[0] - y[1]) / P.a)
            for l in range(m)
        )
        assert rel_residual(varphi_eval(P, x, y), ref) < 1e-12


def test_varphi_eval_matches_contour_at_fixed_point():
    P = build_params(2.5, 2)
    x, y = [0.7, 0.1], [0.3, -0.2]
    assert rel_residual(varphi_eval(P, x, y), varphi2_contour(P, x, y)) < 1e-8


def test_varphi2_coeff_m1_closed_form():
    P = build_params(2.5, 1)
    x = np.array([0.7, 0.1])
    printed = 2 * P.a * (-1j) / (2 * np.sinh(np.pi * (x[1] - x[0]) / P.a))
    assert rel_residual(varphi2_coeff(P, 0, x, printed=True), printed) < 1e-14
    # the literal residue weight is half the printed constant
    assert rel_residual(varphi2_coeff(P, 0, x), printed / 2) < 1e-14


@pytest.mark.parametrize("m,l", [(2, 0), (2, 1), (3, 0), (3, 1), (3, 2)])
def test_varphi2_coeff_matches_single_pole_contour(m, l):
    # at y = 0 the pole at z = x1 + i(2l - m + 1)/2 contributes exactly the l-th coefficient
    P = build_params(2.5, m)
    x = np.array([0.7, 0.1])
    c = (m - 2 * np.arange(m) - 1) / 2

    def f(z):
        out = np.ones_like(z)
        for xj in x:
            for cn in c:
                out = out / (2 * np.sinh(np.pi * (xj - z + 1j * cn) / P.a))
        return out

    pole = x[0] + 1j * (2 * l - m + 1) / 2
    val = contour_integral(f, ContourSpec(pole, 0.2, 0.3, 120))
    assert rel_residual(varphi2_coeff(P, l, x), val) < 1e-8


def test_varphi2_coeff_ia_periodicity_and_errors():
    P = build_params(2.5, 2)
    x = np.array([0.7, 0.1])
    shifted = x + np.array([0, 1j * P.a])
    for l in range(2):
        assert abs(abs(varphi2_coeff(P, l, shifted)) - abs(varphi2_coeff(P, l, x))) < 1e-12 * abs(varphi2_coeff(P, l, x))
    with pytest.raises(DomainError):
        varphi2_coeff(P, 2, x)
    with pytest.raises(PoleError):
        varphi2_coeff(P, 0, [0.3, 0.3 - 1j])


@pytest.mark.parametrize("N,m", [(2, 1), (2, 3), (3, 1), (3, 2), (3, 3), (4, 2), (4, 3)])
def test_series_reconstruction(N, m, rng):
    P = build_params(np.e, m)
    x = separated(rng, N)
    ser = varphi_coeffs(P, x)
    assert len(ser.terms) == (m) ** (N * (N - 1) // 2)
    assert [wv.labels for wv, _ in ser.terms] == [wv.labels for wv in weight_vectors(N, P.p)]
    for _ in range(10):
        y = rng.uniform(-1, 1, N)
        assert rel_residual(ser.evaluate(y), varphi_eval(P, x, y)) < 1e-9


def test_series_examples(rng):
    P = build_params(2.5, 1)
    x = separated(rng, 2)
    ser = varphi_coeffs(P, x)
    assert len(ser.terms) == 1
    assert rel_residual(ser.leading, varphi2_coeff(P, 0, x)) < 1e-14
    P = build_params(2.5, 2)
    ser = varphi_coeffs(P, separated(rng, 3))
    assert len(ser.terms) == 8
    assert isinstance(ser, SeriesExpansion)
    assert ser.coefficient((0, 0, 0)) == ser.leading
    with pytest.raises(KeyError):
        ser.coefficient((2, 0, 0))
    # distinct label sets may share nu; merged() sums them
    merged = ser.merged()
    assert len(merged) < 8
    assert sum(merged.values()) == pytest.approx(sum(c for _, c in ser.terms))


@pytest.mark.parametrize("a", [2.5, 3.7])
@pytest.mark.parametrize("N,p", [(2, 1), (3, 2), (4, 1)])
def test_leading_coefficient_closed_forms(a, N, p, rng):
    P = build_params(a, p + 1)
    for _ in range(3):
        x = separated(rng, N)
        assert rel_residual(varphi_coeffs(P, x).leading, varphi_leading_closed(P, x)) < 1e-10
        assert rel_residual(psi_coeffs(P, x).leading, psi_leading_closed(P, 1j * x)) < 1e-10
        # the printed constant differs by 2 per pair
        ratio = varphi_leading_closed(P, x, printed=True) / varphi_leading_closed(P, x)
        assert ratio == pytest.approx(2 ** (N * (N - 1) // 2))


def test_residue_constant():
    P = build_params(2.5, 3)
    s = 2 * np.sin(np.pi / 2.5) * 2 * np.sin(2 * np.pi / 2.5)
    assert residue_constant(P) == pytest.approx(2.5 * (-1j) ** 3 / s)
    assert residue_constant(P, printed=True) == pytest.approx(2 * residue_constant(P))


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_psi_free_case(N, rng):
    P = build_params(3.3, 1)
    u = 1j * separated(rng, N) + rng.uniform(-0.2, 0.2, N)
    v = rng.uniform(-1, 1, N) + 1j * rng.uniform(-1, 1, N)
    assert rel_residual(psi_native(P, u, v), P.q_pow(2 * np.dot(u, v))) < 1e-13


def _ba_point(rng, N):
    return 1j * separated(rng, N) + rng.uniform(-0.3, 0.3, N)


@pytest.mark.parametrize("N,p", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_self_duality(N, p, rng):
    P = build_params(np.e, p + 1)
    for _ in range(10):
        u, v = _ba_point(rng, N), _ba_point(rng, N)
        assert rel_residual(psi_native(P, u, v), psi_native(P, v, u)) < 1e-9


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), p=st.integers(1, 2))
def test_self_duality_property(seed, p):
    rng = np.random.default_rng(seed)
    P = build_params(np.pi + 0.4, p + 1)
    u, v = _ba_point(rng, 2), _ba_point(rng, 2)
    assert rel_residual(psi_native(P, u, v), psi_native(P, v, u)) < 1e-9


def test_psi_bounded_where_varphi_blows_up():
    P = build_params(2.5, 2)
    x1 = 0.2
    psis, phis = [], []
    for eps in np.geomspace(1e-1, 2e-6, 12):
        x = [x1, x1 + 1j + eps]
        y = [0.3, -0.4]
        psis.append(abs(psi_eval(P, x, y)))
        phis.append(abs(varphi_eval(P, x, y)))
    assert max(psis) < 10 * psis[0] + 10
    assert phis[-1] > 1e4 * phis[0]


@pytest.mark.parametrize("N", [2, 3])
def test_vanishing_p1(N, rng):
    P = build_params(2.5, 2)
    for j, k in itertools.combinations(range(N), 2):
        u = _ba_point(rng, N)
        v = rng.uniform(-1, 1, N) + 0j
        v[k] = v[j]
        assert check_vanishing(P, j, k, 1, u, v) < 1e-9


def test_vanishing_p2_resonant_shift(rng):
    P = build_params(2.5, 3)
    u = _ba_point(rng, 2)
    v = np.array([0.3, 0.3 - P.a], dtype=complex)
    for s in (1, 2):
        assert check_vanishing(P, 0, 1, s, u, v) < 1e-9


def test_vanishing_is_not_trivial(rng):
    # off resonance the difference does not vanish
    P = build_params(2.5, 2)
    u = _ba_point(rng, 2)
    e = np.array([0.5, -0.5])
    v = np.array([0.3, -0.1])
    assert rel_residual(psi_native(P, u, v + e), psi_native(P, u, v - e)) > 1e-3


def test_vanishing_preconditions(rng):
    u = _ba_point(rng, 2)
    with pytest.raises(DomainError):
        check_vanishing(build_params(2.5, 1), 0, 1, 1, u, [0.1, 0.1])
    with pytest.raises(PreconditionError):
        check_vanishing(build_params(2.5, 2), 0, 1, 1, u, [0.1, 0.4])
    with pytest.raises(DomainError):
        check_vanishing(build_params(2.5, 2), 1, 0, 1, u, [0.1, 0.1])


def test_antisymmetry(rng):
    P = build_params(2.5, 2)
    x, y = separated(rng, 2), rng.uniform(-1, 1, 2)
    assert check_antisymmetry(P, x, y, [0, 1]) == 0
    assert check_antisymmetry(P, x, y, [1, 0]) < 1e-10
    x, y = separated(rng, 3), rng.uniform(-1, 1, 3)
    for s in itertools.permutations(range(3)):
        assert check_antisymmetry(P, x, y, s) < 1e-10
    with pytest.raises(DomainError):
        check_antisymmetry(P, x, y, [0, 0, 1])


@pytest.mark.parametrize("N,m,delta", [(2, 2, (1, 1)), (2, 1, (-1, -1)), (2, 3, (1, -1)), (3, 2, (-1, 1, -1)), (3, 3, (1, 1, 1))])
def test_shift_invariance(N, m, delta, rng):
    P = build_params(2.5, m)
    z, u = separated(rng, N), rng.uniform(-1, 1, N)
    assert check_shift_invariance(P, z, u, delta) < 1e-9
    assert check_shift_invariance(P, z, np.zeros(N), delta) < 1e-9


def test_shift_invariance_exponent_is_discriminating(rng):
    P = build_params(2.5, 2)
    z, u = separated(rng, 3), rng.uniform(-1, 1, 3)
    delta = (-1, -1, -1)
    assert check_shift_invariance(P, z, u, delta, exponent=P.m * 2) < 1e-9
    assert check_shift_invariance(P, z, u, delta, exponent=P.m * 2 + 1) > 1


def test_separation_precondition():
    P = build_params(2.5, 2)
    with pytest.raises(PreconditionError):
        varphi_eval(P, [0.1, 0.1 + 1e-8 + 0.3j], [0.0, 0.0])


def test_batch_matches_scalar(rng):
    P = build_params(2.5, 3)
    X = np.array([separated(rng, 3) for _ in range(4)])
    Y = rng.uniform(-1, 1, (4, 3))
    batch = varphi_eval_batch(P, X, Y)
    for i in range(4):
        assert rel_residual(batch[i], varphi_eval(P, X[i], Y[i])) < 1e-14


@pytest.mark.parametrize("m", [2, 3, 4])
def test_vanishing_sum_identity(m, rng):
    P = build_params(2.5 if m < 4 else 3.7, m)
    for s in range(1, m):
        for _ in range(5):
            d = rng.uniform(-1.5, 1.5) + 1j * rng.uniform(-0.3, 0.3)
            total, scale = vanishing_sum(P, s, d)
            assert abs(total) / scale < 1e-10


def test_vanishing_sum_printed_sign_does_not_vanish():
    total, scale = vanishing_sum(build_params(2.5, 2), 1, 0.3, form="printed")
    assert abs(total) / scale > 0.1
