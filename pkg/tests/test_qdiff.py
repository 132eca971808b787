import itertools

import numpy as np
import pytest

from cmeig.ba import psi_native
from cmeig.errors import DomainError, PoleError
from cmeig.params import build_params, elementary_symmetric, rel_residual
from cmeig.qdiff import (
    OperatorSpec,
    apply_on_exponents,
    eigen_residual,
    exponential_test_functions,
    macdonald_apply,
    similarity_check,
)

from conftest import separated


def _one(_):
    return 1.0


def test_first_order_on_constant():
    t = 0.3 + 0.7j
    spec = OperatorSpec(1, base=0.9j, t=t)
    assert macdonald_apply(spec, _one, [1.2, -0.4 + 0.1j]) == pytest.approx(1 + t)


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_top_order_on_constant(N, rng):
    t = 1.3 - 0.2j
    X = rng.uniform(0.5, 2, N) + 1j * rng.uniform(-1, 1, N)
    assert macdonald_apply(OperatorSpec(N, base=2.0, t=t), _one, X) == pytest.approx(t ** (N * (N - 1) // 2))


@pytest.mark.parametrize("r", [1, 2, 3])
def test_additive_free_case(r, rng):
    a = 2.5
    x, y = rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3)

    def f(w):
        return complex(np.exp(2j * np.pi * np.dot(w, y) / a))

    val = macdonald_apply(OperatorSpec(r, variant="hyperbolic_additive", a=a, m_tilde=0.0), f, x)
    assert rel_residual(val, elementary_symmetric(r, np.exp(2 * np.pi * y / a)) * f(x)) < 1e-12


def test_operator_errors():
    with pytest.raises(PoleError):
        macdonald_apply(OperatorSpec(1, t=2.0), _one, [1.0, 1.0])
    with pytest.raises(PoleError):
        macdonald_apply(OperatorSpec(1, variant="hyperbolic_additive", a=2.5, m_tilde=1), _one, [0.3, 0.3 + 2.5j])
    with pytest.raises(DomainError):
        macdonald_apply(OperatorSpec(3), _one, [1.0, 2.0])
    with pytest.raises(DomainError):
        OperatorSpec(0)
    with pytest.raises(DomainError):
        OperatorSpec(1, variant="hyperbolic_additive")
    with pytest.raises(DomainError):
        OperatorSpec(1, variant="other")
    with pytest.raises(DomainError):
        macdonald_apply(OperatorSpec(1), _one, np.arange(1, 8))


def test_eigen_free_case(rng):
    P = build_params(3.3, 1)
    u, v = 1j * separated(rng, 3), 1j * separated(rng, 3)
    for r in (1, 2, 3):
        assert eigen_residual(P, r, u, v) < 1e-12


@pytest.mark.parametrize("a", [2.5, np.e])
@pytest.mark.parametrize("N,p", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_eigen_equations_both_slots(a, N, p, rng):
    P = build_params(a, p + 1)
    u = 1j * separated(rng, N) + rng.uniform(-0.2, 0.2, N)
    v = 1j * separated(rng, N) + rng.uniform(-0.2, 0.2, N)
    for r in range(1, N + 1):
        for slot in ("second", "first"):
            assert eigen_residual(P, r, u, v, slot) < 1e-8


@pytest.mark.parametrize("N,p,r", [(2, 1, 1), (3, 1, 2), (3, 2, 3)])
def test_eigenvalue_in_macdonald_normalisation(N, p, r, rng):
    # with the t^{r(r-1)/2} prefactor the eigenvalue picks up q^{-p r (N-1)}
    P = build_params(2.5, p + 1)
    u, v = 1j * separated(rng, N), 1j * separated(rng, N)
    lhs = apply_on_exponents(P, r, -2 * p, lambda w: psi_native(P, u, w), v, "macdonald")
    rhs = P.q_pow(-p * r * (N - 1)) * elementary_symmetric(r, P.q_pow(2 * u)) * psi_native(P, u, v)
    assert rel_residual(lhs, rhs) < 1e-10
    if p * r * (N - 1) % (2 * P.a) != 0:
        assert eigen_residual(P, r, u, v, normalisation="macdonald") > 1e-3


def test_similarity_trivial_for_one_variable(rng):
    P = build_params(2.5, 2)
    d = similarity_check(P, 1, [0.3], exponential_test_functions(1, rng))
    assert d.residual < 1e-14
    assert d.verdict == "holds"


@pytest.mark.parametrize("N,m,r", [(2, 1, 1), (2, 2, 2), (2, 2, 1), (3, 2, 2), (3, 3, 1)])
def test_similarity_diagnosis(N, m, r, rng):
    P = build_params(np.pi + 0.4, m)
    x = separated(rng, N) * 0.5 + 0.1j * rng.uniform(-1, 1, N)
    d = similarity_check(P, r, x, exponential_test_functions(N, rng))
    assert d.diagnosed
    assert d.residual_symmetric < 1e-9
    assert d.verdict == "holds_up_to_constant"
    assert d.constant_residual < 1e-9
    assert len(d.per_function) == 5


def _exp_sum(N, rng, terms=3):
    lams = rng.uniform(-0.5, 0.5, (terms, N)) + 1j * rng.uniform(-0.2, 0.2, (terms, N))
    cs = rng.normal(size=terms) + 1j * rng.normal(size=terms)
    return lambda w: complex(np.sum(cs * np.exp(2j * np.pi * lams @ np.asarray(w))))


@pytest.mark.parametrize("N", [2, 3])
def test_commutativity(N, rng):
    P = build_params(2.5, 2)
    f = _exp_sum(N, rng)
    v = separated(rng, N) * 0.4 + 0.1j
    for r, s in itertools.combinations(range(1, N + 1), 2):
        def Ds(w, s=s):
            return apply_on_exponents(P, s, 2.0, f, w)

        def Dr(w, r=r):
            return apply_on_exponents(P, r, 2.0, f, w)

        rs = apply_on_exponents(P, r, 2.0, Ds, v)
        sr = apply_on_exponents(P, s, 2.0, Dr, v)
        assert rel_residual(rs, sr) < 1e-9


def test_permutation_equivariance(rng):
    P = build_params(2.5, 2)
    f = _exp_sum(3, rng)
    v = separated(rng, 3) * 0.4 + 0.05j
    for sigma in itertools.permutations(range(3)):
        sigma = list(sigma)

        def g(w, sigma=sigma):
            return f(np.asarray(w)[sigma])

        lhs = apply_on_exponents(P, 2, 1.5, g, v)
        rhs = apply_on_exponents(P, 2, 1.5, f, v[sigma])
        assert rel_residual(lhs, rhs) < 1e-10


@pytest.mark.parametrize("r,mt", [(1, 1.0), (2, 2.0), (3, 0.7)])
def test_additive_matches_multiplicative(r, mt, rng):
    a = 2.5
    P = build_params(a, 1)
    g = _exp_sum(3, rng)
    x = separated(rng, 3)

    def f(w):
        return g(1j * np.asarray(w))

    add = macdonald_apply(OperatorSpec(r, variant="hyperbolic_additive", a=a, m_tilde=mt), f, x)
    # X = exp(2 pi x / a) = q^{2v} with v = i x; x -> x - i is v -> v + 1
    sym = apply_on_exponents(P, r, 2 * mt, g, 1j * x, "symmetric")
    assert rel_residual(add, sym) < 1e-10
    X = np.exp(2 * np.pi * x / a)
    mult = macdonald_apply(OperatorSpec(r, base=P.q ** 2, t=P.q_pow(2 * mt)),
                           lambda W: g(1j * (a / (2 * np.pi)) * np.log(W)), X)
    assert rel_residual(add, np.exp(1j * np.pi * mt * r * (3 - 1) / a) * mult) < 1e-10
