"""The residue-sum function varphi_N and the self-dual Baker-Akhiezer function psi_N.

varphi_N(x, y) is built level by level: at level N the N-1 contour integrals
around the pole towers z_k = x_k + i(m - 2n - 1)/2 are replaced by their
residues, leaving a finite sum over n in {0..m-1}**(N-1) of closed-form
weights times varphi_{N-1} at the shifted points.  Two routes are provided:

* ``varphi_eval`` walks the nested residue sum directly (vectorised over a
  batch of points);
* ``varphi_coeffs`` carries the exponential-series coefficients through the
  same recursion and returns a :class:`SeriesExpansion`.

psi_N is varphi_N times the x-dependent normalisation that makes the
leading coefficient prod_{j<k} prod_{n=1}^{p} [n + u_k - u_j].

Each residue contributes 2 pi i * (-a / 2 pi) = -i a, so the per-pair
constant is ``a (-i)**m / prod_{n=1}^{m-1} 2 sin(pi n / a)``.  The
``printed=True`` switches reproduce the variant with ``2a`` in place of ``a``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .params import (
    ModelParams,
    WeightVector,
    as_points,
    bracket,
    pairs,
    rel_residual,
    sign_of_permutation,
    sinh2,
    weight_vectors,
)

SEPARATION_TOL = 1e-6
RESONANCE_TOL = 1e-10


def residue_constant(params: ModelParams, printed: bool = False) -> complex:
    """Per-pair constant a (-i)^m / prod 2 sin(pi n / a); doubled if ``printed``."""
    kappa = 2.0 if printed else 1.0
    return kappa * params.a * (-1j) ** params.m / params.sin_product


def _pole_offsets(params: ModelParams) -> np.ndarray:
    """(m - 2n - 1)/2 for n = 0..m-1."""
    return (params.m - 2 * np.arange(params.m) - 1) / 2


def check_separation(x, tol: float = SEPARATION_TOL) -> None:
    x = np.asarray(x, dtype=complex)
    re = x.real
    d = np.abs(re[..., :, None] - re[..., None, :])
    N = x.shape[-1]
    if N > 1:
        iu = np.triu_indices(N, 1)
        if np.any(d[..., iu[0], iu[1]] < tol):
            raise PreconditionError(
                f"real parts of x must be pairwise separated by at least {tol}"
            )


def _self_factor(params: ModelParams, n: int) -> complex:
    """prod_{n' != n} 2 sinh(i pi (n - n') / a)."""
    return complex(
        np.prod([2j * np.sin(np.pi * (n - k) / params.a) for k in range(params.m) if k != n])
    )


def _residue_weight(params: ModelParams, x: np.ndarray, ns: Sequence[int]) -> np.ndarray:
    """Closed-form weight of one residue term; x has shape (B, N)."""
    a, m = params.a, params.m
    N = x.shape[-1]
    nprime = np.arange(m)
    w = np.full(x.shape[:-1], (-1j * a) ** (N - 1), dtype=complex)
    for k, nk in enumerate(ns):
        w = w / _self_factor(params, nk)
        for j in range(N):
            if j == k:
                continue
            d = x[..., j] - x[..., k]
            arg = np.pi * (d[..., None] + 1j * (nk - nprime)) / a
            w = w / np.prod(sinh2(arg), axis=-1)
    return w


def _weight_W_batch(params: ModelParams, z: np.ndarray) -> np.ndarray:
    """weight_W with mW = m, vectorised over leading axes of z."""
    N = z.shape[-1]
    out = np.ones(z.shape[:-1], dtype=complex)
    n = np.arange(params.m)
    for j in range(N):
        for k in range(N):
            if j != k:
                d = z[..., j] - z[..., k]
                out = out * np.prod(2 * np.sinh(np.pi * (d[..., None] - 1j * n) / params.a), axis=-1)
    return out


def _varphi_batch(params: ModelParams, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    N = x.shape[-1]
    a = params.a
    if N == 1:
        return np.exp(2j * np.pi * x[..., 0] * y[..., 0] / a)
    c = _pole_offsets(params)
    E = np.exp(2j * np.pi * y[..., -1] * x.sum(axis=-1) / a)
    yp = y[..., :-1] - y[..., -1:]
    total = np.zeros(x.shape[:-1], dtype=complex)
    for ns in itertools.product(range(params.m), repeat=N - 1):
        z = x[..., :-1] + 1j * c[list(ns)]
        w = _residue_weight(params, x, ns)
        total = total + w * _weight_W_batch(params, z) * _varphi_batch(params, z, yp)
    return E * total


def varphi_eval_batch(params: ModelParams, x, y) -> np.ndarray:
    """varphi_N over a batch; x and y broadcast to shape (..., N)."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    x, y = np.broadcast_arrays(x, y)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DomainError("non-finite coordinates")
    check_separation(x)
    return _varphi_batch(params, x, y)


def varphi_eval(params: ModelParams, x, y) -> complex:
    """varphi_N(x, y) by the nested residue sum.

    Requires the real parts of x to be pairwise distinct (by at least 1e-6).
    """
    x = as_points(x)
    y = as_points(y, x.size)
    return complex(varphi_eval_batch(params, x, y))


def varphi2_coeff(params: ModelParams, l: int, x, printed: bool = False) -> complex:
    """Coefficient of exp(2 pi ((m-1)/2 - l)(y1 - y2)/a) in the N=2 expansion."""
    m, a = params.m, params.a
    if not 0 <= l <= m - 1:
        raise DomainError(f"l must lie in [0, {m - 1}]")
    x = as_points(x, 2)
    num = (2.0 if printed else 1.0) * a * (-1j) ** m
    guard = np.prod([2 * np.sin(np.pi * (n - l) / a) for n in range(m) if n != l])
    den = np.prod(sinh2(np.pi * (x[1] - x[0] + 1j * (np.arange(m) - l)) / a))
    return complex(num / guard / den)


@dataclass
class SeriesExpansion:
    """Coefficients at a fixed base point x of

        f(x, y) = exp(2 pi i (x, y) / a) * sum_nu c_nu exp(2 pi (nu, y) / a)

    ``kind`` is ``"varphi"`` or ``"psi"``; for psi the variables are the
    rescaled ones, psi(q, p; i x, i y).  Terms follow the ``weight_vectors``
    enumeration, so distinct terms may share the same nu.
    """

    params: ModelParams
    N: int
    base_point: tuple[complex, ...]
    terms: list[tuple[WeightVector, complex]]
    kind: str = "varphi"

    def coefficient(self, labels: Sequence[int]) -> complex:
        labels = tuple(labels)
        for wv, c in self.terms:
            if wv.labels == labels:
                return c
        raise KeyError(labels)

    @property
    def leading(self) -> complex:
        return self.terms[0][1]

    def evaluate(self, y) -> complex:
        y = as_points(y, self.N)
        x = np.asarray(self.base_point, dtype=complex)
        a = self.params.a
        nus = np.array([wv.nu for wv, _ in self.terms], dtype=float)
        cs = np.array([c for _, c in self.terms], dtype=complex)
        return complex(np.exp(2j * np.pi * np.dot(x, y) / a) * np.sum(cs * np.exp(2 * np.pi * nus @ y / a)))

    def merged(self) -> dict[tuple[float, ...], complex]:
        """Coefficients summed over terms with equal nu."""
        out: dict[tuple[float, ...], complex] = {}
        for wv, c in self.terms:
            out[wv.nu] = out.get(wv.nu, 0j) + c
        return out


def _coeff_table(params: ModelParams, x: tuple[complex, ...], cache: dict) -> dict:
    """Map label tuple (level-N pair order) -> coefficient of varphi_N at x."""
    key = (len(x), x)
    if key in cache:
        return cache[key]
    N = len(x)
    if N == 1:
        table = {(): 1.0 + 0j}
        cache[key] = table
        return table
    c = _pole_offsets(params)
    xa = np.asarray(x, dtype=complex)[None, :]
    prs = pairs(N)
    sub_prs = pairs(N - 1)
    table = {}
    for ns in itertools.product(range(params.m), repeat=N - 1):
        z = tuple(complex(v) for v in xa[0, :-1] + 1j * c[list(ns)])
        w = complex(_residue_weight(params, xa, ns)[0])
        wz = complex(_weight_W_batch(params, np.asarray(z)[None, :])[0])
        sub = _coeff_table(params, z, cache)
        for sub_labels, sc in sub.items():
            lm = dict(zip(sub_prs, sub_labels))
            labels = tuple(lm[(j, k)] if k < N - 1 else params.p - ns[j] for j, k in prs)
            table[labels] = w * wz * sc
    cache[key] = table
    return table


def varphi_coeffs(params: ModelParams, x, cache: dict | None = None) -> SeriesExpansion:
    """Series coefficients varphi_{N,nu}(x) via the coefficient recursion."""
    x = as_points(x)
    check_separation(x)
    cache = {} if cache is None else cache
    table = _coeff_table(params, tuple(complex(v) for v in x), cache)
    terms = [(wv, table[wv.labels]) for wv in weight_vectors(x.size, params.p)]
    return SeriesExpansion(params, x.size, tuple(x), terms, "varphi")


def varphi_leading_closed(params: ModelParams, x, printed: bool = False) -> complex:
    """Closed form of the coefficient at nu = rho_N(m-1)."""
    x = as_points(x)
    N = x.size
    out = residue_constant(params, printed) ** (N * (N - 1) // 2)
    n = np.arange(params.m)
    for j, k in pairs(N):
        out /= complex(np.prod(sinh2(np.pi * (x[k] - x[j] + 1j * n) / params.a)))
    return complex(out)


def psi_normaliser(params: ModelParams, x) -> complex:
    """prod_{j<k} prod_{n=-p}^{p} 2 sinh(pi (x_k - x_j + i n)/a) / K**(N(N-1)/2)."""
    x = np.asarray(x, dtype=complex)
    N = x.shape[-1]
    p, a = params.p, params.a
    n = np.arange(-p, p + 1)
    out = np.ones(x.shape[:-1], dtype=complex)
    for j, k in pairs(N):
        d = x[..., k] - x[..., j]
        out = out * np.prod(2 * np.sinh(np.pi * (d[..., None] + 1j * n) / a), axis=-1)
    return out / residue_constant(params) ** (N * (N - 1) // 2)


def psi_eval_batch(params: ModelParams, x, y) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    x, y = np.broadcast_arrays(x, y)
    return varphi_eval_batch(params, x, y) * psi_normaliser(params, x)


def psi_eval(params: ModelParams, x, y) -> complex:
    """psi_N(q, p; i x, i y) with q = exp(-i pi / a), p = m - 1."""
    x = as_points(x)
    y = as_points(y, x.size)
    return complex(psi_eval_batch(params, x, y))


def psi_native(params: ModelParams, u, v) -> complex:
    """psi_N(q, p; u, v) in the Baker-Akhiezer variables (u = i x, v = i y)."""
    u = as_points(u)
    v = as_points(v, u.size)
    return psi_eval(params, -1j * u, -1j * v)


def psi_coeffs(params: ModelParams, x, cache: dict | None = None) -> SeriesExpansion:
    """Coefficients psi_{N,nu}(i x) of psi_N(q, p; i x, i y)."""
    ser = varphi_coeffs(params, x, cache)
    norm = complex(psi_normaliser(params, np.asarray(ser.base_point)))
    terms = [(wv, c * norm) for wv, c in ser.terms]
    return SeriesExpansion(params, ser.N, ser.base_point, terms, "psi")


def psi_leading_closed(params: ModelParams, u) -> complex:
    """prod_{j<k} prod_{n=1}^{p} [n + u_k - u_j]."""
    u = as_points(u)
    out = 1.0 + 0j
    n = np.arange(1, params.p + 1)
    for j, k in pairs(u.size):
        out *= complex(np.prod(bracket(params, n + u[k] - u[j])))
    return out


def check_vanishing(params: ModelParams, j: int, k: int, s: int, u, v) -> float:
    """Relative residual of psi(u, v + s e/2) - psi(u, v - s e/2), e = e_j - e_k.

    u, v are Baker-Akhiezer variables and must satisfy q^{2(v_j - v_k)} = 1.
    """
    u = as_points(u)
    v = as_points(v, u.size)
    N = u.size
    if not 0 <= j < k < N:
        raise DomainError(f"need 0 <= j < k < N, got j={j}, k={k}")
    if not 1 <= s <= params.p:
        raise DomainError(f"s must lie in [1, {params.p}], got {s}")
    if abs(1 - params.q_pow(2 * (v[j] - v[k]))) > RESONANCE_TOL:
        raise PreconditionError("v does not satisfy q^(2(v_j - v_k)) = 1")
    e = np.zeros(N)
    e[j], e[k] = 1, -1
    lhs = psi_native(params, u, v + s * e / 2)
    rhs = psi_native(params, u, v - s * e / 2)
    return rel_residual(lhs, rhs)


def check_antisymmetry(params: ModelParams, x, y, sigma: Sequence[int]) -> float:
    """Residual of varphi(sigma x, sigma y) = sign(sigma) varphi(x, y)."""
    x = as_points(x)
    y = as_points(y, x.size)
    sigma = list(sigma)
    if sorted(sigma) != list(range(x.size)):
        raise DomainError(f"{sigma} is not a permutation of range({x.size})")
    lhs = varphi_eval(params, x[sigma], y[sigma])
    rhs = sign_of_permutation(sigma) * varphi_eval(params, x, y)
    return rel_residual(lhs, rhs)


def check_shift_invariance(params: ModelParams, z, u, delta: Sequence[int], exponent: int | None = None) -> float:
    """Residual of exp(pi sum delta_j u_j) varphi(z, u) = varphi(z - (ia/2) delta, u) prod delta_j^e.

    The exponent defaults to m(N-1) for varphi_N.
    """
    z = as_points(z)
    u = as_points(u, z.size)
    delta = np.asarray(delta, dtype=int)
    if delta.shape != (z.size,) or not np.all(np.abs(delta) == 1):
        raise DomainError("delta must be a vector of +-1 of length N")
    e = params.m * (z.size - 1) if exponent is None else exponent
    lhs = np.exp(np.pi * np.dot(delta, u)) * varphi_eval(params, z, u)
    rhs = varphi_eval(params, z - 0.5j * params.a * delta, u) * np.prod(delta.astype(float) ** e)
    return rel_residual(lhs, rhs)


def vanishing_sum(params: ModelParams, s: int, d: complex, form: str = "derived") -> tuple[complex, float]:
    """Scalar sum whose vanishing for s < m gives the N=2 vanishing property.

    ``d`` stands for x_2 - x_1.  Returns the sum and the sum of term moduli,
    the natural scale for a relative residual.  With the guard and sinh
    denominators indexed by the series label l, the residue at the pole
    z = x_1 + i(2l - m + 1)/2 has the numerator sinh(pi s (d + i(m-2l-1))/a)
    (``form="derived"``); ``form="printed"`` flips the sign of the imaginary
    shift, which does not vanish in general.
    """
    if form not in ("derived", "printed"):
        raise DomainError(f"unknown form {form!r}")
    m, a = params.m, params.a
    sign = 1 if form == "derived" else -1
    total, scale = 0j, 0.0
    for l in range(m):
        guard = np.prod([np.sin(np.pi * (n - l) / a) for n in range(m) if n != l])
        num = np.sinh(np.pi * s * (d + sign * 1j * (m - 2 * l - 1)) / a)
        den = np.prod(sinh2(np.pi * (d + 1j * (np.arange(m) - l)) / a))
        term = complex(2 * a / guard * num / den)
        total += term
        scale += abs(term)
    return total, scale
