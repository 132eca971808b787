"""Real-line and rectangle-contour quadrature.

``phi_quadrature`` evaluates the recursive integral for Phi_N (N <= 3) on a
truncated real line with composite Gauss-Legendre panels.  For N = 3 the
inner Phi_2 integrand factorises over the two outer variables, so the whole
inner integral on the outer tensor grid is one matrix product.

``contour_integral`` integrates counterclockwise around a rectangle with one
Gauss-Legendre rule per side; ``varphi2_contour`` and ``psi_residue_formula``
build on it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .ba import check_separation, psi_eval_batch, residue_constant
from .errors import AccuracyError, DomainError, PoleError, PreconditionError
from .params import ModelParams, as_points, pairs, weight_W

ROUNDOFF = 1e-14


@dataclass(frozen=True)
class QuadratureSpec:
    truncation_L: float
    panels: int
    nodes_per_panel: int = 10
    target_tol: float = 1e-8

    def __post_init__(self):
        if not self.truncation_L > 0:
            raise DomainError("truncation_L must be positive")
        if self.panels < 1 or self.nodes_per_panel < 2:
            raise DomainError("need panels >= 1 and nodes_per_panel >= 2")
        if not self.target_tol > 0:
            raise DomainError("target_tol must be positive")


@dataclass(frozen=True)
class ContourSpec:
    """Rectangle centred at ``center``, traversed counterclockwise."""

    center: complex
    half_width: float
    half_height: float
    nodes_per_side: int = 200

    def __post_init__(self):
        if not (self.half_width > 0 and self.half_height > 0):
            raise DomainError("rectangle half-width and half-height must be positive")
        if self.nodes_per_side < 2:
            raise DomainError("need at least 2 nodes per side")

    def corners(self) -> list[complex]:
        c, w, h = complex(self.center), self.half_width, self.half_height
        return [c - w - 1j * h, c + w - 1j * h, c + w + 1j * h, c - w + 1j * h]

    def nodes(self, n: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Quadrature nodes z and complex weights dz on the boundary."""
        n = self.nodes_per_side if n is None else n
        g, w = leggauss(n)
        cs = self.corners()
        zs, ws = [], []
        for A, B in zip(cs, cs[1:] + cs[:1]):
            half = (B - A) / 2
            zs.append((A + B) / 2 + half * g)
            ws.append(half * w)
        return np.concatenate(zs), np.concatenate(ws)

    def distance_to_boundary(self, z: complex) -> float:
        c = complex(self.center)
        dx = abs(z.real - c.real) - self.half_width
        dy = abs(z.imag - c.imag) - self.half_height
        if dx <= 0 and dy <= 0:
            return -max(dx, dy)
        return math.hypot(max(dx, 0.0), max(dy, 0.0))

    def encloses(self, z: complex) -> bool:
        c = complex(self.center)
        return abs(z.real - c.real) < self.half_width and abs(z.imag - c.imag) < self.half_height


def contour_integral(f: Callable, c: ContourSpec, target_tol: float | None = None,
                     return_error: bool = False):
    """Counterclockwise integral of a vectorised f around the rectangle ``c``.

    The error estimate compares the rule with half as many nodes per side;
    if ``target_tol`` is given and the estimate exceeds it (relative to the
    result) an AccuracyError is raised.
    """
    z, w = c.nodes()
    val = complex(np.sum(w * f(z)))
    z2, w2 = c.nodes(max(2, c.nodes_per_side // 2))
    err = abs(val - complex(np.sum(w2 * f(z2))))
    if target_tol is not None and err > target_tol * max(abs(val), 1e-300):
        raise AccuracyError(f"contour error estimate {err:.3g} exceeds target {target_tol:.3g}")
    return (val, err) if return_error else val


def _pole_tower(params: ModelParams, center: complex) -> list[complex]:
    c = (params.m - 2 * np.arange(params.m) - 1) / 2
    return [center + 1j * (cn + l * params.a) for cn in c for l in (-1, 0, 1)]


def _check_contour(params: ModelParams, c: ContourSpec, inside: complex, others: Sequence[complex]) -> None:
    spacing = 2 * max(c.half_width, c.half_height) / c.nodes_per_side
    for pole in _pole_tower(params, inside):
        if c.distance_to_boundary(pole) < spacing:
            raise PoleError(f"pole {pole} lies within node spacing of the contour")
        if c.encloses(pole) != (abs((pole - inside).imag) < params.a / 2):
            raise PreconditionError(f"contour must enclose exactly the pole tower at {inside}")
    for xo in others:
        for pole in _pole_tower(params, xo):
            if c.distance_to_boundary(pole) < spacing:
                raise PoleError(f"pole {pole} lies within node spacing of the contour")
            if c.encloses(pole):
                raise PreconditionError(f"contour encloses a pole {pole} belonging to another coordinate")


def default_contours(params: ModelParams, x, width_fraction: float = 0.5,
                     nodes_per_side: int = 200) -> list[ContourSpec]:
    """Rectangles of half-width ``width_fraction`` * min separation and half-height a/2."""
    x = as_points(x)
    if x.size < 2:
        raise DomainError("contours need at least two coordinates")
    check_separation(x)
    delta = min(abs(x[j] - x[k]) for j, k in pairs(x.size))
    return [ContourSpec(complex(xj), width_fraction * delta, params.a / 2, nodes_per_side) for xj in x]


def _sinh_tower_integrand(params: ModelParams, x: np.ndarray, z: np.ndarray) -> np.ndarray:
    """1 / prod_j prod_n 2 sinh(pi (x_j - z + i (m - 2n - 1)/2) / a) on an array of z."""
    c = (params.m - 2 * np.arange(params.m) - 1) / 2
    w = np.pi * (x[:, None, None] - z[None, None, :] + 1j * c[None, :, None]) / params.a
    return 1.0 / np.prod(2 * np.sinh(w), axis=(0, 1))


def varphi2_contour(params: ModelParams, x, y, c: ContourSpec | None = None) -> complex:
    """The N=2 residue function as a literal contour integral around x_1's pole tower."""
    x = as_points(x, 2)
    y = as_points(y, 2)
    c = default_contours(params, x)[0] if c is None else c
    _check_contour(params, c, x[0], [x[1]])
    a = params.a

    def f(z):
        return np.exp(2j * np.pi * (y[0] - y[1]) * z / a) * _sinh_tower_integrand(params, x, z)

    return complex(np.exp(2j * np.pi * y[1] * (x[0] + x[1]) / a) * contour_integral(f, c))


# --- real-line recursion ----------------------------------------------------

def default_quadrature(params: ModelParams, x, target_tol: float = 1e-8) -> QuadratureSpec:
    x = np.asarray(x, dtype=float)
    L = 4 * params.a + 2 * float(np.max(np.abs(x))) + params.m
    # the nearest cosh poles sit a/2 - (m-1)/2 off the real axis; panels no wider than that
    width = min(0.5, params.a / 2 - (params.m - 1) / 2)
    panels = int(math.ceil(2 * L / width))
    return QuadratureSpec(L, panels, 10, target_tol)


def _panel_rule(L: float, panels: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    g, w = leggauss(k)
    edges = np.linspace(-L, L, panels + 1)
    half = (edges[1:] - edges[:-1]) / 2
    mid = (edges[1:] + edges[:-1]) / 2
    return (mid[:, None] + half[:, None] * g).ravel(), (half[:, None] * w).ravel()


def _base(z, y, a: float, base_case: str):
    if base_case == "j1":
        return np.exp(2j * np.pi * z * y / a)
    if base_case == "printed":
        return np.exp(2 * np.pi * z * y / a)
    raise DomainError(f"unknown base case {base_case!r}")


def _cosh_tower(params: ModelParams, xs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """F[i, l] = prod_n 1 / 2 cosh(pi (xs_i - z_l + i(m-2n-1)/2) / a)."""
    c = (params.m - 2 * np.arange(params.m) - 1) / 2
    out = np.ones((xs.size, z.size), dtype=complex)
    for cn in c:
        out = out / (2 * np.cosh(np.pi * (xs[:, None] - z[None, :] + 1j * cn) / params.a))
    return out


def _phi_rule(params: ModelParams, x: np.ndarray, y: np.ndarray, L: float, panels: int, k: int,
              base_case: str) -> tuple[complex, float, float]:
    """One quadrature pass: (value, roundoff scale, boundary integrand size)."""
    a, N = params.a, x.size
    pref = params.sin_product / a
    t, wt = _panel_rule(L, panels, k)
    if N == 2:
        g = _base(t, y[0] - y[1], a, base_case) * np.prod(_cosh_tower(params, x, t), axis=0)
        val = pref * np.exp(2j * np.pi * y[1] * x.sum() / a) * np.sum(wt * g)
        scale = abs(pref) * np.sum(np.abs(wt * g))
        return complex(val), float(scale), float(abs(pref) * max(abs(g[0]), abs(g[-1])))
    # N == 3: inner Phi_2(z, y') on the outer grid, then the outer double integral
    yp = y[:2] - y[2]
    Lin = L + params.a
    tw, ww = _panel_rule(Lin, int(math.ceil(panels * Lin / L)), k)
    F = _cosh_tower(params, t, tw)
    inner = (F * (_base(tw, yp[0] - yp[1], a, base_case) * ww)) @ F.T
    phi2 = pref * np.exp(2j * np.pi * yp[1] * (t[:, None] + t[None, :]) / a) * inner
    d = t[:, None] - t[None, :]
    W = np.ones_like(d, dtype=complex)
    for n in range(params.m):
        W = W * 2 * np.sinh(np.pi * (d - 1j * n) / a) * 2 * np.sinh(np.pi * (-d - 1j * n) / a)
    K = np.prod(_cosh_tower(params, x, t), axis=0)
    g = W * phi2 * K[:, None] * K[None, :]
    val = pref / 2 * np.exp(2j * np.pi * y[2] * x.sum() / a) * np.sum(wt[:, None] * wt[None, :] * g)
    scale = abs(pref) / 2 * np.sum(np.abs(wt[:, None] * wt[None, :] * g))
    edge = max(np.abs(g[0, :]).max(), np.abs(g[-1, :]).max(), np.abs(g[:, 0]).max(), np.abs(g[:, -1]).max())
    return complex(val), float(scale), float(abs(pref) / 2 * edge * 2 * L)


def phi_quadrature(params: ModelParams, x, y, spec: QuadratureSpec | None = None,
                   base_case: str = "j1", return_error: bool = False):
    """Phi_N(x, y) for N in {1, 2, 3} from the recursive real-line integral.

    ``base_case`` selects Phi_1: ``"j1"`` is exp(2 pi i x y / a), ``"printed"``
    drops the imaginary unit.  The result uses the panel-halved rule; the
    error estimate is the change under halving plus a truncation bound from
    the integrand size at the cut-off (decay rate at least 2 pi m / a).
    """
    x = as_points(x)
    y = as_points(y, x.size)
    N = x.size
    if N not in (1, 2, 3):
        raise DomainError("phi_quadrature supports N in {1, 2, 3}")
    if np.any(np.abs(x.imag) > 0) or np.any(np.abs(y.imag) > 0):
        raise DomainError("phi_quadrature needs real x and y")
    xr, yr = x.real, y.real
    if N == 1:
        val = complex(_base(xr[0], yr[0], params.a, base_case))
        return (val, 0.0) if return_error else val
    spec = default_quadrature(params, xr) if spec is None else spec
    L, P, k = spec.truncation_L, spec.panels, spec.nodes_per_panel
    coarse, _, _ = _phi_rule(params, xr, yr, L, P, k, base_case)
    fine, scale, edge = _phi_rule(params, xr, yr, L, 2 * P, k, base_case)
    tail = edge * params.a / (np.pi * params.m)
    err = abs(fine - coarse) + ROUNDOFF * scale + tail
    if err > spec.target_tol * max(abs(fine), 1e-300):
        raise AccuracyError(
            f"Phi_{N} quadrature error estimate {err:.3g} exceeds target {spec.target_tol:.3g} (value {abs(fine):.3g})"
        )
    return (fine, err) if return_error else fine


# --- iterated residue formula for psi_N ---------------------------------------

PREFACTORS = ("composed", "printed")


def psi_formula_prefactor(params: ModelParams, N: int, prefactor: str = "composed") -> complex:
    """Constant in front of the iterated contour integral for psi_N.

    ``"printed"`` is (prod_{n=1}^{p} sin(pi n/a) / (2 a i^{p+1}))^{N-1};
    ``"composed"`` follows from expressing varphi_N and varphi_{N-1} through
    psi_N and psi_{N-1} with the literal residue constant.
    """
    m = params.m
    if prefactor == "printed":
        s = math.prod(math.sin(math.pi * n / params.a) for n in range(1, m))
        return complex((s / (2 * params.a * 1j ** m)) ** (N - 1))
    if prefactor == "composed":
        P_N, P_M = N * (N - 1) // 2, (N - 1) * (N - 2) // 2
        sign = (-1) ** (m * (P_N + P_M))
        return complex(sign * residue_constant(params) ** (P_M - P_N))
    raise DomainError(f"unknown prefactor {prefactor!r}")


def psi_residue_formula(params: ModelParams, x, y, specs: Sequence[ContourSpec] | None = None,
                        prefactor: str = "composed") -> complex:
    """psi_N(q, p; i x, i y) from psi_{N-1} by the iterated contour integral.

    The contour gamma_k encloses the pole tower at x_k.  Default contours have
    half-width 0.4 * min separation, so that neighbouring rectangles never
    share an edge and psi_{N-1} is never evaluated at coinciding real parts.
    """
    x = as_points(x)
    y = as_points(y, x.size)
    N, a, m = x.size, params.a, params.m
    if N < 2:
        raise DomainError("the residue formula needs N >= 2")
    if N > 4:
        raise DomainError("psi_residue_formula is limited to N <= 4")
    check_separation(x)
    specs = default_contours(params, x, 0.4)[: N - 1] if specs is None else list(specs)
    if len(specs) != N - 1:
        raise DomainError(f"need {N - 1} contours, got {len(specs)}")
    for k, c in enumerate(specs):
        _check_contour(params, c, x[k], [x[j] for j in range(N) if j != k])
    grids = [c.nodes() for c in specs]
    mesh_z = np.meshgrid(*[g[0] for g in grids], indexing="ij")
    mesh_w = np.meshgrid(*[g[1] for g in grids], indexing="ij")
    Z = np.stack([mz.ravel() for mz in mesh_z], axis=-1)
    Wt = np.prod(np.stack([mw.ravel() for mw in mesh_w], axis=-1), axis=-1)
    yp = y[:-1] - y[-1]
    if N == 2:
        inner = np.exp(2j * np.pi * Z[:, 0] * yp[0] / a)
    else:
        check_separation(Z)
        inner = psi_eval_batch(params, Z, np.broadcast_to(yp, Z.shape))
        for j, k in pairs(N - 1):
            inner = inner * 2 * np.sinh(np.pi * (Z[:, k] - Z[:, j]) / a)
    c = (m - 2 * np.arange(m) - 1) / 2
    den = np.ones(Z.shape[0], dtype=complex)
    for j in range(N):
        for k in range(N - 1):
            den = den * np.prod(2 * np.sinh(np.pi * (x[j] - Z[:, k, None] + 1j * c) / a), axis=-1)
    integral = complex(np.sum(Wt * inner / den))
    front = weight_W(params, x, m)
    for j, k in pairs(N):
        front /= complex(2 * np.sinh(np.pi * (x[k] - x[j]) / a))
    front *= np.exp(2j * np.pi * y[-1] * x.sum() / a)
    return complex(psi_formula_prefactor(params, N, prefactor) * front * integral)
