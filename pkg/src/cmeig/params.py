"""Model parameters, weight-lattice combinatorics and elementary products.

Everything here is a pure function of its arguments.  Coordinates are
handled as 1-d complex numpy arrays; indices are 0-based throughout, so the
pair ``(j, k)`` runs over ``0 <= j < k < N``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, PoleError

# a denominator factor smaller than this, relative to its natural scale, is a pole
POLE_TOL = 1e-13


@dataclass(frozen=True)
class ModelParams:
    """Period ratio ``a`` and integer coupling ``m``.

    The Baker-Akhiezer parameter is ``p = m - 1`` and the deformation
    parameter is ``q = exp(-i pi / a)``.  Whether ``q`` is a root of unity is
    not checked; pick ``a`` away from rationals with small denominators.
    """

    a: float
    m: int

    def __post_init__(self):
        if isinstance(self.m, bool) or int(self.m) != self.m:
            raise DomainError(f"m must be a positive integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "a", float(self.a))
        if self.m < 1:
            raise DomainError(f"m must be >= 1, got {self.m}")
        if not math.isfinite(self.a) or not self.a > self.m - 1:
            raise DomainError(f"need a > m - 1, got a={self.a}, m={self.m}")

    @property
    def p(self) -> int:
        return self.m - 1

    @property
    def q(self) -> complex:
        return complex(np.exp(-1j * np.pi / self.a))

    @property
    def sin_product(self) -> float:
        """prod_{n=1}^{m-1} 2 sin(pi n / a)."""
        return math.prod(2.0 * math.sin(math.pi * n / self.a) for n in range(1, self.m))

    def q_pow(self, z):
        """q**z computed as exp(-i pi z / a)."""
        return np.exp(-1j * np.pi * np.asarray(z, dtype=complex) / self.a)


def build_params(a: float, m: int) -> ModelParams:
    return ModelParams(a, m)


def as_points(x, N: int | None = None) -> np.ndarray:
    """Coerce to a finite 1-d complex array, optionally of length ``N``."""
    arr = np.asarray(x, dtype=complex).reshape(-1)
    if arr.size == 0:
        raise DomainError("point vector must have at least one coordinate")
    if N is not None and arr.size != N:
        raise DomainError(f"expected {N} coordinates, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("point vector has non-finite coordinates")
    return arr


def sinh2(w):
    """2 sinh(w), raising PoleError where it vanishes within tolerance."""
    w = np.asarray(w, dtype=complex)
    ep, em = np.exp(w), np.exp(-w)
    val = ep - em
    if np.any(np.abs(val) < POLE_TOL * (np.abs(ep) + np.abs(em))):
        raise PoleError(f"2 sinh factor vanishes at w={w}")
    return val


def cosh2(w):
    """2 cosh(w), raising PoleError where it vanishes within tolerance."""
    w = np.asarray(w, dtype=complex)
    ep, em = np.exp(w), np.exp(-w)
    val = ep + em
    if np.any(np.abs(val) < POLE_TOL * (np.abs(ep) + np.abs(em))):
        raise PoleError(f"2 cosh factor vanishes at w={w}")
    return val


def bracket(params: ModelParams, z):
    """[z] = q**z - q**(-z)."""
    z = np.asarray(z, dtype=complex)
    out = params.q_pow(z) - params.q_pow(-z)
    return complex(out) if out.ndim == 0 else out


def elementary_symmetric(r: int, t: Sequence[complex]) -> complex:
    """Elementary symmetric polynomial e_r(t) for 1 <= r <= len(t)."""
    t = list(t)
    if not 1 <= r <= len(t):
        raise IndexError(f"r={r} out of range for {len(t)} variables")
    e = [1.0 + 0j] + [0j] * len(t)
    for ti in t:
        for k in range(len(t), 0, -1):
            e[k] += ti * e[k - 1]
    return e[r]


def pairs(N: int) -> list[tuple[int, int]]:
    """Index pairs j < k in lexicographic order."""
    return list(itertools.combinations(range(N), 2))


@dataclass(frozen=True)
class WeightVector:
    """Labels ``l_jk`` in ``{0..p}`` for every pair ``j < k``, in pair order.

    ``nu = sum_{j<k} (p/2 - l_jk)(e_j - e_k)``.
    """

    N: int
    p: int
    labels: tuple[int, ...]
    nu: tuple[float, ...] = field(init=False, compare=False)

    def __post_init__(self):
        prs = pairs(self.N)
        if len(self.labels) != len(prs):
            raise DomainError(f"need {len(prs)} labels for N={self.N}, got {len(self.labels)}")
        if any(not 0 <= l <= self.p for l in self.labels):
            raise DomainError(f"labels must lie in [0, {self.p}]")
        nu = [0.0] * self.N
        for (j, k), l in zip(prs, self.labels):
            c = self.p / 2 - l
            nu[j] += c
            nu[k] -= c
        object.__setattr__(self, "nu", tuple(nu))

    def label(self, j: int, k: int) -> int:
        return self.labels[pairs(self.N).index((j, k))]

    @property
    def label_map(self) -> dict[tuple[int, int], int]:
        return dict(zip(pairs(self.N), self.labels))

    def is_rho(self) -> bool:
        return all(l == 0 for l in self.labels)


def weight_vectors(N: int, p: int) -> list[WeightVector]:
    """All (p+1)**(N(N-1)/2) weight vectors, lexicographic in the label tuple."""
    if N < 1 or p < 0:
        raise DomainError(f"need N >= 1 and p >= 0, got N={N}, p={p}")
    P = N * (N - 1) // 2
    return [WeightVector(N, p, labels) for labels in itertools.product(range(p + 1), repeat=P)]


def rho(N: int, p: int) -> WeightVector:
    """The dominant weight: all labels zero, nu_j = (p/2)(N - 2j + 1) (1-based j)."""
    return WeightVector(N, p, (0,) * (N * (N - 1) // 2))


def weight_W(params: ModelParams, x, mW: int) -> complex:
    """prod_{j != k} prod_{n=0}^{mW-1} 2 sinh(pi (x_j - x_k - i n) / a)."""
    if mW < 0:
        raise DomainError("mW must be nonnegative")
    x = as_points(x)
    d = x[:, None] - x[None, :]
    off = ~np.eye(x.size, dtype=bool)
    n = np.arange(mW)
    w = np.pi * (d[off][:, None] - 1j * n[None, :]) / params.a
    # zeros of W are legitimate values, so no pole check here
    return complex(np.prod(2.0 * np.sinh(w)))


def kernel_S(params: ModelParams, x, z) -> complex:
    """prod_j prod_k prod_n 1 / (2 cosh(pi (x_j - z_k + i (m - 2n - 1)/2) / a))."""
    x = as_points(x)
    z = np.asarray(z, dtype=complex).reshape(-1)
    if x.size != z.size + 1:
        raise DomainError(f"kernel needs len(x) = len(z) + 1, got {x.size} and {z.size}")
    c = (params.m - 2 * np.arange(params.m) - 1) / 2
    w = np.pi * (x[:, None, None] - z[None, :, None] + 1j * c[None, None, :]) / params.a
    return complex(1.0 / np.prod(cosh2(w)))


def delta_poly(params: ModelParams, x, mD: int) -> complex:
    """prod_{j<k} prod_{n=-mD}^{mD} [x_j - x_k + n]."""
    if mD < 0:
        raise DomainError("mD must be nonnegative")
    x = as_points(x)
    out = 1.0 + 0j
    n = np.arange(-mD, mD + 1)
    for j, k in pairs(x.size):
        out *= complex(np.prod(bracket(params, x[j] - x[k] + n)))
    return out


def rel_residual(lhs, rhs) -> float:
    """|lhs - rhs| / max(|lhs|, |rhs|, 1e-300)."""
    lhs, rhs = complex(lhs), complex(rhs)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


def sign_of_permutation(perm: Iterable[int]) -> int:
    perm = list(perm)
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign
