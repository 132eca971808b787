"""Closed-form joint eigenfunction, constant calibration and verification suites.

The closed form antisymmetrises psi_N over S_N in x and divides by sinh
products in x and y.  Several conventions enter only through constants or
the scaling of the y-sinh; they are collected in :class:`Convention` and
fixed by :func:`calibrate`, which compares against the real-line quadrature
at N = 2.  ``DEFAULT_CONVENTION`` is what calibration selects on the
reference fixture a = 2.5, m = 2 (a test re-derives it).
"""

from __future__ import annotations

import hashlib
import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .ba import (
    check_antisymmetry,
    check_separation,
    check_shift_invariance,
    check_vanishing,
    psi_eval,
    psi_eval_batch,
    psi_coeffs,
    psi_leading_closed,
    psi_native,
    varphi_coeffs,
    varphi_eval,
    varphi_leading_closed,
    vanishing_sum,
)
from .config import RunConfig
from .errors import AccuracyError, CalibrationError, ConfigError, DomainError, PreconditionError
from .params import ModelParams, as_points, pairs, rel_residual, sign_of_permutation, sinh2
from .qdiff import eigen_residual, exponential_test_functions, similarity_check
from .quadrature import (
    ContourSpec,
    QuadratureSpec,
    default_contours,
    default_quadrature,
    phi_quadrature,
    psi_residue_formula,
    varphi2_contour,
)

MIN_SEPARATION = 0.15
STAGE1_TOL = 1e-5
STAGE2_TOL = 1e-5


# --- conventions and closed form ---------------------------------------------

@dataclass(frozen=True)
class Convention:
    """One resolution of the constant and scaling ambiguities.

    y_scale      "a": sinh(pi (y_k - y_j) / a);  "one": sinh(pi (y_k - y_j))
    base_case    Phi_1 used by the quadrature: "j1" with i, "printed" without
    kappa        residue weight factor, 2 as printed or 1 as the literal contour value
    orientation  "printed" uses y_k - y_j in the y-sinh, "reversed" y_j - y_k
    w_sign       "alt" multiplies by the i^{m N(N-1)} factor of the weight function
    cn_form      exponent of (prod 2 sin / a): "printed" (N-1)(N-2)/2,
                 "composed" its negative, as obtained by combining the
                 series expansion of Phi_N with the psi normalisation
    """

    y_scale: str = "a"
    base_case: str = "printed"
    kappa: int = 2
    orientation: str = "printed"
    w_sign: str = "printed"
    cn_form: str = "printed"

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "Convention":
        return cls(**d)


PRINTED_CONVENTION = Convention()
DEFAULT_CONVENTION = Convention(y_scale="one", base_case="j1", kappa=1, orientation="reversed",
                                w_sign="printed", cn_form="composed")

# tie-break order for dimensions that N = 2 probes cannot distinguish
PREFERENCE = {"w_sign": ("printed", "alt"), "cn_form": ("composed", "printed")}


def closed_constant(params: ModelParams, N: int, conv: Convention) -> complex:
    """Total constant multiplying the uncalibrated sum (printed orientation).

    Includes C_N and the sign from the y-sinh orientation.
    """
    P, P2 = N * (N - 1) // 2, (N - 1) * (N - 2) // 2
    ratio = params.sin_product / params.a
    out = (conv.kappa * 1j ** params.m) ** P
    out *= ratio ** (P2 if conv.cn_form == "printed" else -P2)
    if conv.w_sign == "alt":
        out *= (-1) ** (params.m * P2)
    if conv.orientation == "reversed":
        out *= (-1) ** P
    return complex(out)


def _y_div(y_scale: str, a: float) -> float:
    if y_scale == "a":
        return a
    if y_scale == "one":
        return 1.0
    raise DomainError(f"unknown y_scale {y_scale!r}")


def antisymmetrised_sum(params: ModelParams, x, y, y_scale: str = "a") -> complex:
    """sum_sigma sign(sigma) psi(sigma x, y) / (y-sinh product * x-sinh product).

    Uses y_k - y_j in the y-sinh and no constant.
    """
    x = as_points(x)
    y = as_points(y, x.size)
    N, a, p = x.size, params.a, params.p
    check_separation(x)
    perms = list(itertools.permutations(range(N)))
    xs = np.array([x[list(s)] for s in perms])
    signs = np.array([sign_of_permutation(s) for s in perms], dtype=float)
    num = complex(np.sum(signs * psi_eval_batch(params, xs, np.broadcast_to(y, xs.shape))))
    den = 1.0 + 0j
    ydiv = _y_div(y_scale, a)
    n = np.arange(-p, p + 1)
    for j, k in pairs(N):
        den *= complex(sinh2(np.pi * (y[k] - y[j]) / ydiv))
        den *= complex(np.prod(sinh2(np.pi * (x[k] - x[j] + 1j * n) / a)))
    return num / den


def phi_closed_form(params: ModelParams, x, y, convention: Convention = DEFAULT_CONVENTION) -> complex:
    """Phi_N(x, y) at coupling m from the antisymmetrised psi_N."""
    x = as_points(x)
    return closed_constant(params, x.size, convention) * antisymmetrised_sum(params, x, y, convention.y_scale)


# --- probes --------------------------------------------------------------------

def separated_points(rng: np.random.Generator, N: int, sep: float = MIN_SEPARATION,
                     lo: float = -1.0, hi: float = 1.0) -> np.ndarray:
    """Uniform points in [lo, hi]^N with pairwise gaps >= sep (rejection sampling)."""
    if N > 1 and (N - 1) * sep >= hi - lo:
        raise DomainError(f"cannot place {N} points {sep} apart in [{lo}, {hi}]")
    for _ in range(10000):
        pts = rng.uniform(lo, hi, N)
        if N == 1 or np.min(np.diff(np.sort(pts))) >= sep:
            return pts
    raise DomainError("rejection sampling for separated points did not converge")


def calibration_probes(seed: int = 7, count: int = 10) -> list[tuple[np.ndarray, np.ndarray]]:
    """N = 2 probes; every third one triples y1 - y2 to discriminate the y-sinh scaling."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        x = separated_points(rng, 2)
        y = separated_points(rng, 2, lo=-0.5, hi=0.5)
        if i % 3 == 2:
            y = np.array([y[1] + 3 * (y[0] - y[1]), y[1]])
        out.append((x, y))
    return out


def digest(*arrays) -> str:
    h = hashlib.sha256()
    for arr in arrays:
        h.update(np.ascontiguousarray(np.asarray(arr, dtype=complex)).tobytes())
        h.update(b"|")
    return h.hexdigest()[:16]


# --- calibration -----------------------------------------------------------------

@dataclass
class Calibration:
    a: float
    m: int
    probes: int
    stage1: list[dict]
    mean_ratio: complex | None
    printed_constant_ratio: complex | None
    matches: list[dict]
    selected: Convention | None
    degenerate: list[str]
    status: str

    def as_dict(self) -> dict:
        d = asdict(self)
        d["selected"] = None if self.selected is None else self.selected.as_dict()
        return d


def _spread(ratios: Sequence[complex]) -> tuple[complex, float]:
    r = np.asarray(ratios, dtype=complex)
    mean = complex(np.mean(r))
    return mean, float(np.max(np.abs(r - mean)) / max(abs(mean), 1e-300))


def calibrate(params: ModelParams, probes: Sequence[tuple] | None = None,
              quadrature: Callable | None = None) -> Calibration:
    """Two-stage calibration of the closed form against quadrature at N = 2.

    Stage 1 keeps the (y_scale, base_case) pairs for which quadrature over
    the uncalibrated closed form is constant across probes.  Stage 2 finds
    the constant conventions whose total constant equals that ratio.
    ``quadrature(params, x, y, base_case)`` may replace phi_quadrature.
    """
    probes = calibration_probes() if probes is None else list(probes)
    if not probes:
        raise PreconditionError("calibration needs at least one probe")
    for x, y in probes:
        if len(x) != 2 or len(y) != 2:
            raise PreconditionError("calibration probes must have N = 2")
    quad = quadrature or (lambda p, x, y, b: phi_quadrature(p, x, y, base_case=b))
    stage1, constant = [], []
    quad_cache: dict[str, list] = {}
    for base_case in ("j1", "printed"):
        try:
            quad_cache[base_case] = [quad(params, x, y, base_case) for x, y in probes]
        except AccuracyError as exc:
            quad_cache[base_case] = exc
    for y_scale in ("a", "one"):
        unc = [antisymmetrised_sum(params, x, y, y_scale) for x, y in probes]
        for base_case in ("j1", "printed"):
            q = quad_cache[base_case]
            row = {"y_scale": y_scale, "base_case": base_case}
            if isinstance(q, Exception):
                row.update(status="quadrature_failed", reason=str(q), spread=None, mean_ratio=None)
            else:
                mean, spread = _spread([qi / ui for qi, ui in zip(q, unc)])
                row.update(spread=spread, mean_ratio=mean,
                           status="constant" if spread <= STAGE1_TOL else "not_constant")
                if spread <= STAGE1_TOL:
                    constant.append((y_scale, base_case, mean))
            stage1.append(row)
    if not constant:
        return Calibration(params.a, params.m, len(probes), stage1, None, None, [], None, [],
                           "failed: no candidate gives a constant ratio")
    y_scale, base_case, mean = constant[0]
    printed_ratio = mean / closed_constant(params, 2, PRINTED_CONVENTION)
    matches = []
    for kappa, orient, w_sign, cn_form in itertools.product((2, 1), ("printed", "reversed"),
                                                           ("printed", "alt"), ("printed", "composed")):
        conv = Convention(y_scale, base_case, kappa, orient, w_sign, cn_form)
        c = closed_constant(params, 2, conv)
        if abs(mean / c - 1) <= STAGE2_TOL:
            matches.append(conv)
    if not matches:
        return Calibration(params.a, params.m, len(probes), stage1, mean, printed_ratio, [], None, [],
                           "failed: constant ratio matches no candidate")
    degenerate = [name for name in ("kappa", "orientation", "w_sign", "cn_form")
                  if len({getattr(c, name) for c in matches}) > 1]

    def rank(c: Convention):
        return tuple(PREFERENCE[n].index(getattr(c, n)) if n in PREFERENCE else 0 for n in ("w_sign", "cn_form"))

    selected = min(matches, key=rank)
    status = "ok" if len(constant) == 1 else "ok: several structural candidates constant, first taken"
    return Calibration(params.a, params.m, len(probes), stage1, mean, printed_ratio,
                       [c.as_dict() for c in matches], selected, degenerate, status)


def require_calibration(cal: Calibration) -> Convention:
    if cal.selected is None:
        raise CalibrationError(cal.status)
    return cal.selected


# --- reports ----------------------------------------------------------------------

@dataclass
class CaseResult:
    case_index: int
    digest: str
    residual: float
    tolerance: float
    label: str = ""

    @property
    def passed(self) -> bool:
        # NaN residuals fail
        return bool(self.residual <= self.tolerance)


@dataclass
class VerificationReport:
    suite_name: str
    cases: list[CaseResult] = field(default_factory=list)
    ratio_diagnostics: dict | None = None
    runtime_ms: int = 0
    calibration: dict | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.cases), default=0.0)


# --- suites ----------------------------------------------------------------------

SUITES = ("ba_normalization", "vanishing", "self_duality", "eigenvalue", "antisymmetry",
          "shift_invariance", "similarity", "contour_vs_residue", "theorem_n2", "theorem_n3", "prop_psiN")

DEFAULT_TOLERANCE = {
    "ba_normalization": 1e-10, "vanishing": 1e-9, "vanishing_sum": 1e-10, "self_duality": 1e-9,
    "eigenvalue": 1e-8, "antisymmetry": 1e-10, "shift_invariance": 1e-9, "similarity": 1e-9,
    "contour_vs_residue": 1e-8, "contour_deformation": 1e-9, "theorem_n2": 1e-6, "theorem_n2_spread": 1e-5,
    "theorem_n3": 1e-3, "prop_psiN": 1e-6, "prop_psiN_n3": 1e-4,
}

DEFAULT_PROBES = {
    "ba_normalization": 5, "vanishing": 5, "self_duality": 10, "eigenvalue": 3, "antisymmetry": 3,
    "shift_invariance": 5, "similarity": 1, "contour_vs_residue": 10, "theorem_n2": 10, "theorem_n3": 3,
    "prop_psiN": 5,
}

FIXED_N = {"contour_vs_residue": 2, "theorem_n2": 2, "theorem_n3": 3}


class _Ctx:
    def __init__(self, cfg: RunConfig, suite: str):
        self.cfg = cfg
        self.suite = suite
        self.params = ModelParams(cfg.a if cfg.a is not None else 2.5, cfg.m if cfg.m is not None else 2)
        N = FIXED_N.get(suite)
        if N is not None and cfg.N is not None and cfg.N != N:
            raise ConfigError(f"N: suite {suite} runs at N={N}, got N={cfg.N}")
        self.N = N if N is not None else (cfg.N if cfg.N is not None else 2)
        self.count = cfg.probes if cfg.probes is not None else DEFAULT_PROBES[suite]
        self.seed = cfg.seed

    def tol(self, key: str) -> float:
        return float(self.cfg.tolerances.get(key, DEFAULT_TOLERANCE[key]))

    def rng(self, i: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, SUITES.index(self.suite), i])

    def complex_point(self, rng) -> np.ndarray:
        """i x + small real part, x separated: a BA-native point with distinct imaginary parts."""
        return 1j * separated_points(rng, self.N) + rng.uniform(-0.3, 0.3, self.N)


def _suite_ba_normalization(ctx: _Ctx, i: int) -> list[CaseResult]:
    P = ctx.params
    x = separated_points(ctx.rng(i), ctx.N)
    tol = ctx.tol("ba_normalization")
    cache: dict = {}
    r1 = rel_residual(varphi_coeffs(P, x, cache).leading, varphi_leading_closed(P, x))
    r2 = rel_residual(psi_coeffs(P, x, cache).leading, psi_leading_closed(P, 1j * x))
    d = digest(x)
    return [CaseResult(i, d, r1, tol, "varphi_leading"), CaseResult(i, d, r2, tol, "psi_leading")]


def _suite_vanishing(ctx: _Ctx, i: int) -> tuple[list[CaseResult], dict]:
    P, N = ctx.params, ctx.N
    rng = ctx.rng(i)
    out = []
    u = 1j * separated_points(rng, N)
    tol = ctx.tol("vanishing")
    diag = {}
    for j, k in pairs(N):
        for s in range(1, P.p + 1):
            v = rng.uniform(-1, 1, N) + 1j * rng.uniform(-0.5, 0.5, N)
            v[k] = v[j] - rng.integers(0, 2) * P.a
            out.append(CaseResult(i, digest(u, v), check_vanishing(P, j, k, s, u, v), tol,
                                  f"j={j},k={k},s={s}"))
    d = separated_points(rng, 2)
    for s in range(1, P.m):
        total, scale = vanishing_sum(P, s, d[1] - d[0])
        out.append(CaseResult(i, digest(d), abs(total) / scale, ctx.tol("vanishing_sum"), f"sum,s={s}"))
        total, scale = vanishing_sum(P, s, d[1] - d[0], "printed")
        diag[f"probe={i},s={s}"] = {"printed_form_residual": abs(total) / scale}
    return out, diag


def _suite_self_duality(ctx: _Ctx, i: int) -> list[CaseResult]:
    P = ctx.params
    rng = ctx.rng(i)
    u, v = ctx.complex_point(rng), ctx.complex_point(rng)
    r = rel_residual(psi_native(P, u, v), psi_native(P, v, u))
    return [CaseResult(i, digest(u, v), r, ctx.tol("self_duality"))]


def _suite_eigenvalue(ctx: _Ctx, i: int) -> list[CaseResult]:
    P, N = ctx.params, ctx.N
    rng = ctx.rng(i)
    u, v = ctx.complex_point(rng), ctx.complex_point(rng)
    tol = ctx.tol("eigenvalue")
    return [CaseResult(i, digest(u, v), eigen_residual(P, r, u, v, slot), tol, f"r={r},slot={slot}")
            for r in range(1, N + 1) for slot in ("second", "first")]


def _suite_antisymmetry(ctx: _Ctx, i: int) -> list[CaseResult]:
    P, N = ctx.params, ctx.N
    rng = ctx.rng(i)
    x, y = separated_points(rng, N), rng.uniform(-1, 1, N)
    tol = ctx.tol("antisymmetry")
    return [CaseResult(i, digest(x, y), check_antisymmetry(P, x, y, s), tol, "sigma=" + "".join(map(str, s)))
            for s in itertools.permutations(range(N))]


def _suite_shift_invariance(ctx: _Ctx, i: int) -> list[CaseResult]:
    P, N = ctx.params, ctx.N
    rng = ctx.rng(i)
    z, u = separated_points(rng, N), rng.uniform(-1, 1, N)
    deltas = [np.ones(N, int), -np.ones(N, int), np.where(rng.uniform(size=N) < 0.5, 1, -1)]
    tol = ctx.tol("shift_invariance")
    out = [CaseResult(i, digest(z, u, dl), check_shift_invariance(P, z, u, dl), tol,
                      "delta=" + ",".join(map(str, dl))) for dl in deltas]
    out.append(CaseResult(i, digest(z), check_shift_invariance(P, z, np.zeros(N), deltas[2]), tol, "u=0"))
    return out


def _suite_similarity(ctx: _Ctx, i: int) -> tuple[list[CaseResult], dict]:
    P, N = ctx.params, ctx.N
    rng = ctx.rng(i)
    x = separated_points(rng, N) * 0.5 + 1j * rng.uniform(-0.2, 0.2, N)
    fs = exponential_test_functions(N, rng, 5)
    tol = ctx.tol("similarity")
    out, diag = [], {}
    for r in range(1, N + 1):
        d = similarity_check(P, r, x, fs, tol)
        dg = digest(x, [r])
        out.append(CaseResult(i, dg, d.residual, tol, f"r={r},as_printed"))
        out.append(CaseResult(i, dg, max(d.ratio_spread, d.constant_residual), tol, f"r={r},up_to_constant"))
        out.append(CaseResult(i, dg, d.residual_symmetric, tol, f"r={r},symmetric_normalisation"))
        diag[f"probe={i},r={r}"] = {
            "verdict": d.verdict,
            "residual_as_printed": d.residual,
            "residual_alternative_rhs": d.residual_alternative,
            "ratio_mean": complex(np.mean(d.ratios)),
            "ratio_spread": d.ratio_spread,
            "predicted_constant": d.predicted_constant,
            "constant_residual": d.constant_residual,
            "residual_symmetric": d.residual_symmetric,
        }
    return out, diag


def _suite_contour_vs_residue(ctx: _Ctx, i: int) -> list[CaseResult]:
    P = ctx.params
    rng = ctx.rng(i)
    x, y = separated_points(rng, 2), rng.uniform(-1, 1, 2)
    ref = varphi_eval(P, x, y)
    c1 = default_contours(P, x)[0]
    lo = (P.m - 1) / 2
    c2 = ContourSpec(c1.center, 0.3 * c1.half_width / 0.5, lo + 0.6 * (P.a / 2 - lo), c1.nodes_per_side)
    v1, v2 = varphi2_contour(P, x, y, c1), varphi2_contour(P, x, y, c2)
    d = digest(x, y)
    return [CaseResult(i, d, rel_residual(v1, ref), ctx.tol("contour_vs_residue"), "contour_vs_residue"),
            CaseResult(i, d, rel_residual(v1, v2), ctx.tol("contour_deformation"), "deformation")]


def _quad_spec(ctx: _Ctx, x) -> QuadratureSpec | None:
    if not ctx.cfg.quadrature:
        return None
    base = default_quadrature(ctx.params, x)
    d = asdict(base)
    d.update(ctx.cfg.quadrature)
    return QuadratureSpec(float(d["truncation_L"]), int(d["panels"]), int(d["nodes_per_panel"]), float(d["target_tol"]))


def _theorem_probe(ctx: _Ctx, i: int) -> tuple[np.ndarray, np.ndarray]:
    rng = ctx.rng(i)
    return separated_points(rng, ctx.N), separated_points(rng, ctx.N, lo=-0.5, hi=0.5)


def _suite_theorem(ctx: _Ctx, i: int) -> tuple[list[CaseResult], dict]:
    P = ctx.params
    x, y = _theorem_probe(ctx, i)
    quad = phi_quadrature(P, x, y, _quad_spec(ctx, x), base_case=DEFAULT_CONVENTION.base_case)
    unc = antisymmetrised_sum(P, x, y, DEFAULT_CONVENTION.y_scale)
    closed = closed_constant(P, ctx.N, DEFAULT_CONVENTION) * unc
    key = "theorem_n2" if ctx.N == 2 else "theorem_n3"
    extra = {"ratio_uncalibrated": quad / unc,
             "ratio_to_printed_constant": quad / (unc * closed_constant(P, ctx.N, PRINTED_CONVENTION))}
    return [CaseResult(i, digest(x, y), rel_residual(quad, closed), ctx.tol(key))], extra


def _suite_prop_psiN(ctx: _Ctx, i: int) -> tuple[list[CaseResult], dict]:
    P = ctx.params
    rng = ctx.rng(i)
    x, y = separated_points(rng, ctx.N), rng.uniform(-1, 1, ctx.N)
    ref = psi_eval(P, x, y)
    val = psi_residue_formula(P, x, y)
    printed = psi_residue_formula(P, x, y, prefactor="printed")
    key = "prop_psiN" if ctx.N == 2 else "prop_psiN_n3"
    return [CaseResult(i, digest(x, y), rel_residual(val, ref), ctx.tol(key))], {"printed_prefactor_ratio": printed / ref}


_RUNNERS = {
    "ba_normalization": _suite_ba_normalization,
    "vanishing": _suite_vanishing,
    "self_duality": _suite_self_duality,
    "eigenvalue": _suite_eigenvalue,
    "antisymmetry": _suite_antisymmetry,
    "shift_invariance": _suite_shift_invariance,
    "similarity": _suite_similarity,
    "contour_vs_residue": _suite_contour_vs_residue,
    "theorem_n2": _suite_theorem,
    "theorem_n3": _suite_theorem,
    "prop_psiN": _suite_prop_psiN,
}


def run_suite(config: RunConfig) -> VerificationReport:
    """Run the suite named in ``config`` with seeded probes; deterministic given the seed."""
    suite = config.suite
    if suite not in _RUNNERS:
        raise ConfigError(f"suite: unknown suite {suite!r}")
    ctx = _Ctx(config, suite)
    t0 = time.perf_counter()
    runner = _RUNNERS[suite]
    idx = range(ctx.count)
    if config.workers > 1 and ctx.count > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            results = list(pool.map(lambda i: runner(ctx, i), idx))
    else:
        results = [runner(ctx, i) for i in idx]
    cases, extras = [], []
    for res in results:
        if isinstance(res, tuple):
            cases.extend(res[0])
            extras.append(res[1])
        else:
            cases.extend(res)
    report = VerificationReport(suite, cases)
    if suite in ("similarity", "vanishing"):
        for e in extras:
            report.diagnostics.update(e)
    elif suite in ("theorem_n2", "theorem_n3"):
        report.calibration = dict(DEFAULT_CONVENTION.as_dict(), source="calibrated on a=2.5, m=2 at N=2")
        ratios = [e["ratio_uncalibrated"] for e in extras]
        if ratios:
            mean, spread = _spread(ratios)
            report.ratio_diagnostics = {"mean_ratio": mean, "relative_spread": spread}
            if suite == "theorem_n2":
                report.cases.append(CaseResult(ctx.count, "ratio_spread", spread, ctx.tol("theorem_n2_spread"),
                                               "stage1_ratio_spread"))
            report.diagnostics["expected_constant"] = closed_constant(ctx.params, ctx.N, DEFAULT_CONVENTION)
            report.diagnostics["ratio_to_printed_constant"] = complex(np.mean([e["ratio_to_printed_constant"] for e in extras]))
    elif suite == "prop_psiN" and extras:
        report.diagnostics["printed_prefactor_ratio"] = complex(np.mean([e["printed_prefactor_ratio"] for e in extras]))
        report.diagnostics["predicted_printed_ratio"] = 2.0 ** (-ctx.params.m * (ctx.N - 1))
    elif suite == "eigenvalue":
        report.diagnostics["normalisation"] = "symmetric"
    report.runtime_ms = int(round((time.perf_counter() - t0) * 1000))
    return report
