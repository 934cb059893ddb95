"""Dilation solid-angle sums and identity verifiers.

``macdonald_sum`` evaluates the vertex-cone formula for the phase-weighted
solid-angle sum of a dilated polytope,

    sum_v |det K(v)| / (-2 pi i)^d
        * sum_m exp(2 pi i t <v, m+s>) phi_hat(m+s) / prod_j <w_j(v), m+s>,

with the eps -> 0 limit taken by Richardson extrapolation.  ``macdonald_volume``
realizes the s -> 0 limit along a certified generic direction by a polynomial
fit in the scale parameter.  The verifiers compute residuals of the cone
reciprocity, Brion, dilation-reciprocity, and Brianchon-Gram identities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ImaginaryResidue, PoleHit, PoorFit
from .geometry import (
    Polytope,
    SimpleCone,
    face_tangent_cone_active_facets,
    faces,
    half_spaces,
    load_polytope,
    normalize_generator,
    vertex_simple_cones,
    vertex_tangent_cone,
)
from .lattice import ConeSumTerm, alpha_polytope_direct, damped_transform_sum, extrapolate_eps
from .numerics import Estimate, polynomial_fit_intercept, richardson_extrapolants, richardson_limit
from .oracle import discrete_volume
from .transforms import DampedSumConfig

DIRECTION_POLE_TOL = 1e-8
SIGMA_POINTS = 7
SIGMA_SPAN = 30.0
SIGMA_PHASE_BUDGET = 0.3   # max phase (radians) of the fastest term at sigma_max


@dataclass(frozen=True)
class LimitConfig:
    """Controls the s -> 0 limit: direction, sigma schedule, fit degree.

    Fields left at None are derived from the polytope: direction defaults to
    the all-ones vector (with seeded rational fallbacks until the pole-distance
    certificate passes), the sigma schedule is scaled so the fastest phase
    stays within SIGMA_PHASE_BUDGET at its largest point, and the fit degree
    defaults to dim + 1.
    """

    direction: tuple | None = None
    sigma_schedule: tuple | None = None
    fit_degree: int | None = None


@dataclass(frozen=True)
class MacdonaldEvaluation:
    t: float
    s: tuple
    value: complex
    error: float
    per_vertex: tuple  # ((vertex coords), partial value) pairs; sums to value


@dataclass(frozen=True)
class IdentityReport:
    identity: str
    inputs: dict
    lhs: complex
    rhs: complex
    residual: float
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class GramCheckResult:
    passed: bool
    n_points: int
    n_failures: int
    counterexamples: tuple


def sqrt3_triangle() -> Polytope:
    """Triangle with vertices (0,0), (0,1), (sqrt(3),0); the standard
    irrational fixture."""
    return load_polytope(2, [(0.0, 0.0), (0.0, 1.0), (math.sqrt(3.0), 0.0)])


# ----------------------------- core evaluators ------------------------------

def _vertex_terms(P: Polytope, t: float):
    """Per-vertex signed simple-cone terms for the dilate t*P (apex t*v,
    generators unchanged: cones at the origin are dilation invariant)."""
    out = []
    for i in range(P.n_vertices):
        cones = vertex_simple_cones(P, i)
        apex = t * P.vertices[i]
        out.append((P.vertices[i], [ConeSumTerm(1.0, c.shifted(apex)) for c in cones]))
    return out


def macdonald_sum(P: Polytope, t: float, s, cfg: DampedSumConfig | None = None) -> MacdonaldEvaluation:
    """Phase-weighted solid-angle sum of the dilate t*P at s, by damped
    vertex-cone transform sums extrapolated to eps -> 0.

    Convergence is judged on the vertex-summed totals: individual cone sums
    need not converge at real s, but their sum equals a finite direct-space
    sum and does.  Per-vertex partials are the same linear extrapolation
    applied vertex by vertex, so they add up to the value exactly.
    """
    cfg = cfg or DampedSumConfig()
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    eps = list(cfg.eps_schedule)
    vertex_terms = _vertex_terms(P, t)
    per_eps = np.empty((len(vertex_terms), len(eps)), dtype=complex)
    gross = np.zeros(len(eps))
    for i, (_, terms) in enumerate(vertex_terms):
        for k, e in enumerate(eps):
            res = damped_transform_sum(terms, s, cfg, e)
            per_eps[i, k] = res.value
            gross[k] += res.gross
    noise = 3e-15 * float(gross.max())
    total_est = richardson_limit(eps, per_eps.sum(axis=0), noise_floor=noise)
    partials = []
    total = 0j
    for (vertex, _), row in zip(vertex_terms, per_eps):
        partial = complex(richardson_extrapolants(eps, row)[-1])
        partials.append((tuple(float(v) for v in vertex), partial))
        total += partial
    return MacdonaldEvaluation(
        t=float(t), s=tuple(complex(v) for v in s),
        value=complex(total), error=float(total_est.error), per_vertex=tuple(partials),
    )


def _auto_sigma_schedule(P: Polytope, t: float, direction: np.ndarray) -> tuple:
    freq = abs(t) * float(np.max(np.abs(P.vertices @ direction)))
    smax = SIGMA_PHASE_BUDGET / (2.0 * math.pi * freq + 1.0)
    return tuple(np.geomspace(smax, smax / SIGMA_SPAN, SIGMA_POINTS))


def certify_direction(cones, direction, sigmas, R: int) -> float:
    """Min over the lattice box, sigma schedule, and generators of
    |<w_j, m + sigma*x>|; the direction is generic when this stays positive."""
    x = np.asarray(direction, dtype=float)
    d = x.size
    ms = np.arange(-R, R + 1, dtype=float)
    best = math.inf
    for cone in cones:
        for w in cone.generators:
            vals = w[0] * ms
            for k in range(1, d):
                vals = vals[..., None] + w[k] * ms
            vals = vals.ravel()
            a = float(np.dot(w, x))
            for sig in sigmas:
                best = min(best, float(np.min(np.abs(vals + sig * a))))
    return best


def _fallback_directions(d: int, n: int = 20):
    rng = np.random.default_rng(2024)
    for _ in range(n):
        num = rng.integers(1, 12, size=d)
        den = rng.integers(1, 5, size=d)
        yield num / den


def macdonald_volume(P: Polytope, t: float, limit_cfg: LimitConfig | None = None,
                     cfg: DampedSumConfig | None = None,
                     limit_order: str = "eps_then_sigma") -> Estimate:
    """Solid-angle discrete volume of the dilate t*P: the s -> 0 limit of
    macdonald_sum along a certified generic direction.

    Evaluates the damped vertex-cone sum on a (sigma, eps) grid.  In the
    default order each sigma is extrapolated to eps -> 0 first and a
    polynomial of the configured degree is fitted in sigma; fitting with one
    extra degree supplies the truncation part of the error estimate.  The
    alternative order ("sigma_then_eps") fits in sigma at each fixed eps and
    extrapolates the intercepts; it exists for limit-interchange experiments.
    Raises ImaginaryResidue when the intercept keeps a significant imaginary
    part and PoorFit when residuals dwarf every accounted error source.
    """
    if limit_order not in ("eps_then_sigma", "sigma_then_eps"):
        raise ValueError(f"unknown limit_order {limit_order!r}")
    cfg = cfg or DampedSumConfig()
    lc = limit_cfg or LimitConfig()
    d = P.dim
    all_cones = [c for i in range(P.n_vertices) for c in vertex_simple_cones(P, i)]
    R = cfg.radius_for(min(cfg.eps_schedule))

    candidates = []
    if lc.direction is not None:
        candidates.append(np.asarray(lc.direction, dtype=float))
    else:
        candidates.append(np.ones(d))
    candidates.extend(_fallback_directions(d))

    chosen = None
    for x in candidates:
        sigmas = lc.sigma_schedule or _auto_sigma_schedule(P, t, x)
        if certify_direction(all_cones, x, sigmas, R) > DIRECTION_POLE_TOL:
            chosen = (x, tuple(float(v) for v in sigmas))
            break
    if chosen is None:
        raise PoleHit("no certified generic direction found")
    x, sigmas = chosen

    terms = [term for _, vterms in _vertex_terms(P, t) for term in vterms]
    eps = list(cfg.eps_schedule)
    grid = np.empty((len(sigmas), len(eps)), dtype=complex)
    gross = 0.0
    for j, sig in enumerate(sigmas):
        for k, e in enumerate(eps):
            res = damped_transform_sum(terms, sig * x, cfg, e)
            grid[j, k] = res.value
            gross = max(gross, res.gross)
    noise = 3e-15 * gross
    degree = lc.fit_degree if lc.fit_degree is not None else d + 1
    next_degree = min(degree + 1, len(sigmas) - 1)

    if limit_order == "eps_then_sigma":
        ests = [richardson_limit(eps, grid[j], noise_floor=noise) for j in range(len(sigmas))]
        values = np.array([est.value for est in ests])
        point_err = max(est.error for est in ests)
        c0, rms = polynomial_fit_intercept(sigmas, values, degree)
        c0_next, _ = polynomial_fit_intercept(sigmas, values, next_degree)
    else:
        intercepts = []
        residuals = []
        alt = []
        for k in range(len(eps)):
            ck, rk = polynomial_fit_intercept(sigmas, grid[:, k], degree)
            intercepts.append(ck)
            residuals.append(rk)
            alt.append(polynomial_fit_intercept(sigmas, grid[:, k], next_degree)[0])
        est = richardson_limit(eps, intercepts, noise_floor=noise)
        c0 = est.value
        c0_next = richardson_limit(eps, alt, noise_floor=noise).value
        point_err = est.error
        rms = residuals[-1]
    fit_err = abs(c0_next - c0)

    if rms > 10.0 * (point_err + fit_err + 1e-14):
        raise PoorFit(f"fit residual {rms:.2e} exceeds 10x accounted errors ({point_err:.2e}, {fit_err:.2e})")
    if abs(c0.imag) > 1e-6 * (1.0 + abs(c0.real)):
        raise ImaginaryResidue(f"imaginary part {c0.imag:.2e} at the intercept")
    return Estimate(float(c0.real), float(fit_err + point_err + abs(c0.imag)), "sigma_fit")


# ----------------------------- verifiers ------------------------------------

def verify_cone_reciprocity(cone: SimpleCone, shift, s, cfg: DampedSumConfig | None = None,
                            tolerance: float = 1e-5) -> IdentityReport:
    """Reciprocity of the damped cone sum: value at (shift + K, -s) against
    (-1)^d times the value at (-shift + K, s); exact term-by-term under the
    m -> -m relabeling, so both the fixed-eps and extrapolated residuals are
    reported."""
    cfg = cfg or DampedSumConfig()
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    d = cone.dim
    shift = np.asarray(shift, dtype=float)
    sign = (-1.0) ** d
    plus = [ConeSumTerm(1.0, cone.shifted(cone.apex + shift))]
    minus = [ConeSumTerm(1.0, cone.shifted(cone.apex - shift))]

    per_eps = []
    for e in cfg.eps_schedule:
        lv = damped_transform_sum(plus, -s, cfg, e).value
        rv = damped_transform_sum(minus, s, cfg, e).value
        per_eps.append((e, abs(lv - sign * rv)))
    lhs = extrapolate_eps(lambda e: damped_transform_sum(plus, -s, cfg, e).value, cfg)
    rhs = extrapolate_eps(lambda e: damped_transform_sum(minus, s, cfg, e).value, cfg)
    residual = abs(lhs.value - sign * rhs.value)
    return IdentityReport(
        identity="cone_reciprocity",
        inputs={"shift": shift.tolist(), "s": [complex(v) for v in s], "dim": d},
        lhs=lhs.value, rhs=sign * rhs.value,
        residual=float(residual), tolerance=tolerance, passed=bool(residual < tolerance),
        details={"per_eps_residuals": per_eps, "lhs_error": lhs.error, "rhs_error": rhs.error},
    )


def verify_brion(P: Polytope, s, cfg: DampedSumConfig | None = None, p: float = 2.0,
                 tolerance: float = 1e-4) -> IdentityReport:
    """Brion-type identity: the finite solid-angle sum over P's lattice points
    equals the sum of the damped, extrapolated vertex-cone sums."""
    cfg = cfg or DampedSumConfig()
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    lhs = alpha_polytope_direct(P, s, p=p)
    rhs = macdonald_sum(P, 1.0, s, cfg)
    residual = abs(lhs.value - rhs.value)
    return IdentityReport(
        identity="brion",
        inputs={"s": [complex(v) for v in s], "dim": P.dim, "p": p},
        lhs=lhs.value, rhs=rhs.value,
        residual=float(residual), tolerance=tolerance, passed=bool(residual < tolerance),
        details={"per_vertex": rhs.per_vertex, "lhs_error": lhs.error, "rhs_error": rhs.error},
    )


def verify_macdonald(P: Polytope, t: float, s, cfg: DampedSumConfig | None = None,
                     tolerance: float = 1e-5) -> IdentityReport:
    """Dilation reciprocity: value at (-t, s) against (-1)^d value at (t, -s)."""
    cfg = cfg or DampedSumConfig()
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    sign = (-1.0) ** P.dim
    lhs = macdonald_sum(P, -t, s, cfg)
    rhs = macdonald_sum(P, t, -s, cfg)
    residual = abs(lhs.value - sign * rhs.value)
    return IdentityReport(
        identity="macdonald_reciprocity",
        inputs={"t": t, "s": [complex(v) for v in s], "dim": P.dim},
        lhs=lhs.value, rhs=sign * rhs.value,
        residual=float(residual), tolerance=tolerance, passed=bool(residual < tolerance),
        details={"lhs_error": lhs.error, "rhs_error": rhs.error},
    )


def conjecture_check(P: Polytope, cfg: DampedSumConfig | None = None,
                     limit_cfg: LimitConfig | None = None) -> Estimate:
    """Value of the discrete volume at t = 0 (a theorem for odd dimension,
    a conjectured zero otherwise)."""
    return macdonald_volume(P, 0.0, limit_cfg=limit_cfg, cfg=cfg)


def brianchon_gram_check(P: Polytope, n_points: int = 100, seed: int = 0) -> GramCheckResult:
    """Exact indicator identity 1_P(x) = sum_F (-1)^dim(F) 1_{K_F}(x) at random
    points; points within 1e-9 of any facet plane are resampled."""
    A, b = half_spaces(P)
    face_list = faces(P)
    actives = [face_tangent_cone_active_facets(P, f) for f in face_list]
    lo = P.vertices.min(axis=0)
    hi = P.vertices.max(axis=0)
    center = 0.5 * (lo + hi)
    halfwidth = np.maximum(0.5 * (hi - lo), 1.0)
    rng = np.random.default_rng(seed)

    failures = []
    for _ in range(n_points):
        while True:
            x = center + (rng.random(P.dim) * 4.0 - 2.0) * halfwidth
            if np.min(np.abs(A @ x - b)) > 1e-9:
                break
        lhs = int(np.all(A @ x <= b))
        rhs = sum(f.sign * int(np.all(A[act] @ x <= b[act])) for f, act in zip(face_list, actives))
        if lhs != rhs:
            failures.append((tuple(float(v) for v in x), lhs, int(rhs)))
    return GramCheckResult(
        passed=not failures, n_points=n_points,
        n_failures=len(failures), counterexamples=tuple(failures[:5]),
    )


# ----------------------------- triangle fixture report ----------------------

def _triangle_rational_factors(z1, z2, t: float):
    """Combined numerator and common denominator of the sqrt(3)-triangle's
    vertex-cone sum at a (complex) argument z = (z1, z2)."""
    r3 = math.sqrt(3.0)
    f = r3 * z1 - z2 - r3 * z1 * np.exp(2j * math.pi * t * z2) + z2 * np.exp(2j * math.pi * t * r3 * z1)
    g = z1 * z2 * (r3 * z1 - z2)
    return f, g


def _curvature_ratio_closed_form(m, t: float, x) -> complex:
    """Second sigma-derivative ratio f''(0)/g''(0) of the combined factors at
    s = sigma*x, from differentiating the explicit product terms."""
    r3 = math.sqrt(3.0)
    m1, m2 = m
    x1, x2 = x
    e2 = np.exp(2j * math.pi * t * m2)
    e1 = np.exp(2j * math.pi * t * r3 * m1)
    fpp = e2 * (-4 * r3 * 1j * math.pi * t * x1 * x2 + 4 * r3 * (math.pi * t) ** 2 * x2 ** 2 * m1) \
        + e1 * (4 * r3 * 1j * math.pi * t * x1 * x2 - 12 * (math.pi * t) ** 2 * x1 ** 2 * m2)
    gpp = 2.0 * (x1 * x2 * (r3 * m1 - m2) + x1 * (r3 * x1 - x2) * m2 + x2 * (r3 * x1 - x2) * m1)
    return complex(fpp / gpp)


def _fd_second_derivative(func, h: float) -> complex:
    return (func(h) - 2.0 * func(0.0) + func(-h)) / (h * h)


def triangle_example(t_values=(0.5, 1.0, 1.5), cfg: DampedSumConfig | None = None,
                     limit_cfg: LimitConfig | None = None, oracle_samples: int = 20_000) -> dict:
    """Full report for the sqrt(3)-triangle fixture.

    (a) canonically scaled tangent-cone determinants, expected (1, sqrt(3), 1);
    (b) discrete volume at each dilation against the enumeration oracle;
    (c) consistency of the combined-factor curvature ratio: finite-difference
        second derivatives at steps 1e-3 and 1e-4, Richardson-extrapolated,
        against the closed-form ratio, at the sample point m = (1, 1).
    """
    cfg = cfg or DampedSumConfig()
    P = sqrt3_triangle()

    dets = []
    for i in range(3):
        cone = vertex_tangent_cone(P, i)
        G = np.array([normalize_generator(w) for w in cone.generators])
        dets.append(abs(float(np.linalg.det(G))))
    expected = (1.0, math.sqrt(3.0), 1.0)
    det_errors = [abs(a - b) for a, b in zip(dets, expected)]

    volume_rows = []
    for t in t_values:
        analytic = macdonald_volume(P, t, limit_cfg=limit_cfg, cfg=cfg)
        orc = discrete_volume(P, t, p=2.0, n_samples=oracle_samples)
        tol = max(1e-2, 3.0 * orc.std_error)
        diff = abs(analytic.value - orc.value)
        volume_rows.append({
            "t": float(t), "analytic": float(np.real(analytic.value)),
            "analytic_error": analytic.error, "oracle": orc.value,
            "oracle_std_error": orc.std_error, "abs_diff": float(diff),
            "tolerance": tol, "pass": bool(diff <= tol),
        })

    m = (1.0, 1.0)
    t_sample = float(t_values[0]) if t_values else 0.5
    x = (1.0, 1.0)

    def f_of(sig):
        return _triangle_rational_factors(m[0] + sig * x[0], m[1] + sig * x[1], t_sample)[0]

    def g_of(sig):
        return _triangle_rational_factors(m[0] + sig * x[0], m[1] + sig * x[1], t_sample)[1]

    # consistency of the combined factors with the actual vertex-cone sum
    cone_sum = 0.0 + 0j
    for i in range(3):
        c = vertex_simple_cones(P, i)[0]
        z = np.array([m[0] + 1e-2 * x[0], m[1] + 1e-2 * x[1]], dtype=complex)
        denom = np.prod(c.generators @ z)
        cone_sum += abs(c.det) * np.exp(2j * math.pi * t_sample * np.dot(P.vertices[i], z)) / denom
    factor_gap = abs(cone_sum * g_of(1e-2) - f_of(1e-2))

    ratios = []
    for h in (1e-3, 1e-4):
        ratios.append(_fd_second_derivative(f_of, h) / _fd_second_derivative(g_of, h))
    h1, h2 = 1e-3, 1e-4
    fd_ratio = (h1 ** 2 * ratios[1] - h2 ** 2 * ratios[0]) / (h1 ** 2 - h2 ** 2)
    closed = _curvature_ratio_closed_form(m, t_sample, x)
    curv_err = abs(fd_ratio - closed)
    curv_pass = curv_err <= 1e-6 * (1.0 + abs(closed))

    return {
        "determinants": dets,
        "determinants_expected": list(expected),
        "determinant_errors": det_errors,
        "determinants_pass": bool(max(det_errors) < 1e-12),
        "volume_checks": volume_rows,
        "volumes_pass": bool(all(r["pass"] for r in volume_rows)),
        "curvature_check": {
            "sample_m": list(m), "t": t_sample, "direction": list(x),
            "fd_ratio": complex(fd_ratio), "closed_form": complex(closed),
            "abs_diff": float(curv_err), "factor_consistency_gap": float(factor_gap),
            "pass": bool(curv_pass),
        },
    }
