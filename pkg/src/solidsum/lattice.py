"""Damped Poisson-summation lattice sums over cones and polytopes.

Every evaluator works at a fixed damping level eps and truncates the lattice
to the sup-norm box ||m||_inf <= R; limits eps -> 0 are always taken
explicitly through ``extrapolate_eps``.  Transform-space sums accumulate

    sum_m sum_terms coef * cone_transform(cone, m + s) * phi_hat(m + s)

and direct-space sums accumulate (1_body * phi_eps)(m) * exp(2*pi*i*<s, m>).
The bilinear pairing is used throughout; nothing is conjugated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .angles import _clip_cutoff, _cone_halfplanes_2d, soft_indicator
from .errors import ConvergenceDomain, PoleHit, UnsupportedDimension
from .geometry import Polytope, SimpleCone, half_spaces, lattice_points
from .numerics import Estimate, richardson_limit
from .oracle import point_weight
from .transforms import DampedSumConfig, phi_hat_1d_grid

POLE_GUARD = 1e-10     # minimum |<w_j, m+s>| over the enumerated box
CHUNK_LIMIT = 300_000  # full-box vectorization threshold before slab chunking

TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class ConeSumTerm:
    """Signed simple cone fed to the transform-space engine."""

    coefficient: complex
    cone: SimpleCone


@dataclass(frozen=True)
class DampedSumResult:
    """Truncated damped sum, the magnitude collected on the outer shell, and
    the gross magnitude sum (the cancellation scale: rounding noise in
    ``value`` is a small multiple of ``gross`` times machine epsilon)."""

    value: complex
    tail: float
    gross: float = 0.0


@lru_cache(maxsize=256)
def _phi_tables(cfg: DampedSumConfig, eps: float, s_tuple: tuple, R: int):
    """Per-coordinate transform values phi_hat_1d(m_k + s_k), m_k in [-R, R]."""
    ms = np.arange(-R, R + 1)
    tables = []
    for sk in s_tuple:
        z = ms + sk
        if cfg.p == 2.0:
            tables.append(np.exp(-math.pi * eps * z * z))
        else:
            tables.append(phi_hat_1d_grid(cfg, eps, z))
    return tuple(tables)


def _box_chunks(R: int, d: int):
    """Lattice box in deterministic chunks (slabs along the first axis when
    the full box would be large)."""
    ms = np.arange(-R, R + 1)
    if (2 * R + 1) ** d <= CHUNK_LIMIT or d == 1:
        yield np.stack(np.meshgrid(*([ms] * d), indexing="ij"), axis=-1).reshape(-1, d)
        return
    rest = np.stack(np.meshgrid(*([ms] * (d - 1)), indexing="ij"), axis=-1).reshape(-1, d - 1)
    for i0 in ms:
        col = np.full((rest.shape[0], 1), i0, dtype=rest.dtype)
        yield np.hstack([col, rest])


def damped_transform_sum(terms, s, cfg: DampedSumConfig, eps: float) -> DampedSumResult:
    """Truncated transform-space sum of signed cone terms at damping eps.

    Raises PoleHit when some enumerated m + s comes within 1e-10 of a
    denominator zero; the caller should perturb s or pick another direction.
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    d = s.size
    R = cfg.radius_for(eps)
    tables = _phi_tables(cfg, float(eps), tuple(complex(v) for v in s), R)
    pref = (-TWO_PI_I) ** (-d)

    prepared = []
    for term in terms:
        cone = term.cone
        if cone.dim != d:
            raise ValueError(f"cone dimension {cone.dim} != len(s) = {d}")
        amp = complex(term.coefficient) * pref * abs(cone.det)
        apex = cone.apex if np.max(np.abs(cone.apex)) > 1e-15 else None
        prepared.append((amp, cone.generators, apex))

    total = 0j
    tail = 0.0
    gross = 0.0
    for M in _box_chunks(R, d):
        Z = M + s
        phi_vals = tables[0][M[:, 0] + R].copy()
        for k in range(1, d):
            phi_vals *= tables[k][M[:, k] + R]
        shell = np.max(np.abs(M), axis=1) == R
        any_shell = bool(shell.any())
        for amp, W, apex in prepared:
            denoms = Z @ W.T
            mags = np.abs(denoms)
            row = int(np.argmin(np.min(mags, axis=1)))
            if mags[row].min() <= POLE_GUARD:
                j = int(np.argmin(mags[row]))
                m_bad = tuple(int(v) for v in M[row])
                raise PoleHit(
                    f"pole at m={m_bad}: |<w_{j}, m+s>| = {mags[row, j]:.3e}",
                    generator_index=j, lattice_point=m_bad,
                )
            contrib = amp * phi_vals / np.prod(denoms, axis=1)
            if apex is not None:
                contrib = contrib * np.exp(TWO_PI_I * (Z @ apex))
            total += contrib.sum()
            gross += float(np.abs(contrib).sum())
            if any_shell:
                tail += float(np.abs(contrib[shell]).sum())
    return DampedSumResult(complex(total), tail, gross)


def _body_halfspaces(body, d: int):
    if isinstance(body, Polytope):
        return half_spaces(body)
    if isinstance(body, SimpleCone):
        if d == 1:
            g = float(body.generators[0, 0])
            sgn = -1.0 if g > 0 else 1.0
            return np.array([[sgn]]), np.array([sgn * float(body.apex[0])])
        if d == 2:
            return _cone_halfplanes_2d(body.apex, body.generators[0], body.generators[1])
        raise UnsupportedDimension("direct sums over cones support dim <= 2")
    raise TypeError(f"unsupported body type {type(body).__name__}")


def damped_direct_sum(body, s, cfg: DampedSumConfig, eps: float) -> DampedSumResult:
    """Truncated direct-space sum sum_m (1_body * phi_eps)(m) e^{2 pi i <s,m>}.

    For a cone the series only converges when -Im(s) lies strictly inside the
    polar cone; otherwise ConvergenceDomain is raised.  Polytopes accept any s.
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    d = s.size
    if isinstance(body, SimpleCone):
        pairing = body.generators @ (-s.imag)
        if np.max(pairing) >= 0.0:
            raise ConvergenceDomain("-Im(s) is not interior to the polar cone")
    A, b = _body_halfspaces(body, d)
    cut = _clip_cutoff(cfg.p, cfg.c, eps)
    R = cfg.radius_for(eps)

    total = 0j
    tail = 0.0
    gross = 0.0
    for M in _box_chunks(R, d):
        margins = b[None, :] - M @ A.T
        weights = np.full(M.shape[0], np.nan)
        weights[np.min(margins, axis=1) >= cut] = 1.0
        weights[np.max(-margins, axis=1) >= cut] = 0.0
        for i in np.flatnonzero(np.isnan(weights)):
            weights[i] = soft_indicator(body, M[i].astype(float), cfg.p, eps)
        phases = np.exp(TWO_PI_I * (M @ s))
        contrib = weights * phases
        total += contrib.sum()
        gross += float(np.abs(contrib).sum())
        shell = np.max(np.abs(M), axis=1) == R
        tail += float(np.abs(contrib[shell]).sum())
    return DampedSumResult(complex(total), tail, gross)


def extrapolate_eps(evaluate, cfg: DampedSumConfig) -> Estimate:
    """eps -> 0 limit of a damped evaluation over cfg.eps_schedule.

    ``evaluate`` is either a callable eps -> complex or a mapping
    {eps: complex}.  Richardson with a leading O(eps) error model; the error
    estimate is the difference of the last two extrapolants.
    """
    if callable(evaluate):
        eps = list(cfg.eps_schedule)
        vals = [complex(evaluate(e)) for e in eps]
    else:
        items = sorted(evaluate.items(), key=lambda kv: -kv[0])
        eps = [k for k, _ in items]
        vals = [complex(v) for _, v in items]
    return richardson_limit(eps, vals)


def alpha_polytope_direct(P: Polytope, s, p: float = 2.0,
                          n_samples: int = 20_000, seed: int = 0) -> Estimate:
    """Solid-angle generating sum of a polytope: finite sum over its lattice
    points of omega_P(m) * exp(2*pi*i*<s, m>), with exact planar weights when
    available (dim <= 2, p in {1, 2}) and Monte Carlo weights otherwise."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    total = 0j
    var = 0.0
    for m in lattice_points(P, 1.0):
        w, se = point_weight(P, 1.0, m, p=p, method="auto", n_samples=n_samples, seed=seed)
        phase = np.exp(TWO_PI_I * complex(np.dot(m.astype(float), s)))
        total += w * phase
        var += (se * abs(phase)) ** 2
    return Estimate(complex(total), math.sqrt(var), "direct")
