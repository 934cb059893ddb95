"""Brute-force ground truth for solid-angle lattice sums.

Everything here enumerates lattice points geometrically and weights them by
classified solid angles (interior 1, facet-interior 1/2, vertex = tangent-cone
angle); no transform-space machinery is involved, so these values make honest
oracles for the analytic evaluators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .angles import sample_lp_ball, solid_angle_exact_2d, solid_angle_exact_2d_l1
from .errors import UnsupportedCombination
from .geometry import Polytope, half_spaces, lattice_points, vertex_simple_cones
from .numerics import Estimate

INCIDENCE_TOL = 1e-9


@dataclass(frozen=True)
class OracleResult:
    value: float
    std_error: float
    n_lattice_points: int
    per_point_weights: tuple | None = None


def _mc_halfspace_cone_angle(A_tight: np.ndarray, p: float, n_samples: int,
                             seed_entropy) -> tuple:
    """MC solid angle of the cone {y : A_tight y <= 0} at its apex."""
    d = A_tight.shape[1]
    rng = np.random.default_rng(np.random.SeedSequence(seed_entropy))
    Y = sample_lp_ball(rng, n_samples, d, p)
    frac = float(np.mean(np.all(Y @ A_tight.T <= 1e-12, axis=1)))
    se = math.sqrt(frac * (1.0 - frac) / n_samples)
    return frac, (se if se > 0 else 1.0 / n_samples)


def point_weight(P: Polytope, t: float, m, p: float = 2.0, method: str = "auto",
                 n_samples: int = 20_000, seed: int = 0) -> tuple:
    """Solid angle of the dilate t*P at a point, with its standard error.

    Classification is by facet incidence: no tight facet gives weight 1, one
    tight facet gives 1/2, and a vertex gets its tangent-cone angle (exact in
    the plane for p in {1, 2}, Monte Carlo otherwise).
    """
    exact_ok = P.dim <= 2 and p in (1.0, 2.0)
    if method == "exact2d" and not exact_ok:
        raise UnsupportedCombination(f"exact weights need dim <= 2 and p in {{1,2}}, got dim={P.dim}, p={p}")
    if method not in ("auto", "exact2d", "mc"):
        raise ValueError(f"unknown method {method!r}")
    use_exact = exact_ok and method != "mc"

    m = np.asarray(m, dtype=float)
    A, b = half_spaces(P)
    slack = t * b - A @ m
    if np.min(slack) < -INCIDENCE_TOL:
        return 0.0, 0.0  # outside the closed dilate
    tight = np.abs(slack) <= INCIDENCE_TOL
    n_tight = int(tight.sum())
    if n_tight == 0:
        return 1.0, 0.0
    if n_tight == 1 or P.dim == 1:
        return 0.5, 0.0

    vertex_dists = np.linalg.norm(t * P.vertices - m, axis=1)
    v_index = int(np.argmin(vertex_dists))
    at_vertex = vertex_dists[v_index] <= 1e-7 * max(1.0, abs(t))

    if use_exact and P.dim == 2 and at_vertex:
        # dilation leaves tangent-cone directions unchanged
        cone = vertex_simple_cones(P, v_index)[0]
        est = solid_angle_exact_2d(cone) if p == 2.0 else solid_angle_exact_2d_l1(cone)
        return est.value, 0.0

    # tangent cone of t*P at m in H-form; MC over an l^p ball at the apex
    entropy = [seed] + [int(c) + 2**20 for c in np.round(m)]
    return _mc_halfspace_cone_angle(A[tight], p, n_samples, entropy)


def discrete_volume(P: Polytope, t: float, p: float = 2.0, method: str = "auto",
                    n_samples: int = 20_000, seed: int = 0,
                    keep_weights: bool = False) -> OracleResult:
    """Solid-angle weighted lattice-point count of the dilate t*P."""
    pts = lattice_points(P, t)
    total = 0.0
    var = 0.0
    weights = []
    for m in pts:
        w, se = point_weight(P, t, m, p=p, method=method, n_samples=n_samples, seed=seed)
        total += w
        var += se * se
        if keep_weights:
            weights.append((tuple(int(v) for v in m), w))
    return OracleResult(
        value=total,
        std_error=math.sqrt(var),
        n_lattice_points=len(pts),
        per_point_weights=tuple(weights) if keep_weights else None,
    )


def alpha_oracle(P: Polytope, s, p: float = 2.0, method: str = "auto",
                 n_samples: int = 20_000, seed: int = 0):
    """Phase-weighted oracle sum_m omega_P(m) exp(2*pi*i*<s, m>) over P's
    lattice points; ground truth for the Brion identity's polytope side."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    total = 0j
    var = 0.0
    for m in lattice_points(P, 1.0):
        w, se = point_weight(P, 1.0, m, p=p, method=method, n_samples=n_samples, seed=seed)
        phase = np.exp(2j * math.pi * complex(np.dot(m.astype(float), s)))
        total += w * phase
        var += (se * abs(phase)) ** 2
    return Estimate(complex(total), math.sqrt(var), "oracle")
