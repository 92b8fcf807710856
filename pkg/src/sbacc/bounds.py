"""Closed-form error bounds for Berrut-coded computation.

``lebesgue_bound`` bounds the Lebesgue constant of Berrut's interpolant on
the first-kind Chebyshev points left after ``S`` erasures,
``theorem1_bound`` bounds the straggler-only approximation error and
``theorem2_bound`` splits the mean squared error with adversaries and
precision noise into four terms:

* ``t1`` interpolation error from using ``N1`` of the ``N`` points,
* ``t2`` precision noise carried through the interpolation weights,
* ``t3`` residual noise after a perfect localization,
* ``t4`` adversarial noise that survives an imperfect localization.

All quantities are per matrix entry. ``p_loc`` is the probability of an
*imperfect* localization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Callable

import numpy as np

from .config import ExperimentConfig
from .numerics import BerrutInterpolant, NodeSet, berrut_weight_matrix, cheb_first_kind

# grid used for the weight-ratio maxima and its exclusion radius around nodes
GRID_POINTS = 2001
NODE_EXCLUSION = 1e-6


def mesh_ratio(S: int) -> float:
    """Local mesh-ratio constant ``R = (S+1)(S+4) pi^2 / 8``."""
    return (S + 1) * (S + 4) * math.pi ** 2 / 8


def lebesgue_bound(N: int, S: int) -> float:
    """Upper bound on the Lebesgue constant after ``S`` of ``N`` points are lost."""
    if S < 0 or N - S < 2:
        raise ValueError(f"need N - S >= 2 and S >= 0 (N={N}, S={S})")
    return (mesh_ratio(S) + 1) * (1 + math.pi ** 2 * (S + 1) * math.log(N - S))


def _delta(M: int, d1: float, d2: float) -> float:
    return d2 if M % 2 == 1 else d1 + d2


def _t1_core(N: int, S: int, d1: float, d2: float) -> float:
    delta = _delta(N - S, d1, d2)
    return 2 * delta * (1 + mesh_ratio(S)) * math.sin((S + 1) * math.pi / (2 * N))


def theorem1_bound(N: int, S: int, d1: float, d2: float) -> float:
    """Straggler-only approximation-error bound.

    ``d1`` and ``d2`` are sup-norms of the first and second derivatives of
    ``g = f(u(z))``; only ``d2`` enters when ``N - S`` is odd.
    """
    if not 0 <= S < N - 2:
        raise ValueError(f"need 0 <= S < N - 2 (N={N}, S={S})")
    if d1 < 0 or d2 < 0:
        raise ValueError("derivative norms must be non-negative")
    return _t1_core(N, S, d1, d2)


def default_grid(points: int = GRID_POINTS) -> np.ndarray:
    return np.linspace(-1.0, 1.0, points)


def weight_ratio_max(nodes: np.ndarray, z_grid: np.ndarray | None = None,
                     exclusion: float = NODE_EXCLUSION) -> float:
    """``max_{r, z} |w_r(z)|**2`` of the Berrut cardinal functions over the grid.

    ``w_r(z) = (1/|z - z_r|) / |sum_k (-1)**k / (z - z_k)|``, which equals the
    product form ``|prod_{i != r}(z - z_i)| / |sum_k (-1)**k prod_{i != k}(z - z_i)|``.
    Grid points within ``exclusion`` of a node are skipped.
    """
    nodes = np.asarray(nodes, dtype=float)
    z = default_grid() if z_grid is None else np.asarray(z_grid, dtype=float)
    gap = np.abs(z[:, None] - nodes[None, :]).min(axis=1)
    z = z[gap > exclusion]
    if z.size == 0:
        raise ValueError("every grid point lies on a node")
    return float((berrut_weight_matrix(nodes, z) ** 2).max())


def derivative_norms(f: Callable[[np.ndarray], np.ndarray], alpha: NodeSet,
                     blocks: np.ndarray, points: int = 4001) -> tuple[float, float]:
    """Entrywise sup-norms of ``g'`` and ``g''`` for ``g(z) = f(u(z))``.

    Central finite differences on a uniform grid over ``[-1, 1]``.
    """
    if points < 5:
        raise ValueError("need at least 5 grid points")
    z = np.linspace(-1.0, 1.0, points)
    h = z[1] - z[0]
    g = f(BerrutInterpolant(alpha, blocks).eval_many(z))
    d1 = (g[2:] - g[:-2]) / (2 * h)
    d2 = (g[2:] - 2 * g[1:-1] + g[:-2]) / h ** 2
    return float(np.abs(d1).max()), float(np.abs(d2).max())


def falling_ratio(n1: int, n: int, a: int) -> float:
    """``n1 (n1-1) ... (n1-a+1) / (n (n-1) ... (n-a+1))``."""
    if a > n1:
        raise ValueError(f"A={a} exceeds N1={n1}")
    out = 1.0
    for i in range(a):
        out *= (n1 - i) / (n - i)
    return out


@dataclass(frozen=True)
class BoundTerms:
    delta: float
    R: float
    lebesgue_bound: float
    t1: float
    t2: float
    t3: float
    t4: float
    total: float

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def theorem2_bound(cfg: ExperimentConfig, d1: float, d2: float,
                   z_grid: np.ndarray | None = None, nodes: np.ndarray | None = None,
                   p_loc: float | None = None, sigma_q2: float | None = None) -> BoundTerms:
    """Four-term bound on the per-entry mean squared error.

    The interpolation term treats the ``N - N1`` unused points like
    stragglers, so ``R``, the Lebesgue bound and the sine factor use
    ``S_eff = N - N1`` and ``Delta`` follows the parity of ``N1``.
    ``nodes`` are the reconstruction points (default: ``N1`` evenly spread
    first-kind points). ``p_loc`` and ``sigma_q2`` default to the config
    values, and to 0 when those are unset.
    """
    N, n1, A = cfg.N, cfg.n1_effective, cfg.A
    if A > n1:
        raise ValueError(f"A={A} exceeds N1={n1}")
    if d1 < 0 or d2 < 0:
        raise ValueError("derivative norms must be non-negative")
    p = cfg.p_loc if p_loc is None else p_loc
    p = 0.0 if p is None else float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError("p_loc must lie in [0, 1]")
    sq2 = cfg.sigma_q2 if sigma_q2 is None else sigma_q2
    sq2 = 0.0 if sq2 is None else float(sq2)
    if sq2 < 0:
        raise ValueError("sigma_q2 must be non-negative")
    if nodes is None:
        full = cheb_first_kind(N).points
        nodes = full[np.round(np.linspace(0, N - 1, n1)).astype(int)]
    s_eff = N - n1
    delta = _delta(n1, d1, d2)
    R = mesh_ratio(s_eff)
    lam = lebesgue_bound(N, s_eff) if n1 >= 2 else float("inf")
    wmax = weight_ratio_max(nodes, z_grid)
    sigma_a = math.sqrt(cfg.sigma_a2)
    sigma_q = math.sqrt(sq2)
    t1 = _t1_core(N, s_eff, d1, d2) ** 2
    t2 = n1 * cfg.sigma_p2 * wmax
    if A > 0:
        t3 = 2 * sigma_q * sigma_a + (1 - p) * A * sq2 * wmax
        t4 = p * falling_ratio(n1, N, A) * 2 * A * cfg.sigma_a2 * wmax
    else:
        t3 = t4 = 0.0
    return BoundTerms(delta, R, lam, t1, t2, t3, t4, t1 + t2 + t3 + t4)


__all__ = [
    "BoundTerms", "default_grid", "derivative_norms", "falling_ratio", "lebesgue_bound",
    "mesh_ratio", "theorem1_bound", "theorem2_bound", "weight_ratio_max",
]
