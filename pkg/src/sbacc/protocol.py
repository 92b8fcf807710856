"""Master/worker pipeline for SBACC plus the BACC and localize-and-discard baselines.

One run is one trial: the master encodes the dataset into ``N`` shares with a
Berrut interpolant, workers apply ``f`` (some straggle, some add adversarial
noise, all add precision noise), and the master decodes entrywise with the
DCT code before reconstructing ``f(X_j)`` by Berrut interpolation at the
dataset nodes.

Every random draw of a trial comes from ``cfg.seed``, and the draws do not
depend on the scheme or on ``A`` beyond taking a prefix of a fixed adversary
ordering. Runs that differ only in scheme or adversary count are therefore
paired: same data, same stragglers, same noise realizations.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import dct_code as dc
from .config import ExperimentConfig
from .numerics import BerrutInterpolant, NodeSet, berrut_weight_matrix, cheb_first_kind, cheb_second_kind


class Scheme(str, enum.Enum):
    SBACC = "sbacc"
    BACC = "bacc"
    DISCARD = "discard"


class NotReconstructableError(ValueError):
    """Fewer than two returns are available for interpolation."""


# --------------------------------------------------------------------------- functions


@dataclass(frozen=True)
class TargetFunction:
    """Entrywise real map applied to a matrix."""

    name: str
    apply: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)
    degree: int | None = None

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.apply(np.asarray(x, dtype=float))


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def reciprocal_shift(c: float = 1.0) -> TargetFunction:
    return TargetFunction(f"recip{c:g}", lambda x: 1.0 / (x + c))


def polynomial(coeffs: Sequence[float]) -> TargetFunction:
    """``sum_k coeffs[k] x**k`` applied entrywise."""
    coeffs = tuple(float(c) for c in coeffs)
    return TargetFunction(
        "poly" + "_".join(f"{c:g}" for c in coeffs),
        lambda x: np.polynomial.polynomial.polyval(x, coeffs),
        degree=len(coeffs) - 1,
    )


BUILTIN_FUNCTIONS: dict[str, TargetFunction] = {
    "exp": TargetFunction("exp", np.exp),
    "sin": TargetFunction("sin", np.sin),
    "relu": TargetFunction("relu", lambda x: np.maximum(x, 0.0)),
    "sigmoid": TargetFunction("sigmoid", _sigmoid),
    "recip": TargetFunction("recip", lambda x: 1.0 / (x + 1.0)),
    "identity": TargetFunction("identity", lambda x: x.copy(), degree=1),
    "square": TargetFunction("square", np.square, degree=2),
}

NON_POLYNOMIAL = ("exp", "sin", "relu", "sigmoid", "recip")


def get_function(name: str | TargetFunction) -> TargetFunction:
    if isinstance(name, TargetFunction):
        return name
    if name in BUILTIN_FUNCTIONS:
        return BUILTIN_FUNCTIONS[name]
    if name.startswith("recip"):
        return reciprocal_shift(float(name[len("recip"):]))
    if name.startswith("poly"):
        return polynomial(float(c) for c in name[len("poly"):].split("_"))
    raise KeyError(f"unknown target function {name!r}")


# --------------------------------------------------------------------------- data types


@dataclass(frozen=True)
class Dataset:
    blocks: np.ndarray
    alpha: NodeSet

    def __post_init__(self):
        b = np.asarray(self.blocks, dtype=float)
        if b.ndim != 3:
            raise ValueError("blocks must have shape (K, m, n)")
        if len(self.alpha) != b.shape[0]:
            raise ValueError("one node per block required")
        object.__setattr__(self, "blocks", b)

    @property
    def K(self) -> int:
        return self.blocks.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.blocks.shape[1:]


def make_dataset(blocks: np.ndarray) -> Dataset:
    blocks = np.asarray(blocks, dtype=float)
    return Dataset(blocks, cheb_first_kind(blocks.shape[0]))


def random_dataset(cfg: ExperimentConfig, seed=None) -> Dataset:
    """Uniform ``[data_low, data_high)`` blocks drawn from ``seed`` (default ``cfg.seed``)."""
    rng = np.random.default_rng(_stream(cfg.seed if seed is None else seed, "data"))
    blocks = rng.uniform(cfg.data_low, cfg.data_high, size=(cfg.K, cfg.m, cfg.n))
    return make_dataset(blocks)


@dataclass
class WorkerReturn:
    worker_index: int
    payload: np.ndarray | None
    is_straggler: bool = False
    is_adversary: bool = False

    def __post_init__(self):
        if self.is_straggler and self.payload is not None:
            raise ValueError("a straggler returns no payload")
        if not self.is_straggler and self.payload is None:
            raise ValueError("a non-straggler must return a payload")


@dataclass
class DecodeStats:
    """Aggregate of the entrywise decoder reports of one run."""

    nu_hist: dict[int, int] = field(default_factory=dict)
    entries: int = 0
    perfect_localizations: int = 0
    residual_var: float = 0.0
    decoded: bool = False
    located: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))
    ambiguous: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))

    @property
    def p_loc_hat(self) -> float:
        """Fraction of entries whose located set equals the true adversary set."""
        return self.perfect_localizations / self.entries if self.entries else 1.0


@dataclass
class RunResult:
    outputs: np.ndarray
    reference: np.ndarray
    per_block_rel_error: np.ndarray
    avg_rel_error: float
    avg_rel_error_db: float
    decode_stats: DecodeStats
    used_workers: np.ndarray
    stragglers: np.ndarray
    adversaries: np.ndarray

    def mse(self) -> float:
        """Mean squared entrywise error against the centralized computation."""
        return float(np.mean((self.outputs - self.reference) ** 2))


# --------------------------------------------------------------------------- randomness

# local-search starts of the node selection
SELECTION_RESTARTS = 8

_STREAMS = {"data": 0, "scenario": 1, "workers": 2, "selection": 3}


def _stream(seed, name: str) -> np.random.SeedSequence:
    base = seed if isinstance(seed, (list, tuple)) else [int(seed)]
    return np.random.SeedSequence([*base, _STREAMS[name]])


def trial_seed(base_seed: int, trial: int) -> tuple[int, int]:
    """Seed for trial ``trial`` of a sweep; independent of axis value and scheme."""
    return (int(base_seed), int(trial))


@dataclass(frozen=True)
class Scenario:
    stragglers: np.ndarray
    adversaries: np.ndarray


def draw_scenario(cfg: ExperimentConfig, seed=None) -> Scenario:
    """Straggler set and adversary set (a prefix of a fixed random order)."""
    rng = np.random.default_rng(_stream(cfg.seed if seed is None else seed, "scenario"))
    order = rng.permutation(cfg.N)
    stragglers = np.sort(order[: cfg.S])
    survivors = rng.permutation(np.sort(order[cfg.S:]))
    adversaries = np.sort(survivors[: cfg.A])
    return Scenario(stragglers, adversaries)


# --------------------------------------------------------------------------- master / workers


def evaluation_nodes(n_workers: int, scheme: Scheme | str) -> NodeSet:
    scheme = Scheme(scheme)
    return cheb_second_kind(n_workers) if scheme is Scheme.BACC else cheb_first_kind(n_workers)


def encode_shares(ds: Dataset, n_workers: int, scheme: Scheme | str = Scheme.SBACC) -> np.ndarray:
    """Shares ``u(z_i)`` for every worker, shape ``(N, m, n)``."""
    if n_workers < ds.K:
        raise ValueError(f"N={n_workers} workers cannot carry K={ds.K} blocks")
    if n_workers < 3:
        raise ValueError("need at least 3 workers")
    itp = BerrutInterpolant(ds.alpha, ds.blocks)
    return itp.eval_many(evaluation_nodes(n_workers, scheme).points)


def simulate_workers(shares: np.ndarray, f: TargetFunction | str, stragglers: Sequence[int],
                     adversaries: Sequence[int], sigma_p2: float, sigma_a2: float,
                     rng_seed=0, adversary_density: float = 1.0) -> list[WorkerReturn]:
    """Worker returns ``f(U_i) + P_i (+ E_i)``; stragglers return nothing.

    Noise for every worker is drawn whether or not it is used, so the
    realization seen by worker ``i`` depends only on the seed.
    """
    f = get_function(f)
    shares = np.asarray(shares, dtype=float)
    n_workers = shares.shape[0]
    F, adv = set(int(i) for i in stragglers), set(int(i) for i in adversaries)
    if F & adv:
        raise ValueError("a worker cannot be both straggler and adversary")
    if len(F) > n_workers - 2:
        raise ValueError("at least two workers must not straggle")
    if sigma_p2 < 0 or sigma_a2 < 0:
        raise ValueError("noise variances must be non-negative")
    rng = np.random.default_rng(_stream(rng_seed, "workers"))
    precision = rng.standard_normal(shares.shape) * np.sqrt(sigma_p2)
    attack = rng.standard_normal(shares.shape) * np.sqrt(sigma_a2)
    mask = rng.random(shares.shape) < adversary_density
    out = []
    for i in range(n_workers):
        if i in F:
            out.append(WorkerReturn(i, None, is_straggler=True))
            continue
        payload = f(shares[i])
        if sigma_p2 > 0:
            payload = payload + precision[i]
        if i in adv:
            payload = payload + np.where(mask[i], attack[i], 0.0)
        out.append(WorkerReturn(i, payload, is_adversary=i in adv))
    return out


# --------------------------------------------------------------------------- reconstruction


def select_spread(available: Sequence[int], n1: int) -> np.ndarray:
    """``n1`` of the available workers, evenly spaced along their ordering.

    Evaluation points are sorted by angle, so even spacing in index keeps the
    Chebyshev-like density of the chosen nodes.
    """
    available = np.asarray(sorted(int(i) for i in available), dtype=int)
    if n1 >= len(available):
        return available
    picks = np.round(np.linspace(0, len(available) - 1, n1)).astype(int)
    return available[picks]


def select_by_residual(available: Sequence[int], scores: np.ndarray, n1: int) -> np.ndarray:
    """``n1`` workers with the smallest scores, ties by lower worker index."""
    available = np.asarray(sorted(int(i) for i in available), dtype=int)
    order = np.lexsort((available, np.asarray(scores)[available]))
    return np.sort(available[order[:n1]])


def proxy_objective(masks: np.ndarray, points: np.ndarray, shares: np.ndarray,
                    blocks: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Re-interpolation error of the shares for a batch of candidate node sets.

    For each boolean row of ``masks`` (over ``points``) the Berrut interpolant
    of the shares through the selected points is evaluated at ``alpha`` and
    compared with the data blocks. The master can compute this without
    knowing ``f``, and it ranks node sets almost exactly as the
    reconstruction error of smooth ``f`` does.
    """
    masks = np.atleast_2d(masks)
    signs = np.where((np.cumsum(masks, axis=1) - 1) % 2 == 0, 1.0, -1.0) * masks
    diff = alpha[:, None] - points[None, :]
    exact = diff == 0.0
    terms = signs[:, None, :] / np.where(exact, 1.0, diff)[None]
    # a selected point at alpha_k interpolates it exactly
    hit = exact[None] & masks[:, None, :].astype(bool)
    rows = hit.any(axis=2)
    terms = np.where(rows[:, :, None], hit.astype(float), terms)
    C, K, M = terms.shape
    flat = shares.reshape(M, -1)
    rec = (terms.reshape(C * K, M) @ flat) / terms.sum(axis=2).reshape(C * K, 1)
    err = rec.reshape(C, K, -1) - blocks.reshape(1, K, -1)
    return (err ** 2).sum(axis=(1, 2))


def _swap_descent(mask: np.ndarray, points, shares, blocks, alpha) -> tuple[np.ndarray, float]:
    cur = proxy_objective(mask, points, shares, blocks, alpha)[0]
    while True:
        ins, outs = np.flatnonzero(mask), np.flatnonzero(~mask)
        if len(outs) == 0 or len(ins) == 0:
            return mask, cur
        cand = np.repeat(mask[None], len(ins) * len(outs), axis=0)
        r = np.arange(len(cand))
        cand[r, np.repeat(ins, len(outs))] = False
        cand[r, np.tile(outs, len(ins))] = True
        vals = proxy_objective(cand, points, shares, blocks, alpha)
        b = int(np.argmin(vals))
        # relative margin stops cycling between numerically equal sets
        if not vals[b] < cur * (1.0 - 1e-12):
            return mask, cur
        mask, cur = cand[b], float(vals[b])


def select_by_proxy(available: Sequence[int], n1: int, points: np.ndarray, shares: np.ndarray,
                    blocks: np.ndarray, alpha: np.ndarray, restarts: int = 8,
                    seed=0) -> np.ndarray:
    """``n1`` available workers minimizing :func:`proxy_objective`.

    Best-swap local search from the evenly spread set and ``restarts - 1``
    random sets; the best local optimum wins. ``points`` and ``shares`` are
    indexed by worker. Each random start is a priority order over *all*
    workers, of which the ``n1`` available ones ranked highest are taken, so
    nested pools start (and mostly search) alike.
    """
    available = np.asarray(sorted(int(i) for i in available), dtype=int)
    M = len(available)
    if n1 >= M:
        return available
    if n1 < 2:
        raise ValueError("need n1 >= 2")
    n_workers = len(points)
    pts, sh = np.asarray(points)[available], np.asarray(shares)[available]
    rng = np.random.default_rng(_stream(seed, "selection"))
    starts = [np.round(np.linspace(0, M - 1, n1)).astype(int)]
    for _ in range(restarts - 1):
        rank = np.argsort(rng.permutation(n_workers))[available]
        starts.append(np.argsort(rank, kind="stable")[:n1])
    best, best_val = None, np.inf
    for st in starts:
        mask = np.zeros(M, dtype=bool)
        mask[st] = True
        mask, val = _swap_descent(mask, pts, sh, blocks, alpha)
        if val < best_val:
            best, best_val = mask, val
    return available[best]


def reconstruct(nodes: np.ndarray, values: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Berrut interpolant through ``(nodes, values)`` evaluated at ``alpha``.

    ``values`` has shape ``(M, m, n)`` and ``nodes`` must be sorted decreasing.
    """
    if len(nodes) < 2:
        raise NotReconstructableError("need at least two returns to interpolate")
    w = berrut_weight_matrix(np.asarray(nodes), np.asarray(alpha))
    return np.einsum("kj,jmn->kmn", w, values)


_SELECTION_CACHE: dict = {}


def choose_nodes(ds: Dataset, cfg: ExperimentConfig, scheme: Scheme | str,
                 available: Sequence[int]) -> np.ndarray:
    """Reconstruction workers for ``scheme`` among ``available`` (sorted indices).

    Depends only on the data, the pool and the seed, so it is memoized; the
    memo is a pure cache and never changes a result.
    """
    scheme = Scheme(scheme)
    available = np.asarray(sorted(int(i) for i in available), dtype=int)
    n1 = min(cfg.n1_effective, len(available))
    if n1 == len(available):
        return available
    nodes = Scheme.BACC if scheme is Scheme.BACC else Scheme.SBACC
    key = (nodes, cfg.N, n1, cfg.seed, SELECTION_RESTARTS,
           hashlib.sha1(np.ascontiguousarray(ds.blocks).tobytes()).hexdigest(),
           ds.blocks.shape, available.tobytes())
    hit = _SELECTION_CACHE.get(key)
    if hit is None:
        if len(_SELECTION_CACHE) > 4096:
            _SELECTION_CACHE.clear()
        hit = select_by_proxy(available, n1, evaluation_nodes(cfg.N, nodes).points,
                              encode_shares(ds, cfg.N, nodes), ds.blocks, ds.alpha.points,
                              SELECTION_RESTARTS, cfg.seed)
        _SELECTION_CACHE[key] = hit
    return hit.copy()


def relative_errors(outputs: np.ndarray, reference: np.ndarray) -> np.ndarray:
    num = ((outputs - reference) ** 2).sum(axis=(1, 2))
    den = (reference ** 2).sum(axis=(1, 2))
    return num / den


def to_db(x: float) -> float:
    return float(10.0 * np.log10(x)) if x > 0 else float("-inf")


def _result(ds: Dataset, f: TargetFunction, outputs: np.ndarray, stats: DecodeStats,
            used: np.ndarray, returns: Sequence[WorkerReturn]) -> RunResult:
    reference = f(ds.blocks)
    per_block = relative_errors(outputs, reference)
    avg = float(per_block.mean())
    return RunResult(
        outputs=outputs,
        reference=reference,
        per_block_rel_error=per_block,
        avg_rel_error=avg,
        avg_rel_error_db=to_db(avg),
        decode_stats=stats,
        used_workers=np.asarray(used, dtype=int),
        stragglers=np.array([r.worker_index for r in returns if r.is_straggler], dtype=int),
        adversaries=np.array([r.worker_index for r in returns if r.is_adversary], dtype=int),
    )


def _collect(returns: Sequence[WorkerReturn], n_workers: int) -> tuple[np.ndarray, np.ndarray]:
    live = sorted((r for r in returns if not r.is_straggler), key=lambda r: r.worker_index)
    positions = np.array([r.worker_index for r in live], dtype=int)
    if len(positions) and positions[-1] >= n_workers:
        raise ValueError("worker index out of range")
    if len(positions) == 0:
        raise NotReconstructableError("no worker returned a result")
    payloads = np.stack([r.payload for r in live])
    return positions, payloads


def noise_floor(cfg: ExperimentConfig, code: dc.DctCode, positions: np.ndarray) -> float:
    if cfg.noise_floor is not None:
        return cfg.noise_floor
    return dc.noise_floor_for(code, positions, float(np.sqrt(cfg.sigma_p2)), cfg.noise_margin,
                              words=cfg.m * cfg.n)


def decode_returns(code: dc.DctCode, positions: np.ndarray, payloads: np.ndarray,
                   floor: float, true_adversaries: Sequence[int] = ()
                   ) -> tuple[np.ndarray, np.ndarray, DecodeStats]:
    """Joint DCT decoding of the stacked payloads ``(M, m, n)``.

    A corrupt worker corrupts its whole matrix, so all ``m * n`` entry words
    share their error positions and are decoded together with one locator.

    Returns the corrected payloads, a per-worker residual score (squared
    distance of the corrected entries from the punctured code, summed over
    entries) and the aggregated decoder statistics.
    """
    M, rows, cols = payloads.shape
    rep = dc.decode_interleaved(code, payloads.reshape(M, -1), positions, floor)
    corrected = rep.corrected.reshape(payloads.shape)
    entries = rows * cols
    stats = DecodeStats(decoded=True, entries=entries, nu_hist={rep.est_num_errors: entries})
    if set(rep.est_locations.tolist()) == set(int(i) for i in true_adversaries):
        stats.perfect_localizations = entries
    stats.located = rep.est_locations
    stats.ambiguous = rep.ambiguous
    Q = dc.orthonormal_parity(code, positions)
    out_of_code = Q @ rep.corrected
    score = ((Q.T @ out_of_code) ** 2).sum(axis=1)
    stats.residual_var = float((out_of_code ** 2).sum(axis=0).mean() / max(M - code.k1, 1))
    return corrected, score, stats


def finish_sbacc(ds: Dataset, f: TargetFunction | str, cfg: ExperimentConfig,
                 returns: Sequence[WorkerReturn], code: dc.DctCode | None = None) -> RunResult:
    """Decode, select ``N1`` corrected returns, reconstruct and score."""
    f = get_function(f)
    code = code or dc.build_code(cfg.N, cfg.K1)
    positions, payloads = _collect(returns, cfg.N)
    if len(positions) < 2:
        raise NotReconstructableError("need at least two returns to interpolate")
    truth = [r.worker_index for r in returns if r.is_adversary]
    if len(positions) > code.k1:
        corrected, score, stats = decode_returns(
            code, positions, payloads, noise_floor(cfg, code, positions), truth)
    elif cfg.A == 0:
        # too few returns to decode; A = 0 runs reconstruct from the raw returns
        corrected, score, stats = payloads, np.zeros(len(positions)), DecodeStats()
    else:
        raise dc.NotDecodableError(f"M={len(positions)} <= K1={code.k1}")
    trusted = np.setdiff1d(positions, stats.ambiguous)
    if len(trusted) < 2:
        trusted = positions
    chosen = choose_nodes(ds, cfg, Scheme.SBACC, trusted)
    rows = np.searchsorted(positions, chosen)
    z = code.points
    outputs = reconstruct(z[chosen], corrected[rows], ds.alpha.points)
    return _result(ds, f, outputs, stats, chosen, returns)


def finish_bacc(ds: Dataset, f: TargetFunction | str, cfg: ExperimentConfig,
                returns: Sequence[WorkerReturn]) -> RunResult:
    f = get_function(f)
    positions, payloads = _collect(returns, cfg.N)
    chosen = choose_nodes(ds, cfg, Scheme.BACC, positions)
    rows = np.searchsorted(positions, chosen)
    z = cheb_second_kind(cfg.N).points
    outputs = reconstruct(z[chosen], payloads[rows], ds.alpha.points)
    return _result(ds, f, outputs, DecodeStats(), chosen, returns)


def finish_discard(ds: Dataset, f: TargetFunction | str, cfg: ExperimentConfig,
                   returns: Sequence[WorkerReturn], code: dc.DctCode | None = None) -> RunResult:
    """Localize ``cfg.A`` adversaries (known count), drop them, reconstruct the rest."""
    f = get_function(f)
    code = code or dc.build_code(cfg.N, cfg.K1)
    positions, payloads = _collect(returns, cfg.N)
    truth = set(r.worker_index for r in returns if r.is_adversary)
    stats = DecodeStats()
    survivors = positions
    if cfg.A > 0:
        if len(positions) <= code.k1:
            raise dc.NotDecodableError(f"M={len(positions)} <= K1={code.k1}")
        cap = (len(positions) - code.k1) // 2
        nu = min(cfg.A, cap)
        votes = np.zeros(cfg.N)
        stats.decoded = True
        _, rows, cols = payloads.shape
        for g in range(rows):
            for h in range(cols):
                word = dc.ReceivedWord(payloads[:, g, h], positions, code)
                synd = dc.syndrome(code, word, dc.CHEBYSHEV)
                locs = dc.locate_errors(code, synd, nu, positions, dc.CHEBYSHEV)
                votes[locs] += 1
                stats.entries += 1
                stats.nu_hist[nu] = stats.nu_hist.get(nu, 0) + 1
                if set(locs.tolist()) == truth:
                    stats.perfect_localizations += 1
        # most-voted workers first, ties by lower index
        order = np.lexsort((positions, -votes[positions]))
        flagged = positions[order[: cfg.A]]
        survivors = np.setdiff1d(positions, flagged)
    if len(survivors) < 2:
        raise NotReconstructableError("fewer than two survivors after discarding")
    chosen = choose_nodes(ds, cfg, Scheme.DISCARD, survivors)
    rows = np.searchsorted(positions, chosen)
    outputs = reconstruct(code.points[chosen], payloads[rows], ds.alpha.points)
    return _result(ds, f, outputs, stats, chosen, returns)


def _simulate(ds: Dataset, f: TargetFunction, cfg: ExperimentConfig, scheme: Scheme) -> list[WorkerReturn]:
    scen = draw_scenario(cfg)
    shares = encode_shares(ds, cfg.N, scheme)
    return simulate_workers(shares, f, scen.stragglers, scen.adversaries, cfg.sigma_p2,
                            cfg.sigma_a2, cfg.seed, cfg.adversary_density)


def run_sbacc(ds: Dataset, f: TargetFunction | str, cfg: ExperimentConfig,
              code: dc.DctCode | None = None) -> RunResult:
    f = get_function(f)
    return finish_sbacc(ds, f, cfg, _simulate(ds, f, cfg, Scheme.SBACC), code)


def run_bacc_baseline(ds: Dataset, f: TargetFunction | str, cfg: ExperimentConfig) -> RunResult:
    f = get_function(f)
    return finish_bacc(ds, f, cfg, _simulate(ds, f, cfg, Scheme.BACC))


def run_discard_baseline(ds: Dataset, f: TargetFunction | str, cfg: ExperimentConfig,
                         code: dc.DctCode | None = None) -> RunResult:
    f = get_function(f)
    return finish_discard(ds, f, cfg, _simulate(ds, f, cfg, Scheme.DISCARD), code)


RUNNERS = {
    Scheme.SBACC: run_sbacc,
    Scheme.BACC: run_bacc_baseline,
    Scheme.DISCARD: run_discard_baseline,
}


def run_scheme(scheme: Scheme | str, ds: Dataset, f, cfg: ExperimentConfig, code=None) -> RunResult:
    scheme = Scheme(scheme)
    if scheme is Scheme.BACC:
        return run_bacc_baseline(ds, f, cfg)
    return RUNNERS[scheme](ds, f, cfg, code)
