"""Real (N, K1) DCT codes and a syndrome decoder that tolerates precision noise.

The code's evaluation points are the first-kind Chebyshev points
``z_i = cos((2i+1)pi/(2N))``. Row ``k`` of the orthonormal DCT matrix is a
scaled Chebyshev polynomial ``T_k`` sampled at those points, so codewords are
samples of polynomials of degree below ``K1`` and the code behaves like a
real-valued Reed-Solomon code.

Decoding follows the usual real-BCH recipe:

1. power-sum syndrome ``s_p = sum_i W_i z_i**p r_i`` (modified parity ``T W``),
2. number of errors from the numerical rank of the syndrome Hankel matrix,
3. least-squares error-locator polynomial, evaluated on the candidate points,
4. least-squares error magnitudes on the located columns.

Stragglers are erasures at known positions: the same recipe runs on the
punctured code, whose modified parity uses the barycentric weights of the
surviving points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from scipy.linalg import hankel

from .numerics import cheb_first_kind

REL_RANK_TOL = 1e-12
# a decode must leave no more than this fraction of the syndrome unexplained
EXPLAINED_TOL = 1e-9


class NotDecodableError(ValueError):
    """The received word has too few positions (or a singular system) to decode."""


def dct_matrix(n: int) -> np.ndarray:
    """Orthonormal DCT-II matrix ``sqrt(2/N) beta(k) cos((2i+1) k pi / (2N))``."""
    if n < 1:
        raise ValueError("DCT size must be positive")
    k = np.arange(n)[:, None]
    i = np.arange(n)[None, :]
    theta = np.sqrt(2.0 / n) * np.cos((2 * i + 1) * k * np.pi / (2 * n))
    theta[0] /= np.sqrt(2.0)
    return theta


def chebyshev_t_triangle(size: int) -> np.ndarray:
    """Row ``k`` holds the monomial coefficients of ``T_k`` (lower triangular)."""
    out = np.zeros((size, size))
    for k in range(size):
        unit = np.zeros(k + 1)
        unit[k] = 1.0
        out[k, : k + 1] = npcheb.cheb2poly(unit)
    return out


def chebyshev_u_triangle(size: int) -> np.ndarray:
    """Row ``k`` holds the monomial coefficients of ``U_k``, second kind."""
    out = np.zeros((size, size))
    if size == 0:
        return out
    out[0, 0] = 1.0
    if size > 1:
        out[1, 1] = 2.0
    for k in range(2, size):
        out[k, 1:] = 2.0 * out[k - 1, :-1]
        out[k] -= out[k - 2]
    return out


@dataclass(frozen=True)
class DctCode:
    """An (N, K1) DCT code with its Vandermonde decompositions.

    ``generator = B @ vandermonde @ Z`` and ``parity = a_coef @ T @ W`` where
    ``T @ W`` is the modified parity used for syndrome decoding. ``a_coef``
    is triangular in the anti-diagonal sense: reversing its rows gives a
    lower-triangular matrix (the parity rows run from ``T_{K1}`` up to
    ``T_{N-1}``, i.e. from the highest-degree ``U`` polynomial downwards).
    """

    n: int
    k1: int
    theta: np.ndarray
    generator: np.ndarray
    parity: np.ndarray
    points: np.ndarray
    vandermonde: np.ndarray
    B: np.ndarray
    Z: np.ndarray
    T: np.ndarray
    W: np.ndarray
    a_coef: np.ndarray
    mod_parity: np.ndarray = field(repr=False)

    @property
    def redundancy(self) -> int:
        return self.n - self.k1

    def capacity(self, m: int | None = None) -> int:
        """Correctable errors for a word with ``m`` surviving positions."""
        m = self.n if m is None else m
        return max((m - self.k1) // 2, 0)


def build_code(n: int, k1: int) -> DctCode:
    if not 1 < k1 < n:
        raise ValueError(f"need 1 < k1 < n, got n={n}, k1={k1}")
    theta = dct_matrix(n)
    z = cheb_first_kind(n).points
    d = n - k1
    scale = np.sqrt(2.0 / n)

    vander = np.vander(z, k1, increasing=True).T
    beta = np.ones(k1)
    beta[0] = 1.0 / np.sqrt(2.0)
    B = beta[:, None] * chebyshev_t_triangle(k1)
    Z = scale * np.eye(n)

    # cos((N - j) t_i) = (-1)^i sin(t_i) U_{j-1}(z_i), t_i = (2i+1) pi / (2N)
    t = (2 * np.arange(n) + 1) * np.pi / (2 * n)
    W = scale * np.where(np.arange(n) % 2 == 0, 1.0, -1.0) * np.sin(t)
    T = np.vander(z, d, increasing=True).T
    a_coef = chebyshev_u_triangle(d)[::-1].copy()

    code = DctCode(
        n=n,
        k1=k1,
        theta=theta,
        generator=theta[:k1].copy(),
        parity=theta[k1:].copy(),
        points=z,
        vandermonde=vander,
        B=B,
        Z=Z,
        T=T,
        W=np.diag(W),
        a_coef=a_coef,
        mod_parity=T * W[None, :],
    )
    for arr in (code.theta, code.generator, code.parity, code.vandermonde, code.B,
                code.Z, code.T, code.W, code.a_coef, code.mod_parity):
        arr.setflags(write=False)
    return code


def encode(code: DctCode, message: Sequence[float]) -> np.ndarray:
    msg = np.asarray(message, dtype=float)
    if msg.shape != (code.k1,):
        raise ValueError(f"message must have length {code.k1}, got shape {msg.shape}")
    return msg @ code.generator


@dataclass(frozen=True)
class ReceivedWord:
    """Symbols received at the non-straggling ``positions`` of a codeword."""

    values: np.ndarray
    positions: np.ndarray
    code: DctCode = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        p = np.asarray(self.positions, dtype=int)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "positions", p)
        if v.ndim != 1 or v.shape != p.shape:
            raise ValueError("values and positions must be 1-D of equal length")
        if len(p) > 1 and np.any(np.diff(p) <= 0):
            raise ValueError("positions must be strictly increasing")
        if len(p) and (p[0] < 0 or p[-1] >= self.code.n):
            raise ValueError("position outside the code length")
        if len(p) < 2:
            raise ValueError("need at least 2 received positions")

    @classmethod
    def full(cls, code: DctCode, values) -> "ReceivedWord":
        return cls(np.asarray(values, dtype=float), np.arange(code.n), code)

    @property
    def m(self) -> int:
        return len(self.positions)

    @property
    def capacity(self) -> int:
        return self.code.capacity(self.m)


@dataclass
class DecodeReport:
    corrected: np.ndarray
    est_num_errors: int
    est_locations: np.ndarray
    est_magnitudes: np.ndarray
    syndrome_norm: float
    locator_residual: float
    magnitude_residual: float
    capacity: int


def punctured_weights(code: DctCode, positions: np.ndarray) -> np.ndarray:
    """Diagonal of the modified parity for the punctured code at ``positions``.

    These are the barycentric weights ``1 / prod_{j != i} (z_i - z_j)`` of the
    surviving points, scaled to unit 2-norm with a positive first entry. At
    full length they coincide with the diagonal of ``code.W``.
    """
    positions = np.asarray(positions, dtype=int)
    if len(positions) == code.n:
        return np.diag(code.W).copy()
    x = code.points[positions]
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    log_mag = -np.log(np.abs(diff)).sum(axis=1)
    sign = np.prod(np.sign(diff), axis=1)
    w = sign * np.exp(log_mag - log_mag.max())
    w /= np.linalg.norm(w)
    return w * np.sign(w[0])


MONOMIAL = "monomial"
CHEBYSHEV = "chebyshev"


def _check_basis(basis: str) -> None:
    if basis not in (MONOMIAL, CHEBYSHEV):
        raise ValueError(f"unknown syndrome basis {basis!r}")


def modified_parity(code: DctCode, positions: np.ndarray, basis: str = MONOMIAL) -> np.ndarray:
    """Parity ``T_p W_p`` of shape ``(M - K1, M)`` for the given positions.

    With ``basis="monomial"`` row ``p`` is ``z**p`` times the weights (the
    Vandermonde form); with ``basis="chebyshev"`` it is ``T_p(z)`` times the
    weights, which spans the same space but is far better conditioned.
    """
    _check_basis(basis)
    positions = np.asarray(positions, dtype=int)
    m = len(positions)
    if m <= code.k1:
        raise NotDecodableError(
            f"{m} received positions leave no parity for a dimension-{code.k1} code")
    if m == code.n and basis == MONOMIAL:
        return np.asarray(code.mod_parity)
    w = punctured_weights(code, positions)
    x = code.points[positions]
    if basis == MONOMIAL:
        T = np.vander(x, m - code.k1, increasing=True).T
    else:
        T = npcheb.chebvander(x, m - code.k1 - 1).T
    return T * w[None, :]


def orthonormal_parity(code: DctCode, positions: np.ndarray) -> np.ndarray:
    """Orthonormal basis (rows) of the null space of the punctured generator."""
    Q, _ = np.linalg.qr(modified_parity(code, positions, CHEBYSHEV).T)
    return Q.T


def syndrome(code: DctCode, word: ReceivedWord, basis: str = MONOMIAL) -> np.ndarray:
    """Syndrome of a received word under the modified parity.

    Zero (to rounding) exactly when the word is a punctured codeword. At full
    length with the default basis this is ``T W r``.
    """
    return modified_parity(code, word.positions, basis) @ word.values


def hankel_shape(length: int) -> tuple[int, int]:
    return (length + 1) // 2, length // 2 + 1


def syndrome_matrix(synd: np.ndarray, basis: str = MONOMIAL) -> np.ndarray:
    """Structured matrix whose rank is the number of errors.

    Monomial moments give the Hankel matrix ``s[a+b]``; Chebyshev moments give
    ``(s[a+b] + s[|a-b|]) / 2`` because ``T_a T_b = (T_{a+b} + T_{|a-b|}) / 2``.
    """
    _check_basis(basis)
    synd = np.asarray(synd, dtype=float)
    rows, cols = hankel_shape(len(synd))
    hk = hankel(synd[:rows], synd[rows - 1: rows - 1 + cols])
    if basis == MONOMIAL:
        return hk
    a = np.arange(rows)[:, None]
    b = np.arange(cols)[None, :]
    return 0.5 * (hk + synd[np.abs(a - b)])


def syndrome_hankel(synd: np.ndarray) -> np.ndarray:
    return syndrome_matrix(synd, MONOMIAL)


def estimate_num_errors(code: DctCode, synd: np.ndarray, noise_floor: float = 0.0,
                        rel_tol: float = REL_RANK_TOL, basis: str = MONOMIAL) -> int:
    """Numerical rank of the syndrome matrix, capped at the capacity."""
    synd = np.asarray(synd, dtype=float)
    if noise_floor < 0:
        raise ValueError("noise_floor must be non-negative")
    if len(synd) < 2:
        return 0
    sv = np.linalg.svd(syndrome_matrix(synd, basis), compute_uv=False)
    if sv[0] == 0.0:
        return 0
    threshold = max(noise_floor, rel_tol * sv[0])
    return min(int(np.sum(sv > threshold)), len(synd) // 2)


def locator_coefficients(synd: np.ndarray, nu: int,
                         basis: str = MONOMIAL) -> tuple[np.ndarray, float]:
    """Monic error-locator coefficients by least squares over all usable rows.

    The locator is expressed in the syndrome's basis: ``x**t`` terms for
    monomial moments, ``T_t(x)`` terms for Chebyshev moments. Row ``a`` of the
    system (``a = 0..L-nu-1``) states that the locator annihilates the moment
    sequence shifted by ``a``. Returns coefficients in increasing degree with
    the leading one fixed to 1, and the relative LS residual.
    """
    _check_basis(basis)
    synd = np.asarray(synd, dtype=float)
    n_eq = len(synd) - nu
    a = np.arange(n_eq)[:, None]
    b = np.arange(nu + 1)[None, :]
    system = synd[a + b]
    if basis == CHEBYSHEV:
        system = 0.5 * (system + synd[np.abs(a - b)])
    lhs, rhs = system[:, :nu], -system[:, nu]
    coef, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
    scale = np.linalg.norm(rhs)
    resid = float(np.linalg.norm(lhs @ coef - rhs) / scale) if scale > 0 else 0.0
    return np.append(coef, 1.0), resid


def locate_errors(code: DctCode, synd: np.ndarray, nu: int, positions: Sequence[int],
                  basis: str = MONOMIAL, return_residual: bool = False):
    """The ``nu`` positions whose evaluation points minimize ``|Lambda(z_q)|**2``."""
    positions = np.asarray(positions, dtype=int)
    cap = len(np.asarray(synd)) // 2
    if not 1 <= nu <= cap:
        raise ValueError(f"nu={nu} outside 1..{cap}")
    coef, resid = locator_coefficients(synd, nu, basis)
    x = code.points[positions]
    if basis == MONOMIAL:
        vals = np.polynomial.polynomial.polyval(x, coef) ** 2
    else:
        vals = npcheb.chebval(x, coef) ** 2
    # stable sort keeps lower indices first on ties
    order = np.argsort(vals, kind="stable")
    located = np.sort(positions[order[:nu]])
    if return_residual:
        return located, resid
    return located


def estimate_magnitudes(code: DctCode, word: ReceivedWord, locations: Sequence[int],
                        return_residual: bool = False):
    """Least-squares error values at ``locations`` from the word's syndrome.

    Solved against an orthonormal parity for the received positions; the
    residual is the norm of what the located errors leave unexplained.
    """
    locations = np.asarray(locations, dtype=int)
    if locations.size == 0:
        empty = np.zeros(0)
        return (empty, 0.0) if return_residual else empty
    cols = np.searchsorted(word.positions, locations)
    if np.any(cols >= word.m) or np.any(word.positions[np.minimum(cols, word.m - 1)] != locations):
        raise ValueError("locations must be received positions")
    if len(locations) > word.m - code.k1:
        raise NotDecodableError("more locations than parity checks")
    Q = orthonormal_parity(code, word.positions)
    s = Q @ word.values
    A = Q[:, cols]
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[-1] <= 1e-12 * max(sv[0], 1e-300):
        raise NotDecodableError("restricted parity is rank deficient")
    e, *_ = np.linalg.lstsq(A, s, rcond=None)
    resid = float(np.linalg.norm(A @ e - s))
    if return_residual:
        return e, resid
    return e


def _swap_refine(code: DctCode, word: ReceivedWord, locs: np.ndarray, mags: np.ndarray,
                 resid: float) -> tuple[np.ndarray, np.ndarray, float]:
    """Swap single locations for unlocated positions while that lowers the residual."""
    locs = [int(x) for x in locs]
    while True:
        best = None
        for c in locs:
            for q in word.positions:
                if q in locs:
                    continue
                trial = sorted(set(locs) - {c} | {int(q)})
                try:
                    e, r = estimate_magnitudes(code, word, trial, return_residual=True)
                except NotDecodableError:
                    continue
                if best is None or r < best[2]:
                    best = (trial, e, r)
        if best is None or not best[2] < resid:
            return np.array(locs, dtype=int), mags, resid
        locs, mags, resid = best


def decode(code: DctCode, word: ReceivedWord, noise_floor: float = 0.0,
           basis: str = CHEBYSHEV, rel_tol: float = REL_RANK_TOL) -> DecodeReport:
    """Syndrome, error count, locations, magnitudes, then subtract.

    Raises ``NotDecodableError`` when the word has no parity positions.
    """
    synd = syndrome(code, word, basis)
    cap = word.capacity
    # a syndrome at rounding level relative to the word is a codeword's
    floor = max(noise_floor, rel_tol * float(np.linalg.norm(word.values)))
    nu = estimate_num_errors(code, synd, floor, rel_tol, basis)
    if nu == 0:
        return DecodeReport(
            corrected=word.values.copy(),
            est_num_errors=0,
            est_locations=np.zeros(0, dtype=int),
            est_magnitudes=np.zeros(0),
            syndrome_norm=float(np.linalg.norm(synd)),
            locator_residual=0.0,
            magnitude_residual=float(np.linalg.norm(orthonormal_parity(code, word.positions) @ word.values)),
            capacity=cap,
        )
    synd_norm = float(np.linalg.norm(synd))
    explained = max(noise_floor, EXPLAINED_TOL * synd_norm)
    while True:
        locs, loc_resid = locate_errors(code, synd, nu, word.positions, basis, return_residual=True)
        try:
            mags, mag_resid = estimate_magnitudes(code, word, locs, return_residual=True)
        except NotDecodableError:
            # adversarial input can make the located columns degenerate; leave the word alone
            mags, mag_resid = np.zeros(len(locs)), float("nan")
        # clustered errors near the interval ends can hide below the rank tolerance
        if nu >= cap or mag_resid <= explained:
            break
        nu += 1
    if not mag_resid <= explained:
        locs, mags, mag_resid = _swap_refine(code, word, locs, mags, mag_resid)
    corrected = word.values.copy()
    corrected[np.searchsorted(word.positions, locs)] -= mags
    return DecodeReport(
        corrected=corrected,
        est_num_errors=nu,
        est_locations=locs,
        est_magnitudes=mags,
        syndrome_norm=float(np.linalg.norm(synd)),
        locator_residual=loc_resid,
        magnitude_residual=mag_resid,
        capacity=cap,
    )


# --------------------------------------------------------------------------- interleaved words

# singular-value drop that separates error energy from model residual by itself
GAP_RATIO = 20.0
# smaller drop that suffices when it lands below the noise floor
NOISE_GAP_RATIO = 10.0


@dataclass
class InterleavedReport:
    corrected: np.ndarray
    est_num_errors: int
    est_locations: np.ndarray
    est_magnitudes: np.ndarray
    profile: np.ndarray
    capacity: int
    ambiguous: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))


def stacked_syndrome_matrix(synds: np.ndarray, nu: int, basis: str = CHEBYSHEV) -> np.ndarray:
    """Locator systems of all columns of ``synds`` (shape ``(L, words)``) stacked.

    Words that share their error positions share the locator, so its
    coefficients span the null space of the stacked ``words * (L - nu)`` by
    ``nu + 1`` matrix.
    """
    _check_basis(basis)
    synds = np.asarray(synds, dtype=float)
    if synds.ndim == 1:
        synds = synds[:, None]
    length = synds.shape[0]
    if not 0 <= nu < length:
        raise ValueError(f"nu={nu} outside 0..{length - 1}")
    a = np.arange(length - nu)[:, None]
    b = np.arange(nu + 1)[None, :]
    system = synds[a + b]
    if basis == CHEBYSHEV:
        system = 0.5 * (system + synds[np.abs(a - b)])
    return system.transpose(2, 0, 1).reshape(-1, nu + 1)


def singular_profile(synds: np.ndarray, basis: str = CHEBYSHEV) -> np.ndarray:
    """``[sigma_max(S_1), sigma_min(S_1), ..., sigma_min(S_{L-1})]`` of the stacked systems.

    Entry ``nu`` (for ``nu >= 1``) is small exactly when at most ``nu`` positions
    carry errors; entry 0 measures the syndrome itself.
    """
    synds = np.asarray(synds, dtype=float)
    if synds.ndim == 1:
        synds = synds[:, None]
    length = synds.shape[0]
    if length < 2:
        return np.array([float(np.linalg.norm(synds))])
    out = [np.linalg.norm(stacked_syndrome_matrix(synds, 1, basis), 2)]
    for nu in range(1, length):
        out.append(np.linalg.svd(stacked_syndrome_matrix(synds, nu, basis), compute_uv=False)[-1])
    return np.array(out)


def estimate_num_errors_interleaved(profile: np.ndarray, noise_floor: float = 0.0,
                                    gap: float = GAP_RATIO,
                                    noise_gap: float = NOISE_GAP_RATIO,
                                    resolution_floor: float = 0.0) -> int:
    """Position of the sharpest drop of the profile above the floors.

    Noise and the out-of-code part of non-polynomial worker values decay the
    profile gradually; error energy ends abruptly once ``nu`` reaches the
    error count. Among the drops that start above both floors, the largest
    is taken if it exceeds ``gap``, or ``noise_gap`` when it lands at or
    below ``noise_floor``. Otherwise the word is taken as error-free.
    """
    profile = np.asarray(profile, dtype=float)
    if noise_floor < 0 or resolution_floor < 0:
        raise ValueError("floors must be non-negative")
    stop = max(noise_floor, resolution_floor)
    best, best_ratio = 0, 0.0
    for nu in range(1, len(profile)):
        above, below = profile[nu - 1], profile[nu]
        if above <= stop:
            break
        ratio = above / below if below > 0 else np.inf
        if ratio > gap or (below <= noise_floor and ratio > noise_gap):
            if ratio > best_ratio:
                best, best_ratio = nu, ratio
    return best


def locate_errors_interleaved(code: DctCode, synds: np.ndarray, nu: int, positions: Sequence[int],
                              basis: str = CHEBYSHEV) -> np.ndarray:
    """The ``nu`` positions where the common locator is smallest in magnitude."""
    positions = np.asarray(positions, dtype=int)
    _, _, vt = np.linalg.svd(stacked_syndrome_matrix(synds, nu, basis), full_matrices=False)
    coef = vt[-1]
    x = code.points[positions]
    if basis == MONOMIAL:
        vals = np.abs(np.polynomial.polynomial.polyval(x, coef))
    else:
        vals = np.abs(npcheb.chebval(x, coef))
    order = np.argsort(vals, kind="stable")
    return np.sort(positions[order[:nu]])


def solve_magnitudes(code: DctCode, positions: np.ndarray, values: np.ndarray,
                     locations: Sequence[int], return_residual: bool = False):
    """Least-squares error values at ``locations`` for each column of ``values``.

    With ``return_residual`` the squared Frobenius norm of the unexplained
    out-of-code part is returned too.
    """
    positions = np.asarray(positions, dtype=int)
    locations = np.asarray(locations, dtype=int)
    values = np.asarray(values, dtype=float)
    Q = orthonormal_parity(code, positions)
    s = Q @ values
    if locations.size == 0:
        e = np.zeros((0,) + values.shape[1:])
        return (e, float((s ** 2).sum())) if return_residual else e
    cols = np.searchsorted(positions, locations)
    if np.any(cols >= len(positions)) or np.any(positions[np.minimum(cols, len(positions) - 1)] != locations):
        raise ValueError("locations must be received positions")
    if len(locations) >= len(positions) - code.k1:
        raise NotDecodableError("need more parity checks than locations")
    A = Q[:, cols]
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[-1] <= 1e-12 * max(sv[0], 1e-300):
        raise NotDecodableError("restricted parity is rank deficient")
    e, *_ = np.linalg.lstsq(A, s, rcond=None)
    if return_residual:
        return e, float(((A @ e - s) ** 2).sum())
    return e


# smallest detectable error energy relative to the typical size of the words
RESOLUTION = 1e-4
# residual reduction that justifies locating one more error than the profile shows
EXTEND_RATIO = 100.0
# a swap that raises the residual by less than this leaves both positions in doubt
AMBIGUITY_RATIO = 10.0
# correction differences below this fraction of the rms word value do no harm
AMBIGUITY_MAGNITUDE = 1e-4


def decode_interleaved(code: DctCode, values: np.ndarray, positions: Sequence[int],
                       noise_floor: float = 0.0, gap: float = GAP_RATIO,
                       resolution: float = RESOLUTION,
                       basis: str = CHEBYSHEV) -> InterleavedReport:
    """Jointly decode the columns of ``values`` (shape ``(m, words)``).

    All columns are assumed to share their error positions (an error-free
    column simply has zero values there), which lets up to ``m - K1 - 1``
    errors be located instead of ``(m - K1) // 2``. Error energy below
    ``resolution`` times the typical size of ``values`` (median magnitude
    times the square root of the count) is not distinguished from the
    out-of-code part of non-polynomial worker values and is left alone.

    Two errors on neighbouring points near the interval ends can look like
    one to the locator. Fitting values at the located points then leaves a
    residual far above what the profile promised, so the position whose
    addition explains most of that residual, or the locator's own set of
    one more position if that fits better, is taken while it cuts the
    residual by ``EXTEND_RATIO``. After the locator and after each addition,
    single locations are swapped for unlocated positions while that lowers
    the residual. Positions that can be swapped in or out without raising
    the residual by ``AMBIGUITY_RATIO`` give alternative location sets;
    positions whose correction differs between them by more than
    ``AMBIGUITY_MAGNITUDE`` times the rms word value are reported as
    ``ambiguous`` because their corrected values cannot be trusted.
    """
    positions = np.asarray(positions, dtype=int)
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    if values.shape[0] != len(positions):
        raise ValueError("one row of values per position")
    m = len(positions)
    if m <= code.k1:
        raise NotDecodableError(f"{m} positions leave no parity checks (K1={code.k1})")
    synds = modified_parity(code, positions, basis) @ values
    profile = singular_profile(synds, basis)
    # drops below the resolution floor come from the out-of-code part of f
    # median scale, since corrupt rows can dominate the norm of the words
    floor = resolution * float(np.median(np.abs(values))) * math.sqrt(values.size)
    limit = m - code.k1 - 1
    nu = min(estimate_num_errors_interleaved(profile, noise_floor, gap,
                                             resolution_floor=floor), limit)
    Q = orthonormal_parity(code, positions)
    s = Q @ values

    def fit(cols):
        A = Q[:, cols]
        e, *_ = np.linalg.lstsq(A, s, rcond=None)
        return e, float(((A @ e - s) ** 2).sum())

    def refine(cols):
        # swap single locations while that lowers the residual
        resid = fit(cols)[1]
        while True:
            best = min((fit(sorted(set(cols) - {c} | {q}))[1], c, q)
                       for c in cols for q in range(m) if q not in cols)
            if not best[0] < resid:
                return cols
            resid, c, q = best
            cols = sorted(set(cols) - {c} | {q})

    corrected = values.copy()
    locs = ambiguous = np.zeros(0, dtype=int)
    mags = np.zeros((0, values.shape[1]))
    if nu > 0:
        locs = locate_errors_interleaved(code, synds, nu, positions, basis)
        cols = refine(list(np.searchsorted(positions, locs)))
        resid = fit(cols)[1]
        while len(cols) < limit:
            best, q = min((fit(cols + [q])[1], q) for q in range(m) if q not in cols)
            grown = sorted(cols + [q])
            # a wrong smaller set need not be a subset of the right one
            again = list(np.searchsorted(positions, locate_errors_interleaved(
                code, synds, len(cols) + 1, positions, basis)))
            if fit(again)[1] < best:
                best, grown = fit(again)[1], again
            if not resid > EXTEND_RATIO * best:
                break
            cols = refine(grown)
            resid = fit(cols)[1]
        mags = fit(cols)[0]
        nu = len(cols)
        locs = positions[cols]
        corrected[cols] -= mags
        # corrections under every location set that fits almost as well
        amb = np.zeros(m, dtype=bool)
        tol = AMBIGUITY_MAGNITUDE * float(np.sqrt(np.mean(values ** 2)))
        base = np.zeros_like(values)
        base[cols] = mags
        for c in cols:
            for q in range(m):
                if q in cols:
                    continue
                alt = sorted(set(cols) - {c} | {q})
                e, r = fit(alt)
                if not r < AMBIGUITY_RATIO * resid:
                    continue
                other = np.zeros_like(values)
                other[alt] = e
                amb |= np.sqrt(np.mean((other - base) ** 2, axis=1)) > tol
        ambiguous = positions[amb]
    return InterleavedReport(corrected, nu, locs, mags, profile, limit, ambiguous)


def noise_floor_for(code: DctCode, positions: np.ndarray, sigma_p: float,
                    margin: float = 4.0, words: int = 1) -> float:
    """Syndrome-matrix singular-value level expected from noise of std ``sigma_p``.

    A Gaussian ``r x c`` matrix with entries of std ``s`` has spectral norm
    close to ``s (sqrt(r) + sqrt(c))``. Syndrome entries have std at most
    ``sigma_p`` because the weights have unit norm and ``|T_p| <= 1``. With
    ``words > 1`` the shape is that of the stacked one-error system used by
    :func:`decode_interleaved`.
    """
    if sigma_p <= 0:
        return 0.0
    if words > 1:
        rows, cols = words * (len(positions) - code.k1 - 1), 2
    else:
        rows, cols = hankel_shape(len(positions) - code.k1)
    return margin * sigma_p * (math.sqrt(rows) + math.sqrt(cols))


def decomposition_errors(code: DctCode, dps: int = 60) -> tuple[float, float]:
    """Relative Frobenius errors of ``G = B Y Z`` and ``H = A_coef T W``.

    The monomial witnesses hold coefficients up to ``2**(N-2)``, so the
    products cancel catastrophically in double precision once ``K1`` or
    ``N - K1`` exceeds ~20. The products are therefore formed in ``dps``-digit
    arithmetic from the exact witness definitions and compared against the
    double-precision ``G`` and ``H``.
    """
    import mpmath as mp

    with mp.workdps(dps):
        n, k1, d = code.n, code.k1, code.n - code.k1
        scale = mp.sqrt(mp.mpf(2) / n)
        angles = [(2 * i + 1) * mp.pi / (2 * n) for i in range(n)]
        z = [mp.cos(a) for a in angles]

        def rel(target: np.ndarray, coef: np.ndarray, row_scale, power_rows: int, col_scale) -> float:
            num = mp.mpf(0)
            den = mp.mpf(0)
            for r in range(target.shape[0]):
                nz = [(p, int(coef[r, p])) for p in range(power_rows) if coef[r, p] != 0]
                for i in range(n):
                    val = row_scale(r) * col_scale(i) * mp.fsum(c * z[i] ** p for p, c in nz)
                    num += (val - mp.mpf(float(target[r, i]))) ** 2
                    den += mp.mpf(float(target[r, i])) ** 2
            return float(mp.sqrt(num / den))

        g_err = rel(code.generator, chebyshev_t_triangle(k1), lambda r: 1 / mp.sqrt(2) if r == 0 else 1,
                    k1, lambda i: scale)
        a_int = chebyshev_u_triangle(d)[::-1]
        h_err = rel(code.parity, a_int, lambda r: 1, d,
                    lambda i: scale * (-1) ** i * mp.sin(angles[i]))
    return g_err, h_err
