"""Exact fractional Brownian motion on a fixed grid via Cholesky factorization.

The covariance of fBm with Hurst index h at times s, t is

    C(s, t) = (s^2h + t^2h - |s - t|^2h) / 2.

With L the lower-triangular Cholesky factor of C on the grid and Z standard
normal, W = L Z is an exact draw. Keeping Z (the whitened coordinates) makes
conditional continuation exact as well: for a path known through t_i, the
value at a later t_j is row j of L applied to Z with entries past i replaced
by fresh normals.

The grid excludes t = 0, where W vanishes identically; callers prepend the
zero when they need it.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from zlib import crc32

import numpy as np
from scipy.linalg import lapack
from scipy.special import ndtri
from scipy.stats import qmc

from .errors import EmptyContinuationError, FactorizationError

PSEUDO = "pseudo"
SOBOL = "sobol"
_MODES = (PSEUDO, SOBOL)


@dataclass(frozen=True)
class GaussianStream:
    """Deterministic, hierarchically keyed source of standard normals.

    The variates are fully determined by (seed, purpose, keys, mode):
    identical streams give identical draws, distinct key tuples give
    independent ones. Purposes separate uses ("initial", "continuation", ...)
    so adding a consumer never shifts another's variates; child keys separate
    days and paths. Mode "sobol" yields scrambled low-discrepancy normals
    and is only available for block draws, where the point set has a joint
    dimension.
    """

    seed: int
    purpose: str = "fbm"
    keys: tuple[int, ...] = ()
    mode: str = PSEUDO

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}, got {self.mode!r}")

    def child(self, *keys: int) -> "GaussianStream":
        """Substream with additional key components appended."""
        return replace(self, keys=self.keys + tuple(int(k) for k in keys))

    def generator(self) -> np.random.Generator:
        entropy = [self.seed & 0xFFFFFFFFFFFFFFFF, crc32(self.purpose.encode())]
        entropy.extend(k & 0xFFFFFFFFFFFFFFFF for k in self.keys)
        return np.random.default_rng(np.random.SeedSequence(entropy))

    def normals(self, n: int) -> np.ndarray:
        """n pseudorandom standard normals (1-D)."""
        if self.mode != PSEUDO:
            raise ValueError("1-D draws are pseudorandom only; use normal_block for sobol")
        return self.generator().standard_normal(n)

    def normal_block(self, m: int, dim: int) -> np.ndarray:
        """(m, dim) block of standard normals; rows are the m points.

        In sobol mode the block is one scrambled Sobol point set of the given
        dimension mapped through the normal quantile; the generator draws the
        next power of two of points and keeps the first m.
        """
        if self.mode == PSEUDO:
            return self.generator().standard_normal((m, dim))
        n_bits = max(int(m - 1).bit_length(), 0)
        engine = qmc.Sobol(d=dim, scramble=True, seed=self.generator())
        u = engine.random_base2(n_bits)[:m]
        tiny = np.finfo(float).tiny
        return ndtri(np.clip(u, tiny, 1.0 - 1e-16))


def fbm_covariance(h: float, grid: np.ndarray) -> np.ndarray:
    """Covariance matrix of fBm with Hurst index h at the grid times."""
    t = np.asarray(grid, dtype=float)
    t2h = t**(2.0 * h)
    return 0.5 * (t2h[:, None] + t2h[None, :] - np.abs(t[:, None] - t[None, :]) ** (2.0 * h))


def _factor(c: np.ndarray) -> tuple[np.ndarray, int]:
    low, info = lapack.dpotrf(c.T, lower=1, clean=1, overwrite_a=1)
    return low, int(info)


@dataclass(frozen=True)
class FbmDraw:
    """One exact draw: path values and the whitened normals behind them."""

    values: np.ndarray
    normals: np.ndarray


class FbmEngine:
    """Holds the Cholesky factor for one (h, grid) pair; immutable after build.

    Build once and reuse; the factorization dominates and every draw and
    continuation is a matrix product against the stored factor.
    """

    def __init__(self, h: float, grid: np.ndarray, chol: np.ndarray):
        self.h = h
        self.grid = grid
        self.chol = chol
        for a in (self.grid, self.chol):
            a.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.grid)

    def draw_path(self, stream: GaussianStream) -> FbmDraw:
        """Unconditional exact draw of W^H(t_1..t_N) from the stream."""
        z = stream.normals(self.n)
        return FbmDraw(values=self.chol @ z, normals=z)

    def path_from_normals(self, z: np.ndarray) -> np.ndarray:
        """W^H values for given whitened coordinates; rows of z are paths."""
        z = np.asarray(z, dtype=float)
        if z.shape[-1] != self.n:
            raise ValueError(f"expected {self.n} normals per path, got {z.shape[-1]}")
        return z @ self.chol.T if z.ndim == 2 else self.chol @ z

    def conditional_mean(self, known_normals: np.ndarray, horizon: int) -> np.ndarray:
        """E[W^H(t_{i+1}..t_horizon) | path through t_i] from retained normals."""
        i = len(known_normals)
        self._check_horizon(i, horizon)
        return self.chol[i:horizon, :i] @ known_normals

    def continue_path(self, known_normals: np.ndarray, stream: GaussianStream,
                      horizon: int) -> np.ndarray:
        """Exact conditional continuation to t_horizon (grid index, 1-based).

        known_normals are the whitened coordinates retained from the initial
        path's own draw; fresh coordinates come from the stream. Returns
        W^H(t_{i+1}..t_horizon).
        """
        i = len(known_normals)
        self._check_horizon(i, horizon)
        z_new = stream.normals(horizon - i)
        return self.continue_block(known_normals, z_new[None, :])[0]

    def continue_block(self, known_normals: np.ndarray, z_fresh: np.ndarray) -> np.ndarray:
        """Vectorized continuation: one row of fresh normals per sub-path.

        z_fresh has shape (m, horizon - i); returns (m, horizon - i) values
        sharing the conditional mean from known_normals.
        """
        known_normals = np.asarray(known_normals, dtype=float)
        z_fresh = np.atleast_2d(np.asarray(z_fresh, dtype=float))
        i = len(known_normals)
        horizon = i + z_fresh.shape[1]
        self._check_horizon(i, horizon)
        base = self.chol[i:horizon, :i] @ known_normals
        return base[None, :] + z_fresh @ self.chol[i:horizon, i:horizon].T

    def _check_horizon(self, i: int, horizon: int) -> None:
        if horizon <= i:
            raise EmptyContinuationError(
                f"horizon {horizon} does not extend past the known {i} points"
            )
        if horizon > self.n:
            raise EmptyContinuationError(
                f"horizon {horizon} exceeds the grid length {self.n}"
            )


def build_engine(h: float, grid: np.ndarray) -> FbmEngine:
    """Factor the fBm covariance on the grid (strictly increasing, t_1 > 0).

    A failed factorization is retried once with 1e-12 * t_N^2h added to the
    diagonal; grids of a few thousand points are non-singular in exact
    arithmetic and fail only by rounding. A second failure raises
    FactorizationError with the offending pivot.
    """
    if not 0.0 < h < 1.0:
        raise ValueError(f"Hurst index must lie in (0, 1), got {h}")
    t = np.array(grid, dtype=float)
    if t.ndim != 1 or len(t) == 0:
        raise ValueError("grid must be a nonempty 1-D array")
    if t[0] <= 0.0:
        raise ValueError(f"grid must start after t = 0, got t_1 = {t[0]}")
    if not (np.diff(t) > 0).all():
        raise ValueError("grid times must be strictly increasing")

    low, info = _factor(fbm_covariance(h, t))
    if info > 0:
        jitter = 1e-12 * t[-1] ** (2.0 * h)
        c = fbm_covariance(h, t)
        c[np.diag_indices_from(c)] += jitter
        low, info = _factor(c)
        if info > 0:
            raise FactorizationError(pivot=info - 1)
    if info < 0:
        raise FactorizationError(pivot=info)
    return FbmEngine(h=h, grid=t, chol=low)
