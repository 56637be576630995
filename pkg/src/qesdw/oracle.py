"""Finite-difference eigensolver for -d^2/dx^2 + V(x) on a Dirichlet interval.

The matrix is the usual three-point Laplacian plus a diagonal potential.
Eigenvalues are located by multisection on the Sturm count (the number of
negative pivots of T - lam I), so the k lowest eigenvalues are extracted by
index with no risk of skipping a level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .models import PotentialModel
from .spectra import full_spectrum
from .wavefunction import gauge_for, normalizability_report

__all__ = [
    "ContrastRow",
    "GridSpec",
    "HarmonicRow",
    "LadderRow",
    "TridiagonalSystem",
    "discretize",
    "extrapolated_eigenvalues",
    "gershgorin_bounds",
    "harmonic_check",
    "lowest_eigenvalues",
    "qes_contrast_report",
    "separation_ladder_check",
    "sturm_count",
]

DEFAULT_GRID = (-12.0, 12.0, 4000)


@dataclass(frozen=True)
class GridSpec:
    lo: float = DEFAULT_GRID[0]
    hi: float = DEFAULT_GRID[1]
    n: int = DEFAULT_GRID[2]   # interior points; the endpoints carry psi = 0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or not self.lo < self.hi:
            raise ValueError(f"grid needs finite lo < hi, got [{self.lo}, {self.hi}]")
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 16:
            raise ValueError(f"grid needs n >= 16 interior points, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def h(self) -> float:
        return (self.hi - self.lo) / (self.n + 1)

    @property
    def points(self) -> np.ndarray:
        return self.lo + self.h * np.arange(1, self.n + 1)

    def coarsened(self) -> "GridSpec":
        """Grid on the same interval with every other point (h doubled)."""
        return GridSpec(self.lo, self.hi, (self.n + 1) // 2 - 1)


@dataclass(frozen=True)
class TridiagonalSystem:
    diagonal: np.ndarray
    offdiagonal: np.ndarray

    def __post_init__(self) -> None:
        if self.offdiagonal.size != self.diagonal.size - 1:
            raise ValueError("off-diagonal must have n - 1 entries")

    @property
    def n(self) -> int:
        return self.diagonal.size

    def norm_inf(self) -> float:
        row = np.abs(self.diagonal).copy()
        row[:-1] += np.abs(self.offdiagonal)
        row[1:] += np.abs(self.offdiagonal)
        return float(np.max(row))


def discretize(V: Callable[[np.ndarray], np.ndarray], grid: GridSpec) -> TridiagonalSystem:
    """Central-difference matrix of -d^2/dx^2 + V on the interior grid points.

    Example:
        >>> s = discretize(lambda x: 0 * x, GridSpec(0.0, 1.0, 16))
        >>> float(s.diagonal[0]) == 2 * 17**2, float(s.offdiagonal[0]) == -17**2
        (True, True)
    """
    x = grid.points
    v = np.asarray(V(x), dtype=float)
    if v.shape == ():
        v = np.full_like(x, float(v))
    bad = np.flatnonzero(~np.isfinite(v))
    if bad.size:
        raise ValueError(f"potential is not finite at x = {x[bad[0]]!r}")
    ih2 = 1.0 / grid.h**2
    diag = 2.0 * ih2 + v
    off = np.full(grid.n - 1, -ih2)
    return TridiagonalSystem(diag, off)


def gershgorin_bounds(sys: TridiagonalSystem) -> tuple[float, float]:
    r = np.zeros(sys.n)
    r[:-1] += np.abs(sys.offdiagonal)
    r[1:] += np.abs(sys.offdiagonal)
    return float(np.min(sys.diagonal - r)), float(np.max(sys.diagonal + r))


def sturm_count(sys: TridiagonalSystem, lam) -> np.ndarray | int:
    """Number of eigenvalues strictly below each shift in ``lam``."""
    shifts = np.atleast_1d(np.asarray(lam, dtype=float))
    a, b2 = sys.diagonal, sys.offdiagonal**2
    pivmin = np.finfo(float).tiny * max(1.0, float(np.max(b2, initial=0.0)))
    count = np.zeros(shifts.shape, dtype=np.int64)
    d = a[0] - shifts
    with np.errstate(invalid="ignore", divide="ignore"):
        for i in range(sys.n):
            if i:
                d = a[i] - shifts - b2[i - 1] / d
            d = np.where(np.abs(d) < pivmin, -pivmin, d)
            count += d < 0
    return int(count[0]) if np.ndim(lam) == 0 else count


def lowest_eigenvalues(sys: TridiagonalSystem, count: int, atol: float | None = None,
                       sections: int = 16) -> np.ndarray:
    """The ``count`` smallest eigenvalues, by simultaneous multisection.

    Each sweep of the Sturm recurrence evaluates ``sections - 1`` shifts
    inside every bracket, shrinking it by a factor ``sections``.  Brackets
    stop once narrower than ``atol``, which defaults to a few ulps of the
    matrix norm (the accuracy limit of the Sturm count itself).
    """
    if isinstance(count, bool) or int(count) != count or not 1 <= count <= sys.n:
        raise ValueError(f"count must lie in [1, {sys.n}], got {count}")
    count = int(count)
    if atol is None:
        atol = 8.0 * np.finfo(float).eps * sys.norm_inf()
    lo_b, hi_b = gershgorin_bounds(sys)
    lo = np.full(count, lo_b - atol)
    hi = np.full(count, hi_b + atol)
    target = np.arange(1, count + 1)[:, None]
    frac = np.arange(1, sections) / sections
    for _ in range(100):
        if np.all(hi - lo <= atol):
            break
        pts = lo[:, None] + (hi - lo)[:, None] * frac[None, :]
        below = sturm_count(sys, pts.ravel()).reshape(pts.shape) >= target
        # first shift with the k-th eigenvalue below it closes the bracket
        first = np.where(below.any(axis=1), below.argmax(axis=1), sections - 1)
        rows = np.arange(count)
        new_hi = np.where(first < sections - 1, pts[rows, np.minimum(first, sections - 2)], hi)
        new_lo = np.where(first > 0, pts[rows, np.maximum(first - 1, 0)], lo)
        lo, hi = new_lo, new_hi
    return 0.5 * (lo + hi)


def extrapolated_eigenvalues(V: Callable[[np.ndarray], np.ndarray], grid: GridSpec,
                             count: int) -> tuple[np.ndarray, np.ndarray]:
    """Richardson-extrapolated eigenvalues and the raw fine-grid ones.

    The three-point scheme has error c h^2 + O(h^4); combining the grid with
    its coarsened twin cancels the h^2 term.
    """
    fine = lowest_eigenvalues(discretize(V, grid), count)
    cg = grid.coarsened()
    coarse = lowest_eigenvalues(discretize(V, cg), count)
    h2, H2 = grid.h**2, cg.h**2
    return (H2 * fine - h2 * coarse) / (H2 - h2), fine


@dataclass(frozen=True)
class HarmonicRow:
    n: int
    exact: float
    raw: float
    extrapolated: float

    @property
    def error(self) -> float:
        return abs(self.extrapolated - self.exact)


def harmonic_check(C: float, count: int = 6, grid: GridSpec = GridSpec()) -> list[HarmonicRow]:
    """Grid eigenvalues of -d^2/dy^2 + C^2 y^2 against (2n + 1) C."""
    if not C > 0:
        raise DomainError("C must be positive")
    ext, raw = extrapolated_eigenvalues(lambda y: C * C * y * y, grid, count)
    return [HarmonicRow(n, (2 * n + 1) * C, float(r), float(e))
            for n, (r, e) in enumerate(zip(raw, ext))]


@dataclass(frozen=True)
class LadderRow:
    k: int
    c1: float
    oracle_c1: float        # grid eigenvalue minus C

    @property
    def gap(self) -> float:
        return abs(self.c1 - self.oracle_c1)


def separation_ladder_check(C: float, k_max: int = 5, grid: GridSpec = GridSpec()) -> list[LadderRow]:
    """Separation constants 2 C k against the grid spectrum of the y-oscillator."""
    from .separable2d import quantize_separation_constant

    rows = harmonic_check(C, k_max + 1, grid)
    return [LadderRow(r.n, quantize_separation_constant(C, r.n), r.extrapolated - C) for r in rows]


@dataclass(frozen=True)
class ContrastRow:
    level: int
    qes_energy: float
    nearest_index: int
    nearest_eigenvalue: float
    gap: float
    normalizability: str
    minus_tail: str
    plus_tail: str


def qes_contrast_report(model: PotentialModel, j: int, grid: GridSpec = GridSpec(),
                        count: int | None = None) -> list[ContrastRow]:
    """Pair every algebraic level with the closest grid eigenvalue.

    Informational only: with a gauge factor that blows up on one side, an
    algebraic level need not belong to the Dirichlet spectrum at all.
    """
    if model.family.dimension != 1:
        raise DomainError("qes_contrast_report is for 1D families")
    spec = full_spectrum(model, j)
    V = spec.model.potential()
    n_eig = count if count is not None else j + 6
    ext, _ = extrapolated_eigenvalues(V, grid, n_eig)
    tail = normalizability_report(gauge_for(spec.model, j))
    rows = []
    for i, E in enumerate(spec.energies):
        k = int(np.argmin(np.abs(ext - E)))
        rows.append(ContrastRow(i, float(E), k, float(ext[k]), float(abs(ext[k] - E)),
                                tail.status.value, tail.minus_tail, tail.plus_tail))
    return rows
