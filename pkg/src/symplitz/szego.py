"""Spectral-average experiments on truncated block Toeplitz matrices.

The central comparison is between the truncation-side averages
(1/n) sum_j f(d_j) over the full kn-point symplectic spectrum of the order-n
truncation and the symbol-side angular average of sum_j f(d_j(theta)).  The
raw sequences are reported as computed, with no averaging acceleration, so
the limit statements are checked exactly as formulated.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import core, symbols, toeplitz
from .errors import DomainError, IndexRangeError, PositivityError

EPS_LADDER = (0.2, 0.1, 0.05)


def _pmap(fn, items, threads=1):
    items = list(items)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


@dataclass(frozen=True)
class TestFunction:
    """Scalar test function with an optional admissible domain."""

    name: str
    fn: Callable
    domain: tuple | None = None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.domain is not None:
            lo, hi = self.domain
            if np.any(x < lo) or np.any(x > hi):
                raise DomainError(
                    f"value outside the domain [{lo}, {hi}] of test function {self.name}"
                )
        return self.fn(x)


def monomial(power: int) -> TestFunction:
    return TestFunction(f"x^{power}", lambda x: np.asarray(x, dtype=float) ** power)


def polynomial(coeffs) -> TestFunction:
    c = np.asarray(coeffs, dtype=float)
    name = "poly[" + ",".join(format(v, "g") for v in c) + "]"
    return TestFunction(name, lambda x: np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), c))


def hat(left: float, peak: float, right: float) -> TestFunction:
    """Piecewise-linear bump: 0 outside [left, right], 1 at the peak."""
    if not left < peak < right:
        raise ValueError(f"need left < peak < right, got {left}, {peak}, {right}")
    xs = np.array([left, peak, right])
    ys = np.array([0.0, 1.0, 0.0])
    return TestFunction(
        f"hat({left:g},{peak:g},{right:g})",
        lambda x: np.interp(np.asarray(x, dtype=float), xs, ys),
    )


def indicator_smoothing(interval, eps: float) -> TestFunction:
    """Smoothed interval indicator exp(-dist(x, [a, b]) / eps)."""
    a, b = float(interval[0]), float(interval[1])
    if not (a <= b and eps > 0):
        raise ValueError(f"need a <= b and eps > 0, got [{a}, {b}], eps = {eps}")

    def fn(x):
        x = np.asarray(x, dtype=float)
        dist = np.maximum(np.maximum(a - x, x - b), 0.0)
        return np.exp(-dist / eps)

    return TestFunction(f"exp(-dist(x,[{a:g},{b:g}])/{eps:g})", fn)


@dataclass(frozen=True)
class SpectrumTrajectory:
    """Symplectic spectra of the truncations, keyed by truncation order."""

    k: int
    spectra: dict
    monotonicity_violation: float

    @property
    def ns(self) -> list:
        return sorted(self.spectra)

    def max_n(self) -> int:
        return max(self.spectra)


def truncated_spectra(
    symbol, n_list, *, max_dim: int = toeplitz.MAX_DIM, threads: int = 1
) -> SpectrumTrajectory:
    """Per-order symplectic spectra, with the interlacing drift reported.

    For each fixed index the eigenvalue can only drift down (within float
    noise) as the order grows; the worst upward drift across consecutive
    computed orders is recorded in ``monotonicity_violation``.
    """
    ns = sorted(set(int(n) for n in n_list))
    if not ns:
        raise ValueError("n_list must be nonempty")

    def one(n):
        try:
            return core.symplectic_eigenvalues(toeplitz.assemble(symbol, n, max_dim=max_dim))
        except PositivityError as err:
            raise PositivityError(
                f"truncation of order n = {n} is not positive definite "
                f"(min eigenvalue {err.min_eigenvalue:.6e})",
                min_eigenvalue=err.min_eigenvalue,
                where=n,
            ) from err

    spectra = dict(zip(ns, _pmap(one, ns, threads)))
    violation = 0.0
    for n_prev, n_next in zip(ns, ns[1:]):
        shared = len(spectra[n_prev])
        drift = float((spectra[n_next][:shared] - spectra[n_prev]).max())
        violation = max(violation, drift)
    return SpectrumTrajectory(symbol.k, spectra, violation)


def szego_average(spectrum, n: int, f: TestFunction) -> float:
    """(1/n) sum_j f(d_j) over the full kn-point spectrum (divided by n, not nk)."""
    return float(np.sum(f(np.asarray(spectrum, dtype=float))) / n)


def symbol_integral(symbol, f: TestFunction, grid: symbols.GridSpec = symbols.GridSpec()) -> float:
    """Angular average of sum_j f(d_j(theta)) by the periodic rectangle rule."""
    curves = symbols.symplectic_curves(symbol, grid)
    return float(np.sum(f(curves.values)) / grid.G)


@dataclass(frozen=True)
class SzegoReport:
    """Per-order averages against the symbol-side integral."""

    f_name: str
    grid_G: int
    ns: list
    averages: list
    integral: float
    integral_refined: float
    gaps: list
    tolerance: float | None
    grid_tolerance: float
    passed: bool | None
    grid_consistent: bool
    elapsed: float


def convergence_report(
    symbol,
    f: TestFunction,
    n_list,
    grid: symbols.GridSpec = symbols.GridSpec(),
    *,
    tolerance: float | None = None,
    grid_tolerance: float = 1e-8,
    max_dim: int = toeplitz.MAX_DIM,
    threads: int = 1,
) -> SzegoReport:
    """Run the average-versus-integral comparison over the given orders.

    The symbol-side integral is recomputed on a doubled grid; a disagreement
    beyond ``grid_tolerance`` flags the quadrature as unresolved (rough
    symbols converge slowly on a grid), in which case the report should not
    be read as evidence either way.
    """
    t0 = time.perf_counter()
    traj = truncated_spectra(symbol, n_list, max_dim=max_dim, threads=threads)
    averages = [szego_average(traj.spectra[n], n, f) for n in traj.ns]
    integral = symbol_integral(symbol, f, grid)
    refined = symbol_integral(symbol, f, grid.refined())
    gaps = [abs(a - integral) for a in averages]
    grid_consistent = abs(integral - refined) <= grid_tolerance * max(1.0, abs(integral))
    passed = None if tolerance is None else bool(gaps[-1] <= tolerance)
    return SzegoReport(
        f_name=f.name,
        grid_G=grid.G,
        ns=traj.ns,
        averages=averages,
        integral=integral,
        integral_refined=refined,
        gaps=gaps,
        tolerance=tolerance,
        grid_tolerance=grid_tolerance,
        passed=passed,
        grid_consistent=grid_consistent,
        elapsed=time.perf_counter() - t0,
    )


@dataclass(frozen=True)
class MinTrajectory:
    """Trajectory of one fixed-index eigenvalue across truncation orders."""

    m: int
    ns: list
    values: list
    limit: float
    limit_gap: float
    monotonicity_violation: float


def min_trajectory(
    symbol,
    m: int,
    n_list,
    grid: symbols.GridSpec = symbols.GridSpec(),
    *,
    max_dim: int = toeplitz.MAX_DIM,
    threads: int = 1,
) -> MinTrajectory:
    """Track d_m of the truncations; every fixed index converges to the
    grid infimum of the bottom symplectic curve."""
    ns = sorted(set(int(n) for n in n_list))
    if m < 1 or m > symbol.k * ns[0]:
        raise IndexRangeError(
            f"index m = {m} does not exist at the smallest order n = {ns[0]} "
            f"(spectrum has {symbol.k * ns[0]} entries)"
        )
    traj = truncated_spectra(symbol, ns, max_dim=max_dim, threads=threads)
    values = [float(traj.spectra[n][m - 1]) for n in ns]
    violation = 0.0
    for prev, nxt in zip(values, values[1:]):
        violation = max(violation, nxt - prev)
    limit = symbols.min_symplectic_eigenvalue(symbol, grid)
    return MinTrajectory(
        m=m,
        ns=ns,
        values=values,
        limit=limit,
        limit_gap=abs(values[-1] - limit),
        monotonicity_violation=violation,
    )


@dataclass(frozen=True)
class CountingReport:
    """Counts of truncation eigenvalues inside a closed interval.

    Interval endpoints are inclusive, so values landing exactly on an
    endpoint count in.  ``limit`` is the grid estimate of the limiting
    angular measure, when provided.
    """

    interval: tuple
    ns: list
    counts: list
    ratios: list
    limit: float | None = None
    smoothing: dict | None = None


def counting_ratio(trajectory: SpectrumTrajectory, interval, *, limit: float | None = None) -> CountingReport:
    """Per-order counting ratios c_n(K) / n for a closed interval K."""
    a, b = float(interval[0]), float(interval[1])
    if not (0.0 <= a <= b):
        raise DomainError(f"interval must satisfy 0 <= a <= b, got [{a}, {b}]")
    ns = trajectory.ns
    counts = [int(np.count_nonzero((trajectory.spectra[n] >= a) & (trajectory.spectra[n] <= b))) for n in ns]
    ratios = [c / n for c, n in zip(counts, ns)]
    return CountingReport(interval=(a, b), ns=ns, counts=counts, ratios=ratios, limit=limit)


def limit_measure(symbol, interval, grid: symbols.GridSpec = symbols.GridSpec()) -> float:
    """Grid estimate of (1/2 pi) sum_j measure{theta : d_j(theta) in K}."""
    a, b = float(interval[0]), float(interval[1])
    if not (0.0 <= a <= b):
        raise DomainError(f"interval must satisfy 0 <= a <= b, got [{a}, {b}]")
    curves = symbols.symplectic_curves(symbol, grid)
    return float(np.count_nonzero((curves.values >= a) & (curves.values <= b)) / grid.G)


def smoothed_counting(
    symbol,
    trajectory: SpectrumTrajectory,
    interval,
    grid: symbols.GridSpec = symbols.GridSpec(),
    eps_ladder=EPS_LADDER,
) -> dict:
    """Cross-check of the counting limit through smoothed indicators.

    For each eps the smoothed indicator dominates the sharp one, so the
    counting ratio is bounded by the smoothed average, and the smoothed
    integrals shrink toward the sharp limiting measure as eps decreases.
    """
    n_max = trajectory.max_n()
    out = {}
    for eps in eps_ladder:
        f = indicator_smoothing(interval, eps)
        out[eps] = {
            "average": szego_average(trajectory.spectra[n_max], n_max, f),
            "integral": symbol_integral(symbol, f, grid),
        }
    return out


@dataclass(frozen=True)
class DensityReport:
    """Coverage of the symbol-side spectral values by truncation spectra.

    ``coverage_distances`` holds, for every grid curve value d_j(theta_g),
    its distance to the union of all truncation spectra up to n_max (shape
    (G, k)); ``coverage_distance`` is their maximum.  ``escape_ratios``
    count the truncation eigenvalues that stay delta-far from every grid
    curve value while inside the admissible bracket.
    """

    delta: float
    n_max: int
    grid_G: int
    coverage_distances: np.ndarray
    coverage_distance: float
    escape_ratios: dict
    lower: float
    upper: float


def _distance_to_sorted(x: np.ndarray, pool: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(pool, x)
    left = pool[np.clip(idx - 1, 0, len(pool) - 1)]
    right = pool[np.clip(idx, 0, len(pool) - 1)]
    return np.minimum(np.abs(x - left), np.abs(x - right))


def density_check(
    symbol,
    n_max: int,
    delta: float,
    grid: symbols.GridSpec = symbols.GridSpec(),
    *,
    max_dim: int = toeplitz.MAX_DIM,
    threads: int = 1,
) -> DensityReport:
    """Check that truncation spectra fill out the symbol's spectral values.

    Coverage: every grid curve value should be approached by some truncation
    eigenvalue with order at most n_max.  Escape: the fraction of truncation
    eigenvalues that avoid the delta-neighborhood of all grid curve values
    (within the bracket [grid min, grid sup norm]) should shrink with n.
    """
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta}")
    traj = truncated_spectra(symbol, range(1, n_max + 1), max_dim=max_dim, threads=threads)
    curves = symbols.symplectic_curves(symbol, grid)
    sorted_curve_values = np.sort(curves.values.ravel())
    pool = np.sort(np.concatenate([traj.spectra[n] for n in traj.ns]))
    distances = _distance_to_sorted(curves.values, pool)
    lower = float(sorted_curve_values[0])
    upper = symbols.sup_norm(symbol, grid)
    escape = {}
    for n in traj.ns:
        s = traj.spectra[n]
        inside = (s >= lower) & (s <= upper)
        far = _distance_to_sorted(s, sorted_curve_values) >= delta
        escape[n] = float(np.count_nonzero(inside & far) / n)
    return DensityReport(
        delta=delta,
        n_max=n_max,
        grid_G=grid.G,
        coverage_distances=distances,
        coverage_distance=float(distances.max()),
        escape_ratios=escape,
        lower=lower,
        upper=upper,
    )
