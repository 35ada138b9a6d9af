"""Von Neumann entropy of Gaussian covariance matrices and entropy rates.

The entropy of a covariance matrix is a sum of per-mode contributions, one
per symplectic eigenvalue: f(d) = (d + 1/2) log(d + 1/2) - (d - 1/2) log(d - 1/2)
above the pure-state boundary d = 1/2 and zero at or below it.  Natural
logarithms are the default; pass base=2 for bits.  Eigenvalues caught just
below 1/2 by float noise are clamped to the boundary; genuine violations are
an error in strict mode and a warning otherwise.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import core, symbols, szego, toeplitz
from .errors import DomainError

_LN2 = math.log(2.0)
CLAMP_TOL = 1e-10


def _log_scale(base) -> float:
    if base in ("e", math.e):
        return 1.0
    if base in (2, "2"):
        return _LN2
    raise ValueError(f"log base must be 'e' or 2, got {base!r}")


def mode_entropy(x, base="e"):
    """Entropy contribution of a single symplectic eigenvalue.

    Evaluated through log1p of the offset above 1/2, which stays accurate
    right at the boundary where the two terms of the closed form cancel.
    Accepts scalars or arrays.
    """
    scale = _log_scale(base)
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise DomainError(f"symplectic eigenvalue must be >= 0, got {float(arr.min())}")
    a = arr - 0.5
    with np.errstate(divide="ignore", invalid="ignore"):
        raw = (1.0 + a) * np.log1p(a) - a * np.log(a)
    out = np.where(a > 0.0, raw, 0.0) / scale
    return float(out) if np.isscalar(x) else out


def mode_entropy_shannon(x, base="e"):
    """Shannon-function form of the same quantity, kept as an independent route.

    Defined for d >= 1/2 as the mean photon weight (2d + 1)/2 times the binary
    Shannon entropy of t = (2d - 1)/(2d + 1).
    """
    scale = _log_scale(base)
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.5 - 1e-12):
        raise DomainError(f"Shannon form needs d >= 1/2, got {float(arr.min())}")
    t = np.clip((2.0 * arr - 1.0) / (2.0 * arr + 1.0), 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -t * np.log(t) - (1.0 - t) * np.log1p(-t)
    h = np.where(t > 0.0, h, 0.0)
    out = 0.5 * (2.0 * arr + 1.0) * h / scale
    return float(out) if np.isscalar(x) else out


def spectrum_entropy(values, base="e", *, strict: bool = True, clamp_tol: float = CLAMP_TOL) -> float:
    """Total entropy of a symplectic spectrum, with the boundary clamp policy."""
    v = np.asarray(values, dtype=float)
    bad = v < 0.5 - clamp_tol
    if np.any(bad):
        msg = (
            f"{int(bad.sum())} symplectic eigenvalue(s) below the uncertainty "
            f"bound 1/2 (min {float(v.min()):.6g}); not a valid Gaussian covariance"
        )
        if strict:
            raise DomainError(msg)
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    return float(np.sum(mode_entropy(v, base)))


def state_entropy(A, base="e", *, strict: bool = True, clamp_tol: float = CLAMP_TOL) -> float:
    """Von Neumann entropy of the Gaussian state with covariance matrix A."""
    d = core.symplectic_eigenvalues(np.asarray(A, dtype=float))
    return spectrum_entropy(d, base, strict=strict, clamp_tol=clamp_tol)


def entropy_test_function(base="e") -> szego.TestFunction:
    """The per-mode entropy as a spectral-average test function."""
    return szego.TestFunction(
        f"entropy(base={base})", lambda x: mode_entropy(x, base), domain=(0.0, math.inf)
    )


def entropy_rate_sequence(
    symbol,
    n_list,
    base="e",
    *,
    strict: bool = True,
    clamp_tol: float = CLAMP_TOL,
    max_dim: int = toeplitz.MAX_DIM,
    threads: int = 1,
):
    """Per-order values of entropy(T_n) / n.  Returns (orders, values)."""
    traj = szego.truncated_spectra(symbol, n_list, max_dim=max_dim, threads=threads)
    rates = [
        spectrum_entropy(traj.spectra[n], base, strict=strict, clamp_tol=clamp_tol) / n
        for n in traj.ns
    ]
    return traj.ns, rates


def entropy_rate_integral(
    symbol,
    grid: symbols.GridSpec = symbols.GridSpec(),
    base="e",
    *,
    strict: bool = True,
    clamp_tol: float = CLAMP_TOL,
) -> float:
    """Angular average of the pointwise state entropy of the symbol."""
    curves = symbols.symplectic_curves(symbol, grid)
    flat = curves.values.ravel()
    bad = flat < 0.5 - clamp_tol
    if np.any(bad):
        msg = (
            f"symbol dips below the uncertainty bound 1/2 at {int(bad.sum())} "
            f"grid value(s) (min {float(flat.min()):.6g})"
        )
        if strict:
            raise DomainError(msg)
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    return float(np.sum(mode_entropy(curves.values, base)) / grid.G)


@dataclass(frozen=True)
class EntropyReport:
    """Per-order entropy rates against the symbol-side integral."""

    base: str
    grid_G: int
    ns: list
    rates: list
    integral: float
    integral_refined: float
    gaps: list
    tolerance: float | None
    grid_tolerance: float
    passed: bool | None
    grid_consistent: bool

    @property
    def rate(self) -> float:
        """The limit estimate reported by the experiment."""
        return self.integral


def entropy_rate_report(
    symbol,
    n_list,
    grid: symbols.GridSpec = symbols.GridSpec(),
    base="e",
    *,
    tolerance: float | None = None,
    grid_tolerance: float = 1e-8,
    strict: bool = True,
    clamp_tol: float = CLAMP_TOL,
    max_dim: int = toeplitz.MAX_DIM,
    threads: int = 1,
) -> EntropyReport:
    """Entropy-rate experiment: sequence, integral, gaps, and consistency flags."""
    ns, rates = entropy_rate_sequence(
        symbol, n_list, base, strict=strict, clamp_tol=clamp_tol, max_dim=max_dim, threads=threads
    )
    integral = entropy_rate_integral(symbol, grid, base, strict=strict, clamp_tol=clamp_tol)
    refined = entropy_rate_integral(symbol, grid.refined(), base, strict=strict, clamp_tol=clamp_tol)
    gaps = [abs(r - integral) for r in rates]
    return EntropyReport(
        base=str(base),
        grid_G=grid.G,
        ns=ns,
        rates=rates,
        integral=integral,
        integral_refined=refined,
        gaps=gaps,
        tolerance=tolerance,
        grid_tolerance=grid_tolerance,
        passed=None if tolerance is None else bool(gaps[-1] <= tolerance),
        grid_consistent=abs(integral - refined) <= grid_tolerance * max(1.0, abs(integral)),
    )
