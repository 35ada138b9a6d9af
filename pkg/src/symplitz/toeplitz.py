"""Dense truncations of block Toeplitz operators and their structure checks.

Truncations are plain dense ndarrays: the experiments need many moderate
sizes rather than one huge one, so correctness and simplicity win over
structured storage.  Complex arithmetic is confined to the quadratic-form
comparison; every positivity question is answered by a real symmetric
eigensolve, via the Hermitian embedding where a complex shift is involved.
"""

from dataclasses import dataclass

import numpy as np

from . import core
from .errors import AliasingError, InvalidDimensionError, TruncationSizeError
from .symbols import GridSpec, TrigMatrixPolynomial

MAX_DIM = 4096


def assemble(symbol: TrigMatrixPolynomial, n: int, *, max_dim: int = MAX_DIM) -> np.ndarray:
    """Dense 2kn x 2kn truncation with (i, j) block given by coefficient |i - j|.

    The result is symmetric, and the order-n truncation is exactly the leading
    principal submatrix of the order-(n+1) one.
    """
    if not isinstance(symbol, TrigMatrixPolynomial):
        raise TypeError(
            "assembly needs cosine-series coefficients; convert sampled symbols "
            "with to_trig_polynomial first"
        )
    if n < 1:
        raise InvalidDimensionError(f"truncation order must be >= 1, got {n}")
    b = symbol.block_dim
    dim = b * n
    if dim > max_dim:
        raise TruncationSizeError(f"truncation dimension 2kn = {dim} exceeds the guard {max_dim}")
    T = np.zeros((dim, dim))
    for off in range(0, min(symbol.degree, n - 1) + 1):
        blk = symbol.coeffs[off]
        for i in range(n - off):
            r = (i + off) * b
            c = i * b
            T[r : r + b, c : c + b] = blk
            if off:
                T[c : c + b, r : r + b] = blk
    return T


@dataclass(frozen=True)
class QuadraticFormCheck:
    """Truncation-side and symbol-side values of one quadratic form."""

    lhs: float
    rhs: float
    gap: float


def quadratic_form_check(
    symbol: TrigMatrixPolynomial,
    coefficients,
    grid: GridSpec,
    *,
    max_dim: int = MAX_DIM,
) -> QuadraticFormCheck:
    """Compare <x, T_m x> with the angular average of <x~(t), A(t) x~(t)>.

    ``coefficients`` holds the finitely supported sequence x_0 .. x_{m-1} as
    rows; x~(t) = sum x_j e^{i j t}.  The grid must resolve the product of
    the symbol and the sequence, otherwise the rectangle rule aliases.
    """
    xs = np.asarray(coefficients, dtype=float)
    if xs.ndim != 2 or xs.shape[1] != symbol.block_dim:
        raise InvalidDimensionError(
            f"coefficients must be rows of length {symbol.block_dim}, got shape {xs.shape}"
        )
    m = xs.shape[0]
    needed = 2 * (symbol.degree + m)
    if grid.G <= needed:
        raise AliasingError(
            f"G = {grid.G} cannot resolve symbol degree {symbol.degree} against "
            f"support {m}; need G > {needed}"
        )
    T = assemble(symbol, m, max_dim=max_dim)
    x = xs.ravel()
    lhs = float(x @ T @ x)
    phase = np.exp(1j * np.outer(grid.nodes(), np.arange(m)))
    xt = phase @ xs
    vals = symbol.evaluate_grid(grid)
    quad = np.einsum("gi,gij,gj->g", xt.conj(), vals, xt).real
    rhs = float(quad.sum() / grid.G)
    return QuadraticFormCheck(lhs, rhs, abs(lhs - rhs))


@dataclass(frozen=True)
class GChainCheck:
    """Covariance validity of one truncation, with the witness eigenvalue."""

    ok: bool
    n: int
    min_eigenvalue: float

    def __bool__(self) -> bool:
        return self.ok


def gchain_check(
    symbol: TrigMatrixPolynomial, n: int, tol: float = 1e-10, *, max_dim: int = MAX_DIM
) -> GChainCheck:
    """Positivity of T_n + (i/2) J, tested through the real embedding."""
    T = assemble(symbol, n, max_dim=max_dim)
    J = core.symplectic_form(symbol.k * n)
    E = core.embed_hermitian(T, 0.5 * J)
    w0 = float(np.linalg.eigvalsh(E)[0])
    return GChainCheck(w0 >= -tol, n, w0)


def gchain_sweep(
    symbol: TrigMatrixPolynomial, n_max: int, tol: float = 1e-10, *, max_dim: int = MAX_DIM
):
    """Find the smallest failing truncation order up to n_max.

    Returns (first_failing_n or None, records), where records lists every
    GChainCheck evaluated.  Failure is monotone in n because each truncation
    embeds as a principal submatrix of the next, so doubling followed by
    bisection locates the first failure exactly.
    """
    if n_max < 1:
        raise InvalidDimensionError(f"n_max must be >= 1, got {n_max}")
    records = []

    def probe(n):
        res = gchain_check(symbol, n, tol, max_dim=max_dim)
        records.append(res)
        return res

    last_pass = 0
    first_fail = None
    n = 1
    while n <= n_max:
        if not probe(n):
            first_fail = n
            break
        last_pass = n
        n *= 2
    if first_fail is None:
        if last_pass >= n_max:
            return None, records
        if probe(n_max):
            return None, records
        first_fail = n_max
    lo, hi = last_pass, first_fail
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if probe(mid):
            lo = mid
        else:
            hi = mid
    return hi, records


def first_gchain_failure(
    symbol: TrigMatrixPolynomial, n_max: int, tol: float = 1e-10, *, max_dim: int = MAX_DIM
):
    """Smallest n <= n_max whose truncation fails the covariance test, or None."""
    first, _ = gchain_sweep(symbol, n_max, tol, max_dim=max_dim)
    return first


def positive_definite_check(T, tol: float = 1e-12) -> bool:
    """Min eigenvalue above tol times the spectral norm."""
    T = np.asarray(T, dtype=float)
    w = np.linalg.eigvalsh(0.5 * (T + T.T))
    scale = max(abs(float(w[0])), abs(float(w[-1])))
    return bool(w[0] > tol * scale)


def matrix_csv_bytes(T) -> bytes:
    """Locale-independent CSV dump of a dense matrix.

    One row per line, scientific notation with 17 significant digits, LF
    line endings.
    """
    T = np.asarray(T, dtype=float)
    lines = [",".join(format(float(v), ".16e") for v in row) for row in T]
    return ("\n".join(lines) + "\n").encode("utf-8")
