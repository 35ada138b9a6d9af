"""Finite-dimensional symplectic linear algebra.

Phase-space coordinates are interleaved as (q1, p1, ..., qk, pk), so the
symplectic form is the block diagonal J = J2 + J2 + ... with
J2 = [[0, 1], [-1, 0]].  All routines work on plain float ndarrays; most of
the spectral ones accept stacks of matrices with shape (..., 2k, 2k) and act
on the last two axes.  Every function is pure and every stochastic one takes
an explicit seed.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import (
    DegeneracyError,
    DegeneratePairError,
    InvalidDimensionError,
    PairingError,
    PositivityError,
    SymmetryError,
)

SYM_TOL = 1e-12
PD_TOL = 1e-12
FACT_TOL = 1e-8
RAY_TOL = 1e-9
PAIR_TOL = 1e-8
ORTHO_TOL = 1e-10


def symplectic_form(k: int) -> np.ndarray:
    """Return the 2k x 2k form J2 + ... + J2 in interleaved ordering."""
    if k < 1:
        raise InvalidDimensionError(f"mode count must be >= 1, got {k}")
    J = np.zeros((2 * k, 2 * k))
    q = 2 * np.arange(k)
    J[q, q + 1] = 1.0
    J[q + 1, q] = -1.0
    return J


def _square_dim(A: np.ndarray) -> int:
    if A.ndim < 2 or A.shape[-1] != A.shape[-2]:
        raise InvalidDimensionError(f"expected square matrices, got shape {A.shape}")
    return A.shape[-1]


def _even_dim(A: np.ndarray) -> int:
    n = _square_dim(A)
    if n == 0 or n % 2:
        raise InvalidDimensionError(f"dimension must be a positive even number, got {n}")
    return n


def _require_symmetric(A: np.ndarray, tol: float, what: str = "matrix") -> np.ndarray:
    At = np.swapaxes(A, -1, -2)
    dev = float(np.abs(A - At).max())
    scale = max(1.0, float(np.abs(A).max()))
    if dev > tol * scale:
        raise SymmetryError(f"{what} is not symmetric: max |A - A^T| = {dev:.3e}")
    return 0.5 * (A + At)


def _require_skew(C: np.ndarray, tol: float, what: str = "matrix") -> np.ndarray:
    Ct = np.swapaxes(C, -1, -2)
    dev = float(np.abs(C + Ct).max())
    scale = max(1.0, float(np.abs(C).max()))
    if dev > tol * scale:
        raise SymmetryError(f"{what} is not skew-symmetric: max |C + C^T| = {dev:.3e}")
    return 0.5 * (C - Ct)


def _eigh_pd(A: np.ndarray, pd_tol: float, what: str = "matrix"):
    """Eigendecomposition of symmetric matrices, verified positive definite."""
    w, V = np.linalg.eigh(A)
    scale = np.maximum(np.abs(w[..., 0]), np.abs(w[..., -1]))
    bad = w[..., 0] <= pd_tol * scale
    if np.any(bad):
        if w.ndim == 1:
            where = None
            val = float(w[0])
        else:
            where = tuple(int(i) for i in np.argwhere(bad)[0])
            val = float(w[..., 0][where])
        raise PositivityError(
            f"{what} is not positive definite (min eigenvalue {val:.6e})",
            min_eigenvalue=val,
            where=where,
        )
    return w, V


def principal_sqrt(A, *, sym_tol: float = SYM_TOL, pd_tol: float = PD_TOL) -> np.ndarray:
    """Symmetric positive definite square root, via one symmetric eigensolve.

    Accepts a single matrix or a stack shaped (..., n, n).
    """
    A = np.asarray(A, dtype=float)
    _square_dim(A)
    A = _require_symmetric(A, sym_tol)
    w, V = _eigh_pd(A, pd_tol)
    S = (V * np.sqrt(w)[..., None, :]) @ np.swapaxes(V, -1, -2)
    return 0.5 * (S + np.swapaxes(S, -1, -2))


def _pair_sorted(w: np.ndarray, pair_tol: float) -> np.ndarray:
    """Collapse ascending eigenvalues with exact multiplicity two into one copy."""
    lo = w[..., 0::2]
    hi = w[..., 1::2]
    gap = (hi - lo) / np.maximum(hi, np.finfo(float).tiny)
    if np.any(gap > pair_tol):
        raise PairingError(
            "eigenvalues do not split into multiplicity-2 pairs "
            f"(worst relative gap {float(gap.max()):.3e} > {pair_tol:.1e}); "
            "this indicates a numerics bug or a non-symplectic setup"
        )
    return 0.5 * (lo + hi)


def symplectic_eigenvalues(
    A,
    *,
    sym_tol: float = SYM_TOL,
    pd_tol: float = PD_TOL,
    pair_tol: float = PAIR_TOL,
) -> np.ndarray:
    """Symplectic spectrum d_1 <= ... <= d_k of a positive definite 2k x 2k matrix.

    Computed through the skew kernel K = sqrt(A) J sqrt(A): the symmetric
    matrix -K^2 has eigenvalues d_j^2, each of multiplicity two, so only
    symmetric eigensolves are needed.  Accepts stacks (..., 2k, 2k) and
    returns (..., k), ascending along the last axis.
    """
    A = np.asarray(A, dtype=float)
    n = _even_dim(A)
    S = principal_sqrt(A, sym_tol=sym_tol, pd_tol=pd_tol)
    J = symplectic_form(n // 2)
    K = S @ J @ S
    N = K @ np.swapaxes(K, -1, -2)  # equals -K^2 since K is skew
    N = 0.5 * (N + np.swapaxes(N, -1, -2))
    w = np.linalg.eigvalsh(N)
    return np.sqrt(_pair_sorted(w, pair_tol))


def _cluster_slices(w: np.ndarray, tol: float) -> list:
    """Group ascending values into clusters separated by relative gaps > tol."""
    cuts = [0]
    for i in range(1, len(w)):
        if (w[i] - w[i - 1]) > tol * max(abs(w[i]), np.finfo(float).tiny):
            cuts.append(i)
    cuts.append(len(w))
    slices = [slice(a, b) for a, b in zip(cuts, cuts[1:])]
    for sl in slices:
        if (sl.stop - sl.start) % 2:
            raise PairingError(
                "eigenvalue cluster of odd size "
                f"{sl.stop - sl.start}; multiplicity-2 structure violated"
            )
    return slices


def _complement_in_span(E: np.ndarray, picked: list) -> np.ndarray:
    """Orthonormal basis of span(E) minus span(picked); columns of E orthonormal."""
    P = E.copy()
    for v in picked:
        P -= np.outer(v, v @ P)
    U, s, _ = np.linalg.svd(P, full_matrices=False)
    want = E.shape[1] - len(picked)
    if int((s > 0.5).sum()) != want:
        raise DegeneracyError(
            "failed to re-orthonormalize a degenerate eigenspace; "
            "perturbing the input slightly and retrying usually helps"
        )
    return U[:, :want]


@dataclass(frozen=True)
class WilliamsonFactorization:
    """Symplectic congruence M A M^T = d_1 I_2 + ... + d_k I_2.

    ``spectrum`` holds the ascending symplectic eigenvalues; the residuals are
    spectral norms of M A M^T - Lambda and M J M^T - J.
    """

    M: np.ndarray
    spectrum: np.ndarray
    diag_residual: float
    symplectic_residual: float

    @property
    def diagonal(self) -> np.ndarray:
        """The diagonal factor Lambda with each eigenvalue repeated twice."""
        return np.diag(np.repeat(self.spectrum, 2))


def williamson(
    A,
    *,
    sym_tol: float = SYM_TOL,
    pd_tol: float = PD_TOL,
    pair_tol: float = PAIR_TOL,
    ortho_tol: float = ORTHO_TOL,
) -> WilliamsonFactorization:
    """Williamson normal form of a positive definite matrix.

    Builds an orthogonal basis that block-diagonalizes K = sqrt(A) J sqrt(A)
    into rotation blocks d_j J2: for a unit eigenvector x of -K^2 with
    eigenvalue d_j^2, the partner y = -K x / d_j completes an orthonormal
    pair, and degenerate eigenspaces are deflated pair by pair.  The factor
    is M = Lambda^{1/2} O^T A^{-1/2}.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise InvalidDimensionError("williamson expects a single matrix, not a stack")
    n = _even_dim(A)
    k = n // 2
    A = _require_symmetric(A, sym_tol)
    w, V = _eigh_pd(A, pd_tol)
    sq = np.sqrt(w)
    S = (V * sq) @ V.T
    Sinv = (V / sq) @ V.T
    J = symplectic_form(k)
    K = S @ J @ S
    N = K @ K.T
    N = 0.5 * (N + N.T)
    ww, VV = np.linalg.eigh(N)

    cols = []
    ds = []
    for sl in _cluster_slices(ww, pair_tol):
        d = float(np.sqrt(np.mean(ww[sl])))
        E = VV[:, sl]
        picked = []
        for _ in range((sl.stop - sl.start) // 2):
            basis = _complement_in_span(E, picked)
            x = basis[:, 0]
            y = -(K @ x) / d
            y /= np.linalg.norm(y)
            picked += [x, y]
            cols += [x, y]
            ds.append(d)
    O = np.column_stack(cols)
    ortho_dev = float(np.abs(O.T @ O - np.eye(n)).max())
    # eigenvalues clustered within pair_tol leak a deviation of that order
    # into the pairing; only losses beyond it signal a genuine failure
    if ortho_dev > max(ortho_tol, 100 * pair_tol):
        raise DegeneracyError(
            f"orthogonality loss {ortho_dev:.3e} while pairing eigenvectors; "
            "perturbing the input slightly and retrying usually helps"
        )

    spectrum = np.asarray(ds)
    lam_half = np.repeat(np.sqrt(spectrum), 2)
    M = (lam_half[:, None] * O.T) @ Sinv
    Lam = np.diag(np.repeat(spectrum, 2))
    diag_residual = float(np.linalg.norm(M @ A @ M.T - Lam, 2))
    symplectic_residual = float(np.linalg.norm(M @ J @ M.T - J, 2))
    return WilliamsonFactorization(M, spectrum, diag_residual, symplectic_residual)


@dataclass(frozen=True)
class GMatrixCheck:
    """Outcome of the uncertainty-principle test, with the witness d_min."""

    ok: bool
    d_min: float

    def __bool__(self) -> bool:
        return self.ok


def is_gmatrix(A, tol: float = 1e-10, *, sym_tol: float = SYM_TOL, pd_tol: float = PD_TOL) -> GMatrixCheck:
    """Test whether every symplectic eigenvalue is >= 1/2 (within tol).

    The condition is equivalent to positive semidefiniteness of A + (i/2) J,
    which embed_hermitian(A, J/2) exposes to a real eigensolve for
    cross-checking.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise InvalidDimensionError("is_gmatrix expects a single matrix")
    d = symplectic_eigenvalues(A, sym_tol=sym_tol, pd_tol=pd_tol)
    d_min = float(d[0])
    return GMatrixCheck(d_min >= 0.5 - tol, d_min)


def embed_hermitian(S, C, *, tol: float = SYM_TOL) -> np.ndarray:
    """Real 2n x 2n embedding [[S, -C], [C, S]] of the Hermitian matrix S + iC.

    The embedding is positive semidefinite exactly when S + iC is, so
    positivity of complex-shifted matrices reduces to a real symmetric
    eigensolve.
    """
    S = np.asarray(S, dtype=float)
    C = np.asarray(C, dtype=float)
    if S.ndim != 2 or C.ndim != 2 or S.shape != C.shape:
        raise InvalidDimensionError(
            f"blocks must be square matrices of equal shape, got {S.shape} and {C.shape}"
        )
    _square_dim(S)
    S = _require_symmetric(S, tol, "symmetric part")
    C = _require_skew(C, tol, "skew part")
    return np.block([[S, -C], [C, S]])


def symplectic_rayleigh(A, u, v, *, pair_tol: float = PAIR_TOL) -> float:
    """Pair energy (<u, A u> + <v, A v>) / 2 after normalizing <u, J v> to 1.

    Never falls below the smallest symplectic eigenvalue of A.
    """
    A = np.asarray(A, dtype=float)
    n = _even_dim(A)
    J = symplectic_form(n // 2)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    s = float(u @ J @ v)
    if abs(s) < pair_tol:
        raise DegeneratePairError(f"symplectic pairing {s:.3e} is numerically zero")
    if s < 0.0:
        v = -v
        s = -s
    r = 1.0 / np.sqrt(s)
    u = r * u
    v = r * v
    return 0.5 * float(u @ A @ u + v @ A @ v)


@dataclass(frozen=True)
class EdgeProbe:
    """Lower-edge probe of the symplectic numerical range.

    ``value`` is the refined minimum, achieved by the normalized pair
    (u, v); ``sampled_min`` is the best value seen among the raw random
    samples before refinement.
    """

    value: float
    u: np.ndarray
    v: np.ndarray
    sampled_min: float
    iterations: int


def numerical_range_edge(
    A,
    samples: int = 200,
    seed: int = 0,
    *,
    max_iter: int = 25000,
    pair_tol: float = PAIR_TOL,
) -> EdgeProbe:
    """Probe the lower edge of the symplectic numerical range of A.

    Draws ``samples`` seeded random pairs, keeps the best, then refines it by
    exact coordinate descent: for a fixed v the optimal u direction solves
    A u = c J v, and symmetrically for v.  The descent value decreases
    monotonically and its limit is the smallest symplectic eigenvalue.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    A = np.asarray(A, dtype=float)
    n = _even_dim(A)
    J = symplectic_form(n // 2)
    rng = np.random.default_rng(seed)

    best_val = np.inf
    best_pair = None
    for _ in range(samples):
        u = rng.standard_normal(n)
        v = rng.standard_normal(n)
        try:
            val = symplectic_rayleigh(A, u, v, pair_tol=pair_tol)
        except DegeneratePairError:
            continue
        if val < best_val:
            best_val = val
            best_pair = (u, v)
    if best_pair is None:
        raise DegeneratePairError("all sampled pairs were symplectically degenerate")

    w, V = _eigh_pd(_require_symmetric(A, SYM_TOL), PD_TOL)
    Ainv = (V / w) @ V.T
    u, v = best_pair
    if float(u @ J @ v) < 0.0:
        v = -v

    def objective(u, v):
        a1 = float(u @ A @ u)
        a2 = float(v @ A @ v)
        s = float(u @ J @ v)
        return np.sqrt(a1 * a2) / s

    val = objective(u, v)
    iterations = 0
    for iterations in range(1, max_iter + 1):
        u = Ainv @ (J @ v)
        u /= np.linalg.norm(u)
        v = -(Ainv @ (J @ u))
        v /= np.linalg.norm(v)
        new = objective(u, v)
        if val - new <= 1e-16 * max(1.0, abs(new)):
            val = min(val, new)
            break
        val = new

    # Rebalance so the plain pair energy of (u, v) equals the refined value.
    s = float(u @ J @ v)
    r = 1.0 / np.sqrt(s)
    u = r * u
    v = r * v
    a1 = float(u @ A @ u)
    a2 = float(v @ A @ v)
    t = (a2 / a1) ** 0.25
    u = t * u
    v = v / t
    value = symplectic_rayleigh(A, u, v, pair_tol=pair_tol)
    return EdgeProbe(value, u, v, float(best_val), iterations)


def random_symplectic(k: int, seed: int = 0) -> np.ndarray:
    """Seeded random symplectic matrix exp(J S) with S symmetric, norm <= 1."""
    J = symplectic_form(k)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((2 * k, 2 * k))
    S = 0.5 * (X + X.T)
    nrm = np.linalg.norm(S, 2)
    if nrm > 1.0:
        S = S / nrm
    return expm(J @ S)
