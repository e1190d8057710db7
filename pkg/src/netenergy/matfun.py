"""Dense matrix-function kernels.

Thin, checked wrappers around LAPACK-backed SciPy routines plus the ordered
stable/antistable splitting used by the mixed Gramian.  Every function is a
pure function of its arguments.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .exceptions import (
    AxisEigenvalueError,
    InvalidInputError,
    NotStableError,
    NumericalFailureError,
    SingularGramianError,
)
from .validation import (
    as_input_matrix,
    as_square_matrix,
    check_symmetric,
    default_axis_tol,
)

LYAPUNOV_RTOL = 1e-9
ARE_RTOL = 1e-8
SINGULAR_COND = 1e12


def expm(A, t=1.0):
    """Matrix exponential ``e^{A t}`` (scaling and squaring with Pade approximants)."""
    A = as_square_matrix(A)
    t = float(t)
    if not np.isfinite(t):
        raise InvalidInputError(f"t must be finite, got {t}")
    if t == 0.0:
        return np.eye(A.shape[0])
    return sla.expm(A * t)


def spectral_abscissa(A):
    """Largest real part of the eigenvalues of ``A``."""
    return float(np.max(np.linalg.eigvals(as_square_matrix(A)).real))


def solve_lyapunov(F, Q, eps_axis=None):
    """Solve ``F X + X F^T + Q = 0`` for a Hurwitz ``F``.

    Parameters
    ----------
    F : (n, n) array_like
        Stable matrix: every eigenvalue must satisfy ``Re λ < -eps_axis``.
    Q : (n, n) array_like
        Symmetric positive semidefinite right-hand side.
    eps_axis : float, optional
        Width of the forbidden band around the imaginary axis.  Defaults to
        ``1e-9 * ||F||_F``.

    Returns
    -------
    X : ndarray
        The symmetric solution.

    Raises
    ------
    NotStableError
        If ``F`` has an eigenvalue with real part ``>= -eps_axis``.
    NumericalFailureError
        If the residual of the computed solution is larger than a backward
        stable solver can explain.

    Notes
    -----
    The residual is judged against ``max(1, ||Q||) + 2 ||F|| ||X||``.  For a
    well conditioned problem this is the same as a test against
    ``max(1, ||Q||)``; for solutions with very large norm (eigenvalues close
    to the axis) it avoids rejecting answers that are as accurate as the
    data permits.
    """
    F = as_square_matrix(F, "F")
    Q = as_square_matrix(Q, "Q")
    if Q.shape != F.shape:
        raise InvalidInputError(f"Q has shape {Q.shape}, expected {F.shape}")
    Q = check_symmetric(Q, "Q")
    if eps_axis is None:
        eps_axis = default_axis_tol(F)
    abscissa = spectral_abscissa(F)
    if abscissa >= -eps_axis:
        raise NotStableError(
            f"F is not stable: max Re(lambda) = {abscissa:.3g} >= {-eps_axis:.3g}"
        )
    X = sla.solve_continuous_lyapunov(F, -Q)
    X = 0.5 * (X + X.T)
    if not np.all(np.isfinite(X)):
        raise NumericalFailureError("Lyapunov solution is not finite")
    resid = np.linalg.norm(F @ X + X @ F.T + Q)
    scale = max(1.0, np.linalg.norm(Q)) + 2.0 * np.linalg.norm(F) * np.linalg.norm(X)
    if resid > LYAPUNOV_RTOL * scale:
        raise NumericalFailureError(
            f"Lyapunov residual {resid:.3g} exceeds tolerance ({LYAPUNOV_RTOL * scale:.3g})"
        )
    return X


def solve_are_via_lyapunov(A, B, side="ctrl", eps_axis=None):
    """Stabilising solution of the minimum-energy Riccati equation.

    With ``side="ctrl"`` (``A`` antistable) returns ``P`` solving
    ``-P A - A^T P + P B B^T P = 0`` as ``P = L^{-1}`` where
    ``(-A) L + L (-A)^T + B B^T = 0``.  The feedback ``u = -B^T P x`` makes
    ``A - B B^T P`` stable.

    With ``side="reach"`` (``A`` stable) returns ``P = K^{-1}`` where
    ``A K + K A^T + B B^T = 0``; it solves ``P A + A^T P + P B B^T P = 0``.
    """
    A = as_square_matrix(A)
    B = as_input_matrix(B, A.shape[0])
    BBt = B @ B.T
    if side == "ctrl":
        L = solve_lyapunov(-A, BBt, eps_axis)
    elif side == "reach":
        L = solve_lyapunov(A, BBt, eps_axis)
    else:
        raise InvalidInputError(f"side must be 'reach' or 'ctrl', got {side!r}")
    cond = np.linalg.cond(L)
    if not np.isfinite(cond) or cond > SINGULAR_COND:
        raise SingularGramianError(
            f"Lyapunov solution is numerically singular (condition {cond:.3g})"
        )
    P = np.linalg.inv(L)
    P = 0.5 * (P + P.T)
    Aside = -A if side == "ctrl" else A
    resid = np.linalg.norm(P @ Aside + Aside.T @ P + P @ BBt @ P)
    scale = 2 * np.linalg.norm(P @ Aside) + np.linalg.norm(P @ BBt @ P)
    if resid > ARE_RTOL * max(scale, 1.0):
        raise NumericalFailureError(f"Riccati residual {resid:.3g} too large")
    return P


@dataclass(frozen=True)
class SpectralSplit:
    """Block-diagonalising change of basis ``V A V^{-1} = diag(A1, A2)``.

    ``A1`` collects the ``k_stable`` eigenvalues left of the axis band and
    ``A2`` the remaining antistable ones.  New coordinates are ``V x``.
    """

    V: np.ndarray
    Vinv: np.ndarray
    k_stable: int
    A1: np.ndarray
    A2: np.ndarray
    residual: float

    @property
    def n(self):
        return self.V.shape[0]

    @property
    def blocks(self):
        return self.A1, self.A2


def split_stable_antistable(A, eps_axis=None):
    """Separate the stable and antistable invariant subspaces of ``A``.

    An ordered real Schur form ``A = Q T Q^T`` puts the stable eigenvalues in
    the leading block of ``T``.  A Sylvester solve removes the coupling block
    ``T12``, giving ``V = S^{-1} Q^T`` with ``S = [[I, X], [0, I]]``.  Only
    orthogonal transformations and one well-posed Sylvester equation are
    involved, so the basis stays usable even when the eigenvectors of ``A``
    are nearly parallel.
    """
    A = as_square_matrix(A)
    n = A.shape[0]
    if eps_axis is None:
        eps_axis = default_axis_tol(A)
    eigs = np.linalg.eigvals(A)
    near = np.abs(eigs.real) <= eps_axis
    if np.any(near):
        raise AxisEigenvalueError(
            f"{int(near.sum())} eigenvalue(s) within {eps_axis:.3g} of the imaginary axis"
        )
    k = int(np.sum(eigs.real < 0))
    try:
        T, Q, sdim = sla.schur(A, output="real", sort="lhp")
    except (sla.LinAlgError, ValueError) as exc:
        raise NumericalFailureError(f"ordered Schur reordering failed: {exc}") from exc
    if sdim != k:
        raise NumericalFailureError(
            f"Schur reordering found {sdim} stable eigenvalues, eigensolver found {k}"
        )
    A1 = T[:k, :k].copy()
    A2 = T[k:, k:].copy()
    if 0 < k < n:
        # A1 X - X A2 = -T12 zeroes the (1,2) block of S^{-1} T S
        X = sla.solve_sylvester(A1, -A2, -T[:k, k:])
        S = np.eye(n)
        S[:k, k:] = X
        Sinv = np.eye(n)
        Sinv[:k, k:] = -X
        V = Sinv @ Q.T
        Vinv = Q @ S
    else:
        V = Q.T
        Vinv = Q
    blocks = sla.block_diag(A1, A2)
    residual = np.linalg.norm(V @ A @ Vinv - blocks) / max(np.linalg.norm(A), np.finfo(float).tiny)
    return SpectralSplit(V=V, Vinv=Vinv, k_stable=k, A1=A1, A2=A2, residual=float(residual))


def generalized_modes(M, K, sym_rtol=1e-10):
    """Undamped normal modes of ``M q'' + K q = 0``.

    Parameters
    ----------
    M : array_like
        Positive masses, either as a vector or as a diagonal matrix.
    K : (n, n) array_like
        Symmetric positive semidefinite stiffness matrix.

    Returns
    -------
    omega2 : ndarray, shape (n,)
        Squared natural frequencies in ascending order.
    Phi : ndarray, shape (n, n)
        Mass-normalised mode shapes, ``Phi.T @ diag(M) @ Phi = I`` and
        ``Phi.T @ K @ Phi = diag(omega2)``.  Each column is signed so that
        its entry of largest magnitude is positive.
    """
    K = as_square_matrix(K, "K")
    n = K.shape[0]
    Mv = np.asarray(M, dtype=float)
    if Mv.ndim == 2:
        Mm = as_square_matrix(Mv, "M")
        if np.any(Mm - np.diag(np.diag(Mm))):
            raise InvalidInputError("M must be diagonal")
        Mv = np.diag(Mm)
    Mv = Mv.reshape(-1)
    if Mv.shape[0] != n:
        raise InvalidInputError(f"M has {Mv.shape[0]} entries, K is {n}x{n}")
    if not np.all(np.isfinite(Mv)) or np.any(Mv <= 0):
        raise InvalidInputError("masses must be finite and positive")
    K = check_symmetric(K, "K", sym_rtol)
    w, Phi = sla.eigh(K, np.diag(Mv))
    knorm = max(np.linalg.norm(K), np.finfo(float).tiny)
    if w[0] < -1e-10 * knorm:
        raise InvalidInputError(f"K is not positive semidefinite (eigenvalue {w[0]:.3g})")
    w = np.maximum(w, 0.0)
    pivot = np.argmax(np.abs(Phi), axis=0)
    signs = np.sign(Phi[pivot, np.arange(n)])
    Phi = Phi * signs
    return w, Phi
