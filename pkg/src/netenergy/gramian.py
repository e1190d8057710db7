"""Gramians of linear systems and the control-energy metrics derived from them.

Conventions
-----------
The reachability Gramian over ``[0, t]`` is ``W_r(t) = ∫ e^{Aτ} B B^T e^{A^T τ} dτ``
and the controllability-to-zero Gramian ``W_c(t)`` is the same integral with
``-A``.  Their inverses measure the input energy needed to reach a state from
the origin or to steer a state back to it.
"""

from dataclasses import dataclass, field
import math

import numpy as np
import scipy.linalg as sla

from .exceptions import (
    HorizonOverflowError,
    InvalidInputError,
    NotStableError,
    SingularGramianError,
    StabilityMismatchError,
    UncontrollableError,
    ZeroFrequencyError,
)
from .matfun import solve_lyapunov, split_stable_antistable
from .validation import (
    as_input_matrix,
    as_square_matrix,
    check_drivers,
    check_positive_time,
    elementary_inputs,
)

RANK_TOL = 1e-12
# largest exponent before exp() overflows double precision, with headroom
_EXP_LIMIT = 650.0


@dataclass(frozen=True)
class LinearSystem:
    """Continuous-time system ``x' = A x + B u``.

    ``driver_set`` is recorded when ``B`` consists of unit columns, so the
    node labels survive through placement and reporting.
    """

    A: np.ndarray
    B: np.ndarray
    driver_set: tuple = None

    def __post_init__(self):
        A = as_square_matrix(self.A)
        B = as_input_matrix(self.B, A.shape[0])
        if B.shape[1] and np.any(np.all(B == 0, axis=0)):
            raise InvalidInputError("B has an all-zero column")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        if self.driver_set is not None:
            drivers = tuple(int(i) for i in check_drivers(self.driver_set, A.shape[0]))
            if not np.array_equal(B, elementary_inputs(drivers, A.shape[0])):
                raise InvalidInputError("B does not match the unit columns of driver_set")
            object.__setattr__(self, "driver_set", drivers)

    @classmethod
    def from_drivers(cls, A, drivers):
        A = as_square_matrix(A)
        drivers = check_drivers(drivers, A.shape[0])
        return cls(A, elementary_inputs(drivers, A.shape[0]), tuple(int(i) for i in drivers))

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def m(self):
        return self.B.shape[1]

    @property
    def eigenvalues(self):
        return np.linalg.eigvals(self.A)

    def reversed(self):
        """The time-reversed system ``x' = -A x + B u``."""
        return LinearSystem(-self.A, self.B, self.driver_set)


@dataclass(frozen=True)
class GramianResult:
    W: np.ndarray
    kind: str
    horizon: float
    basis: str = "original"
    diagnostics: dict = field(default_factory=dict)

    @property
    def is_infinite(self):
        return math.isinf(self.horizon)


@dataclass(frozen=True)
class EnergyMetrics:
    """Scalar summaries of a Gramian.

    ``lambda_min`` bounds the worst-case energy from below (its reciprocal is
    the energy of the hardest direction), ``trace`` is inversely related to
    the average energy and ``trace_inv`` is the average energy itself.
    """

    lambda_min: float
    trace: float
    trace_inv: float
    cond: float

    def as_dict(self):
        return {
            "lambda_min": self.lambda_min,
            "trace": self.trace,
            "trace_inv": self.trace_inv,
            "cond": self.cond,
        }


def _symmetrize(W):
    return 0.5 * (W + W.T)


def _gramian_integral(A, BBt, t):
    """``∫_0^t e^{Aτ} BBt e^{A^T τ} dτ`` by block exponentials and doubling.

    The classical augmented-exponential trick evaluates
    ``expm([[A, BBt], [0, -A^T]] h)`` and reads the integral off its blocks.
    Over a long horizon the ``e^{-A^T t}`` block overflows even when the
    answer is tame, so the trick is applied on a short step ``h = t / 2^k``
    and the result is extended with ``W(2s) = W(s) + Φ(s) W(s) Φ(s)^T``.
    Each doubling only adds positive semidefinite terms.
    """
    n = A.shape[0]
    norm1 = np.abs(A).sum(axis=0).max() * t
    k = 0 if norm1 <= 0.5 else int(math.ceil(math.log2(norm1 / 0.5)))
    h = t / 2.0**k
    C = np.zeros((2 * n, 2 * n))
    C[:n, :n] = A
    C[:n, n:] = BBt
    C[n:, n:] = -A.T
    F = sla.expm(C * h)
    Phi = F[:n, :n]
    W = _symmetrize(F[:n, n:] @ Phi.T)
    with np.errstate(over="raise", invalid="raise"):
        try:
            for _ in range(k):
                W = _symmetrize(W + Phi @ W @ Phi.T)
                Phi = Phi @ Phi
        except FloatingPointError:
            W = np.full_like(W, np.inf)
    return W


def _check_horizon(A, t):
    growth = np.max(np.linalg.eigvals(A).real)
    if growth > 0 and 2 * growth * t > _EXP_LIMIT:
        tmax = _EXP_LIMIT / (2 * growth)
        raise HorizonOverflowError(
            f"e^(A t) overflows for t = {t:g}; use t_f <= {tmax:.4g}", max_horizon=tmax
        )


def finite_gramian(sys, t_f, kind="reach"):
    """Finite-horizon reachability (``kind="reach"``) or controllability Gramian.

    Examples
    --------
    >>> sys = LinearSystem([[-1.0]], [[1.0]])
    >>> round(float(finite_gramian(sys, 1.0).W[0, 0]), 6)
    0.432332
    """
    t_f = check_positive_time(t_f)
    if kind == "reach":
        A = sys.A
    elif kind == "ctrl":
        A = -sys.A
    else:
        raise InvalidInputError(f"kind must be 'reach' or 'ctrl', got {kind!r}")
    _check_horizon(A, t_f)
    W = _gramian_integral(A, sys.B @ sys.B.T, t_f)
    if not np.all(np.isfinite(W)):
        raise HorizonOverflowError(f"Gramian overflowed at t_f = {t_f:g}")
    return GramianResult(W=W, kind=kind, horizon=t_f)


def infinite_gramian(sys, kind="reach", eps_axis=None):
    """Infinite-horizon Gramian from a Lyapunov equation.

    The reachability Gramian exists for stable ``A``, the controllability
    Gramian for antistable ``A``.
    """
    if kind == "reach":
        F = sys.A
    elif kind == "ctrl":
        F = -sys.A
    else:
        raise InvalidInputError(f"kind must be 'reach' or 'ctrl', got {kind!r}")
    try:
        W = solve_lyapunov(F, sys.B @ sys.B.T, eps_axis)
    except NotStableError as exc:
        need = "stable" if kind == "reach" else "antistable"
        raise StabilityMismatchError(f"infinite {kind} Gramian needs {need} A: {exc}") from exc
    return GramianResult(W=W, kind=kind, horizon=math.inf)


def _require_controllable(W, label):
    """Cholesky succeeds iff ``W`` is numerically positive definite."""
    if W.shape[0] == 0:
        return
    try:
        np.linalg.cholesky(W)
    except np.linalg.LinAlgError:
        vals, vecs = np.linalg.eigh(W)
        raise UncontrollableError(
            f"{label} subsystem is numerically uncontrollable (lambda_min = {vals[0]:.3g})",
            eigenvalues=vals,
            direction=vecs[:, 0],
        ) from None


def _back_transform(split, Wbar, basis):
    if basis == "split":
        return Wbar
    if basis != "original":
        raise InvalidInputError(f"basis must be 'original' or 'split', got {basis!r}")
    return _symmetrize(split.Vinv @ Wbar @ split.Vinv.T)


def mixed_gramian_infinite(
    sys, eps_axis=None, basis="original", check_controllable=True, split=None
):
    """Mixed Gramian of a system with no eigenvalue on the imaginary axis.

    In coordinates that separate the stable part ``A1`` from the antistable
    part ``A2`` the mixed Gramian is ``diag(W_{1,r}, W_{2,c})``: the
    reachability Gramian of the stable block and the controllability
    Gramian of the antistable block.  Its inverse governs the cost of
    transfers between arbitrary states, since the stable modes have to be
    driven out and the unstable ones driven back.

    Parameters
    ----------
    sys : LinearSystem
    eps_axis : float, optional
        Axis tolerance passed to the splitting.
    basis : {"original", "split"}
        Coordinates of the returned matrix.
    check_controllable : bool
        Raise :class:`UncontrollableError` when a block is not numerically
        positive definite.  Sweeps that record singular cases as missing data
        turn this off and let :func:`energy_metrics` decide.
    split : SpectralSplit, optional
        Precomputed splitting of ``sys.A``, reused across input matrices.

    Examples
    --------
    >>> W = mixed_gramian_infinite(LinearSystem(np.diag([-1.0, 2.0]), np.eye(2))).W
    >>> np.round(W, 12).tolist()
    [[0.5, 0.0], [0.0, 0.25]]
    """
    if split is None:
        split = split_stable_antistable(sys.A, eps_axis)
    k = split.k_stable
    Bbar = split.V @ sys.B
    B1, B2 = Bbar[:k], Bbar[k:]
    W1 = solve_lyapunov(split.A1, B1 @ B1.T) if k else np.zeros((0, 0))
    W2 = solve_lyapunov(-split.A2, B2 @ B2.T) if k < split.n else np.zeros((0, 0))
    if check_controllable:
        _require_controllable(W1, "stable")
        _require_controllable(W2, "antistable")
    Wbar = sla.block_diag(W1, W2)
    diagnostics = {"k_stable": k, "split_residual": split.residual}
    return GramianResult(
        W=_back_transform(split, Wbar, basis),
        kind="mixed",
        horizon=math.inf,
        basis=basis,
        diagnostics=diagnostics,
    )


def mixed_gramian_finite(
    sys, t_f, eps_axis=None, basis="original", check_controllable=True, split=None
):
    """Finite-horizon mixed Gramian ``diag(W_{1,r}(t_f), W_{2,c}(t_f))``.

    The exact finite-horizon problem couples the two blocks through a cross
    term that vanishes only as ``t_f`` grows.  That term is dropped, and its
    Frobenius norm is reported in ``diagnostics["cross_block_norm"]``.
    """
    t_f = check_positive_time(t_f)
    if split is None:
        split = split_stable_antistable(sys.A, eps_axis)
    k = split.k_stable
    Bbar = split.V @ sys.B
    # both blocks are integrated forward as a single stable system
    Abar = sla.block_diag(split.A1, -split.A2)
    full = _gramian_integral(Abar, Bbar @ Bbar.T, t_f)
    if not np.all(np.isfinite(full)):
        raise HorizonOverflowError(f"Gramian overflowed at t_f = {t_f:g}")
    W1, W2 = full[:k, :k], full[k:, k:]
    if check_controllable:
        _require_controllable(W1, "stable")
        _require_controllable(W2, "antistable")
    Wbar = sla.block_diag(W1, W2)
    diagnostics = {
        "k_stable": k,
        "split_residual": split.residual,
        "cross_block_norm": float(np.linalg.norm(full[:k, k:])),
    }
    return GramianResult(
        W=_back_transform(split, Wbar, basis),
        kind="mixed",
        horizon=t_f,
        basis=basis,
        diagnostics=diagnostics,
    )


def mixed_transfer_cost(sys, x_o, x_f, t_f=None, eps_axis=None):
    """Energy of the mixed-Gramian transfer estimate between two states.

    In split coordinates the stable components must reach their target and
    the antistable components must leave their origin, so the cost is the
    quadratic form of ``W_m^{-1}`` on ``[(V x_f)_1, (V x_o)_2]``.
    """
    split = split_stable_antistable(sys.A, eps_axis)
    k = split.k_stable
    x_o = np.asarray(x_o, dtype=float).reshape(-1)
    x_f = np.asarray(x_f, dtype=float).reshape(-1)
    z = np.concatenate([(split.V @ x_f)[:k], (split.V @ x_o)[k:]])
    if t_f is None:
        Wbar = mixed_gramian_infinite(sys, eps_axis, basis="split").W
    else:
        Wbar = mixed_gramian_finite(sys, t_f, eps_axis, basis="split").W
    return float(z @ np.linalg.solve(Wbar, z))


def modal_diag_gramian(modal, driver_flags, t_f, zero_tol=None):
    """Diagonal approximation of the modal Gramian of undamped oscillators.

    Over long horizons the Gramian of decoupled modes ``z'' = -Ω² z + Ψ^T M^{-1} B u``
    is dominated by its diagonal, which grows linearly in ``t_f``:

    * position entry ``i``: ``t_f / (2 ω_i²) · Σ_j β_j φ_{ji}²``
    * momentum entry ``i``: ``t_f / 2 · Σ_j β_j φ_{ji}²``

    where ``φ_{ji} = ψ_{ji} / M_j`` is the mass-normalised mode shape and
    ``β_j = 1`` marks node ``j`` as a driver.

    Parameters
    ----------
    modal : ModalDecomposition
    driver_flags : array_like of {0, 1}, shape (n,)
        Indicator vector of the driver nodes.
    t_f : float
        Horizon.

    Returns
    -------
    GramianResult
        ``2n x 2n`` diagonal matrix in the modal basis.
    """
    t_f = check_positive_time(t_f)
    beta = np.asarray(driver_flags, dtype=float).reshape(-1)
    n = modal.n
    if beta.shape[0] != n:
        raise InvalidInputError(f"driver_flags has length {beta.shape[0]}, expected {n}")
    if not np.all((beta == 0) | (beta == 1)):
        raise InvalidInputError("driver_flags must contain only 0 and 1")
    omega2 = modal.omega2
    if zero_tol is None:
        zero_tol = 1e-12 * max(float(omega2.max()), 1.0)
    if np.any(omega2 <= zero_tol):
        raise ZeroFrequencyError("modal Gramian needs strictly positive frequencies")
    gain = beta @ modal.Phi**2
    diag = np.concatenate([gain / (2 * omega2), gain / 2]) * t_f
    return GramianResult(W=np.diag(diag), kind="modal_diag", horizon=t_f, basis="modal")


def metrics_from_eigenvalues(vals, rank_tol=RANK_TOL, strict=True):
    """Energy metrics from the eigenvalues of a PSD Gramian.

    When the smallest eigenvalue is below ``rank_tol * lambda_max`` the
    Gramian counts as singular: ``strict=True`` raises, otherwise
    ``trace_inv`` is ``nan`` and ``cond`` is ``inf``.
    """
    vals = np.sort(np.asarray(vals, dtype=float))
    lam_max = vals[-1]
    lam_min = vals[0]
    trace = float(vals.sum())
    if lam_max <= 0 or lam_min <= rank_tol * lam_max:
        if strict:
            raise SingularGramianError(
                f"Gramian is singular to tolerance {rank_tol:g} "
                f"(lambda_min = {lam_min:.3g}, lambda_max = {lam_max:.3g})",
                eigenvalues=vals,
            )
        return EnergyMetrics(float(lam_min), trace, math.nan, math.inf)
    return EnergyMetrics(
        lambda_min=float(lam_min),
        trace=trace,
        trace_inv=float(np.sum(1.0 / vals)),
        cond=float(lam_max / lam_min),
    )


def energy_metrics(W, rank_tol=RANK_TOL, strict=True):
    """Smallest eigenvalue, trace, trace of the inverse and condition number.

    Examples
    --------
    >>> energy_metrics(np.diag([1.0, 4.0]))
    EnergyMetrics(lambda_min=1.0, trace=5.0, trace_inv=1.25, cond=4.0)
    """
    if isinstance(W, GramianResult):
        W = W.W
    W = as_square_matrix(W, "W")
    if W.shape[0] > 1 and np.count_nonzero(W - np.diag(np.diag(W))) == 0:
        vals = np.diag(W).copy()
    else:
        vals = np.linalg.eigvalsh(_symmetrize(W))
    return metrics_from_eigenvalues(vals, rank_tol, strict)
