"""Minimum-energy state transfer and its verification by simulation."""

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError, UncontrollableError
from .gramian import LinearSystem, finite_gramian
from .matfun import expm
from .validation import (
    as_square_matrix,
    as_vector,
    check_positive_time,
    default_axis_tol,
)

COND_LIMIT = 1e12


@dataclass(frozen=True)
class TransferTask:
    x_o: np.ndarray
    x_f: np.ndarray
    t_f: float

    def __post_init__(self):
        x_o = np.asarray(self.x_o, dtype=float).reshape(-1)
        x_f = np.asarray(self.x_f, dtype=float).reshape(-1)
        if x_o.shape != x_f.shape:
            raise InvalidInputError("x_o and x_f must have the same length")
        object.__setattr__(self, "x_o", x_o)
        object.__setattr__(self, "x_f", x_f)
        object.__setattr__(self, "t_f", check_positive_time(self.t_f))


class _ExpAction:
    """Evaluate ``s -> e^{M s} v`` quickly for many values of ``s``.

    A diagonalisation is reused when the eigenvector matrix is well
    conditioned; otherwise every call falls back to a full exponential.
    """

    def __init__(self, M, v, max_cond=1e8):
        self.M = M
        self.v = v
        lam, X = np.linalg.eig(M)
        if np.linalg.cond(X) < max_cond:
            self.lam = lam
            self.X = X
            self.c = np.linalg.solve(X, v.astype(complex))
        else:
            self.lam = None

    def __call__(self, s):
        if self.lam is None:
            return expm(self.M, s) @ self.v
        return (self.X @ (np.exp(self.lam * s) * self.c)).real


class ControlLaw:
    """Open-loop minimum-energy input ``u(t) = B^T e^{A^T (t_f - t)} η``.

    ``η = W_r(t_f)^{-1} (x_f - e^{A t_f} x_o)`` is computed once; ``u`` is
    evaluated on demand so simulators can pick their own time grid.
    """

    def __init__(self, sys, t_f, eta, energy):
        self.sys = sys
        self.t_f = float(t_f)
        self.eta = np.asarray(eta, dtype=float)
        self.energy = float(energy)
        self.eta.setflags(write=False)
        self._costate = _ExpAction(sys.A.T, self.eta)

    @property
    def m(self):
        return self.sys.m

    def __call__(self, t):
        if not -1e-12 * self.t_f <= t <= self.t_f * (1 + 1e-12):
            raise InvalidInputError(f"t={t} outside the horizon [0, {self.t_f}]")
        return self.sys.B.T @ self._costate(self.t_f - t)

    def __repr__(self):
        return f"ControlLaw(n={self.sys.n}, m={self.m}, t_f={self.t_f:g}, energy={self.energy:.6g})"


def _zero_control(m):
    def u(t):
        return np.zeros(m)

    return u


def _solve_gramian(W, rhs):
    vals, vecs = np.linalg.eigh(W)
    if vals[-1] <= 0 or vals[0] <= vals[-1] / COND_LIMIT:
        raise UncontrollableError(
            "reachability Gramian is singular; the direction returned in "
            "`direction` cannot be reached with finite energy "
            f"(lambda_min = {vals[0]:.3g}, lambda_max = {vals[-1]:.3g})",
            eigenvalues=vals,
            direction=vecs[:, 0],
        )
    return vecs @ ((vecs.T @ rhs) / vals)


def min_energy_control(sys, task):
    """Input of least energy ``∫ ||u||² dt`` transferring ``x_o`` to ``x_f`` in ``t_f``.

    Raises
    ------
    UncontrollableError
        If ``W_r(t_f)`` has condition number above ``1e12``.  The exception
        carries the eigenvector of the smallest Gramian eigenvalue.
    """
    n = sys.n
    x_o = as_vector(task.x_o, n, "x_o")
    x_f = as_vector(task.x_f, n, "x_f")
    W = finite_gramian(sys, task.t_f).W
    gap = x_f - expm(sys.A, task.t_f) @ x_o
    eta = _solve_gramian(W, gap)
    return ControlLaw(sys, task.t_f, eta, float(gap @ eta))


def transfer_cost(sys, task):
    """Minimum energy ``(x_f - e^{A t_f} x_o)^T W_r^{-1} (x_f - e^{A t_f} x_o)``."""
    n = sys.n
    x_o = as_vector(task.x_o, n, "x_o")
    x_f = as_vector(task.x_f, n, "x_f")
    gap = x_f - expm(sys.A, task.t_f) @ x_o
    if not np.any(gap):
        return 0.0
    W = finite_gramian(sys, task.t_f).W
    return float(gap @ _solve_gramian(W, gap))


def reach_cost(sys, x_f, t_f):
    """Energy to reach ``x_f`` from the origin."""
    return transfer_cost(sys, TransferTask(np.zeros(sys.n), x_f, t_f))


def ctrl_cost(sys, x_o, t_f):
    """Energy to steer ``x_o`` to the origin, through the controllability Gramian."""
    x_o = as_vector(x_o, sys.n, "x_o")
    if not np.any(x_o):
        return 0.0
    W = finite_gramian(sys, t_f, kind="ctrl").W
    return float(x_o @ _solve_gramian(W, x_o))


def simulate(sys, u, x_o, t_f, steps=10_000):
    """Integrate ``x' = A x + B u(t)`` with classical fixed-step RK4.

    Parameters
    ----------
    sys : LinearSystem
    u : callable or None
        Input as a function of time; ``None`` means zero input.
    x_o : array_like
        Initial state.
    t_f : float
        Final time.
    steps : int
        Number of RK4 steps, at least 100.

    Returns
    -------
    t : ndarray, shape (steps + 1,)
    X : ndarray, shape (steps + 1, n)
    """
    if steps < 100:
        raise InvalidInputError("simulate needs at least 100 steps")
    t_f = check_positive_time(t_f)
    A, B = sys.A, sys.B
    x = as_vector(x_o, sys.n, "x_o").copy()
    if u is None:
        u = _zero_control(sys.m)
    h = t_f / steps
    t = np.linspace(0.0, t_f, steps + 1)
    X = np.empty((steps + 1, sys.n))
    X[0] = x

    def f(s, y):
        return A @ y + B @ u(s)

    for k in range(steps):
        s = t[k]
        k1 = f(s, x)
        k2 = f(s + h / 2, x + h / 2 * k1)
        k3 = f(s + h / 2, x + h / 2 * k2)
        k4 = f(t[k + 1], x + h * k3)
        x = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        X[k + 1] = x
    if not np.all(np.isfinite(X)):
        raise FloatingPointError("trajectory overflowed")
    return t, X


def input_energy(u, t_f, steps=10_000):
    """``∫_0^{t_f} ||u(t)||² dt`` by composite Simpson's rule (``steps`` even)."""
    steps += steps % 2
    t = np.linspace(0.0, t_f, steps + 1)
    sq = np.array([np.dot(v, v) for v in (u(s) for s in t)])
    w = np.ones(steps + 1)
    w[1:-1:2] = 4
    w[2:-1:2] = 2
    return float(t_f / steps / 3 * np.dot(w, sq))


@dataclass(frozen=True)
class BoundedControllability:
    reachable_bounded: bool
    controllable_to_0_bounded: bool
    completely_controllable_bounded: bool


def bounded_controllability_class(A, eps_axis=None):
    """Which transfers remain possible when the input amplitude is bounded.

    States can be reached from the origin when no eigenvalue is stable,
    driven to the origin when none is unstable, and both (complete
    controllability) only when the whole spectrum sits on the imaginary axis.
    Eigenvalues within ``eps_axis`` of the axis count as on it.
    """
    A = as_square_matrix(A)
    if eps_axis is None:
        eps_axis = default_axis_tol(A)
    re = np.linalg.eigvals(A).real
    reach = bool(re.min() >= -eps_axis)
    to_zero = bool(re.max() <= eps_axis)
    return BoundedControllability(reach, to_zero, reach and to_zero)


def refocus_control(net, q_f, t_f, drivers=None, q_o=None):
    """Minimum-energy input that moves an oscillator network to a displacement.

    The network starts at rest in ``q_o`` (default: the origin) and must end
    at rest in ``q_f``, which displaces a single node.  The transfer is
    computed in momentum coordinates ``x = [M q; M q']``.

    Parameters
    ----------
    net : OscillatorNetwork
    q_f : array_like, shape (n,)
        Target displacement with at most one nonzero entry.
    t_f : float
    drivers : sequence of int, optional
        Driven nodes; defaults to ``net.drivers``.
    """
    from .oscillators import build_state_space

    if drivers is not None:
        net = net.with_drivers(drivers)
    n = net.n
    q_f = as_vector(q_f, n, "q_f")
    if np.count_nonzero(q_f) > 1:
        raise InvalidInputError("refocusing targets a single node: q_f may have one nonzero entry")
    q_o = np.zeros(n) if q_o is None else as_vector(q_o, n, "q_o")
    sys = build_state_space(net, "momentum")
    x_o = np.concatenate([net.masses * q_o, np.zeros(n)])
    x_f = np.concatenate([net.masses * q_f, np.zeros(n)])
    return min_energy_control(sys, TransferTask(x_o, x_f, t_f))


__all__ = [
    "BoundedControllability",
    "ControlLaw",
    "LinearSystem",
    "TransferTask",
    "bounded_controllability_class",
    "ctrl_cost",
    "input_energy",
    "min_energy_control",
    "reach_cost",
    "refocus_control",
    "simulate",
    "transfer_cost",
]
