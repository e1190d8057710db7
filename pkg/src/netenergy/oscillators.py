"""Networks of coupled harmonic oscillators and linearised swing equations.

The second-order model is ``M q'' + D q' + K q = B u`` with diagonal masses
``M``, stiffness ``K = diag(K_d) + L`` (grounding plus a weighted graph
Laplacian) and damping ``D``.
"""

from dataclasses import dataclass, field, replace
import warnings

import numpy as np
from scipy.sparse.csgraph import connected_components

from .exceptions import InvalidInputError, NonProportionalDampingError
from .gramian import LinearSystem
from .matfun import generalized_modes
from .validation import (
    as_square_matrix,
    check_drivers,
    check_symmetric,
    elementary_inputs,
)

PROPORTIONAL_RTOL = 1e-8


@dataclass(frozen=True)
class OscillatorNetwork:
    """Masses, grounding, Laplacian coupling, damping and driven nodes.

    Parameters
    ----------
    masses : array_like, shape (n,)
        Positive masses (the diagonal of ``M``).
    grounding : array_like, shape (n,)
        Nonnegative grounding stiffness (the diagonal of ``K_d``).
    laplacian : (n, n) array_like
        Symmetric, zero row sums, nonpositive off-diagonal entries.
    damping : (n, n) array_like, optional
        Symmetric positive semidefinite damping matrix; zero by default.
    drivers : sequence of int
        Nodes receiving an external input.
    """

    masses: np.ndarray
    grounding: np.ndarray
    laplacian: np.ndarray
    damping: np.ndarray = None
    drivers: tuple = field(default=())

    def __post_init__(self):
        M = np.asarray(self.masses, dtype=float).reshape(-1)
        n = M.size
        if n < 1 or not np.all(np.isfinite(M)) or np.any(M <= 0):
            raise InvalidInputError("masses must be finite and positive")
        Kd = np.broadcast_to(np.asarray(self.grounding, dtype=float), (n,)).copy()
        if not np.all(np.isfinite(Kd)) or np.any(Kd < 0):
            raise InvalidInputError("grounding stiffness must be finite and nonnegative")
        L = check_symmetric(as_square_matrix(self.laplacian, "laplacian"), "laplacian")
        if L.shape[0] != n:
            raise InvalidInputError("laplacian size does not match masses")
        scale = max(np.abs(L).max(), 1.0)
        off = L - np.diag(np.diag(L))
        if np.any(off > 1e-12 * scale):
            raise InvalidInputError("laplacian off-diagonal entries must be <= 0")
        if np.any(np.abs(L.sum(axis=1)) > 1e-10 * scale * n):
            raise InvalidInputError("laplacian rows must sum to zero")
        if self.damping is None:
            D = np.zeros((n, n))
        else:
            D = check_symmetric(as_square_matrix(self.damping, "damping"), "damping")
            if D.shape[0] != n:
                raise InvalidInputError("damping size does not match masses")
            if np.linalg.eigvalsh(D)[0] < -1e-10 * max(np.abs(D).max(), 1.0):
                raise InvalidInputError("damping must be positive semidefinite")
        drivers = tuple(int(i) for i in check_drivers(self.drivers, n))
        for name, value in (("masses", M), ("grounding", Kd), ("laplacian", L), ("damping", D)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        object.__setattr__(self, "drivers", drivers)

    @property
    def n(self):
        return self.masses.size

    @property
    def stiffness(self):
        return np.diag(self.grounding) + self.laplacian

    @property
    def B(self):
        return elementary_inputs(self.drivers, self.n)

    def with_drivers(self, drivers):
        return replace(self, drivers=tuple(drivers))

    def coupling_matrix(self):
        """``K M^{-1}``, the block acting on positions in the momentum equations."""
        return self.stiffness / self.masses[None, :]

    def is_connected(self):
        pattern = np.abs(self.laplacian - np.diag(np.diag(self.laplacian))) > 0
        ncomp, _ = connected_components(pattern, directed=False)
        return ncomp == 1


def laplacian_from_edges(n, edges, weights=None):
    """Weighted Laplacian of an undirected graph.

    ``edges`` is a sequence of ``(u, v)`` pairs; when both directions of a
    pair are listed the weight is their mean, so symmetric directed files do
    not double-count.  Weights enter as absolute values.
    """
    edges = np.asarray(edges, dtype=int).reshape(-1, 2)
    w = np.ones(len(edges)) if weights is None else np.abs(np.asarray(weights, dtype=float))
    if edges.size and (edges.min() < 0 or edges.max() >= n):
        raise InvalidInputError(f"edge endpoints must lie in [0, {n})")
    S = np.zeros((n, n))
    keep = edges[:, 0] != edges[:, 1]
    np.add.at(S, (edges[keep, 0], edges[keep, 1]), w[keep])
    both = (S > 0) & (S.T > 0)
    W = np.where(both, 0.5 * (S + S.T), S + S.T)
    return np.diag(W.sum(axis=1)) - W


def build_state_space(net, basis="momentum"):
    """First-order realisation of the oscillator network.

    ``basis="momentum"``
        state ``[M q; M q']``, ``A = [[0, I], [-K M^{-1}, -D M^{-1}]]``,
        ``B = [0; B]``.
    ``basis="displacement"``
        state ``[q; q']``, ``A = [[0, I], [-M^{-1} K, -M^{-1} D]]``,
        ``B = [0; M^{-1} B]``.
    ``basis="modal"``
        state ``z = diag(Ψ^{-1}, Ψ^{-1}) [M q; M q']`` with ``Ψ = M Φ``;
        ``A = [[0, I], [-Ω², -D_1]]`` and ``B = [0; Φ^T B]``.
    """
    n = net.n
    M = net.masses
    K = net.stiffness
    D = net.damping
    Z = np.zeros((n, n))
    eye = np.eye(n)
    Bn = net.B
    if basis == "momentum":
        A = np.block([[Z, eye], [-K / M[None, :], -D / M[None, :]]])
        B = np.vstack([np.zeros_like(Bn), Bn])
    elif basis == "displacement":
        A = np.block([[Z, eye], [-K / M[:, None], -D / M[:, None]]])
        B = np.vstack([np.zeros_like(Bn), Bn / M[:, None]])
    elif basis == "modal":
        modal = modal_decomposition(net)
        A = np.block([[Z, eye], [-np.diag(modal.omega2), -np.diag(modal.damping)]])
        B = np.vstack([np.zeros_like(Bn), modal.input_matrix(net.drivers)])
        return LinearSystem(A, B)
    else:
        raise InvalidInputError(f"unknown basis {basis!r}")
    return LinearSystem(A, B)


@dataclass(frozen=True)
class ModalDecomposition:
    """Normal modes of an oscillator network.

    ``Phi[:, k]`` is the mass-normalised shape of mode ``k`` and
    ``Psi = M Phi``.  In modal coordinates the momentum state transforms by
    ``T = diag(Phi^T, Phi^T)``, i.e. ``Psi^{-1} = Phi^T``.
    """

    omega2: np.ndarray
    Phi: np.ndarray
    masses: np.ndarray
    damping: np.ndarray

    @property
    def n(self):
        return self.omega2.size

    @property
    def omega(self):
        return np.sqrt(self.omega2)

    @property
    def Psi(self):
        return self.masses[:, None] * self.Phi

    @property
    def has_zero_mode(self):
        return bool(self.omega2[0] <= 1e-12 * max(float(self.omega2[-1]), 1.0))

    def input_matrix(self, drivers):
        """``Ψ^T M^{-1} B = Φ^T B`` for unit-column ``B``."""
        idx = check_drivers(drivers, self.n)
        return self.Phi[idx, :].T.copy()

    def transform(self):
        """``T`` with ``z = T x`` mapping momentum coordinates to modal ones."""
        n = self.n
        T = np.zeros((2 * n, 2 * n))
        T[:n, :n] = self.Phi.T
        T[n:, n:] = self.Phi.T
        return T


def modal_decomposition(net, rtol=PROPORTIONAL_RTOL):
    """Generalised eigenmodes of ``(K, M)`` and the modal damping.

    Raises
    ------
    NonProportionalDampingError
        When ``Φ^T D Φ`` is not diagonal to ``rtol``; the exception carries
        the off-diagonal Frobenius norm.
    """
    omega2, Phi = generalized_modes(net.masses, net.stiffness)
    D1 = Phi.T @ net.damping @ Phi
    diag = np.diag(D1).copy()
    off = float(np.linalg.norm(D1 - np.diag(diag)))
    scale = float(np.linalg.norm(D1))
    if off > rtol * max(scale, np.finfo(float).tiny):
        raise NonProportionalDampingError(
            f"damping is not proportional: off-diagonal modal norm {off:.3g}",
            offdiag_norm=off,
        )
    return ModalDecomposition(omega2=omega2, Phi=Phi, masses=net.masses.copy(), damping=diag)


def build_swing_grid(
    edges,
    n=None,
    weights=None,
    mass_mean=10.0,
    damping_scale=0.0,
    grounding=1e-3,
    masses=None,
    seed=None,
    drivers=(),
):
    """Linearised swing-equation network on a grid topology.

    Masses are uniform on ``[mass_mean/2, 3 mass_mean/2]`` unless given
    explicitly, damping is ``damping_scale * M`` and every node is grounded
    with stiffness ``grounding``.  Setting ``grounding=0`` keeps the pure
    Laplacian and therefore a zero-frequency mode.
    """
    edges = np.asarray(edges)
    if edges.ndim == 2 and edges.shape[1] == 3 and weights is None:
        weights = edges[:, 2].astype(float)
        edges = edges[:, :2]
    edges = np.asarray(edges, dtype=int).reshape(-1, 2)
    if n is None:
        n = int(edges.max()) + 1 if edges.size else 0
    if n < 1:
        raise InvalidInputError("grid has no nodes")
    if masses is None:
        if not mass_mean > 0:
            raise InvalidInputError("mass_mean must be positive")
        rng = np.random.default_rng(seed)
        masses = rng.uniform(0.5 * mass_mean, 1.5 * mass_mean, size=n)
    if damping_scale < 0 or grounding < 0:
        raise InvalidInputError("damping_scale and grounding must be nonnegative")
    masses = np.asarray(masses, dtype=float)
    L = laplacian_from_edges(n, edges, weights)
    net = OscillatorNetwork(
        masses=masses,
        grounding=np.full(n, float(grounding)),
        laplacian=L,
        damping=damping_scale * np.diag(masses) if damping_scale else None,
        drivers=tuple(drivers),
    )
    if not net.is_connected():
        warnings.warn("grid topology is not connected; controllability may fail", stacklevel=2)
    return net


def random_oscillator_network(n, p, seed=None, mass_mean=1.0, grounding=1e-3, connect=True):
    """Oscillators coupled along an undirected Erdős-Rényi graph.

    Coupling strengths are ``|N(0, 1)|``.  With ``connect=True`` isolated
    pieces are joined by one random edge per extra component so every node
    takes part in the collective modes.
    """
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.random((n, n)) < p, 1)
    W = np.where(upper, np.abs(rng.standard_normal((n, n))), 0.0)
    W = W + W.T
    if connect:
        ncomp, labels = connected_components(W > 0, directed=False)
        for c in range(1, ncomp):
            u = rng.choice(np.flatnonzero(labels == c))
            v = rng.choice(np.flatnonzero(labels < c))
            W[u, v] = W[v, u] = abs(rng.standard_normal()) or 1.0
    masses = rng.uniform(0.5 * mass_mean, 1.5 * mass_mean, size=n)
    L = np.diag(W.sum(axis=1)) - W
    return OscillatorNetwork(masses=masses, grounding=np.full(n, float(grounding)), laplacian=L)
