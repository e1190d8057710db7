"""Driver-node placement strategies.

Two families live here.  Ranking heuristics on the weighted adjacency
(``r_w = w_out / w_in``) apply to any network.  Modal strategies apply to
undamped oscillator networks, where the long-horizon Gramian is nearly
diagonal in modal coordinates and each driver contributes a nonnegative
vector to that diagonal.

Every strategy breaks ties by ascending node index, so results depend only
on the input data.
"""

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import InfeasibleCoverageError, InvalidInputError, ZeroFrequencyError
from .gramian import (
    LinearSystem,
    energy_metrics,
    finite_gramian,
    metrics_from_eigenvalues,
    mixed_gramian_infinite,
)
from .netgen import weighted_degrees
from .oscillators import ModalDecomposition, OscillatorNetwork, modal_decomposition
from .validation import as_square_matrix, check_count, elementary_inputs

BRUTE_FORCE_LIMIT = 10**6
TRACE_WEIGHTINGS = ("published", "exact")


@dataclass(frozen=True)
class PlacementResult:
    """Outcome of a placement strategy.

    ``order`` is a full ranking for ranking strategies and the selected set
    (in selection order) for the set-valued ones.
    """

    strategy: str
    order: tuple
    metrics_per_m: dict = field(default_factory=dict)

    def top(self, m):
        return list(self.order[:m])


def _stable_ranking(score):
    """Indices sorted by descending score, ties by ascending index."""
    score = np.asarray(score, dtype=float)
    idx = np.arange(score.size)
    return np.lexsort((idx, -score))


def _check_modal(modal):
    if isinstance(modal, OscillatorNetwork):
        modal = modal_decomposition(modal)
    if not isinstance(modal, ModalDecomposition):
        raise InvalidInputError("expected a ModalDecomposition or OscillatorNetwork")
    if modal.has_zero_mode:
        raise ZeroFrequencyError("modal placement needs strictly positive frequencies")
    return modal


def modal_contributions(modal):
    """Per-node contribution ``y^i`` to the diagonal modal Gramian per unit time.

    Row ``i`` holds ``(φ_{i1}²/(2ω_1²), …, φ_{in}²/(2ω_n²), φ_{i1}²/2, …, φ_{in}²/2)``
    where ``φ_{ik} = ψ_{ik} / M_i``.  Driving the set ``S`` yields the diagonal
    ``t_f · Σ_{i∈S} y^i``.
    """
    modal = _check_modal(modal)
    P2 = modal.Phi**2
    return np.hstack([P2 / (2 * modal.omega2), P2 / 2])


def trinv_contributions(modal):
    """Contribution vectors used by the greedy trace-of-inverse heuristic.

    Row ``i`` is ``φ_{ik}² / (2 (1 + ω_k²))``, the sum of the position and
    momentum weights ``1 / (2 ω²)`` and ``1 / 2`` combined harmonically, so
    ``Σ_k 1 / Σ_{i∈S} y^i_k`` equals the trace of the inverse diagonal
    Gramian per unit time.
    """
    modal = _check_modal(modal)
    return modal.Phi**2 / (2 * (1 + modal.omega2))


def trace_scores(modal, weighting="published"):
    """Per-node score whose sum over a driver set is the trace objective.

    ``weighting="published"`` uses mode weights ``1 / (2 (1 + ω²))``.
    ``weighting="exact"`` uses ``(1 + ω²) / (2 ω²)``, for which the score sum
    is exactly the trace of the diagonal modal Gramian per unit time.
    """
    modal = _check_modal(modal)
    if weighting == "published":
        w = 1.0 / (2 * (1 + modal.omega2))
    elif weighting == "exact":
        w = (1 + modal.omega2) / (2 * modal.omega2)
    else:
        raise InvalidInputError(f"weighting must be one of {TRACE_WEIGHTINGS}, got {weighting!r}")
    return modal.Phi**2 @ w


def rank_by_rw(adj):
    """Rank nodes by decreasing ``w_out / w_in``; nodes without in-weight first.

    Examples
    --------
    >>> rank_by_rw([[0, 2], [-3, 0]]).order
    (0, 1)
    """
    r_w = weighted_degrees(adj).r_w
    return PlacementResult("rw", tuple(int(i) for i in _stable_ranking(r_w)))


def random_placement(n, m, seed=None):
    """``m`` distinct nodes drawn uniformly without replacement."""
    m = check_count(m, 0, n)
    rng = np.random.default_rng(seed)
    return [int(i) for i in rng.choice(n, size=m, replace=False)]


def greedy_maxmin(modal, m):
    """Greedy maximisation of the smallest diagonal entry of the modal Gramian.

    At each step the candidate that maximises ``min_k (y^s + y^j)_k`` joins
    the set, ``y^s`` being the accumulated contribution of the nodes already
    chosen.  The smallest diagonal entry equals ``λ_min`` of the diagonal
    Gramian, so this is a greedy heuristic for the worst-case energy.
    """
    Y = modal_contributions(modal)
    n = Y.shape[0]
    m = check_count(m, 0, n)
    acc = np.zeros(Y.shape[1])
    free = np.ones(n, dtype=bool)
    chosen = []
    for _ in range(m):
        value = np.where(free, (acc + Y).min(axis=1), -np.inf)
        j = int(np.argmax(value))
        chosen.append(j)
        free[j] = False
        acc += Y[j]
    return chosen


def exact_trace_placement(modal, m, weighting="published"):
    """The ``m`` nodes with the largest trace scores.

    The trace objective is a sum of per-node scores, so taking the top ``m``
    is an exact optimum.  See :func:`trace_scores` for ``weighting``.
    """
    s = trace_scores(modal, weighting)
    m = check_count(m, 0, s.size)
    return [int(i) for i in _stable_ranking(s)[:m]]


def _trinv_objective(acc, Y):
    """``Σ_k 1 / (acc + y^j)_k`` per candidate and the count of uncovered modes."""
    tot = acc + Y
    uncovered = np.sum(tot <= 0, axis=1)
    with np.errstate(divide="ignore"):
        value = np.where(tot > 0, 1.0 / np.where(tot > 0, tot, 1.0), 0.0).sum(axis=1)
    return value, uncovered


def greedy_trinv(modal, m, literal=False):
    """Greedy minimisation of the trace of the inverse diagonal Gramian.

    Each step adds the candidate minimising ``Σ_k 1 / (y^s_k + y^j_k)``.
    While some mode is still unexcited by every candidate the objective is
    infinite; the candidate leaving the fewest unexcited modes is preferred
    then, and the finite part of the sum breaks ties.

    Parameters
    ----------
    literal : bool
        Maximise instead of minimise.  Kept only to audit the alternative
        reading of the selection rule; it picks the costliest drivers.

    Raises
    ------
    InfeasibleCoverageError
        If after ``m`` picks some mode is still not excited by any driver.
    """
    Y = trinv_contributions(modal)
    n = Y.shape[0]
    m = check_count(m, 0, n)
    acc = np.zeros(Y.shape[1])
    free = np.ones(n, dtype=bool)
    chosen = []
    for _ in range(m):
        value, uncovered = _trinv_objective(acc, Y)
        cand = np.flatnonzero(free)
        if literal:
            keys = (cand, -value[cand], -uncovered[cand])
        else:
            keys = (cand, value[cand], uncovered[cand])
        j = int(cand[np.lexsort(keys)[0]])
        chosen.append(j)
        free[j] = False
        acc += Y[j]
    if not literal and m and np.any(acc <= 0):
        raise InfeasibleCoverageError(
            f"{int(np.sum(acc <= 0))} mode(s) are not excited by any of the {m} drivers"
        )
    return chosen


def mode_power_placement(modal, m, mode):
    """The ``m`` nodes where the target mode has the largest ``ψ²``.

    ``mode`` is the 0-based index of the mode in ascending frequency order.
    """
    modal = _check_modal(modal) if not isinstance(modal, ModalDecomposition) else modal
    mode = check_count(mode, 0, modal.n - 1, "mode")
    m = check_count(m, 0, modal.n)
    power = modal.Psi[:, mode] ** 2
    return [int(i) for i in _stable_ranking(power)[:m]]


def ranking_overlap(order_a, order_b, m):
    """Fraction of shared nodes among the first ``m`` entries of two rankings."""
    m = check_count(m, 1, min(len(order_a), len(order_b)))
    return len(set(order_a[:m]) & set(order_b[:m])) / m


# --- objectives ------------------------------------------------------------


def modal_metrics(modal, drivers, t_f=1.0, rank_tol=1e-12, strict=False):
    """Energy metrics of the diagonal modal Gramian for a driver set."""
    Y = modal_contributions(modal)
    diag = t_f * Y[list(drivers)].sum(axis=0)
    return metrics_from_eigenvalues(diag, rank_tol, strict)


def placement_objective(modal, drivers, metric, weighting="published"):
    """Value of a modal objective for ``drivers``; larger is better.

    ``metric`` is ``"lambda_min"``, ``"trace"`` (with ``weighting``) or
    ``"trace_inv"``, the latter returned negated so that every objective is
    maximised.
    """
    drivers = list(drivers)
    if metric == "lambda_min":
        return float(modal_contributions(modal)[drivers].sum(axis=0).min())
    if metric == "trace":
        return float(trace_scores(modal, weighting)[drivers].sum())
    if metric == "trace_inv":
        tot = trinv_contributions(modal)[drivers].sum(axis=0)
        if np.any(tot <= 0):
            return -np.inf
        return -float(np.sum(1.0 / tot))
    raise InvalidInputError(f"unknown metric {metric!r}")


def _system_gramian_factory(sys, t_f):
    """Per-node Gramians of a general system; they add up over driver sets."""
    n = sys.n
    out = []
    for i in range(n):
        single = LinearSystem(sys.A, elementary_inputs([i], n))
        if t_f is None:
            W = mixed_gramian_infinite(single, check_controllable=False).W
        else:
            W = finite_gramian(single, t_f).W
        out.append(W)
    return np.array(out)


def brute_force_placement(target, m, metric="lambda_min", t_f=None, weighting="published"):
    """Exhaustive optimum over all ``C(n, m)`` driver sets.

    Parameters
    ----------
    target : ModalDecomposition, OscillatorNetwork, LinearSystem or ndarray
        Modal targets are scored on the diagonal modal Gramian.  A system or
        a bare state matrix is scored on its finite-horizon reachability
        Gramian over ``t_f`` or, with ``t_f=None``, on its mixed Gramian.
    m : int
    metric : {"lambda_min", "trace", "trace_inv"}
    weighting : {"published", "exact"}
        Trace weighting for modal targets.

    Returns
    -------
    list of int
        The lexicographically first optimal set.
    """
    if metric not in ("lambda_min", "trace", "trace_inv"):
        raise InvalidInputError(f"unknown metric {metric!r}")
    modal_target = isinstance(target, (ModalDecomposition, OscillatorNetwork))
    if modal_target:
        modal = _check_modal(target)
        n = modal.n
    else:
        A = target.A if isinstance(target, LinearSystem) else as_square_matrix(target)
        n = A.shape[0]
    m = check_count(m, 0, n)
    if comb(n, m) > BRUTE_FORCE_LIMIT:
        raise InvalidInputError(f"C({n}, {m}) exceeds the enumeration limit {BRUTE_FORCE_LIMIT}")
    if modal_target:

        def score(S):
            return placement_objective(modal, S, metric, weighting)

    else:
        Wi = _system_gramian_factory(LinearSystem(A, np.eye(n)), t_f)

        def score(S):
            W = Wi[list(S)].sum(axis=0)
            if metric == "trace":
                return float(np.trace(W))
            met = energy_metrics(W, strict=False)
            if metric == "lambda_min":
                return met.lambda_min
            return -met.trace_inv if np.isfinite(met.trace_inv) else -np.inf

    best, best_val = None, -np.inf
    for S in combinations(range(n), m):
        val = score(S)
        if best is None or val > best_val:
            best, best_val = S, val
    return list(best)


# --- estimator interface ---------------------------------------------------


class DriverPlacement(TransformerMixin, BaseEstimator):
    """Common estimator plumbing.

    ``fit`` computes ``drivers_`` (and ``ranking_`` where the strategy ranks
    all nodes); ``transform`` returns the matching unit-column input matrix.
    """

    def __init__(self, n_drivers=1):
        self.n_drivers = n_drivers

    def _select(self, X):
        raise NotImplementedError

    def fit(self, X, y=None):
        drivers, ranking = self._select(X)
        self.drivers_ = np.asarray(drivers, dtype=int)
        if ranking is not None:
            self.ranking_ = np.asarray(ranking, dtype=int)
        self.n_nodes_ = _node_count(X)
        return self

    def transform(self, X=None):
        check_is_fitted(self, "drivers_")
        return elementary_inputs(self.drivers_, self.n_nodes_)


def _node_count(X):
    if isinstance(X, (ModalDecomposition, OscillatorNetwork)):
        return X.n
    if isinstance(X, LinearSystem):
        return X.n
    return as_square_matrix(X).shape[0]


def _modal_of(X):
    if isinstance(X, LinearSystem):
        raise InvalidInputError("modal strategies need an oscillator network")
    return _check_modal(X)


class RwPlacement(DriverPlacement):
    """Drive the nodes with the largest out/in weight ratio.

    Accepts an adjacency matrix or an :class:`OscillatorNetwork` (ranked on
    its coupling block ``K M^{-1}``).
    """

    def _select(self, X):
        if isinstance(X, OscillatorNetwork):
            adj = X.coupling_matrix()
        elif isinstance(X, LinearSystem):
            adj = X.A
        else:
            adj = X
        ranking = rank_by_rw(adj).order
        m = check_count(self.n_drivers, 0, len(ranking), "n_drivers")
        self.r_w_ = weighted_degrees(adj).r_w
        return ranking[:m], ranking


class RandomPlacement(DriverPlacement):
    def __init__(self, n_drivers=1, random_state=None):
        self.n_drivers = n_drivers
        self.random_state = random_state

    def _select(self, X):
        return random_placement(_node_count(X), self.n_drivers, self.random_state), None


class GreedyMaxMinPlacement(DriverPlacement):
    """Greedy λ_min heuristic on the diagonal modal Gramian."""

    def _select(self, X):
        return greedy_maxmin(_modal_of(X), self.n_drivers), None


class ExactTracePlacement(DriverPlacement):
    def __init__(self, n_drivers=1, weighting="published"):
        self.n_drivers = n_drivers
        self.weighting = weighting

    def _select(self, X):
        modal = _modal_of(X)
        ranking = [int(i) for i in _stable_ranking(trace_scores(modal, self.weighting))]
        m = check_count(self.n_drivers, 0, modal.n, "n_drivers")
        return ranking[:m], ranking


class GreedyTraceInvPlacement(DriverPlacement):
    def __init__(self, n_drivers=1, literal=False):
        self.n_drivers = n_drivers
        self.literal = literal

    def _select(self, X):
        return greedy_trinv(_modal_of(X), self.n_drivers, self.literal), None


class BruteForcePlacement(DriverPlacement):
    def __init__(self, n_drivers=1, metric="lambda_min", t_f=None, weighting="published"):
        self.n_drivers = n_drivers
        self.metric = metric
        self.t_f = t_f
        self.weighting = weighting

    def _select(self, X):
        S = brute_force_placement(X, self.n_drivers, self.metric, self.t_f, self.weighting)
        return S, None


class ModePowerPlacement(DriverPlacement):
    """Drive the nodes where one chosen mode carries the most power."""

    def __init__(self, n_drivers=1, mode=0):
        self.n_drivers = n_drivers
        self.mode = mode

    def _select(self, X):
        modal = _modal_of(X)
        ranking = mode_power_placement(modal, modal.n, self.mode)
        m = check_count(self.n_drivers, 0, modal.n, "n_drivers")
        return ranking[:m], ranking


STRATEGIES = {
    "rw": RwPlacement,
    "random": RandomPlacement,
    "maxmin": GreedyMaxMinPlacement,
    "exact_trace": ExactTracePlacement,
    "trinv": GreedyTraceInvPlacement,
    "brute_force": BruteForcePlacement,
    "mode_power": ModePowerPlacement,
}
