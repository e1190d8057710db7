"""Random network ensembles, weighted degrees and edge-list I/O.

Adjacency convention: ``adj[i, j]`` is the weight of the edge ``j -> i``, so
row ``i`` holds the edges entering node ``i``.  This matches the state
equation ``x_i' = Σ_j a_ij x_j``.
"""

from dataclasses import dataclass
import re

import networkx as nx
import numpy as np
from scipy.sparse.csgraph import connected_components

from .exceptions import GridFormatError, InvalidInputError
from .validation import as_square_matrix


@dataclass(frozen=True)
class EnsembleSpec:
    """Description of one random network ensemble.

    ``topology`` is ``"full"``, ``"er"`` (uses ``p``) or ``"sf"`` (uses
    ``gamma_in``/``gamma_out``).  The spectrum is a disk of radius one around
    ``center`` that the pair correlation ``rho`` squeezes into an ellipse.
    """

    n: int
    topology: str = "full"
    center: float = 0.0
    rho: float = 0.0
    p: float = 1.0
    gamma_in: float = 3.14
    gamma_out: float = 2.87
    seed: int = 0
    weight_dist: str = "normal"

    def __post_init__(self):
        if self.n < 2:
            raise InvalidInputError("ensembles need n >= 2")
        if self.topology not in ("full", "er", "sf"):
            raise InvalidInputError(f"unknown topology {self.topology!r}")
        if not 0 < self.p <= 1:
            raise InvalidInputError("p must lie in (0, 1]")
        if not abs(self.rho) < 1:
            raise InvalidInputError("|rho| must be < 1")
        if self.topology == "sf" and min(self.gamma_in, self.gamma_out) <= 2:
            raise InvalidInputError("scale-free exponents must exceed 2")
        if self.weight_dist != "normal":
            raise InvalidInputError("only normally distributed weights are supported")

    def generate(self, seed=None):
        seed = self.seed if seed is None else seed
        if self.topology == "full":
            return random_matrix_elliptic(self.n, self.center, self.rho, seed)
        if self.topology == "er":
            return random_matrix_er(self.n, self.p, self.center, self.rho, seed)
        rng = np.random.default_rng(seed)
        adj = random_graph_sf(self.n, self.gamma_in, self.gamma_out, rng)
        adj = repair_strong_connectivity(adj, rng)
        return normalize_sparse(adj, center=self.center, rng=rng)


def _pair_weights(z1, z2, rho):
    """Upper triangle from ``z1``; lower triangle correlated with it by ``rho``."""
    n = z1.shape[0]
    iu = np.triu_indices(n, 1)
    out = np.zeros((n, n))
    out[iu] = z1[iu]
    out[iu[1], iu[0]] = rho * z1[iu] + np.sqrt(max(0.0, 1.0 - rho * rho)) * z2[iu]
    return out


def random_matrix_elliptic(n, center=0.0, rho=0.0, seed=None):
    """Gaussian random matrix with correlated transposed pairs.

    Each pair ``(a_ij, a_ji)`` is bivariate normal with unit variances and
    correlation ``rho``, scaled by ``1/sqrt(n)``.  For large ``n`` the
    eigenvalues fill the ellipse with real semi-axis ``1 + rho`` and imaginary
    semi-axis ``1 - rho`` centred at ``center``.  Diagonal entries are
    independent ``N(0, 1)/sqrt(n)`` plus ``center``.

    ``rho = 1`` yields a symmetric matrix; ``rho = 0`` is the circular ensemble.
    """
    if n < 2:
        raise InvalidInputError("n must be at least 2")
    if not -1 <= rho <= 1:
        raise InvalidInputError("rho must lie in [-1, 1]")
    rng = np.random.default_rng(seed)
    z1 = rng.standard_normal((n, n))
    z2 = rng.standard_normal((n, n))
    diag = rng.standard_normal(n)
    A = _pair_weights(z1, z2, rho)
    A[np.diag_indices(n)] = diag
    A /= np.sqrt(n)
    A[np.diag_indices(n)] += center
    return A


def random_matrix_circular(n, center=0.0, seed=None):
    """I.i.d. ``N(0, 1/n)`` matrix shifted by ``center``: eigenvalues fill a unit disk."""
    return random_matrix_elliptic(n, center, 0.0, seed)


def er_mask(n, p, seed=None):
    """Boolean directed Erdős-Rényi pattern without self-loops."""
    if not 0 < p <= 1:
        raise InvalidInputError("p must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    mask = rng.random((n, n)) < p
    np.fill_diagonal(mask, False)
    return mask


def random_matrix_er(n, p, center=0.0, rho=0.0, seed=None, topology_seed=None):
    """Sparse random matrix on a directed Erdős-Rényi graph.

    Every ordered pair ``i != j`` is present with probability ``p``; weights
    follow the elliptic construction and are scaled by ``1/sqrt(p n)`` so the
    spectrum again fills the unit disk (or ellipse).  The diagonal is
    ``center``.

    Parameters
    ----------
    topology_seed : optional
        Seed for the edge pattern.  When given, ``seed`` only drives the
        weights, which lets a sweep resample weights on a fixed graph.
    """
    if n < 2:
        raise InvalidInputError("n must be at least 2")
    if topology_seed is None:
        rng = np.random.default_rng(seed)
        mask = er_mask(n, p, rng)
    else:
        mask = er_mask(n, p, topology_seed)
        rng = np.random.default_rng(seed)
    z1 = rng.standard_normal((n, n))
    z2 = rng.standard_normal((n, n))
    A = np.where(mask, _pair_weights(z1, z2, rho), 0.0) / np.sqrt(p * n)
    A[np.diag_indices(n)] = center
    return A


def _sf_delta(gamma, a, b):
    # the tail exponent is 1 + (1 + delta * b) / a; solve it for delta
    return ((gamma - 1.0) * a - 1.0) / b


def sf_parameters(gamma_in, gamma_out, beta=0.9):
    """Attachment probabilities for the directed preferential-attachment model.

    Nodes arrive with an out-edge (probability ``alpha``), an in-edge
    (``gamma``) or an edge between existing nodes is added (``beta``).  With
    ``alpha = gamma = (1 - beta) / 2`` the model produces in- and out-degree
    tails ``1 + (1 + delta (alpha + gamma)) / (alpha + beta)`` and the
    out-degree analogue, which are solved for the offsets ``delta``.  A large
    ``beta`` gives about ``1 / (1 - beta)`` edges per node.
    """
    if min(gamma_in, gamma_out) <= 2:
        raise InvalidInputError("scale-free exponents must exceed 2")
    if not 0 < beta < 1:
        raise InvalidInputError("beta must lie in (0, 1)")
    alpha = gamma = (1.0 - beta) / 2.0
    delta_in = _sf_delta(gamma_in, alpha + beta, alpha + gamma)
    delta_out = _sf_delta(gamma_out, beta + gamma, alpha + gamma)
    if delta_in <= 0 or delta_out <= 0:
        raise InvalidInputError(
            f"exponents ({gamma_in}, {gamma_out}) are not reachable with beta={beta}"
        )
    return dict(alpha=alpha, beta=beta, gamma=gamma, delta_in=delta_in, delta_out=delta_out)


def random_graph_sf(n, gamma_in=3.14, gamma_out=2.87, seed=None, beta=0.9):
    """Directed scale-free graph with separate in- and out-degree exponents.

    The multigraph from the preferential-attachment process is collapsed to
    a simple weighted digraph: self-loops are dropped and parallel edges
    merged by summing independent ``N(0, 1)`` weights.

    Returns
    -------
    adj : ndarray, shape (n, n)
        ``adj[v, u]`` is the weight of edge ``u -> v``; the diagonal is zero.
    """
    params = sf_parameters(gamma_in, gamma_out, beta)
    rng = np.random.default_rng(seed)
    G = nx.scale_free_graph(n, seed=int(rng.integers(2**32)), **params)
    edges = np.array([(u, v) for u, v in G.edges() if u != v], dtype=int).reshape(-1, 2)
    adj = np.zeros((n, n))
    np.add.at(adj, (edges[:, 1], edges[:, 0]), rng.standard_normal(len(edges)))
    return adj


def fit_powerlaw_exponent(degrees, kmin=None):
    """Maximum-likelihood exponent of a discrete power-law tail.

    Uses the continuous approximation ``1 + N / Σ log(k / (kmin - 1/2))``.
    """
    k = np.asarray(degrees, dtype=float)
    if kmin is None:
        kmin = max(2.0, float(np.median(k[k > 0])))
    tail = k[k >= kmin]
    if tail.size < 10:
        raise InvalidInputError("too few samples in the tail to fit an exponent")
    return 1.0 + tail.size / np.sum(np.log(tail / (kmin - 0.5)))


def scc_labels(adj):
    """Number of strongly connected components and the per-node labels."""
    pattern = np.abs(as_square_matrix(adj, "adj")) > 0
    return connected_components(pattern.T, directed=True, connection="strong")


def repair_strong_connectivity(adj, seed=None, max_rounds=10_000):
    """Add random edges between components until the digraph is strongly connected.

    In every round each sink component of the condensation receives an
    edge from one of its nodes to a node of a randomly chosen source
    component.  Existing edges are never removed; new edges get ``N(0, 1)``
    weights.
    """
    adj = as_square_matrix(adj, "adj").copy()
    rng = np.random.default_rng(seed)
    for _ in range(max_rounds):
        ncomp, labels = scc_labels(adj)
        if ncomp == 1:
            return adj
        members = [np.flatnonzero(labels == c) for c in range(ncomp)]
        pattern = np.abs(adj) > 0
        # condensation edges: dst component <- src component
        dst, src = np.nonzero(pattern)
        cross = labels[dst] != labels[src]
        has_out = np.zeros(ncomp, bool)
        has_in = np.zeros(ncomp, bool)
        has_out[labels[src[cross]]] = True
        has_in[labels[dst[cross]]] = True
        sinks = np.flatnonzero(~has_out)
        sources = np.flatnonzero(~has_in)
        for c in sinks:
            targets = sources[sources != c]
            if targets.size == 0:
                targets = np.flatnonzero(np.arange(ncomp) != c)
            t = rng.choice(targets)
            u = rng.choice(members[c])
            v = rng.choice(members[t])
            adj[v, u] += rng.standard_normal()
            if adj[v, u] == 0.0:  # pragma: no cover - measure-zero event
                adj[v, u] = 1.0
    raise RuntimeError(f"graph still not strongly connected after {max_rounds} rounds")  # pragma: no cover


def normalize_sparse(adj, center=0.0, rng=None, diagonal=True):
    """Scale a sparse weighted adjacency to a unit spectral radius.

    Divides by ``sqrt(mean in-degree)`` so the bulk of the spectrum has
    radius about one, then puts ``center`` (plus, with ``diagonal=True``, an
    independent ``N(0, 1)`` draw scaled the same way) on the diagonal.
    The random diagonal removes the exactly zero eigenvalues that nodes
    without incoming or outgoing edges would otherwise contribute.
    """
    A = as_square_matrix(adj, "adj").copy()
    n = A.shape[0]
    np.fill_diagonal(A, 0.0)
    k = np.count_nonzero(A) / n
    scale = 1.0 / np.sqrt(max(k, 1.0))
    A *= scale
    if diagonal:
        rng = np.random.default_rng(rng)
        A[np.diag_indices(n)] = rng.standard_normal(n) * scale
    A[np.diag_indices(n)] += center
    return A


def resample_weights(adj, seed=None):
    """Same edge pattern (off-diagonal), fresh ``N(0, 1)`` weights."""
    A = as_square_matrix(adj, "adj")
    rng = np.random.default_rng(seed)
    mask = A != 0
    np.fill_diagonal(mask, False)
    out = np.zeros_like(A)
    out[mask] = rng.standard_normal(int(mask.sum()))
    return out


@dataclass(frozen=True)
class WeightedDegrees:
    w_in: np.ndarray
    w_out: np.ndarray
    r_w: np.ndarray


def weighted_degrees(adj):
    """Absolute in/out weight sums and their ratio ``r_w = w_out / w_in``.

    Nodes without incoming weight get ``r_w = inf``.

    Examples
    --------
    >>> d = weighted_degrees([[0, 2], [-3, 0]])
    >>> d.w_in.tolist(), d.w_out.tolist()
    ([2.0, 3.0], [3.0, 2.0])
    """
    A = np.abs(as_square_matrix(adj, "adj"))
    w_in = A.sum(axis=1)
    w_out = A.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        r_w = np.where(w_in > 0, w_out / np.where(w_in > 0, w_in, 1.0), np.inf)
    return WeightedDegrees(w_in=w_in, w_out=w_out, r_w=r_w)


def random_grid_topology(n_nodes, n_edges, seed=None):
    """Connected sparse undirected topology resembling a transmission grid.

    A uniformly random spanning tree is completed with distinct random extra
    edges.  Returns an ``(n_edges, 2)`` integer array with ``u < v``.
    """
    if n_nodes < 2:
        raise InvalidInputError("a grid needs at least two nodes")
    if not n_nodes - 1 <= n_edges <= n_nodes * (n_nodes - 1) // 2:
        raise InvalidInputError("edge count must make a connected simple graph possible")
    rng = np.random.default_rng(seed)
    tree = nx.random_labeled_tree(n_nodes, seed=int(rng.integers(2**32)))
    edges = {tuple(sorted(e)) for e in tree.edges()}
    while len(edges) < n_edges:
        u, v = rng.choice(n_nodes, size=2, replace=False)
        edges.add((int(min(u, v)), int(max(u, v))))
    return np.array(sorted(edges), dtype=int)


_HEADER = re.compile(r"nodes\s*[=:]\s*(\d+).*?edges\s*[=:]\s*(\d+)", re.IGNORECASE)


def write_edge_list(adj, path, header=True):
    """Write the nonzero off-diagonal and diagonal entries as ``src dst weight`` lines."""
    A = as_square_matrix(adj, "adj")
    dst, src = np.nonzero(A)
    order = np.lexsort((dst, src))
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(f"# nodes={A.shape[0]} edges={len(order)}\n")
        for k in order:
            fh.write(f"{src[k]} {dst[k]} {float(A[dst[k], src[k]])!r}\n")


def parse_edge_list(lines):
    """Parse ``src dst [weight]`` records.

    Returns ``(records, header)`` where records is a list of
    ``(lineno, src_token, dst_token, weight)`` and ``header`` is
    ``(nodes, edges)`` from a ``# nodes=N edges=E`` comment or ``None``.
    """
    records = []
    header = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            match = _HEADER.search(line)
            if match and header is None:
                header = (int(match.group(1)), int(match.group(2)))
            continue
        line = line.split("#", 1)[0]
        parts = line.split()
        if len(parts) not in (2, 3):
            raise GridFormatError(f"expected 'src dst [weight]', got {raw.rstrip()!r}", lineno)
        weight = 1.0
        if len(parts) == 3:
            try:
                weight = float(parts[2])
            except ValueError:
                raise GridFormatError(f"bad weight {parts[2]!r}", lineno) from None
            if not np.isfinite(weight):
                raise GridFormatError("weight must be finite", lineno)
        records.append((lineno, parts[0], parts[1], weight))
    return records, header


def read_edge_list(path, n=None):
    """Read an edge list written by :func:`write_edge_list` back into a matrix.

    Node ids must be 0-based integers.  Repeated edges are summed.
    """
    with open(path, encoding="utf-8") as fh:
        records, header = parse_edge_list(fh)
    if n is None:
        n = header[0] if header else None
    if not records and n is None:
        raise GridFormatError("edge list is empty")
    try:
        src = np.array([int(r[1]) for r in records], dtype=int)
        dst = np.array([int(r[2]) for r in records], dtype=int)
    except ValueError as exc:
        raise GridFormatError(f"node ids must be integers: {exc}") from None
    if src.size and min(src.min(), dst.min()) < 0:
        raise GridFormatError("node ids must be non-negative")
    if n is None:
        n = int(max(src.max(), dst.max())) + 1
    if src.size and max(src.max(), dst.max()) >= n:
        raise GridFormatError(f"node id exceeds declared node count {n}")
    A = np.zeros((n, n))
    np.add.at(A, (dst, src), [r[3] for r in records])
    return A
