"""Ensemble sweeps, grid ingestion and CSV output.

A sweep is a grid of *cells*, one per (realization, resample) pair.  Every
cell draws from its own random stream, derived from the base seed and the
cell coordinates, so the numbers do not depend on which worker evaluates the
cell or in which order.  Results are aggregated in cell order and written
with a fixed row order, which makes the CSV byte-for-byte reproducible.
"""

from concurrent.futures import ProcessPoolExecutor, TimeoutError as FutureTimeout
import csv
from dataclasses import asdict, dataclass, field, fields
import io
import logging
import math
import typing
import warnings

import numpy as np
from threadpoolctl import threadpool_limits

from .exceptions import (
    AxisEigenvalueError,
    GridFormatError,
    InvalidInputError,
    NetEnergyError,
)
from .gramian import (
    LinearSystem,
    energy_metrics,
    finite_gramian,
    mixed_gramian_finite,
    mixed_gramian_infinite,
)
from .matfun import split_stable_antistable
from .netgen import (
    normalize_sparse,
    parse_edge_list,
    random_graph_sf,
    random_grid_topology,
    random_matrix_elliptic,
    random_matrix_er,
    repair_strong_connectivity,
    resample_weights,
)
from .oscillators import (
    build_state_space,
    build_swing_grid,
    modal_decomposition,
    random_oscillator_network,
)
from .placement import (
    exact_trace_placement,
    greedy_maxmin,
    greedy_trinv,
    modal_metrics,
    random_placement,
    rank_by_rw,
    ranking_overlap,
    trace_scores,
    _stable_ranking,
)
from .validation import elementary_inputs

log = logging.getLogger(__name__)

# (center, rho) of the spectral presets.  Center shifts the unit disk along
# the real axis; rho squeezes it into an ellipse (rho < 0 flattens the real
# spread towards the imaginary axis).
PRESETS = {
    "blue": (0.0, 0.0),
    "red": (-2.0, 0.0),
    "yellow": (2.0, 0.0),
    "violet": (0.0, 0.5),
    "green": (0.0, -0.5),
    "cyan": (0.0, -0.9),
}

METRICS = ("lambda_min", "trace", "trace_inv", "cond")
NETWORK_STRATEGIES = ("random", "rw")
MODAL_STRATEGIES = ("random", "rw", "maxmin", "exact_trace", "trinv")
TOPOLOGIES = ("full", "er", "sf", "oscillator", "grid")


@dataclass(frozen=True)
class ExperimentConfig:
    """All knobs of a sweep.  Every field can be set from a config file or flag."""

    experiment: str = "custom"
    topology: str = "full"
    n: int = 100
    m_grid: tuple = (10,)
    t_f: typing.Optional[float] = None
    realizations: int = 5
    resamples: int = 5
    seed: int = 0
    presets: tuple = ("blue",)
    strategies: tuple = ("random",)
    metrics: tuple = ("lambda_min", "trace", "trace_inv")
    p: float = 0.05
    gamma_in: float = 3.14
    gamma_out: float = 2.87
    sf_beta: float = 0.9
    mass_mean: float = 1.0
    grounding: float = 1e-3
    damping_levels: tuple = (1e-5, 1e-4, 1e-3, 1e-2, 1e-1)
    grid_path: typing.Optional[str] = None
    grid_nodes: int = 236
    grid_edges: int = 320
    trace_weighting: str = "published"
    alg2_literal: bool = False
    rank_tol: float = 1e-12
    workers: int = 1
    cell_timeout: typing.Optional[float] = None
    out: typing.Optional[str] = None

    def __post_init__(self):
        if self.topology not in TOPOLOGIES:
            raise InvalidInputError(f"topology must be one of {TOPOLOGIES}")
        if self.realizations < 1 or self.resamples < 1:
            raise InvalidInputError("realizations and resamples must be >= 1")
        n = self.grid_nodes if self.topology == "grid" and self.grid_path is None else self.n
        if not self.m_grid or any(not 1 <= m <= n for m in self.m_grid):
            raise InvalidInputError(f"every m must lie in [1, {n}]")
        if self.t_f is not None and not self.t_f > 0:
            raise InvalidInputError("t_f must be positive (omit it for an infinite horizon)")
        if self.topology == "grid" and self.t_f is None:
            raise InvalidInputError("grid sweeps need a finite t_f")
        allowed = MODAL_STRATEGIES if self.topology in ("oscillator", "grid") else NETWORK_STRATEGIES
        bad = [s for s in self.strategies if s not in allowed]
        if bad:
            raise InvalidInputError(f"strategies {bad} not available for {self.topology}")
        bad = [s for s in self.metrics if s not in METRICS]
        if bad:
            raise InvalidInputError(f"unknown metrics {bad}")
        if self.topology in ("full", "er", "sf"):
            bad = [s for s in self.presets if s not in PRESETS]
            if bad:
                raise InvalidInputError(f"unknown presets {bad}; known: {sorted(PRESETS)}")
        if self.workers < 1:
            raise InvalidInputError("workers must be >= 1")

    @property
    def samples_per_cell(self):
        return self.realizations * self.resamples


# Named configurations.  The "desk" ones finish in minutes; "full" scale
# multiplies the effort by four orders of magnitude.
EXPERIMENTS = {
    "fig2": dict(
        topology="full",
        presets=("violet", "blue", "green", "cyan", "red", "yellow"),
        m_grid=(10, 20, 30, 40, 50),
        strategies=("random",),
    ),
    "figS1": dict(
        topology="er",
        p=0.05,
        presets=("violet", "blue", "green", "cyan", "red", "yellow"),
        m_grid=(10, 20, 30, 40, 50),
        strategies=("random",),
    ),
    "fig3": dict(
        topology="er",
        n=200,
        p=0.05,
        presets=("blue",),
        m_grid=(10, 20, 40),
        strategies=("rw", "random"),
        metrics=("lambda_min",),
    ),
    "fig4": dict(
        topology="oscillator",
        p=0.05,
        m_grid=(5, 10, 20, 40),
        strategies=MODAL_STRATEGIES,
    ),
    "fig5": dict(
        topology="grid",
        t_f=50.0,
        mass_mean=10.0,
        m_grid=(60,),
        strategies=("rw", "random", "maxmin"),
        metrics=("lambda_min",),
        realizations=1,
        resamples=3,
    ),
}
FULL_SCALE = dict(n=1000, realizations=100, resamples=100)


def experiment_config(experiment, scale="desk", **overrides):
    """Config for a named experiment at desk or full scale, with overrides."""
    if experiment == "custom":
        base = {}
    elif experiment in EXPERIMENTS:
        base = dict(EXPERIMENTS[experiment])
    else:
        raise InvalidInputError(f"unknown experiment {experiment!r}")
    if scale == "full":
        base.update(FULL_SCALE)
    elif scale != "desk":
        raise InvalidInputError("scale must be 'desk' or 'full'")
    base.update(overrides)
    base["experiment"] = experiment
    return ExperimentConfig(**base)


# --- config parsing ----------------------------------------------------------


def _field_kind(f):
    """Map a dataclass field to a parser: int, float, bool, str, tuple or optional."""
    default = f.default
    name = f.name
    if name in ("m_grid",):
        return "int_tuple"
    if name in ("damping_levels",):
        return "float_tuple"
    if isinstance(default, tuple):
        return "str_tuple"
    if isinstance(default, bool):
        return "bool"
    if isinstance(default, int):
        return "int"
    if isinstance(default, float):
        return "float"
    if name in ("t_f", "cell_timeout"):
        return "opt_float"
    return "opt_str" if default is None else "str"


def _parse_bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise InvalidInputError(f"not a boolean: {text!r}")


def coerce_value(name, text):
    """Convert the text form of a config value to the field's type."""
    kinds = {f.name: _field_kind(f) for f in fields(ExperimentConfig)}
    if name not in kinds:
        raise InvalidInputError(f"unknown config key {name!r}")
    kind = kinds[name]
    if not isinstance(text, str):
        return text
    text = text.strip()
    try:
        if kind == "int":
            return int(text)
        if kind == "float":
            return float(text)
        if kind == "bool":
            return _parse_bool(text)
        if kind == "int_tuple":
            return tuple(int(v) for v in text.split(",") if v.strip())
        if kind == "float_tuple":
            return tuple(float(v) for v in text.split(",") if v.strip())
        if kind == "str_tuple":
            return tuple(v.strip() for v in text.split(",") if v.strip())
        if kind == "opt_float":
            return None if text.lower() in ("", "none", "inf", "infinite") else float(text)
        if kind == "opt_str":
            return None if text.lower() in ("", "none") else text
    except ValueError as exc:
        raise InvalidInputError(f"bad value for {name}: {text!r}") from exc
    return text


def parse_config_text(text):
    """Flat ``key = value`` lines; ``#`` starts a comment; lists are comma separated."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInputError(f"config line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        values[key] = value if key == "scale" else coerce_value(key, value)
    return values


def load_config(path=None, **overrides):
    """Build a config from an optional file plus keyword overrides.

    An ``experiment`` key selects the named defaults, which the file and
    then the overrides refine.
    """
    values = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            values = parse_config_text(fh.read())
    values.update({k: v for k, v in overrides.items() if v is not None})
    experiment = values.pop("experiment", "custom")
    scale = values.pop("scale", "desk")
    return experiment_config(experiment, scale, **values)


def dump_config(cfg):
    lines = []
    for key, value in asdict(cfg).items():
        if isinstance(value, tuple):
            value = ",".join(str(v) for v in value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


# --- result table ------------------------------------------------------------

COLUMNS = (
    "experiment",
    "strategy",
    "preset",
    "m",
    "metric",
    "mean",
    "std",
    "n_ok",
    "n_missing",
    "R",
    "S",
    "seed",
)
KEY_COLUMNS = ("experiment", "strategy", "preset", "m", "metric")


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    strategy: str
    preset: str
    m: int
    metric: str
    mean: float
    std: float
    n_ok: int
    n_missing: int
    R: int
    S: int
    seed: int

    def key(self):
        return (self.experiment, self.strategy, self.preset, self.m, self.metric)

    def _comparable(self):
        out = []
        for v in asdict(self).values():
            out.append("nan" if isinstance(v, float) and math.isnan(v) else v)
        return tuple(out)


@dataclass
class ResultTable:
    rows: list = field(default_factory=list)

    def sorted(self):
        return ResultTable(sorted(self.rows, key=ResultRow.key))

    def __len__(self):
        return len(self.rows)

    def __eq__(self, other):
        if not isinstance(other, ResultTable):
            return NotImplemented
        a = [r._comparable() for r in self.sorted().rows]
        b = [r._comparable() for r in other.sorted().rows]
        return a == b

    def get(self, strategy, preset, m, metric):
        for r in self.rows:
            if (r.strategy, r.preset, r.m, r.metric) == (strategy, preset, m, metric):
                return r
        raise KeyError((strategy, preset, m, metric))


def _fmt(v):
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def table_to_csv(table):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in table.sorted().rows:
        writer.writerow([_fmt(getattr(row, c)) for c in COLUMNS])
    return buf.getvalue()


def emit_csv(table, path):
    """Write ``table`` as UTF-8 CSV with a header and rows sorted by key."""
    text = table_to_csv(table)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return text


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if tuple(header or ()) != COLUMNS:
            raise InvalidInputError(f"unexpected CSV header {header}")
        rows = []
        for rec in reader:
            d = dict(zip(COLUMNS, rec))
            rows.append(
                ResultRow(
                    experiment=d["experiment"],
                    strategy=d["strategy"],
                    preset=d["preset"],
                    m=int(d["m"]),
                    metric=d["metric"],
                    mean=float(d["mean"]),
                    std=float(d["std"]),
                    n_ok=int(d["n_ok"]),
                    n_missing=int(d["n_missing"]),
                    R=int(d["R"]),
                    S=int(d["S"]),
                    seed=int(d["seed"]),
                )
            )
    return ResultTable(rows)


# --- grid ingestion ------------------------------------------------------------


@dataclass(frozen=True)
class GridData:
    """Parsed edge list with node ids compacted to ``0..n-1``.

    ``edges`` has shape ``(E, 2)`` (``src``, ``dst``) and ``mapping`` sends
    each original id to its compact index.
    """

    n: int
    edges: np.ndarray
    weights: np.ndarray
    mapping: dict


def _id_sort_key(token):
    try:
        return (0, int(token), "")
    except ValueError:
        return (1, 0, token)


def ingest_grid(path, expected_nodes=None, expected_edges=None):
    """Read and validate a grid topology file.

    Node and edge counts are checked against a ``# nodes=N edges=E`` header
    when present, and against ``expected_nodes``/``expected_edges`` when
    given.  Repeated directed edges are merged by summing their weights.
    """
    with open(path, encoding="utf-8") as fh:
        records, header = parse_edge_list(fh)
    if not records:
        raise GridFormatError(f"{path}: no edges (empty graph)")
    merged = {}
    for lineno, src, dst, w in records:
        key = (src, dst)
        if key in merged:
            warnings.warn(f"{path}:{lineno}: duplicate edge {src} -> {dst}; weights summed", stacklevel=2)
            merged[key] += w
        else:
            merged[key] = w
    ids = sorted({t for key in merged for t in key}, key=_id_sort_key)
    mapping = {tok: i for i, tok in enumerate(ids)}
    edges = np.array([(mapping[s], mapping[d]) for s, d in merged], dtype=int)
    weights = np.array(list(merged.values()), dtype=float)
    n = len(ids)
    checks = []
    if header is not None:
        checks.append(("header", header))
    if expected_nodes is not None or expected_edges is not None:
        checks.append(("expected", (expected_nodes, expected_edges)))
    for label, (nodes, n_edges) in checks:
        if nodes is not None and nodes != n:
            raise InvalidInputError(f"{label} declares {nodes} nodes, file has {n}")
        if n_edges is not None and n_edges != len(edges):
            raise InvalidInputError(f"{label} declares {n_edges} edges, file has {len(edges)}")
    return GridData(n=n, edges=edges, weights=weights, mapping=mapping)


# --- sweep -------------------------------------------------------------------


def _stream(cfg, *key):
    return np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=tuple(key)))


_TOPOLOGY_KEY, _CELL_KEY, _PLACE_KEY = 0, 1, 2


def _record(samples, strategy, preset, m, metrics, wanted):
    values = metrics.as_dict()
    for name in wanted:
        v = values[name]
        samples[(strategy, preset, m, name)] = float(v) if np.isfinite(v) else None


def _network_matrix(cfg, r, s, center, rho):
    rng = _stream(cfg, _CELL_KEY, r, s)
    if cfg.topology == "full":
        return random_matrix_elliptic(cfg.n, center, rho, rng)
    if cfg.topology == "er":
        topo = _stream(cfg, _TOPOLOGY_KEY, r)
        return random_matrix_er(cfg.n, cfg.p, center, rho, rng, topology_seed=topo)
    topo = _stream(cfg, _TOPOLOGY_KEY, r)
    adj = random_graph_sf(cfg.n, cfg.gamma_in, cfg.gamma_out, topo, beta=cfg.sf_beta)
    adj = repair_strong_connectivity(adj, topo)
    return normalize_sparse(resample_weights(adj, rng), center=center, rng=rng)


def _network_cell(cfg, r, s):
    samples = {}
    for preset in cfg.presets:
        center, rho = PRESETS[preset]
        A = _network_matrix(cfg, r, s, center, rho)
        try:
            split = split_stable_antistable(A)
        except AxisEigenvalueError:
            continue
        rw_order = rank_by_rw(A).order if "rw" in cfg.strategies else None
        for strategy in cfg.strategies:
            for m in cfg.m_grid:
                if strategy == "rw":
                    drivers = rw_order[:m]
                else:
                    drivers = random_placement(cfg.n, m, _stream(cfg, _PLACE_KEY, r, s, m))
                sys = LinearSystem(A, elementary_inputs(drivers, cfg.n))
                try:
                    if cfg.t_f is None:
                        W = mixed_gramian_infinite(sys, check_controllable=False, split=split)
                    else:
                        W = mixed_gramian_finite(sys, cfg.t_f, check_controllable=False, split=split)
                except NetEnergyError as exc:
                    log.debug("cell (%d, %d) %s m=%d: %s", r, s, strategy, m, exc)
                    continue
                met = energy_metrics(W, cfg.rank_tol, strict=False)
                _record(samples, strategy, preset, m, met, cfg.metrics)
    return samples


def _modal_strategy(cfg, name, modal, coupling, m, rng):
    if name == "random":
        return random_placement(modal.n, m, rng)
    if name == "rw":
        return list(rank_by_rw(coupling).order[:m])
    if name == "maxmin":
        return greedy_maxmin(modal, m)
    if name == "exact_trace":
        return exact_trace_placement(modal, m, cfg.trace_weighting)
    if name == "trinv":
        return greedy_trinv(modal, m, literal=cfg.alg2_literal)
    raise InvalidInputError(name)  # pragma: no cover


def _oscillator_cell(cfg, r, s):
    samples = {}
    rng = _stream(cfg, _CELL_KEY, r, s)
    net = random_oscillator_network(cfg.n, cfg.p, rng, mass_mean=cfg.mass_mean, grounding=cfg.grounding)
    modal = modal_decomposition(net)
    coupling = net.coupling_matrix()
    preset = f"p={cfg.p:g}"
    rw_rank = rank_by_rw(coupling).order
    trace_rank = tuple(int(i) for i in _stable_ranking(trace_scores(modal, cfg.trace_weighting)))
    rand_rank = random_placement(cfg.n, cfg.n, _stream(cfg, _PLACE_KEY, r, s, 0))
    for strategy in cfg.strategies:
        for m in cfg.m_grid:
            try:
                drivers = _modal_strategy(
                    cfg, strategy, modal, coupling, m, _stream(cfg, _PLACE_KEY, r, s, m)
                )
            except NetEnergyError:
                continue
            met = modal_metrics(modal, drivers, 1.0, cfg.rank_tol)
            _record(samples, strategy, preset, m, met, cfg.metrics)
    for m in cfg.m_grid:
        samples[("rw|exact_trace", preset, m, "overlap")] = ranking_overlap(rw_rank, trace_rank, m)
        samples[("rw|random", preset, m, "overlap")] = ranking_overlap(rw_rank, rand_rank, m)
    return samples


def _grid_topology(cfg, r):
    if cfg.grid_path is not None:
        grid = ingest_grid(cfg.grid_path)
        return grid.n, np.column_stack([grid.edges, grid.weights])
    edges = random_grid_topology(cfg.grid_nodes, cfg.grid_edges, _stream(cfg, _TOPOLOGY_KEY, r))
    return cfg.grid_nodes, np.column_stack([edges, np.ones(len(edges))])


def _grid_cell(cfg, r, s):
    samples = {}
    n, edges = _grid_topology(cfg, r)
    rng = _stream(cfg, _CELL_KEY, r, s)
    masses = rng.uniform(0.5 * cfg.mass_mean, 1.5 * cfg.mass_mean, size=n)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        base = build_swing_grid(edges, n=n, masses=masses, grounding=cfg.grounding)
    modal = modal_decomposition(base)
    coupling = base.coupling_matrix()
    choices = {}
    for strategy in cfg.strategies:
        for m in cfg.m_grid:
            try:
                choices[strategy, m] = _modal_strategy(
                    cfg, strategy, modal, coupling, m, _stream(cfg, _PLACE_KEY, r, s, m)
                )
            except NetEnergyError:
                continue
    for level in cfg.damping_levels:
        preset = f"damping={level:.0e}"
        net = build_swing_grid(edges, n=n, masses=masses, grounding=cfg.grounding, damping_scale=level)
        for (strategy, m), drivers in choices.items():
            sys = build_state_space(net.with_drivers(drivers), "momentum")
            try:
                W = finite_gramian(sys, cfg.t_f)
            except NetEnergyError:
                continue
            _record(samples, strategy, preset, m, energy_metrics(W, cfg.rank_tol, strict=False), cfg.metrics)
            # undamped diagonal modal estimate, per unit horizon
            met_z = modal_metrics(modal, drivers, 1.0, cfg.rank_tol)
            for name in cfg.metrics:
                v = met_z.as_dict()[name]
                samples[(strategy, preset, m, f"{name}_z_per_tf")] = float(v) if np.isfinite(v) else None
    return samples


def evaluate_cell(cfg, r, s):
    """All samples of one (realization, resample) cell.

    Returns a dict keyed by ``(strategy, preset, m, metric)``; a ``None``
    value or a missing key marks a sample lost to a singular Gramian.
    """
    with threadpool_limits(limits=1):
        if cfg.topology in ("full", "er", "sf"):
            return _network_cell(cfg, r, s)
        if cfg.topology == "oscillator":
            return _oscillator_cell(cfg, r, s)
        return _grid_cell(cfg, r, s)


def _evaluate_packed(args):
    cfg, r, s = args
    return evaluate_cell(cfg, r, s)


def expected_keys(cfg):
    """Every row key a complete sweep produces."""
    if cfg.topology in ("full", "er", "sf"):
        presets = cfg.presets
        names = cfg.metrics
    elif cfg.topology == "oscillator":
        presets = (f"p={cfg.p:g}",)
        names = cfg.metrics
    else:
        presets = tuple(f"damping={d:.0e}" for d in cfg.damping_levels)
        names = tuple(cfg.metrics) + tuple(f"{k}_z_per_tf" for k in cfg.metrics)
    keys = [
        (strategy, preset, m, metric)
        for strategy in cfg.strategies
        for preset in presets
        for m in cfg.m_grid
        for metric in names
    ]
    if cfg.topology == "oscillator":
        keys += [
            (pair, presets[0], m, "overlap")
            for pair in ("rw|exact_trace", "rw|random")
            for m in cfg.m_grid
        ]
    return keys


def _run_cells(cfg, cells):
    if cfg.workers == 1 and cfg.cell_timeout is None:
        return [evaluate_cell(cfg, r, s) for r, s in cells]
    pool = ProcessPoolExecutor(max_workers=cfg.workers)
    results = []
    timed_out = False
    try:
        futures = [pool.submit(_evaluate_packed, (cfg, r, s)) for r, s in cells]
        for (r, s), fut in zip(cells, futures):
            try:
                results.append(fut.result(timeout=cfg.cell_timeout))
            except FutureTimeout:
                log.warning("cell (%d, %d) timed out; its samples count as missing", r, s)
                timed_out = True
                results.append({})
    finally:
        pool.shutdown(wait=not timed_out, cancel_futures=True)
    return results


def run_experiment(cfg):
    """Evaluate every cell and aggregate the samples into a :class:`ResultTable`.

    Means and standard deviations are taken over the samples present; the
    ``n_missing`` column counts cells whose Gramian was singular or whose
    evaluation failed, so ``n_ok + n_missing == R * S`` on every row.
    """
    cells = [(r, s) for r in range(cfg.realizations) for s in range(cfg.resamples)]
    results = _run_cells(cfg, cells)
    rows = []
    total = cfg.samples_per_cell
    for strategy, preset, m, metric in expected_keys(cfg):
        key = (strategy, preset, m, metric)
        vals = [res[key] for res in results if res.get(key) is not None]
        arr = np.array(vals, dtype=float)
        mean = float(arr.mean()) if arr.size else math.nan
        std = float(arr.std(ddof=1)) if arr.size > 1 else (0.0 if arr.size else math.nan)
        rows.append(
            ResultRow(
                experiment=cfg.experiment,
                strategy=strategy,
                preset=preset,
                m=int(m),
                metric=metric,
                mean=mean,
                std=std,
                n_ok=int(arr.size),
                n_missing=total - int(arr.size),
                R=cfg.realizations,
                S=cfg.resamples,
                seed=cfg.seed,
            )
        )
    return ResultTable(rows).sorted()


__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "GridData",
    "PRESETS",
    "ResultRow",
    "ResultTable",
    "emit_csv",
    "evaluate_cell",
    "experiment_config",
    "ingest_grid",
    "load_config",
    "read_csv",
    "run_experiment",
    "table_to_csv",
]
