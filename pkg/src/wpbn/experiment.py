"""Configuration-driven experiment runner.

An experiment spec is a TOML file. Grammar (every key optional unless noted)::

    name = "fig5a"                 # required; output files are <name>.csv/.svg
    metric = "coverage"            # "coverage" or "mean_power"
    methods = ["theorem1"]         # analytic methods (see below); default theorem1 / lemma1
    models = ["mean_np_nearest"]   # simulation power models
    trials = 10000                 # simulation trials per cell
    seed = 0
    area = 100.0                   # m^2, capacity = lambda_b * area * coverage
    theta_db = 0.0                 # threshold when the sweep is not over theta_db
    output_dir = "results"         # relative paths resolve against the working directory
    analytic_samples = 100000      # Monte Carlo samples inside theorem1/corollary3/lemma1
    corollary4_power = "all_pbs"   # mean power fed to corollary4: "all_pbs" | "np_nearest"
    plot = ["coverage"]            # panels: any of coverage, capacity (coverage metric)
    split_series = false           # one panel column per series

    [base]                         # NetworkConfig fields; unset fields take the defaults
    lambda_p = 0.1                 # /m^2
    lambda_b = 0.01                # /m^2
    P_C_dbm = 40.0                 # or P_C in watts
    beta = 0.5
    d00 = 1.0
    N0_db = -40.0                  # or N0 in watts
    alpha = 4.0                    # sets alpha_f and alpha_b; or give them separately
    Np = 1

    [sweep]                        # required
    parameter = "theta_db"         # lambda_p | lambda_b | theta_db | Np
    values = [-10, -5, 0, 5, 10]

    [sim]                          # SimControls
    window_radius = 100.0
    pb_window_margin = 30.0
    harvest_radius = 20.0
    tail_compensation = true

    [[series]]                     # optional; each entry repeats the sweep with overrides
    label = "lb=0.1"               # required inside a series
    lambda_b = 0.1                 # any [base] key, theta_db, or trials

Analytic methods for ``metric = "coverage"`` are theorem1, corollary1..5 and
theorem2; simulation models are the :class:`~wpbn.montecarlo.PowerModel`
values. For ``metric = "mean_power"`` the methods are lemma1 and lemma2 and
the models are np_nearest and all_pbs (harvested power simulations).
"""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import analysis
from .config import NetworkConfig, db_to_linear, dbm_to_watts
from .errors import ConfigurationError, NumericalError, RealizationInfeasible
from .montecarlo import (
    PowerModel,
    SimControls,
    check_margin,
    coverage_from_sinr,
    simulate_mean_power,
    simulate_sinr,
)

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

COVERAGE_HEADER = ("swept_param", "value", "method", "coverage", "coverage_ci",
                   "capacity", "capacity_ci", "status", "wall_time_s")
POWER_HEADER = ("swept_param", "value", "method", "mean_power_w", "mean_power_ci", "status", "wall_time_s")

SWEEP_PARAMETERS = ("lambda_p", "lambda_b", "theta_db", "Np")
COVERAGE_METHODS = tuple(m.value for m in analysis.Method if m is not analysis.Method.SIMULATION)
COVERAGE_MODELS = tuple(m.value for m in PowerModel)
POWER_METHODS = ("lemma1", "lemma2")
POWER_MODELS = ("np_nearest", "all_pbs")
Z95 = 1.959963984540054

_TOP_KEYS = {"name", "metric", "methods", "models", "trials", "seed", "area", "theta_db", "output_dir",
             "analytic_samples", "corollary4_power", "plot", "split_series", "base", "sweep", "sim", "series"}
_CFG_KEYS = {f.name for f in fields(NetworkConfig)} | {"P_C_dbm", "N0_db", "alpha"}
_SIM_KEYS = {f.name for f in fields(SimControls)}


class SpecError(ConfigurationError):
    """A spec file that cannot be parsed or violates an invariant."""


@dataclass(frozen=True)
class Series:
    label: str
    cfg: NetworkConfig
    theta_db: float
    trials: int


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    base: NetworkConfig
    sweep_parameter: str
    sweep_values: tuple
    methods: tuple = ()
    models: tuple = ()
    metric: str = "coverage"
    trials: int = 10_000
    seed: int = 0
    area: float = 100.0
    theta_db: float = 0.0
    output_dir: Path = Path("results")
    analytic_samples: int = 100_000
    corollary4_power: str = "all_pbs"
    sim: SimControls = SimControls()
    series: tuple = ()
    plot: tuple = ("coverage",)
    split_series: bool = False

    def all_series(self) -> tuple:
        if self.series:
            return self.series
        return (Series("", self.base, self.theta_db, self.trials),)

    def cell_config(self, series: Series, value) -> tuple:
        """(NetworkConfig, theta_db) of one sweep point of one series."""
        p = self.sweep_parameter
        if p == "theta_db":
            return series.cfg, float(value)
        return series.cfg.replace(**{p: value}), series.theta_db


@dataclass
class Row:
    value: float
    method: str
    series: str
    simulated: bool
    lambda_b: float = math.nan
    estimate: float = math.nan
    ci: float = math.nan
    capacity: float = math.nan
    capacity_ci: float = math.nan
    status: str = "ok"
    wall_time_s: float = math.nan


@dataclass
class SweepResult:
    name: str
    metric: str
    swept_param: str
    rows: list = field(default_factory=list)
    plot: tuple = ("coverage",)
    split_series: bool = False

    @property
    def failed(self) -> bool:
        return any(r.status != "ok" for r in self.rows)

    def labels(self) -> list:
        seen = []
        for r in self.rows:
            if r.method not in seen:
                seen.append(r.method)
        return seen


# --- loading ---------------------------------------------------------------------

def _config_from_table(table: dict, where: str, start: NetworkConfig | None = None) -> NetworkConfig:
    unknown = set(table) - _CFG_KEYS
    if unknown:
        raise SpecError(f"{where}: unknown field(s) {sorted(unknown)}")
    kw = {}
    for k, v in table.items():
        if k == "P_C_dbm":
            kw["P_C"] = dbm_to_watts(float(v))
        elif k == "N0_db":
            kw["N0"] = db_to_linear(float(v))
        elif k == "alpha":
            kw["alpha_f"] = kw["alpha_b"] = float(v)
        else:
            kw[k] = v
    if "P_C" in table and "P_C_dbm" in table:
        raise SpecError(f"{where}: give P_C or P_C_dbm, not both")
    if "N0" in table and "N0_db" in table:
        raise SpecError(f"{where}: give N0 or N0_db, not both")
    try:
        return (start or NetworkConfig()).replace(**kw)
    except (ConfigurationError, TypeError) as exc:
        raise SpecError(f"{where}: {exc}") from None


def _require(cond, msg):
    if not cond:
        raise SpecError(msg)


def _check_method(method: str, cfg: NetworkConfig, where: str):
    if method in ("corollary1", "corollary2"):
        if cfg.Np != 1:
            raise SpecError(f"{where}: {method} requires Np = 1 (got Np={cfg.Np})")
        if cfg.alpha_f != cfg.alpha_b:
            raise SpecError(f"{where}: {method} requires alpha_f == alpha_b")


def load_spec(path) -> ExperimentSpec:
    """Parse and fully validate an experiment spec file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read spec {path}: {exc.strerror or exc}") from exc
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise SpecError(f"{path}: parse error: {exc}") from None
    return spec_from_dict(raw, path)


def spec_from_dict(raw: dict, path: Path | None = None) -> ExperimentSpec:
    where = str(path) if path is not None else "<spec>"
    unknown = set(raw) - _TOP_KEYS
    _require(not unknown, f"{where}: unknown field(s) {sorted(unknown)}")
    name = raw.get("name")
    _require(isinstance(name, str) and name.strip(), f"{where}: field 'name' must be a nonempty string")
    _require(all(c.isalnum() or c in "-_." for c in name), f"{where}: name may use letters, digits, '-', '_', '.'")

    metric = raw.get("metric", "coverage")
    _require(metric in ("coverage", "mean_power"), f"{where}: metric must be 'coverage' or 'mean_power'")
    known_methods = COVERAGE_METHODS if metric == "coverage" else POWER_METHODS
    known_models = COVERAGE_MODELS if metric == "coverage" else POWER_MODELS
    methods = tuple(raw.get("methods", ()))
    models = tuple(raw.get("models", ()))
    for m in methods:
        _require(m in known_methods, f"{where}: methods: unknown {metric} method {m!r}; expected one of {known_methods}")
    for m in models:
        _require(m in known_models, f"{where}: models: unknown {metric} model {m!r}; expected one of {known_models}")
    if not (methods or models):
        methods = ("theorem1",) if metric == "coverage" else ("lemma1",)

    base = _config_from_table(raw.get("base", {}), f"{where}: [base]")

    sweep = raw.get("sweep")
    _require(isinstance(sweep, dict), f"{where}: a [sweep] table is required")
    _require(set(sweep) <= {"parameter", "values"}, f"{where}: [sweep]: unknown field(s) {sorted(set(sweep) - {'parameter', 'values'})}")
    param = sweep.get("parameter")
    _require(param in SWEEP_PARAMETERS, f"{where}: [sweep].parameter must be one of {SWEEP_PARAMETERS}")
    values = sweep.get("values")
    _require(isinstance(values, list) and values, f"{where}: [sweep].values must be a nonempty list")
    if param == "Np":
        _require(all(isinstance(v, int) and not isinstance(v, bool) for v in values),
                 f"{where}: [sweep].values for Np must be integers")
        values = tuple(int(v) for v in values)
    else:
        _require(all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values),
                 f"{where}: [sweep].values must be numbers")
        values = tuple(float(v) for v in values)
    _require(metric == "coverage" or param != "theta_db", f"{where}: mean_power experiments cannot sweep theta_db")

    sim_table = raw.get("sim", {})
    _require(set(sim_table) <= _SIM_KEYS, f"{where}: [sim]: unknown field(s) {sorted(set(sim_table) - _SIM_KEYS)}")
    try:
        sim = SimControls(**sim_table)
    except ConfigurationError as exc:
        raise SpecError(f"{where}: [sim]: {exc}") from None

    trials = raw.get("trials", 10_000)
    _require(isinstance(trials, int) and trials >= 1, f"{where}: trials must be an integer >= 1")
    seed = raw.get("seed", 0)
    _require(isinstance(seed, int) and seed >= 0, f"{where}: seed must be a nonnegative integer")
    area = float(raw.get("area", 100.0))
    _require(area > 0, f"{where}: area must be positive")
    samples = raw.get("analytic_samples", 100_000)
    _require(isinstance(samples, int) and samples >= 2, f"{where}: analytic_samples must be an integer >= 2")
    c4 = raw.get("corollary4_power", "all_pbs")
    _require(c4 in ("all_pbs", "np_nearest"), f"{where}: corollary4_power must be 'all_pbs' or 'np_nearest'")
    theta_db = float(raw.get("theta_db", 0.0))
    plot = tuple(raw.get("plot", ("coverage",) if metric == "coverage" else ("mean_power",)))
    allowed_plot = ("coverage", "capacity") if metric == "coverage" else ("mean_power",)
    _require(plot and all(p in allowed_plot for p in plot), f"{where}: plot entries must be among {allowed_plot}")

    out = Path(raw.get("output_dir", "results"))

    series = []
    for i, entry in enumerate(raw.get("series", [])):
        sw = f"{where}: [[series]] #{i + 1}"
        _require(isinstance(entry, dict) and isinstance(entry.get("label"), str) and entry["label"],
                 f"{sw}: a nonempty 'label' is required")
        entry = dict(entry)
        label = entry.pop("label")
        s_theta = float(entry.pop("theta_db", theta_db))
        s_trials = entry.pop("trials", trials)
        _require(isinstance(s_trials, int) and s_trials >= 1, f"{sw}: trials must be an integer >= 1")
        series.append(Series(label, _config_from_table(entry, sw, base), s_theta, s_trials))
    labels = [s.label for s in series]
    _require(len(set(labels)) == len(labels), f"{where}: series labels must be unique")

    spec = ExperimentSpec(
        name=name, base=base, sweep_parameter=param, sweep_values=values, methods=methods, models=models,
        metric=metric, trials=trials, seed=seed, area=area, theta_db=theta_db, output_dir=out,
        analytic_samples=samples, corollary4_power=c4, sim=sim, series=tuple(series), plot=plot,
        split_series=bool(raw.get("split_series", False)),
    )
    _validate_cells(spec, where)
    return spec


def _validate_cells(spec: ExperimentSpec, where: str):
    for s in spec.all_series():
        for v in spec.sweep_values:
            cw = f"{where}: {spec.sweep_parameter}={v!r}" + (f" (series {s.label!r})" if s.label else "")
            try:
                cfg, _ = spec.cell_config(s, v)
            except ConfigurationError as exc:
                raise SpecError(f"{cw}: {exc}") from None
            for m in spec.methods:
                _check_method(m, cfg, cw)
            for m in spec.models:
                if spec.metric == "coverage" and PowerModel(m).uses_pbs:
                    try:
                        check_margin(cfg, spec.sim)
                    except ConfigurationError as exc:
                        raise SpecError(f"{cw}: {exc}") from None


def with_overrides(spec: ExperimentSpec, seed=None, trials=None, output_dir=None) -> ExperimentSpec:
    """Copy of ``spec`` with CLI overrides applied (``trials`` replaces every series' count)."""
    changes = {}
    if seed is not None:
        changes["seed"] = int(seed)
    if trials is not None:
        if trials < 1:
            raise SpecError("trials must be >= 1")
        changes["trials"] = int(trials)
        changes["series"] = tuple(dataclasses.replace(s, trials=int(trials)) for s in spec.series)
    if output_dir is not None:
        changes["output_dir"] = Path(output_dir)
    return dataclasses.replace(spec, **changes)


# --- running ---------------------------------------------------------------------

def _cfg_key(cfg: NetworkConfig) -> str:
    return ",".join(f"{f.name}={getattr(cfg, f.name)!r}" for f in fields(NetworkConfig))


def cell_seed(master: int, key: str) -> np.random.SeedSequence:
    """Seed for one cell, a pure function of the master seed and the cell's content."""
    digest = int.from_bytes(hashlib.sha256(key.encode("utf-8")).digest()[:16], "little")
    return np.random.SeedSequence([master, digest])


def _label(item: str, series: Series) -> str:
    return f"{item}@{series.label}" if series.label else item


@dataclass(frozen=True)
class _Task:
    kind: str  # "analytic", "simulation", "power_analytic", "power_simulation"
    item: str
    cfg: NetworkConfig
    thetas: tuple  # linear thresholds served by this task (coverage tasks)
    trials: int
    seed: object
    samples: int
    corollary4_power: str
    sim: SimControls


def _execute(task: _Task):
    """Run one task; returns (list of (estimate, ci) or None, status, seconds)."""
    t0 = time.perf_counter()
    try:
        if task.kind == "analytic":
            out = []
            for th in task.thetas:
                est = analysis.evaluate(task.item, task.cfg, th, task.samples, task.seed,
                                        power_scenario=task.corollary4_power)
                out.append((est.value, Z95 * est.abs_uncertainty))
        elif task.kind == "simulation":
            sinr = simulate_sinr(task.cfg, PowerModel(task.item), task.trials, task.sim, task.seed)
            out = [(e.value, e.abs_uncertainty) for e in (coverage_from_sinr(sinr, th) for th in task.thetas)]
        elif task.kind == "power_analytic":
            if task.item == "lemma1":
                est = analysis.mean_power_np_nearest(task.cfg, task.samples, task.seed)
                out = [(est.value, Z95 * est.std_error)]
            else:
                out = [(analysis.mean_power_all_pbs(task.cfg), 0.0)]
        else:
            window = task.sim.window_radius if task.item == "all_pbs" else None
            draws = 4 if task.item == "all_pbs" else 1
            est = simulate_mean_power(task.cfg, task.item, task.trials, window, draws, task.seed)
            out = [(est.mean, Z95 * est.std_error)]
        status = "ok"
    except NumericalError as exc:
        out, status = None, f"numerical_error: {exc}"
    except RealizationInfeasible as exc:
        out, status = None, f"infeasible: {exc}"
    return out, status, time.perf_counter() - t0


def _plan(spec: ExperimentSpec):
    """Tasks plus, for each task, the row slots it fills.

    Simulations that differ only in the threshold share one task, so all
    thresholds of a given network configuration are read off the same
    realizations.
    """
    rows, tasks, slots = [], [], []
    sim_index = {}
    for s in spec.all_series():
        for v in spec.sweep_values:
            cfg, theta_db = spec.cell_config(s, v)
            theta = db_to_linear(theta_db)
            for item in spec.methods:
                rows.append(Row(float(v), _label(item, s), s.label, False, cfg.lambda_b))
                if spec.metric == "coverage":
                    key = f"analytic|{item}|{_cfg_key(cfg)}|{theta!r}|{spec.analytic_samples}|{spec.corollary4_power}"
                    kind = "analytic"
                else:
                    key = f"power|{item}|{_cfg_key(cfg)}|{spec.analytic_samples}"
                    kind = "power_analytic"
                tasks.append(_Task(kind, item, cfg, (theta,), 0, cell_seed(spec.seed, key),
                                   spec.analytic_samples, spec.corollary4_power, spec.sim))
                slots.append([(len(rows) - 1, 0)])
            for item in spec.models:
                rows.append(Row(float(v), _label(item, s), s.label, True, cfg.lambda_b))
                if spec.metric == "coverage":
                    key = f"simulation|{item}|{_cfg_key(cfg)}|{s.trials}|{spec.sim!r}"
                    if key in sim_index:
                        t = sim_index[key]
                        tasks[t] = dataclasses.replace(tasks[t], thetas=tasks[t].thetas + (theta,))
                        slots[t].append((len(rows) - 1, len(tasks[t].thetas) - 1))
                        continue
                    sim_index[key] = len(tasks)
                    tasks.append(_Task("simulation", item, cfg, (theta,), s.trials, cell_seed(spec.seed, key),
                                       0, spec.corollary4_power, spec.sim))
                else:
                    key = f"power_simulation|{item}|{_cfg_key(cfg)}|{s.trials}|{spec.sim.window_radius!r}"
                    tasks.append(_Task("power_simulation", item, cfg, (), s.trials, cell_seed(spec.seed, key),
                                       0, spec.corollary4_power, spec.sim))
                slots.append([(len(rows) - 1, 0)])
    return rows, tasks, slots


def run(spec: ExperimentSpec, workers: int = 1, write: bool = True, plot: bool = True) -> SweepResult:
    """Evaluate every (series x sweep value x method/model) cell.

    Rows come out in deterministic sweep order regardless of ``workers``.
    Cell failures are recorded in the row's status; the run continues.
    With ``write`` the CSV (and with ``plot`` the SVG) land in
    ``spec.output_dir``.
    """
    rows, tasks, slots = _plan(spec)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(workers) as pool:
            outcomes = list(pool.map(_execute, tasks))
    else:
        outcomes = [_execute(t) for t in tasks]
    for task, (out, status, seconds), task_slots in zip(tasks, outcomes, slots):
        for row_index, k in task_slots:
            row = rows[row_index]
            row.status = status
            row.wall_time_s = seconds / len(task_slots)
            if out is not None:
                row.estimate, row.ci = out[k]
                if spec.metric == "coverage":
                    scale = row.lambda_b * spec.area
                    row.capacity, row.capacity_ci = scale * row.estimate, scale * row.ci
    result = SweepResult(spec.name, spec.metric, spec.sweep_parameter, rows, spec.plot, spec.split_series)
    if write:
        out_dir = Path(spec.output_dir)
        write_csv(result, out_dir / f"{spec.name}.csv")
        if plot:
            emit_plot(result, out_dir / f"{spec.name}.svg")
    return result


# --- output ----------------------------------------------------------------------

def _fmt(x) -> str:
    return "" if x is None or (isinstance(x, float) and math.isnan(x)) else repr(float(x))


def csv_text(result: SweepResult, timing: bool = False) -> str:
    """CSV body with shortest round-trip floats and LF line endings.

    The wall_time_s column is left empty unless ``timing`` is set, so that
    reruns are byte-identical.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if result.metric == "coverage":
        w.writerow(COVERAGE_HEADER)
    else:
        w.writerow(POWER_HEADER)
    for r in result.rows:
        value = repr(int(r.value)) if result.swept_param == "Np" else repr(float(r.value))
        wall = _fmt(r.wall_time_s) if timing else ""
        if result.metric == "coverage":
            w.writerow((result.swept_param, value, r.method, _fmt(r.estimate), _fmt(r.ci),
                        _fmt(r.capacity), _fmt(r.capacity_ci), r.status, wall))
        else:
            w.writerow((result.swept_param, value, r.method, _fmt(r.estimate), _fmt(r.ci), r.status, wall))
    return buf.getvalue()


def write_csv(result: SweepResult, path, timing: bool = False) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text(result, timing))
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def read_csv(path) -> list:
    """Rows of a results CSV as dicts with floats where numeric."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    for r in rows:
        for k, v in r.items():
            if k in ("swept_param", "method", "status"):
                continue
            r[k] = float(v) if v != "" else math.nan
    return rows


_AXIS_LABELS = {
    "lambda_p": r"PB density $\lambda_p$ (/m$^2$)",
    "lambda_b": r"BN density $\lambda_b$ (/m$^2$)",
    "theta_db": r"SINR threshold $\Theta$ (dB)",
    "Np": r"PBs in harvesting zone $N_p$",
    "coverage": r"coverage probability $P_s$",
    "capacity": r"capacity $C$",
    "mean_power": "mean harvested power (W)",
}


def build_figure(result: SweepResult):
    """Matplotlib figure with one line per method/model and CI bands for simulations."""
    if not result.rows:
        raise ValueError("cannot plot an empty result")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    metrics = result.plot
    groups = [None]
    if result.split_series:
        groups = []
        for r in result.rows:
            if r.series not in groups:
                groups.append(r.series)
    fig, axes = plt.subplots(len(metrics), len(groups), figsize=(5.2 * len(groups), 3.8 * len(metrics)),
                             squeeze=False)
    for i, metric in enumerate(metrics):
        for j, group in enumerate(groups):
            ax = axes[i][j]
            for label in result.labels():
                rs = [r for r in result.rows if r.method == label and (group is None or r.series == group)]
                if not rs:
                    continue
                x = np.array([r.value for r in rs])
                if metric == "capacity":
                    y = np.array([r.capacity for r in rs])
                    ci = np.array([r.capacity_ci for r in rs])
                else:
                    y = np.array([r.estimate for r in rs])
                    ci = np.array([r.ci for r in rs])
                style = "o--" if rs[0].simulated else "-"
                line, = ax.plot(x, y, style, label=label, markersize=4)
                if rs[0].simulated:
                    ax.fill_between(x, y - ci, y + ci, color=line.get_color(), alpha=0.2, linewidth=0)
            ax.set_xlabel(_AXIS_LABELS[result.swept_param])
            ax.set_ylabel(_AXIS_LABELS[metric])
            if group:
                ax.set_title(group)
            ax.grid(True, alpha=0.3)
            ax.legend(fontsize=7)
    fig.suptitle(result.name)
    fig.tight_layout()
    return fig


def emit_plot(result: SweepResult, path) -> Path:
    """Write :func:`build_figure` as a self-contained SVG."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    with plt.rc_context({"svg.hashsalt": "wpbn", "svg.fonttype": "path"}):
        fig = build_figure(result)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
        finally:
            plt.close(fig)
    return path


# --- bundled specs -----------------------------------------------------------------

BUNDLED = ("fig3a", "fig3b", "fig4", "fig5a", "fig5b", "fig6a", "fig6b", "fig7", "fig8")


def bundled_spec_path(name: str) -> Path:
    """Path of a bundled figure spec (``fig5a`` etc.)."""
    if name not in BUNDLED:
        raise SpecError(f"no bundled spec {name!r}; choose from {BUNDLED}")
    return Path(__file__).parent / "specs" / f"{name}.toml"


def golden_csv_path(name: str) -> Path:
    return Path(__file__).parent / "specs" / f"{name}.csv"


def resolve_spec(arg: str) -> Path:
    """A spec argument is a file path or the name of a bundled spec."""
    if arg in BUNDLED and not os.path.exists(arg):
        return bundled_spec_path(arg)
    return Path(arg)
