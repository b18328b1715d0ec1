"""Seeded multi-trial campaigns, trace files and summary tables.

A campaign is described by a flat ``key = value`` text file (``#`` starts a
comment). Trial ``t`` uses seed ``seed + t``; the same seed also drives the
problem instance for the sparse and antenna problems, so IS and DE
campaigns with equal seeds see identical instances.

Files written to the output directory:

``trace_NNN.txt``
    one row per iteration: ``nfe best_cost iteration``, preceded by a
    ``#`` header echoing the configuration.
``summary.txt``
    ``key = value`` statistics plus one ``final.NNN`` line per trial.
``timing.txt``
    wall-clock times; kept apart because they are not reproducible.
"""

import dataclasses
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import antenna, benchmarks, sparse
from .de import DEConfig, de_run
from .metrics import MetricKind
from .optimizer import ISConfig, StepSizeParams, run
from .problem import ConfigurationError

_INT_KEYS = {"d", "p", "k1", "k2", "nfe", "trials", "seed", "m", "k"}
_FLOAT_KEYS = {"cr", "f", "tr", "noise_variance", "lam", "q", "alpha", "beta", "lower", "upper"}
_BOOL_KEYS = {"shared_init"}


@dataclass(frozen=True)
class RunConfig:
    algorithm: str = "IS"
    problem: str = "f1"
    d: int = 10
    p: int = 40
    k1: Optional[int] = None
    k2: int = 2
    cr: Optional[float] = None
    f: Optional[float] = None
    nfe: int = 20000
    trials: int = 30
    seed: int = 0
    tr: Optional[float] = None
    metric: Optional[str] = None
    out: Optional[str] = None
    shared_init: bool = False
    uniform_spread: str = "half_width"
    # sparse / antenna problems
    scenario: str = "binary"
    m: int = 128
    k: int = 20
    noise_variance: float = 0.0
    lam: Optional[float] = None
    q: float = 0.9
    alpha: float = 0.0
    beta: float = 1.0
    lower: Optional[float] = None
    upper: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "algorithm", self.algorithm.upper())

    def validate(self):
        if self.algorithm not in ("IS", "DE"):
            raise ConfigurationError(f"algorithm must be IS or DE, got {self.algorithm!r}")
        if self.trials < 1:
            raise ConfigurationError("trials must be at least 1")
        kind = self.problem_kind
        if kind == "benchmark":
            benchmarks.spec(self.problem)
        if self.algorithm == "IS":
            if self.k1 is None:
                raise ConfigurationError("IS needs k1")
            self.is_config().validate()
        else:
            if self.cr is None or self.f is None:
                raise ConfigurationError("DE needs cr and f")
            self.de_config().validate()
        if self.metric is not None:
            MetricKind.parse(self.metric)

    @property
    def problem_kind(self):
        name = self.problem.lower()
        if name in ("sparse", "f13"):
            return "sparse"
        if name in ("antenna", "f14"):
            return "antenna"
        if name in benchmarks.REGISTRY:
            return "benchmark"
        raise ConfigurationError(f"unknown problem id {self.problem!r}")

    def is_config(self):
        return ISConfig(self.k1, self.k2, self.p, self.nfe, StepSizeParams(uniform_spread=self.uniform_spread))

    def de_config(self):
        return DEConfig(self.cr, self.f, self.p, self.nfe)

    def trial_seed(self, t):
        return self.seed + t

    def items(self):
        """Settings relevant to this algorithm and problem, in field order."""
        skip = {"out"}
        skip |= {"cr", "f"} if self.algorithm == "IS" else {"k1", "k2", "uniform_spread"}
        kind = self.problem_kind
        if kind != "sparse":
            skip |= {"scenario", "noise_variance", "lam", "q", "lower", "upper"}
        if kind != "antenna":
            skip |= {"alpha", "beta"}
        if kind == "benchmark":
            skip |= {"m", "k"}
        return [(f.name, getattr(self, f.name)) for f in dataclasses.fields(self)
                if f.name not in skip and getattr(self, f.name) is not None]


def _convert(key, raw):
    if key in _INT_KEYS:
        return int(raw)
    if key in _FLOAT_KEYS:
        return float(raw)
    if key in _BOOL_KEYS:
        low = raw.lower()
        if low not in ("true", "false", "1", "0", "yes", "no"):
            raise ConfigurationError(f"{key}: expected a boolean, got {raw!r}")
        return low in ("true", "1", "yes")
    return raw


def parse_config(text, **overrides):
    names = {f.name for f in dataclasses.fields(RunConfig)}
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected key = value, got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        if key not in names:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = _convert(key, raw)
        except ValueError as exc:
            raise ConfigurationError(f"line {lineno}: bad value for {key}: {raw!r}") from exc
    values.update({k: v for k, v in overrides.items() if v is not None})
    config = RunConfig(**values)
    config.validate()
    return config


def load_config(path, **overrides):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_config(text, **overrides)


def format_config(config):
    return "".join(f"{k} = {v}\n" for k, v in config.items())


def build_problem(config, seed):
    """The objective for one trial, plus the instance it was built from."""
    kind = config.problem_kind
    if kind == "benchmark":
        prob, instance = benchmarks.problem(config.problem, config.d), None
    elif kind == "sparse":
        instance = sparse.generate_instance(
            config.scenario, config.d, config.m, config.k, config.noise_variance, seed
        )
        params = sparse.SparseObjectiveParams.for_scenario(instance.scenario, q=config.q)
        if config.lam is not None:
            params = dataclasses.replace(params, lam=config.lam)
        bounds = None
        if config.lower is not None and config.upper is not None:
            bounds = (config.lower, config.upper)
        prob = sparse.problem(instance, params, bounds)
    else:
        instance = antenna.generate_channel(config.d, config.m, seed, config.alpha, config.beta)
        prob = antenna.problem(instance, config.k)
    if config.metric is not None:
        prob = dataclasses.replace(prob, metric=MetricKind.parse(config.metric))
    return prob, instance


def shared_initial_population(config, prob, seed):
    rng = np.random.default_rng([seed, 0x5EED])
    return prob.random_positions(config.p, rng)


def run_trial(config, t):
    seed = config.trial_seed(t)
    prob, instance = build_problem(config, seed)
    init = shared_initial_population(config, prob, seed) if config.shared_init else None
    if config.algorithm == "IS":
        record = run(prob, config.is_config(), seed, init=init)
    else:
        record = de_run(prob, config.de_config(), seed, init=init)
    kind = config.problem_kind
    if kind == "sparse":
        mse, nmse = sparse.distortion(record.best_position, instance.x_true)
        record.extras.update(mse=mse, nmse=nmse)
    elif kind == "antenna":
        selection = antenna.map_topk(record.best_position, config.k)
        record.extras.update(
            msv=antenna.f14(selection, instance),
            msv_actual=antenna.f14(selection, instance, actual=True),
        )
    return record


@dataclass
class CampaignSummary:
    algorithm: str
    problem: str
    d: int
    nfe: int
    trials: int
    seed: int
    final_costs: np.ndarray
    mean: float
    std: float
    successes: Optional[int]
    tr: Optional[float]
    mean_nfe: float
    mean_wall_time: float = float("nan")
    extras: dict = field(default_factory=dict)

    @property
    def single_trial(self):
        return self.trials == 1


def summarize(config, records):
    finals = np.array([r.best_cost for r in records], dtype=float)
    n = len(finals)
    mean = float(np.mean(finals))
    std = float(np.std(finals, ddof=1)) if n > 1 else 0.0
    successes = None if config.tr is None else int(np.count_nonzero(finals < config.tr))
    extras = {}
    for key in sorted(records[0].extras):
        extras[f"mean_{key}"] = float(np.mean([r.extras[key] for r in records]))
    return CampaignSummary(
        algorithm=config.algorithm,
        problem=config.problem,
        d=config.d,
        nfe=config.nfe,
        trials=n,
        seed=config.seed,
        final_costs=finals,
        mean=mean,
        std=std,
        successes=successes,
        tr=config.tr,
        mean_nfe=float(np.mean([r.nfe for r in records])),
        mean_wall_time=float(np.mean([r.wall_time for r in records])),
        extras=extras,
    )


def _num(x):
    return "%.17e" % x


def emit_trace(record, path, config=None):
    """Write one trial's convergence trace; refuses empty records."""
    if record.trace is None or len(record.trace) == 0:
        raise ValueError(f"refusing to write an empty trace to {path}")
    lines = []
    if config is not None:
        lines += [f"# {k} = {v}" for k, v in config.items()]
    else:
        lines.append(f"# algorithm = {record.algorithm}")
    lines.append(f"# objective = {record.problem}")
    lines.append(f"# trial_seed = {record.seed}")
    lines.append("nfe best_cost iteration")
    lines += [f"{int(n)} {_num(c)} {int(i)}" for n, c, i in record.trace]
    _write(path, "\n".join(lines) + "\n")


def read_trace(path):
    """Parse a trace file back into an (n, 3) array."""
    rows = []
    with open(path) as fh:
        for line in fh:
            if line.startswith("#") or line.startswith("nfe"):
                continue
            n, c, i = line.split()
            rows.append((float(n), float(c), float(i)))
    return np.array(rows)


def _write(path, text):
    path = Path(path)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def format_summary(summary):
    lines = [
        f"algorithm = {summary.algorithm}",
        f"problem = {summary.problem}",
        f"d = {summary.d}",
        f"nfe = {summary.nfe}",
        f"trials = {summary.trials}",
        f"seed = {summary.seed}",
        f"mean = {_num(summary.mean)}",
        f"std = {_num(summary.std)}",
        f"mean_nfe = {_num(summary.mean_nfe)}",
    ]
    if summary.single_trial:
        lines.append("note = n=1, std reported as 0")
    if summary.tr is not None:
        lines.append(f"tr = {_num(summary.tr)}")
        lines.append(f"successes = {summary.successes}")
    lines += [f"{k} = {_num(v)}" for k, v in summary.extras.items()]
    lines += [f"final.{t:03d} = {_num(c)}" for t, c in enumerate(summary.final_costs)]
    return "\n".join(lines) + "\n"


def load_summary(path):
    path = Path(path)
    if path.is_dir():
        path = path / "summary.txt"
    values = {}
    with open(path) as fh:
        for line in fh:
            if "=" in line:
                k, v = (s.strip() for s in line.split("=", 1))
                values[k] = v
    finals = np.array([float(v) for k, v in sorted(values.items()) if k.startswith("final.")])
    extras = {k: float(v) for k, v in values.items() if k.startswith("mean_") and k != "mean_nfe"}
    wall = float("nan")
    timing = path.parent / "timing.txt"
    if timing.exists():
        for line in timing.read_text().splitlines():
            if line.startswith("mean_wall_time"):
                wall = float(line.split("=", 1)[1])
    tr = float(values["tr"]) if "tr" in values else None
    return CampaignSummary(
        algorithm=values["algorithm"],
        problem=values["problem"],
        d=int(values["d"]),
        nfe=int(values["nfe"]),
        trials=int(values["trials"]),
        seed=int(values["seed"]),
        final_costs=finals,
        mean=float(values["mean"]),
        std=float(values["std"]),
        successes=int(values["successes"]) if "successes" in values else None,
        tr=tr,
        mean_nfe=float(values["mean_nfe"]),
        mean_wall_time=wall,
        extras=extras,
    )


def run_campaign(config, sequential=False, out=None, workers=None):
    """Run every trial, write traces and the summary, return the summary."""
    config.validate()
    out = out if out is not None else config.out
    trials = range(config.trials)
    if sequential or config.trials == 1:
        records = [run_trial(config, t) for t in trials]
    else:
        workers = workers or min(config.trials, os.cpu_count() or 1)
        if workers <= 1:
            records = [run_trial(config, t) for t in trials]
        else:
            with ProcessPoolExecutor(workers) as pool:
                records = list(pool.map(run_trial, [config] * config.trials, trials))
    summary = summarize(config, records)
    if out is not None:
        out = Path(out)
        try:
            out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise OSError(f"cannot create output directory {out}: {exc.strerror}") from exc
        for t, record in enumerate(records):
            emit_trace(record, out / f"trace_{t:03d}.txt", config)
        _write(out / "summary.txt", format_summary(summary))
        timing = [f"trial.{t:03d} = {r.wall_time:.6f}" for t, r in enumerate(records)]
        timing.append(f"total_wall_time = {sum(r.wall_time for r in records):.6f}")
        timing.append(f"mean_wall_time = {summary.mean_wall_time:.6f}")
        _write(out / "timing.txt", "\n".join(timing) + "\n")
    return summary, records


def _fmt_short(x):
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "-"
    return f"{x:.4g}"


def compare_report(summaries):
    """Aligned text table of summaries, grouped by problem id."""
    if not summaries:
        raise ValueError("nothing to report")
    order = []
    groups = {}
    for s in summaries:
        key = (s.problem, s.d)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(s)
    header = ["problem", "d", "algorithm", "nfe", "trials", "mean (std)", "successes", "time [s]"]
    rows = []
    for key in order:
        for s in groups[key]:
            succ = "-" if s.successes is None else f"{s.successes}/{s.trials}"
            rows.append([
                s.problem, str(s.d), s.algorithm, str(s.nfe), str(s.trials),
                f"{_fmt_short(s.mean)} ({_fmt_short(s.std)})", succ, _fmt_short(s.mean_wall_time),
            ])
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines) + "\n"
