"""Monte Carlo experiment orchestration: sweeps, records, summaries, CSV.

A sweep evaluates every requested scheme on shared channel realizations
(paired design). Trial streams are derived from the base seed and the trial
index alone, never from the sweep point, so a given trial sees identical
small-scale fading at every sweep value; that is what makes per-trial paired
comparisons across sweep values (and the bitwise N-independence of the
no-surface scheme) meaningful. Records are produced in a canonical order
regardless of worker count.
"""

from __future__ import annotations

import io
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from frisec.ceo import CeoParams
from frisec.channel import (
    FadingParams,
    PathLossModel,
    SystemGeometry,
    dbm_to_watts,
    realize_channels,
)
from frisec.numerics import RngStream
from frisec.schemes import ALL_SCHEMES, SCHEME_STREAM_KEY, AoParams, run_scheme

SWEEP_VARIABLES = ("power", "n_hat", "n_total", "eve_x")

CSV_HEADER = (
    "sweep_var,sweep_value,trial,scheme,secrecy_rate_bps_hz,"
    "objective_ratio,ao_iters,wall_ms,seed"
)

DEFAULT_SEED = 1
SEED_ENV_VAR = "FRIS_SEED"


def default_seed() -> int:
    """Resolve the default base seed, honoring the FRIS_SEED environment variable."""
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from exc
    return DEFAULT_SEED


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one experiment; defaults are the benchmark setup."""

    m: int = 4
    n: int = 100
    n_hat: int = 16
    b: int = 3
    p_ap_dbm: float = 20.0
    trials: int = 1000
    base_seed: int = DEFAULT_SEED
    schemes: tuple = ALL_SCHEMES
    sweep_variable: str = "power"
    sweep_values: tuple = (20.0,)
    threads: int = 1
    out_path: str | None = None

    ap_position: tuple = (0.0, 0.0, 10.0)
    bob_position: tuple = (50.0, 0.0, 1.5)
    eve_position: tuple = (55.0, 5.0, 1.5)
    fris_center: tuple = (45.0, 10.0, 5.0)
    aperture_wavelengths: float = 12.375
    wavelength_m: float = 0.1
    fris_axis: tuple = (1.0, 0.0, 0.0)
    ap_axis: tuple = (1.0, 0.0, 0.0)

    reference_loss_db: float = -30.0
    alpha_ap_fris: float = 2.2
    alpha_other: float = 2.8
    blockage_db: float = 25.0
    rician_k_db: float = 5.0
    noise_dbm: float = -80.0

    ao_max_iters: int = 20
    ao_rel_tolerance: float = 1e-3
    ceo_sample_size: int | None = None  # None resolves to 5N
    ceo_elite_ratio: float = 0.1
    ceo_smoothing: float = 0.7
    ceo_max_iters: int = 30
    ceo_patience: int = 5
    final_phase_polish: bool = True

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.sweep_variable not in SWEEP_VARIABLES:
            raise ValueError(
                f"sweep_variable must be one of {SWEEP_VARIABLES}, "
                f"got {self.sweep_variable!r}")
        values = tuple(float(v) for v in self.sweep_values)
        if not values:
            raise ValueError("sweep_values must be nonempty")
        if list(values) != sorted(values):
            raise ValueError("sweep_values must be sorted ascending")
        object.__setattr__(self, "sweep_values", values)
        schemes = tuple(self.schemes)
        for s in schemes:
            if s not in ALL_SCHEMES:
                raise ValueError(f"unknown scheme {s!r}")
        if not schemes:
            raise ValueError("at least one scheme is required")
        object.__setattr__(self, "schemes", schemes)
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    def at_sweep_value(self, value: float) -> "ExperimentConfig":
        """The point configuration obtained by applying one sweep value."""
        if self.sweep_variable == "power":
            return replace(self, p_ap_dbm=float(value))
        if self.sweep_variable == "n_hat":
            return replace(self, n_hat=int(round(value)))
        if self.sweep_variable == "n_total":
            return replace(self, n=int(round(value)))
        if self.sweep_variable == "eve_x":
            x, (_, y, z) = float(value), self.eve_position
            return replace(self, eve_position=(x, y, z))
        raise AssertionError("unreachable")

    def geometry(self) -> SystemGeometry:
        return SystemGeometry(
            ap_position=self.ap_position,
            bob_position=self.bob_position,
            eve_position=self.eve_position,
            fris_center=self.fris_center,
            num_locations=self.n,
            aperture_wavelengths=self.aperture_wavelengths,
            wavelength=self.wavelength_m,
            fris_axis=self.fris_axis,
            ap_axis=self.ap_axis,
        )

    def pathloss(self) -> PathLossModel:
        return PathLossModel(
            reference_loss_db=self.reference_loss_db,
            exponent_ap_fris=self.alpha_ap_fris,
            exponent_other=self.alpha_other,
            blockage_direct_db=self.blockage_db,
        )

    def fading(self) -> FadingParams:
        return FadingParams(
            rician_k=10.0 ** (self.rician_k_db / 10.0),
            noise_power=dbm_to_watts(self.noise_dbm),
        )

    def ao_params(self) -> AoParams:
        return AoParams(
            ceo=CeoParams(
                sample_size=self.ceo_sample_size,
                elite_ratio=self.ceo_elite_ratio,
                smoothing=self.ceo_smoothing,
                max_iters=self.ceo_max_iters,
                stagnation_patience=self.ceo_patience,
                final_phase_polish=self.final_phase_polish,
            ),
            max_iters=self.ao_max_iters,
            rel_tolerance=self.ao_rel_tolerance,
        )

    @property
    def power_watts(self) -> float:
        return dbm_to_watts(self.p_ap_dbm)

    @property
    def noise_watts(self) -> float:
        return dbm_to_watts(self.noise_dbm)


@dataclass(frozen=True)
class TrialRecord:
    sweep_value: float
    trial: int
    scheme: str
    secrecy_rate: float
    objective_ratio: float
    ao_iters: int
    wall_ms: float
    seed: int


@dataclass(frozen=True)
class SummaryRow:
    sweep_value: float
    scheme: str
    mean_rate: float
    std_error: float
    trials: int


@dataclass(frozen=True)
class PointError:
    sweep_value: float
    message: str


@dataclass
class SweepResult:
    records: list = field(default_factory=list)
    summaries: list = field(default_factory=list)
    errors: list = field(default_factory=list)


def run_trial(point_cfg: ExperimentConfig, sweep_value: float, trial: int) -> list:
    """Run every requested scheme on one shared channel realization."""
    trial_stream = RngStream(point_cfg.base_seed).child(trial)
    channels = realize_channels(
        point_cfg.geometry(), point_cfg.pathloss(), point_cfg.fading(),
        point_cfg.m, trial_stream.child(0))
    ao = point_cfg.ao_params()
    records = []
    for scheme in point_cfg.schemes:
        t0 = time.perf_counter()
        res = run_scheme(
            scheme, channels, point_cfg.power_watts, point_cfg.noise_watts,
            point_cfg.n_hat, point_cfg.b, ao,
            trial_stream.child(SCHEME_STREAM_KEY[scheme]))
        wall_ms = (time.perf_counter() - t0) * 1e3
        records.append(TrialRecord(
            sweep_value=float(sweep_value),
            trial=trial,
            scheme=scheme,
            secrecy_rate=res.secrecy_rate,
            objective_ratio=res.objective_ratio,
            ao_iters=res.iterations_used,
            wall_ms=wall_ms,
            seed=trial_stream.stream,
        ))
    return records


def _trial_task(args) -> list:
    return run_trial(*args)


def summarize(records, config: ExperimentConfig):
    """Per (sweep value, scheme) mean secrecy rate with standard error."""
    groups: dict = {}
    for rec in records:
        groups.setdefault((rec.sweep_value, rec.scheme), []).append(rec.secrecy_rate)
    rows = []
    scheme_order = {s: i for i, s in enumerate(config.schemes)}
    for (value, scheme) in sorted(
        groups, key=lambda k: (k[0], scheme_order.get(k[1], len(scheme_order)))
    ):
        rates = np.asarray(groups[(value, scheme)])
        se = float(rates.std(ddof=1) / np.sqrt(rates.size)) if rates.size > 1 else 0.0
        rows.append(SummaryRow(
            sweep_value=value,
            scheme=scheme,
            mean_rate=float(rates.mean()),
            std_error=se,
            trials=int(rates.size),
        ))
    return rows


def run_sweep(config: ExperimentConfig) -> SweepResult:
    """Run the full sweep; deterministic record set for a fixed config."""
    result = SweepResult()
    tasks = []
    for value in config.sweep_values:
        point = config.at_sweep_value(value)
        if point.n_hat > point.n:
            result.errors.append(PointError(
                sweep_value=float(value),
                message=f"infeasible point: n_hat={point.n_hat} exceeds n={point.n}",
            ))
            continue
        for trial in range(config.trials):
            tasks.append((point, float(value), trial))

    if config.threads == 1 or len(tasks) <= 1:
        batches = [run_trial(*t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            batches = list(pool.map(_trial_task, tasks, chunksize=4))

    records = [rec for batch in batches for rec in batch]
    sweep_order = {v: i for i, v in enumerate(config.sweep_values)}
    scheme_order = {s: i for i, s in enumerate(config.schemes)}
    records.sort(key=lambda r: (
        sweep_order[r.sweep_value], r.trial, scheme_order[r.scheme]))
    result.records = records
    result.summaries = summarize(records, config)
    return result


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def records_to_csv_text(records, sweep_var: str) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for r in records:
        buf.write(
            f"{sweep_var},{_fmt(r.sweep_value)},{r.trial},{r.scheme},"
            f"{_fmt(r.secrecy_rate)},{_fmt(r.objective_ratio)},{r.ao_iters},"
            f"{_fmt(r.wall_ms)},{r.seed}\n")
    return buf.getvalue()


def write_csv(records, path: str, sweep_var: str) -> None:
    """Write records with LF endings and full-precision decimal fields."""
    text = records_to_csv_text(records, sweep_var)
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"failed to write CSV to {path}: {exc}") from exc


def format_summary_table(summaries, errors=()) -> str:
    lines = [f"{'sweep_value':>12}  {'scheme':<28} {'mean_rate':>10} {'std_err':>9} {'trials':>7}"]
    for row in summaries:
        lines.append(
            f"{row.sweep_value:>12.4g}  {row.scheme:<28} {row.mean_rate:>10.4f} "
            f"{row.std_error:>9.4f} {row.trials:>7d}")
    for err in errors:
        lines.append(f"{err.sweep_value:>12.4g}  ERROR: {err.message}")
    return "\n".join(lines)


# Preset sweep grids for the four benchmark figures.
PRESETS = {
    "fig2": ("power", (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)),
    "fig3": ("n_hat", (4.0, 8.0, 16.0, 24.0, 32.0)),
    "fig4": ("n_total", (16.0, 25.0, 50.0, 75.0, 100.0)),
    "fig5": ("eve_x", (48.0, 50.0, 52.0, 54.0, 56.0, 58.0, 60.0)),
}

PRESET_DEFAULT_TRIALS = 200


def preset_config(
    name: str,
    trials: int | None = None,
    seed: int | None = None,
    schemes=None,
    threads: int = 1,
    out_path: str | None = None,
) -> ExperimentConfig:
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}")
    variable, grid = PRESETS[name]
    return ExperimentConfig(
        sweep_variable=variable,
        sweep_values=grid,
        trials=PRESET_DEFAULT_TRIALS if trials is None else trials,
        base_seed=default_seed() if seed is None else seed,
        schemes=tuple(schemes) if schemes else ALL_SCHEMES,
        threads=threads,
        out_path=out_path,
    )


# --- flat key = value config files -------------------------------------------

_TUPLE3_FIELDS = {"ap_position", "bob_position", "eve_position", "fris_center",
                  "fris_axis", "ap_axis"}
_FLOAT_TUPLE_FIELDS = {"sweep_values"}
_STR_TUPLE_FIELDS = {"schemes"}
_INT_FIELDS = {"m", "n", "n_hat", "b", "trials", "base_seed", "threads",
               "ao_max_iters", "ceo_max_iters", "ceo_patience"}
_OPT_INT_FIELDS = {"ceo_sample_size"}
_FLOAT_FIELDS = {"p_ap_dbm", "aperture_wavelengths", "wavelength_m",
                 "reference_loss_db", "alpha_ap_fris", "alpha_other",
                 "blockage_db", "rician_k_db", "noise_dbm",
                 "ao_rel_tolerance", "ceo_elite_ratio", "ceo_smoothing"}
_BOOL_FIELDS = {"final_phase_polish"}
_STR_FIELDS = {"sweep_variable", "out_path"}


def _coerce(key: str, raw: str):
    if key in _INT_FIELDS:
        return int(raw)
    if key in _OPT_INT_FIELDS:
        return None if raw.lower() in ("none", "") else int(raw)
    if key in _FLOAT_FIELDS:
        return float(raw)
    if key in _BOOL_FIELDS:
        if raw.lower() in ("true", "1", "yes", "on"):
            return True
        if raw.lower() in ("false", "0", "no", "off"):
            return False
        raise ValueError(f"invalid boolean for {key}: {raw!r}")
    if key in _STR_FIELDS:
        return raw
    if key in _TUPLE3_FIELDS:
        parts = tuple(float(p) for p in raw.split(","))
        if len(parts) != 3:
            raise ValueError(f"{key} needs three comma-separated numbers")
        return parts
    if key in _FLOAT_TUPLE_FIELDS:
        return tuple(float(p) for p in raw.split(","))
    if key in _STR_TUPLE_FIELDS:
        return tuple(p.strip() for p in raw.split(",") if p.strip())
    raise KeyError(f"unknown config key: {key}")


def parse_config_text(text: str) -> dict:
    """Parse 'key = value' lines with # comments into a coerced mapping."""
    mapping = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        mapping[key] = _coerce(key, raw)
    return mapping


def config_from_mapping(mapping: dict, base: ExperimentConfig | None = None) -> ExperimentConfig:
    base = base if base is not None else ExperimentConfig()
    return replace(base, **mapping)


def load_config_file(path: str) -> ExperimentConfig:
    with open(path) as fh:
        text = fh.read()
    return config_from_mapping(parse_config_text(text))
