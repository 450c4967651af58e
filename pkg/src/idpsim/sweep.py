"""Angle sweeps reproducing the inconclusive-loss and error-rate curves, and CSV output."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .bounds import best_von_neumann_error, idp_bound
from .components import load_calibration, load_measured_calibration
from .errors import DomainError
from .interferometer import InterferometerConfig, align_many, calibrated_config, error_rates, ideal_config, run_pair
from .photons import PulseEnsemble, sample_counts
from .states import make_states, overlap

MODELS = ("ideal", "calibrated")
MEAN_WINDOW = (14.0, 45.0)  # error-rate average over alpha in (14, 45]


@dataclass(frozen=True)
class RunConfig:
    alpha_start: float = 0.0
    alpha_stop: float = 45.0
    alpha_step: float = 4.0
    model_tag: str = "ideal"
    calibration_path: str | None = None
    mean_photons: float = 0.2
    n_pulses: int = 0
    efficiency: float = 0.83
    seed: int = 0
    output_path: str | None = None

    def __post_init__(self):
        if not self.alpha_step > 0:
            raise DomainError("alpha_step must be positive")
        if self.alpha_start > self.alpha_stop:
            raise DomainError("alpha_start must not exceed alpha_stop")
        if not (0 <= self.alpha_start and self.alpha_stop <= 45):
            raise DomainError("alpha range must lie within [0, 45] degrees")
        if self.model_tag not in MODELS:
            raise DomainError(f"model_tag must be one of {MODELS}")
        if self.n_pulses < 0:
            raise DomainError("n_pulses must be nonnegative (0 disables Monte Carlo)")

    @property
    def monte_carlo(self) -> bool:
        return self.n_pulses > 0


@dataclass
class SweepRow:
    alpha: float
    ideal_inconclusive: float
    simulated_inconclusive: float
    idp_bound_value: float
    error_rate_plus: float | None
    error_rate_minus: float | None
    best_von_neumann: float
    wp4_angle: float
    model_tag: str
    path_phase: float
    status: str
    counts_plus_pd1: int | None = None
    counts_plus_pd2: int | None = None
    counts_plus_pd3: int | None = None
    counts_minus_pd1: int | None = None
    counts_minus_pd2: int | None = None
    counts_minus_pd3: int | None = None
    mc_inconclusive: float | None = None


COUNT_FIELDS = tuple(f.name for f in fields(SweepRow) if f.name.startswith("counts_")) + ("mc_inconclusive",)
BASE_FIELDS = tuple(f.name for f in fields(SweepRow) if f.name not in COUNT_FIELDS)


def alpha_grid(start: float, stop: float, step: float) -> np.ndarray:
    """``start, start + step, ...`` up to ``stop``; ``stop`` itself is always included."""
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    grid = start + step * np.arange(n)
    if abs(grid[-1] - stop) <= 1e-9:
        grid[-1] = stop
    elif grid[-1] < stop:
        grid = np.append(grid, stop)
    return grid


def derive_seed(master: int, row: int, which: int) -> int:
    """Per-row Monte Carlo seed, fixed by (master seed, row index, input state)."""
    return int(np.random.SeedSequence([master, row, which]).generate_state(1, np.uint64)[0])


def base_config(config: RunConfig) -> InterferometerConfig:
    if config.model_tag == "ideal":
        return ideal_config()
    cal = load_calibration(config.calibration_path) if config.calibration_path else load_measured_calibration()
    return calibrated_config(cal)


def sweep_alphas(alphas, base: InterferometerConfig, ensemble: PulseEnsemble | None = None, seed: int = 0):
    """One :class:`SweepRow` per angle, aligning afresh at every angle."""
    rows = []
    for k, res in enumerate(align_many(alphas, base)):
        alpha = 2.0 * res.config.wp2_angle
        plus, minus = run_pair(alpha, res.config)
        err_p, err_m = error_rates(alpha, plus, minus)
        pair = make_states(alpha)
        row = SweepRow(
            alpha=alpha,
            ideal_inconclusive=math.cos(math.radians(2.0 * alpha)),
            simulated_inconclusive=plus.p_pd3,
            idp_bound_value=idp_bound(min(abs(overlap(pair.psi_plus, pair.psi_minus)), 1.0)),
            error_rate_plus=err_p,
            error_rate_minus=err_m,
            best_von_neumann=best_von_neumann_error(alpha),
            wp4_angle=res.config.wp4_angle,
            model_tag=base.model_tag,
            path_phase=res.config.path_phase_delta,
            status="ok" if res.converged else "not_converged",
        )
        if ensemble is not None:
            cp = sample_counts(plus, ensemble, derive_seed(seed, k, 0))
            cm = sample_counts(minus, ensemble, derive_seed(seed, k, 1))
            row.counts_plus_pd1, row.counts_plus_pd2, row.counts_plus_pd3 = (int(x) for x in cp.sampled)
            row.counts_minus_pd1, row.counts_minus_pd2, row.counts_minus_pd3 = (int(x) for x in cm.sampled)
            row.mc_inconclusive = cp.sampled[2] / cp.total if cp.total else None
        rows.append(row)
    return rows


def summarize(rows, config: RunConfig | None = None) -> dict:
    summary: dict = {}
    if config is not None:
        summary["model"] = config.model_tag
        summary["seed"] = config.seed
        summary["n_pulses"] = config.n_pulses
        summary["mean_photons"] = config.mean_photons
    summary["n_rows"] = len(rows)
    if rows:
        dev = [r.simulated_inconclusive - r.ideal_inconclusive for r in rows]
        summary["rms_deviation_percent"] = 100.0 * math.sqrt(sum(d * d for d in dev) / len(dev))
    else:
        summary["rms_deviation_percent"] = None
    lo, hi = MEAN_WINDOW
    window = [r for r in rows if lo < r.alpha <= hi and r.error_rate_plus is not None]
    for key, attr in (("mean_error_rate_plus", "error_rate_plus"), ("mean_error_rate_minus", "error_rate_minus")):
        summary[key] = float(np.mean([getattr(r, attr) for r in window])) if window else None
    if window:
        summary["mean_error_rate"] = 0.5 * (summary["mean_error_rate_plus"] + summary["mean_error_rate_minus"])
    else:
        summary["mean_error_rate"] = None
    summary["alignment_failures"] = sum(r.status != "ok" for r in rows)
    return summary


def run_sweep(config: RunConfig):
    """Run the configured sweep; returns ``(rows, summary)``."""
    alphas = alpha_grid(config.alpha_start, config.alpha_stop, config.alpha_step)
    ensemble = None
    if config.monte_carlo:
        ensemble = PulseEnsemble(config.mean_photons, config.n_pulses, config.efficiency)
    rows = sweep_alphas(alphas, base_config(config), ensemble, config.seed)
    return rows, summarize(rows, config)


def format_value(x) -> str:
    """Nine significant digits, fixed-point; magnitudes below 5e-10 print as zero."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if abs(x) < 5e-10:
        return "0.000000000"
    return np.format_float_positional(x, precision=9, unique=False, fractional=False, trim="k")


def csv_text(rows, summary: dict, monte_carlo: bool | None = None) -> str:
    if monte_carlo is None:
        monte_carlo = bool(summary.get("n_pulses")) or any(r.mc_inconclusive is not None for r in rows)
    header = BASE_FIELDS + (COUNT_FIELDS if monte_carlo else ())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in sorted(rows, key=lambda r: r.alpha):
        d = asdict(r)
        writer.writerow([format_value(d[k]) for k in header])
    for key, value in summary.items():
        buf.write(f"# {key} = {format_value(value) if value is not None else 'nan'}\n")
    return buf.getvalue()


def emit_csv(rows, summary: dict, path, monte_carlo: bool | None = None) -> Path:
    path = Path(path)
    path.write_text(csv_text(rows, summary, monte_carlo), encoding="utf-8", newline="")
    return path
