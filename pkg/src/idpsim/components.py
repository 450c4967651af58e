"""Scattering models for the waveplates and polarizing beamsplitters.

PBS matrices act on four modes. Columns are the input modes
``(top H, top V, side H, side V)`` and rows the output modes
``(transmit H, transmit V, reflect H, reflect V)``. Light entering the
side port and passing straight through leaves by the reflect-port
direction, so an ideal PBS sends side-H to reflect-H and side-V to
transmit-V.

Transmitted amplitudes carry phase 0 and reflected amplitudes phase 90
degrees. Cross-polarized reflections carry -90 degrees: a reflection
inverts one transverse axis, and with every amplitude at +90 degrees the
measured leakages cannot form an energy-conserving matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import CalibrationError
from .states import JonesVector

ROW_TOL = 1e-6
MAX_REPAIR = 0.02
UNITARY_TOL = 1e-10

CAL_KEYS = ("t_hh", "t_hv", "r_hh", "r_hv", "t_vv", "t_vh", "r_vv", "r_vh")


def _rot(theta_deg: float) -> tuple[float, float]:
    t = math.radians(2.0 * theta_deg)
    return math.cos(t), math.sin(t)


@dataclass(frozen=True)
class WaveplateModel:
    """Ideal half-wave plate with its fast axis at ``axis_angle`` degrees."""

    axis_angle: float

    @property
    def matrix(self) -> np.ndarray:
        c, s = _rot(self.axis_angle)
        return np.array([[c, s], [s, -c]], dtype=complex)

    def apply(self, state: JonesVector) -> JonesVector:
        return JonesVector.from_array(self.matrix @ state.as_array())


def half_waveplate(axis_angle: float) -> WaveplateModel:
    axis_angle = float(axis_angle)
    if not math.isfinite(axis_angle):
        raise ValueError(f"waveplate angle must be finite, got {axis_angle!r}")
    return WaveplateModel(axis_angle)


@dataclass(frozen=True, eq=False)
class PBSModel:
    matrix: np.ndarray
    tag: str = "ideal"
    repair: float = 0.0

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"PBS matrix must be 4x4, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def apply(self, top: JonesVector, side: JonesVector | None = None) -> tuple[JonesVector, JonesVector]:
        """Return the (transmit, reflect) output Jones vectors."""
        vec = np.zeros(4, dtype=complex)
        vec[:2] = top.as_array()
        if side is not None:
            vec[2:] = side.as_array()
        out = self.matrix @ vec
        return JonesVector.from_array(out[:2]), JonesVector.from_array(out[2:])

    def unitarity_defect(self) -> float:
        m = self.matrix
        return float(np.abs(m.conj().T @ m - np.eye(4)).max())


def ideal_pbs() -> PBSModel:
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = 1.0  # top H -> transmit H
    m[3, 1] = 1j   # top V -> reflect V
    m[2, 2] = 1.0  # side H -> straight through
    m[1, 3] = 1j   # side V -> reflected into transmit port
    return PBSModel(m, "ideal")


@dataclass(frozen=True)
class PBSCalibration:
    """Measured output power fractions for H and V light entering the top port.

    ``t_hv`` is the fraction of H input transmitted as V, ``r_vh`` the
    fraction of V input reflected as H, and so on.
    """

    t_hh: float
    t_hv: float
    r_hh: float
    r_hv: float
    t_vv: float
    t_vh: float
    r_vv: float
    r_vh: float

    def __post_init__(self):
        for f in fields(self):
            value = float(getattr(self, f.name))
            if not (0.0 <= value <= 1.0):
                raise CalibrationError(f"{f.name} = {value!r} is not a power fraction in [0, 1]")
            object.__setattr__(self, f.name, value)
        for label, row in (("H", self.h_row), ("V", self.v_row)):
            if abs(sum(row) - 1.0) > ROW_TOL:
                raise CalibrationError(f"{label}-input fractions sum to {sum(row)!r}, expected 1")

    @property
    def h_row(self) -> tuple[float, float, float, float]:
        return self.t_hh, self.t_hv, self.r_hh, self.r_hv

    @property
    def v_row(self) -> tuple[float, float, float, float]:
        return self.t_vv, self.t_vh, self.r_vv, self.r_vh

    def as_dict(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in CAL_KEYS}


# H row as measured; V row mirrors it (the V leakages were only reported
# as approximately equal).
MEASURED_CALIBRATION = PBSCalibration(
    t_hh=0.982, t_hv=0.009, r_hh=0.0045, r_hv=0.0045,
    t_vv=0.0045, t_vh=0.0045, r_vv=0.982, r_vh=0.009,
)

IDENTITY_CALIBRATION = PBSCalibration(
    t_hh=1.0, t_hv=0.0, r_hh=0.0, r_hv=0.0,
    t_vv=0.0, t_vh=0.0, r_vv=1.0, r_vh=0.0,
)


def raw_calibrated_matrix(cal: PBSCalibration) -> np.ndarray:
    """Amplitude matrix before the energy-conservation repair."""
    sq = math.sqrt
    t, r, rx = 1.0, 1j, -1j
    m = np.zeros((4, 4), dtype=complex)
    # top H
    m[0, 0] = t * sq(cal.t_hh)
    m[1, 0] = t * sq(cal.t_hv)
    m[2, 0] = r * sq(cal.r_hh)
    m[3, 0] = rx * sq(cal.r_hv)
    # top V
    m[1, 1] = t * sq(cal.t_vv)
    m[0, 1] = t * sq(cal.t_vh)
    m[3, 1] = r * sq(cal.r_vv)
    m[2, 1] = rx * sq(cal.r_vh)
    # side H: straight through to the reflect port, reflected into transmit
    m[2, 2] = t * sq(cal.t_hh)
    m[3, 2] = t * sq(cal.t_hv)
    m[0, 2] = r * sq(cal.r_hh)
    m[1, 2] = rx * sq(cal.r_hv)
    # side V
    m[3, 3] = t * sq(cal.t_vv)
    m[2, 3] = t * sq(cal.t_vh)
    m[1, 3] = r * sq(cal.r_vv)
    m[0, 3] = rx * sq(cal.r_vh)
    return m


def nearest_unitary(m: np.ndarray) -> np.ndarray:
    """Closest unitary matrix in Frobenius norm (unitary polar factor)."""
    w, _, vh = np.linalg.svd(m)
    return w @ vh


def calibrated_pbs(cal: PBSCalibration, max_repair: float = MAX_REPAIR) -> PBSModel:
    """Build a lossless PBS from measured power fractions.

    Raises
    ------
    CalibrationError
        If making the matrix unitary would move any entry by more than
        ``max_repair``.
    """
    raw = raw_calibrated_matrix(cal)
    fixed = nearest_unitary(raw)
    repair = float(np.abs(fixed - raw).max())
    if repair > max_repair:
        raise CalibrationError(
            f"calibration is inconsistent with a lossless PBS: repair moves an entry by {repair:.4f} "
            f"(limit {max_repair})"
        )
    # Keep exact zeros exact so an identity calibration reproduces the ideal PBS.
    fixed[np.abs(fixed) < 1e-15] = 0.0
    return PBSModel(fixed, "calibrated", repair)


@dataclass(frozen=True)
class LossStage:
    """WP4 followed by PBS3: the variable-transmittance element of arm A."""

    waveplate: WaveplateModel
    pbs: PBSModel

    def apply(self, state: JonesVector) -> tuple[JonesVector, JonesVector]:
        """Return (light sent to PD3, light continuing in the interferometer)."""
        return self.pbs.apply(self.waveplate.apply(state))

    def pd3_fraction(self, state: JonesVector) -> float:
        to_pd3, _ = self.apply(state)
        return to_pd3.norm2 / state.norm2


def variable_loss_stage(wp4_angle: float, pbs: PBSModel | None = None) -> LossStage:
    return LossStage(half_waveplate(wp4_angle), pbs if pbs is not None else ideal_pbs())


def parse_calibration(text: str) -> PBSCalibration:
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.partition("#")[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CalibrationError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in CAL_KEYS:
            raise CalibrationError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise CalibrationError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = float(value)
        except ValueError:
            raise CalibrationError(f"line {lineno}: {value!r} is not a number") from None
    missing = [k for k in CAL_KEYS if k not in values]
    if missing:
        raise CalibrationError(f"missing keys: {', '.join(missing)}")
    return PBSCalibration(**values)


def format_calibration(cal: PBSCalibration, comment: str | None = None) -> str:
    lines = [f"# {c}" for c in (comment or "").splitlines()]
    lines += [f"{k} = {v!r}" for k, v in cal.as_dict().items()]
    return "\n".join(lines) + "\n"


def load_calibration(path: str | Path) -> PBSCalibration:
    return parse_calibration(Path(path).read_text(encoding="utf-8"))


def measured_calibration_path():
    """Location of the shipped ``measured_pbs.cal``."""
    return resources.files("idpsim") / "data" / "measured_pbs.cal"


def load_measured_calibration() -> PBSCalibration:
    return parse_calibration(measured_calibration_path().read_text(encoding="utf-8"))
