"""The discriminating interferometer as a staged amplitude map.

Light enters PBS2. Its transmitted (H) part travels arm A through WP4 and
PBS3: PBS3's transmit port feeds PD3 (the inconclusive outcome) and its
reflected part continues. The surviving arm-A light is relabelled H <-> V,
picks up the path phase and meets arm B (the V part reflected by PBS2) at
PBS5. PBS5's common output passes WP6 and PBS6, whose transmit and reflect
ports are PD1 and PD2. PBS5's second output is not detected (``dump``).

The H <-> V relabelling of arm A is a modelling idealization: it lets PBS5
transmit arm A and reflect arm B into one output, and is applied the same
way for every component model.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .components import PBSCalibration, PBSModel, calibrated_pbs, half_waveplate, ideal_pbs
from .components import MEASURED_CALIBRATION
from .errors import ConvergenceError, DomainError
from .states import JonesVector, check_alpha

PATHS = ("input", "armA", "armB", "pd1", "pd2", "pd3", "dump")
POLS = ("H", "V")
MODE_LABELS = tuple((p, s) for p in PATHS for s in POLS)
DETECTORS = ("pd1", "pd2", "pd3")

SOURCE = JonesVector(1.0, 0.0)
WP3_AXIS = 0.0

# PBS6 is a Wollaston prism; its extinction was better than 1 part in 5000.
WOLLASTON_EXTINCTION = 1.0 / 5000.0


def wollaston_calibration(extinction: float = WOLLASTON_EXTINCTION) -> PBSCalibration:
    e = extinction
    return PBSCalibration(t_hh=1 - e, t_hv=0.0, r_hh=e, r_hv=0.0, t_vv=e, t_vh=0.0, r_vv=1 - e, r_vh=0.0)


@dataclass(frozen=True)
class ModeState:
    """Complex amplitudes over ``MODE_LABELS`` (path x polarization)."""

    amplitudes: np.ndarray

    @classmethod
    def empty(cls) -> "ModeState":
        return cls(np.zeros(len(MODE_LABELS), dtype=complex))

    def index(self, path: str, pol: str) -> int:
        return MODE_LABELS.index((path, pol))

    def jones(self, path: str) -> JonesVector:
        i = self.index(path, "H")
        return JonesVector(self.amplitudes[i], self.amplitudes[i + 1])

    def with_jones(self, path: str, vec: JonesVector) -> "ModeState":
        amps = self.amplitudes.copy()
        i = self.index(path, "H")
        amps[i:i + 2] = vec.as_array()
        return ModeState(amps)

    def power(self, path: str) -> float:
        return self.jones(path).norm2

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def support(self, tol: float = 0.0) -> set[str]:
        return {p for p in PATHS if self.power(p) > tol}


@dataclass(frozen=True)
class InterferometerConfig:
    """Settings of every adjustable element.

    ``wp2_angle`` of ``None`` means the input is passed to PBS2 unchanged.
    ``path_phase_delta`` (radians) is applied to arm A.
    """

    wp2_angle: float | None = None
    wp3_inserted: bool = False
    wp4_angle: float = 45.0
    wp6_angle: float = 22.5
    path_phase_delta: float = 0.0
    pbs2: PBSModel = field(default_factory=ideal_pbs)
    pbs3: PBSModel = field(default_factory=ideal_pbs)
    pbs5: PBSModel = field(default_factory=ideal_pbs)
    pbs6: PBSModel = field(default_factory=ideal_pbs)
    model_tag: str = "ideal"

    @property
    def pbs_models(self) -> dict[str, PBSModel]:
        return {"PBS2": self.pbs2, "PBS3": self.pbs3, "PBS5": self.pbs5, "PBS6": self.pbs6}

    def prepared_for(self, alpha: float) -> "InterferometerConfig":
        """Same settings with WP2 preparing psi+ at ``alpha`` and WP3 removed."""
        return replace(self, wp2_angle=check_alpha(alpha) / 2.0, wp3_inserted=False)

    def kernel_args(self):
        return (
            self.pbs2.matrix, self.pbs3.matrix, self.pbs5.matrix, self.pbs6.matrix,
            half_waveplate(self.wp6_angle).matrix,
        )


def ideal_config(**kw) -> InterferometerConfig:
    return InterferometerConfig(model_tag="ideal", **kw)


def calibrated_config(cal: PBSCalibration = MEASURED_CALIBRATION,
                      pbs6: PBSModel | None = None, **kw) -> InterferometerConfig:
    """PBS2, PBS3 and PBS5 built from ``cal``; PBS6 a high-extinction Wollaston."""
    model = calibrated_pbs(cal)
    if pbs6 is None:
        pbs6 = calibrated_pbs(wollaston_calibration())
    return InterferometerConfig(pbs2=model, pbs3=model, pbs5=model, pbs6=pbs6, model_tag="calibrated", **kw)


@dataclass(frozen=True)
class DetectionProbabilities:
    p_pd1: float
    p_pd2: float
    p_pd3: float
    p_lost: float = 0.0

    @property
    def total(self) -> float:
        return self.p_pd1 + self.p_pd2 + self.p_pd3

    def as_array(self) -> np.ndarray:
        return np.array([self.p_pd1, self.p_pd2, self.p_pd3])


def prepare(input: JonesVector, config: InterferometerConfig) -> JonesVector:
    if not input.is_normalized():
        raise DomainError(f"input state is not normalized (norm^2 = {input.norm2!r})")
    state = input
    if config.wp2_angle is not None:
        state = half_waveplate(config.wp2_angle).apply(state)
    if config.wp3_inserted:
        state = half_waveplate(WP3_AXIS).apply(state)
    return state


def trace(input: JonesVector, config: InterferometerConfig) -> list[tuple[str, ModeState]]:
    """Mode state after each stage, computed element by element.

    This walks the component objects directly and is independent of the
    compiled kernels used by :func:`propagate`.
    """
    st = ModeState.empty().with_jones("input", prepare(input, config))
    stages = [("input", st)]

    arm_a, arm_b = config.pbs2.apply(st.jones("input"))
    st = st.with_jones("input", JonesVector(0, 0)).with_jones("armA", arm_a).with_jones("armB", arm_b)
    stages.append(("PBS2", st))

    to_pd3, through = config.pbs3.apply(half_waveplate(config.wp4_angle).apply(st.jones("armA")))
    st = st.with_jones("pd3", to_pd3).with_jones("armA", through)
    stages.append(("WP4+PBS3", st))

    ph = np.exp(1j * config.path_phase_delta)
    st = st.with_jones("armA", JonesVector(through.v * ph, through.h * ph))
    stages.append(("relabel+phase", st))

    common, dump = config.pbs5.apply(st.jones("armA"), st.jones("armB"))
    zero = JonesVector(0, 0)
    st = st.with_jones("armA", zero).with_jones("armB", zero).with_jones("dump", dump)
    common = half_waveplate(config.wp6_angle).apply(common)
    pd1, pd2 = config.pbs6.apply(common)
    st = st.with_jones("pd1", pd1).with_jones("pd2", pd2)
    stages.append(("PBS5+WP6+PBS6", st))
    return stages


def propagate(input: JonesVector, config: InterferometerConfig) -> DetectionProbabilities:
    e = prepare(input, config).as_array()[None, :]
    p = kernels.circuit_probs(e, *config.kernel_args(), config.wp4_angle, config.path_phase_delta)[0]
    return DetectionProbabilities(*(float(x) for x in p))


@dataclass(frozen=True)
class AlignmentResult:
    config: InterferometerConfig
    residual: float
    converged: bool
    passes: int


def align_many(alphas, config: InterferometerConfig) -> list[AlignmentResult]:
    """Align the interferometer independently at each ``alpha``.

    For each angle, WP4 and the path phase are chosen to minimise the PD2
    signal with psi+ at the input: coarse grid (1 degree by 0.05 rad), then
    alternating golden-section refinement of each axis. Among equally good
    minima the smallest WP4 angle wins.
    """
    alphas = [check_alpha(a) for a in alphas]
    if not alphas:
        return []
    cfgs = [config.prepared_for(a) for a in alphas]
    E = np.array([prepare(SOURCE, c).as_array() for c in cfgs])
    phi, delta, value, conv, passes = kernels.align_batch(E, *config.kernel_args())
    return [
        AlignmentResult(
            replace(c, wp4_angle=float(phi[k]), path_phase_delta=float(delta[k])),
            float(value[k]), bool(conv[k]), int(passes[k]),
        )
        for k, c in enumerate(cfgs)
    ]


def align(alpha: float, config: InterferometerConfig) -> InterferometerConfig:
    """Return ``config`` with WP4 and path phase set for minimum PD2 signal.

    Raises
    ------
    ConvergenceError
        If the refinement stops moving only after the pass limit.
    """
    (res,) = align_many([alpha], config)
    if not res.converged:
        raise ConvergenceError(
            f"alignment at alpha={alpha} did not converge in {res.passes} passes",
            {"alpha": alpha, "wp4_angle": res.config.wp4_angle,
             "path_phase_delta": res.config.path_phase_delta,
             "p_pd2": res.residual, "passes": res.passes},
        )
    return res.config


def run_pair(alpha: float, config: InterferometerConfig) -> tuple[DetectionProbabilities, DetectionProbabilities]:
    """Probabilities for psi+ and then psi- through one aligned configuration.

    The psi- run differs from the psi+ run only by inserting WP3.
    """
    alpha = check_alpha(alpha)
    if config.wp2_angle is None:
        config = replace(config, wp2_angle=alpha / 2.0)
    elif abs(config.wp2_angle - alpha / 2.0) > 1e-12:
        raise DomainError(f"config prepares alpha={2 * config.wp2_angle}, not {alpha}")
    plus = propagate(SOURCE, replace(config, wp3_inserted=False))
    minus = propagate(SOURCE, replace(config, wp3_inserted=True))
    return plus, minus


def error_rates(alpha: float, plus: DetectionProbabilities, minus: DetectionProbabilities):
    """PD2 signal for psi+ and PD1 signal for psi-, over all three outcomes.

    At ``alpha == 0`` the two states coincide and ``(None, None)`` is returned.
    """
    if alpha == 0:
        return None, None
    return plus.p_pd2, minus.p_pd1
