"""Quantum-radar spoofing scenario construction.

Target detection from reflected photonic states against thermal background
light: the null hypothesis is a noise mixture of the vacuum and a background
state, the alternative adds a reflected target component.  States live in a
photon-number-truncated space of dimension ``K + 1``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .detector import HypothesisPair, ThresholdSchedule
from .errors import ConfigError
from .qmat import DEFAULT_DIMENSION_CAP, DensityOperator, StateVector

#: Reference-scenario defaults.
DEFAULT_NOISE_LEVEL = 0.4
DEFAULT_NOISE_PHOTONS = 1.0
DEFAULT_TARGET_PHOTONS = 2.0
DEFAULT_REFLECTIVITY = 0.8
DEFAULT_TRUNCATION = 8
DEFAULT_LAMBDAS = (0.0, 0.25, 0.5, 1.0, 2.0)
DEFAULT_THRESHOLD = ThresholdSchedule(0.7, 1.5, 1.0, 1.0)

BASIS_MODES = ("number", "coherent")


@dataclass(frozen=True)
class ScenarioConfig:
    """Radar scenario parameters plus the sweep grid.

    ``k`` and ``l`` label the noise and target states by mean photon number.
    In ``coherent`` mode (the default) the labelled states are truncated
    coherent states of amplitude ``sqrt(k)`` and ``sqrt(l)``; ``number`` mode
    reads the labels as photon-number basis states instead, which makes both
    hypotheses diagonal and therefore exactly solvable by classical
    likelihood-ratio enumeration.
    """

    K: int = DEFAULT_TRUNCATION
    N_B: float = DEFAULT_NOISE_LEVEL
    k: float = DEFAULT_NOISE_PHOTONS
    l: float = DEFAULT_TARGET_PHOTONS
    x: float = DEFAULT_REFLECTIVITY
    basis_mode: str = "coherent"
    threshold: ThresholdSchedule = DEFAULT_THRESHOLD
    lambdas: tuple = DEFAULT_LAMBDAS
    n_max: int = 3
    dimension_cap: int = DEFAULT_DIMENSION_CAP
    eigen_tolerance: float = 1e-9
    log_floor: float = 1e-18

    def __post_init__(self):
        if self.K < 1:
            raise ConfigError(f"K must be a positive integer, got {self.K}")
        if not 0.0 <= self.N_B <= 1.0:
            raise ConfigError(f"N_B must lie in [0, 1], got {self.N_B}")
        if not 0.0 <= self.x <= 1.0:
            raise ConfigError(f"x must lie in [0, 1], got {self.x}")
        if self.k < 0 or self.l < 0:
            raise ConfigError(f"k and l must be >= 0, got k={self.k}, l={self.l}")
        if self.basis_mode not in BASIS_MODES:
            raise ConfigError(f"basis_mode must be one of {BASIS_MODES}, got {self.basis_mode!r}")
        if self.n_max < 1:
            raise ConfigError(f"n_max must be >= 1, got {self.n_max}")
        if self.dimension_cap < 1:
            raise ConfigError(f"dimension_cap must be >= 1, got {self.dimension_cap}")
        if not isinstance(self.threshold, ThresholdSchedule):
            raise ConfigError("threshold must be a ThresholdSchedule")
        if any(lam < 0 for lam in self.lambdas):
            raise ConfigError(f"lambdas must all be >= 0, got {self.lambdas}")
        if self.eigen_tolerance <= 0 or self.log_floor <= 0:
            raise ConfigError("eigen_tolerance and log_floor must be > 0")
        # number states are exact whenever the label fits the truncation, so
        # the headroom warning only concerns coherent amplitudes
        if self.basis_mode == "coherent" and max(self.k, self.l) > self.K / 2:
            warnings.warn(
                f"mean photon number {max(self.k, self.l)} exceeds K/2 = {self.K / 2}; "
                "the truncated representation may be inaccurate",
                stacklevel=2,
            )
        if self.dim**self.n_max > self.dimension_cap:
            warnings.warn(
                f"dim {self.dim}^{self.n_max} = {self.dim**self.n_max} exceeds the cap "
                f"{self.dimension_cap}; sweeps will skip the over-budget depths",
                stacklevel=2,
            )

    @property
    def dim(self) -> int:
        return self.K + 1


def validate_scenario(cfg: ScenarioConfig) -> None:
    """Hard validation of mode/parameter compatibility and dimension budget.

    Field-range rules already hold (enforced on construction); this adds the
    rules that construction only warns about, raising ``ConfigError`` naming
    the first failing rule.
    """
    if cfg.basis_mode == "number":
        for name, value in (("k", cfg.k), ("l", cfg.l)):
            if not float(value).is_integer():
                raise ConfigError(f"{name} must be integer in number mode, got {value}")
            if value > cfg.K:
                raise ConfigError(f"{name} = {value} exceeds the truncation K = {cfg.K}")
    total = cfg.dim**cfg.n_max
    if total > cfg.dimension_cap:
        raise ConfigError(
            f"dimension budget exceeded: {cfg.dim}^{cfg.n_max} = {total} "
            f"> cap {cfg.dimension_cap}"
        )


def coherent_state(zeta: float, K: int) -> StateVector:
    """Truncated coherent state with amplitude ``zeta`` and at most K photons.

    Amplitudes are proportional to ``zeta**i / sqrt(i!)``; the normalization
    constant is fixed numerically, which is the correct normalizer for the
    truncated expansion regardless of any closed-form prefactor.
    """
    if K < 0:
        raise ConfigError(f"K must be >= 0, got {K}")
    amps = np.empty(K + 1)
    amps[0] = 1.0
    for i in range(1, K + 1):
        amps[i] = amps[i - 1] * zeta / math.sqrt(i)
    return StateVector(amps)


def _labelled_state(value: float, cfg: ScenarioConfig) -> StateVector:
    if cfg.basis_mode == "number":
        if not float(value).is_integer():
            raise ConfigError(f"k and l must be integer in number mode, got {value}")
        idx = int(value)
        if idx > cfg.K:
            raise ConfigError(f"number state {idx} exceeds the truncation K = {cfg.K}")
        amps = np.zeros(cfg.dim)
        amps[idx] = 1.0
        return StateVector(amps)
    return coherent_state(math.sqrt(value), cfg.K)


def build_hypotheses(cfg: ScenarioConfig) -> HypothesisPair:
    """Density operators for the target-absent and target-present hypotheses.

    The null is ``(1 - N_B)|vac><vac| + N_B |k><k|`` and the alternative is
    ``(1 - x) * null + x |l><l|`` as an exact operator identity, with the
    labelled kets resolved per ``basis_mode``.
    """
    vac = np.zeros(cfg.dim)
    vac[0] = 1.0
    vac_proj = np.outer(vac, vac)
    noise = _labelled_state(cfg.k, cfg)
    target = _labelled_state(cfg.l, cfg)
    rho0 = (1.0 - cfg.N_B) * vac_proj + cfg.N_B * noise.projector().mat
    rho1 = (1.0 - cfg.x) * rho0 + cfg.x * target.projector().mat
    return HypothesisPair(rho0=DensityOperator(rho0), rho1=DensityOperator(rho1))


def default_scenario() -> ScenarioConfig:
    """Reference scenario: the radar defaults with the deepest sweep the cap allows."""
    dim = DEFAULT_TRUNCATION + 1
    n_max = 1
    while dim ** (n_max + 1) <= DEFAULT_DIMENSION_CAP:
        n_max += 1
    return ScenarioConfig(n_max=n_max)
