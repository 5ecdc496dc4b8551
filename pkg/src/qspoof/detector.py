"""Optimal binary discrimination of repeated quantum observations.

Builds the risk-minimizing (Helstrom) projective measurement for n-fold
product hypotheses and evaluates its detection rate, false-alarm rate, and
weighted Bayesian risk.  The detector here is passive: its measurement is
designed from the clean hypothesis states only, never from whatever states
are actually delivered.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ShapeMismatch
from .qmat import (
    DEFAULT_DIMENSION_CAP,
    DensityOperator,
    HermitianOperator,
    StateVector,
    as_matrix,
    eig_hermitian,
    tensor_power,
)

#: Eigenvalues inside [-ZERO_TOL, ZERO_TOL] are excluded from the detection
#: projector, matching the strict positivity of the accept region and making
#: degenerate instances deterministic (equal hypotheses give the zero projector).
ZERO_TOL = 1e-12

_PROJECTOR_ATOL = 1e-9


@dataclass(frozen=True)
class ThresholdSchedule:
    """Four positive constants defining the decision threshold over n.

    The threshold at n observations is ``(c0bar*n + d0bar) / (c1bar*n + d1bar)``.
    The same four constants supply the risk weights: the miss weight is the
    threshold's numerator and the false-alarm weight its denominator, so the
    weight ratio miss/false-alarm reproduces the threshold value.
    """

    c0bar: float
    d0bar: float
    c1bar: float
    d1bar: float

    def __post_init__(self):
        for name in ("c0bar", "d0bar", "c1bar", "d1bar"):
            if getattr(self, name) <= 0:
                raise DomainError(f"threshold schedule constant {name} must be > 0")


@dataclass(frozen=True)
class HypothesisPair:
    """Null and alternative density operators over the same space."""

    rho0: DensityOperator
    rho1: DensityOperator

    def __post_init__(self):
        if self.rho0.dim != self.rho1.dim:
            raise ShapeMismatch(
                f"hypothesis dimensions differ: {self.rho0.dim} vs {self.rho1.dim}"
            )

    @property
    def dim(self) -> int:
        return self.rho0.dim


class ProjectiveEffect:
    """Orthogonal projector used as a two-outcome measurement effect."""

    __slots__ = ("op", "rank")

    def __init__(self, op, rank: int | None = None, *, check: bool = True):
        if not isinstance(op, HermitianOperator):
            op = HermitianOperator(op)
        tr = op.trace()
        if check:
            m = op.mat
            resid = float(np.abs(m @ m - m).max())
            if resid > _PROJECTOR_ATOL:
                raise DomainError(f"operator is not idempotent (|P^2 - P| = {resid:.3e})")
        if rank is None:
            rank = int(round(tr))
        if abs(tr - rank) > 0.5:
            raise DomainError(f"trace {tr:.6f} is not within 0.5 of rank {rank}")
        self.op = op
        self.rank = int(rank)

    @property
    def mat(self) -> np.ndarray:
        return self.op.mat

    @property
    def dim(self) -> int:
        return self.op.dim

    def __repr__(self) -> str:
        return f"ProjectiveEffect(dim={self.dim}, rank={self.rank})"


def threshold(sched: ThresholdSchedule, n: int) -> float:
    """Decision threshold at n observations."""
    if n < 1:
        raise DomainError(f"threshold requires n >= 1, got {n}")
    return (sched.c0bar * n + sched.d0bar) / (sched.c1bar * n + sched.d1bar)


def risk_weights(sched: ThresholdSchedule, n: int) -> tuple[float, float]:
    """Risk weights ``(c1n, c0n)`` at n observations.

    ``c1n = c0bar*n + d0bar`` weights the miss term, ``c0n = c1bar*n + d1bar``
    the false-alarm term.  Note the projector that actually minimizes the
    weighted risk uses ``c0n / c1n`` as its threshold, the reciprocal of
    ``threshold(sched, n)``; the two coincide only when the threshold is 1.
    """
    if n < 1:
        raise DomainError(f"risk weights require n >= 1, got {n}")
    return (sched.c0bar * n + sched.d0bar, sched.c1bar * n + sched.d1bar)


def helstrom_effect_from_states(
    rho1n: DensityOperator,
    rho0n: DensityOperator,
    tau: float,
    *,
    zero_tol: float = ZERO_TOL,
) -> ProjectiveEffect:
    """Projector onto the strictly positive eigenspace of ``rho1n - tau*rho0n``."""
    if tau <= 0:
        raise DomainError(f"threshold must be > 0, got {tau}")
    if rho1n.dim != rho0n.dim:
        raise ShapeMismatch(f"state dimensions differ: {rho1n.dim} vs {rho0n.dim}")
    dec = eig_hermitian(rho1n.mat - tau * rho0n.mat)
    sel = dec.eigenvalues > zero_tol
    d = rho1n.dim
    if not np.any(sel):
        zero = np.zeros((d, d), dtype=dec.vectors.dtype)
        return ProjectiveEffect(zero, rank=0, check=False)
    v = dec.vectors[:, sel]
    return ProjectiveEffect(v @ v.conj().T, rank=int(sel.sum()))


def helstrom_effect(
    h: HypothesisPair,
    n: int,
    tau: float,
    *,
    zero_tol: float = ZERO_TOL,
    cap: int = DEFAULT_DIMENSION_CAP,
) -> ProjectiveEffect:
    """Optimal measurement for n repeated observations at threshold ``tau``.

    Eigenvalues with magnitude at most ``zero_tol`` are excluded, so an
    exactly balanced instance (``rho1 = tau * rho0``) yields the zero
    projector.
    """
    rho1n = DensityOperator(tensor_power(h.rho1, n, cap), check=False)
    rho0n = DensityOperator(tensor_power(h.rho0, n, cap), check=False)
    return helstrom_effect_from_states(rho1n, rho0n, tau, zero_tol=zero_tol)


def _trace_product(a: np.ndarray, b: np.ndarray) -> float:
    # Tr(AB) without forming the full product.
    return float(np.real(np.einsum("ij,ji->", a, b)))


def rates(effect: ProjectiveEffect, rho1n, rho0n) -> tuple[float, float]:
    """Detection and false-alarm probabilities ``(Tr(P rho1), Tr(P rho0))``.

    Traces are clamped to [0, 1]; eigensolver round-off can produce
    probabilities like -1e-14, which is cosmetic noise rather than a logic
    fault.
    """
    m1 = as_matrix(rho1n)
    m0 = as_matrix(rho0n)
    if effect.dim != m1.shape[0] or effect.dim != m0.shape[0]:
        raise ShapeMismatch(
            f"dimension mismatch: effect {effect.dim}, states {m1.shape[0]} and {m0.shape[0]}"
        )
    p_d = min(max(_trace_product(effect.mat, m1), 0.0), 1.0)
    p_f = min(max(_trace_product(effect.mat, m0), 0.0), 1.0)
    return p_d, p_f


def bayes_risk(effect: ProjectiveEffect, h: HypothesisPair, n: int, sched: ThresholdSchedule) -> float:
    """Weighted sum of counterfactual miss and false-alarm rates.

    Both rates are evaluated on the clean n-fold product hypotheses: the
    passive detector's design never sees delivered (possibly distorted)
    states.
    """
    rho1n = tensor_power(h.rho1, n)
    rho0n = tensor_power(h.rho0, n)
    if effect.dim != rho1n.dim:
        raise ShapeMismatch(f"effect dim {effect.dim} does not match product dim {rho1n.dim}")
    c1n, c0n = risk_weights(sched, n)
    p_d = _trace_product(effect.mat, rho1n.mat)
    p_f = _trace_product(effect.mat, rho0n.mat)
    return c1n * (1.0 - p_d) + c0n * p_f


def decide(phi: StateVector, effect: ProjectiveEffect) -> float:
    """Probability of declaring the alternative on the received state."""
    if phi.dim != effect.dim:
        raise ShapeMismatch(f"state dim {phi.dim} does not match effect dim {effect.dim}")
    a = phi.amplitudes
    val = float(np.real(a.conj() @ (effect.mat @ a)))
    return min(max(val, 0.0), 1.0)
