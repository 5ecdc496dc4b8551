"""Leader-follower attack best responses against a committed measurement.

The detector moves first and commits to a projective measurement; the
attacker then minimizes detection probability plus a relative-entropy
distortion price on each hypothesis.  The null hypothesis is never worth
distorting, and the alternative's optimum is a closed-form spectral
exponential tilt of the clean product state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .analysis import relative_entropy
from .detector import ProjectiveEffect
from .errors import DimensionCapExceeded, DomainError, ShapeMismatch
from .qmat import (
    DEFAULT_DIMENSION_CAP,
    DensityOperator,
    HermitianOperator,
    as_matrix,
    eig_hermitian,
    matrix_log,
    tensor_power,
)

#: Default spectral floor for logs of rank-deficient states.
DEFAULT_LOG_FLOOR = 1e-18

#: Attack-off sentinel: an infinite distortion price pins the attacker to the
#: clean states exactly.
ATTACK_OFF = math.inf


class CompletenessCheck(NamedTuple):
    ok: bool
    residual: float


@dataclass(frozen=True)
class AttackConfig:
    """Distortion price base ``lam`` with the price schedule ``beta(n) = lam**n``.

    ``lam = 0`` is a distortion-free baseline, not an unbounded attack: with
    ``attack_off_at_zero`` (the default) it maps to the ``ATTACK_OFF``
    sentinel and the best responses return the clean products exactly.  The
    divergent reading (a zero price buying arbitrary distortion) is rejected;
    disabling the flag makes ``beta`` return 0, which downstream operations
    refuse with ``DomainError``.
    """

    lam: float
    attack_off_at_zero: bool = True

    def __post_init__(self):
        if self.lam < 0:
            raise DomainError(f"distortion price base must be >= 0, got {self.lam}")


class KrausChannel:
    """Channel given by a nonempty list of same-dimension operator matrices."""

    __slots__ = ("kraus_ops",)

    def __init__(self, kraus_ops):
        mats = tuple(np.asarray(e) for e in kraus_ops)
        if not mats:
            raise ShapeMismatch("a channel needs at least one operator")
        d = mats[0].shape
        if len(d) != 2 or d[0] != d[1] or any(m.shape != d for m in mats):
            raise ShapeMismatch("all channel operators must be square with equal shape")
        self.kraus_ops = mats

    @property
    def dim(self) -> int:
        return self.kraus_ops[0].shape[0]

    def __repr__(self) -> str:
        return f"KrausChannel(dim={self.dim}, n_ops={len(self.kraus_ops)})"


def beta(cfg: AttackConfig, n: int) -> float:
    """Distortion price at n observations: ``lam**n``, or ``ATTACK_OFF`` at zero."""
    if n < 1:
        raise DomainError(f"beta requires n >= 1, got {n}")
    if cfg.lam == 0.0:
        return ATTACK_OFF if cfg.attack_off_at_zero else 0.0
    return float(cfg.lam) ** n


def _kron_sum(local: np.ndarray, n: int) -> np.ndarray:
    # sum_i I x .. x local x .. x I over n slots
    d = local.shape[0]
    total = np.zeros((d**n, d**n), dtype=local.dtype)
    for i in range(n):
        term = np.kron(np.eye(d**i, dtype=local.dtype), local)
        term = np.kron(term, np.eye(d ** (n - 1 - i), dtype=local.dtype))
        total += term
    return total


def attack_exponent(
    rho1: DensityOperator,
    effect: ProjectiveEffect,
    beta_n: float,
    n: int,
    *,
    log_floor: float = DEFAULT_LOG_FLOOR,
    cap: int = DEFAULT_DIMENSION_CAP,
) -> HermitianOperator:
    """Exponent operator of the attacker's optimal tilt.

    Assembled as the sum of single-copy log factors minus the scaled
    measurement: summing local logs equals logging the full Kronecker power
    for product states, but avoids flooring spurious Kronecker round-off.
    """
    if beta_n <= 0:
        raise DomainError(f"distortion price must be > 0, got {beta_n}")
    d = rho1.dim
    if d**n > cap:
        raise DimensionCapExceeded(f"dim {d}^{n} = {d**n} exceeds the dimension cap {cap}")
    if effect.dim != d**n:
        raise ShapeMismatch(f"effect dim {effect.dim} does not match product dim {d**n}")
    local_log = matrix_log(rho1, floor=log_floor).mat
    exponent = _kron_sum(local_log, n)
    if not math.isinf(beta_n):
        exponent = exponent - effect.mat / beta_n
    return HermitianOperator(exponent)


def best_response_rho1(
    rho1: DensityOperator,
    effect: ProjectiveEffect,
    beta_n: float,
    n: int,
    *,
    log_floor: float = DEFAULT_LOG_FLOOR,
    cap: int = DEFAULT_DIMENSION_CAP,
) -> DensityOperator:
    """Attacker's optimal distortion of the alternative hypothesis.

    The normalized spectral exponential of the exponent operator.  Under
    ``ATTACK_OFF`` the clean n-fold product is returned exactly (same
    computation path as the clean state, zero residual).
    """
    if beta_n <= 0:
        raise DomainError(f"distortion price must be > 0, got {beta_n}")
    if math.isinf(beta_n):
        return DensityOperator(tensor_power(rho1, n, cap), check=False)
    exponent = attack_exponent(rho1, effect, beta_n, n, log_floor=log_floor, cap=cap)
    dec = eig_hermitian(exponent)
    weights = np.exp(dec.eigenvalues - dec.eigenvalues.max())
    weights /= weights.sum()
    mat = (dec.vectors * weights) @ dec.vectors.conj().T
    return DensityOperator(mat, check=False)


def best_response_rho0(
    rho0: DensityOperator, n: int, cap: int = DEFAULT_DIMENSION_CAP
) -> DensityOperator:
    """Attacker's optimal null-hypothesis state: the clean product, untouched.

    Distorting the null only buys entropy cost without lowering the detection
    term, so the exact Kronecker power is optimal for every price.
    """
    return DensityOperator(tensor_power(rho0, n, cap), check=False)


def attacker_objective(
    rho1n,
    rho0n,
    effect: ProjectiveEffect,
    rho1_clean_n,
    rho0_clean_n,
    beta_n: float,
) -> float:
    """Detection probability plus priced distortion entropies.

    ``Tr(P rho1n) + beta_n * S(rho1n || clean1) + beta_n * S(rho0n || clean0)``;
    returns ``math.inf`` when either entropy term has a support violation.
    At the clean states the entropy terms vanish and the objective equals the
    clean detection probability exactly.
    """
    m1 = as_matrix(rho1n)
    if effect.dim != m1.shape[0]:
        raise ShapeMismatch(f"effect dim {effect.dim} does not match state dim {m1.shape[0]}")
    detect = float(np.real(np.einsum("ij,ji->", effect.mat, m1)))
    total = detect
    for state, clean in ((rho1n, rho1_clean_n), (rho0n, rho0_clean_n)):
        s = relative_entropy(state, clean)
        if math.isinf(s):
            return math.inf
        if math.isinf(beta_n):
            # numerically-zero entropy is free even at an infinite price
            if abs(s) > 1e-12:
                return math.inf
        elif s != 0.0:
            total += beta_n * s
    return total


def verify_stationarity(
    rho1_star: DensityOperator,
    effect: ProjectiveEffect,
    rho1_clean_n: DensityOperator,
    beta_n: float,
    directions: int,
    *,
    step: float = 1e-5,
    support_cutoff: float = 1e-3,
    seed: int = 0,
) -> float:
    """Largest absolute directional derivative of the attacker objective.

    Samples random traceless Hermitian directions supported on the
    eigenspace of ``rho1_star`` with eigenvalues above ``support_cutoff``
    times the largest (directions touching the positive-semidefinite
    boundary have one-sided derivatives and are excluded), and evaluates
    central finite differences of the objective along the trace-renormalized,
    eigenvalue-clamped perturbed state.  Small return values certify
    first-order optimality of the supplied state.
    """
    if beta_n <= 0 or math.isinf(beta_n):
        raise DomainError(f"stationarity check needs a finite price > 0, got {beta_n}")
    if directions < 1:
        raise DomainError(f"need at least one direction, got {directions}")
    dec = eig_hermitian(rho1_star)
    keep = dec.eigenvalues > support_cutoff * float(dec.eigenvalues.max())
    r = int(keep.sum())
    if r < 2:
        raise DomainError(
            f"support dimension {r} admits no traceless direction "
            f"(cutoff {support_cutoff:g})"
        )
    basis = dec.vectors[:, keep]
    complex_field = np.iscomplexobj(rho1_star.mat)
    rng = np.random.default_rng(seed)

    def objective(mat: np.ndarray) -> float:
        detect = float(np.real(np.einsum("ij,ji->", effect.mat, mat)))
        return detect + beta_n * relative_entropy(mat, rho1_clean_n)

    star = rho1_star.mat
    worst = 0.0
    for _ in range(directions):
        g = rng.standard_normal((r, r))
        if complex_field:
            g = g + 1j * rng.standard_normal((r, r))
        h_small = (g + g.conj().T) / 2
        h_small -= np.eye(r) * (np.trace(h_small).real / r)
        h_small /= np.linalg.norm(h_small)
        h = basis @ h_small @ basis.conj().T
        values = []
        for t in (step, -step):
            perturbed = star + t * h
            dd = eig_hermitian(perturbed)
            w = np.maximum(dd.eigenvalues, 0.0)
            w /= w.sum()
            values.append(objective((dd.vectors * w) @ dd.vectors.conj().T))
        worst = max(worst, abs(values[0] - values[1]) / (2 * step))
    return worst


def kraus_completeness_check(ch: KrausChannel, *, convention: str = "ee_dagger") -> CompletenessCheck:
    """Whether the channel operators satisfy the completeness sum.

    The default ``"ee_dagger"`` convention checks ``sum_k E_k E_k^dag = I``;
    ``"dagger_ee"`` checks the trace-preserving form
    ``sum_k E_k^dag E_k = I``.  The two agree on normal operators.  The
    residual is the max-entry deviation from the identity.
    """
    if convention not in ("ee_dagger", "dagger_ee"):
        raise DomainError(f"unknown completeness convention {convention!r}")
    d = ch.dim
    total = np.zeros((d, d), dtype=complex)
    for e in ch.kraus_ops:
        if convention == "ee_dagger":
            total += e @ e.conj().T
        else:
            total += e.conj().T @ e
    residual = float(np.abs(total - np.eye(d)).max())
    return CompletenessCheck(ok=residual <= 1e-9, residual=residual)
