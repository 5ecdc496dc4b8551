"""Information-theoretic and asymptotic diagnostics.

Relative entropy, trace-norm (single-state Wasserstein) distances, a
robustness check against a distortion budget, product-structure tests for
eigenvectors, and empirical error-exponent estimation from repeated
observation sweeps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import AllErrorsZero, DomainError, InsufficientData, ShapeMismatch
from .qmat import (
    DensityOperator,
    HermitianOperator,
    StateVector,
    as_matrix,
    eig_hermitian,
    partial_trace,
    tensor_product,
    trace_norm,
)

#: Eigenvalues of the reference state at or below this are treated as its kernel.
KERNEL_TOL = 1e-12

#: If the lead state puts more than this much mass on the reference kernel,
#: the relative entropy is +inf.
SUPPORT_MASS_TOL = 1e-10

#: Second singular values above this fraction of the first flag an
#: entangled split; two orders above eigensolver residual and far below any
#: genuine Schmidt coefficient in the scenarios tested.
PRODUCT_RANK_RTOL = 1e-9

_CLUSTER_RTOL = 1e-8
_REFINE_SEED = 20260


class RobustnessCheck(NamedTuple):
    ok: bool
    margin: float


@dataclass(frozen=True)
class SeparabilityReport:
    """Product-structure verdict for every eigenvector of an operator.

    ``per_vector`` holds ``(eigenvalue, is_product, worst_schmidt_residual)``
    in descending eigenvalue order.  When every eigenvector is product, the
    report also carries the single-factor marginals of the reconstructed
    state and the trace distance between that state and the tensor product
    of its marginals (the factorization certificate, which can legitimately
    fail even with product eigenvectors: factorizing the reconstruction
    additionally needs the spectrum to combine additively across factors).
    """

    all_product: bool
    per_vector: list[tuple[float, bool, float]]
    factors: list[HermitianOperator] | None = None
    reconstruction_distance: float | None = None


@dataclass(frozen=True)
class DecayFit:
    """Least-squares fit of ``log(error)`` against n."""

    slope: float
    intercept: float
    r_squared: float
    points: list[tuple[int, float]]
    dropped: list[int]


def relative_entropy(nu1, nu0) -> float:
    """Relative entropy ``Tr(nu1 (ln nu1 - ln nu0))`` in nats.

    Returns ``math.inf`` when ``nu1`` puts more than ``SUPPORT_MASS_TOL``
    mass on the numerical kernel of ``nu0``.  Nonnegative by Klein's
    inequality, zero when the states coincide.
    """
    m1 = as_matrix(nu1)
    m0 = as_matrix(nu0)
    if m1.shape != m0.shape:
        raise ShapeMismatch(f"state dimensions differ: {m1.shape[0]} vs {m0.shape[0]}")
    dec0 = eig_hermitian(m0)
    w0 = dec0.eigenvalues
    v0 = dec0.vectors
    diag_in_0 = np.real(np.einsum("ij,ji->i", v0.conj().T @ m1, v0))
    kernel = w0 <= KERNEL_TOL
    if float(diag_in_0[kernel].sum()) > SUPPORT_MASS_TOL:
        return math.inf
    w1 = np.linalg.eigvalsh(m1)
    pos = w1 > 0.0
    entropy_term = float(np.sum(w1[pos] * np.log(w1[pos])))
    support = ~kernel
    cross_term = float(np.sum(np.maximum(diag_in_0[support], 0.0) * np.log(w0[support])))
    return entropy_term - cross_term


def wasserstein_single(rho_prime, rho) -> float:
    """Trace-norm distance between two states.

    This is the single-state specialization of the order-1 transport
    distance: with one distorted state and one reference there is nothing to
    optimize over, and the distance collapses to ``||rho' - rho||_1``.
    """
    m1 = as_matrix(rho_prime)
    m0 = as_matrix(rho)
    if m1.shape != m0.shape:
        raise ShapeMismatch(f"state dimensions differ: {m1.shape[0]} vs {m0.shape[0]}")
    return trace_norm(m1 - m0)


def robustness_check(rho_attacked, rho_clean, eps: float) -> RobustnessCheck:
    """Whether the distortion stayed within tolerance ``eps``.

    The check is on the output states (distance at most ``eps``), the one
    consequence of a norm-bounded distortion channel that the downstream
    error bounds actually use.
    """
    if eps < 0:
        raise DomainError(f"tolerance eps must be >= 0, got {eps}")
    dist = wasserstein_single(rho_attacked, rho_clean)
    return RobustnessCheck(ok=dist <= eps, margin=eps - dist)


def product_test(v, dims) -> tuple[bool, float]:
    """Test whether a pure state factorizes across the given tensor factors.

    Splits the amplitude vector factor by factor, checking each
    (first factor) x (rest) matricization for numerical rank one via its
    second singular value, then recursing on the dominant rest component.
    Returns ``(is_product, residual)`` where the residual is the largest
    second singular value encountered.
    """
    amps = v.amplitudes if isinstance(v, StateVector) else np.asarray(v)
    dims = [int(d) for d in dims]
    if amps.ndim != 1 or int(np.prod(dims)) != amps.size:
        raise ShapeMismatch(f"factor dims {dims} do not multiply to vector length {amps.size}")
    residual = 0.0
    is_product = True
    vec = amps
    for d in dims[:-1]:
        m = vec.reshape(d, vec.size // d)
        _, s, vh = np.linalg.svd(m, full_matrices=False)
        if s.size > 1:
            residual = max(residual, float(s[1]))
            if s[1] > PRODUCT_RANK_RTOL * s[0]:
                is_product = False
        vec = s[0] * vh[0].conj()
    return is_product, residual


def _apply_local(block: np.ndarray, dims: list[int], j: int, g: np.ndarray) -> np.ndarray:
    # (I x .. x g x .. x I) applied to each column of `block`.
    k = block.shape[1]
    t = block.T.reshape([k] + dims)
    t = np.moveaxis(t, 1 + j, -1)
    t = t @ g.T
    t = np.moveaxis(t, -1, 1 + j)
    return t.reshape(k, -1).T


def _refine_degenerate_clusters(dec, dims: list[int]):
    """Rotate eigenvectors inside degenerate clusters toward product form.

    A degenerate eigenspace has no preferred basis, so the raw solver output
    can mix product eigenvectors into entangled combinations even when a
    product eigenbasis exists (Kronecker powers always have this swap
    degeneracy).  A generic local-sum observable restricted to the cluster
    is diagonal in the product basis whenever one exists with pairwise
    different local labels, so its eigenvectors recover that basis.
    """
    w = dec.eigenvalues
    v = np.array(dec.vectors)
    scale = max(1.0, float(np.abs(w).max()))
    rng = np.random.default_rng(_REFINE_SEED)
    locals_ = []
    for d in dims:
        g = rng.standard_normal((d, d))
        locals_.append((g + g.T) / 2)
    start = 0
    while start < w.size:
        stop = start + 1
        while stop < w.size and abs(w[stop] - w[start]) <= _CLUSTER_RTOL * scale:
            stop += 1
        if stop - start > 1:
            block = v[:, start:stop]
            obs = np.zeros((block.shape[1], block.shape[1]), dtype=block.dtype)
            for j, g in enumerate(locals_):
                gb = _apply_local(block, dims, j, g)
                obs += block.conj().T @ gb
            obs = (obs + obs.conj().T) / 2
            _, u = np.linalg.eigh(obs)
            v[:, start:stop] = block @ u
        start = stop
    return w, v


def separability_report(op, dims, *, reconstruction: str = "exp") -> SeparabilityReport:
    """Run ``product_test`` on every eigenvector of ``op``.

    When all eigenvectors are product, the report additionally reconstructs
    a state from ``op`` — ``exp(op)/Tr(exp(op))`` for ``reconstruction="exp"``
    (the operator is an exponent), or ``op/Tr(op)`` for ``"trace"`` (the
    operator is already density-like) — takes its single-factor marginals,
    and records the trace distance between the state and the tensor product
    of the marginals.
    """
    if reconstruction not in ("exp", "trace"):
        raise DomainError(f"unknown reconstruction mode {reconstruction!r}")
    m = as_matrix(op)
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != m.shape[0]:
        raise ShapeMismatch(f"factor dims {dims} do not multiply to operator dim {m.shape[0]}")
    dec = eig_hermitian(m)
    w, v = _refine_degenerate_clusters(dec, dims)
    per_vector = []
    for j in range(w.size):
        ok, resid = product_test(v[:, j], dims)
        per_vector.append((float(w[j]), bool(ok), float(resid)))
    all_product = all(ok for _, ok, _ in per_vector)
    factors = None
    distance = None
    if all_product:
        if reconstruction == "exp":
            weights = np.exp(w - w.max())
            weights /= weights.sum()
            state = (v * weights) @ v.conj().T
        else:
            tr = float(np.real(np.trace(m)))
            if tr <= 0:
                raise DomainError(f"trace reconstruction needs a positive trace, got {tr:.3e}")
            state = m / tr
        factors = [partial_trace(state, dims, keep=j) for j in range(len(dims))]
        product = factors[0]
        for f in factors[1:]:
            product = tensor_product(product, f)
        distance = trace_norm(state - product.mat)
    return SeparabilityReport(
        all_product=all_product,
        per_vector=per_vector,
        factors=factors,
        reconstruction_distance=distance,
    )


def decay_rate_fit(points) -> DecayFit:
    """Ordinary least squares of ``ln(error)`` against n.

    Non-positive errors are dropped (and recorded); at least three distinct
    n values with positive error are required.  The slope is the empirical
    per-observation log rate of the error.
    """
    kept = []
    dropped = []
    for n, err in points:
        n = int(n)
        if err > 0.0:
            kept.append((n, math.log(err)))
        else:
            dropped.append(n)
    if not kept and dropped:
        raise AllErrorsZero("every error value is zero; the decay exponent is -inf")
    if len({n for n, _ in kept}) < 3:
        raise InsufficientData(
            f"need >= 3 distinct n with positive error, got {len(kept)} usable points"
        )
    x = np.array([n for n, _ in kept], dtype=float)
    y = np.array([le for _, le in kept])
    design = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    slope, intercept = float(coef[0]), float(coef[1])
    resid = y - (slope * x + intercept)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot > 0.0:
        r_squared = max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    else:
        r_squared = 1.0 if ss_res <= 1e-24 else 0.0
    return DecayFit(
        slope=slope,
        intercept=intercept,
        r_squared=r_squared,
        points=kept,
        dropped=dropped,
    )
