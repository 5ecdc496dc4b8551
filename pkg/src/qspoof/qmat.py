"""Dense operator algebra on finite-dimensional Hilbert spaces.

Tensor products, partial traces, Hermitian spectral decompositions, and
spectral matrix functions (exp, log) over dense matrices.  Real inputs stay
real (symmetric) and complex inputs stay complex (Hermitian); either way the
algebra below treats them uniformly.  All values are immutable after
construction and every operation is a pure function of its inputs, so they
are safe to share across concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionCapExceeded,
    DomainError,
    ShapeMismatch,
)

#: Largest dense dimension the tensor machinery will materialize by default.
DEFAULT_DIMENSION_CAP = 4096

#: Tolerance for Hermiticity / PSD / trace checks on construction.
HERMITIAN_ATOL = 1e-10

_PHASE_TOL = 1e-12


def _as_1d(amplitudes) -> np.ndarray:
    a = np.asarray(amplitudes)
    if a.ndim != 1 or a.size == 0:
        raise ShapeMismatch(f"expected a nonempty 1-D amplitude sequence, got shape {a.shape}")
    dtype = np.complex128 if np.iscomplexobj(a) else np.float64
    return a.astype(dtype)


def _as_square(entries) -> np.ndarray:
    m = np.asarray(entries)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ShapeMismatch(f"expected a nonempty square matrix, got shape {m.shape}")
    dtype = np.complex128 if np.iscomplexobj(m) else np.float64
    return m.astype(dtype)


class StateVector:
    """Unit-norm vector of amplitudes; normalized on construction."""

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes):
        a = _as_1d(amplitudes)
        norm = float(np.linalg.norm(a))
        if norm == 0.0:
            raise DomainError("cannot normalize the zero vector into a state")
        a = a / norm
        a.setflags(write=False)
        self.amplitudes = a

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def projector(self) -> "HermitianOperator":
        """Rank-one projector onto this state."""
        return HermitianOperator(np.outer(self.amplitudes, self.amplitudes.conj()))

    def __repr__(self) -> str:
        return f"StateVector(dim={self.dim})"


class HermitianOperator:
    """Square matrix stored as its Hermitian part ``(A + A^dag) / 2``.

    Symmetrizing on construction keeps floating-point drift from repeated
    Kronecker products from breaking the eigensolver's assumptions.
    """

    __slots__ = ("mat",)

    def __init__(self, entries):
        m = _as_square(entries)
        m = (m + m.conj().T) / 2
        m.setflags(write=False)
        self.mat = m

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def trace(self) -> float:
        return float(np.real(np.trace(self.mat)))

    def __repr__(self) -> str:
        return f"HermitianOperator(dim={self.dim})"


class DensityOperator:
    """Hermitian, positive-semidefinite, unit-trace operator.

    Construction checks positivity up to ``HERMITIAN_ATOL`` (eigenvalues in
    ``[-1e-10, 0)`` are clamped to zero by spectral reconstruction, anything
    more negative is rejected) and requires the trace to equal 1 within the
    same tolerance.  ``check=False`` skips the PSD scan for callers that
    construct from operations that preserve positivity exactly (Kronecker
    products of density operators, normalized spectral exponentials).
    """

    __slots__ = ("op",)

    def __init__(self, op, *, check: bool = True):
        if not isinstance(op, HermitianOperator):
            op = HermitianOperator(op)
        tr = op.trace()
        if abs(tr - 1.0) > HERMITIAN_ATOL:
            raise DomainError(f"density operator trace {tr!r} is not 1 within {HERMITIAN_ATOL}")
        if check:
            w = np.linalg.eigvalsh(op.mat)
            wmin = float(w[0])
            if wmin < -HERMITIAN_ATOL:
                raise DomainError(
                    f"density operator has eigenvalue {wmin:.3e} below -{HERMITIAN_ATOL}"
                )
            if wmin < 0.0:
                dec = eig_hermitian(op)
                clamped = np.maximum(dec.eigenvalues, 0.0)
                op = HermitianOperator((dec.vectors * clamped) @ dec.vectors.conj().T)
        self.op = op

    @property
    def mat(self) -> np.ndarray:
        return self.op.mat

    @property
    def dim(self) -> int:
        return self.op.dim

    def __repr__(self) -> str:
        return f"DensityOperator(dim={self.dim})"


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues sorted descending with orthonormal eigenvectors as columns."""

    eigenvalues: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def state(self, j: int) -> StateVector:
        """Eigenvector ``j`` as a state."""
        return StateVector(self.vectors[:, j])

    def reconstruct(self) -> HermitianOperator:
        """Rebuild ``sum_j w_j |v_j><v_j|``."""
        return HermitianOperator((self.vectors * self.eigenvalues) @ self.vectors.conj().T)


def as_matrix(a) -> np.ndarray:
    """Raw matrix of a HermitianOperator, DensityOperator, or array-like."""
    if isinstance(a, DensityOperator):
        return a.op.mat
    if isinstance(a, HermitianOperator):
        return a.mat
    return _as_square(a)


def as_hermitian(a) -> HermitianOperator:
    if isinstance(a, DensityOperator):
        return a.op
    if isinstance(a, HermitianOperator):
        return a
    return HermitianOperator(a)


def tensor_product(a, b) -> HermitianOperator:
    """Kronecker product; dimensions multiply and traces stay multiplicative."""
    return HermitianOperator(np.kron(as_matrix(a), as_matrix(b)))


def tensor_power(a, n: int, cap: int = DEFAULT_DIMENSION_CAP) -> HermitianOperator:
    """n-fold Kronecker power of ``a``.

    Raises
    ------
    DimensionCapExceeded
        If ``dim(a) ** n`` exceeds ``cap``; dense eigendecomposition beyond
        the cap is not desk-scale.
    """
    if n < 1:
        raise DomainError(f"tensor power requires n >= 1, got {n}")
    m = as_matrix(a)
    d = m.shape[0]
    if d**n > cap:
        raise DimensionCapExceeded(f"dim {d}^{n} = {d**n} exceeds the dimension cap {cap}")
    out = m
    for _ in range(n - 1):
        out = np.kron(out, m)
    return HermitianOperator(out)


def partial_trace(a, dims, keep) -> HermitianOperator:
    """Trace out all tensor factors not listed in ``keep``.

    Parameters
    ----------
    a : operator over the full product space
    dims : sequence of factor dimensions whose product equals ``dim(a)``
    keep : int or iterable of factor indices to retain (order preserved);
        an empty ``keep`` reduces to the 1x1 matrix ``[[Tr(a)]]``.
    """
    m = as_matrix(a)
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims) or int(np.prod(dims)) != m.shape[0]:
        raise ShapeMismatch(f"factor dims {dims} do not multiply to operator dim {m.shape[0]}")
    if isinstance(keep, (int, np.integer)):
        keep = [int(keep)]
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ShapeMismatch(f"keep indices {keep} out of range for {len(dims)} factors")
    if not keep:
        return HermitianOperator([[np.trace(m)]])
    traced = [i for i in range(len(dims)) if i not in keep]
    resh = m.reshape(dims + dims)
    remaining = list(dims)
    for idx in sorted(traced, reverse=True):
        resh = np.trace(resh, axis1=idx, axis2=idx + len(remaining))
        remaining.pop(idx)
    d_out = int(np.prod(remaining))
    return HermitianOperator(resh.reshape(d_out, d_out))


def eig_hermitian(a) -> SpectralDecomposition:
    """Full spectral decomposition with deterministic ordering.

    Eigenvalues are sorted descending; exact ties are ordered by the
    eigenvectors' lexicographic entry order; each eigenvector's global phase
    is fixed by making its first non-negligible amplitude positive real.
    """
    m = as_matrix(a)
    if np.iscomplexobj(m) and not np.any(m.imag):
        m = m.real  # real-symmetric solver path; same spectrum, half the work
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        diag = float(np.abs(m).max()) if m.size else 0.0
        raise ConvergenceFailure(
            f"eigensolver did not converge (dim={m.shape[0]}, max|entry|={diag:.6e})"
        ) from exc
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    for j in range(v.shape[1]):
        col = v[:, j]
        nz = np.flatnonzero(np.abs(col) > _PHASE_TOL)
        if nz.size:
            lead = col[nz[0]]
            v[:, j] = col * (abs(lead) / lead)
    # deterministic order inside exact-tie groups: lexicographic on entries
    start = 0
    while start < w.size:
        stop = start + 1
        while stop < w.size and w[stop] == w[start]:
            stop += 1
        if stop - start > 1:
            block = v[:, start:stop]
            if np.iscomplexobj(block):
                keys = np.vstack([block.real, block.imag])
            else:
                keys = block
            perm = np.lexsort(keys[::-1])
            v[:, start:stop] = block[:, perm]
        start = stop
    w.setflags(write=False)
    v.setflags(write=False)
    return SpectralDecomposition(eigenvalues=w, vectors=v)


def matrix_function(a, f, floor: float | None = None) -> HermitianOperator:
    """Apply a scalar function to the spectrum, reusing the eigenvectors.

    With ``floor`` given, eigenvalues below it are replaced by ``floor``
    before ``f`` is applied (the spectral-floor convention that keeps ``log``
    of rank-deficient operators finite).

    Raises
    ------
    DomainError
        If ``f`` produces non-finite values on the (floored) spectrum.
    """
    dec = eig_hermitian(a)
    w = dec.eigenvalues
    if floor is not None:
        w = np.maximum(w, float(floor))
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        fw = np.asarray(f(w), dtype=np.float64)
    if not np.all(np.isfinite(fw)):
        raise DomainError(
            "scalar function produced non-finite values on the spectrum "
            f"(min eigenvalue {float(w.min()):.6e}; provide a floor?)"
        )
    return HermitianOperator((dec.vectors * fw) @ dec.vectors.conj().T)


def matrix_exp(a) -> HermitianOperator:
    """Spectral matrix exponential."""
    return matrix_function(a, np.exp)


def matrix_log(a, floor: float | None = None) -> HermitianOperator:
    """Spectral matrix logarithm.

    Rank-deficient input needs ``floor``: eigenvalues below it are clamped
    up before the log, which sends kernel directions to ``log(floor)``
    (numerically negligible weight once exponentiated back).
    """
    if floor is None:
        w = np.linalg.eigvalsh(as_matrix(a))
        if float(w[0]) <= 0.0:
            raise DomainError(
                f"matrix log of a non-positive spectrum (min eigenvalue {float(w[0]):.6e}) "
                "requires a floor"
            )
    return matrix_function(a, np.log, floor=floor)


def trace_norm(a) -> float:
    """Schatten-1 norm: the sum of absolute eigenvalues."""
    w = np.linalg.eigvalsh(as_matrix(a))
    return float(np.abs(w).sum())


def operator_norm(a) -> float:
    """Largest absolute eigenvalue (spectral norm for Hermitian input)."""
    w = np.linalg.eigvalsh(as_matrix(a))
    return float(np.abs(w).max())
