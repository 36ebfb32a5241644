"""Density matrices, spectral machinery and support-aware matrix functions.

Everything downstream is expressed through eigen-data: a state is stored
together with its descending spectral decomposition, and traces of products
of matrix functions are evaluated through the overlap matrix
``M[i, j] = |<x_i|y_j>|**2`` between two eigenbases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidRank,
    NotHermitian,
    NotPSD,
    NotSquare,
    TraceNotOne,
)


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by validation and support decisions.

    ``rank_tol`` is relative to the largest eigenvalue of the operator in
    question; the others are absolute.
    """

    hermitian_tol: float = 1e-9
    psd_tol: float = 1e-9
    trace_tol: float = 1e-9
    rank_tol: float = 1e-12
    recon_tol: float = 1e-10
    overlap_tol: float = 1e-10
    comm_tol: float = 1e-10
    nonneg_tol: float = 1e-10
    kraus_tol: float = 1e-9


DEFAULT_TOLERANCES = Tolerances()


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in descending order and the matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def of(cls, matrix):
        w, v = np.linalg.eigh(matrix)
        w = np.ascontiguousarray(w[::-1])
        v = np.ascontiguousarray(v[:, ::-1])
        w.flags.writeable = False
        v.flags.writeable = False
        return cls(w, v)

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def support_mask(self, rank_tol=DEFAULT_TOLERANCES.rank_tol):
        w = self.eigenvalues
        scale = max(float(np.max(np.abs(w))), np.finfo(float).tiny) if w.size else 1.0
        return w > rank_tol * scale

    def clean_eigenvalues(self, rank_tol=DEFAULT_TOLERANCES.rank_tol):
        """Eigenvalues with every non-support entry set to exactly zero."""
        return np.where(self.support_mask(rank_tol), self.eigenvalues, 0.0)


class PositiveOperator:
    """Hermitian positive semi-definite matrix with a cached decomposition.

    Instances are immutable. Use :func:`positive_operator` or
    :func:`validate_density` rather than the constructor, which trusts its
    arguments.
    """

    __slots__ = ("matrix", "decomposition")

    def __init__(self, matrix, decomposition=None):
        m = _frozen(matrix)
        object.__setattr__(self, "matrix", m)
        if decomposition is None:
            decomposition = SpectralDecomposition.of(m)
        object.__setattr__(self, "decomposition", decomposition)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def eigenvalues(self):
        return self.decomposition.eigenvalues

    @property
    def eigenvectors(self):
        return self.decomposition.eigenvectors

    @property
    def trace(self):
        return float(np.sum(self.eigenvalues))

    def rank(self, rank_tol=DEFAULT_TOLERANCES.rank_tol):
        return int(np.count_nonzero(self.decomposition.support_mask(rank_tol)))

    def scaled(self, k):
        """Return ``k * self`` without any trace normalisation."""
        if k <= 0:
            raise ValueError("scale factor must be positive")
        d = self.decomposition
        return PositiveOperator(
            k * self.matrix, SpectralDecomposition(k * d.eigenvalues, d.eigenvectors)
        )

    def conjugated(self, unitary):
        """Return ``U self U^dagger``."""
        u = np.asarray(unitary, dtype=complex)
        return type(self)(u @ self.matrix @ u.conj().T)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.matrix, dtype=dtype)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, eigenvalues={np.round(self.eigenvalues, 6)})"


class DensityMatrix(PositiveOperator):
    """Unit-trace :class:`PositiveOperator`."""

    __slots__ = ()


def _as_square(m):
    a = np.asarray(m.matrix if isinstance(m, PositiveOperator) else m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise NotSquare(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NotSquare("matrix has non-finite entries")
    return a


def _validate_psd(m, tol, cls, check_trace):
    a = _as_square(m)
    herm_dev = float(np.max(np.abs(a - a.conj().T)))
    if herm_dev > tol.hermitian_tol:
        raise NotHermitian(herm_dev, tol.hermitian_tol)
    a = 0.5 * (a + a.conj().T)
    dec = SpectralDecomposition.of(a)
    w = dec.eigenvalues
    lowest = float(w[-1])
    if lowest < -tol.psd_tol:
        raise NotPSD(-lowest, tol.psd_tol)
    if check_trace:
        tr = float(np.sum(w))
        if abs(tr - 1.0) > tol.trace_tol:
            raise TraceNotOne(abs(tr - 1.0), tol.trace_tol)
    if lowest < 0:
        w = np.clip(w, 0.0, None)
        dec = SpectralDecomposition(w, dec.eigenvectors)
        a = dec.reconstruct()
        a = 0.5 * (a + a.conj().T)
    if check_trace:
        tr = float(np.sum(dec.eigenvalues))
        if tr != 1.0:
            a = a / tr
            dec = SpectralDecomposition(dec.eigenvalues / tr, dec.eigenvectors)
    dec.eigenvalues.flags.writeable = False
    return cls(a, dec)


def validate_density(m, tolerances=DEFAULT_TOLERANCES) -> DensityMatrix:
    """Check the density-matrix invariants and return a :class:`DensityMatrix`.

    Eigenvalues within ``psd_tol`` below zero are clamped to zero and the
    trace is renormalised to exactly one.

    Raises
    ------
    NotHermitian, NotPSD, TraceNotOne
        With the measured deviation attached.
    """
    return _validate_psd(m, tolerances, DensityMatrix, check_trace=True)


def positive_operator(m, tolerances=DEFAULT_TOLERANCES) -> PositiveOperator:
    """Like :func:`validate_density` but without the trace condition."""
    return _validate_psd(m, tolerances, PositiveOperator, check_trace=False)


def as_operator(x, tolerances=DEFAULT_TOLERANCES) -> PositiveOperator:
    """Pass operators through; validate raw arrays as density matrices."""
    if isinstance(x, PositiveOperator):
        return x
    return validate_density(x, tolerances)


def maximally_mixed(dim) -> DensityMatrix:
    return validate_density(np.eye(dim) / dim)


def pure_state(vector) -> DensityMatrix:
    psi = np.asarray(vector, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return validate_density(np.outer(psi, psi.conj()))


def check_same_dim(a, b):
    da = a.dim if isinstance(a, PositiveOperator) else np.shape(a)[0]
    db = b.dim if isinstance(b, PositiveOperator) else np.shape(b)[0]
    if da != db:
        raise DimensionMismatch(da, db)


def support_projector(rho, rank_tol=DEFAULT_TOLERANCES.rank_tol):
    """Orthogonal projector onto the span of eigenvectors with non-zero eigenvalue."""
    rho = as_operator(rho)
    mask = rho.decomposition.support_mask(rank_tol)
    v = rho.eigenvectors[:, mask]
    return v @ v.conj().T


def overlap_matrix(rho, sigma):
    """``M[i, j] = |<x_i|y_j>|**2`` for the descending eigenbases of rho and sigma.

    M is doubly stochastic.
    """
    rho, sigma = as_operator(rho), as_operator(sigma)
    check_same_dim(rho, sigma)
    return np.abs(rho.eigenvectors.conj().T @ sigma.eigenvectors) ** 2


def supports_contained(rho, sigma, rank_tol=DEFAULT_TOLERANCES.rank_tol) -> bool:
    """True iff supp(rho) is contained in supp(sigma).

    Decided by the largest overlap between a support eigenvector of rho and a
    kernel eigenvector of sigma.
    """
    rho, sigma = as_operator(rho), as_operator(sigma)
    check_same_dim(rho, sigma)
    in_rho = rho.decomposition.support_mask(rank_tol)
    ker_sigma = ~sigma.decomposition.support_mask(rank_tol)
    if not ker_sigma.any() or not in_rho.any():
        return True
    m = overlap_matrix(rho, sigma)[np.ix_(in_rho, ker_sigma)]
    return bool(np.max(m) <= rank_tol)


def spectral_power(eigenvalues, a, rank_tol=DEFAULT_TOLERANCES.rank_tol):
    """``f(w) = w**a`` on the support, zero on the kernel (so ``0**a == 0``)."""
    w = np.asarray(eigenvalues, dtype=float)
    if w.size == 0:
        return w
    scale = max(float(np.max(np.abs(w))), np.finfo(float).tiny)
    mask = w > rank_tol * scale
    out = np.zeros_like(w)
    out[mask] = w[mask] ** a
    return out


def matrix_power(rho, a, rank_tol=DEFAULT_TOLERANCES.rank_tol):
    """Support-restricted real power of a positive operator.

    Zero eigenvalues map to zero for every exponent, including ``a <= 0``;
    callers that need finiteness must check supports themselves.
    """
    rho = as_operator(rho)
    v = rho.eigenvectors
    f = spectral_power(rho.eigenvalues, a, rank_tol)
    out = (v * f) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def matrix_function(rho, func, rank_tol=DEFAULT_TOLERANCES.rank_tol):
    """Apply ``func`` to the support eigenvalues; kernel eigenvalues map to zero."""
    rho = as_operator(rho)
    mask = rho.decomposition.support_mask(rank_tol)
    f = np.zeros(rho.dim)
    f[mask] = func(rho.eigenvalues[mask])
    v = rho.eigenvectors
    out = (v * f) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def trace_form(rho, sigma, a, rank_tol=DEFAULT_TOLERANCES.rank_tol) -> float:
    """``Tr(rho sigma**a)`` as ``sum_ij p_i q_j**a M_ij``.

    Kernel directions of both operators are dropped, which is exact for
    ``a > 0`` and implements the support-restricted convention otherwise.
    """
    rho, sigma = as_operator(rho), as_operator(sigma)
    check_same_dim(rho, sigma)
    p = rho.decomposition.clean_eigenvalues(rank_tol)
    qa = spectral_power(sigma.eigenvalues, a, rank_tol)
    m = overlap_matrix(rho, sigma)
    return float(p @ m @ qa)


def power_trace(rho, a, rank_tol=DEFAULT_TOLERANCES.rank_tol) -> float:
    """``Tr(rho**a)`` over the support."""
    rho = as_operator(rho)
    return float(np.sum(spectral_power(rho.eigenvalues, a, rank_tol)))


def schatten_norm(m, p, rank_tol=DEFAULT_TOLERANCES.rank_tol) -> float:
    """Schatten p-norm ``(sum s_i**p)**(1/p)`` over non-zero singular values.

    Negative ``p`` is allowed; zero singular values are skipped so the sum
    stays finite.
    """
    if p == 0:
        raise ValueError("Schatten norm undefined for p = 0")
    if isinstance(m, PositiveOperator):
        s = np.abs(m.eigenvalues)
    else:
        s = np.linalg.svd(np.asarray(m, dtype=complex), compute_uv=False)
    if s.size == 0 or np.max(s) == 0:
        return 0.0
    s = s[s > rank_tol * np.max(s)]
    if np.isinf(p):
        return float(np.max(s)) if p > 0 else float(np.min(s))
    return float(np.sum(s**p) ** (1.0 / p))


def tensor_product(a, b):
    """Kronecker product. Two operators give an operator; otherwise an array."""
    if isinstance(a, PositiveOperator) and isinstance(b, PositiveOperator):
        m = np.kron(a.matrix, b.matrix)
        cls = DensityMatrix if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix) else PositiveOperator
        return cls(0.5 * (m + m.conj().T))
    a = a.matrix if isinstance(a, PositiveOperator) else np.asarray(a, dtype=complex)
    b = b.matrix if isinstance(b, PositiveOperator) else np.asarray(b, dtype=complex)
    return np.kron(a, b)


def commutator_norm(rho, sigma) -> float:
    a = _as_square(rho)
    b = _as_square(sigma)
    check_same_dim(a, b)
    return float(np.max(np.abs(a @ b - b @ a)))


def commutes(rho, sigma, comm_tol=DEFAULT_TOLERANCES.comm_tol) -> bool:
    return commutator_norm(rho, sigma) <= comm_tol


def random_unitary(dim, seed=None):
    """Haar-random unitary from the phase-corrected QR of a Ginibre matrix."""
    rng = np.random.default_rng(seed)
    g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_density(dim, rank=None, seed=None) -> DensityMatrix:
    """Reproducible random state of the given rank.

    Haar eigenvectors; the first ``rank`` eigenvalues are a uniform sample from
    the simplex and the rest are zero.
    """
    if rank is None:
        rank = dim
    if not (1 <= rank <= dim):
        raise InvalidRank(f"rank must satisfy 1 <= rank <= dim, got rank={rank}, dim={dim}")
    rng = np.random.default_rng(seed)
    u = random_unitary(dim, rng)
    w = np.zeros(dim)
    w[:rank] = rng.dirichlet(np.ones(rank))
    m = (u * w) @ u.conj().T
    return validate_density(0.5 * (m + m.conj().T))


def random_commuting_family(dim, count, seed=None):
    """``count`` full-rank states sharing one Haar-random eigenbasis."""
    rng = np.random.default_rng(seed)
    u = random_unitary(dim, rng)
    states = []
    for _ in range(count):
        w = rng.dirichlet(np.ones(dim))
        m = (u * w) @ u.conj().T
        states.append(validate_density(0.5 * (m + m.conj().T)))
    return states
