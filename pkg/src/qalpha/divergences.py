"""Quantum divergences and entropies.

All functions take states (or raw arrays, which are validated as density
matrices) and a logarithm base. The relative alpha-entropy is

    S_a(rho||sigma) = a/(1-a) log Tr(rho sigma^(a-1))
                      - 1/(1-a) log Tr(rho^a) + log Tr(sigma^a),

evaluated through the eigen-overlap kernel in :mod:`qalpha.operators`.
"""

from __future__ import annotations

import dataclasses
import enum
import math

import numpy as np

from .errors import ConsistencyError, InvalidAlpha
from .operators import (
    DEFAULT_TOLERANCES,
    DensityMatrix,
    SpectralDecomposition,
    as_operator,
    check_same_dim,
    matrix_function,
    matrix_power,
    overlap_matrix,
    power_trace,
    schatten_norm,
    spectral_power,
    support_projector,
    supports_contained,
    trace_form,
    validate_density,
)

ALPHA_GUARD = 1e-9


class LogBase(enum.Enum):
    TWO = "2"
    NATURAL = "e"

    @property
    def ln(self):
        return math.log(2.0) if self is LogBase.TWO else 1.0

    @classmethod
    def coerce(cls, base):
        if isinstance(base, cls):
            return base
        if base is None:
            return cls.TWO
        if isinstance(base, str):
            key = base.strip().lower()
            if key in ("2", "two", "bits"):
                return cls.TWO
            if key in ("e", "natural", "nats", "ln"):
                return cls.NATURAL
        elif base == 2:
            return cls.TWO
        elif base == math.e:
            return cls.NATURAL
        raise ValueError(f"unsupported log base {base!r}; use 2 or 'e'")


def log(x, base=LogBase.TWO):
    """Logarithm in the requested base with ``log 0 = -inf``."""
    base = LogBase.coerce(base)
    if x == 0:
        return -math.inf
    if x == math.inf:
        return math.inf
    return math.log(x) / base.ln


class InfinityReason(enum.Enum):
    SUPPORT_VIOLATION = "SupportViolation"
    DISJOINT_SUPPORTS = "DisjointSupports"


class DivergenceValue(float):
    """A float in ``[0, +inf]`` that remembers why it is infinite.

    Behaves as a plain float in arithmetic and comparisons.
    """

    infinity_reason: InfinityReason | None

    def __new__(cls, value, infinity_reason=None):
        obj = super().__new__(cls, value)
        obj.infinity_reason = infinity_reason if math.isinf(value) else None
        return obj

    @classmethod
    def infinite(cls, reason):
        return cls(math.inf, reason)

    @property
    def is_finite(self):
        return math.isfinite(self)

    def __repr__(self):
        if self.infinity_reason is not None:
            return f"DivergenceValue(inf, {self.infinity_reason.value})"
        return f"DivergenceValue({float(self)!r})"


def _nonnegative(value, tol=DEFAULT_TOLERANCES.nonneg_tol):
    if math.isnan(value):
        raise ConsistencyError("divergence evaluated to NaN")
    if value < 0:
        if value < -tol:
            raise ConsistencyError(f"non-negative quantity evaluated to {value:.3e}")
        value = 0.0
    return DivergenceValue(value)


def check_alpha(alpha):
    alpha = float(alpha)
    if not alpha > 0:
        raise InvalidAlpha(f"alpha must be positive, got {alpha}")
    if abs(alpha - 1.0) <= ALPHA_GUARD:
        raise InvalidAlpha("alpha = 1 is excluded; use umegaki() for the limit")
    return alpha


def _pair(rho, sigma):
    rho, sigma = as_operator(rho), as_operator(sigma)
    check_same_dim(rho, sigma)
    return rho, sigma


def _relative_alpha_infinity(rho, sigma, alpha, rank_tol):
    """Infinity reason for S_a / QDPD, or None when the value is finite."""
    if alpha < 1:
        if not supports_contained(rho, sigma, rank_tol):
            return InfinityReason.SUPPORT_VIOLATION
    elif trace_form(rho, sigma, alpha - 1, rank_tol) <= rank_tol * rho.trace:
        return InfinityReason.DISJOINT_SUPPORTS
    return None


def s_alpha(rho, sigma, alpha, base=LogBase.TWO, tolerances=DEFAULT_TOLERANCES) -> DivergenceValue:
    """Quantum relative alpha-entropy.

    Infinite with ``SupportViolation`` when ``alpha < 1`` and supp(rho) is not
    inside supp(sigma); infinite with ``DisjointSupports`` when ``alpha > 1``
    and ``Tr(rho sigma^(alpha-1))`` vanishes. Accepts unnormalised
    :class:`~qalpha.operators.PositiveOperator` inputs, on which the value is
    unchanged by rescaling either argument.
    """
    alpha = check_alpha(alpha)
    rho, sigma = _pair(rho, sigma)
    rt = tolerances.rank_tol
    reason = _relative_alpha_infinity(rho, sigma, alpha, rt)
    if reason is not None:
        return DivergenceValue.infinite(reason)
    cross = trace_form(rho, sigma, alpha - 1, rt)
    value = (
        alpha / (1 - alpha) * log(cross, base)
        - 1 / (1 - alpha) * log(power_trace(rho, alpha, rt), base)
        + log(power_trace(sigma, alpha, rt), base)
    )
    return _nonnegative(value, tolerances.nonneg_tol)


def s_alpha_normalized_form(rho, sigma, alpha, base=LogBase.TWO, tolerances=DEFAULT_TOLERANCES) -> DivergenceValue:
    """S_a via Schatten-normalised operators and a dense trace.

    ``a/(1-a) log Tr[(rho/|rho|_a) (sigma/|sigma|_a)^(a-1)]``. Shares no code
    path with :func:`s_alpha` beyond the support decision, so the two serve as
    cross-checks of each other.
    """
    alpha = check_alpha(alpha)
    rho, sigma = _pair(rho, sigma)
    rt = tolerances.rank_tol
    reason = _relative_alpha_infinity(rho, sigma, alpha, rt)
    if reason is not None:
        return DivergenceValue.infinite(reason)
    rho_n = rho.matrix / schatten_norm(rho, alpha, rt)
    sigma_pow = matrix_power(sigma, alpha - 1, rt) / schatten_norm(sigma, alpha, rt) ** (alpha - 1)
    t = float(np.real(np.trace(rho_n @ sigma_pow)))
    return _nonnegative(alpha / (1 - alpha) * log(t, base), tolerances.nonneg_tol)


def umegaki(rho, sigma, base=LogBase.TWO, tolerances=DEFAULT_TOLERANCES) -> DivergenceValue:
    """``Tr(rho log rho - rho log sigma)``; infinite unless supp(rho) <= supp(sigma)."""
    rho, sigma = _pair(rho, sigma)
    rt = tolerances.rank_tol
    if not supports_contained(rho, sigma, rt):
        return DivergenceValue.infinite(InfinityReason.SUPPORT_VIOLATION)
    p = rho.decomposition.clean_eigenvalues(rt)
    q = sigma.decomposition.clean_eigenvalues(rt)
    m = overlap_matrix(rho, sigma)
    pos_p = p > 0
    pos_q = q > 0
    self_term = float(np.sum(p[pos_p] * np.log(p[pos_p])))
    log_q = np.zeros_like(q)
    log_q[pos_q] = np.log(q[pos_q])
    cross_term = float(p @ m @ log_q)
    value = (self_term - cross_term) / LogBase.coerce(base).ln
    return _nonnegative(value, tolerances.nonneg_tol)


def petz_renyi(rho, sigma, alpha, base=LogBase.TWO, tolerances=DEFAULT_TOLERANCES) -> DivergenceValue:
    """Petz-Renyi divergence ``1/(a-1) log Tr(rho^a sigma^(1-a))``."""
    alpha = check_alpha(alpha)
    rho, sigma = _pair(rho, sigma)
    rt = tolerances.rank_tol
    if alpha > 1 and not supports_contained(rho, sigma, rt):
        return DivergenceValue.infinite(InfinityReason.SUPPORT_VIOLATION)
    pa = spectral_power(rho.eigenvalues, alpha, rt)
    qb = spectral_power(sigma.eigenvalues, 1 - alpha, rt)
    t = float(pa @ overlap_matrix(rho, sigma) @ qb)
    if alpha < 1 and t <= rt:
        return DivergenceValue.infinite(InfinityReason.DISJOINT_SUPPORTS)
    return _nonnegative(log(t, base) / (alpha - 1), tolerances.nonneg_tol)


def sandwiched_renyi(rho, sigma, alpha, base=LogBase.TWO, tolerances=DEFAULT_TOLERANCES) -> DivergenceValue:
    """Sandwiched Renyi divergence.

    ``1/(a-1) log Tr[(sigma^g rho sigma^g)^a]`` with ``g = (1-a)/(2a)``.
    Non-negativity is only guaranteed for ``a >= 1/2``; below that the raw
    value is returned.
    """
    alpha = check_alpha(alpha)
    rho, sigma = _pair(rho, sigma)
    rt = tolerances.rank_tol
    if alpha > 1 and not supports_contained(rho, sigma, rt):
        return DivergenceValue.infinite(InfinityReason.SUPPORT_VIOLATION)
    s = matrix_power(sigma, (1 - alpha) / (2 * alpha), rt)
    inner = s @ rho.matrix @ s
    w = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    t = float(np.sum(spectral_power(np.clip(w, 0.0, None), alpha, rt)))
    if alpha < 1 and t <= rt:
        return DivergenceValue.infinite(InfinityReason.DISJOINT_SUPPORTS)
    value = log(t, base) / (alpha - 1)
    if alpha >= 0.5:
        return _nonnegative(value, tolerances.nonneg_tol)
    return DivergenceValue(value)


def d_min(rho, sigma, base=LogBase.TWO, tolerances=DEFAULT_TOLERANCES) -> DivergenceValue:
    """Min-relative entropy ``-log Tr(Pi_rho sigma)``."""
    rho, sigma = _pair(rho, sigma)
    t = float(np.real(np.trace(support_projector(rho, tolerances.rank_tol) @ sigma.matrix)))
    if t <= tolerances.rank_tol:
        return DivergenceValue.infinite(InfinityReason.DISJOINT_SUPPORTS)
    return _nonnegative(-log(t, base), tolerances.nonneg_tol)


def d_max(rho, sigma, base=LogBase.TWO, tolerances=DEFAULT_TOLERANCES) -> DivergenceValue:
    """Max-relative entropy ``log lambda_max(sigma^-1/2 rho sigma^-1/2)``.

    The inverse square root is taken on supp(sigma), which is exact once
    support containment has been checked.
    """
    rho, sigma = _pair(rho, sigma)
    rt = tolerances.rank_tol
    if not supports_contained(rho, sigma, rt):
        return DivergenceValue.infinite(InfinityReason.SUPPORT_VIOLATION)
    s = matrix_power(sigma, -0.5, rt)
    g = s @ rho.matrix @ s
    lam = float(np.linalg.eigvalsh(0.5 * (g + g.conj().T))[-1])
    return _nonnegative(log(lam, base), tolerances.nonneg_tol)


def renyi_entropy(rho, alpha, base=LogBase.TWO, tolerances=DEFAULT_TOLERANCES) -> float:
    """``1/(1-a) log Tr(rho^a)``."""
    alpha = check_alpha(alpha)
    rho = as_operator(rho)
    return 1 / (1 - alpha) * log(power_trace(rho, alpha, tolerances.rank_tol), base)


def cross_entropy_alpha(rho, sigma, alpha, base=LogBase.TWO, tolerances=DEFAULT_TOLERANCES) -> float:
    """Generalised cross entropy ``a/(1-a) log Tr(rho sigma^(a-1)) + log Tr(sigma^a)``.

    Satisfies ``C_a(rho, rho) = R_a(rho)`` and ``S_a = C_a - R_a``.
    """
    alpha = check_alpha(alpha)
    rho, sigma = _pair(rho, sigma)
    rt = tolerances.rank_tol
    if _relative_alpha_infinity(rho, sigma, alpha, rt) is not None:
        return math.inf
    return alpha / (1 - alpha) * log(trace_form(rho, sigma, alpha - 1, rt), base) + log(
        power_trace(sigma, alpha, rt), base
    )


def von_neumann_entropy(rho, base=LogBase.TWO, tolerances=DEFAULT_TOLERANCES) -> float:
    rho = as_operator(rho)
    p = rho.decomposition.clean_eigenvalues(tolerances.rank_tol)
    p = p[p > 0]
    return max(-float(np.sum(p * np.log(p))) / LogBase.coerce(base).ln, 0.0)


def fidelity(rho, sigma, tolerances=DEFAULT_TOLERANCES) -> float:
    """``Tr sqrt(sqrt(rho) sigma sqrt(rho))``."""
    rho, sigma = _pair(rho, sigma)
    r = matrix_power(rho, 0.5, tolerances.rank_tol)
    g = r @ sigma.matrix @ r
    w = np.clip(np.linalg.eigvalsh(0.5 * (g + g.conj().T)), 0.0, None)
    f = float(np.sum(np.sqrt(w)))
    # rounding can push F(rho, rho) a few ulps above 1
    return min(f, 1.0) if f < 1.0 + 1e-12 else f


def qdpd(rho, sigma, alpha, tolerances=DEFAULT_TOLERANCES) -> DivergenceValue:
    """Quantum density power divergence (log-free, not scale invariant).

    ``a/(1-a) Tr(rho sigma^(a-1)) - 1/(1-a) Tr(rho^a) + Tr(sigma^a)``.
    """
    alpha = check_alpha(alpha)
    rho, sigma = _pair(rho, sigma)
    rt = tolerances.rank_tol
    if alpha < 1 and not supports_contained(rho, sigma, rt):
        return DivergenceValue.infinite(InfinityReason.SUPPORT_VIOLATION)
    value = (
        alpha / (1 - alpha) * trace_form(rho, sigma, alpha - 1, rt)
        - 1 / (1 - alpha) * power_trace(rho, alpha, rt)
        + power_trace(sigma, alpha, rt)
    )
    return _nonnegative(value, tolerances.nonneg_tol)


def escort(rho, alpha, tolerances=DEFAULT_TOLERANCES) -> DensityMatrix:
    """Escort state ``rho^a / Tr(rho^a)``."""
    alpha = float(alpha)
    if not alpha > 0:
        raise InvalidAlpha(f"alpha must be positive, got {alpha}")
    rho = as_operator(rho)
    rt = tolerances.rank_tol
    if alpha == 1.0:
        return validate_density(rho.matrix / rho.trace, tolerances)
    # reuse rho's eigenvectors; re-diagonalising would cost relative accuracy
    # in the smallest escort eigenvalues
    w = spectral_power(rho.eigenvalues, alpha, rt)
    w = w / w.sum()
    dec = SpectralDecomposition(w, rho.eigenvectors)
    m = dec.reconstruct()
    return DensityMatrix(0.5 * (m + m.conj().T), dec)


def escort_relation_residual(rho, sigma, alpha, base=LogBase.TWO, tolerances=DEFAULT_TOLERANCES) -> float:
    """``|S_a(rho||sigma) - D^Petz_(1/a)(rho^(a)||sigma^(a))|``.

    Returns 0 when both sides are infinite.
    """
    alpha = check_alpha(alpha)
    lhs = s_alpha(rho, sigma, alpha, base, tolerances)
    # x -> x^a maps the relative support threshold t to t^a; for a > 1 the
    # escort keeps eigenvalues far below the original threshold
    esc_tol = dataclasses.replace(tolerances, rank_tol=min(tolerances.rank_tol, tolerances.rank_tol**alpha))
    rho_e, sigma_e = escort(rho, alpha, tolerances), escort(sigma, alpha, tolerances)
    rhs = petz_renyi(rho_e, sigma_e, 1 / alpha, base, esc_tol)
    if math.isinf(lhs) and math.isinf(rhs):
        return 0.0
    return abs(float(lhs) - float(rhs))


def s_alpha_zero_limit(rho, sigma, base=LogBase.TWO, tolerances=DEFAULT_TOLERANCES) -> float:
    """``lim_{a->0} S_a = log(Tr Pi_sigma / Tr Pi_rho)`` (ratio of ranks)."""
    rho, sigma = _pair(rho, sigma)
    rt = tolerances.rank_tol
    return log(sigma.rank(rt) / rho.rank(rt), base)


def purity_form_s2(rho, sigma, base=LogBase.TWO, tolerances=DEFAULT_TOLERANCES) -> float:
    """``log[Tr rho^2 Tr sigma^2 / (Tr rho sigma)^2]``, an alternative form of S_2."""
    rho, sigma = _pair(rho, sigma)
    rt = tolerances.rank_tol
    overlap = trace_form(rho, sigma, 1, rt)
    if overlap <= rt:
        return math.inf
    return log(power_trace(rho, 2, rt) * power_trace(sigma, 2, rt) / overlap**2, base)


def log_matrix(rho, tolerances=DEFAULT_TOLERANCES):
    """Support-restricted matrix logarithm (natural base)."""
    return matrix_function(rho, np.log, tolerances.rank_tol)


# Divergences with a common ``(rho, sigma, alpha, base)`` signature; used by
# the channel probe and the CLI.
def _umegaki_alpha(rho, sigma, alpha, base=LogBase.TWO, tolerances=DEFAULT_TOLERANCES):
    return umegaki(rho, sigma, base, tolerances)


def _qdpd_alpha(rho, sigma, alpha, base=LogBase.TWO, tolerances=DEFAULT_TOLERANCES):
    return qdpd(rho, sigma, alpha, tolerances)


DIVERGENCES = {
    "s_alpha": s_alpha,
    "petz_renyi": petz_renyi,
    "sandwiched_renyi": sandwiched_renyi,
    "umegaki": _umegaki_alpha,
    "qdpd": _qdpd_alpha,
}

ALPHA_FREE = {"umegaki"}


def get_divergence(name):
    try:
        return DIVERGENCES[name]
    except KeyError:
        raise ValueError(f"unknown divergence {name!r}; choose from {sorted(DIVERGENCES)}") from None
