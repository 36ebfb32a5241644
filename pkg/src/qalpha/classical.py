"""Classical divergences and the Nussbaum-Szkola bridge.

For a pair of states with eigen-data ``(p, X)`` and ``(q, Y)`` the
Nussbaum-Szkola (NZ) tables are ``P[i, j] = p_i M_ij`` and
``Q[i, j] = q_j M_ij`` with ``M_ij = |<x_i|y_j>|**2``. The alpha-escort NZ
tables ``p_i**a M_ij / Tr(rho**a)`` and ``q_j**a M_ij / Tr(sigma**a)`` feed the
f-divergence route to the relative alpha-entropy, which reproduces the
quantum S_a exactly.

Note that these escort tables are *not* the classical escorts of ``P`` and
``Q`` (those would carry ``M_ij**a``), so applying the closed-form
:func:`j_alpha` to the flattened NZ tables agrees with S_a only when the two
states commute.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .divergences import LogBase, check_alpha, log, s_alpha
from .errors import LengthMismatch, ShapeMismatch
from .operators import DEFAULT_TOLERANCES, as_operator, check_same_dim, overlap_matrix


def _probability(x, name, trace_tol=DEFAULT_TOLERANCES.trace_tol):
    a = np.asarray(x, dtype=float)
    if np.any(a < 0) or not np.all(np.isfinite(a)):
        raise ValueError(f"{name} must be finite and non-negative")
    total = float(a.sum())
    if abs(total - 1.0) > trace_tol:
        raise ValueError(f"{name} must sum to 1, sums to {total!r}")
    return a


@dataclass(frozen=True)
class JointDistribution:
    """Non-negative ``n x n`` table summing to one."""

    table: np.ndarray

    def __post_init__(self):
        t = _probability(self.table, "joint distribution")
        if t.ndim != 2:
            raise ShapeMismatch(f"joint distribution must be 2-D, got shape {t.shape}")
        t = t.copy()
        t.flags.writeable = False
        object.__setattr__(self, "table", t)

    def flatten(self):
        """Row-major (i outer, j inner) probability vector."""
        return self.table.ravel()

    @property
    def row_marginal(self):
        return self.table.sum(axis=1)

    @property
    def column_marginal(self):
        return self.table.sum(axis=0)


def _vectors(p, q):
    p = p.flatten() if isinstance(p, JointDistribution) else np.asarray(p, dtype=float).ravel()
    q = q.flatten() if isinstance(q, JointDistribution) else np.asarray(q, dtype=float).ravel()
    if p.shape != q.shape:
        raise LengthMismatch(f"length mismatch: {p.size} vs {q.size}")
    return p, q


def nz_distributions(rho, sigma):
    """Nussbaum-Szkola pair ``(P, Q)``."""
    rho, sigma = as_operator(rho), as_operator(sigma)
    check_same_dim(rho, sigma)
    m = overlap_matrix(rho, sigma)
    p = np.clip(rho.eigenvalues, 0.0, None)
    q = np.clip(sigma.eigenvalues, 0.0, None)
    return JointDistribution(p[:, None] * m), JointDistribution(q[None, :] * m)


def nz_escort(rho, sigma, alpha, rank_tol=DEFAULT_TOLERANCES.rank_tol):
    """Alpha-escort NZ pair ``(P^(a), Q^(a))``.

    Cells whose overlap ``M_ij`` does not exceed ``rank_tol`` are set to zero,
    so eigensolver noise between orthogonal vectors cannot register as mass
    on a zero of the other table.
    """
    alpha = float(alpha)
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    rho, sigma = as_operator(rho), as_operator(sigma)
    check_same_dim(rho, sigma)
    m = overlap_matrix(rho, sigma)
    m = np.where(m > rank_tol, m, 0.0)
    pa = rho.decomposition.clean_eigenvalues(rank_tol) ** alpha
    qa = sigma.decomposition.clean_eigenvalues(rank_tol) ** alpha
    return (
        JointDistribution(pa[:, None] * m / pa.sum()),
        JointDistribution(qa[None, :] * m / qa.sum()),
    )


def escort_vector(p, alpha):
    """Classical escort ``p**a / sum(p**a)`` with ``0**a = 0``."""
    p = np.asarray(p, dtype=float)
    pa = np.where(p > 0, np.abs(p) ** alpha, 0.0)
    return pa / pa.sum()


def kl(p, q, base=LogBase.TWO):
    """Kullback-Leibler divergence; ``inf`` if p charges a zero of q."""
    p, q = _vectors(p, q)
    on = p > 0
    if np.any(q[on] <= 0):
        return math.inf
    return float(np.sum(p[on] * np.log(p[on] / q[on]))) / LogBase.coerce(base).ln


def renyi_classical(p, q, alpha, base=LogBase.TWO):
    """Renyi divergence ``1/(a-1) log sum p**a q**(1-a)``."""
    alpha = check_alpha(alpha)
    p, q = _vectors(p, q)
    if alpha > 1 and np.any(q[p > 0] <= 0):
        return math.inf
    both = (p > 0) & (q > 0)
    s = float(np.sum(p[both] ** alpha * q[both] ** (1 - alpha)))
    if s == 0:
        return math.inf
    return log(s, base) / (alpha - 1)


def j_alpha(p, q, alpha, base=LogBase.TWO):
    """Relative alpha-entropy, closed form.

    ``a/(1-a) log sum p q**(a-1) - 1/(1-a) log sum p**a + log sum q**a``.
    """
    alpha = check_alpha(alpha)
    p, q = _vectors(p, q)
    on_q = q > 0
    if alpha < 1 and np.any(p[~on_q] > 0):
        return math.inf
    cross = float(np.sum(p[on_q] * q[on_q] ** (alpha - 1)))
    if cross == 0:
        return math.inf
    sp = float(np.sum(p[p > 0] ** alpha))
    sq = float(np.sum(q[on_q] ** alpha))
    return alpha / (1 - alpha) * log(cross, base) - 1 / (1 - alpha) * log(sp, base) + log(sq, base)


def f_divergence(p, q, f, zero_denominator=math.inf):
    """Csiszar f-divergence ``sum_{q>0} q f(p/q)``.

    Cells with ``q = 0 < p`` contribute ``zero_denominator`` (``+inf`` by
    default); cells with ``p = q = 0`` contribute nothing.
    """
    if isinstance(p, JointDistribution) != isinstance(q, JointDistribution):
        raise ShapeMismatch("both arguments must be vectors or both joint tables")
    pa, qa = _vectors(p, q)
    on = qa > 0
    total = float(np.sum(qa[on] * f(pa[on] / qa[on])))
    if np.any(pa[~on] > 0):
        total += zero_denominator
    return total


def alpha_generator(alpha):
    """``f(x) = sgn((1-a)/a) (x**(1/a) - 1)``, the generator behind J_a."""
    sign = math.copysign(1.0, (1 - alpha) / alpha)

    def f(x):
        return sign * (np.power(x, 1.0 / alpha) - 1.0)

    return f


def _zero_denominator_limit(alpha):
    # q f(p/q) -> sgn * p**(1/a) q**(1-1/a) as q -> 0: zero for a > 1, diverges for a < 1
    return 0.0 if alpha > 1 else math.inf


def j_alpha_via_f(p, q, alpha, base=LogBase.TWO, escorts=None, zero_tol=DEFAULT_TOLERANCES.rank_tol):
    """Relative alpha-entropy through an f-divergence of escort measures.

    ``a/(1-a) log[sgn((1-a)/a) D_f(P^(a)||Q^(a)) + 1]``. ``escorts`` may supply
    the escort pair explicitly (for NZ tables, pass :func:`nz_escort`);
    otherwise the classical escorts of ``p`` and ``q`` are used, in which case
    the result equals :func:`j_alpha`.
    """
    alpha = check_alpha(alpha)
    if escorts is None:
        pv, qv = _vectors(p, q)
        pe, qe = escort_vector(pv, alpha), escort_vector(qv, alpha)
    else:
        pe, qe = _vectors(*escorts)
    on = qe > 0
    sign = math.copysign(1.0, (1 - alpha) / alpha)
    df = f_divergence(pe, qe, alpha_generator(alpha), _zero_denominator_limit(alpha))
    if math.isinf(df):
        return math.inf
    inner = sign * df + 1.0
    # alpha > 1 and disjoint supports: the bracket collapses to zero
    if inner <= zero_tol or not np.any(pe[on] > 0):
        return math.inf
    return alpha / (1 - alpha) * log(inner, base)


def classical_dpd(p, q, alpha):
    """Classical density power divergence."""
    alpha = check_alpha(alpha)
    p, q = _vectors(p, q)
    on_q = q > 0
    if alpha < 1 and np.any(p[~on_q] > 0):
        return math.inf
    return (
        alpha / (1 - alpha) * float(np.sum(p[on_q] * q[on_q] ** (alpha - 1)))
        - 1 / (1 - alpha) * float(np.sum(p[p > 0] ** alpha))
        + float(np.sum(q[on_q] ** alpha))
    )


def j_alpha_nz(rho, sigma, alpha, base=LogBase.TWO, tolerances=DEFAULT_TOLERANCES):
    """J_a of the NZ pair of ``(rho, sigma)`` via the escort-NZ f-divergence route."""
    P, Q = nz_distributions(rho, sigma)
    return j_alpha_via_f(P, Q, alpha, base, escorts=nz_escort(rho, sigma, alpha, tolerances.rank_tol))


def theorem7_residual(rho, sigma, alpha, base=LogBase.TWO, tolerances=DEFAULT_TOLERANCES):
    """``|S_a(rho||sigma) - J_a(P||Q)|`` for the NZ pair, J_a via escort NZ tables.

    Both sides infinite counts as agreement (residual 0); exactly one side
    infinite gives ``inf``.
    """
    lhs = s_alpha(rho, sigma, alpha, base, tolerances)
    rhs = j_alpha_nz(rho, sigma, alpha, base, tolerances)
    if math.isinf(lhs) or math.isinf(rhs):
        return 0.0 if math.isinf(lhs) and math.isinf(rhs) else math.inf
    return abs(float(lhs) - rhs)


def flattened_nz_gap(rho, sigma, alpha, base=LogBase.TWO):
    """``|S_a - j_alpha(flatten P, flatten Q)|`` using the closed form on NZ tables.

    Zero for commuting pairs, generally non-zero otherwise; see the module
    docstring.
    """
    P, Q = nz_distributions(rho, sigma)
    lhs = s_alpha(rho, sigma, alpha, base)
    rhs = j_alpha(P, Q, alpha, base)
    if math.isinf(lhs) or math.isinf(rhs):
        return 0.0 if math.isinf(lhs) and math.isinf(rhs) else math.inf
    return abs(float(lhs) - rhs)
