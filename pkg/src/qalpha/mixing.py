"""Generalised (geometric) mixtures of commuting states and the convexity gaps.

The generalised mixture of two commuting states is

    M^t(rho, sigma) = rho^t sigma^(1-t) / Tr(rho^t sigma^(1-t)),

and the relative alpha-entropy obeys a convexity inequality along such
mixtures up to the correction factor ``Z^t``. The ``*_gap`` functions return
"right-hand side minus left-hand side", so the sign contract is easy to test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classical import j_alpha
from .divergences import LogBase, check_alpha, log, petz_renyi, s_alpha
from .errors import DegenerateMix, NonCommuting
from .operators import (
    DEFAULT_TOLERANCES,
    PositiveOperator,
    as_operator,
    check_same_dim,
    commutator_norm,
    matrix_power,
    power_trace,
    positive_operator,
    schatten_norm,
    validate_density,
)


def _require_commuting(a, b, comm_tol):
    dev = commutator_norm(a, b)
    if dev > comm_tol:
        raise NonCommuting(dev, comm_tol)


def _check_t(t):
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    return t


def _geometric_product(a, b, t, rank_tol):
    """``a^t b^(1-t)`` with the endpoints taken literally (``x^0 = I``)."""
    if t == 1.0:
        return np.array(a.matrix)
    if t == 0.0:
        return np.array(b.matrix)
    prod = matrix_power(a, t, rank_tol) @ matrix_power(b, 1 - t, rank_tol)
    return 0.5 * (prod + prod.conj().T)


def mix_normalizer(rho, sigma, t, tolerances=DEFAULT_TOLERANCES) -> float:
    """``Tr(rho^t sigma^(1-t))``."""
    rho, sigma = as_operator(rho), as_operator(sigma)
    check_same_dim(rho, sigma)
    t = _check_t(t)
    return float(np.real(np.trace(_geometric_product(rho, sigma, t, tolerances.rank_tol))))


def generalized_mix(rho, sigma, t, tolerances=DEFAULT_TOLERANCES):
    """Normalised geometric mixture ``M^t``; ``M^0 = sigma`` and ``M^1 = rho``.

    Raises
    ------
    NonCommuting
        The product is not a density operator unless the states commute.
    DegenerateMix
        The normaliser vanishes (the supports do not overlap).
    """
    rho, sigma = as_operator(rho, tolerances), as_operator(sigma, tolerances)
    check_same_dim(rho, sigma)
    t = _check_t(t)
    _require_commuting(rho, sigma, tolerances.comm_tol)
    prod = _geometric_product(rho, sigma, t, tolerances.rank_tol)
    norm = float(np.real(np.trace(prod)))
    if norm <= tolerances.rank_tol:
        raise DegenerateMix(f"Tr(rho^t sigma^(1-t)) = {norm:.3e} vanishes")
    return validate_density(prod / norm, tolerances)


def z_factor(rho, sigma, t, alpha, tolerances=DEFAULT_TOLERANCES) -> float:
    """``Tr[((rho/|rho|_a)^t (sigma/|sigma|_a)^(1-t))^a]``, which lies in (0, 1]."""
    rho, sigma = as_operator(rho, tolerances), as_operator(sigma, tolerances)
    check_same_dim(rho, sigma)
    t = _check_t(t)
    alpha = float(alpha)
    _require_commuting(rho, sigma, tolerances.comm_tol)
    rt = tolerances.rank_tol
    rho_n = rho.scaled(1 / schatten_norm(rho, alpha, rt))
    sigma_n = sigma.scaled(1 / schatten_norm(sigma, alpha, rt))
    prod = positive_operator(_geometric_product(rho_n, sigma_n, t, rt), tolerances)
    return power_trace(prod, alpha, rt)


@dataclass(frozen=True)
class CommutingQuadruple:
    """Four mutually commuting states with a mixing weight and an order."""

    rho: PositiveOperator
    sigma: PositiveOperator
    tau: PositiveOperator
    omega: PositiveOperator
    t: float
    alpha: float
    tolerances: object = DEFAULT_TOLERANCES

    def __post_init__(self):
        tol = self.tolerances
        states = [as_operator(s, tol) for s in (self.rho, self.sigma, self.tau, self.omega)]
        for name, s in zip(("rho", "sigma", "tau", "omega"), states):
            object.__setattr__(self, name, s)
        for i in range(4):
            check_same_dim(states[0], states[i])
            for j in range(i + 1, 4):
                _require_commuting(states[i], states[j], tol.comm_tol)
        object.__setattr__(self, "t", _check_t(self.t))
        object.__setattr__(self, "alpha", check_alpha(self.alpha))

    def mixes(self):
        tol = self.tolerances
        return (
            generalized_mix(self.rho, self.sigma, self.t, tol),
            generalized_mix(self.tau, self.omega, self.t, tol),
        )


def s_alpha_convexity_gap(quad: CommutingQuadruple, base=LogBase.TWO) -> float:
    """Bound minus ``S_a(M^t(rho,sigma) || M^t(tau,omega))``.

    The bound is ``t S_a(rho||tau) + (1-t) S_a(sigma||omega)
    + log Z(rho,sigma)/(a-1) + log Z(tau,omega)``. Non-negative for ``a < 1``,
    non-positive for ``a > 1``.
    """
    a, t, tol = quad.alpha, quad.t, quad.tolerances
    m1, m2 = quad.mixes()
    bound = (
        t * s_alpha(quad.rho, quad.tau, a, base, tol)
        + (1 - t) * s_alpha(quad.sigma, quad.omega, a, base, tol)
        + log(z_factor(quad.rho, quad.sigma, t, a, tol), base) / (a - 1)
        + log(z_factor(quad.tau, quad.omega, t, a, tol), base)
    )
    return float(bound - s_alpha(m1, m2, a, base, tol))


def petz_convexity_gap(quad: CommutingQuadruple, base=LogBase.TWO, divergence=petz_renyi) -> float:
    """Bound minus ``D_a(M^t(rho,sigma) || M^t(tau,omega))`` for Petz-Renyi.

    The bound is ``t D(rho||tau) + (1-t) D(sigma||omega)
    + a/(1-a) log Tr(rho^t sigma^(1-t)) + log Tr(tau^t omega^(1-t))``.
    Non-negative for ``a > 1``, non-positive for ``a < 1``. ``divergence`` may
    be swapped for :func:`~qalpha.divergences.sandwiched_renyi`, which agrees
    with Petz-Renyi on commuting inputs.
    """
    a, t, tol = quad.alpha, quad.t, quad.tolerances
    m1, m2 = quad.mixes()
    bound = (
        t * divergence(quad.rho, quad.tau, a, base, tol)
        + (1 - t) * divergence(quad.sigma, quad.omega, a, base, tol)
        + a / (1 - a) * log(mix_normalizer(quad.rho, quad.sigma, t, tol), base)
        + log(mix_normalizer(quad.tau, quad.omega, t, tol), base)
    )
    return float(bound - divergence(m1, m2, a, base, tol))


def classical_convexity_gap(r, s, u, w, t, alpha, base=LogBase.TWO) -> float:
    """The S_a convexity gap evaluated on eigenvalue vectors of a diagonal quadruple."""
    alpha = check_alpha(alpha)

    def mix(x, y):
        m = np.asarray(x, float) ** t * np.asarray(y, float) ** (1 - t)
        return m / m.sum()

    def z(x, y):
        xn = np.asarray(x, float) / np.sum(np.asarray(x, float) ** alpha) ** (1 / alpha)
        yn = np.asarray(y, float) / np.sum(np.asarray(y, float) ** alpha) ** (1 / alpha)
        return float(np.sum((xn**t * yn ** (1 - t)) ** alpha))

    bound = (
        t * j_alpha(r, u, alpha, base)
        + (1 - t) * j_alpha(s, w, alpha, base)
        + log(z(r, s), base) / (alpha - 1)
        + log(z(u, w), base)
    )
    value = j_alpha(mix(r, s), mix(u, w), alpha, base)
    if math.isinf(value):
        return -math.inf
    return float(bound - value)
