"""Kraus channels and data-processing probes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .divergences import ALPHA_FREE, LogBase, get_divergence
from .errors import DimensionMismatch, IncompleteChannel, ShapeMismatch
from .operators import (
    DEFAULT_TOLERANCES,
    DensityMatrix,
    as_operator,
    random_density,
    validate_density,
)


@dataclass(frozen=True)
class KrausChannel:
    """Completely positive trace-preserving map ``rho -> sum K rho K^dag``.

    Each operator has shape ``(output_dim, input_dim)``.
    """

    operators: tuple

    @property
    def input_dim(self):
        return self.operators[0].shape[1]

    @property
    def output_dim(self):
        return self.operators[0].shape[0]

    def __call__(self, rho):
        return apply_channel(self, rho)


def kraus_validate(ops, kraus_tol=DEFAULT_TOLERANCES.kraus_tol) -> KrausChannel:
    """Check shapes and ``sum K^dag K = I`` and build a :class:`KrausChannel`."""
    mats = [np.array(k, dtype=complex) for k in ops]
    if not mats:
        raise ShapeMismatch("a channel needs at least one Kraus operator")
    shape = mats[0].shape
    for k in mats:
        if k.ndim != 2 or k.shape != shape:
            raise ShapeMismatch(f"Kraus operators must share one 2-D shape, got {shape} and {k.shape}")
        if not np.all(np.isfinite(k)):
            raise ShapeMismatch("Kraus operator has non-finite entries")
    total = sum(k.conj().T @ k for k in mats)
    dev = float(np.max(np.abs(total - np.eye(shape[1]))))
    if dev > kraus_tol:
        raise IncompleteChannel(dev, kraus_tol)
    for k in mats:
        k.flags.writeable = False
    return KrausChannel(tuple(mats))


def apply_channel(channel: KrausChannel, rho, tolerances=DEFAULT_TOLERANCES) -> DensityMatrix:
    rho = as_operator(rho, tolerances)
    if rho.dim != channel.input_dim:
        raise DimensionMismatch(rho.dim, channel.input_dim)
    out = sum(k @ rho.matrix @ k.conj().T for k in channel.operators)
    return validate_density(0.5 * (out + out.conj().T), tolerances)


def identity_channel(dim) -> KrausChannel:
    return kraus_validate([np.eye(dim)])


def random_channel(input_dim, output_dim, seed=None, env_dim=None) -> KrausChannel:
    """Random channel from a Haar isometry ``C^n -> C^m (x) C^e`` and a partial trace.

    The environment dimension defaults to ``output_dim``, raised to
    ``ceil(n / m)`` when that is needed for the isometry to exist.
    """
    rng = np.random.default_rng(seed)
    if env_dim is None:
        env_dim = max(output_dim, -(-input_dim // output_dim))
    rows = output_dim * env_dim
    g = (rng.standard_normal((rows, input_dim)) + 1j * rng.standard_normal((rows, input_dim))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    v = q * (d / np.abs(d))
    v = v.reshape(output_dim, env_dim, input_dim)
    return kraus_validate([v[:, e, :] for e in range(env_dim)])


def dpi_gap(divergence, channel, rho, sigma, alpha=None, base=LogBase.TWO, tolerances=DEFAULT_TOLERANCES) -> float:
    """``D(Phi rho || Phi sigma) - D(rho || sigma)``; positive values violate DPI.

    Returns ``nan`` when the input divergence is infinite.
    """
    fn = get_divergence(divergence)
    rho, sigma = as_operator(rho, tolerances), as_operator(sigma, tolerances)
    before = fn(rho, sigma, alpha, base, tolerances)
    after = fn(apply_channel(channel, rho, tolerances), apply_channel(channel, sigma, tolerances), alpha, base, tolerances)
    if math.isinf(before):
        return math.nan
    return float(after) - float(before)


@dataclass
class DPIReport:
    divergence: str
    alpha: float | None
    trials: int
    worst_gap: float
    worst_trial: int
    witness_channel: KrausChannel | None = None
    witness_rho: DensityMatrix | None = None
    witness_sigma: DensityMatrix | None = None
    violations: int = 0
    gaps: list = field(default_factory=list, repr=False)

    def to_dict(self):
        def cplx(m):
            a = np.asarray(m, dtype=complex)
            return [[[float(z.real), float(z.imag)] for z in row] for row in a]

        return {
            "divergence": self.divergence,
            "alpha": self.alpha,
            "trials": self.trials,
            "worst_gap": self.worst_gap,
            "worst_trial": self.worst_trial,
            "violations": self.violations,
            "witness": None
            if self.witness_channel is None
            else {
                "kraus": [cplx(k) for k in self.witness_channel.operators],
                "rho": cplx(self.witness_rho),
                "sigma": cplx(self.witness_sigma),
            },
        }


def dpi_random_search(
    divergence,
    alpha,
    input_dim,
    output_dim,
    trials,
    seed=0,
    base=LogBase.TWO,
    inject=(),
    violation_tol=1e-12,
    tolerances=DEFAULT_TOLERANCES,
) -> DPIReport:
    """Search random channels and full-rank state pairs for the largest DPI gap.

    ``inject`` is a sequence of ``(channel, rho, sigma)`` triples that occupy
    the first trial slots. Trial ``k`` draws from the ``k``-th child of
    ``SeedSequence(seed)``, so results do not depend on evaluation order.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    get_divergence(divergence)
    if divergence in ALPHA_FREE:
        alpha = None
    children = np.random.SeedSequence(seed).spawn(trials)
    inject = list(inject)
    report = DPIReport(divergence, alpha, trials, -math.inf, -1)
    for k in range(trials):
        if k < len(inject):
            channel, rho, sigma = inject[k]
            rho, sigma = as_operator(rho, tolerances), as_operator(sigma, tolerances)
        else:
            rng = np.random.default_rng(children[k])
            channel = random_channel(input_dim, output_dim, rng)
            rho = random_density(input_dim, input_dim, rng)
            sigma = random_density(input_dim, input_dim, rng)
        gap = dpi_gap(divergence, channel, rho, sigma, alpha, base, tolerances)
        report.gaps.append(gap)
        if gap > violation_tol:
            report.violations += 1
        if gap > report.worst_gap:
            report.worst_gap = gap
            report.worst_trial = k
            report.witness_channel = channel
            report.witness_rho = rho
            report.witness_sigma = sigma
    return report
