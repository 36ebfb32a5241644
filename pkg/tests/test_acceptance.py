"""Acceptance criteria, one test per criterion.

Run ``pytest tests/test_acceptance.py`` (or ``python3 tests/test_acceptance.py``);
the terminal summary lists PASS/FAIL per criterion.
"""

import io
import math
import time

import numpy as np
import pytest

from qalpha.channels import apply_channel, dpi_random_search
from qalpha.classical import theorem7_residual
from qalpha.cli import main
from qalpha.divergences import (
    d_min,
    escort_relation_residual,
    qdpd,
    s_alpha,
    s_alpha_zero_limit,
    umegaki,
)
from qalpha.io import SweepSpec, parse_sweep_csv, sweep
from qalpha.mixing import CommutingQuadruple, petz_convexity_gap, s_alpha_convexity_gap, z_factor
from qalpha.operators import (
    maximally_mixed,
    positive_operator,
    pure_state,
    random_commuting_family,
    random_density,
    random_unitary,
    tensor_product,
    validate_density,
)
from qalpha.reference import channel_cases, table_pairs


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_criterion_1_table_reproduction():
    with Timer() as timer:
        misses = []
        for label, rho, sigma, cells in table_pairs():
            for alpha, published in cells:
                value = float(s_alpha(rho, sigma, alpha, 2))
                if not abs(value - published) <= 2e-3:
                    misses.append(f"{label} alpha={alpha}: computed {value:.6f}, published {published}")
    assert timer.elapsed < 1.0
    assert not misses, "; ".join(misses)


def test_criterion_2_channel_examples():
    with Timer() as timer:
        results = {}
        for name, channel, rho, sigma, alpha, before_pub, after_pub, tol in channel_cases():
            before = float(s_alpha(rho, sigma, alpha))
            after = float(s_alpha(apply_channel(channel, rho), apply_channel(channel, sigma), alpha))
            results[name] = (before, after, before_pub, after_pub, tol)
    assert timer.elapsed < 1.0
    b, a, bp, ap, tol = results["contracting"]
    assert tol == 5e-3
    assert abs(b - bp) <= tol and abs(a - ap) <= tol
    assert a - b < 0
    b, a, bp, ap, tol = results["merging"]
    assert tol == 2e-3
    assert abs(b - bp) <= tol and abs(a - ap) <= tol
    assert a - b > 0


def test_criterion_3_nz_equivalence():
    alphas = (0.3, 0.5, 1.5, 2.0, 3.0)
    children = np.random.SeedSequence(2024).spawn(1000)
    worst = 0.0
    with Timer() as timer:
        for k, child in enumerate(children):
            rng = np.random.default_rng(child)
            dim = 2 + k % 5
            if k % 4 == 3:
                # commuting pair
                rho, sigma = random_commuting_family(dim, 2, rng)
            else:
                rank = dim if k % 4 else int(rng.integers(1, dim + 1))
                rho, sigma = random_density(dim, rank, rng), random_density(dim, seed=rng)
            for a in alphas:
                worst = max(worst, theorem7_residual(rho, sigma, a))
    assert timer.elapsed < 30.0
    assert worst <= 1e-10


def _lemma_suite():
    rng = np.random.default_rng(7)
    alphas = (0.3, 0.5, 0.9, 1.5, 2.0, 3.0)

    # non-negativity, equality iff rho = sigma
    for k in range(1000):
        dim = 2 + k % 5
        if k % 2:
            rho, sigma = random_commuting_family(dim, 2, rng)
        else:
            rho, sigma = random_density(dim, seed=rng), random_density(dim, seed=rng)
        a = alphas[k % len(alphas)]
        v = float(s_alpha(rho, sigma, a))
        assert v >= -1e-10
        assert v > 1e-10, "distinct states gave zero"
        assert abs(float(s_alpha(rho, rho, a))) <= 1e-10

    for k in range(100):
        a = alphas[k % len(alphas)]
        rho, sigma, tau, omega = (random_density(2 + k % 2, seed=rng) for _ in range(4))
        # tensor additivity
        joint = s_alpha(tensor_product(rho, tau), tensor_product(sigma, omega), a)
        assert abs(float(joint) - float(s_alpha(rho, sigma, a)) - float(s_alpha(tau, omega, a))) <= 1e-9
        # unitary invariance
        u = random_unitary(rho.dim, rng)
        assert abs(float(s_alpha(rho.conjugated(u), sigma.conjugated(u), a)) - float(s_alpha(rho, sigma, a))) <= 1e-9
        # escort relation
        assert escort_relation_residual(rho, sigma, a) <= 1e-10

    # scale invariance; QDPD is not scale invariant
    rho, sigma = random_density(3, seed=1), random_density(3, seed=2)
    for a in alphas:
        ref = float(s_alpha(rho, sigma, a))
        for k1 in (0.5, 2, 10):
            for k2 in (0.5, 2, 10):
                scaled = s_alpha(positive_operator(k1 * rho.matrix), positive_operator(k2 * sigma.matrix), a)
                assert abs(float(scaled) - ref) <= 1e-9
    assert abs(float(qdpd(positive_operator(2 * rho.matrix), sigma, 2)) - float(qdpd(rho, sigma, 2))) > 1e-3

    # first-order convergence to Umegaki as alpha -> 1
    u_val = float(umegaki(rho, sigma))
    errs = {h: max(abs(float(s_alpha(rho, sigma, 1 + s * h)) - u_val) for s in (1, -1)) for h in (1e-3, 1e-4)}
    c = errs[1e-3] / 1e-3
    assert errs[1e-4] <= 1.5 * c * 1e-4
    assert 5 <= errs[1e-3] / errs[1e-4] <= 20

    # alpha -> 0 limit
    low_rank = random_density(4, rank=2, seed=3)
    full = random_density(4, seed=4)
    assert abs(float(s_alpha(low_rank, full, 1e-4)) - s_alpha_zero_limit(low_rank, full)) <= 1e-2
    assert s_alpha_zero_limit(low_rank, full) == pytest.approx(1.0)

    # D_min coincides with the zero limit iff sigma is maximally mixed
    for r in (pure_state([1, 0, 0]), random_density(3, rank=2, seed=5)):
        mm = maximally_mixed(3)
        assert abs(float(d_min(r, mm)) - s_alpha_zero_limit(r, mm)) <= 1e-10
    r, s = pure_state([1, 0]), validate_density(np.diag([0.75, 0.25]))
    assert abs(float(d_min(r, s)) - s_alpha_zero_limit(r, s)) > 1e-3


def test_criterion_4_lemma_suite():
    with Timer() as timer:
        _lemma_suite()
    assert timer.elapsed < 60.0


def test_criterion_5_generalized_convexity():
    ts = (0.25, 0.5, 0.75)
    below, above = (0.3, 0.5, 0.9), (1.5, 2.0, 3.0)
    children = np.random.SeedSequence(55).spawn(500)
    worst_s_below = worst_s_above = worst_p_below = worst_p_above = None
    worst_log_z = -math.inf
    with Timer() as timer:
        for k, child in enumerate(children):
            rng = np.random.default_rng(child)
            family = random_commuting_family(2 + k % 4, 4, rng)
            t = ts[k % 3]
            for a in below + above:
                quad = CommutingQuadruple(*family, t=t, alpha=a)
                s_gap = s_alpha_convexity_gap(quad)
                p_gap = petz_convexity_gap(quad)
                if a < 1:
                    worst_s_below = s_gap if worst_s_below is None else min(worst_s_below, s_gap)
                    worst_p_below = p_gap if worst_p_below is None else max(worst_p_below, p_gap)
                else:
                    worst_s_above = s_gap if worst_s_above is None else max(worst_s_above, s_gap)
                    worst_p_above = p_gap if worst_p_above is None else min(worst_p_above, p_gap)
                for x, y in ((family[0], family[1]), (family[2], family[3])):
                    worst_log_z = max(worst_log_z, math.log(z_factor(x, y, t, a)))
    assert timer.elapsed < 60.0
    assert worst_s_below >= -1e-9
    assert worst_s_above <= 1e-9
    assert worst_p_above >= -1e-9
    assert worst_p_below <= 1e-9
    assert worst_log_z <= 1e-12


def test_criterion_6_dpi_anchors():
    with Timer() as timer:
        worst = -math.inf
        for seed, (n, m) in enumerate([(2, 2), (3, 2), (4, 2), (4, 3), (4, 4)]):
            report = dpi_random_search("umegaki", None, n, m, 40, seed=seed)
            worst = max(worst, report.worst_gap)
        slack = -math.inf
        rng = np.random.default_rng(66)
        for k in range(500):
            dim = 2 + k % 3
            r1, r2, sigma = (random_density(dim, seed=rng) for _ in range(3))
            for a in (0.5, 2.0, 3.0):
                for t in (0.25, 0.5, 0.75):
                    mix = validate_density(t * r1.matrix + (1 - t) * r2.matrix)
                    lhs = float(qdpd(mix, sigma, a))
                    rhs = t * float(qdpd(r1, sigma, a)) + (1 - t) * float(qdpd(r2, sigma, a))
                    slack = max(slack, lhs - rhs)
    assert timer.elapsed < 60.0
    assert worst <= 1e-8
    assert slack <= 1e-10


def _cli_sweep(pair):
    out = io.StringIO()
    code = main(["sweep", "--pair", str(pair), "--alpha-min", "0.1", "--alpha-max", "3"], stdout=out, environ={})
    assert code == 0
    return out.getvalue()


def test_criterion_7_sweep_determinism():
    for pair in (1, 2, 3):
        first, second = _cli_sweep(pair), _cli_sweep(pair)
        assert first == second
        assert first.encode() == second.encode()
    _, rho, sigma, _ = table_pairs()[2]
    _, rows = parse_sweep_csv(sweep(rho, sigma, SweepSpec(grid=(1.5, 2.0, 3.0))))
    s15, s2, s3 = (r[1] for r in rows)
    assert s15 < s2 > s3
    # the full default grid shows the same rise then fall
    _, rows = parse_sweep_csv(_cli_sweep(3))
    values = [r[1] for r in rows]
    peak = int(np.argmax(values))
    assert 0 < peak < len(values) - 1


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
