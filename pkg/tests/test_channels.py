import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qalpha.channels import (
    apply_channel,
    dpi_gap,
    dpi_random_search,
    identity_channel,
    kraus_validate,
    random_channel,
)
from qalpha.divergences import s_alpha
from qalpha.errors import DimensionMismatch, IncompleteChannel, ShapeMismatch
from qalpha.operators import maximally_mixed, pure_state, random_density, validate_density
from qalpha.reference import contracting_channel, merging_channel

seeds = st.integers(0, 2**32 - 1)


def test_kraus_validation():
    with pytest.raises(IncompleteChannel):
        kraus_validate([np.eye(2) * 0.9])
    with pytest.raises(ShapeMismatch):
        kraus_validate([np.eye(2), np.eye(3)])
    with pytest.raises(ShapeMismatch):
        kraus_validate([])


@given(seeds, st.integers(1, 4), st.integers(1, 4))
def test_random_channel_is_cptp(seed, n, m):
    ch = random_channel(n, m, seed)
    total = sum(k.conj().T @ k for k in ch.operators)
    np.testing.assert_allclose(total, np.eye(n), atol=1e-12)
    out = apply_channel(ch, random_density(n, seed=seed))
    assert out.dim == m and out.trace == pytest.approx(1.0)


def test_apply_channel_dimension_check():
    with pytest.raises(DimensionMismatch):
        apply_channel(identity_channel(2), maximally_mixed(3))


def test_contracting_channel_output():
    out = apply_channel(contracting_channel(), pure_state([1, 0]))
    np.testing.assert_allclose(out.matrix, np.diag([0.6, 0.4]), atol=1e-15)
    out = apply_channel(contracting_channel(), pure_state([0, 1]))
    np.testing.assert_allclose(out.matrix, np.diag([0.05, 0.95]), atol=1e-15)


def test_merging_channel_output():
    out = apply_channel(merging_channel(), validate_density(np.diag([0.5, 0.25, 0.25])))
    np.testing.assert_allclose(out.matrix, np.diag([0.5, 0.5]), atol=1e-15)


def test_identity_gap_is_zero():
    rho, sigma = random_density(3, seed=1), random_density(3, seed=2)
    assert dpi_gap("s_alpha", identity_channel(3), rho, sigma, 2.0) == pytest.approx(0, abs=1e-12)


def test_gap_nan_for_infinite_input():
    gap = dpi_gap("umegaki", identity_channel(2), maximally_mixed(2), pure_state([1, 0]))
    assert math.isnan(gap)


def test_merging_example_violates_dpi():
    rho, sigma = validate_density(np.diag([0.5, 0.25, 0.25])), validate_density(np.diag([0.7, 0.2, 0.1]))
    gap = dpi_gap("s_alpha", merging_channel(), rho, sigma, 2.0)
    # independent scalar oracle on the output pair diag(.5,.5), diag(.7,.3)
    after = -2 * math.log2(0.5 * 0.7 + 0.5 * 0.3) + math.log2(0.5) + math.log2(0.49 + 0.09)
    before = float(s_alpha(rho, sigma, 2.0))
    assert gap == pytest.approx(after - before, abs=1e-12)
    assert gap > 0


def test_search_is_reproducible_and_finds_injected_witness():
    rho, sigma = validate_density(np.diag([0.5, 0.25, 0.25])), validate_density(np.diag([0.7, 0.2, 0.1]))
    a = dpi_random_search("s_alpha", 2.0, 3, 2, 10, seed=3, inject=[(merging_channel(), rho, sigma)])
    b = dpi_random_search("s_alpha", 2.0, 3, 2, 10, seed=3, inject=[(merging_channel(), rho, sigma)])
    assert a.gaps == b.gaps
    assert a.violations >= 1 and a.worst_gap > 0.04
    d = a.to_dict()
    assert d["witness"]["rho"][0][0] == [0.5, 0.0]


def test_search_trials_independent_of_count():
    short = dpi_random_search("umegaki", None, 2, 2, 5, seed=11)
    long = dpi_random_search("umegaki", None, 2, 2, 10, seed=11)
    assert short.gaps == long.gaps[:5]


def test_umegaki_never_violates():
    report = dpi_random_search("umegaki", None, 3, 2, 40, seed=1)
    assert report.worst_gap <= 1e-8
    assert report.alpha is None
