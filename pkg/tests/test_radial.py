from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from exotic_walks import radial
from exotic_walks.errors import BudgetExceeded, InvalidParameter
from exotic_walks.profiles import make_profile
from exotic_walks.radial import (ConstantProfile, RadialDistribution, TableProfile,
                                 distribution_at, step)

CONST = ConstantProfile()

tables = st.lists(st.floats(0.05, 0.25), min_size=1, max_size=40)


def test_first_steps():
    d1 = step(RadialDistribution.delta0(exact=True), CONST)
    assert d1.as_dict() == {1: 1}
    d2 = step(d1, CONST)
    assert d2.as_dict() == {0: Fraction(1, 4), 2: Fraction(3, 4)}
    assert d2.mass_at(1) == 0


def test_distribution_examples():
    assert distribution_at(0, CONST).as_dict() == {0: 1.0}
    assert distribution_at(2, CONST).as_dict() == {0: 0.25, 2: 0.75}
    assert abs(distribution_at(200, CONST).total() - 1) < 1e-12


def test_expected_distance_examples():
    assert radial.expected_distance(1, CONST) == 1
    assert radial.expected_distance(2, CONST) == pytest.approx(1.5, abs=1e-14)
    assert 50.5 <= radial.expected_distance(100, CONST) <= 50.75


def test_engine_matches_step_laws():
    prof = TableProfile(np.random.default_rng(3).uniform(0.05, 0.25, 120))
    eng = radial.RadialEngine(prof, 301)
    for n, d in enumerate(radial.iter_laws(301, prof)):
        if n % 37 == 0:
            law = eng.advance_to(n).law()
            assert np.max(np.abs(law.dense() - d.dense())) < 1e-15
            assert eng.mean[n] == pytest.approx(d.mean(), rel=1e-13, abs=1e-13)


@given(tables, st.integers(0, 120))
def test_parity_and_mass(values, n):
    d = distribution_at(n, TableProfile(values))
    dense = d.dense()
    assert np.all(dense >= 0)
    assert abs(dense.sum() - 1) <= 1e-12
    assert np.all(dense[(n + 1) % 2::2] == 0)


@given(tables, st.integers(0, 64))
def test_float_agrees_with_exact(values, n):
    prof = TableProfile([Fraction(v).limit_denominator(10 ** 6) for v in values])
    exact = distribution_at(n, prof, exact=True)
    assert sum(exact.mass) == 1
    approx = distribution_at(n, prof)
    tv = sum(abs(float(a) - b) for a, b in zip(exact.dense(), approx.dense())) / 2
    assert tv <= 1e-12


@given(tables, st.lists(st.floats(0, 1), min_size=40, max_size=40), st.integers(1, 150))
def test_lower_lambda_never_lowers_mean(values, shrink, n):
    hi = np.array(values + [values[-1]] * (40 - len(values)))
    lo = hi * np.array(shrink) * 0.999 + 1e-3
    lo = np.minimum(lo, hi)
    assert radial.expected_distance(n, TableProfile(lo)) >= radial.expected_distance(n, TableProfile(hi)) - 1e-9


def test_identity_residual_examples():
    assert radial.identity_residual(1, 1, CONST) < 1e-12
    assert radial.identity_residual(50, 25, CONST) <= 1e-10
    prof = radial.random_tame_profile(np.random.default_rng(11), 60)
    assert radial.identity_residual(50, 50, prof) <= 1e-10
    with pytest.raises(InvalidParameter):
        radial.identity_residual(5, 6, CONST)


def test_return_mass():
    assert radial.return_mass_sum(0, CONST) == 1
    assert radial.return_mass_sum(200, CONST) == pytest.approx(1.5, abs=1e-6)
    assert radial.return_mass_sum(200, ConstantProfile(Fraction(1, 8))) < radial.return_mass_sum(200, CONST)


def test_hitting_probabilities():
    assert radial.hitting_zero_probability(1, 0.75, 4000) == pytest.approx(1 / 3, abs=1e-3)
    assert radial.hitting_zero_probability(2, 0.75, 4000) == pytest.approx(1 / 9, abs=1e-3)
    assert radial.hitting_zero_probability(1, 1.0, 100) == 0


def test_samplers():
    assert list(radial.sample_radial_path(0, CONST, 1)) == [0]
    assert list(radial.sample_radial_path(1, CONST, 1)) == [0, 1]
    path = radial.sample_radial_path(500, CONST, 2)
    assert np.all(np.abs(np.diff(path)) == 1) and np.all(path >= 0)
    n = 10 ** 4
    ends = radial.sample_radial_endpoints(n, CONST, 10 ** 4, seed=5)
    law = distribution_at(n, CONST)
    sd = np.sqrt(law.dense() @ np.arange(n + 1) ** 2 - law.mean() ** 2)
    assert abs(ends.mean() - law.mean()) <= 3 * sd / np.sqrt(len(ends))


def test_budget(monkeypatch):
    with pytest.raises(BudgetExceeded):
        distribution_at(65, CONST, exact=True)
    monkeypatch.setenv(radial.BUDGET_ENV, "100")
    with pytest.raises(BudgetExceeded):
        distribution_at(101, CONST)
    assert distribution_at(100, CONST).time == 100


def test_tame_eligibility():
    assert CONST.tame_eligible
    assert make_profile("no-drift").tame_eligible
    assert not TableProfile([0.3]).tame_eligible
