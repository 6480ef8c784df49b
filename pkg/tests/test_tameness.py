import math
from fractions import Fraction

import numpy as np
import pytest

from exotic_walks import radial, tameness, words
from exotic_walks.errors import InvalidParameter
from exotic_walks.profiles import make_profile
from exotic_walks.radial import ConstantProfile, TableProfile

CONST = ConstantProfile()
CONSTRUCTIONS = {
    "no-drift": make_profile("no-drift"),
    "no-clt": make_profile("no-clt"),
    # the push-forward walk is the image of the simple random walk under a bijection
    "pushforward": CONST,
}


@pytest.mark.parametrize("prof", [CONST, make_profile("no-drift"), make_profile("no-clt"),
                                  TableProfile([0.1, 0.2, 0.05])])
def test_bounded_jumps(prof):
    ok, support = tameness.check_bounded_jumps(prof)
    assert ok and len(support) == 4


def test_rows_sum_to_one_exactly():
    for w in ("", "a", "dcb"):
        assert sum(tameness.transition_row(w, make_profile("no-drift")).values()) == 1


def test_point_probability_examples():
    assert tameness.max_point_probability(1, CONST) == 0.25
    assert tameness.max_point_probability(2, CONST) == 0.25
    assert tameness.max_point_probability(100, CONST) ** (1 / 100) < 1
    with pytest.raises(InvalidParameter):
        tameness.max_point_probability(0, CONST)


def test_point_probability_matches_vertex_law():
    prof = make_profile("no-drift", kind="geometric", n0=2)
    for n in range(1, 7):
        law = tameness.vertex_law(n, prof)
        assert tameness.max_point_probability(n, prof) == pytest.approx(float(max(law.values())), rel=1e-12)


@pytest.mark.parametrize("name", sorted(CONSTRUCTIONS))
def test_point_probabilities_decay(name):
    p = tameness.point_probability_series(200, CONSTRUCTIONS[name])
    n = np.arange(10, 201)
    assert np.max(np.log(p[n]) / n) < -0.01


@pytest.mark.parametrize("prof", [CONST, make_profile("no-drift", kind="geometric", n0=2),
                                  TableProfile([Fraction(1, 5), Fraction(1, 10), Fraction(1, 4)])])
def test_sphere_uniformity_certificate(prof):
    assert tameness.sphere_uniformity_defect(6, prof) == 0


def test_irreducibility_examples():
    assert tameness.irreducibility_bound("c", CONST)[2] == 0.25
    assert tameness.irreducibility_bound("ab", CONST) == (2, 0.0625, 0.0625)
    K, eps, _ = tameness.irreducibility_bound("abc", ConstantProfile(0.2))
    assert K == 3 and eps == pytest.approx(0.008)
    with pytest.raises(InvalidParameter):
        tameness.irreducibility_bound("", CONST)


@pytest.mark.parametrize("prof", list(CONSTRUCTIONS.values()) + [TableProfile([0.05, 0.25, 0.1])])
def test_exact_geodesic_bound_dominates_eps(prof):
    for u in words.ball(8):
        if u and len(u) in (1, 2, 5, 8):
            _, eps, exact = tameness.irreducibility_bound(u, prof)
            assert exact >= eps > 0


def test_transience_increments_vanish():
    assert radial.return_mass_sum(3000, CONST) - radial.return_mass_sum(100, CONST) < 1e-6


def test_linear_progress():
    assert tameness.linear_progress_check(10, 1e-9, CONST) >= 1 - radial.distribution_at(10, CONST).mass_at(0) - 1e-15
    assert tameness.linear_progress_check(400, 0.25, CONST) >= 0.999
    assert tameness.linear_progress_check(400, 0.9, CONST) <= 0.001
    small = [tameness.linear_progress_check(n, 0.3, CONST) for n in (50, 200, 800)]
    assert small == sorted(small)
    with pytest.raises(InvalidParameter):
        tameness.linear_progress_check(10, 1.0, CONST)


def test_chernoff():
    assert tameness.chernoff_bound(5, 0.5, 0) == 1
    assert tameness.chernoff_bound(18, 0.5, 1 / 6) == pytest.approx(math.exp(-1))
    assert tameness.chernoff_bound(10 ** 6, 0.5, 0.1) < 1e-300
    with pytest.raises(InvalidParameter):
        tameness.chernoff_bound(10, 0.7, 0.4)
    with pytest.raises(InvalidParameter):
        tameness.chernoff_bound(10, 0.5, -0.1)


def test_report_json():
    rep = tameness.tameness_report(CONST, horizon=60, transience_horizon=300)
    d = rep.as_dict()
    assert {"bounded_jumps", "rho_fit", "horizon", "irreducibility",
            "transience_partial_sum"} <= set(d)
    assert rep.rho_below_one and rep.bounded_jumps
    assert d["irreducibility"][0] == {"u": "a", "K": 1, "eps": 0.25, "exact": 0.25}
    assert rep.transience_partial_sum == pytest.approx(1.5, abs=1e-9)
    assert rep.to_json() == tameness.tameness_report(CONST, horizon=60, transience_horizon=300).to_json()
