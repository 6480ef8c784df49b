"""Acceptance criteria 1-11.

Each test prints a single PASS/FAIL line with the measured quantity, the
tolerance it is judged against and the runtime, then asserts the same verdict.
"""

import math
import time
from fractions import Fraction

import numpy as np

from exotic_walks import diagnostics as dg
from exotic_walks import qi, radial, tameness
from exotic_walks.profiles import NoCltSchedule, NoDriftSchedule, make_profile
from exotic_walks.radial import ConstantProfile

CONST = ConstantProfile()
CFG = qi.QiConfig(4, 8)


def constructions():
    # the push-forward walk is a bijective image of the simple random walk,
    # so its radial chain is the constant-1/4 chain
    return {"no-drift": make_profile("no-drift"), "no-clt": make_profile("no-clt"),
            "pushforward": CONST}


def verdict(capsys, label, ok, detail, elapsed, limit):
    ok = bool(ok) and elapsed < limit
    line = f"[criterion {label}] {'PASS' if ok else 'FAIL'}: {detail} (runtime {elapsed:.1f}s < {limit}s)"
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def test_criterion_01_expectation_identity(capsys):
    t = time.perf_counter()
    rng = np.random.default_rng(20231117)
    profs = [radial.random_tame_profile(rng, 201) for _ in range(100)]
    profs += list(constructions().values())
    worst = 0.0
    for prof in profs:
        worst = max(worst, float(np.nanmax(radial.identity_residual_table(200, prof))))
    verdict(capsys, "1", worst <= 1e-10,
            f"max residual {worst:.3e} <= 1e-10 over {len(profs)} profiles, n <= 200",
            time.perf_counter() - t, 30)


def test_criterion_02_constant_drift(capsys):
    t = time.perf_counter()
    devs = {n: abs(radial.expected_distance(n, CONST) / n - 0.5) for n in (100, 1000, 10000)}
    ok = all(d <= 1 / n for n, d in devs.items())
    detail = ", ".join(f"n={n}: {d:.3e} <= {1 / n:.0e}" for n, d in devs.items())
    verdict(capsys, "2", ok, "|E/n - 1/2| " + detail, time.perf_counter() - t, 10)


def test_criterion_03_transience_constants(capsys):
    t = time.perf_counter()
    visits = radial.return_mass_sum(200, CONST)
    q = radial.hitting_zero_probability(1, 0.75, 5000)
    D = 0.25 + 0.75 * q
    ok = abs(visits - 1.5) <= 1e-6 and abs(q - 1 / 3) <= 1e-3 and abs(D - 0.5) <= 1e-3
    verdict(capsys, "3", ok,
            f"visits {visits:.9f} (1.5 +- 1e-6), q {q:.6f} (1/3 +- 1e-3), D {D:.6f} (1/2 +- 1e-3)",
            time.perf_counter() - t, 5)


def test_criterion_04_no_drift_oscillation(capsys):
    t = time.perf_counter()
    sch = NoDriftSchedule(0.2, kind="geometric", base=4, n0=16)
    cps = dg.no_drift_checkpoints(sch, range(4, 9))
    s = dg.drift_series(make_profile("no-drift", kind="geometric", base=4, n0=16), cps[-1][0], cps)
    odd, even = s.tagged("odd"), s.tagged("even")
    gap = dg.oscillation_report(s, odd, even)
    vals = ", ".join(f"{n}:{s.normalized(n):.4f}{tag[0]}" for n, tag in cps)
    verdict(capsys, "4", gap >= 0.05,
            f"even-min minus odd-max {gap:.4f} >= 0.05 [{vals}]", time.perf_counter() - t, 120)


def test_criterion_04_literal_schedule(capsys):
    t = time.perf_counter()
    cps = dg.no_drift_checkpoints(NoDriftSchedule(0.2), [3, 4])
    s = dg.drift_series(make_profile("no-drift"), 65536, cps)
    a, b = s.normalized(512), s.normalized(65536)
    verdict(capsys, "4-literal", a < b,
            f"odd N3=512: {a:.4f} < even N4=65536: {b:.4f}", time.perf_counter() - t, 600)


def test_criterion_05a_no_clt_drift(capsys):
    t = time.perf_counter()
    sch = NoCltSchedule(0.05, 8192)
    ns = [sch.boundary(1), sch.boundary(2), sch.post_band_checkpoint(2)]
    s = dg.drift_series(make_profile("no-clt", 0.05, N1=8192), ns[-1], [(n, "") for n in ns])
    devs = {n: abs(s.normalized(n) - 0.5) for n in ns}
    detail = ", ".join(f"n={n}: {d:.4f}" for n, d in devs.items())
    verdict(capsys, "5a", all(d <= 0.02 for d in devs.values()),
            f"|E/n - 1/2| <= 0.02 at {detail}", time.perf_counter() - t, 300)


def test_criterion_05b_no_clt_gaussian_distance(capsys):
    t = time.perf_counter()
    sch = NoCltSchedule(0.05, 8192)
    m = sch.post_band_checkpoint(2)
    base = dg.clt_diagnostics(CONST, m, 0.5, math.sqrt(0.75)).ks_distance
    grid = dg.clt_grid(make_profile("no-clt", 0.05, N1=8192), m,
                       [math.sqrt(s2) for s2 in dg.SIGMA2_GRID])
    ks = [g.ks_distance for g in grid]
    ok = base <= 0.05 and min(ks) >= 0.2
    verdict(capsys, "5b", ok,
            f"m={m}: constant KS {base:.4f} <= 0.05, band-profile KS min {min(ks):.4f} >= 0.2 "
            f"over sigma^2 in {list(dg.SIGMA2_GRID)}", time.perf_counter() - t, 300)


def test_criterion_06_block_displacement(capsys):
    t = time.perf_counter()
    ok = qi.displacement_distribution(4, 4).counts == {3: 13, 4: 41, 7: 27}
    ok &= qi.d_x(4) == Fraction(68, 81)
    for C in range(4, 9):
        dx = qi.d_x(C)
        ok &= qi.displacement_distribution(C, C).counts == qi.leaf_class_counts(C)
        ok &= Fraction(C - 2, 3) <= dx <= Fraction(C - 1, 3)
    verdict(capsys, "6", ok, f"C=4 leaves {{3:13, 4:41, 7:27}}, D_X = {qi.d_x(4)}; "
            f"closed forms and bounds exact for C = 4..8", time.perf_counter() - t, 10)


def test_criterion_07_sphere_averages(capsys):
    t = time.perf_counter()
    ser = qi.a_series(12, CFG)
    ok = all(ser.values[4 * q] == 4 * q + CFG.x_count(q) * qi.d_x(4) for q in range(4))
    mism = [i for i in range(13) if ser.values[i] != qi.sphere_average(i, CFG)]
    verdict(capsys, "7", ok and not mism,
            f"A(qC) formula exact for q <= 3; sphere brute force mismatches for i <= 12: {mism}",
            time.perf_counter() - t, 120)


def test_criterion_08_quasi_isometry(capsys):
    t = time.perf_counter()
    rep = qi.verify_qi(12, CFG, sample_pairs=10 ** 5, seed=20231117, sample_depth=1000,
                       pair_cap=0)
    small = qi.verify_qi(8, CFG)
    ok = rep.ok and small.ok and small.pairwise_max_ratio <= 4
    verdict(capsys, "8", ok,
            f"ball 12 ({rep.ball_size} nodes): injective {rep.injective}, round-trip {rep.roundtrip}, "
            f"certified ratio {rep.certified_ratio} <= 4; ball 8 all pairs {small.pairwise_max_ratio}; "
            f"1e5 sampled pairs {rep.sampled_max_ratio:.3f}", time.perf_counter() - t, 180)


def test_criterion_09_pushforward_law(capsys):
    t = time.perf_counter()
    tvs = [qi.pushforward_law_check(n, CFG) for n in range(7)]
    verdict(capsys, "9", max(tvs) <= 1e-12, f"total variation for n = 0..6: {[str(v) for v in tvs]}",
            time.perf_counter() - t, 30)


def test_criterion_10_pushforward_oscillation(capsys):
    t = time.perf_counter()
    cps = dg.qi_checkpoints(CFG, [1, 2])
    s = dg.drift_series(CFG, 2 ** 17, cps)
    gap = dg.oscillation_report(s, s.tagged("low"), s.tagged("high"))
    n = 1000
    d = qi.simulate_pushforward_distances(n, CFG, 10 ** 5, seed=20231117)
    exact = s.expectation[n]
    z = abs(d.mean() - exact) / (d.std(ddof=1) / math.sqrt(len(d)))
    vals = ", ".join(f"{n}:{s.normalized(n):.4f}" for n, _ in cps)
    verdict(capsys, "10", gap >= 0.01 and z <= 3,
            f"gap {gap:.4f} >= 0.01 [{vals}]; Monte Carlo mean {d.mean():.3f} vs exact {exact:.3f} "
            f"({z:.2f} sigma <= 3)", time.perf_counter() - t, 600)


def test_criterion_11_point_probability_decay(capsys):
    t = time.perf_counter()
    worst = {}
    defects = {}
    for name, prof in constructions().items():
        p = tameness.point_probability_series(200, prof)
        n = np.arange(50, 201)
        worst[name] = float(np.max(p[n] ** (1.0 / n)))
        defects[name] = tameness.sphere_uniformity_defect(6, prof)
    ok = all(v <= 0.99 for v in worst.values()) and all(v == 0 for v in defects.values())
    detail = ", ".join(f"{k}: {v:.4f}" for k, v in worst.items())
    verdict(capsys, "11", ok, f"max p_n^(1/n) for 50 <= n <= 200 <= 0.99 ({detail}); "
            f"sphere-uniformity defect n <= 6: {set(map(str, defects.values()))}",
            time.perf_counter() - t, 60)
