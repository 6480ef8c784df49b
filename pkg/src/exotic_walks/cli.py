"""Command-line front end.

Every subcommand produces one or more text artifacts plus a manifest that
records the parameters and the sha256 of each artifact.  With ``--out DIR``
the artifacts and ``manifest.json`` are written there; otherwise the
artifacts go to stdout and the manifest to stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import os
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from . import __version__, _io, diagnostics, qi, tameness, words
from .errors import BudgetExceeded, InvalidParameter, InvariantViolation, NoPreimage
from .profiles import NoCltSchedule, NoDriftSchedule, make_profile
from .radial import distribution_at

DEFAULT_SEED = 20231117

EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_INVARIANT = 4


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}")


def _float_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", metavar="DIR", help="write artifacts and manifest.json into DIR")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="64-bit seed for all randomness")


def _profile_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--profile", choices=["const", "no-drift", "no-clt"], default="const")
    p.add_argument("--lambda", dest="lam", type=_fraction, default=None,
                   help="backward probability (default 1/4, 0.2 or 0.05 by profile)")
    p.add_argument("--kind", choices=["literal", "geometric"], default=None,
                   help="no-drift boundaries: 2^(s^2) or n0*base^s")
    p.add_argument("--sched-base", type=int, default=None, help="geometric no-drift base")
    p.add_argument("--n0", type=int, default=None, help="geometric no-drift scale")
    p.add_argument("--N1", type=int, default=None, help="no-clt first boundary")
    p.add_argument("--band-exponent", type=_fraction, default=None)
    p.add_argument("--kick-exponent", type=_fraction, default=None)


def _qi_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--C", type=int, default=4, help="block depth")
    p.add_argument("--base", type=int, default=8, help="base of the stretched block set")


def _build_profile(a):
    lam = a.lam
    if a.profile == "const" and lam is not None and not 0 < lam <= Fraction(1, 4):
        raise InvalidParameter(f"lambda must lie in (0, 1/4], got {lam}")
    return make_profile(a.profile, lam, kind=a.kind, base=a.sched_base, n0=a.n0, N1=a.N1,
                        band_exponent=a.band_exponent, kick_exponent=a.kick_exponent)


def _cfg(a) -> qi.QiConfig:
    return qi.QiConfig(a.C, a.base)


def cmd_dist(a) -> Dict[str, str]:
    prof = _build_profile(a)
    law = distribution_at(a.n, prof, exact=a.exact)
    rows = sorted(law.as_dict().items())
    return {"dist.csv": _io.csv_text(["j", "mass"], rows)}


def _drift_checkpoints(a, prof, cfg):
    if a.checkpoints is None:
        return []
    if cfg is not None:
        return diagnostics.qi_checkpoints(cfg, a.checkpoints)
    sched = getattr(prof, "schedule", None)
    if isinstance(sched, NoDriftSchedule):
        return diagnostics.no_drift_checkpoints(sched, a.checkpoints)
    if isinstance(sched, NoCltSchedule):
        out = []
        for s in a.checkpoints:
            out.append((sched.boundary(s), "boundary"))
            out.append((sched.post_band_checkpoint(s), "post-band"))
        return out
    return [(n, "n") for n in a.checkpoints]


def _split_tags(cps):
    tags = sorted({t for _, t in cps})
    pairs = {("even", "odd"): ("odd", "even"), ("high", "low"): ("low", "high"),
             ("boundary", "post-band"): ("boundary", "post-band")}
    if tuple(tags) in pairs:
        lo, hi = pairs[tuple(tags)]
        return [n for n, t in cps if t == lo], [n for n, t in cps if t == hi]
    ns = [n for n, _ in cps]
    return ns, ns


def cmd_drift(a) -> Dict[str, str]:
    cfg = _cfg(a) if a.qi else None
    prof = None if a.qi else _build_profile(a)
    cps = _drift_checkpoints(a, prof, cfg)
    horizon = a.horizon if a.horizon is not None else max([n for n, _ in cps], default=1000)
    series = diagnostics.drift_series(cfg if a.qi else prof, horizon, cps)
    out = {"drift.csv": series.csv(every=a.every or not cps)}
    if cps:
        lo, hi = _split_tags(cps)
        out["summary.json"] = _io.json_text(diagnostics.gap_summary(series, lo, hi))
    else:
        out["summary.json"] = _io.json_text({"gap": None, "checkpoints": [], "ks": [],
                                             "source": series.source, "horizon": horizon,
                                             "final_normalized": series.normalized(horizon)})
    return out


def cmd_tame(a) -> Dict[str, str]:
    prof = _build_profile(a)
    targets = [w for w in words.ball(a.words) if w]
    rep = tameness.tameness_report(prof, horizon=a.horizon, targets=targets)
    if any(r["exact"] < r["eps"] for r in rep.irreducibility):
        raise InvariantViolation("geodesic probability fell below lambda_min^depth")
    return {"tame.json": _io.json_text(rep.as_dict())}


def cmd_qi_map(a) -> Dict[str, str]:
    cfg = _cfg(a)
    w = a.word
    if a.mode == "relative":
        if a.inverse:
            table = {v: k for k, v in qi.x_table(cfg.C).items()}
            if w not in table:
                raise NoPreimage(f"{w!r} is not the image of a relative word")
            res = table[w]
        else:
            res = qi.apply_X(cfg.C, w)
    else:
        words.validate(w)
        res = qi.invert_f(w, cfg) if a.inverse else qi.apply_f(w, cfg)
    return {"map.txt": res + "\n"}


def cmd_qi_verify(a) -> Dict[str, str]:
    cfg = _cfg(a)
    rep = qi.verify_qi(a.ball, cfg, sample_pairs=a.pairs, seed=a.seed, sample_depth=a.depth,
                       pair_cap=a.pair_cap)
    text = _io.json_text(rep.as_dict())
    if not rep.ok:
        raise InvariantViolation(f"quasi-isometry check failed: {rep.as_dict()}", text)
    return {"verify.json": text}


def cmd_qi_dx(a) -> Dict[str, str]:
    C = a.C
    if C < 2:
        raise InvalidParameter("C must be >= 2")
    return {"dx.txt": _io.fmt(qi.d_x(C)) + "\n"}


def cmd_qi_a_series(a) -> Dict[str, str]:
    ser = qi.a_series(a.horizon, _cfg(a))
    return {"a_series.csv": _io.csv_text(["i", "A_exact_num", "A_exact_den", "A_double"],
                                         ser.rows())}


def cmd_qi_law_check(a) -> Dict[str, str]:
    tv = qi.pushforward_law_check(a.n, _cfg(a))
    text = _io.json_text({"n": a.n, "tv": tv, "tv_double": float(tv)})
    if tv != 0:
        raise InvariantViolation(f"push-forward laws differ: tv = {tv}", text)
    return {"law_check.json": text}


def cmd_clt(a) -> Dict[str, str]:
    prof = _build_profile(a)
    if a.n is None:
        sched = getattr(prof, "schedule", None)
        if not isinstance(sched, NoCltSchedule):
            raise InvalidParameter("--n is required unless --post-band is used with no-clt")
        n = sched.post_band_checkpoint(a.post_band)
    else:
        n = a.n
    sigmas = [math.sqrt(s2) for s2 in a.sigma2]
    res = diagnostics.clt_grid(prof, n, sigmas, ell=a.ell, z=a.z)
    return {"clt.json": _io.json_text({"n": n, "profile": prof.describe(),
                                       "ks": [r.as_dict() for r in res]})}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="exotic-walks",
                                description="Random walks on F_2 with exotic drift behaviour.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dist", help="law of the distance to the root at time n")
    _profile_flags(d)
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--exact", action="store_true", help="rational arithmetic")
    _common(d)
    d.set_defaults(func=cmd_dist)

    dr = sub.add_parser("drift", help="normalized expected distance series")
    _profile_flags(dr)
    dr.add_argument("--qi", action="store_true", help="use the push-forward walk")
    _qi_flags(dr)
    dr.add_argument("--horizon", type=int, default=None)
    dr.add_argument("--checkpoints", type=_int_list, default=None,
                    help="band indices s, or t for --qi, or plain n for const")
    dr.add_argument("--every", action="store_true", help="emit every n, not only checkpoints")
    _common(dr)
    dr.set_defaults(func=cmd_drift)

    t = sub.add_parser("tame", help="tameness axiom report")
    _profile_flags(t)
    t.add_argument("--horizon", type=int, default=200)
    t.add_argument("--words", type=int, default=3, help="depth cap for irreducibility targets")
    _common(t)
    t.set_defaults(func=cmd_tame)

    q = sub.add_parser("qi", help="Christmas-tree quasi-isometry tools")
    qs = q.add_subparsers(dest="qi_command", required=True)

    m = qs.add_parser("map", help="image of one word")
    _qi_flags(m)
    m.add_argument("--word", required=True)
    m.add_argument("--mode", choices=["relative", "absolute"], default="relative",
                   help="relative word in a stretched block, or a full address")
    m.add_argument("--inverse", action="store_true")
    _common(m)
    m.set_defaults(func=cmd_qi_map)

    v = qs.add_parser("verify", help="bijectivity and distortion on a ball")
    _qi_flags(v)
    v.add_argument("--ball", type=int, default=8)
    v.add_argument("--pairs", type=int, default=0, help="random far pairs")
    v.add_argument("--depth", type=int, default=1000, help="max depth of random pairs")
    v.add_argument("--pair-cap", type=int, default=10 ** 8,
                   help="largest ball (in pairs) checked exhaustively")
    _common(v)
    v.set_defaults(func=cmd_qi_verify)

    x = qs.add_parser("dx", help="mean leaf displacement of the stretching map")
    _qi_flags(x)
    _common(x)
    x.set_defaults(func=cmd_qi_dx)

    s = qs.add_parser("a-series", help="exact sphere averages of the image depth")
    _qi_flags(s)
    s.add_argument("--horizon", type=int, required=True)
    _common(s)
    s.set_defaults(func=cmd_qi_a_series)

    lc = qs.add_parser("law-check", help="push-forward law identity")
    _qi_flags(lc)
    lc.add_argument("--n", type=int, default=4)
    _common(lc)
    lc.set_defaults(func=cmd_qi_law_check)

    c = sub.add_parser("clt", help="Gaussian fit of the distance law")
    _profile_flags(c)
    c.add_argument("--n", type=int, default=None)
    c.add_argument("--post-band", type=int, default=2,
                   help="for no-clt without --n: use N_s + floor(N_s^(3/4))")
    c.add_argument("--ell", type=float, default=0.5)
    c.add_argument("--sigma2", type=_float_list, default=[0.75])
    c.add_argument("--z", type=float, default=2.0)
    _common(c)
    c.set_defaults(func=cmd_clt)
    return p


def _params(a) -> dict:
    skip = {"func", "out"}
    return {k: (str(v) if isinstance(v, Fraction) else v)
            for k, v in sorted(vars(a).items()) if k not in skip}


def manifest(a, artifacts: Dict[str, str]) -> str:
    sub = a.command + (f" {a.qi_command}" if a.command == "qi" else "")
    return _io.json_text({
        "subcommand": sub,
        "params": _params(a),
        "version": __version__,
        "budget_env": os.environ.get("EXOTIC_WALKS_BUDGET"),
        "outputs": {name: hashlib.sha256(text.encode()).hexdigest()
                    for name, text in sorted(artifacts.items())},
    })


def emit(a, artifacts: Dict[str, str]) -> None:
    man = manifest(a, artifacts)
    if a.out:
        os.makedirs(a.out, exist_ok=True)
        for name, text in artifacts.items():
            with open(os.path.join(a.out, name), "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        with open(os.path.join(a.out, "manifest.json"), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(man)
    else:
        for name in artifacts:
            sys.stdout.write(artifacts[name])
        sys.stderr.write(man)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    try:
        emit(a, a.func(a))
    except (InvalidParameter, NoPreimage, OverflowError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantViolation as e:
        if len(e.args) > 1:
            sys.stdout.write(e.args[1])
        print(f"invariant violated: {e.args[0]}", file=sys.stderr)
        return EXIT_INVARIANT
    return 0


if __name__ == "__main__":
    sys.exit(main())
