"""Checks of the tameness axioms for length-homogeneous walks on F_2.

Everything here is computed from the radial law, started at the identity.
Point probabilities rely on the walk being uniform on each sphere given its
distance to the root; :func:`sphere_uniformity_defect` certifies that
symmetry on small horizons by tracking every vertex exactly.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import _io, words
from .errors import InvalidParameter
from .radial import (LambdaProfile, RadialEngine, distribution_at, return_mass_sum)

QUARTER = Fraction(1, 4)


def transition_row(w: str, prof: LambdaProfile) -> Dict[str, object]:
    """Neighbour probabilities out of vertex ``w``."""
    if not w:
        return {x: QUARTER for x in words.ROOT_LETTERS}
    lam = Fraction(prof.lambda_at(len(w)))
    fwd = (1 - lam) / 3
    row = {w[:-1]: lam}
    row.update({w + x: fwd for x in words.LETTERS})
    return row


def check_bounded_jumps(prof: LambdaProfile, depth: int = 6) -> Tuple[bool, List[str]]:
    """Every row is supported on the four neighbours and sums to one.

    Rows are checked on one vertex per depth up to ``depth``; by length
    homogeneity all vertices of a depth share the same row up to relabelling.
    Returns the flag together with the generator set ``S``.
    """
    ok = True
    for d in range(depth + 1):
        w = "a" * d
        row = transition_row(w, prof)
        nbrs = set(words.neighbors(w))
        ok &= set(row) <= nbrs and len(row) == 4
        ok &= abs(sum(row.values()) - 1) < 1e-15
        ok &= all(p >= 0 for p in row.values())
    return bool(ok), list(words.ROOT_LETTERS)


def vertex_law(n: int, prof: LambdaProfile) -> Dict[str, Fraction]:
    """Exact law of the walk on vertices after ``n`` steps from the identity."""
    law = {words.ROOT: Fraction(1)}
    for _ in range(n):
        nxt: Dict[str, Fraction] = defaultdict(Fraction)
        for w, p in law.items():
            for y, q in transition_row(w, prof).items():
                nxt[y] += p * q
        law = dict(nxt)
    return law


def sphere_uniformity_defect(n_max: int, prof: LambdaProfile) -> Fraction:
    """Largest deviation from ``P[X_h=i] / |S(i)|`` of any vertex mass, ``h <= n_max``.

    Zero means the walk is exactly uniform on each sphere and its radial law
    agrees with the exact birth-death chain.
    """
    if n_max > 8:
        raise InvalidParameter("vertex enumeration is limited to n <= 8")
    worst = Fraction(0)
    for h in range(n_max + 1):
        law = vertex_law(h, prof)
        radial = distribution_at(h, prof, exact=True)
        for i in range(h + 1):
            target = Fraction(radial.mass_at(i)) / words.sphere_size(i)
            for w in words.iter_sphere(i):
                worst = max(worst, abs(law.get(w, Fraction(0)) - target))
    return worst


def point_probability_series(n_max: int, prof: LambdaProfile) -> np.ndarray:
    """``sup_y P[w_n = y]`` for ``n = 0..n_max`` from the identity."""
    eng = RadialEngine(prof, n_max, trim=0.0)
    sizes = np.array([float(words.sphere_size(i)) for i in range(n_max + 1)])
    out = np.zeros(n_max + 1)
    out[0] = 1.0
    for n in range(1, n_max + 1):
        law = eng.advance_to(n).law()
        js = np.arange(law.offset, law.offset + len(law.mass))
        out[n] = float(np.max(law.mass / sizes[js]))
    return out


def max_point_probability(n: int, prof: LambdaProfile) -> float:
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    return float(point_probability_series(n, prof)[n])


def irreducibility_bound(u: str, prof: LambdaProfile) -> Tuple[int, float, float]:
    """``(K_u, eps_u, exact)`` for reaching ``u`` from the identity.

    ``eps_u = lambda_min ** depth`` is the generic bound; ``exact`` is the
    probability of walking straight down the geodesic to ``u``.
    """
    words.validate(u)
    if not u:
        raise InvalidParameter("u must differ from the identity")
    K = len(u)
    eps = float(prof.lambda_min) ** K
    exact = Fraction(1, 4)
    for j in range(1, K):
        exact *= (1 - Fraction(prof.lambda_at(j))) / 3
    return K, eps, float(exact)


def linear_progress_check(n: int, L: float, prof: LambdaProfile) -> float:
    """``P[X_n > L n]`` from the law of ``X_n``."""
    if not 0 < L < 1:
        raise InvalidParameter(f"L must lie in (0, 1), got {L}")
    eng = RadialEngine(prof, n, trim=0.0).run()
    return eng.law().tail_above(L * n)


def chernoff_bound(n: int, mu: float, delta: float) -> float:
    """Hoeffding bound ``exp(-2 n delta^2)`` on ``P[mean - mu >= delta]``."""
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    if not 0 <= mu <= 1 or not 0 <= delta < 1 - mu:
        raise InvalidParameter(f"need 0 <= delta < 1 - mu, got mu={mu}, delta={delta}")
    return math.exp(-2.0 * n * delta * delta)


@dataclass
class TamenessReport:
    profile: dict
    bounded_jumps: bool
    support: List[str]
    horizon: int
    rho_fit: float
    B: float
    rho_below_one: bool
    irreducibility: List[dict] = field(default_factory=list)
    transience_partial_sum: float = 0.0
    basepoint: str = "identity"

    def as_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return _io.json_text(self.as_dict())


def tameness_report(prof: LambdaProfile, horizon: int = 200, n_min: int = 10,
                    targets: Optional[Sequence[str]] = None,
                    transience_horizon: int = 2000) -> TamenessReport:
    """Assemble the axiom checks for one profile.

    ``rho_fit`` is the largest ``p_n ** (1/n)`` over ``n_min <= n <= horizon``,
    so ``p_n <= B rho_fit ** n`` holds there with ``B = 1``.
    """
    if not 1 <= n_min <= horizon:
        raise InvalidParameter("need 1 <= n_min <= horizon")
    bj, support = check_bounded_jumps(prof)
    p = point_probability_series(horizon, prof)
    n = np.arange(n_min, horizon + 1)
    rho = float(np.max(p[n] ** (1.0 / n)))
    if targets is None:
        targets = ["a", "ab", "dcc", "abcabc", "bbbbbbbb"]
    irr = []
    for u in targets:
        K, eps, exact = irreducibility_bound(u, prof)
        irr.append({"u": u, "K": K, "eps": eps, "exact": exact})
    return TamenessReport(prof.describe(), bj, support, horizon, rho, 1.0, rho < 1.0, irr,
                          return_mass_sum(transience_horizon, prof))
