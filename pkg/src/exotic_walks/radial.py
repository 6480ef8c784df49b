"""Exact law of the radial (birth-death) chain of a length-homogeneous walk.

A length-homogeneous nearest-neighbour chain on F_2 steps back towards the
identity with probability ``lambda_j`` when at distance ``j >= 1`` and forward
(uniformly over the three outward neighbours) otherwise; from the identity it
always moves out.  Its distance process ``X_n`` is the birth-death chain on
``{0, 1, 2, ...}`` with ``p(0, 1) = 1``, ``p(j, j + 1) = 1 - lambda_j`` and
``p(j, j - 1) = lambda_j``.

Two evaluation paths are provided:

* :func:`step` / :func:`distribution_at` with ``exact=True`` operate on
  ``numpy`` object arrays of :class:`fractions.Fraction` and are the rational
  oracle for short horizons.
* :class:`RadialEngine` runs a compiled in-place sweep in double precision and
  records per-step statistics; it is what the diagnostics use at long horizons.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Sequence

import numpy as np

from . import _kernels
from .errors import BudgetExceeded, InvalidParameter

DEFAULT_DP_BUDGET = 1 << 21
EXACT_BUDGET = 64
BUDGET_ENV = "EXOTIC_WALKS_BUDGET"
MASS_TOL = 1e-12


def dp_budget() -> int:
    """Largest horizon the float engine accepts (``EXOTIC_WALKS_BUDGET`` overrides)."""
    raw = os.environ.get(BUDGET_ENV)
    if raw:
        try:
            return int(float(raw))
        except ValueError:
            raise InvalidParameter(f"{BUDGET_ENV}={raw!r} is not a number") from None
    return DEFAULT_DP_BUDGET


def _check_budget(n: int, budget: Optional[int] = None) -> None:
    if n < 0:
        raise InvalidParameter("time must be nonnegative")
    limit = dp_budget() if budget is None else budget
    if n > limit:
        raise BudgetExceeded(f"horizon {n} exceeds budget {limit}")


class LambdaProfile:
    """Backward-step probabilities ``j -> lambda_j`` for ``j >= 1``.

    Subclasses implement :meth:`lambda_at`; :meth:`table` may be overridden
    with a vectorised version.  ``lambda_0`` is never consulted: the step out
    of the identity is forced.
    """

    name = "profile"

    def __init__(self, name: Optional[str] = None, params: Optional[dict] = None):
        if name is not None:
            self.name = name
        self.params = dict(params or {})

    def lambda_at(self, j: int):
        raise NotImplementedError

    @property
    def lambda_min(self):
        raise NotImplementedError

    @property
    def lambda_max(self):
        raise NotImplementedError

    @property
    def tame_eligible(self) -> bool:
        return 0 < self.lambda_min and self.lambda_max <= Fraction(1, 4)

    def table(self, n: int, exact: bool = False) -> np.ndarray:
        """Array ``t`` of length ``n + 1`` with ``t[j] = lambda_j`` and ``t[0] = 0``."""
        if exact:
            out = np.empty(n + 1, dtype=object)
            out[0] = Fraction(0)
            for j in range(1, n + 1):
                out[j] = Fraction(self.lambda_at(j))
            return out
        out = np.zeros(n + 1)
        for j in range(1, n + 1):
            out[j] = float(self.lambda_at(j))
        return out

    def describe(self) -> dict:
        return {"name": self.name, **self.params}

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{type(self).__name__}({self.name!r}, {args})"


class ConstantProfile(LambdaProfile):
    """``lambda_j = lam`` everywhere; ``lam = 1/4`` is the simple random walk."""

    def __init__(self, lam=Fraction(1, 4), name: str = "const"):
        if not 0 <= lam <= 1:
            raise InvalidParameter(f"lambda must lie in [0, 1], got {lam}")
        super().__init__(name, {"lambda": lam})
        self.lam = lam

    def lambda_at(self, j):
        return self.lam

    @property
    def lambda_min(self):
        return self.lam

    @property
    def lambda_max(self):
        return self.lam

    def table(self, n, exact=False):
        if exact:
            return super().table(n, exact=True)
        out = np.full(n + 1, float(self.lam))
        out[0] = 0.0
        return out


class TableProfile(LambdaProfile):
    """Explicit values ``lambda_1..lambda_m``, continued by the last value (test helper)."""

    def __init__(self, values: Sequence, name: str = "table"):
        values = list(values)
        if not values:
            raise InvalidParameter("table profile needs at least one value")
        if any(not 0 <= v <= 1 for v in values):
            raise InvalidParameter("table values must lie in [0, 1]")
        super().__init__(name, {"size": len(values)})
        self.values = values

    def lambda_at(self, j):
        return self.values[min(j, len(self.values)) - 1]

    @property
    def lambda_min(self):
        return min(self.values)

    @property
    def lambda_max(self):
        return max(self.values)

    def table(self, n, exact=False):
        if exact:
            return super().table(n, exact=True)
        vals = np.asarray(self.values, dtype=float)
        out = np.empty(n + 1)
        out[0] = 0.0
        m = min(n, len(vals))
        out[1:m + 1] = vals[:m]
        out[m + 1:] = vals[-1]
        return out


def random_tame_profile(rng, size: int, low: float = 0.05, high: float = 0.25) -> TableProfile:
    """Profile with ``lambda_j`` drawn uniformly from ``[low, high]``."""
    return TableProfile(rng.uniform(low, high, size=size).tolist(), name="random-tame")


@dataclass(frozen=True)
class RadialDistribution:
    """Law of ``X_n``: ``mass[k]`` is ``P[X_n = offset + k]``.

    ``mass`` is a float array, or an object array of ``Fraction`` in exact mode.
    """

    time: int
    mass: np.ndarray
    offset: int = 0
    exact: bool = field(default=False)

    @classmethod
    def delta0(cls, exact: bool = False) -> "RadialDistribution":
        if exact:
            return cls(0, np.array([Fraction(1)], dtype=object), 0, True)
        return cls(0, np.ones(1), 0, False)

    def mass_at(self, j: int):
        k = j - self.offset
        if 0 <= k < len(self.mass):
            return self.mass[k]
        return Fraction(0) if self.exact else 0.0

    def dense(self) -> np.ndarray:
        """Masses over ``0..time`` (index = distance)."""
        if self.exact:
            out = np.array([Fraction(0)] * (self.time + 1), dtype=object)
        else:
            out = np.zeros(self.time + 1)
        out[self.offset:self.offset + len(self.mass)] = self.mass
        return out

    def as_dict(self) -> Dict[int, object]:
        return {self.offset + k: m for k, m in enumerate(self.mass) if m != 0}

    def total(self):
        return sum(self.mass) if self.exact else float(np.sum(self.mass))

    def mean(self):
        js = np.arange(self.offset, self.offset + len(self.mass))
        if self.exact:
            return sum(int(j) * m for j, m in zip(js, self.mass))
        return float(np.dot(js, self.mass))

    def tail_above(self, x: float):
        """``P[X_n > x]``."""
        start = max(0, math.floor(x) + 1 - self.offset)
        tail = self.mass[start:]
        return sum(tail) if self.exact else float(np.sum(tail))


def step(d: RadialDistribution, prof: LambdaProfile) -> RadialDistribution:
    """One transition of the radial chain (works in float and exact mode)."""
    n_old = len(d.mass)
    hi_old = d.offset + n_old - 1
    lam = prof.table(hi_old + 1, exact=d.exact)
    seg = lam[d.offset:hi_old + 1]
    one = Fraction(1) if d.exact else 1.0
    down = seg.copy()
    up = one - seg
    if d.offset == 0:
        up[0] = one
        down[0] = 0 * one

    new_off = max(d.offset - 1, 0)
    size = hi_old + 1 - new_off + 1
    if d.exact:
        new = np.array([Fraction(0)] * size, dtype=object)
    else:
        new = np.zeros(size)
    shift = d.offset - new_off
    # forward moves land one cell right, backward moves one cell left
    new[shift + 1:shift + 1 + n_old] += d.mass * up
    down_part = d.mass * down
    if d.offset == 0:
        new[shift:shift + n_old - 1] += down_part[1:]
    else:
        new[shift - 1:shift - 1 + n_old] += down_part

    if not d.exact:
        total = float(np.sum(new))
        if abs(total - 1.0) > MASS_TOL:
            new = new / total
    # trim exact zeros at the low end so offset tracks the support
    lead = 0
    while lead < len(new) - 1 and new[lead] == 0:
        lead += 1
    return RadialDistribution(d.time + 1, new[lead:], new_off + lead, d.exact)


def iter_laws(n: int, prof: LambdaProfile, exact: bool = False):
    """Yield the laws of ``X_0, X_1, ..., X_n`` using :func:`step`."""
    d = RadialDistribution.delta0(exact)
    yield d
    for _ in range(n):
        d = step(d, prof)
        yield d


class RadialEngine:
    """Compiled forward sweep owning its scratch buffer.

    After :meth:`advance_to` the arrays ``mean``, ``weighted``, ``zero`` and
    ``lam_sum`` hold, for every time ``h`` reached, ``E[X_h]``,
    ``E[weights[X_h]]``, ``P[X_h = 0]`` and ``sum_{j>=1} P[X_h = j] lambda_j``.
    Masses below ``trim`` at the edges of the support are dropped; with the
    default the dropped mass sits below the double-precision underflow range.
    """

    def __init__(self, prof: LambdaProfile, horizon: int,
                 weights: Optional[np.ndarray] = None, trim: float = 1e-300,
                 budget: Optional[int] = None):
        _check_budget(horizon, budget)
        self.prof = prof
        self.horizon = horizon
        lam = prof.table(horizon + 1)
        self.down = np.ascontiguousarray(lam, dtype=np.float64)
        self.down[0] = 0.0
        self.up = 1.0 - self.down
        self.up[0] = 1.0
        if weights is None:
            self.weights = np.arange(horizon + 2, dtype=np.float64)
        else:
            w = np.asarray(weights, dtype=np.float64)
            if len(w) < horizon + 1:
                raise InvalidParameter("weights must cover distances 0..horizon")
            self.weights = np.zeros(horizon + 2)
            self.weights[:horizon + 1] = w[:horizon + 1]
        self.trim = float(trim)
        size = horizon // 2 + 3
        self._even = np.zeros(size)
        self._odd = np.zeros(size)
        self._even[0] = 1.0
        self._up = _kernels.split(np.append(self.up, [0.0, 0.0]), size)
        self._down = _kernels.split(np.append(self.down, [0.0, 0.0]), size)
        self._w = _kernels.split(np.append(self.weights, [0.0, 0.0]), size)
        self.time = 0
        self._klo = 0
        self._khi = 0
        self.mean = np.zeros(horizon + 1)
        self.weighted = np.zeros(horizon + 1)
        self.zero = np.zeros(horizon + 1)
        self.lam_sum = np.zeros(horizon + 1)
        self.weighted[0] = self.weights[0]
        self.zero[0] = 1.0

    def advance_to(self, t: int) -> "RadialEngine":
        if t < self.time:
            raise InvalidParameter(f"engine is at time {self.time}, cannot rewind to {t}")
        if t > self.horizon:
            raise BudgetExceeded(f"time {t} beyond engine horizon {self.horizon}")
        if t > self.time:
            self._klo, self._khi = _kernels.advance(
                self._even, self._odd, self._up[0], self._down[0], self._up[1], self._down[1],
                self._w[0], self._w[1], self.time, t, self._klo, self._khi, self.trim,
                self.mean, self.weighted, self.zero, self.lam_sum)
            self.time = t
        return self

    def run(self) -> "RadialEngine":
        return self.advance_to(self.horizon)

    def law(self) -> RadialDistribution:
        parity = self.time % 2
        cur = self._odd if parity else self._even
        klo, khi = self._klo, self._khi
        mass = np.zeros(2 * (khi - klo) + 1)
        mass[::2] = cur[klo:khi + 1]
        return RadialDistribution(self.time, mass, 2 * klo + parity, False)


def distribution_at(n: int, prof: LambdaProfile, exact: bool = False,
                    budget: Optional[int] = None) -> RadialDistribution:
    """Law of ``X_n`` started from 0."""
    if exact:
        _check_budget(n, EXACT_BUDGET if budget is None else budget)
        d = RadialDistribution.delta0(True)
        for _ in range(n):
            d = step(d, prof)
        return d
    return RadialEngine(prof, n, budget=budget).run().law()


def expected_distance_series(n: int, prof: LambdaProfile) -> np.ndarray:
    """``E[X_h]`` for ``h = 0..n`` from the one-step increment ``1 - 2 sum_j P[X_h=j] lambda_j``."""
    eng = RadialEngine(prof, n).run()
    inc = 1.0 - 2.0 * eng.lam_sum[:n]
    out = np.zeros(n + 1)
    out[1:] = np.cumsum(inc)
    return out


def expected_distance(n: int, prof: LambdaProfile) -> float:
    return float(expected_distance_series(n, prof)[n])


def identity_residual_table(n_max: int, prof: LambdaProfile) -> np.ndarray:
    """Matrix ``R[n, k]`` of residuals of the k-step expectation identity.

    ``E[X_n] = k + E[X_{n-k}] - 2 sum_{i=1..k} sum_{j=1..n-i} P[X_{n-i}=j] lambda_j``
    with both sides taken from the laws produced by :func:`step`.  Entries with
    ``k = 0`` or ``k > n`` are NaN.
    """
    laws = list(iter_laws(n_max, prof))
    lam = prof.table(n_max)
    means = np.array([d.mean() for d in laws])
    # s[h] = sum_{j=1..h} P[X_h = j] lambda_j
    s = np.array([float(np.dot(d.dense()[1:], lam[1:d.time + 1])) for d in laws])
    out = np.full((n_max + 1, n_max + 1), np.nan)
    for n in range(1, n_max + 1):
        back = np.cumsum(s[n - 1::-1])  # back[k-1] = sum_{i=1..k} s[n-i]
        k = np.arange(1, n + 1)
        rhs = k + means[n - k] - 2.0 * back
        out[n, 1:n + 1] = np.abs(means[n] - rhs)
    return out


def identity_residual(n: int, k: int, prof: LambdaProfile) -> float:
    if not 1 <= k <= n:
        raise InvalidParameter(f"need 1 <= k <= n, got k={k}, n={n}")
    return float(identity_residual_table(n, prof)[n, k])


def return_mass_sum(n_max: int, prof: LambdaProfile) -> float:
    """``sum_{h=0..n_max} P[X_h = 0]``: expected visits to the identity up to ``n_max``."""
    eng = RadialEngine(prof, n_max, trim=0.0).run()
    return float(np.sum(eng.zero))


def hitting_zero_probability(start: int, up_prob: float, n_max: int) -> float:
    """Probability that the walk on the half-line with up-probability ``up_prob``
    reaches 0 from ``start`` within ``n_max`` steps."""
    if start < 1:
        raise InvalidParameter("start must be positive")
    if not 0 <= up_prob <= 1:
        raise InvalidParameter("up_prob must lie in [0, 1]")
    if up_prob == 1:
        return 0.0
    down = 1.0 - up_prob
    size = start + n_max + 2
    mass = np.zeros(size)
    mass[start] = 1.0
    hit = 0.0
    for _ in range(n_max):
        hit += mass[1] * down
        new = np.zeros(size)
        new[2:] += mass[1:-1] * up_prob
        new[1:-1] += mass[2:] * down
        mass = new
    return hit


def sample_radial_path(n: int, prof: LambdaProfile, seed: int) -> np.ndarray:
    """One trajectory ``X_0..X_n``; reproducible for a given seed."""
    rng = np.random.default_rng(seed)
    lam = prof.table(n + 1)
    u = rng.random(n)
    path = np.zeros(n + 1, dtype=np.int64)
    x = 0
    for t in range(n):
        if x == 0 or u[t] >= lam[x]:
            x += 1
        else:
            x -= 1
        path[t + 1] = x
    return path


def sample_radial_endpoints(n: int, prof: LambdaProfile, n_walks: int, seed: int) -> np.ndarray:
    """``X_n`` for ``n_walks`` independent trajectories, simulated side by side."""
    rng = np.random.default_rng(seed)
    lam = prof.table(n + 1)
    x = np.zeros(n_walks, dtype=np.int64)
    for _ in range(n):
        back = (rng.random(n_walks) < lam[x]) & (x > 0)
        x += np.where(back, -1, 1)
    return x
