"""Band schedules for the backward-step probabilities.

Two families are provided:

``NoDriftSchedule``
    Annuli ``(N_{s-1}, N_s]`` with ``N_{-1} = -1``; ``lambda_j`` is ``lam`` on
    odd annuli and ``lam / 2`` on even ones.  The literal boundaries are
    ``N_s = 2**(s*s)``; a geometric variant ``N_s = n0 * base**s`` brings the
    alternation within reach of a desk-scale computation.

``NoCltSchedule``
    Thin bands ``B_s = [N_s/2 - N_s**e, N_s/2 + N_s**e]`` around the midpoints
    of ``N_s = 4**(s-1) * N1`` where ``lambda_j = lam``; everywhere else
    ``lambda_j = 1/4``.  The literal exponent is ``e = 5/6``.

Band membership is decided in exact integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from .errors import BandOverlap, InvalidParameter
from .radial import ConstantProfile, LambdaProfile

INT64_MAX = 2 ** 63 - 1
QUARTER = Fraction(1, 4)


def _check_lambda(lam) -> None:
    if not 0 < lam < QUARTER:
        raise InvalidParameter(f"lambda must satisfy 0 < lambda < 1/4, got {lam}")


def _checked(value: int, what: str) -> int:
    if value > INT64_MAX:
        raise OverflowError(f"{what} = {value} does not fit in a signed 64-bit integer")
    return value


@dataclass(frozen=True)
class Band:
    """Where a distance ``j`` sits in a schedule."""

    index: Optional[int]  # s, or None when j lies in no band
    lo: int               # first integer of the band (or of the gap)
    hi: int               # last integer of the band (or of the gap)
    inside: bool
    value: object         # lambda_j

    @property
    def parity(self) -> Optional[str]:
        if self.index is None:
            return None
        return "odd" if self.index % 2 else "even"


@dataclass(frozen=True)
class NoDriftSchedule:
    lam: object = 0.2
    kind: str = "literal"   # "literal" (N_s = 2^(s^2)) or "geometric" (N_s = n0 * base^s)
    base: int = 4
    n0: int = 16

    def __post_init__(self):
        _check_lambda(self.lam)
        if self.kind not in ("literal", "geometric"):
            raise InvalidParameter(f"unknown schedule kind {self.kind!r}")
        if self.kind == "geometric" and (self.base < 2 or self.n0 < 1):
            raise InvalidParameter("geometric schedule needs base >= 2 and n0 >= 1")

    def boundary(self, s: int) -> int:
        """``N_s``; ``N_{-1} = -1``."""
        if s < -1:
            raise InvalidParameter("band index must be >= -1")
        if s == -1:
            return -1
        if self.kind == "literal":
            return _checked(2 ** (s * s), f"N_{s}")
        return _checked(self.n0 * self.base ** s, f"N_{s}")

    def boundaries_through(self, j: int) -> List[int]:
        """``[N_0, N_1, ...]`` up to the first boundary ``>= j``."""
        out = []
        s = 0
        while True:
            out.append(self.boundary(s))
            if out[-1] >= j:
                return out
            s += 1

    def band_index(self, j: int) -> int:
        if j < 1:
            raise InvalidParameter("distances are queried from 1")
        s = 0
        while self.boundary(s) < j:
            s += 1
        return s

    def value(self, s: int):
        return self.lam if s % 2 else self.lam / 2

    def lambda_at(self, j: int):
        return self.value(self.band_index(j))

    def band_of(self, j: int) -> Band:
        s = self.band_index(j)
        return Band(s, self.boundary(s - 1) + 1, self.boundary(s), True, self.value(s))

    def table(self, n: int) -> np.ndarray:
        bounds = np.array(self.boundaries_through(max(n, 1)), dtype=np.int64)
        j = np.arange(n + 1)
        s = np.searchsorted(bounds, j, side="left")
        lam = float(self.lam)
        out = np.where(s % 2 == 1, lam, lam / 2)
        out[0] = 0.0
        return out

    def checkpoints(self, s_values) -> List[Tuple[int, str]]:
        return [(self.boundary(s), "odd" if s % 2 else "even") for s in s_values]

    def describe(self) -> dict:
        d = {"schedule": "no-drift", "lambda": float(self.lam), "kind": self.kind}
        if self.kind == "geometric":
            d.update(base=self.base, n0=self.n0)
        return d


def _pow_le(x: int, N: int, e: Fraction) -> bool:
    """Whether ``x / 2 <= N**e`` exactly, for integers ``x >= 0``."""
    p, q = e.numerator, e.denominator
    return x ** q <= 2 ** q * N ** p


@dataclass(frozen=True)
class NoCltSchedule:
    lam: object = 0.05
    N1: int = 8192
    band_exponent: Fraction = Fraction(5, 6)
    kick_exponent: Fraction = Fraction(3, 4)

    def __post_init__(self):
        _check_lambda(self.lam)
        object.__setattr__(self, "band_exponent", Fraction(self.band_exponent).limit_denominator(1000))
        object.__setattr__(self, "kick_exponent", Fraction(self.kick_exponent).limit_denominator(1000))
        if self.N1 <= 2 ** 6:
            raise InvalidParameter(f"N1 must exceed 2^6, got {self.N1}")
        if not 0 < self.band_exponent < 1:
            raise InvalidParameter("band exponent must lie in (0, 1)")
        # N^e < N/4 for s = 1 implies it for every larger N_s since e < 1
        e = self.band_exponent
        N = self.N1
        if not (4 ** e.denominator * N ** e.numerator < N ** e.denominator):
            raise BandOverlap(
                f"N1={N}: N^{e} >= N/4, so the first band is not inside (N_0, N_1]")

    def boundary(self, s: int) -> int:
        """``N_s = 4^(s-1) N1``; ``N_0 = N1 / 4`` closes the first annulus."""
        if s < 0:
            raise InvalidParameter("band index must be >= 0")
        if s == 0:
            return self.N1 // 4
        return _checked(4 ** (s - 1) * self.N1, f"N_{s}")

    def band_limits(self, s: int) -> Tuple[int, int]:
        """First and last integer of ``B_s``."""
        N = self.boundary(s)
        e = self.band_exponent
        r = N ** float(e)
        lo = math.ceil(N / 2 - r)
        hi = math.floor(N / 2 + r)
        while not _pow_le(abs(2 * lo - N), N, e):
            lo += 1
        while lo > 0 and _pow_le(abs(2 * (lo - 1) - N), N, e):
            lo -= 1
        while not _pow_le(abs(2 * hi - N), N, e):
            hi -= 1
        while _pow_le(abs(2 * (hi + 1) - N), N, e):
            hi += 1
        return lo, hi

    def bands_through(self, j: int) -> List[Tuple[int, int]]:
        out = []
        s = 1
        while True:
            lo, hi = self.band_limits(s)
            if lo > j:
                return out
            out.append((lo, hi))
            s += 1

    def band_of(self, j: int) -> Band:
        if j < 1:
            raise InvalidParameter("distances are queried from 1")
        prev_hi = 0
        s = 1
        while True:
            lo, hi = self.band_limits(s)
            if j < lo:
                return Band(None, prev_hi + 1, lo - 1, False, QUARTER)
            if j <= hi:
                return Band(s, lo, hi, True, self.lam)
            prev_hi = hi
            s += 1

    def lambda_at(self, j: int):
        return self.band_of(j).value

    def table(self, n: int) -> np.ndarray:
        out = np.full(n + 1, 0.25)
        for lo, hi in self.bands_through(n):
            out[lo:min(hi, n) + 1] = float(self.lam)
        out[0] = 0.0
        return out

    def post_band_checkpoint(self, s: int) -> int:
        """``N_s + floor(N_s ** kick_exponent)``."""
        N = self.boundary(s)
        k = self.kick_exponent
        m = math.floor(N ** float(k))
        # exact floor of N^(p/q): largest m with m^q <= N^p
        while m ** k.denominator > N ** k.numerator:
            m -= 1
        while (m + 1) ** k.denominator <= N ** k.numerator:
            m += 1
        return N + m

    def describe(self) -> dict:
        return {"schedule": "no-clt", "lambda": float(self.lam), "N1": self.N1,
                "band_exponent": str(self.band_exponent),
                "kick_exponent": str(self.kick_exponent)}


class ScheduleProfile(LambdaProfile):
    """A :class:`LambdaProfile` backed by a band schedule."""

    def __init__(self, schedule, name: str, lambda_min, lambda_max):
        super().__init__(name, schedule.describe())
        self.schedule = schedule
        self._min = lambda_min
        self._max = lambda_max

    def lambda_at(self, j):
        if j < 1:
            raise InvalidParameter("distances are queried from 1")
        return self.schedule.lambda_at(j)

    @property
    def lambda_min(self):
        return self._min

    @property
    def lambda_max(self):
        return self._max

    def table(self, n, exact=False):
        if exact:
            return super().table(n, exact=True)
        return self.schedule.table(n)


def no_drift_profile(schedule: Optional[NoDriftSchedule] = None) -> ScheduleProfile:
    schedule = schedule or NoDriftSchedule()
    # j = 1 always lies in the even annulus (N_{-1}, N_0], so lam/2 is attained
    return ScheduleProfile(schedule, "no-drift", schedule.lam / 2, schedule.lam)


def no_clt_profile(schedule: Optional[NoCltSchedule] = None) -> ScheduleProfile:
    schedule = schedule or NoCltSchedule()
    return ScheduleProfile(schedule, "no-clt", schedule.lam, QUARTER)


def band_of(j: int, schedule) -> Band:
    return schedule.band_of(j)


def make_profile(name: str, lam=None, **params) -> LambdaProfile:
    """Build a named profile: ``const``, ``no-drift`` or ``no-clt``."""
    if name == "const":
        return ConstantProfile(QUARTER if lam is None else lam)
    if name == "no-drift":
        kw = {k: v for k, v in params.items() if k in ("kind", "base", "n0") and v is not None}
        return no_drift_profile(NoDriftSchedule(0.2 if lam is None else lam, **kw))
    if name == "no-clt":
        kw = {k: v for k, v in params.items()
              if k in ("N1", "band_exponent", "kick_exponent") and v is not None}
        return no_clt_profile(NoCltSchedule(0.05 if lam is None else lam, **kw))
    raise InvalidParameter(f"unknown profile {name!r}")
