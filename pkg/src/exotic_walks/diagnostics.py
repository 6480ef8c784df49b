"""Drift series, oscillation gaps and Gaussian-fit statistics.

Limits are never extrapolated.  A drift series is a finite list of exact
expectations, and liminf/limsup are summarised by the spread between two
families of checkpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
from scipy.special import ndtr

from . import _io
from .errors import InvalidParameter
from .qi import QiConfig, pushforward_engine
from .radial import LambdaProfile, RadialEngine, expected_distance_series

SIGMA_CONST = math.sqrt(0.75)
SIGMA2_GRID = (0.25, 0.5, 0.75, 1.0, 2.0)

Checkpoint = Tuple[int, str]


@dataclass
class DriftSeries:
    """``expectation[n] = E[d(1, w_n)]`` for ``n = 0..horizon``."""

    expectation: np.ndarray
    checkpoints: List[Checkpoint] = field(default_factory=list)
    source: dict = field(default_factory=dict)

    @property
    def horizon(self) -> int:
        return len(self.expectation) - 1

    def normalized(self, n: int) -> float:
        if n < 1:
            raise InvalidParameter("normalized drift needs n >= 1")
        return float(self.expectation[n]) / n

    def tagged(self, tag: str) -> List[int]:
        return [n for n, t in self.checkpoints if t == tag]

    def rows(self, every: bool = False):
        tags = dict(self.checkpoints)
        ns = range(1, self.horizon + 1) if every else sorted(tags)
        for n in ns:
            yield n, float(self.expectation[n]), self.normalized(n), tags.get(n, "")

    def csv(self, every: bool = False) -> str:
        return _io.csv_text(["n", "expectation", "normalized", "checkpoint_tag"],
                            self.rows(every))


def drift_series(source: Union[LambdaProfile, QiConfig], horizon: int,
                 checkpoints: Sequence[Checkpoint] = ()) -> DriftSeries:
    """Exact expectations up to ``horizon`` for a profile or a push-forward."""
    for n, _ in checkpoints:
        if not 1 <= n <= horizon:
            raise InvalidParameter(f"checkpoint {n} outside 1..{horizon}")
    if isinstance(source, QiConfig):
        E = pushforward_engine(horizon, source).run().weighted.copy()
        meta = {"kind": "pushforward", **source.describe()}
    else:
        E = expected_distance_series(horizon, source)
        meta = {"kind": "profile", **source.describe()}
    return DriftSeries(E, list(checkpoints), meta)


def no_drift_checkpoints(schedule, s_values: Iterable[int]) -> List[Checkpoint]:
    """Annulus ends ``N_s`` tagged by the parity of ``s``."""
    return schedule.checkpoints(s_values)


def qi_checkpoints(cfg: QiConfig, t_values: Iterable[int]) -> List[Checkpoint]:
    """Ends of identity runs (``low``) and of stretched runs (``high``).

    Block indices ``base^(2t)`` close a run of identity blocks and
    ``base^(2t+1)`` close a run of stretched ones; the checkpoint is the
    distance ``C`` times that index.
    """
    out = []
    for t in t_values:
        out.append((cfg.C * cfg.base ** (2 * t), "low"))
        out.append((cfg.C * cfg.base ** (2 * t + 1), "high"))
    return out


def oscillation_report(series: DriftSeries, low: Sequence[int], high: Sequence[int]) -> float:
    """``min`` of the normalized drift over ``high`` minus its ``max`` over ``low``.

    For band schedules ``low`` are the odd annuli (stronger backward pull)
    and ``high`` the even ones.
    """
    if not low or not high:
        raise InvalidParameter("both checkpoint families must be nonempty")
    return min(series.normalized(n) for n in high) - max(series.normalized(n) for n in low)


def gap_summary(series: DriftSeries, low: Sequence[int], high: Sequence[int],
                ks: Sequence["CltDiagnostics"] = ()) -> dict:
    return {
        "gap": oscillation_report(series, low, high),
        "checkpoints": [{"n": n, "tag": t, "normalized": series.normalized(n)}
                        for n, t in series.checkpoints],
        "ks": [k.as_dict() for k in ks],
        "source": series.source,
        "horizon": series.horizon,
    }


@dataclass(frozen=True)
class CltDiagnostics:
    n: int
    mean: float
    ell: float
    sigma: float
    z: float
    interval_mass: float
    ks_distance: float

    def as_dict(self) -> dict:
        return {"n": self.n, "mean": self.mean, "ell": self.ell, "sigma": self.sigma,
                "z": self.z, "interval_mass": self.interval_mass,
                "ks_distance": self.ks_distance}


def _law_stats(js: np.ndarray, mass: np.ndarray, n: int, ell: float, sigma: float, z: float):
    scale = sigma * math.sqrt(n)
    x = (js - ell * n) / scale
    inside = float(np.sum(mass[np.abs(js - ell * n) <= z * scale]))
    after = np.cumsum(mass)
    before = after - mass
    phi = ndtr(x)
    ks = float(max(np.max(np.abs(after - phi)), np.max(np.abs(before - phi))))
    return min(inside, 1.0), min(ks, 1.0)


def clt_diagnostics(prof: LambdaProfile, n: int, ell: float = 0.5,
                    sigma: float = SIGMA_CONST, z: float = 2.0) -> CltDiagnostics:
    """Interval mass and Kolmogorov distance of ``(X_n - ell n) / (sigma sqrt n)``.

    The law is lattice-valued, so the distance to the Gaussian CDF is taken
    on both sides of every atom.
    """
    return clt_grid(prof, n, [sigma], ell, z)[0]


def clt_grid(prof: LambdaProfile, n: int, sigmas: Sequence[float], ell: float = 0.5,
             z: float = 2.0) -> List[CltDiagnostics]:
    """:func:`clt_diagnostics` for several normalizations from one law."""
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    if z < 0:
        raise InvalidParameter("z must be nonnegative")
    if any(s <= 0 for s in sigmas):
        raise InvalidParameter("sigma must be positive")
    law = RadialEngine(prof, n).run().law()
    js = np.arange(law.offset, law.offset + len(law.mass), dtype=np.float64)
    keep = law.mass > 0
    js, mass = js[keep], law.mass[keep]
    mean = float(np.dot(js, mass))
    out = []
    for s in sigmas:
        inside, ks = _law_stats(js, mass, n, ell, s, z)
        out.append(CltDiagnostics(n, mean, ell, float(s), z, inside, ks))
    return out
