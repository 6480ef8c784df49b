"""The Christmas-tree quasi-isometry of F_2 and its push-forward drift.

The tree is cut into blocks of depth ``C``.  Block ``q`` (vertices at depths
``qC .. qC + C``) is mapped either by the identity or by the stretching map
``X_C``, which acts on a relative word over ``a, b, c`` by

* ``b^i      -> b^i``
* ``b^i a p  -> b^i a p``              (0 <= i <= C-1)
* ``b^i c p  -> b^(i-1) c p``          (1 <= i <= C-1)
* ``c p      -> b^(C-1) c p``

Block ``q`` uses ``X_C`` exactly when ``q`` lies in
``XSET = union_n [base^(2n), base^(2n+1))``; block 0 is always the identity.
Images of consecutive blocks concatenate, so ``f(w)`` is the concatenation
of the block images of ``w``'s block decomposition.
"""

from __future__ import annotations

import functools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import words
from .errors import (CapacityExceeded, InvalidParameter, InvalidRelativeWord,
                     NoPreimage)
from .radial import ConstantProfile, RadialEngine, _check_budget


@functools.lru_cache(maxsize=1 << 16)
def _in_x(base: int, q: int) -> bool:
    if q < 1:
        return False
    e = 0
    p = 1
    while p * base <= q:
        p *= base
        e += 1
    return e % 2 == 0


@dataclass(frozen=True)
class QiConfig:
    C: int = 4
    base: int = 8

    def __post_init__(self):
        if self.C < 4:
            raise InvalidParameter(f"block depth C must be >= 4, got {self.C}")
        if self.base < 2:
            raise InvalidParameter(f"X-set base must be >= 2, got {self.base}")

    def in_x(self, q: int) -> bool:
        """Whether block index ``q`` uses the stretching map."""
        return _in_x(self.base, q)

    def x_count(self, q: int) -> int:
        """``|XSET intersect {0, ..., q-1}|``."""
        total = 0
        lo = 1
        while lo < q:
            hi = lo * self.base
            total += min(q, hi) - lo
            lo = hi * self.base
        return total

    def describe(self) -> dict:
        return {"C": self.C, "base": self.base}


def _check_relative(rel: str, C: int) -> None:
    if not rel or len(rel) > C:
        raise InvalidRelativeWord(f"relative word must have length 1..{C}: {rel!r}")
    if rel.strip("abc"):
        raise InvalidRelativeWord(f"relative words use only a, b, c: {rel!r}")


def apply_X(C: int, rel: str) -> str:
    """Image of a relative word of length ``<= C`` under the stretching block map."""
    if C < 2:
        raise InvalidParameter("C must be >= 2")
    _check_relative(rel, C)
    i = len(rel) - len(rel.lstrip("b"))
    if i == len(rel) or rel[i] == "a":
        return rel
    if i == 0:
        return "b" * (C - 1) + rel
    return rel[1:]


_apply_X_cached = functools.lru_cache(maxsize=None)(apply_X)


def _unapply_X(C: int, img: str, pos: int) -> Tuple[str, int]:
    """Decode one block from ``img[pos:]``; returns ``(relative word, letters used)``."""
    s = img[pos:pos + 2 * C - 1]
    j = len(s) - len(s.lstrip("b"))
    if j >= C:
        return "b" * C, C
    if j == len(s):
        return s, j
    if s[j] == "a":
        rel = s[:C]
        return rel, len(rel)
    if s[j] != "c":
        raise NoPreimage(f"letter {s[j]!r} cannot occur below the root")
    if j == C - 1:
        p = s[C:2 * C - 1]
        return "c" + p, C + len(p)
    p = s[j + 1:j + 1 + (C - j - 2)]
    return "b" * (j + 1) + "c" + p, j + 1 + len(p)


def x_table(C: int) -> Dict[str, str]:
    """Every relative word of length 1..C with its image, checked injective."""
    if C > 8:
        raise CapacityExceeded("the block table is only built for C <= 8")
    table = {}
    for r in range(1, C + 1):
        for rel in words.relative_words(r):
            table[rel] = apply_X(C, rel)
    if len(set(table.values())) != len(table):
        raise AssertionError("stretching block map is not injective")
    return table


def leaf_images_complete(C: int) -> bool:
    """The depth-C leaf images form a complete prefix-free ternary code.

    Prefix-freeness plus a Kraft sum of exactly 1 means every infinite ray
    below the block root passes through exactly one leaf image, so the
    blocks below tile the image tree and the global map is a bijection.
    """
    leaves = sorted(apply_X(C, rel) for rel in words.relative_words(C))
    if len(set(leaves)) != len(leaves):
        return False
    for u, v in zip(leaves, leaves[1:]):
        if v.startswith(u):
            return False
    return sum(Fraction(1, 3 ** len(x)) for x in leaves) == 1


def apply_f(w: str, cfg: QiConfig) -> str:
    C = cfg.C
    if len(w) <= C:
        return w
    parts = [w[:C]]
    for q in range(1, (len(w) + C - 1) // C):
        blk = w[q * C:(q + 1) * C]
        parts.append(_apply_X_cached(C, blk) if cfg.in_x(q) else blk)
    return "".join(parts)


def invert_f(y: str, cfg: QiConfig, check: bool = True) -> str:
    """The unique ``w`` with ``apply_f(w) == y``."""
    C = cfg.C
    if len(y) <= C:
        return y
    parts = [y[:C]]
    pos = C
    q = 1
    while pos < len(y):
        if cfg.in_x(q):
            rel, used = _unapply_X(C, y, pos)
        else:
            rel = y[pos:pos + C]
            used = len(rel)
        parts.append(rel)
        pos += used
        q += 1
    w = "".join(parts)
    if check and apply_f(w, cfg) != y:
        raise NoPreimage(f"{y!r} has no preimage")
    return w


def distortion(du: int, df: int) -> float:
    """``max(du/df, df/du)``; 1 for coincident points."""
    if du == 0 and df == 0:
        return 1.0
    if du == 0 or df == 0:
        return math.inf
    return max(du / df, df / du)


@dataclass
class QiReport:
    C: int
    base: int
    ball_radius: int
    ball_size: int
    injective: bool
    roundtrip: bool
    forward_edge_ratio: int       # max d(f(y), f(parent y)) over edges of the ball
    inverse_edge_ratio: int       # max d(f^-1(y), f^-1(parent y)) over the image hull
    pairwise_max_ratio: Optional[float]  # exhaustive over all ball pairs, when affordable
    sampled_pairs: int
    sampled_max_ratio: float

    @property
    def certified_ratio(self) -> float:
        """Upper bound on the distortion of every pair in the ball.

        Along a geodesic the triangle inequality gives
        d(fu, fw) <= forward_edge_ratio * d(u, w), and the same argument for
        the inverse on the image hull bounds d(u, w) / d(fu, fw).
        """
        return float(max(self.forward_edge_ratio, self.inverse_edge_ratio))

    @property
    def max_ratio(self) -> float:
        vals = [self.certified_ratio, self.sampled_max_ratio]
        if self.pairwise_max_ratio is not None:
            vals.append(self.pairwise_max_ratio)
        return max(vals)

    @property
    def ok(self) -> bool:
        return self.injective and self.roundtrip and self.max_ratio <= self.C

    def as_dict(self) -> dict:
        return {"C": self.C, "base": self.base, "ball_radius": self.ball_radius,
                "ball_size": self.ball_size, "injective": self.injective,
                "roundtrip": self.roundtrip, "forward_edge_ratio": self.forward_edge_ratio,
                "inverse_edge_ratio": self.inverse_edge_ratio,
                "pairwise_max_ratio": self.pairwise_max_ratio,
                "sampled_pairs": self.sampled_pairs,
                "sampled_max_ratio": self.sampled_max_ratio,
                "certified_ratio": self.certified_ratio, "max_ratio": self.max_ratio,
                "ok": self.ok}


def _prefix_ids(strings: List[str], depth: int) -> np.ndarray:
    """``M[i, d]`` = id of the length-``d`` prefix of ``strings[i]``, or -1."""
    ids: Dict[str, int] = {}
    M = np.full((len(strings), depth + 1), -1, dtype=np.int64)
    for i, s in enumerate(strings):
        for d in range(len(s) + 1):
            M[i, d] = ids.setdefault(s[:d], len(ids))
    return M


def _lcp_block(M: np.ndarray, a: int, b: int) -> np.ndarray:
    """Common-prefix lengths between rows ``a:b`` of ``M`` and every row."""
    eq = np.ones((b - a, M.shape[0]), dtype=bool)
    lcp = np.zeros((b - a, M.shape[0]), dtype=np.int32)
    for d in range(1, M.shape[1]):
        col = M[a:b, d]
        eq &= (col[:, None] == M[None, :, d]) & (col >= 0)[:, None]
        if not eq.any():
            break
        lcp += eq
    return lcp


def all_pairs_max_ratio(ball: List[str], images: List[str], chunk: int = 512) -> float:
    """Exhaustive maximum distortion over all pairs of distinct ball points."""
    dom = _prefix_ids(ball, max(map(len, ball)))
    img = _prefix_ids(images, max(map(len, images)))
    len_d = np.array([len(w) for w in ball])
    len_i = np.array([len(w) for w in images])
    worst = 1.0
    n = len(ball)
    for a in range(0, n, chunk):
        b = min(n, a + chunk)
        dd = len_d[a:b, None] + len_d[None, :] - 2 * _lcp_block(dom, a, b)
        di = len_i[a:b, None] + len_i[None, :] - 2 * _lcp_block(img, a, b)
        mask = dd > 0
        if np.any(mask & (di == 0)):
            return math.inf
        dd = dd[mask]
        di = di[mask]
        if dd.size:
            worst = max(worst, float(np.max(np.maximum(dd / di, di / dd))))
    return worst


def _random_pairs(n_pairs: int, max_depth: int, rng):
    """Pairs sharing a random prefix, so that both near and far pairs occur."""
    for _ in range(n_pairs):
        u = words.random_word(int(rng.integers(max_depth + 1)), rng)
        shared = int(rng.integers(len(u) + 1))
        tail = int(rng.integers(max_depth - shared + 1))
        if shared == 0:
            w = words.random_word(tail, rng)
        else:
            w = u[:shared] + words.random_relative(tail, rng)
        yield u, w


def sampled_max_ratio(cfg: QiConfig, n_pairs: int, max_depth: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    worst = 1.0
    for u, w in _random_pairs(n_pairs, max_depth, rng):
        r = distortion(words.distance(u, w), words.distance(apply_f(u, cfg), apply_f(w, cfg)))
        worst = max(worst, r)
    return worst


def verify_qi(ball_radius: int, cfg: QiConfig, sample_pairs: int = 0, seed: int = 0,
              sample_depth: int = 1000, pair_cap: int = 10 ** 8,
              cap: int = words.DEFAULT_ENUM_CAP) -> QiReport:
    """Bijectivity and distortion of ``f`` on a ball, plus sampled far pairs."""
    ball = words.ball(ball_radius, cap=cap)
    images = [apply_f(w, cfg) for w in ball]
    image_of = dict(zip(ball, images))
    injective = len(set(images)) == len(images)
    roundtrip = all(invert_f(y, cfg, check=False) == w for w, y in image_of.items())

    fwd = 0
    for w, y in image_of.items():
        if w:
            fwd = max(fwd, words.distance(y, image_of[w[:-1]]))

    hull = words.prefixes(images)
    pre = {y: invert_f(y, cfg) for y in hull}
    inv = 0
    for y, w in pre.items():
        if y:
            inv = max(inv, words.distance(w, pre[y[:-1]]))

    pairwise = None
    if len(ball) * (len(ball) - 1) // 2 <= pair_cap:
        pairwise = all_pairs_max_ratio(ball, images)

    sampled = sampled_max_ratio(cfg, sample_pairs, sample_depth, seed) if sample_pairs else 1.0
    return QiReport(cfg.C, cfg.base, ball_radius, len(ball), injective, roundtrip,
                    fwd, inv, pairwise, sample_pairs, sampled)


@dataclass(frozen=True)
class DisplacementDistribution:
    """Histogram of image depths over all relative words of one length."""

    C: int
    r: int
    counts: Dict[int, int]
    block: str = "X"

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def mean(self) -> Fraction:
        return Fraction(sum(d * c for d, c in self.counts.items()), self.total)


def displacement_distribution(C: int, r: int, block: str = "X") -> DisplacementDistribution:
    if not 1 <= r <= C:
        raise InvalidParameter(f"need 1 <= r <= C, got r={r}, C={C}")
    if block == "I":
        return DisplacementDistribution(C, r, {r: 3 ** r}, "I")
    if block != "X":
        raise InvalidParameter(f"block must be 'X' or 'I', got {block!r}")
    counts = Counter(len(apply_X(C, rel)) for rel in words.relative_words(r))
    return DisplacementDistribution(C, r, dict(sorted(counts.items())), "X")


def leaf_class_counts(C: int) -> Dict[int, int]:
    """Closed-form leaf histogram of the stretching map at depth C."""
    return {C - 1: (3 ** (C - 1) - 1) // 2, C: (3 ** C + 1) // 2, 2 * C - 1: 3 ** (C - 1)}


def d_x(C: int) -> Fraction:
    """Average extra depth gained by a leaf under the stretching map."""
    if C < 2:
        raise InvalidParameter("C must be >= 2")
    return displacement_distribution(C, C).mean - C


def d_x_closed_form(C: int) -> Fraction:
    return Fraction(sum(d * c for d, c in leaf_class_counts(C).items()), 3 ** C) - C


@dataclass
class ASeries:
    """``A(i)``: mean of ``d(1, f(g))`` over the sphere of radius ``i``."""

    cfg: QiConfig
    values: List[Fraction]
    k: List[int] = field(default_factory=list)  # k[q] = |XSET ∩ {0..q-1}|

    @property
    def horizon(self) -> int:
        return len(self.values) - 1

    def as_float(self) -> np.ndarray:
        return np.array([float(v) for v in self.values])

    def rows(self):
        for i, v in enumerate(self.values):
            yield i, v.numerator, v.denominator, float(v)


def a_series(horizon: int, cfg: QiConfig) -> ASeries:
    """Exact ``A(0..horizon)`` by adding the mean block displacement per block."""
    _check_budget(horizon)
    C = cfg.C
    partial = [Fraction(0)] + [displacement_distribution(C, r).mean for r in range(1, C + 1)]
    dx = partial[C] - C
    values: List[Fraction] = []
    ks: List[int] = []
    base = Fraction(0)
    k = 0
    q = 0
    while q * C <= horizon:
        ks.append(k)
        stretch = cfg.in_x(q)
        for r in range(C):
            i = q * C + r
            if i > horizon:
                break
            values.append(base + (partial[r] if stretch else r))
        base += (C + dx) if stretch else C
        k += stretch
        q += 1
    return ASeries(cfg, values, ks)


def block_root_average(q: int, cfg: QiConfig) -> Fraction:
    """``qC + k D_X`` with ``k`` the number of stretched blocks below ``q``."""
    return q * cfg.C + cfg.x_count(q) * d_x(cfg.C)


def sphere_average(i: int, cfg: QiConfig, cap: int = words.DEFAULT_ENUM_CAP) -> Fraction:
    """Brute-force ``A(i)`` by pushing the whole sphere through ``f``."""
    sph = words.sphere(i, cap=cap)
    return Fraction(sum(len(apply_f(g, cfg)) for g in sph), len(sph))


def pushforward_engine(horizon: int, cfg: QiConfig) -> RadialEngine:
    """Engine for the simple random walk whose weighted statistic is ``E[A(X_n)]``."""
    A = a_series(horizon, cfg).as_float()
    return RadialEngine(ConstantProfile(Fraction(1, 4)), horizon, weights=A)


def pushforward_expected_distance(n: int, cfg: QiConfig) -> float:
    """``E[d(1, f(Z_n))] = sum_i P[|Z_n| = i] A(i)``."""
    return float(pushforward_engine(n, cfg).run().weighted[n])


def simulate_pushforward_distances(n: int, cfg: QiConfig, n_walks: int, seed: int,
                                   chunk: int = 20000) -> np.ndarray:
    """``d(1, f(Z_n))`` for independent simple random walks ``Z``."""
    out = []
    rng = np.random.default_rng(seed)
    done = 0
    while done < n_walks:
        m = min(chunk, n_walks - done)
        for z in words.sample_srw_endpoints(n, m, rng):
            out.append(len(apply_f(z, cfg)))
        done += m
    return np.array(out)


def _srw_law(n: int) -> Dict[str, Fraction]:
    """Law of the simple random walk after ``n`` steps by path enumeration."""
    law: Counter = Counter()
    quarter = Fraction(1, 4)

    def walk(w: str, t: int, p: Fraction):
        if t == n:
            law[w] += p
            return
        for nb in words.neighbors(w):
            walk(nb, t + 1, p * quarter)

    walk(words.ROOT, 0, Fraction(1))
    return dict(law)


def pushforward_law_check(n: int, cfg: QiConfig, max_paths: int = 4 ** 8) -> Fraction:
    """Total variation between the law of ``f(Z_n)`` and the push-forward chain.

    The first law pushes the endpoints of all ``4^n`` paths through ``f``.  The
    second runs the chain on the image side with ``p_H(g, h) = p_G(f^-1 g, f^-1 h)``
    from ``f(1)``, locating neighbours through ``invert_f``.
    """
    if 4 ** n > max_paths:
        raise CapacityExceeded(f"4^{n} paths exceed the enumeration cap {max_paths}")
    direct: Counter = Counter()
    for z, p in _srw_law(n).items():
        direct[apply_f(z, cfg)] += p

    quarter = Fraction(1, 4)
    chain: Dict[str, Fraction] = {apply_f(words.ROOT, cfg): Fraction(1)}
    for _ in range(n):
        nxt: Counter = Counter()
        for g, p in chain.items():
            x = invert_f(g, cfg)
            for y in words.neighbors(x):
                nxt[apply_f(y, cfg)] += p * quarter
        chain = dict(nxt)

    support = set(direct) | set(chain)
    return sum(abs(direct.get(h, 0) - chain.get(h, 0)) for h in support) / 2
