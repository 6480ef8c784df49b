"""Rooted-tree model of the free group F_2.

Vertices are addressed by the word read along the edge path from the root.
The root has four children labelled ``a, b, c, d``; every other vertex has
three children labelled ``a, b, c``.  Addresses are plain ``str`` values, so
they are immutable, hashable and cheap to slice; the distance to the root is
``len(word)``.
"""

from __future__ import annotations

import itertools
import os
from typing import Iterable, Iterator, List, Sequence, Union

import numpy as np

from .errors import CapacityExceeded, InvalidAddress

WordAddress = str

ROOT: WordAddress = ""
ROOT_LETTERS = "abcd"
LETTERS = "abc"

DEFAULT_ENUM_CAP = 20_000_000


def validate(letters: Union[str, Sequence[str]]) -> WordAddress:
    """Return ``letters`` as an address, checking the alphabet rule.

    >>> validate(["d", "a", "b"])
    'dab'
    """
    word = "".join(letters)
    if word and word[0] not in ROOT_LETTERS:
        raise InvalidAddress(f"first letter must be one of a,b,c,d: {word!r}")
    for pos in range(1, len(word)):
        if word[pos] not in LETTERS:
            raise InvalidAddress(
                f"letter {word[pos]!r} at position {pos} of {word!r}; only a,b,c allowed after the first")
    return word


def sphere_size(i: int) -> int:
    if i < 0:
        raise ValueError("radius must be nonnegative")
    return 1 if i == 0 else 4 * 3 ** (i - 1)


def ball_size(r: int) -> int:
    return sum(sphere_size(i) for i in range(r + 1))


def _check_cap(size: int, cap: int) -> None:
    if size > cap:
        raise CapacityExceeded(f"enumeration of {size} elements exceeds cap {cap}")


def iter_sphere(i: int) -> Iterator[WordAddress]:
    """Lexicographic enumeration of the addresses at depth ``i``."""
    if i == 0:
        yield ROOT
        return
    for first in ROOT_LETTERS:
        for rest in itertools.product(LETTERS, repeat=i - 1):
            yield first + "".join(rest)


def sphere(i: int, cap: int = DEFAULT_ENUM_CAP) -> List[WordAddress]:
    _check_cap(sphere_size(i), cap)
    return list(iter_sphere(i))


def ball(r: int, cap: int = DEFAULT_ENUM_CAP) -> List[WordAddress]:
    """All addresses of depth at most ``r``, ordered by depth then lexicographically."""
    _check_cap(ball_size(r), cap)
    out: List[WordAddress] = []
    for i in range(r + 1):
        out.extend(iter_sphere(i))
    return out


def relative_words(length: int) -> List[str]:
    """All words of the given length over ``a, b, c`` (children below a non-root vertex)."""
    return ["".join(p) for p in itertools.product(LETTERS, repeat=length)]


def block_split(w: WordAddress, C: int) -> List[str]:
    """Split ``w`` into consecutive depth-``C`` blocks; the last may be shorter."""
    if C < 1:
        raise ValueError("block size must be positive")
    return [w[q:q + C] for q in range(0, len(w), C)]


def lcp_length(u: WordAddress, w: WordAddress) -> int:
    return len(os.path.commonprefix((u, w)))


def distance(u: WordAddress, w: WordAddress) -> int:
    """Tree distance through the deepest common ancestor."""
    return len(u) + len(w) - 2 * lcp_length(u, w)


def neighbors(w: WordAddress) -> List[WordAddress]:
    """The four tree neighbours: the parent (if any) followed by the children."""
    if not w:
        return list(ROOT_LETTERS)
    return [w[:-1]] + [w + x for x in LETTERS]


def random_word(depth: int, rng) -> WordAddress:
    """Uniform address of the given depth drawn with a ``numpy.random.Generator``."""
    if depth == 0:
        return ROOT
    first = ROOT_LETTERS[int(rng.integers(4))]
    return first + random_relative(depth - 1, rng)


_LETTER_BYTES = np.frombuffer(LETTERS.encode(), dtype=np.uint8)


def random_relative(length: int, rng) -> str:
    """Uniform word of the given length over ``a, b, c``."""
    return _LETTER_BYTES[rng.integers(3, size=length)].tobytes().decode()


def prefixes(words: Iterable[WordAddress]) -> set:
    """The subtree spanned by the root and ``words`` (every prefix of every word)."""
    hull = {ROOT}
    for w in words:
        for d in range(len(w), 0, -1):
            p = w[:d]
            if p in hull:
                break
            hull.add(p)
    return hull


_CODES = "abcd"


def sample_srw_endpoints(n: int, n_walks: int, rng) -> List[WordAddress]:
    """Endpoints of independent simple random walks of ``n`` steps from the root.

    All walkers advance together; each keeps its current word as a letter stack.
    """
    stack = np.zeros((n_walks, max(n, 1)), dtype=np.int8)
    depth = np.zeros(n_walks, dtype=np.int64)
    rows = np.arange(n_walks)
    for _ in range(n):
        u = rng.random(n_walks)
        at_root = depth == 0
        back = ~at_root & (u < 0.25)
        letter = np.where(at_root, np.floor(u * 4), np.floor((u - 0.25) * 4)).astype(np.int8)
        fwd = ~back
        stack[rows[fwd], depth[fwd]] = letter[fwd]
        depth += np.where(back, -1, 1)
    table = np.frombuffer(_CODES.encode(), dtype=np.uint8)
    chars = table[stack]
    return [chars[i, :depth[i]].tobytes().decode() for i in range(n_walks)]
