"""Compiled inner loop of the birth-death forward sweep.

The law at time t is supported on distances j = t (mod 2), so it is stored
parity-split: ``even[k]`` is the mass at j = 2k and ``odd[k]`` the mass at
j = 2k + 1.  One step maps one array into the other with unit-stride loops.
Transition tables are split the same way (``up_e[k] = up[2k]`` and so on).
"""

import numpy as np
from numba import njit

RENORM_TOL = 1e-12


@njit(cache=True, fastmath=True)
def _stats(cur, klo, khi, parity, w_cur, down_cur):
    # zero-based views let LLVM vectorise the reductions
    n = khi - klo + 1
    m = cur[klo:klo + n]
    w = w_cur[klo:klo + n]
    dn = down_cur[klo:klo + n]
    total = 0.0
    kmean = 0.0
    wsum = 0.0
    lam = 0.0
    for k in range(n):
        total += m[k]
        kmean += k * m[k]
        wsum += w[k] * m[k]
        lam += dn[k] * m[k]
    return total, 2.0 * (kmean + klo * total) + parity * total, wsum, lam


@njit(cache=True, fastmath=True)
def _even_to_odd(even, odd, up_e, down_e, lo, hi):
    n = hi - lo + 1
    e0 = even[lo:lo + n]
    e1 = even[lo + 1:lo + 1 + n]
    u = up_e[lo:lo + n]
    d = down_e[lo + 1:lo + 1 + n]
    o = odd[lo:lo + n]
    for k in range(n):
        o[k] = e0[k] * u[k] + e1[k] * d[k]


@njit(cache=True, fastmath=True)
def _odd_to_even(odd, even, up_o, down_o, lo, hi):
    n = hi - lo + 1
    o0 = odd[lo - 1:lo - 1 + n]
    o1 = odd[lo:lo + n]
    u = up_o[lo - 1:lo - 1 + n]
    d = down_o[lo:lo + n]
    e = even[lo:lo + n]
    for k in range(n):
        e[k] = o0[k] * u[k] + o1[k] * d[k]


@njit(cache=True)
def advance(even, odd, up_e, down_e, up_o, down_o, w_e, w_o,
            t0, t1, klo, khi, trim,
            out_mean, out_weighted, out_zero, out_lam):
    """Evolve the law from time ``t0`` to ``t1``; returns the live index range.

    ``klo..khi`` index the live cells of the array holding time ``t0``
    (``even`` if t0 is even).  Cells outside the live range may hold stale
    values; the loops zero one guard cell on each side and never read further.
    Per-step statistics for times t0+1..t1 go into the ``out_*`` arrays.
    """
    for t in range(t0, t1):
        if t % 2 == 0:
            # even -> odd: odd[k] = even[k] up(2k) + even[k+1] down(2k+2)
            even[khi + 1] = 0.0
            nlo = klo - 1 if klo > 0 else 0
            nhi = khi
            if nlo < klo:
                even[nlo] = 0.0
            _even_to_odd(even, odd, up_e, down_e, nlo, nhi)
            cur = odd
            w_cur = w_o
            d_cur = down_o
            parity = 1
        else:
            # odd -> even: even[k] = odd[k-1] up(2k-1) + odd[k] down(2k+1)
            odd[khi + 1] = 0.0
            nlo = klo
            nhi = khi + 1
            if klo > 0:
                odd[klo - 1] = 0.0
                start = klo
            else:
                even[0] = odd[0] * down_o[0]
                start = 1
            _odd_to_even(odd, even, up_o, down_o, start, nhi)
            cur = even
            w_cur = w_e
            d_cur = down_e
            parity = 0

        while nlo < nhi and cur[nlo] < trim:
            cur[nlo] = 0.0
            nlo += 1
        while nhi > nlo and cur[nhi] < trim:
            cur[nhi] = 0.0
            nhi -= 1
        klo = nlo
        khi = nhi

        total, mean, wsum, lam = _stats(cur, klo, khi, parity, w_cur, d_cur)
        if abs(total - 1.0) > RENORM_TOL:
            inv = 1.0 / total
            for k in range(klo, khi + 1):
                cur[k] *= inv
            mean *= inv
            wsum *= inv
            lam *= inv
        out_mean[t + 1] = mean
        out_weighted[t + 1] = wsum
        out_lam[t + 1] = lam
        out_zero[t + 1] = cur[0] if (parity == 0 and klo == 0) else 0.0
    return klo, khi


def split(arr, size):
    """Parity-split a table indexed by distance into two arrays of length ``size``."""
    e = np.zeros(size)
    o = np.zeros(size)
    ev = arr[0::2]
    ov = arr[1::2]
    e[:min(size, len(ev))] = ev[:size]
    o[:min(size, len(ov))] = ov[:size]
    return e, o


def warm_up():
    """Trigger compilation on a tiny problem."""
    n = 4
    size = n // 2 + 3
    even = np.zeros(size)
    odd = np.zeros(size)
    even[0] = 1.0
    up = np.full(n + 3, 0.75)
    up[0] = 1.0
    down = np.full(n + 3, 0.25)
    down[0] = 0.0
    up_e, up_o = split(up, size)
    down_e, down_o = split(down, size)
    w_e, w_o = split(np.arange(n + 3, dtype=np.float64), size)
    outs = [np.zeros(n + 1) for _ in range(4)]
    advance(even, odd, up_e, down_e, up_o, down_o, w_e, w_o, 0, n, 0, 0, 0.0, *outs)
