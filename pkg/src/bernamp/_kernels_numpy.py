"""Pure-numpy implementations of the hot kernels.

Reference semantics for _kernels_numba; always importable.  Vectorized
rather than looped, so intermediate (grid x grid) arrays are materialized.
"""

import numpy as np


def _rterm(lp, lq, alpha):
    # vectorized log of p^alpha * q^(1-alpha) with zero-mass conventions
    with np.errstate(invalid="ignore"):
        raw = alpha * lp + (1.0 - alpha) * lq
    return np.where(np.isneginf(lp), -np.inf,
                    np.where(np.isneginf(lq), np.inf, raw))


def _lse(arr):
    m = np.max(arr) if arr.size else -np.inf
    if m == -np.inf:
        return -np.inf
    if m == np.inf:
        return np.inf
    with np.errstate(under="ignore"):
        return float(m + np.log(np.sum(np.exp(arr - m))))


def hamming_renyi_logsum(lp0, lp1, lq0, lq1, nbits, lc, l1c, alpha, lbinom):
    j = np.arange(nbits + 1, dtype=np.float64)
    wa = j * lc + (nbits - j) * l1c
    wb = wa[::-1]
    lX = np.logaddexp(lp0 + wa, lp1 + wb)
    lY = np.logaddexp(lq0 + wa, lq1 + wb)
    return _lse(lbinom + _rterm(lX, lY, alpha))


def d1_grid_scan(lg0, lg1, k, lc, l1c, alpha, cap, lbinom):
    n = lg0.size
    g1 = np.logaddexp(_rterm(lg0[:, None], lg0[None, :], alpha),
                      _rterm(lg1[:, None], lg1[None, :], alpha))
    feas = (g1 <= cap) & (g1.T <= cap)
    j = np.arange(k + 1, dtype=np.float64)
    wa = j * lc + (k - j) * l1c
    wb = wa[::-1]
    # lXv[j][i]: log pushforward mass at Hamming weight j for grid point i
    lXv = np.logaddexp(lg0[:, None] + wa[None, :], lg1[:, None] + wb[None, :])
    obj = np.full((n, n), -np.inf)
    for jj in range(k + 1):
        col = lXv[:, jj]
        term = _rterm(col[:, None], col[None, :], alpha)
        obj = np.logaddexp(obj, lbinom[jj] + term)
    obj[~feas] = -np.inf
    flat = int(np.argmax(obj))
    bi, bj = divmod(flat, n)
    best = float(obj[bi, bj])
    if best == -np.inf:
        return best, -1, -1
    return best, bi, bj


def full_renyi_logsum(lX, lY, alpha):
    return _lse(_rterm(lX, lY, alpha))


def corner_pushforward_full(lmass, pop, d, k, lc, l1c):
    n = lmass.size
    dk = d * k
    m = 1 << dk
    mask = (1 << d) - 1
    out = np.full(m, -np.inf)
    o = np.arange(m, dtype=np.int64)
    # chunked over outcomes to bound the (chunk, n) scratch
    step = max(1, min(m, (1 << 22) // max(1, n)))
    for lo in range(0, m, step):
        oc = o[lo:lo + step]
        s = np.zeros((oc.size, n), dtype=np.int64)
        for jj in range(k):
            chunk = (oc >> (d * jj)) & mask
            s += pop[chunk[:, None] ^ np.arange(n, dtype=np.int64)[None, :]]
        with np.errstate(invalid="ignore"):
            w = s * lc + (dk - s) * l1c
        if not np.isfinite(lc):
            w = np.where(s == 0, (dk - s) * l1c, w)
        if not np.isfinite(l1c):
            w = np.where(s == dk, s * lc, w)
        terms = lmass[None, :] + w
        mx = np.max(terms, axis=1)
        ok = mx > -np.inf
        with np.errstate(under="ignore", invalid="ignore"):
            res = mx + np.log(np.sum(np.exp(terms - mx[:, None]), axis=1))
        out[lo:lo + step] = np.where(ok, res, -np.inf)
    return out


def point_pushforward_full(lx, l1x, d, k):
    dk = d * k
    m = 1 << dk
    o = np.arange(m, dtype=np.int64)
    acc = np.zeros(m, dtype=np.float64)
    for b in range(dk):
        bit = (o >> b) & 1
        acc += np.where(bit == 1, lx[b % d], l1x[b % d])
    return acc
