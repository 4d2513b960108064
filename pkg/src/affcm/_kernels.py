"""Per-iteration numeric kernels.

Each kernel exists twice: a vectorised numpy version and a numba ``@njit``
loop version. The active set is numba unless ``AFFCM_DISABLE_NUMBA=1`` is
set in the environment (or numba cannot be imported). Both versions work
column by column, so results do not depend on the backend beyond the last
few ulps.

Layout conventions: samples ``X`` are (n, p), centers ``V`` are (c, p),
distances, memberships and masks are (c, n).
"""

from __future__ import annotations

import math
import os

import numpy as np

# ----------------------------------------------------------------------------
# numpy backend


def distances_numpy(X, V):
    diff = V[:, None, :] - X[None, :, :]
    d = np.sqrt(np.einsum("cnp,cnp->cn", diff, diff))
    return d, np.argmin(d, axis=0)


def memberships_numpy(d, m):
    # u_ij = w_ij / sum_k w_kj with w_ij = (D1_j / d_ij)^(2/(m-1)); every w <= 1
    expo = 2.0 / (m - 1.0)
    c, n = d.shape
    d1 = d.min(axis=0)
    zero = d1 == 0.0
    u = np.empty_like(d)
    nz = ~zero
    if nz.any():
        w = (d1[nz][None, :] / d[:, nz]) ** expo
        u[:, nz] = w / w.sum(axis=0)
    if zero.any():
        first = np.argmax(d[:, zero] == 0.0, axis=0)
        u[:, zero] = 0.0
        u[first, np.flatnonzero(zero)] = 1.0
    return u


def lemma1_mask_numpy(d, nearest, delta):
    n = d.shape[1]
    cols = np.arange(n)
    d1 = d[nearest, cols]
    rest = d.copy()
    rest[nearest, cols] = np.inf
    d2 = rest.min(axis=0)
    return d2 - delta.max() >= d1 + delta[nearest]


def lemma2_mask_numpy(d, nearest, delta):
    n = d.shape[1]
    cols = np.arange(n)
    upper = d[nearest, cols] + delta[nearest]
    mask = d - delta[:, None] >= upper[None, :]
    mask[nearest, cols] = False
    return mask


def msfcm_scale_numpy(u, d, q, nearest, m):
    c, n = u.shape
    expo = 2.0 / (m - 1.0)
    out = u.copy()
    cols = np.flatnonzero(q)
    if cols.size == 0 or c < 2:
        return out
    near = nearest[cols]
    dc = d[:, cols]
    d1 = dc[near, np.arange(cols.size)]
    dmax = dc.max(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(dmax > 0.0, d1 / dmax, 1.0)
    big_m = 1.0 / (1.0 + (c - 1) * ratio**expo)
    uc = u[:, cols]
    u_near = uc[near, np.arange(cols.size)]
    others = uc.sum(axis=0) - u_near
    # beta uses the actual off-nearest mass, identical to 1 - u_near on a stochastic column
    ok = (u_near < 1.0) & (others > 0.0)
    beta = np.where(ok, (1.0 - big_m) / np.where(ok, others, 1.0), 1.0)
    scaled = uc * beta[None, :]
    scaled[near, np.arange(cols.size)] = np.where(ok, big_m, u_near)
    out[:, cols] = scaled
    return out


def amfcm_scale_numpy(u, mask):
    kept = np.where(mask, 0.0, u)
    return kept / kept.sum(axis=0)


# ----------------------------------------------------------------------------
# numba backend

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

if HAS_NUMBA:

    @njit(cache=True, nogil=True)
    def distances_numba(X, V):
        n, p = X.shape
        c = V.shape[0]
        d = np.empty((c, n))
        nearest = np.empty(n, dtype=np.int64)
        for j in range(n):
            best = np.inf
            arg = 0
            for i in range(c):
                s = 0.0
                for k in range(p):
                    t = V[i, k] - X[j, k]
                    s += t * t
                r = math.sqrt(s)
                d[i, j] = r
                if r < best:
                    best = r
                    arg = i
            nearest[j] = arg
        return d, nearest

    @njit(cache=True, nogil=True)
    def memberships_numba(d, m):
        # row-major passes over the (c, n) table; m = 2 avoids pow
        c, n = d.shape
        expo = 2.0 / (m - 1.0)
        square = expo == 2.0
        d1 = d[0].copy()
        for i in range(1, c):
            for j in range(n):
                if d[i, j] < d1[j]:
                    d1[j] = d[i, j]
        u = np.empty((c, n))
        s = np.zeros(n)
        for i in range(c):
            for j in range(n):
                if d1[j] == 0.0:
                    continue
                r = d1[j] / d[i, j]
                w = r * r if square else r**expo
                u[i, j] = w
                s[j] += w
        for j in range(n):
            if d1[j] == 0.0:
                hit = False
                for i in range(c):
                    if d[i, j] == 0.0 and not hit:
                        u[i, j] = 1.0
                        hit = True
                    else:
                        u[i, j] = 0.0
            else:
                for i in range(c):
                    u[i, j] /= s[j]
        return u

    @njit(cache=True, nogil=True)
    def lemma1_mask_numba(d, nearest, delta):
        c, n = d.shape
        dmax = delta.max()
        q = np.zeros(n, dtype=np.bool_)
        for j in range(n):
            a = nearest[j]
            d2 = np.inf
            for i in range(c):
                if i != a and d[i, j] < d2:
                    d2 = d[i, j]
            q[j] = d2 - dmax >= d[a, j] + delta[a]
        return q

    @njit(cache=True, nogil=True)
    def lemma2_mask_numba(d, nearest, delta):
        c, n = d.shape
        mask = np.zeros((c, n), dtype=np.bool_)
        for j in range(n):
            a = nearest[j]
            upper = d[a, j] + delta[a]
            for i in range(c):
                if i != a:
                    mask[i, j] = d[i, j] - delta[i] >= upper
        return mask

    @njit(cache=True, nogil=True)
    def msfcm_scale_numba(u, d, q, nearest, m):
        c, n = u.shape
        expo = 2.0 / (m - 1.0)
        out = u.copy()
        if c < 2:
            return out
        for j in range(n):
            if not q[j]:
                continue
            a = nearest[j]
            dmax = 0.0
            others = 0.0
            for i in range(c):
                if d[i, j] > dmax:
                    dmax = d[i, j]
                if i != a:
                    others += u[i, j]
            u_near = u[a, j]
            if u_near >= 1.0 or others <= 0.0:
                continue
            ratio = d[a, j] / dmax if dmax > 0.0 else 1.0
            big_m = 1.0 / (1.0 + (c - 1) * ratio**expo)
            beta = (1.0 - big_m) / others
            for i in range(c):
                out[i, j] = big_m if i == a else u[i, j] * beta
        return out

    @njit(cache=True, nogil=True)
    def amfcm_scale_numba(u, mask):
        c, n = u.shape
        out = np.empty((c, n))
        for j in range(n):
            s = 0.0
            for i in range(c):
                if not mask[i, j]:
                    s += u[i, j]
            for i in range(c):
                out[i, j] = 0.0 if mask[i, j] else u[i, j] / s
        return out


NUMPY_KERNELS = {
    "distances": distances_numpy,
    "memberships": memberships_numpy,
    "lemma1_mask": lemma1_mask_numpy,
    "lemma2_mask": lemma2_mask_numpy,
    "msfcm_scale": msfcm_scale_numpy,
    "amfcm_scale": amfcm_scale_numpy,
}

if HAS_NUMBA:
    NUMBA_KERNELS = {
        "distances": distances_numba,
        "memberships": memberships_numba,
        "lemma1_mask": lemma1_mask_numba,
        "lemma2_mask": lemma2_mask_numba,
        "msfcm_scale": msfcm_scale_numba,
        "amfcm_scale": amfcm_scale_numba,
    }
else:  # pragma: no cover
    NUMBA_KERNELS = NUMPY_KERNELS

USE_NUMBA = HAS_NUMBA and os.environ.get("AFFCM_DISABLE_NUMBA", "") not in ("1", "true", "yes")
BACKEND = "numba" if USE_NUMBA else "numpy"
_active = NUMBA_KERNELS if USE_NUMBA else NUMPY_KERNELS

distances = _active["distances"]
memberships = _active["memberships"]
lemma1_mask = _active["lemma1_mask"]
lemma2_mask = _active["lemma2_mask"]
msfcm_scale = _active["msfcm_scale"]
amfcm_scale = _active["amfcm_scale"]
