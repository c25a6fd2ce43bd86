"""Array kernels over element codes.

An element of the order-2^(3s) group is packed into one int64: bits
0..2s-1 hold the g-exponents, bits 2s..3s-1 the h-exponents. The group
law is described by ``lower``, an (s, 2s) int64 array where bit i' of
``lower[j, i]`` is c(i', i, j) for i' < i (0-based).

Every kernel exists twice: a numba ``@njit`` loop and a vectorised numpy
version. ``ISOPROD_BACKEND=numpy`` selects the latter; both are always
importable so tests and the benchmark can compare them.
"""

import numpy as np

from ._backend import BACKEND, HAVE_NUMBA

if HAVE_NUMBA:
    from numba import njit
else:  # pragma: no cover
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def correction_table(lower, s):
    """ktab[a, j] = mask of a' bits whose parity against it gives beta_j(a, a')."""
    a = np.arange(1 << (2 * s), dtype=np.int64)
    ktab = np.zeros((a.size, s), dtype=np.int64)
    for j in range(s):
        for i in range(2 * s):
            ktab[:, j] ^= np.where((a >> i) & 1, lower[j, i], 0)
    return ktab


# --------------------------------------------------------------------------
# numba


@njit(cache=True)
def _corr_nb(a, a2, ktab, s):
    out = 0
    for j in range(s):
        m = a2 & ktab[a, j]
        p = 0
        while m:
            m &= m - 1
            p ^= 1
        out |= p << j
    return out


@njit(cache=True)
def _mul_nb(x, y, ktab, s):
    amask = (1 << (2 * s)) - 1
    return (x ^ y) ^ (_corr_nb(x & amask, y & amask, ktab, s) << (2 * s))


@njit(cache=True)
def _inv_nb(x, ktab, s):
    a = x & ((1 << (2 * s)) - 1)
    return x ^ (_corr_nb(a, a, ktab, s) << (2 * s))


@njit(cache=True)
def multiply_numba(x, y, ktab, s):
    n = x.shape[0]
    out = np.empty(n, dtype=np.int64)
    for k in range(n):
        out[k] = _mul_nb(x[k], y[k], ktab, s)
    return out


@njit(cache=True)
def inverse_numba(x, ktab, s):
    n = x.shape[0]
    out = np.empty(n, dtype=np.int64)
    for k in range(n):
        out[k] = _inv_nb(x[k], ktab, s)
    return out


@njit(cache=True)
def closure_numba(gens, ktab, s):
    size = 1 << (3 * s)
    seen = np.zeros(size, dtype=np.bool_)
    queue = np.empty(size, dtype=np.int64)
    seen[0] = True
    queue[0] = 0
    head = 0
    tail = 1
    while head < tail:
        x = queue[head]
        head += 1
        for k in range(gens.shape[0]):
            y = _mul_nb(x, gens[k], ktab, s)
            if not seen[y]:
                seen[y] = True
                queue[tail] = y
                tail += 1
    return seen


@njit(cache=True)
def sigma_numba(spherical, ktab, s):
    size = 1 << (3 * s)
    mask = np.zeros(size, dtype=np.bool_)
    mask[0] = True
    t_inv = np.empty(size, dtype=np.int64)
    for t in range(size):
        t_inv[t] = _inv_nb(t, ktab, s)
    for k in range(spherical.shape[0]):
        p = spherical[k]
        while p != 0:
            if not mask[p]:
                for t in range(size):
                    mask[_mul_nb(_mul_nb(t, p, ktab, s), t_inv[t], ktab, s)] = True
            p = _mul_nb(p, spherical[k], ktab, s)
    return mask


# --------------------------------------------------------------------------
# numpy


def _corr_np(a, a2, ktab, s):
    k = ktab[a]
    par = np.bitwise_count(a2[:, None] & k).astype(np.int64) & 1
    return (par << np.arange(s, dtype=np.int64)).sum(axis=1)


def multiply_numpy(x, y, ktab, s):
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    amask = (1 << (2 * s)) - 1
    return (x ^ y) ^ (_corr_np(x & amask, y & amask, ktab, s) << (2 * s))


def inverse_numpy(x, ktab, s):
    x = np.asarray(x, dtype=np.int64)
    a = x & ((1 << (2 * s)) - 1)
    return x ^ (_corr_np(a, a, ktab, s) << (2 * s))


def closure_numpy(gens, ktab, s):
    size = 1 << (3 * s)
    seen = np.zeros(size, dtype=bool)
    seen[0] = True
    frontier = np.zeros(1, dtype=np.int64)
    gens = np.asarray(gens, dtype=np.int64)
    while frontier.size and gens.size:
        cand = multiply_numpy(np.repeat(frontier, gens.size), np.tile(gens, frontier.size), ktab, s)
        cand = np.unique(cand)
        cand = cand[~seen[cand]]
        seen[cand] = True
        frontier = cand
    return seen


def sigma_numpy(spherical, ktab, s):
    size = 1 << (3 * s)
    mask = np.zeros(size, dtype=bool)
    mask[0] = True
    t = np.arange(size, dtype=np.int64)
    t_inv = inverse_numpy(t, ktab, s)
    for x in np.asarray(spherical, dtype=np.int64):
        p = int(x)
        while p != 0:
            if not mask[p]:
                conj = multiply_numpy(multiply_numpy(t, np.full(size, p), ktab, s), t_inv, ktab, s)
                mask[conj] = True
            p = int(multiply_numpy(np.array([p]), np.array([x]), ktab, s)[0])
    return mask


# --------------------------------------------------------------------------

IMPLEMENTATIONS = {
    "numpy": {
        "multiply": multiply_numpy,
        "inverse": inverse_numpy,
        "closure": closure_numpy,
        "sigma": sigma_numpy,
    },
    "numba": {
        "multiply": multiply_numba,
        "inverse": inverse_numba,
        "closure": closure_numba,
        "sigma": sigma_numba,
    },
}

_active = IMPLEMENTATIONS[BACKEND]


def multiply(x, y, ktab, s):
    return _active["multiply"](np.ascontiguousarray(x, dtype=np.int64),
                               np.ascontiguousarray(y, dtype=np.int64), ktab, s)


def inverse(x, ktab, s):
    return _active["inverse"](np.ascontiguousarray(x, dtype=np.int64), ktab, s)


def closure(gens, ktab, s):
    """Boolean membership mask of the subgroup generated by ``gens``."""
    return _active["closure"](np.ascontiguousarray(gens, dtype=np.int64), ktab, s)


def sigma(spherical, ktab, s):
    """Boolean mask of all conjugates of all powers of the given elements."""
    return _active["sigma"](np.ascontiguousarray(spherical, dtype=np.int64), ktab, s)
