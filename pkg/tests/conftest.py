import numpy as np
import pytest
from hypothesis import settings

from isoprod.group import StructureTensor, pair_list

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def collect(s, c_lookup, word):
    """Rewrite a word of letters ('g', i) / ('h', j) (0-based) to normal form.

    Only the defining relations are used, one at a time: h's are central and
    square to 1, g_i g_i = 1, and g_i g_k = g_k g_i [g_i, g_k] for i > k where
    [g_i, g_k] = prod h_j^c(k, i, j). Returns (a, b) as packed ints.
    """
    gs = [i for kind, i in word if kind == "g"]
    b = 0
    for kind, j in word:
        if kind == "h":
            b ^= 1 << j
    changed = True
    while changed:
        changed = False
        k = 0
        while k < len(gs) - 1:
            x, y = gs[k], gs[k + 1]
            if x == y:
                del gs[k:k + 2]
                changed = True
                k = max(k - 1, 0)
                continue
            if x > y:
                gs[k], gs[k + 1] = y, x
                b ^= c_lookup[(y, x)]
                changed = True
            k += 1
    a = 0
    for i in gs:
        a |= 1 << i
    return a, b


def code_to_word(s, code):
    r = 2 * s
    word = [("g", i) for i in range(r) if (code >> i) & 1]
    word += [("h", j) for j in range(s) if (code >> (r + j)) & 1]
    return word


def lookup_for(t: StructureTensor):
    return {pair: t.column(p) for p, pair in enumerate(pair_list(t.s))}


def oracle_multiply(t: StructureTensor, x: int, y: int) -> int:
    a, b = collect(t.s, lookup_for(t), code_to_word(t.s, x) + code_to_word(t.s, y))
    return a | (b << (2 * t.s))


def dihedral8():
    """Symmetries of a square as permutations of its vertices 0..3."""
    rot = (1, 2, 3, 0)
    ref = (0, 3, 2, 1)

    def comp(p, q):  # p after q
        return tuple(p[q[k]] for k in range(4))

    elems = {(0, 1, 2, 3)}
    frontier = list(elems)
    while frontier:
        nxt = []
        for e in frontier:
            for g in (rot, ref):
                m = comp(e, g)
                if m not in elems:
                    elems.add(m)
                    nxt.append(m)
        frontier = nxt
    return elems, comp, rot, ref


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
