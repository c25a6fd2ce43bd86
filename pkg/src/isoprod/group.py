"""Frattini-class-2 groups of order 2^(3s).

Generators g_1..g_2s and h_1..h_s with

    [g_i, g_i'] = h_1^c(i,i',1) ... h_s^c(i,i',s)   (i < i')
    h_j central,  g_i^2 = h_j^2 = 1.

Every element has the unique normal form
g_1^a_1 ... g_2s^a_2s h_1^b_1 ... h_s^b_s. Collecting the product of two
normal forms moves each g_i' of the right factor left past every g_i of the
left factor with i > i'; each such swap leaves the central factor
[g_i', g_i]. Hence

    (a, b) (a', b') = (a + a', b + b' + beta(a, a')),
    beta_j(a, a') = sum_{i' < i} a_i a'_i' c(i', i, j).

Elements are handled as packed ints (see :mod:`isoprod.kernels`) and
wrapped in :class:`GroupElement` at the API boundary.
"""

from __future__ import annotations

import itertools
import re
import warnings
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .gf2 import BitVector, echelon, parity, rank_rows, reduce


class NotIndependentWarning(UserWarning):
    """A fast path that needs independent c-vectors was called without them."""


def pair_list(s: int) -> list[tuple[int, int]]:
    """0-based index pairs (i, i') with i < i' in lexicographic order."""
    return list(itertools.combinations(range(2 * s), 2))


@dataclass(frozen=True)
class StructureTensor:
    """Commutator data c(i, i', j); bit ``p*s + j`` of ``bits`` is c for pair p and h-index j."""

    s: int
    bits: int = 0

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("s must be positive")
        if self.bits < 0 or self.bits >> self.nbits:
            raise ValueError("tensor bits out of range")

    @property
    def r(self) -> int:
        return 2 * self.s

    @property
    def npairs(self) -> int:
        return comb(2 * self.s, 2)

    @property
    def nbits(self) -> int:
        return self.s * comb(2 * self.s, 2)

    def c(self, i: int, i2: int, j: int) -> int:
        """1-based accessor, i < i2."""
        if not 1 <= i < i2 <= 2 * self.s or not 1 <= j <= self.s:
            raise IndexError((i, i2, j))
        p = pair_list(self.s).index((i - 1, i2 - 1))
        return (self.bits >> (p * self.s + j - 1)) & 1

    def column(self, p: int) -> int:
        """The h-vector prescribed for pair number ``p`` (packed, s bits)."""
        return (self.bits >> (p * self.s)) & ((1 << self.s) - 1)

    def cvectors(self) -> list[int]:
        """The s vectors c_j, each packed over the pair index (npairs bits)."""
        out = [0] * self.s
        for p in range(self.npairs):
            col = self.column(p)
            for j in range(self.s):
                if (col >> j) & 1:
                    out[j] |= 1 << p
        return out

    @classmethod
    def from_cvectors(cls, s: int, cvecs: Sequence[int]) -> "StructureTensor":
        if len(cvecs) != s:
            raise ValueError(f"need {s} c-vectors, got {len(cvecs)}")
        bits = 0
        for j, v in enumerate(cvecs):
            for p in range(comb(2 * s, 2)):
                if (v >> p) & 1:
                    bits |= 1 << (p * s + j)
        return cls(s, bits)

    @classmethod
    def from_dict(cls, s: int, entries: dict[tuple[int, int, int], int]) -> "StructureTensor":
        """Build from 1-based {(i, i', j): bit}."""
        pairs = pair_list(s)
        bits = 0
        for (i, i2, j), v in entries.items():
            if v & 1:
                p = pairs.index((i - 1, i2 - 1))
                bits |= 1 << (p * s + j - 1)
        return cls(s, bits)

    def lower_masks(self) -> np.ndarray:
        lower = np.zeros((self.s, 2 * self.s), dtype=np.int64)
        for p, (i1, i2) in enumerate(pair_list(self.s)):
            col = self.column(p)
            for j in range(self.s):
                if (col >> j) & 1:
                    lower[j, i2] |= 1 << i1
        return lower

    def to_hex(self) -> str:
        n = self.nbits
        value = 0
        for k in range(n):
            if (self.bits >> k) & 1:
                value |= 1 << (n - 1 - k)
        return f"s{self.s}:0x{value:0{(n + 3) // 4}x}"

    @classmethod
    def from_hex(cls, text: str) -> "StructureTensor":
        m = re.fullmatch(r"s(\d+):0x([0-9a-fA-F]+)", text.strip())
        if not m:
            raise ValueError(f"malformed tensor string {text!r}")
        s = int(m.group(1))
        value = int(m.group(2), 16)
        n = s * comb(2 * s, 2)
        if len(m.group(2)) != (n + 3) // 4 or value >> n:
            raise ValueError(f"tensor string {text!r} has wrong width for s={s}")
        bits = 0
        for k in range(n):
            if (value >> (n - 1 - k)) & 1:
                bits |= 1 << k
        return cls(s, bits)

    def __str__(self) -> str:
        return self.to_hex()


@dataclass(frozen=True)
class GroupElement:
    a: BitVector
    b: BitVector

    @property
    def s(self) -> int:
        return self.b.length

    @property
    def code(self) -> int:
        return self.a.bits | (self.b.bits << self.a.length)

    @classmethod
    def from_code(cls, s: int, code: int) -> "GroupElement":
        r = 2 * s
        return cls(BitVector(r, code & ((1 << r) - 1)), BitVector(s, code >> r))

    def to_hex(self) -> str:
        bits = list(self.a.entries) + list(self.b.entries)
        value = int("".join(map(str, bits)) or "0", 2)
        return f"{value:0{(len(bits) + 3) // 4}x}"

    @classmethod
    def from_hex(cls, s: int, text: str) -> "GroupElement":
        n = 3 * s
        value = int(text, 16)
        if len(text) != (n + 3) // 4 or value >> n:
            raise ValueError(f"element string {text!r} has wrong width for s={s}")
        entries = [(value >> (n - 1 - k)) & 1 for k in range(n)]
        return cls(BitVector.from_entries(entries[:2 * s]), BitVector.from_entries(entries[2 * s:]))

    def __str__(self) -> str:
        parts = [f"g{i + 1}" for i in range(self.a.length) if self.a[i]]
        parts += [f"h{j + 1}" for j in range(self.b.length) if self.b[j]]
        return "*".join(parts) or "1"


class Fc2Group:
    def __init__(self, tensor: StructureTensor):
        self.tensor = tensor
        self.s = tensor.s
        self.r = 2 * tensor.s
        self.order = 1 << (3 * tensor.s)
        self.independent = rank_rows(tensor.cvectors()) == tensor.s
        self.lower = tensor.lower_masks()
        self._amask = (1 << self.r) - 1

    def __repr__(self) -> str:
        return f"Fc2Group({self.tensor.to_hex()})"

    # -- scalar arithmetic on codes ---------------------------------------

    @cached_property
    def ktab(self) -> np.ndarray:
        if self.r > 16:
            raise ValueError(f"lookup table for s={self.s} is too large")
        return kernels.correction_table(self.lower, self.s)

    @cached_property
    def _ktab_rows(self) -> list[list[int]] | None:
        return self.ktab.tolist() if self.r <= 16 else None

    def _corr(self, a: int, a2: int) -> int:
        rows = self._ktab_rows
        out = 0
        for j in range(self.s):
            if rows is not None:
                k = rows[a][j]
            else:
                k = 0
                for i in range(self.r):
                    if (a >> i) & 1:
                        k ^= int(self.lower[j, i])
            out |= parity(a2 & k) << j
        return out

    def mul_code(self, x: int, y: int) -> int:
        return x ^ y ^ (self._corr(x & self._amask, y & self._amask) << self.r)

    def inv_code(self, x: int) -> int:
        a = x & self._amask
        return x ^ (self._corr(a, a) << self.r)

    def square_code(self, x: int) -> int:
        a = x & self._amask
        return self._corr(a, a) << self.r

    def order_code(self, x: int) -> int:
        if x == 0:
            return 1
        return 2 if self.square_code(x) == 0 else 4

    def comm_code(self, x: int, y: int) -> int:
        return self.mul_code(self.mul_code(self.inv_code(x), self.inv_code(y)), self.mul_code(x, y))

    def all_codes(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    # -- element constructors ---------------------------------------------

    def wrap(self, code: int) -> GroupElement:
        return GroupElement.from_code(self.s, int(code))

    def _check(self, x: GroupElement) -> int:
        if x.a.length != self.r or x.b.length != self.s:
            raise ValueError(f"element of dimension ({x.a.length}, {x.b.length}) not in group with s={self.s}")
        return x.code

    @property
    def identity(self) -> GroupElement:
        return self.wrap(0)

    def gen(self, i: int) -> GroupElement:
        """g_i, 1-based."""
        if not 1 <= i <= self.r:
            raise IndexError(i)
        return self.wrap(1 << (i - 1))

    def hgen(self, j: int) -> GroupElement:
        """h_j, 1-based."""
        if not 1 <= j <= self.s:
            raise IndexError(j)
        return self.wrap(1 << (self.r + j - 1))

    def element(self, a: Iterable[int], b: Iterable[int] | None = None) -> GroupElement:
        b = [0] * self.s if b is None else list(b)
        return GroupElement(BitVector.from_entries(a), BitVector.from_entries(b))

    def word(self, text: str) -> GroupElement:
        """Evaluate a product such as ``"g1 g2 h1 g3^-1"``."""
        x = 0
        for tok in text.replace("*", " ").split():
            m = re.fullmatch(r"([gh])(\d+)(\^-1)?", tok)
            if not m:
                raise ValueError(f"bad token {tok!r}")
            idx = int(m.group(2))
            y = (self.gen(idx) if m.group(1) == "g" else self.hgen(idx)).code
            if m.group(3):
                y = self.inv_code(y)
            x = self.mul_code(x, y)
        return self.wrap(x)

    def elements(self) -> list[GroupElement]:
        return [self.wrap(c) for c in range(self.order)]

    # -- group operations --------------------------------------------------

    def multiply(self, x: GroupElement, y: GroupElement) -> GroupElement:
        return self.wrap(self.mul_code(self._check(x), self._check(y)))

    def inverse(self, x: GroupElement) -> GroupElement:
        return self.wrap(self.inv_code(self._check(x)))

    def power(self, x: GroupElement, n: int) -> GroupElement:
        c = self._check(x)
        if n < 0:
            c, n = self.inv_code(c), -n
        out = 0
        for _ in range(n % 4):
            out = self.mul_code(out, c)
        return self.wrap(out)

    def element_order(self, x: GroupElement) -> int:
        return self.order_code(self._check(x))

    def commutator(self, x: GroupElement, y: GroupElement) -> GroupElement:
        """x^-1 y^-1 x y."""
        return self.wrap(self.comm_code(self._check(x), self._check(y)))

    def conjugate(self, t: GroupElement, x: GroupElement) -> GroupElement:
        """t x t^-1."""
        tc = self._check(t)
        return self.wrap(self.mul_code(self.mul_code(tc, self._check(x)), self.inv_code(tc)))

    def conjugacy_class(self, x: GroupElement) -> frozenset[GroupElement]:
        c = self._check(x)
        t = self.all_codes()
        conj = kernels.multiply(kernels.multiply(t, np.full(self.order, c), self.ktab, self.s),
                                kernels.inverse(t, self.ktab, self.s), self.ktab, self.s)
        return frozenset(self.wrap(v) for v in np.unique(conj))

    def phi_image(self, x: GroupElement) -> BitVector:
        self._check(x)
        return x.a

    def closure_mask(self, xs: Sequence[GroupElement]) -> np.ndarray:
        gens = np.array([self._check(x) for x in xs], dtype=np.int64)
        return kernels.closure(gens, self.ktab, self.s)

    def subgroup_generated(self, xs: Sequence[GroupElement]) -> int:
        return int(self.closure_mask(xs).sum())

    def generates_fast(self, xs: Sequence[GroupElement]) -> bool:
        if not self.independent:
            warnings.warn(f"{self!r} has dependent c-vectors; falling back to closure",
                          NotIndependentWarning, stacklevel=2)
            return self.subgroup_generated(xs) == self.order
        return rank_rows(self._check(x) & self._amask for x in xs) == self.r

    def generates(self, xs: Sequence[GroupElement]) -> bool:
        if self.independent:
            return self.generates_fast(xs)
        return self.subgroup_generated(xs) == self.order

    # -- invariants used to prune isomorphism tests ------------------------

    @cached_property
    def order_statistics(self) -> tuple[int, int, int]:
        """Numbers of elements of order 1, 2 and 4."""
        codes = self.all_codes()
        sq = kernels.multiply(codes, codes, self.ktab, self.s)
        n2 = int(np.count_nonzero(sq == 0)) - 1
        return (1, n2, self.order - 1 - n2)

    @cached_property
    def derived_mask(self) -> np.ndarray:
        # commutators are central and bilinear, so generator commutators suffice
        comms = [self.comm_code(1 << i, 1 << k) for i, k in pair_list(self.s)]
        return kernels.closure(np.array(comms, dtype=np.int64), self.ktab, self.s)

    @property
    def derived_order(self) -> int:
        return int(self.derived_mask.sum())

    def h_span_mask(self) -> np.ndarray:
        mask = np.zeros(self.order, dtype=bool)
        mask[(np.arange(1 << self.s, dtype=np.int64) << self.r)] = True
        return mask


def make_group(t: StructureTensor) -> Fc2Group:
    return Fc2Group(t)


# --------------------------------------------------------------------------
# isomorphism by backtracking over generator images


class _LinearMap:
    """Partial linear map GF(2)^s -> GF(2)^s given by (input, output) pairs."""

    def __init__(self, s: int, rows: list[int] | None = None):
        self.s = s
        self.rows = rows or []

    def extend(self, x: int, y: int) -> "_LinearMap | None":
        low = (1 << self.s) - 1
        v = x | (y << self.s)
        for row in self.rows:
            if v & (row & -row) & low:
                v ^= row
        if v & low == 0:
            return self if v == 0 else None
        return _LinearMap(self.s, self.rows + [v])


def _images_consistent(g1: Fc2Group, g2: Fc2Group, images: list[int], new: int,
                       lin: _LinearMap) -> _LinearMap | None:
    k = len(images)
    xk = 1 << k
    for i in range(k):
        src = g1.comm_code(1 << i, xk) >> g1.r
        dst = g2.comm_code(images[i], new) >> g2.r
        nxt = lin.extend(src, dst)
        if nxt is None:
            return None
        lin = nxt
    return lin


def find_isomorphism(g1: Fc2Group, g2: Fc2Group) -> list[int] | None:
    """Images (codes in ``g2``) of g_1..g_2s under some isomorphism, or None.

    Only images with zero h-part are tried: multiplying an image by a
    central element changes neither its order nor any commutator, so a
    solution exists iff one exists of this shape.
    """
    if g1.order != g2.order:
        return None
    if not (g1.independent and g2.independent):
        raise ValueError("isomorphism test is defined for independent tensors only")
    if g1.order_statistics != g2.order_statistics or g1.derived_order != g2.derived_order:
        return None
    r = g1.r
    candidates = [a for a in range(1, 1 << r) if g2.order_code(a) == 2]

    def search(images, span, lin):
        if len(images) == r:
            return list(images)
        for cand in candidates:
            if reduce(cand, span) == 0:
                continue
            nxt = _images_consistent(g1, g2, images, cand, lin)
            if nxt is None:
                continue
            found = search(images + [cand], echelon(span + [cand]), nxt)
            if found is not None:
                return found
        return None

    return search([], [], _LinearMap(g1.s))


def is_isomorphic(g1: Fc2Group, g2: Fc2Group) -> bool:
    return find_isomorphism(g1, g2) is not None


def homomorphism_from_images(g1: Fc2Group, g2: Fc2Group, images: Sequence[int]):
    """Extend generator images to a map on codes; h_j goes to the matching product of commutators."""
    s, r = g1.s, g1.r
    # express each h_j through commutators of generators
    rows = []
    for i, k in pair_list(s):
        src = g1.comm_code(1 << i, 1 << k) >> r
        dst = g2.comm_code(images[i], images[k])
        rows.append((src, dst))
    himg = []
    for j in range(s):
        target = 1 << j
        # Gaussian elimination carrying the products along
        basis: list[tuple[int, int]] = []
        for src, dst in rows:
            for bsrc, bdst in basis:
                if src & (bsrc & -bsrc):
                    src ^= bsrc
                    dst = g2.mul_code(dst, bdst)
            if src:
                basis.append((src, dst))
        t, acc = target, 0
        for bsrc, bdst in basis:
            if t & (bsrc & -bsrc):
                t ^= bsrc
                acc = g2.mul_code(acc, bdst)
        if t:
            raise ValueError("h_j not in the span of commutators")
        himg.append(acc)

    def phi(code: int) -> int:
        out = 0
        for i in range(r):
            if (code >> i) & 1:
                out = g2.mul_code(out, images[i])
        for j in range(s):
            if (code >> (r + j)) & 1:
                out = g2.mul_code(out, himg[j])
        return out

    return phi
