"""Linear algebra over GF(2) with vectors packed into Python ints.

Entry ``k`` of a vector lives in bit ``k`` of the packed integer. All
reductions are plain Gaussian elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class DimensionError(ValueError):
    """Operands of incompatible length."""


def parity(x: int) -> int:
    return x.bit_count() & 1


def lowbit_index(x: int) -> int:
    return (x & -x).bit_length() - 1


@dataclass(frozen=True)
class BitVector:
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise DimensionError("negative length")
        if self.bits < 0 or self.bits >> self.length:
            raise DimensionError(f"bits {self.bits:#x} do not fit in length {self.length}")

    @classmethod
    def from_entries(cls, entries: Iterable[int]) -> "BitVector":
        entries = list(entries)
        bits = 0
        for k, e in enumerate(entries):
            if e & 1:
                bits |= 1 << k
        return cls(len(entries), bits)

    @classmethod
    def zero(cls, length: int) -> "BitVector":
        return cls(length, 0)

    @classmethod
    def unit(cls, length: int, k: int) -> "BitVector":
        return cls(length, 1 << k)

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple((self.bits >> k) & 1 for k in range(self.length))

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, k: int) -> int:
        if not -self.length <= k < self.length:
            raise IndexError(k)
        return (self.bits >> (k % self.length)) & 1

    def __iter__(self):
        return iter(self.entries)

    def __add__(self, other: "BitVector") -> "BitVector":
        return add(self, other)

    def __bool__(self) -> bool:
        return self.bits != 0

    def weight(self) -> int:
        return self.bits.bit_count()

    def dot(self, other: "BitVector") -> int:
        _check_len(self, other)
        return parity(self.bits & other.bits)

    def __str__(self) -> str:
        return "".join(str(e) for e in self.entries)


def _check_len(x: BitVector, y: BitVector) -> None:
    if x.length != y.length:
        raise DimensionError(f"length mismatch: {x.length} vs {y.length}")


def add(x: BitVector, y: BitVector) -> BitVector:
    _check_len(x, y)
    return BitVector(x.length, x.bits ^ y.bits)


@dataclass(frozen=True)
class BitMatrix:
    """Row-major GF(2) matrix; each row is a packed int of width ``cols``."""

    rows: tuple[int, ...]
    cols: int

    def __post_init__(self):
        for r in self.rows:
            if r < 0 or r >> self.cols:
                raise DimensionError(f"row {r:#x} wider than {self.cols} columns")

    @classmethod
    def from_vectors(cls, vectors: Sequence[BitVector], cols: int | None = None) -> "BitMatrix":
        if cols is None:
            if not vectors:
                return cls((), 0)
            cols = vectors[0].length
        for v in vectors:
            if v.length != cols:
                raise DimensionError("rows of unequal length")
        return cls(tuple(v.bits for v in vectors), cols)

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]]) -> "BitMatrix":
        vecs = [BitVector.from_entries(r) for r in rows]
        return cls.from_vectors(vecs, len(rows[0]) if rows else 0)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(tuple(1 << k for k in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.cols)

    def vectors(self) -> list[BitVector]:
        return [BitVector(self.cols, r) for r in self.rows]

    def to_lists(self) -> list[list[int]]:
        return [list(BitVector(self.cols, r).entries) for r in self.rows]

    def transpose(self) -> "BitMatrix":
        out = []
        for c in range(self.cols):
            col = 0
            for k, r in enumerate(self.rows):
                if (r >> c) & 1:
                    col |= 1 << k
            out.append(col)
        return BitMatrix(tuple(out), len(self.rows))


def echelon(rows: Iterable[int]) -> list[int]:
    """Fully reduced row-echelon basis of the span, sorted by pivot (lowest set bit)."""
    basis: list[int] = []
    for r in rows:
        for b in basis:
            if r & (b & -b):
                r ^= b
        if not r:
            continue
        piv = r & -r
        basis = [b ^ r if b & piv else b for b in basis]
        basis.append(r)
    basis.sort(key=lambda b: b & -b)
    return basis


def rank_rows(rows: Iterable[int]) -> int:
    return len(echelon(rows))


def reduce(v: int, basis: Sequence[int]) -> int:
    """Residue of ``v`` modulo an echelon basis produced by :func:`echelon`."""
    for b in basis:
        if v & (b & -b):
            v ^= b
    return v


def rank(m: BitMatrix) -> int:
    return rank_rows(m.rows)


def in_span(v: BitVector, basis: Sequence[BitVector]) -> bool:
    for b in basis:
        _check_len(v, b)
    return reduce(v.bits, echelon(b.bits for b in basis)) == 0


def subspace_canonical(basis: Sequence[BitVector], cols: int | None = None) -> BitMatrix:
    if cols is None:
        cols = basis[0].length if basis else 0
    for b in basis:
        if b.length != cols:
            raise DimensionError("basis vectors of unequal length")
    return BitMatrix(tuple(echelon(b.bits for b in basis)), cols)


def nullspace(rows: Sequence[int], cols: int) -> list[int]:
    """Basis of ``{x : <r, x> = 0 for every row r}`` in ``GF(2)^cols``."""
    basis = echelon(rows)
    pivots = {lowbit_index(b): b for b in basis}
    out = []
    for free in range(cols):
        if free in pivots:
            continue
        x = 1 << free
        for p, b in pivots.items():
            if (b >> free) & 1:
                x |= 1 << p
        out.append(x)
    return out


def span_elements(basis: Sequence[int]) -> list[int]:
    out = [0]
    for b in basis:
        out += [x ^ b for x in out]
    return out


def count_independent_tuples(dim: int, k: int) -> int:
    """Ordered k-tuples of linearly independent vectors in GF(2)^dim."""
    n = 1
    for l in range(k):
        n *= (1 << dim) - (1 << l)
    return n
