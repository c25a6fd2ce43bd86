"""The explicit generating vectors T1, T2 (regular) and V2 (irregular).

Entries are written as words in the g_i and instantiated literally; index
patterns that do not make sense for small s are refused with
:class:`ConstructionUndefined` instead of being patched.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from math import comb

import numpy as np

from .gf2 import count_independent_tuples, echelon, nullspace, parity, rank_rows
from .group import Fc2Group, StructureTensor, make_group, pair_list
from .ramification import (
    CriterionInapplicable,
    GeneratorSystem,
    TypeSignature,
    are_disjoint,
    lemma_criterion,
    long_relation,
)


class ConstructionUndefined(ValueError):
    pass


def _prod(*idx: int) -> str:
    return " ".join(f"g{i}" for i in idx)


def _prod_inv(*idx: int) -> str:
    return " ".join(f"g{i}^-1" for i in reversed(idx))


def _comm(i: int, k: int) -> str:
    return f"g{i}^-1 g{k}^-1 g{i} g{k}"


def t1_words(s: int) -> tuple[list[str], list[str]]:
    """(handles, spherical) of T1 = (g1..gs, bar g_s, g_{s+1}..g_2s, bar g_2s)."""
    if s < 1:
        raise ConstructionUndefined("T1 needs s >= 1")
    first = [f"g{i}" for i in range(1, s + 1)] + [_prod_inv(*range(1, s + 1))]
    second = [f"g{i}" for i in range(s + 1, 2 * s + 1)] + [_prod_inv(*range(s + 1, 2 * s + 1))]
    return [], first + second


def t2_words(s: int) -> tuple[list[str], list[str]]:
    if s < 3:
        raise ConstructionUndefined(f"T2 needs s >= 3 (indices g2, g3 must lie in the first half), got s={s}")
    out = []
    for o in (0, s):
        out += [_prod(o + i, o + i + 1) for i in range(1, s)]
        out.append(_prod(o + s, o + 2, o + 3))
        out.append(_prod_inv(o + 1, o + 2, o + 3))
    return [], out


def h_word(s: int, q: int) -> str:
    """[g_s, g_2s] [g_{s-1}, g_{2s-1}] ... [g_{s-q+1}, g_{2s-q+1}]."""
    return " ".join(_comm(s - i + 1, 2 * s - i + 1) for i in range(1, q + 1))


def v2_words(s: int, q: int) -> tuple[list[str], list[str]]:
    if s < 3 or not 1 <= q <= s - 2:
        raise ConstructionUndefined(f"V2 needs s >= 3 and 1 <= q <= s-2, got s={s}, q={q}")
    m = s - q
    first = [_prod(i, i + 1) for i in range(1, m + 1)] + [_prod(m + 1, 1)]
    second = [_prod(s + i, s + i + 1) for i in range(1, m + 1)]
    second.append(_prod(2 * s - q + 1, s + 1) + " " + h_word(s, q))
    handles = []
    for i in range(1, q + 1):
        handles += [f"g{s - i + 1}", f"g{2 * s - i + 1}"]
    return handles, first + second


def construction_words(which: str, s: int, q: int = 0) -> tuple[list[str], list[str]]:
    if which == "T1":
        return t1_words(s)
    if which == "T2":
        return t2_words(s)
    if which == "V2":
        return v2_words(s, q)
    raise ValueError(f"unknown construction {which!r}")


def second_name(q: int) -> str:
    return "T2" if q == 0 else "V2"


def _build(g: Fc2Group, words: tuple[list[str], list[str]]) -> GeneratorSystem:
    handles, spherical = words
    return GeneratorSystem(len(handles) // 2, tuple(g.word(w) for w in handles),
                           tuple(g.word(w) for w in spherical))


def build_T1(g: Fc2Group) -> GeneratorSystem:
    return _build(g, t1_words(g.s))


def build_T2_regular(g: Fc2Group) -> GeneratorSystem:
    return _build(g, t2_words(g.s))


def build_V2_irregular(g: Fc2Group, q: int) -> GeneratorSystem:
    return _build(g, v2_words(g.s, q))


def build_second(g: Fc2Group, q: int) -> GeneratorSystem:
    return build_T2_regular(g) if q == 0 else build_V2_irregular(g, q)


def theorem_types(s: int, q: int) -> tuple[TypeSignature, TypeSignature]:
    return (TypeSignature.uniform(0, 2, 2 * s + 2), TypeSignature.uniform(q, 2, 2 * s - 2 * q + 2))


# --------------------------------------------------------------------------
# when do all spherical entries have order 2?


@dataclass(frozen=True)
class LinearConstraintSystem:
    """Conditions sum_{p in row} c(p, j) = 0, imposed for every h-index j.

    ``entry_rows[k]`` is the set of pairs (packed over the pair index) whose
    tensor bits make up the square of spherical entry k.
    """

    s: int
    which: str
    q: int
    entry_rows: tuple[int, ...]

    @property
    def npairs(self) -> int:
        return comb(2 * self.s, 2)

    @property
    def rows(self) -> list[int]:
        return echelon(self.entry_rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def free_dim(self) -> int:
        """Dimension of the admissible space for one c-vector."""
        return self.npairs - self.rank

    @property
    def solution_count(self) -> int:
        return 1 << (self.s * self.free_dim)

    @property
    def independent_solution_count(self) -> int:
        return count_independent_tuples(self.free_dim, self.s)

    def basis(self) -> list[int]:
        return nullspace(self.rows, self.npairs)

    def satisfied(self, t: StructureTensor) -> bool:
        return all(parity(row & c) == 0 for row in self.rows for c in t.cvectors())

    def equations(self) -> list[str]:
        pairs = pair_list(self.s)
        out = []
        for row in self.rows:
            terms = [f"c({i + 1},{k + 1},j)" for p, (i, k) in enumerate(pairs) if (row >> p) & 1]
            out.append(" + ".join(terms) + " = 0")
        return out

    def merge(self, other: "LinearConstraintSystem") -> "LinearConstraintSystem":
        if other.s != self.s:
            raise ValueError("cannot merge systems for different s")
        return LinearConstraintSystem(self.s, f"{self.which}+{other.which}", max(self.q, other.q),
                                      self.entry_rows + other.entry_rows)


def order2_constraints(s: int, which: str, q: int = 0) -> LinearConstraintSystem:
    """Derive the squares of the spherical entries as linear forms in the tensor bits.

    The h-part of any evaluated word is linear in the tensor, so the
    coefficient of c(p, .) is read off by evaluating in the group whose only
    nonzero bit is c(p, 1).
    """
    _, words = construction_words(which, s, q)
    rows = [0] * len(words)
    for p in range(comb(2 * s, 2)):
        g = make_group(StructureTensor(s, 1 << (p * s)))
        for k, w in enumerate(words):
            if (g.square_code(g.word(w).code) >> g.r) & 1:
                rows[k] |= 1 << p
    return LinearConstraintSystem(s, which, q, tuple(rows))


def pair_constraints(s: int, q: int) -> LinearConstraintSystem:
    """Order-2 conditions of T1 together with the second system, when it is defined."""
    sys = order2_constraints(s, "T1")
    try:
        sys = sys.merge(order2_constraints(s, second_name(q), q))
    except ConstructionUndefined:
        pass
    return sys


def sample_constrained_tensors(system: LinearConstraintSystem, n: int, rng: np.random.Generator,
                               max_tries: int | None = None) -> list[StructureTensor]:
    """Draw tensors uniformly from the solution space, keeping independent ones."""
    basis = system.basis()
    s = system.s
    if len(basis) < s:
        return []
    out = []
    tries = 0
    max_tries = max_tries if max_tries is not None else 100 * n + 100
    while len(out) < n and tries < max_tries:
        tries += 1
        coeffs = rng.integers(0, 2, size=(s, len(basis)))
        cvecs = []
        for row in coeffs:
            v = 0
            for bit, b in zip(row, basis):
                if bit:
                    v ^= b
            cvecs.append(v)
        if rank_rows(cvecs) == s:
            out.append(StructureTensor.from_cvectors(s, cvecs))
    return out


def sample_tensors(s: int, n: int, rng: np.random.Generator, independent: bool = True) -> list[StructureTensor]:
    nbits = s * comb(2 * s, 2)
    out = []
    while len(out) < n:
        bits = 0
        for k, b in enumerate(rng.integers(0, 2, size=nbits)):
            if b:
                bits |= 1 << k
        t = StructureTensor(s, bits)
        if not independent or rank_rows(t.cvectors()) == s:
            out.append(t)
    return out


# --------------------------------------------------------------------------
# reports


@dataclass
class SystemCheck:
    name: str
    type: str | None
    order_2_ok: tuple[bool, ...]
    generation_ok: bool
    relation_ok: bool


@dataclass
class ConstructionReport:
    s: int
    q: int
    tensor: str
    first: SystemCheck
    second: SystemCheck | None
    disjointness_ok: bool = False
    criterion: bool | None = None
    undefined: str | None = None
    expected_types: tuple[str, str] = field(default=("", ""))

    @property
    def order_2_ok(self) -> bool:
        return self.second is not None and all(self.first.order_2_ok) and all(self.second.order_2_ok)

    @property
    def generation_ok(self) -> bool:
        return self.second is not None and self.first.generation_ok and self.second.generation_ok

    @property
    def relation_ok(self) -> bool:
        return self.second is not None and self.first.relation_ok and self.second.relation_ok

    @property
    def all_ok(self) -> bool:
        return self.order_2_ok and self.generation_ok and self.relation_ok and self.disjointness_ok

    @property
    def actual_types(self) -> tuple[str | None, str | None]:
        return (self.first.type, self.second.type if self.second else None)

    @property
    def types_match(self) -> bool:
        return self.actual_types == tuple(self.expected_types)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["flags"] = {
            "order_2_ok": self.order_2_ok,
            "generation_ok": self.generation_ok,
            "relation_ok": self.relation_ok,
            "disjointness_ok": self.disjointness_ok,
            "all_ok": self.all_ok,
        }
        d["actual_types"] = list(self.actual_types)
        d["expected_types"] = list(self.expected_types)
        return d


def check_system(g: Fc2Group, name: str, sys: GeneratorSystem) -> SystemCheck:
    orders = [g.element_order(c) for c in sys.spherical]
    typ = None
    if all(o >= 2 for o in orders):
        typ = str(TypeSignature(sys.genus_prime, tuple(orders)))
    return SystemCheck(
        name=name,
        type=typ,
        order_2_ok=tuple(o == 2 for o in orders),
        generation_ok=g.generates(sys.all_elements),
        relation_ok=long_relation(g, sys).code == 0,
    )


def construction_validity(g: Fc2Group, q: int, direct: bool = False) -> ConstructionReport:
    """Build T1 and the second system for ``q``; every failure is recorded, not raised.

    With ``direct`` the stabilizer sets are always intersected, even when the
    quotient-image criterion already settles disjointness.
    """
    s = g.s
    t1 = build_T1(g)
    expected = tuple(str(t) for t in theorem_types(s, q)) if s >= 1 and q >= 0 else ("", "")
    report = ConstructionReport(s, q, g.tensor.to_hex(), check_system(g, "T1", t1), None,
                                expected_types=expected)
    try:
        second = build_second(g, q)
    except ConstructionUndefined as exc:
        report.undefined = str(exc)
        return report
    report.second = check_system(g, second_name(q), second)
    try:
        report.criterion = lemma_criterion(g, t1, second)
    except CriterionInapplicable:
        report.criterion = None
    if report.criterion and not direct:
        report.disjointness_ok = True
    else:
        report.disjointness_ok = are_disjoint(g, t1, second)
    return report


def smallest_criterion_s(q: int, s_max: int = 6, samples: int = 5, seed: int = 0) -> int | None:
    """Smallest s at which the quotient-image criterion certifies T1 against the second system.

    Checked on ``samples`` tensors from the order-2 solution space at each s;
    None if no s up to ``s_max`` works.
    """
    rng = np.random.default_rng(seed)
    for s in range(max(3, q + 2), s_max + 1):
        tensors = sample_constrained_tensors(pair_constraints(s, q), samples, rng)
        if tensors and all(construction_validity(make_group(t), q).criterion for t in tensors):
            return s
    return None
