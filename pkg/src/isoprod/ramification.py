"""Systems of generators, stabilizer sets and ramification structures."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .group import Fc2Group, GroupElement


class RamificationError(Exception):
    """Base class for failed ramification checks; ``details`` carries diagnostics."""

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details


class GenerationFailure(RamificationError):
    pass


class RelationFailure(RamificationError):
    pass


class OrderFailure(RamificationError):
    pass


class NotAdmissible(RamificationError):
    pass


class NotDisjoint(RamificationError):
    pass


class CriterionInapplicable(RamificationError):
    pass


@dataclass(frozen=True)
class TypeSignature:
    genus_prime: int
    branch_orders: tuple[int, ...] = ()

    def __post_init__(self):
        if self.genus_prime < 0:
            raise ValueError("genus_prime must be non-negative")
        if any(m < 2 for m in self.branch_orders):
            raise ValueError("branch orders must be at least 2")
        object.__setattr__(self, "branch_orders", tuple(sorted(self.branch_orders)))

    @classmethod
    def uniform(cls, genus_prime: int, m: int, count: int) -> "TypeSignature":
        return cls(genus_prime, (m,) * count)

    def __str__(self) -> str:
        counts = sorted(Counter(self.branch_orders).items())
        body = ",".join(f"{m}^{k}" if k > 1 else str(m) for m, k in counts)
        return f"({self.genus_prime} | {body})" if body else f"({self.genus_prime} | )"


@dataclass(frozen=True)
class GeneratorSystem:
    genus_prime: int
    handles: tuple[GroupElement, ...]
    spherical: tuple[GroupElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "handles", tuple(self.handles))
        object.__setattr__(self, "spherical", tuple(self.spherical))
        if len(self.handles) != 2 * self.genus_prime:
            raise ValueError(f"expected {2 * self.genus_prime} handle elements, got {len(self.handles)}")

    @classmethod
    def spherical_system(cls, elements: Sequence[GroupElement]) -> "GeneratorSystem":
        return cls(0, (), tuple(elements))

    @property
    def all_elements(self) -> tuple[GroupElement, ...]:
        return self.handles + self.spherical

    def to_json(self) -> str:
        return json.dumps({
            "genus_prime": self.genus_prime,
            "handles": [x.to_hex() for x in self.handles],
            "spherical": [x.to_hex() for x in self.spherical],
        })

    @classmethod
    def from_json(cls, s: int, text: str) -> "GeneratorSystem":
        d = json.loads(text)
        return cls(d["genus_prime"],
                   tuple(GroupElement.from_hex(s, h) for h in d["handles"]),
                   tuple(GroupElement.from_hex(s, h) for h in d["spherical"]))


@dataclass(frozen=True)
class RamificationStructure:
    first: GeneratorSystem
    second: GeneratorSystem
    types: tuple[TypeSignature, TypeSignature]
    via_criterion: bool


def long_relation(g: Fc2Group, sys: GeneratorSystem) -> GroupElement:
    """c_1 ... c_r * prod [a_i, b_i]."""
    x = 0
    for c in sys.spherical:
        x = g.mul_code(x, c.code)
    for i in range(sys.genus_prime):
        x = g.mul_code(x, g.comm_code(sys.handles[2 * i].code, sys.handles[2 * i + 1].code))
    return g.wrap(x)


def validate_system(g: Fc2Group, sys: GeneratorSystem) -> TypeSignature:
    for x in sys.all_elements:
        g._check(x)
    if not g.generates(sys.all_elements):
        size = g.subgroup_generated(sys.all_elements)
        raise GenerationFailure(f"system generates a subgroup of order {size}, not {g.order}",
                                subgroup_order=size, group_order=g.order)
    rel = long_relation(g, sys)
    if rel.code != 0:
        raise RelationFailure(f"long relation evaluates to {rel}", value=rel)
    orders = [g.element_order(c) for c in sys.spherical]
    if 1 in orders:
        raise OrderFailure("spherical entry equal to the identity",
                           positions=[k for k, o in enumerate(orders) if o == 1])
    return TypeSignature(sys.genus_prime, tuple(orders))


def sigma_mask(g: Fc2Group, sys: GeneratorSystem) -> np.ndarray:
    codes = np.array([c.code for c in sys.spherical], dtype=np.int64)
    return kernels.sigma(codes, g.ktab, g.s)


def sigma_set(g: Fc2Group, sys: GeneratorSystem) -> frozenset[GroupElement]:
    mask = sigma_mask(g, sys)
    return frozenset(g.wrap(c) for c in np.flatnonzero(mask))


def are_disjoint(g: Fc2Group, s1: GeneratorSystem, s2: GeneratorSystem) -> bool:
    both = sigma_mask(g, s1) & sigma_mask(g, s2)
    return int(np.count_nonzero(both)) == 1


def criterion_sets(g: Fc2Group, sys: GeneratorSystem) -> tuple[set[int], set[int]]:
    """(B, B'): packed quotient images of entries outside the h-span, and entries inside it."""
    B, Bp = set(), set()
    for x in sys.spherical:
        if g.element_order(x) > 2:
            raise CriterionInapplicable(f"entry {x} has order {g.element_order(x)}", element=x)
        if x.a.bits:
            B.add(g.phi_image(x).bits)
        else:
            Bp.add(x.code)
    return B, Bp


def lemma_criterion(g: Fc2Group, s1: GeneratorSystem, s2: GeneratorSystem) -> bool:
    B1, Bp1 = criterion_sets(g, s1)
    B2, Bp2 = criterion_sets(g, s2)
    return not (B1 & B2) and not (Bp1 & Bp2)


def admissibility_value(order: int, t: TypeSignature) -> Fraction:
    total = 2 * t.genus_prime - 2 + sum((1 - Fraction(1, m) for m in t.branch_orders), Fraction(0))
    return order * total / 2 + 1


def is_admissible(order: int, t: TypeSignature) -> bool:
    v = admissibility_value(order, t)
    return v.denominator == 1 and v >= 2


def make_structure(g: Fc2Group, s1: GeneratorSystem, s2: GeneratorSystem) -> RamificationStructure:
    t1 = validate_system(g, s1)
    t2 = validate_system(g, s2)
    for k, t in enumerate((t1, t2), 1):
        if not is_admissible(g.order, t):
            raise NotAdmissible(f"type {t} of system {k} is not admissible for order {g.order}",
                                which=k, value=admissibility_value(g.order, t))
    try:
        fast = lemma_criterion(g, s1, s2)
    except CriterionInapplicable:
        fast = False
    if not fast and not are_disjoint(g, s1, s2):
        shared = sigma_mask(g, s1) & sigma_mask(g, s2)
        shared[0] = False
        witness = g.wrap(int(np.flatnonzero(shared)[0]))
        raise NotDisjoint(f"stabilizer sets share {witness}", witness=witness)
    return RamificationStructure(s1, s2, (t1, t2), via_criterion=fast)
