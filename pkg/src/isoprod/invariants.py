"""Curve genera and surface invariants from a group order and two types.

Everything is exact: integers and :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction

from .ramification import NotAdmissible, TypeSignature, is_admissible


class InvariantViolation(ArithmeticError):
    """Two routes to the same invariant disagreed, or a value that must be integral is not."""


def orbifold_term(t: TypeSignature) -> Fraction:
    """2g' - 2 + sum (1 - 1/m_i)."""
    return 2 * t.genus_prime - 2 + sum((1 - Fraction(1, m) for m in t.branch_orders), Fraction(0))


def rh_genus(order: int, t: TypeSignature) -> Fraction:
    """Genus g with 2g - 2 = |G| (2g' - 2 + sum (1 - 1/m_i)).

    A non-integral result means no such action exists; callers test
    :func:`is_realizable` rather than catching anything.
    """
    if order < 1:
        raise ValueError("group order must be positive")
    return (order * orbifold_term(t) + 2) / 2


def is_realizable(genus: Fraction) -> bool:
    return genus.denominator == 1


def curve_euler(order: int, t: TypeSignature) -> int:
    g = rh_genus(order, t)
    if not is_realizable(g):
        raise InvariantViolation(f"non-integral genus {g} for order {order}, type {t}")
    return int(2 - 2 * g)


@dataclass(frozen=True)
class SurfaceInvariants:
    chi: int
    K2: int
    e: int
    q: int
    g1: int
    g2: int
    group_order: int

    def as_dict(self) -> dict:
        return asdict(self)


def surface_invariants(order: int, t1: TypeSignature, t2: TypeSignature) -> SurfaceInvariants:
    for k, t in enumerate((t1, t2), 1):
        if not is_admissible(order, t):
            raise NotAdmissible(f"type {t} is not admissible for order {order}", which=k)
    g1, g2 = int(rh_genus(order, t1)), int(rh_genus(order, t2))
    chi = Fraction((g1 - 1) * (g2 - 1), order)
    four_chi = order * orbifold_term(t1) * orbifold_term(t2)
    if chi.denominator != 1:
        raise InvariantViolation(f"chi = {chi} is not an integer")
    if four_chi != 4 * chi:
        raise InvariantViolation(f"4*chi from genera ({4 * chi}) differs from product formula ({four_chi})")
    chi = int(chi)
    return SurfaceInvariants(chi=chi, K2=8 * chi, e=4 * chi, q=t1.genus_prime + t2.genus_prime,
                             g1=g1, g2=g2, group_order=order)


def closed_form_chi(s: int, q: int) -> int:
    """2^(3s-2) (s-1) (s+q-1)."""
    if s < 2:
        raise ValueError(f"s={s} gives chi <= 0; surfaces of general type need s >= 2")
    if q < 0:
        raise ValueError("q must be non-negative")
    return (1 << (3 * s - 2)) * (s - 1) * (s + q - 1)


def theorem_invariants(s: int, q: int) -> SurfaceInvariants:
    """Invariants for order 2^(3s) and types ((0 | 2^(2s+2)), (q | 2^(2s-2q+2)))."""
    t1 = TypeSignature.uniform(0, 2, 2 * s + 2)
    t2 = TypeSignature.uniform(q, 2, 2 * s - 2 * q + 2)
    return surface_invariants(1 << (3 * s), t1, t2)


CSV_COLUMNS = ("s", "q", "order", "g1", "g2", "chi", "K2", "e", "irregularity")


def invariant_rows(grid) -> list[dict]:
    rows = []
    for s, q in grid:
        try:
            inv = theorem_invariants(s, q)
        except (NotAdmissible, ValueError):
            continue
        rows.append({"s": s, "q": q, "order": inv.group_order, "g1": inv.g1, "g2": inv.g2,
                     "chi": inv.chi, "K2": inv.K2, "e": inv.e, "irregularity": inv.q})
    return rows
