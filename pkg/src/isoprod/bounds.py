"""Leading-term bound arithmetic for the census and the asymptotic count.

The error terms that make these bounds true only for large parameters are
never given numeric values; every record says so in ``error_terms``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

from .invariants import closed_form_chi

UNMODELED = "leading term only; error terms unmodeled"

# lower and upper leading constants of the exponent of the number of 2-groups
HIGMAN_LOW = Fraction(2, 27)
HIGMAN_HIGH = Fraction(2, 15)
B_LOW = Fraction(2)
B_HIGH = Fraction(18, 5)


@dataclass(frozen=True)
class ExponentInterval:
    k: int
    lower: Fraction
    upper: Fraction
    error_terms: str = UNMODELED


def higman_bounds(k: int) -> ExponentInterval:
    """log2 of the number of groups of order 2^k lies near [2k^3/27, 2k^3/15]."""
    if k < 1:
        raise ValueError("k must be positive")
    return ExponentInterval(k, HIGMAN_LOW * k**3, HIGMAN_HIGH * k**3)


@dataclass(frozen=True)
class ConstantCheck:
    name: str
    value: str
    bound: int
    holds: bool
    agrees_to_12_digits: bool


def constant_checks() -> list[ConstantCheck]:
    """27 (ln 2)^3 < 9 and 27 (ln 2)^2 < 13, evaluated at 60 digits and in floats."""
    out = []
    for power, bound in ((3, 9), (2, 13)):
        with localcontext() as ctx:
            ctx.prec = 60
            exact = 27 * Decimal(2).ln() ** power
        approx = 27 * math.log(2) ** power
        out.append(ConstantCheck(
            name=f"27*ln(2)^{power} < {bound}",
            value=f"{exact:.12g}",
            bound=bound,
            holds=exact < bound,
            agrees_to_12_digits=abs(Decimal(approx) - exact) < Decimal("1e-12"),
        ))
    return out


@dataclass(frozen=True)
class BoundsReport:
    s: int
    x: int
    y: int
    log2_h_lower: int
    log2_h_upper: Fraction
    eta: float
    s_recovered: float
    thm1_rhs_log2_h: float
    thm1_rhs_ln: float
    catanese_log: float
    manetti_log: float
    error_terms: str = UNMODELED

    def as_dict(self) -> dict:
        d = asdict(self)
        d["log2_h_upper"] = float(self.log2_h_upper)
        hig = higman_bounds(3 * self.s)
        d["higman_lower_exponent"] = float(hig.lower)
        d["higman_upper_exponent"] = float(hig.upper)
        d["B_range"] = [float(B_LOW), float(B_HIGH)]
        return d


def eta(s: int) -> float:
    """Relative correction in s = (1 + eta) log2(x_s) / 3."""
    return 3 * s / math.log2(closed_form_chi(s, 0)) - 1


def theorem_bounds(s: int) -> BoundsReport:
    if s < 2:
        raise ValueError("x_s = 0 for s < 2; bounds undefined")
    x = closed_form_chi(s, 0)
    y = 8 * x
    lx, ly = math.log(x), math.log(y)
    e = eta(s)
    return BoundsReport(
        s=s,
        x=x,
        y=y,
        log2_h_lower=int(B_LOW * s**3),
        log2_h_upper=B_HIGH * s**3,
        eta=e,
        s_recovered=(1 + e) * math.log2(x) / 3,
        thm1_rhs_log2_h=2 / 9 * lx**3,
        thm1_rhs_ln=2 / 13 * ly**2 * ly,
        catanese_log=77 * y**2 * ly,
        manetti_log=ly**2 / 5,
    )


@dataclass(frozen=True)
class ReferenceBounds:
    """Exponents of y (i.e. log_y of each bound) for the three growth rates."""

    y: float
    manetti_exponent: float
    this_exponent: float
    catanese_exponent: float
    ordered: bool


def reference_bounds(y: float) -> ReferenceBounds:
    if y < 2:
        raise ValueError("y must be at least 2")
    ly = math.log(y)
    m, t, c = ly / 5, 2 / 13 * ly**2, 77 * y**2
    return ReferenceBounds(y, m, t, c, m < t < c)


def ordering_threshold(limit: int = 10**4) -> int:
    """Smallest integer y0 >= 2 such that the three exponents are ordered for every integer in [y0, limit]."""
    y0 = limit + 1
    for y in range(limit, 1, -1):
        if not reference_bounds(y).ordered:
            break
        y0 = y
    return y0


BOUND_CSV_COLUMNS = ("s", "x", "y", "log2_h_lower", "thm1_rhs_ln", "catanese_log", "manetti_log")


def bound_table(s_max: int, s_min: int = 2) -> list[BoundsReport]:
    return [theorem_bounds(s) for s in range(max(2, s_min), s_max + 1)]
