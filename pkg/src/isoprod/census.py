"""Enumeration of the tensor family, isomorphism classes and component counts.

Isomorphism classes are found two ways. The fast path works on the span of
the quadratic maps a -> a^2 (one per h-coordinate) and takes orbits under
the general linear group acting on the g-exponents; the oracle is
backtracking over generator images in :mod:`isoprod.group`. The quadratic
maps are used rather than the commutator forms alone because over GF(2)
the squares are not determined by the commutators.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import comb
from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels
from .constructions import (
    ConstructionUndefined,
    construction_validity,
    order2_constraints,
    pair_constraints,
    sample_constrained_tensors,
    sample_tensors,
    second_name,
)
from .gf2 import count_independent_tuples, echelon
from .group import StructureTensor, find_isomorphism, make_group, pair_list

log = logging.getLogger(__name__)

EXHAUSTIVE_MAX_S = 2


def count_tensor_space(s: int) -> tuple[int, int]:
    """(number of tensors, number with independent c-vectors by the product formula)."""
    if s < 1:
        raise ValueError("s must be positive")
    npairs = comb(2 * s, 2)
    return 1 << (s * npairs), count_independent_tuples(npairs, s)


def all_tensors(s: int) -> Iterable[StructureTensor]:
    n = s * comb(2 * s, 2)
    for bits in range(1 << n):
        yield StructureTensor(s, bits)


def span_key(t: StructureTensor) -> tuple[int, ...]:
    return tuple(echelon(t.cvectors()))


# --------------------------------------------------------------------------
# orbits of GL(2s, 2) on spans of quadratic maps


def _transvection_images(s: int, keep_diagonal: bool) -> list[list[int]]:
    """Images of the monomial basis under the substitutions v_a -> v_a + v_b.

    Basis: monomials v_i v_k (i < k) at their pair index, then v_i (= v_i^2)
    at npairs + i. With ``keep_diagonal`` False the diagonal part is
    discarded, which is the action on the commutator forms only.
    """
    r = 2 * s
    pairs = pair_list(s)
    P = len(pairs)
    index = {p: k for k, p in enumerate(pairs)}
    gens = []
    for a in range(r):
        for b in range(r):
            if a == b:
                continue
            images = []
            for m in range(P):
                i, k = pairs[m]
                img = 1 << m
                if a in (i, k):
                    other = k if i == a else i
                    if other == b:
                        if keep_diagonal:
                            img ^= 1 << (P + b)
                    else:
                        img ^= 1 << index[tuple(sorted((b, other)))]
                images.append(img)
            if keep_diagonal:
                for i in range(r):
                    img = 1 << (P + i)
                    if i == a:
                        img ^= 1 << (P + b)
                    images.append(img)
            gens.append(images)
    return gens


def _as_table(images: list[int]) -> list[int]:
    table = [0] * (1 << len(images))
    for v in range(1, len(table)):
        low = v & -v
        table[v] = table[v ^ low] ^ images[low.bit_length() - 1]
    return table


def orbit_labels(s: int, spans: Iterable[tuple[int, ...]], keep_diagonal: bool = True) -> dict[tuple, int]:
    """Label each span by its orbit; labels are numbered in order of the smallest span."""
    gens = _transvection_images(s, keep_diagonal)
    dim = len(gens[0])
    if dim > 16:
        raise ValueError(f"orbit enumeration is only supported for s <= {EXHAUSTIVE_MAX_S}")
    tables = [_as_table(g) for g in gens]
    targets = set(spans)
    labels: dict[tuple, int] = {}
    nxt = 0
    for start in sorted(targets):
        if start in labels:
            continue
        orbit = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for tab in tables:
                y = tuple(echelon([tab[v] for v in x]))
                if y not in orbit:
                    orbit.add(y)
                    stack.append(y)
        for y in orbit:
            if y in targets:
                labels[y] = nxt
        nxt += 1
    return labels


# --------------------------------------------------------------------------
# isomorphism oracle and invariants


def _iso_pair(args: tuple[int, int, int]) -> bool:
    s, b1, b2 = args
    return find_isomorphism(make_group(StructureTensor(s, b1)), make_group(StructureTensor(s, b2))) is not None


def parallel_map(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def class_size_histogram(t: StructureTensor) -> tuple:
    """Sorted (order, conjugacy class size) pairs over the g-exponent representatives."""
    g = make_group(t)
    reps = np.arange(1, 1 << g.r, dtype=np.int64)
    allc = g.all_codes()
    inv = kernels.inverse(allc, g.ktab, g.s)
    hist = defaultdict(int)
    for a in reps:
        conj = kernels.multiply(kernels.multiply(allc, np.full(g.order, a), g.ktab, g.s), inv, g.ktab, g.s)
        hist[(g.order_code(int(a)), int(np.unique(conj).size))] += 1
    return tuple(sorted(hist.items()))


def iso_invariant(t: StructureTensor) -> tuple:
    g = make_group(t)
    return (g.order_statistics, g.derived_order, class_size_histogram(t))


# --------------------------------------------------------------------------
# reports


@dataclass
class CensusReport:
    s: int
    mode: str
    seed: int | None = None
    sample_count: int | None = None
    sample_space: str | None = None
    total_tensors: int = 0
    independent_tensors: int = 0
    independent_formula: int = 0
    distinct_spans: int | None = None
    constraint_satisfying_tensors: dict = field(default_factory=dict)
    constraint_solution_formula: dict = field(default_factory=dict)
    iso_classes: int = 0
    iso_class_representatives: list = field(default_factory=list)
    iso_class_sizes: list = field(default_factory=list)
    commutator_form_orbits: int | None = None
    oracle_agrees: bool | None = None
    oracle_discrepancies: list = field(default_factory=list)
    component_lower_bound: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def _constraint_names(s: int, qs: Sequence[int]) -> list[tuple[str, str, int]]:
    out = [("T1", "T1", 0)]
    for q in qs:
        name = second_name(q)
        try:
            order2_constraints(s, name, q)
        except ConstructionUndefined:
            continue
        label = "T1+T2" if q == 0 else f"T1+V2(q={q})"
        out.append((label, name, q))
    return out


def _default_qs(s: int) -> list[int]:
    return list(range(0, max(0, s - 2) + 1))


def classify_exhaustive(s: int, jobs: int = 1, qs: Sequence[int] | None = None) -> tuple[CensusReport, dict]:
    """Full census for s <= 2. Returns the report and {class label: member tensor bits}."""
    if s > EXHAUSTIVE_MAX_S:
        raise ValueError(f"exhaustive mode needs s <= {EXHAUSTIVE_MAX_S}")
    qs = _default_qs(s) if qs is None else list(qs)
    total, formula = count_tensor_space(s)
    rep = CensusReport(s=s, mode="exhaustive", total_tensors=total, independent_formula=formula)

    systems = [(label, pair_constraints(s, q) if label != "T1" else order2_constraints(s, "T1"))
               for label, _, q in _constraint_names(s, qs)]
    sat = {label: 0 for label, _ in systems}
    by_span: dict[tuple, list[int]] = defaultdict(list)
    for t in all_tensors(s):
        key = span_key(t)
        if len(key) != s:
            continue
        rep.independent_tensors += 1
        by_span[key].append(t.bits)
        for label, sys in systems:
            if sys.satisfied(t):
                sat[label] += 1
    rep.constraint_satisfying_tensors = sat
    rep.constraint_solution_formula = {label: sys.independent_solution_count for label, sys in systems}
    rep.distinct_spans = len(by_span)

    labels = orbit_labels(s, by_span.keys())
    rep.commutator_form_orbits = len(set(orbit_labels(s, by_span.keys(), keep_diagonal=False).values()))

    members: dict[int, list[int]] = defaultdict(list)
    for key, bits in by_span.items():
        members[labels[key]].extend(bits)
    for lab in members:
        members[lab].sort()
    reps = {lab: m[0] for lab, m in members.items()}

    # oracle: representatives pairwise distinct, every span isomorphic to its representative
    ordered = sorted(reps)
    pairs = [(s, reps[a], reps[b]) for i, a in enumerate(ordered) for b in ordered[i + 1:]]
    cross = parallel_map(_iso_pair, pairs, jobs)
    within_items = [(s, by_span[key][0], reps[labels[key]]) for key in sorted(by_span)]
    within = parallel_map(_iso_pair, within_items, jobs)
    disc = [f"representatives {hex(a)} and {hex(b)} are isomorphic" for (_, a, b), iso in zip(pairs, cross) if iso]
    disc += [f"{hex(a)} is not isomorphic to its class representative {hex(b)}"
             for (_, a, b), iso in zip(within_items, within) if not iso]
    rep.oracle_agrees = not disc
    rep.oracle_discrepancies = disc
    if disc:
        members = _reclassify_by_oracle(s, members, jobs)
        log.warning("orbit classes disagree with the isomorphism oracle; oracle classes used")

    _fill_classes(rep, s, members)
    for q in qs:
        rep.component_lower_bound[str(q)] = component_lower_bound(s, q, members, jobs)
    return rep, members


def _reclassify_by_oracle(s: int, members: dict[int, list[int]], jobs: int) -> dict[int, list[int]]:
    pool = sorted(b for m in members.values() for b in m)
    classes: list[list[int]] = []
    for b in pool:
        for cl in classes:
            if _iso_pair((s, b, cl[0])):
                cl.append(b)
                break
        else:
            classes.append([b])
    return {k: cl for k, cl in enumerate(classes)}


def _fill_classes(rep: CensusReport, s: int, members: dict[int, list[int]]) -> None:
    order = sorted(members, key=lambda lab: members[lab][0])
    rep.iso_classes = len(order)
    rep.iso_class_representatives = [StructureTensor(s, members[lab][0]).to_hex() for lab in order]
    rep.iso_class_sizes = [len(members[lab]) for lab in order]


def classify_sample(tensors: Sequence[StructureTensor], jobs: int = 1) -> dict[int, list[int]]:
    """Group sampled tensors into isomorphism classes: invariants first, then backtracking."""
    if not tensors:
        return {}
    s = tensors[0].s
    uniq = sorted({t.bits for t in tensors})
    invs = parallel_map(iso_invariant, [StructureTensor(s, b) for b in uniq], jobs)
    buckets: dict[tuple, list[int]] = defaultdict(list)
    for b, inv in zip(uniq, invs):
        buckets[inv].append(b)
    classes: list[list[int]] = []
    for inv in sorted(buckets, key=lambda k: buckets[k][0]):
        local: list[list[int]] = []
        for b in buckets[inv]:
            for cl in local:
                if _iso_pair((s, b, cl[0])):
                    cl.append(b)
                    break
            else:
                local.append([b])
        classes.extend(local)
    classes.sort(key=lambda cl: cl[0])
    return {k: cl for k, cl in enumerate(classes)}


def _valid_for(args: tuple[int, int, int]) -> bool:
    s, bits, q = args
    return construction_validity(make_group(StructureTensor(s, bits)), q).all_ok


def component_lower_bound(s: int, q: int, members: dict[int, list[int]], jobs: int = 1) -> int:
    """Number of classes with at least one member carrying the full construction for ``q``."""
    try:
        if q == 0:
            from .constructions import t2_words
            t2_words(s)
        else:
            from .constructions import v2_words
            v2_words(s, q)
    except ConstructionUndefined:
        return 0
    count = 0
    for lab in sorted(members):
        for b in members[lab]:
            if _valid_for((s, b, q)):
                count += 1
                break
    return count


def classify_sampled(s: int, n: int, seed: int, q: int | None = None, jobs: int = 1) -> tuple[CensusReport, dict]:
    """Census over ``n`` seeded samples.

    Without ``q`` tensors are uniform among independent ones; with ``q``
    they are uniform in the order-2 solution space of T1 and the second
    system, so the component count is informative.
    """
    rng = np.random.default_rng(seed)
    total, formula = count_tensor_space(s)
    rep = CensusReport(s=s, mode="sample", seed=seed, sample_count=n,
                       total_tensors=total, independent_formula=formula)
    if q is None:
        tensors = sample_tensors(s, n, rng)
        rep.sample_space = "independent tensors"
        qs = _default_qs(s)
    else:
        system = pair_constraints(s, q)
        tensors = sample_constrained_tensors(system, n, rng)
        rep.sample_space = f"order-2 solutions of {system.which}"
        qs = [q]
    rep.independent_tensors = len(tensors)
    sat = {}
    formula_counts = {}
    for label, name, qq in _constraint_names(s, qs):
        sys = order2_constraints(s, "T1") if label == "T1" else pair_constraints(s, qq)
        sat[label] = sum(sys.satisfied(t) for t in tensors)
        formula_counts[label] = sys.independent_solution_count
    rep.constraint_satisfying_tensors = sat
    rep.constraint_solution_formula = formula_counts
    members = classify_sample(tensors, jobs)
    _fill_classes(rep, s, members)
    for qq in qs:
        rep.component_lower_bound[str(qq)] = component_lower_bound(s, qq, members, jobs)
    return rep, members


def check_report(rep: CensusReport) -> list[str]:
    """Violated report invariants, empty when the report is consistent."""
    bad = []
    if rep.independent_tensors > rep.total_tensors:
        bad.append("independent_tensors exceeds total_tensors")
    if rep.mode == "exhaustive" and rep.independent_tensors != rep.independent_formula:
        bad.append("exhaustive independent count differs from the product formula")
    for label, n in rep.constraint_satisfying_tensors.items():
        if n > rep.independent_tensors:
            bad.append(f"{label}: more satisfying tensors than independent ones")
        if rep.mode == "exhaustive" and n != rep.constraint_solution_formula.get(label):
            bad.append(f"{label}: exhaustive count differs from the solution-space formula")
    covered = sum(rep.iso_class_sizes)
    # samples may repeat, so only exhaustive runs must partition exactly
    if covered > rep.independent_tensors or (rep.mode == "exhaustive" and covered != rep.independent_tensors):
        bad.append("class sizes do not partition the tensors")
    for q, n in rep.component_lower_bound.items():
        if n > rep.iso_classes:
            bad.append(f"component bound for q={q} exceeds the class count")
    if rep.oracle_agrees is False:
        bad.append("orbit classes disagree with the isomorphism oracle")
    return bad
