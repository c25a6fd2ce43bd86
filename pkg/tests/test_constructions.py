
import numpy as np
import pytest

from isoprod.census import all_tensors
from isoprod.constructions import (
    ConstructionUndefined,
    build_T1,
    build_T2_regular,
    build_V2_irregular,
    construction_validity,
    construction_words,
    order2_constraints,
    pair_constraints,
    sample_constrained_tensors,
    sample_tensors,
    t2_words,
    v2_words,
)
from isoprod.gf2 import rank_rows
from isoprod.group import StructureTensor, make_group
from isoprod.ramification import long_relation


def all_order2(g, sys):
    return all(g.element_order(c) <= 2 for c in sys.spherical)


def test_t1_words_and_phi_images_s2():
    g = make_group(StructureTensor.from_cvectors(2, [0b000010, 0b000100]))
    sys = build_T1(g)
    assert len(sys.spherical) == 6 and sys.genus_prime == 0
    phis = [g.phi_image(c).bits for c in sys.spherical]
    assert phis == [0b0001, 0b0010, 0b0011, 0b0100, 0b1000, 0b1100]


@pytest.mark.parametrize("s", [1, 2])
def test_t1_relation_and_generation_exhaustive(s):
    for t in all_tensors(s):
        g = make_group(t)
        sys = build_T1(g)
        assert long_relation(g, sys).code == 0
        if g.independent:
            assert g.generates(sys.all_elements)


def test_t1_relation_sampled_higher_s():
    rng = np.random.default_rng(1)
    for s in (3, 4, 5):
        for t in sample_tensors(s, 5, rng, independent=False):
            g = make_group(t)
            assert long_relation(g, build_T1(g)).code == 0


def test_t2_words_s4():
    _, words = t2_words(4)
    assert words == ["g1 g2", "g2 g3", "g3 g4", "g4 g2 g3", "g3^-1 g2^-1 g1^-1",
                     "g5 g6", "g6 g7", "g7 g8", "g8 g6 g7", "g7^-1 g6^-1 g5^-1"]


def test_construction_ranges():
    for s in (1, 2):
        with pytest.raises(ConstructionUndefined):
            t2_words(s)
    with pytest.raises(ConstructionUndefined):
        v2_words(4, 3)
    with pytest.raises(ConstructionUndefined):
        v2_words(4, 0)
    with pytest.raises(ConstructionUndefined):
        build_V2_irregular(make_group(StructureTensor(2, 1)), 1)


def test_t2_phi_images_span_quotient_s4():
    g = make_group(sample_tensors(4, 1, np.random.default_rng(3))[0])
    assert rank_rows(c.a.bits for c in build_T2_regular(g).spherical) == 8


def test_v2_shape():
    for s, q in [(3, 1), (4, 1), (4, 2), (5, 3)]:
        g = make_group(sample_tensors(s, 1, np.random.default_rng(s + q))[0])
        sys = build_V2_irregular(g, q)
        assert sys.genus_prime == q
        assert len(sys.spherical) == 2 * s - 2 * q + 2
        handles = [(x.a.bits.bit_length(), y.a.bits.bit_length()) for x, y in zip(sys.handles[::2], sys.handles[1::2])]
        assert handles == [(s - i + 1, 2 * s - i + 1) for i in range(1, q + 1)]


def test_product_one_holds_for_every_tensor():
    rng = np.random.default_rng(4)
    for s in (3, 4, 5):
        for t in sample_tensors(s, 4, rng, independent=False):
            g = make_group(t)
            assert long_relation(g, build_T2_regular(g)).code == 0
            for q in range(1, s - 1):
                assert long_relation(g, build_V2_irregular(g, q)).code == 0


def test_order2_constraint_examples():
    sys = order2_constraints(2, "T1")
    assert sys.equations() == ["c(1,2,j) = 0", "c(3,4,j) = 0"]
    # a lone g_i contributes nothing, g1 g2 forces c(1,2,.) = 0
    rows = order2_constraints(4, "T2").entry_rows
    assert rows[0] == 1  # pair (1,2) is pair number 0
    _, words = construction_words("T2", 4)
    assert words[0] == "g1 g2"


def test_order2_constraints_sound_and_complete_s2():
    sys = order2_constraints(2, "T1")
    for t in all_tensors(2):
        g = make_group(t)
        assert sys.satisfied(t) == all_order2(g, build_T1(g))


@pytest.mark.parametrize("s,q", [(3, 0), (3, 1), (4, 0), (4, 1), (4, 2)])
def test_order2_constraints_sampled(s, q):
    rng = np.random.default_rng(10 * s + q)
    sys = pair_constraints(s, q)
    sample = sample_tensors(s, 20, rng) + sample_constrained_tensors(sys, 20, rng)
    # also near-solutions: flip one bit of a solution
    for t in sample_constrained_tensors(sys, 10, rng):
        sample.append(StructureTensor(s, t.bits ^ (1 << int(rng.integers(0, t.nbits)))))
    for t in sample:
        g = make_group(t)
        second = build_T2_regular(g) if q == 0 else build_V2_irregular(g, q)
        assert sys.satisfied(t) == (all_order2(g, build_T1(g)) and all_order2(g, second))


def test_solution_count_formula():
    sys = order2_constraints(2, "T1")
    assert sys.solution_count == 2 ** (2 * sys.free_dim)
    assert sum(sys.satisfied(t) for t in all_tensors(2)) == sys.solution_count


def test_validity_s4_all_true():
    rng = np.random.default_rng(7)
    for t in sample_constrained_tensors(pair_constraints(4, 0), 5, rng):
        rep = construction_validity(make_group(t), 0)
        assert rep.all_ok and rep.types_match
        assert rep.actual_types == ("(0 | 2^10)", "(0 | 2^10)")
        assert rep.to_dict()["flags"]["all_ok"]


def test_validity_s1_undefined():
    rep = construction_validity(make_group(StructureTensor(1, 1)), 1)
    assert rep.undefined and rep.second is None
    assert rep.first.relation_ok and rep.first.generation_ok and not rep.all_ok


def test_unconstrained_s4_rarely_order2():
    rng = np.random.default_rng(11)
    reps = [construction_validity(make_group(t), 0) for t in sample_tensors(4, 10, rng)]
    assert sum(r.order_2_ok for r in reps) == 0


def test_criterion_holds_when_three_flags_true():
    rng = np.random.default_rng(12)
    for s, q in [(4, 0), (4, 1), (4, 2), (5, 0), (5, 3)]:
        for t in sample_constrained_tensors(pair_constraints(s, q), 3, rng):
            g = make_group(t)
            rep = construction_validity(g, q, direct=True)
            if rep.order_2_ok and rep.generation_ok and rep.relation_ok:
                assert rep.criterion
                assert rep.disjointness_ok


def test_smallest_s_for_criterion():
    from isoprod.constructions import smallest_criterion_s
    assert smallest_criterion_s(0) == 4
    assert smallest_criterion_s(1) == 3
    assert smallest_criterion_s(2) == 4
