import json

import numpy as np
import pytest

from isoprod.census import (
    check_report,
    classify_exhaustive,
    classify_sample,
    classify_sampled,
    count_tensor_space,
    orbit_labels,
    span_key,
    all_tensors,
)
from isoprod.constructions import sample_tensors
from isoprod.group import StructureTensor, is_isomorphic, make_group

from test_group import relabel


@pytest.fixture(scope="module")
def census2():
    return classify_exhaustive(2)


def test_count_tensor_space():
    assert count_tensor_space(1) == (2, 1)
    assert count_tensor_space(2) == (4096, 63 * 62)
    for s in (1, 2):
        total, formula = count_tensor_space(s)
        tensors = list(all_tensors(s))
        assert len(tensors) == total
        assert sum(make_group(t).independent for t in tensors) == formula


def test_s1_census():
    rep, members = classify_exhaustive(1)
    assert rep.independent_tensors == 1 and rep.iso_classes == 1
    assert rep.iso_class_representatives == ["s1:0x1"]
    assert rep.component_lower_bound == {"0": 0}
    assert check_report(rep) == []


def test_s2_census(census2):
    rep, members = census2
    assert (rep.total_tensors, rep.independent_tensors, rep.distinct_spans) == (4096, 3906, 651)
    assert rep.oracle_agrees and rep.oracle_discrepancies == []
    assert sum(rep.iso_class_sizes) == 3906
    # each span has 6 ordered bases, so every class size is a multiple of 6
    assert all(n % 6 == 0 for n in rep.iso_class_sizes)
    assert rep.iso_classes == len(members) == 20
    assert check_report(rep) == []
    assert rep.component_lower_bound == {"0": 0}


def test_commutator_forms_alone_undercount(census2):
    rep, _ = census2
    # orbits of commutator forms merge non-isomorphic groups
    assert rep.commutator_form_orbits == 4 < rep.iso_classes


def test_s2_classes_are_pairwise_non_isomorphic_with_distinct_statistics(census2):
    rep, _ = census2
    groups = [make_group(StructureTensor.from_hex(h)) for h in rep.iso_class_representatives]
    for i, a in enumerate(groups):
        for b in groups[i + 1:]:
            assert not is_isomorphic(a, b)


def test_relabeling_stays_in_class(census2):
    rep, members = census2
    cls_of = {b: k for k, bits in members.items() for b in bits}
    rng = np.random.default_rng(0)
    for b in rng.choice(sorted(cls_of), 40, replace=False):
        t = StructureTensor(2, int(b))
        u = relabel(t, rng.permutation(4).tolist())
        assert cls_of[u.bits] == cls_of[t.bits]


def test_orbit_labels_respect_span():
    spans = {span_key(t) for t in all_tensors(2) if make_group(t).independent}
    labels = orbit_labels(2, spans)
    assert set(labels) == spans


def test_report_json_is_deterministic(census2):
    rep, _ = census2
    again, _ = classify_exhaustive(2)
    assert json.dumps(rep.as_dict(), sort_keys=True) == json.dumps(again.as_dict(), sort_keys=True)


def test_sampled_s3_relabel_merges():
    rng = np.random.default_rng(3)
    base = sample_tensors(3, 4, rng)
    tensors = base + [relabel(x, rng.permutation(6).tolist()) for x in base]
    classes = classify_sample(tensors)
    assert sum(len(v) for v in classes.values()) == len({x.bits for x in tensors})
    assert len(classes) <= len({x.bits for x in base})


def test_sampled_mode_deterministic_and_consistent():
    a, _ = classify_sampled(3, 10, seed=5)
    b, _ = classify_sampled(3, 10, seed=5)
    assert a.as_dict() == b.as_dict()
    assert a.seed == 5 and check_report(a) == []


def test_component_bound_equals_classes_when_all_valid():
    rep, members = classify_sampled(4, 4, seed=1, q=0)
    assert rep.constraint_satisfying_tensors["T1+T2"] == 4
    assert rep.component_lower_bound["0"] == rep.iso_classes
