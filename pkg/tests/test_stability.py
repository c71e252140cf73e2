import itertools

import pytest

from conftest import naive_blocking
from spalattice import (
    BlockingPair,
    Instance,
    InvalidMatchingError,
    Matching,
    UnstableMatchingError,
    Verdict,
    blocking_pairs,
    brute_force_all_stable,
    compare_for_student,
    dominates,
    is_stable,
    lecturer_prefers,
    random_instance,
    unpopular_projects_audit,
)
from spalattice.stability import format_blocking_pairs

FOUR_MS = Matching({1: 1, 2: 3, 3: 2, 4: 4})
FOUR_ML = Matching({1: 2, 2: 4, 3: 1, 4: 3})


def test_table_rows_are_stable(nine, stable9):
    assert blocking_pairs(nine, stable9[4]) == []
    assert is_stable(nine, stable9[7])
    assert is_stable(nine, stable9[1].replace({8: 8, 9: 2})) and stable9[1].replace({8: 8, 9: 2}) == stable9[2]


def test_four_clause_c(four):
    m = Matching({1: 1, 2: 4, 3: 2, 4: 3})
    assert BlockingPair(4, 1, "c") in blocking_pairs(four, m)


def test_four_lecturer_optimal_is_stable(four):
    assert is_stable(four, FOUR_ML)


def test_empty_matching_blocks_with_clause_a(nine):
    found = blocking_pairs(nine, Matching())
    assert found and found[0] == BlockingPair(1, 1, "a")


def test_clause_b_via_own_lecturer():
    # s1 holds p2 of l1, who is full; p1 of l1 is free and s1 prefers it.
    inst = Instance.build([[1, 2]], [(1, 1), (1, 1)], [(1, [1])])
    assert blocking_pairs(inst, Matching({1: 2})) == [BlockingPair(1, 1, "b")]


def test_clause_b_via_better_student():
    inst = Instance.build([[1], [2]], [(1, 1), (1, 1)], [(1, [1, 2])])
    assert blocking_pairs(inst, Matching({2: 2})) == [BlockingPair(1, 1, "b")]
    assert blocking_pairs(inst, Matching({1: 1})) == []


def test_invalid_matching_rejected(nine):
    with pytest.raises(InvalidMatchingError):
        blocking_pairs(nine, Matching({8: 2}))


def test_format_blocking_pairs():
    text = format_blocking_pairs([BlockingPair(4, 1, "c"), BlockingPair(1, 2, "a")])
    assert text == "BLOCK s4 p1 clause=c\nBLOCK s1 p2 clause=a\n"


def _all_matchings(instance):
    options = [[None, *instance.prefs(s)] for s in range(1, instance.n_students + 1)]
    for choice in itertools.product(*options):
        m = Matching({s: p for s, p in enumerate(choice, 1) if p is not None})
        loads_p, loads_l = {}, {}
        for _, p in m:
            loads_p[p] = loads_p.get(p, 0) + 1
            k = instance.owner(p)
            loads_l[k] = loads_l.get(k, 0) + 1
        if all(v <= instance.project_capacity(p) for p, v in loads_p.items()) and all(
            v <= instance.lecturer_capacity(k) for k, v in loads_l.items()
        ):
            yield m


def test_blocking_pairs_agree_with_naive_evaluation():
    checked = 0
    for seed in range(60):
        inst = random_instance(seed, n1=4, n2=4, n3=2, max_cap=2, max_list=3, contrarian=seed % 2)
        for m in _all_matchings(inst):
            got = sorted((b.student, b.project, b.clause) for b in blocking_pairs(inst, m))
            assert got == sorted(naive_blocking(inst, m)), (seed, m)
            checked += 1
    assert checked > 1000


# -- preferences ----------------------------------------------------------------

def test_compare_for_student(four, nine, stable9):
    assert compare_for_student(four, FOUR_MS, FOUR_ML, 1) is Verdict.PREFERS_FIRST
    assert compare_for_student(nine, stable9[3], stable9[3], 5) is Verdict.INDIFFERENT
    assert compare_for_student(nine, stable9[3], stable9[4], 6) is Verdict.PREFERS_SECOND
    assert compare_for_student(nine, Matching(), stable9[1], 1) is Verdict.PREFERS_SECOND


def test_dominates(four, nine, stable9):
    assert dominates(four, FOUR_MS, FOUR_ML)
    assert not dominates(four, FOUR_ML, FOUR_MS)
    assert dominates(nine, stable9[5], stable9[5])
    assert not dominates(nine, stable9[3], stable9[4])
    assert not dominates(nine, stable9[4], stable9[3])


def test_dominates_requires_stability(nine, stable9):
    with pytest.raises(UnstableMatchingError) as info:
        dominates(nine, Matching(), stable9[1])
    assert info.value.blocking_pairs


def test_dominance_is_a_partial_order(nine):
    stable = list(brute_force_all_stable(nine))
    for a in stable:
        assert dominates(nine, a, a)
        for b in stable:
            if a != b and dominates(nine, a, b):
                assert not dominates(nine, b, a)
            for c in stable:
                if dominates(nine, a, b) and dominates(nine, b, c):
                    assert dominates(nine, a, c)


def test_lecturer_prefers(four, nine, stable9):
    assert lecturer_prefers(four, FOUR_MS, FOUR_ML, 1) is Verdict.PREFERS_SECOND
    assert lecturer_prefers(nine, stable9[2], stable9[3], 2) is Verdict.PREFERS_SECOND
    assert lecturer_prefers(nine, stable9[4], stable9[4], 1) is Verdict.IDENTICAL


def test_lecturer_prefers_incomparable():
    inst = Instance.build([[1], [1], [2], [2]], [(2, 1), (2, 1)], [(2, [1, 2, 3, 4])])
    # l1 gains s1 and s4 against s2 and s3: one pairing each way.
    assert lecturer_prefers(inst, Matching({1: 1, 4: 2}), Matching({2: 1, 3: 2}), 1) is Verdict.INCOMPARABLE


def test_lecturer_prefers_rejects_unequal_loads(nine, stable9):
    with pytest.raises(ValueError):
        lecturer_prefers(nine, stable9[1], Matching(), 1)


def test_lecturers_reverse_student_order(nine, stable9):
    """Across the lattice, whenever every student weakly prefers one matching,
    no lecturer strictly prefers it."""
    for a, b in itertools.permutations(stable9.values(), 2):
        if dominates(nine, a, b):
            for k in (1, 2):
                assert lecturer_prefers(nine, a, b, k) in (Verdict.PREFERS_SECOND, Verdict.IDENTICAL)


# -- audit ----------------------------------------------------------------------

def test_audit_on_stable9(nine, stable9):
    assert unpopular_projects_audit(nine, stable9.values()) is None
    assert unpopular_projects_audit(nine, [stable9[1]]) is None


def test_audit_reports_clause_i(nine, stable9):
    failure = unpopular_projects_audit(nine, [stable9[1], stable9[1].replace({9: None})])
    assert failure.clause == "i"
    assert "s9" in str(failure)


def test_audit_reports_clauses_ii_and_iii():
    one_lecturer = Instance.build([[1, 2]], [(1, 1), (1, 1)], [(2, [1])])
    failure = unpopular_projects_audit(one_lecturer, [Matching({1: 1}), Matching({1: 2})])
    assert failure.clause == "iii" and "p1" in failure.detail

    two_lecturers = Instance.build([[1, 2]], [(1, 1), (1, 2)], [(1, [1]), (1, [1])])
    failure = unpopular_projects_audit(two_lecturers, [Matching({1: 1}), Matching({1: 2})])
    assert failure.clause == "ii"


def test_audit_on_random_stable_sets():
    for seed in range(300):
        inst = random_instance(seed, contrarian=1.0)
        assert unpopular_projects_audit(inst, brute_force_all_stable(inst)) is None
