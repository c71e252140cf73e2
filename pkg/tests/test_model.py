import pytest
from hypothesis import given, settings, strategies as st

from conftest import DATA, STABLE9, row
from spalattice import (
    Instance,
    InstanceError,
    Matching,
    ParseError,
    format_instance,
    format_matching,
    parse_instance,
    parse_matching,
    validate_matching,
)
from spalattice.solvers import random_instance

HEADER = "students 1\nprojects 1\nlecturers 1\n"


def test_four_instance(four):
    assert (four.n_students, four.n_projects, four.n_lecturers) == (4, 4, 4)
    assert all(four.project_capacity(p) == 1 for p in range(1, 5))
    assert all(four.lecturer_capacity(k) == 1 for k in range(1, 5))


def test_nine_instance(nine):
    assert nine.project_capacity(1) == nine.project_capacity(3) == 2
    assert nine.lecturer_capacity(1) == 4
    assert nine.lecturer_capacity(2) == 5
    assert nine.offered == ((1, 2, 5, 6), (3, 4, 7, 8))


def test_no_students():
    inst = parse_instance("students 0\nprojects 1\nlecturers 1\np1: cap 1 lecturer l1\nl1: cap 1 prefs\n")
    assert inst.n_students == 0


def test_comments_and_blank_lines():
    text = "# top\n\nstudents 1   # one\nprojects 1\nlecturers 1\ns1: p1\n\np1: cap 1 lecturer l1\nl1: cap 1 prefs s1 # end\n"
    assert parse_instance(text).prefs(1) == (1,)


def test_sections_may_interleave():
    text = HEADER + "l1: cap 1 prefs s1\np1: cap 1 lecturer l1\ns1: p1\n"
    assert parse_instance(text).is_acceptable(1, 1)


@pytest.mark.parametrize(
    "body, line, column, fragment",
    [
        ("s1: p1 p1\np1: cap 1 lecturer l1\nl1: cap 1 prefs s1\n", 4, 8, "twice"),
        ("s1: p2\np1: cap 1 lecturer l1\nl1: cap 1 prefs s1\n", 4, 5, "undefined project"),
        ("s1: p1\np1: cap 0 lecturer l1\nl1: cap 1 prefs s1\n", 5, 9, "positive"),
        ("s1: p1\np1: cap 1 lecturer l2\nl1: cap 1 prefs s1\n", 5, 20, "undefined lecturer"),
        ("s1: p1\np1: cap 1 lecturer l1 l1\nl1: cap 1 prefs s1\n", 5, 23, "one owning lecturer"),
        ("s1: p1\np1: cap 1 lecturer l1\np1: cap 1 lecturer l1\nl1: cap 1 prefs s1\n", 6, 1, "declared twice"),
        ("s1: p1\np1: cap 1 lecturer l1\nl1: cap 1 prefs s1 s3\n", 6, 20, "undefined student"),
        ("s1: p1\np1: cap one lecturer l1\nl1: cap 1 prefs s1\n", 5, 9, "integer"),
        ("s1 p1\n", 4, 1, "'<id>:'"),
        ("s2: p1\n", 4, 1, "outside"),
    ],
)
def test_errors_carry_position(body, line, column, fragment):
    with pytest.raises(ParseError) as info:
        parse_instance(HEADER + body)
    assert (info.value.line, info.value.column) == (line, column)
    assert fragment in str(info.value)


def test_header_order():
    with pytest.raises(ParseError, match="expected header 'students'"):
        parse_instance("projects 1\n")


def test_project_without_owner_line():
    with pytest.raises(ParseError, match="project with no owner: p1"):
        parse_instance(HEADER + "s1:\nl1: cap 1 prefs\n")


def test_acceptability_closure():
    with pytest.raises(ParseError, match="does not rank s1"):
        parse_instance(HEADER + "s1: p1\np1: cap 1 lecturer l1\nl1: cap 1 prefs\n")


def test_instance_constructor_validates():
    with pytest.raises(InstanceError):
        Instance.build([[1]], [(1, 1)], [(0, [1])])
    inst = Instance.build([[1]], [(1, 1)], [(1, [1])])
    assert inst.is_acceptable(1, 1)


def test_lecturer_may_rank_students_who_do_not_apply(four):
    assert 1 in four.lecturer_prefs(4)
    assert not four.is_acceptable(1, 3)


def test_instance_round_trip(nine, four):
    for inst in (nine, four, *(random_instance(seed) for seed in range(50))):
        assert parse_instance(format_instance(inst)) == inst


# -- matchings ----------------------------------------------------------------

def test_validate_table_row(nine, stable9):
    assert validate_matching(nine, stable9[1]) == []


def test_validate_non_listed_pair(nine, stable9):
    problems = validate_matching(nine, stable9[1].replace({8: 2}))
    assert "(s8,p2) is not an acceptable pair" in problems


def test_validate_capacity_overflow(nine):
    problems = validate_matching(nine, Matching({s: 1 for s in range(1, 10)}))
    assert any("project p1 capacity 2 exceeded" in p for p in problems)


def test_serialize_four_student_optimal():
    m = Matching({1: 1, 2: 3, 3: 2, 4: 4})
    assert format_matching(m) == "s1 p1\ns2 p3\ns3 p2\ns4 p4\n"
    assert format_matching(Matching()) == ""


def test_matching_value_semantics():
    a = Matching([(2, 5), (1, 3)])
    assert a == Matching({1: 3, 2: 5})
    assert len({a, Matching({1: 3, 2: 5})}) == 1
    assert (1, 3) in a and (1, 5) not in a
    assert a.replace({1: None, 3: 4}).as_dict() == {2: 5, 3: 4}
    with pytest.raises(ValueError):
        Matching([(1, 1), (1, 2)])


def test_parse_matching_errors():
    with pytest.raises(ParseError) as info:
        parse_matching("s1 p1\ns1 p2\n")
    assert info.value.line == 2
    with pytest.raises(ParseError):
        parse_matching("s1\n")


matchings = st.dictionaries(st.integers(1, 60), st.integers(1, 60), max_size=20).map(Matching)


@settings(max_examples=100)
@given(matchings)
def test_matching_round_trip(m):
    assert parse_matching(format_matching(m)) == m


@given(st.binary(max_size=300))
def test_parse_is_total_on_bytes(data):
    try:
        parse_instance(data)
    except (ParseError, InstanceError):
        pass


def _near_miss_text():
    """Mutations of a valid document: the parser sees mostly well-formed lines."""
    base = (DATA / "nine_students.txt").read_text()
    return st.lists(st.sampled_from(base.splitlines() + ["s1:", "p9: cap 1 lecturer l1", "students 2", "l1: cap -1 prefs", "#"]),
                    max_size=25).map("\n".join)


@given(_near_miss_text())
def test_parse_is_total_on_near_misses(text):
    try:
        parse_instance(text)
    except (ParseError, InstanceError):
        pass


def test_stable_rows_are_valid(nine):
    for projects in STABLE9.values():
        assert validate_matching(nine, row(projects)) == []
