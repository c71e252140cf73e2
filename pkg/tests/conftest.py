from pathlib import Path

import pytest

from spalattice import Matching, parse_instance

DATA = Path(__file__).resolve().parent.parent / "data"

# The seven stable matchings of the nine-student instance as project rows,
# students s1..s9, numbered M1..M7.
STABLE9 = {
    1: (1, 1, 3, 3, 4, 5, 7, 6, 8),
    2: (1, 1, 3, 3, 4, 5, 7, 8, 2),
    3: (1, 1, 3, 3, 4, 7, 6, 8, 2),
    4: (1, 4, 3, 1, 3, 5, 7, 8, 2),
    5: (1, 4, 3, 1, 3, 7, 6, 8, 2),
    6: (4, 3, 1, 1, 3, 5, 7, 8, 2),
    7: (4, 3, 1, 1, 3, 7, 6, 8, 2),
}


def row(projects) -> Matching:
    return Matching({s: p for s, p in enumerate(projects, 1) if p})


def load(name: str):
    return parse_instance((DATA / name).read_text())


@pytest.fixture(scope="session")
def nine():
    return load("nine_students.txt")


@pytest.fixture(scope="session")
def four():
    return load("four_students.txt")


@pytest.fixture(scope="session")
def stable9():
    return {k: row(v) for k, v in STABLE9.items()}


@pytest.fixture(scope="session")
def rho(nine):
    """The four rotations of the nine-student instance, keyed 1..4."""
    from spalattice import MetaRotation

    return {
        1: MetaRotation(((8, 6), (9, 8))),
        2: MetaRotation(((6, 5), (7, 7))),
        3: MetaRotation(((2, 1), (5, 4), (4, 3))),
        4: MetaRotation(((1, 1), (2, 4), (3, 3))),
    }


def naive_blocking(instance, matching):
    """Clause-by-clause evaluation over every student/project pair, using
    only set arithmetic on the matching.  Independent of the library's
    blocking-pair code."""
    found = []
    for s in range(1, instance.n_students + 1):
        for p in range(1, instance.n_projects + 1):
            k = instance.owner(p)
            if p not in instance.prefs(s) or s not in instance.lecturer_prefs(k):
                continue
            cur = matching.get(s)
            if cur == p:
                continue
            ranked = instance.prefs(s)
            if cur is not None and ranked.index(p) > ranked.index(cur):
                continue
            members_p = {t for t, q in matching if q == p}
            members_l = {t for t, q in matching if instance.owner(q) == k}
            lpos = instance.lecturer_prefs(k).index
            p_under = len(members_p) < instance.project_capacity(p)
            l_under = len(members_l) < instance.lecturer_capacity(k)
            if p_under and l_under:
                found.append((s, p, "a"))
            elif p_under and not l_under and (
                s in members_l or lpos(s) < max(lpos(t) for t in members_l)
            ):
                found.append((s, p, "b"))
            elif not p_under and lpos(s) < max(lpos(t) for t in members_p):
                found.append((s, p, "c"))
    return found
