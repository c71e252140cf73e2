"""Student- and lecturer-optimal stable matchings, the exhaustive oracle,
and seeded random instances."""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass

from .model import Instance, LecturerSpec, Matching, ProjectSpec, StudentPref, format_matching

__all__ = [
    "StableSet",
    "EnumerationLimitError",
    "student_optimal",
    "lecturer_optimal",
    "brute_force_all_stable",
    "search_space_size",
    "random_instance",
]

DEFAULT_BOUND = 10**7


class EnumerationLimitError(RuntimeError):
    """The exhaustive search would exceed its configured size bound."""

    def __init__(self, size: int, bound: int):
        self.size = size
        self.bound = bound
        super().__init__(f"search space {size} exceeds bound {bound}; refusing to enumerate")


@dataclass(frozen=True)
class StableSet:
    """Distinct stable matchings sorted by their serialized text."""

    matchings: tuple[Matching, ...]

    @classmethod
    def of(cls, matchings) -> StableSet:
        unique = {m: format_matching(m) for m in matchings}
        return cls(tuple(sorted(unique, key=unique.__getitem__)))

    def __len__(self) -> int:
        return len(self.matchings)

    def __iter__(self):
        return iter(self.matchings)

    def __contains__(self, m) -> bool:
        return m in self.matchings

    def to_text(self) -> str:
        return "\n".join(format_matching(m) for m in self.matchings)


def student_optimal(instance: Instance) -> Matching:
    """Student-proposing deferred acceptance for SPA-S.

    Free students propose in FIFO order (ascending index initially) to the
    first project left on their list.  Over-subscription evicts the worst
    student of the project, or of the lecturer.  Once a project (lecturer)
    is full, every pair ranked below its worst assignee is deleted.
    """
    lists = [list(instance.prefs(s)) for s in range(1, instance.n_students + 1)]
    deleted: list[set[int]] = [set() for _ in lists]
    head = [0] * len(lists)
    assigned: dict[int, int] = {}
    members_p: dict[int, set[int]] = {}
    members_l: dict[int, set[int]] = {}
    lrank = instance.lecturer_rank

    def worst(k: int, ss) -> int:
        return max(ss, key=lrank[k - 1].__getitem__)

    def first_live(s: int) -> int | None:
        lst, gone = lists[s - 1], deleted[s - 1]
        while head[s - 1] < len(lst) and lst[head[s - 1]] in gone:
            head[s - 1] += 1
        return lst[head[s - 1]] if head[s - 1] < len(lst) else None

    def unassign(s: int) -> None:
        p = assigned.pop(s)
        members_p[p].discard(s)
        members_l[instance.owner(p)].discard(s)

    free = deque(range(1, instance.n_students + 1))
    while free:
        s = free.popleft()
        p = first_live(s)
        if p is None:
            continue
        k = instance.owner(p)
        assigned[s] = p
        members_p.setdefault(p, set()).add(s)
        members_l.setdefault(k, set()).add(s)

        if len(members_p[p]) > instance.project_capacity(p):
            r = worst(k, members_p[p])
            unassign(r)
            deleted[r - 1].add(p)
            free.append(r)
        elif len(members_l[k]) > instance.lecturer_capacity(k):
            r = worst(k, members_l[k])
            rp = assigned[r]
            unassign(r)
            deleted[r - 1].add(rp)
            free.append(r)

        if len(members_p[p]) == instance.project_capacity(p):
            w = lrank[k - 1][worst(k, members_p[p])]
            for t, rt in lrank[k - 1].items():
                if rt > w and p in instance.student_rank[t - 1]:
                    deleted[t - 1].add(p)
        if len(members_l[k]) == instance.lecturer_capacity(k):
            w = lrank[k - 1][worst(k, members_l[k])]
            for t, rt in lrank[k - 1].items():
                if rt > w:
                    deleted[t - 1].update(instance.offered[k - 1])
    return Matching(assigned)


def lecturer_optimal(instance: Instance) -> Matching:
    """Lecturer-proposing algorithm for SPA-S.

    While some lecturer is undersubscribed and can still offer one of its
    undersubscribed projects to a student who has not deleted it, the
    lowest-indexed such lecturer offers to the first such student on its
    list, choosing that student's most preferred eligible project.  The
    student accepts and deletes every project below it.
    """
    n = instance.n_students
    alive = [list(instance.prefs(s)) for s in range(1, n + 1)]
    assigned: dict[int, int] = {}
    load_p = [0] * (instance.n_projects + 1)
    load_l = [0] * (instance.n_lecturers + 1)

    def candidate(k: int):
        for s in instance.lecturer_prefs(k):
            for p in alive[s - 1]:
                if (
                    instance.owner(p) == k
                    and assigned.get(s) != p
                    and load_p[p] < instance.project_capacity(p)
                ):
                    return s, p
        return None

    while True:
        offer = None
        for k in range(1, instance.n_lecturers + 1):
            if load_l[k] < instance.lecturer_capacity(k):
                offer = candidate(k)
                if offer:
                    break
        if offer is None:
            break
        s, p = offer
        old = assigned.get(s)
        if old is not None:
            load_p[old] -= 1
            load_l[instance.owner(old)] -= 1
        assigned[s] = p
        load_p[p] += 1
        load_l[instance.owner(p)] += 1
        lst = alive[s - 1]
        del lst[lst.index(p) + 1:]
    return Matching(assigned)


# -- exhaustive oracle ------------------------------------------------------

def search_space_size(instance: Instance) -> int:
    return math.prod(len(instance.prefs(s)) + 1 for s in range(1, instance.n_students + 1))


def _is_stable_plain(
    prefs: list[tuple[int, ...]],
    owner: list[int],
    rank: list[dict[int, int]],
    cap_p: list[int],
    cap_l: list[int],
    choice: list[int],
    load_p: list[int],
    load_l: list[int],
) -> bool:
    """Direct clause-by-clause stability test on a full assignment vector.

    ``choice[s-1]`` is 0 for unassigned; the other lists are flat,
    1-indexed copies of the instance.  Deliberately independent of the
    stability module so the oracle does not share code with what it checks.
    """
    worst_p: dict[int, int] = {}
    worst_l: dict[int, int] = {}
    for s, p in enumerate(choice, 1):
        if p:
            k = owner[p]
            r = rank[k][s]
            if r > worst_p.get(p, -1):
                worst_p[p] = r
            if r > worst_l.get(k, -1):
                worst_l[k] = r
    for s, cur in enumerate(choice, 1):
        for p in prefs[s]:
            if p == cur:
                break
            k = owner[p]
            r = rank[k][s]
            if load_p[p] < cap_p[p]:
                if load_l[k] < cap_l[k]:
                    return False
                if (cur and owner[cur] == k) or r < worst_l[k]:
                    return False
            elif r < worst_p[p]:
                return False
    return True


def brute_force_all_stable(instance: Instance, bound: int = DEFAULT_BOUND) -> StableSet:
    """Every stable matching, by backtracking over all capacity-feasible
    partial assignments.  Refuses instances whose raw search space
    (product of list length + 1) exceeds ``bound``."""
    size = search_space_size(instance)
    if size > bound:
        raise EnumerationLimitError(size, bound)

    n = instance.n_students
    choice = [0] * n
    load_p = [0] * (instance.n_projects + 1)
    load_l = [0] * (instance.n_lecturers + 1)
    prefs = [()] + [instance.prefs(s) for s in range(1, n + 1)]
    owner = [0] + [instance.owner(p) for p in range(1, instance.n_projects + 1)]
    cap_p = [0] + [instance.project_capacity(p) for p in range(1, instance.n_projects + 1)]
    cap_l = [0] + [instance.lecturer_capacity(k) for k in range(1, instance.n_lecturers + 1)]
    rank = [{}] + [instance.lecturer_rank[k - 1] for k in range(1, instance.n_lecturers + 1)]
    options = [[p for p in prefs[s] if instance.is_acceptable(s, p)] for s in range(1, n + 1)]
    tables = (prefs, owner, rank, cap_p, cap_l)
    found: list[Matching] = []

    def visit(i: int) -> None:
        if i == n:
            if _is_stable_plain(*tables, choice, load_p, load_l):
                found.append(Matching({s + 1: p for s, p in enumerate(choice) if p}))
            return
        choice[i] = 0
        visit(i + 1)
        for p in options[i]:
            k = owner[p]
            if load_p[p] < cap_p[p] and load_l[k] < cap_l[k]:
                load_p[p] += 1
                load_l[k] += 1
                choice[i] = p
                visit(i + 1)
                load_p[p] -= 1
                load_l[k] -= 1
        choice[i] = 0

    visit(0)
    return StableSet.of(found)


# -- random instances -------------------------------------------------------

def random_instance(
    seed: int,
    n1: int = 6,
    n2: int = 5,
    n3: int = 3,
    max_cap: int = 2,
    max_list: int = 4,
    contrarian: float = 0.0,
) -> Instance:
    """A reproducible random instance with exactly ``n1`` students and
    ``n2`` projects.

    ``n3`` is capped at ``n2`` so every lecturer offers at least one project.
    Student lists have length 0..``max_list``.  Each lecturer ranks exactly
    the students who list one of its projects: in random order, or, with
    probability ``contrarian``, favouring the students who like its projects
    least, which produces instances with more stable matchings.
    """
    if min(n1, n2, n3, max_cap) < 1 or max_list < 0:
        raise ValueError("bounds must be positive")
    rng = random.Random(seed)
    n3 = min(n3, n2)
    owners = list(range(1, n3 + 1)) + [rng.randint(1, n3) for _ in range(n2 - n3)]
    rng.shuffle(owners)
    projects = [ProjectSpec(rng.randint(1, max_cap), k) for k in owners]
    students = []
    for _ in range(n1):
        length = rng.randint(0, min(max_list, n2))
        students.append(StudentPref(tuple(rng.sample(range(1, n2 + 1), length))))
    lecturers = []
    for k in range(1, n3 + 1):
        keen = [i for i, sp in enumerate(students, 1) if any(owners[p - 1] == k for p in sp.ranked_projects)]
        if rng.random() < contrarian:
            def coolness(i: int, k: int = k) -> float:
                ranked = students[i - 1].ranked_projects
                return -min(r for r, p in enumerate(ranked) if owners[p - 1] == k) - rng.random()
            keen.sort(key=coolness)
        else:
            rng.shuffle(keen)
        lecturers.append(LecturerSpec(rng.randint(1, max_cap), tuple(keen)))
    return Instance(tuple(students), tuple(projects), tuple(lecturers))
