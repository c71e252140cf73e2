"""Blocking pairs, stability, and the preference relations over matchings."""

from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .model import Instance, Matching, validate_matching

__all__ = [
    "BlockingPair",
    "Verdict",
    "AuditFailure",
    "InvalidMatchingError",
    "UnstableMatchingError",
    "blocking_pairs",
    "is_stable",
    "compare_for_student",
    "compare_students",
    "dominates",
    "lecturer_prefers",
    "unpopular_projects_audit",
    "format_blocking_pairs",
]


class InvalidMatchingError(ValueError):
    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class UnstableMatchingError(ValueError):
    def __init__(self, pairs: Sequence[BlockingPair]):
        self.blocking_pairs = list(pairs)
        super().__init__("matching is not stable: " + ", ".join(map(str, self.blocking_pairs)))


@dataclass(frozen=True, order=True)
class BlockingPair:
    student: int
    project: int
    clause: str  # "a", "b" or "c"

    def __str__(self) -> str:
        return f"BLOCK s{self.student} p{self.project} clause={self.clause}"


class Verdict(str, enum.Enum):
    PREFERS_FIRST = "prefers_first"
    PREFERS_SECOND = "prefers_second"
    INDIFFERENT = "indifferent"
    INCOMPARABLE = "incomparable"
    IDENTICAL = "identical"


def _check(instance: Instance, matching: Matching) -> None:
    problems = validate_matching(instance, matching)
    if problems:
        raise InvalidMatchingError(problems)


def blocking_pairs(instance: Instance, matching: Matching) -> list[BlockingPair]:
    """All blocking pairs, by student then by position in the student's list."""
    _check(instance, matching)
    by_p = matching.by_project()
    by_l = matching.by_lecturer(instance)
    worst_p = {p: max(ss, key=lambda s: instance.rank_of_student(instance.owner(p), s)) for p, ss in by_p.items()}
    worst_l = {k: max(ss, key=lambda s: instance.rank_of_student(k, s)) for k, ss in by_l.items()}

    found = []
    for s in range(1, instance.n_students + 1):
        current = matching.get(s)
        for p in instance.prefs(s):
            if p == current:
                break
            k = instance.owner(p)
            lrank = instance.lecturer_rank[k - 1]
            p_full = len(by_p.get(p, ())) >= instance.project_capacity(p)
            l_full = len(by_l.get(k, ())) >= instance.lecturer_capacity(k)
            if not p_full and not l_full:
                found.append(BlockingPair(s, p, "a"))
            elif not p_full:
                if s in by_l[k] or lrank[s] < lrank[worst_l[k]]:
                    found.append(BlockingPair(s, p, "b"))
            elif lrank[s] < lrank[worst_p[p]]:
                found.append(BlockingPair(s, p, "c"))
    return found


def is_stable(instance: Instance, matching: Matching) -> bool:
    return not blocking_pairs(instance, matching)


def format_blocking_pairs(pairs: Iterable[BlockingPair]) -> str:
    return "".join(f"{bp}\n" for bp in pairs)


def compare_for_student(instance: Instance, first: Matching, second: Matching, s: int) -> Verdict:
    """How student ``s`` ranks ``first`` against ``second``.

    Being assigned counts as better than being unassigned; this case never
    arises between two stable matchings.
    """
    a, b = first.get(s), second.get(s)
    if a == b:
        return Verdict.INDIFFERENT
    if b is None:
        return Verdict.PREFERS_FIRST
    if a is None:
        return Verdict.PREFERS_SECOND
    if instance.rank_of_project(s, a) < instance.rank_of_project(s, b):
        return Verdict.PREFERS_FIRST
    return Verdict.PREFERS_SECOND


def compare_students(instance: Instance, first: Matching, second: Matching) -> dict[int, Verdict]:
    return {
        s: compare_for_student(instance, first, second, s)
        for s in range(1, instance.n_students + 1)
    }


def weakly_preferred(instance: Instance, first: Matching, second: Matching) -> bool:
    """True when no student prefers ``second``; no stability check."""
    for s in range(1, instance.n_students + 1):
        if compare_for_student(instance, first, second, s) is Verdict.PREFERS_SECOND:
            return False
    return True


def dominates(instance: Instance, first: Matching, second: Matching) -> bool:
    """Whether ``first`` dominates ``second``.  Both must be stable."""
    for m in (first, second):
        bps = blocking_pairs(instance, m)
        if bps:
            raise UnstableMatchingError(bps)
    return weakly_preferred(instance, first, second)


def lecturer_prefers(instance: Instance, first: Matching, second: Matching, lecturer: int) -> Verdict:
    """Compare two matchings from ``lecturer``'s point of view.

    The students gained and lost are paired off in the lecturer's order; the
    lecturer prefers one side when it wins every pairing.
    """
    rank = instance.lecturer_rank[lecturer - 1]
    mine = first.by_lecturer(instance).get(lecturer, set())
    theirs = second.by_lecturer(instance).get(lecturer, set())
    if len(mine) != len(theirs):
        raise ValueError(
            f"l{lecturer} has {len(mine)} students in one matching and {len(theirs)} in the other;"
            " at least one matching is not stable"
        )
    if mine == theirs:
        return Verdict.IDENTICAL
    only_first = sorted(mine - theirs, key=rank.__getitem__)
    only_second = sorted(theirs - mine, key=rank.__getitem__)
    pairs = list(zip(only_first, only_second))
    if all(rank[a] < rank[b] for a, b in pairs):
        return Verdict.PREFERS_FIRST
    if all(rank[b] < rank[a] for a, b in pairs):
        return Verdict.PREFERS_SECOND
    return Verdict.INCOMPARABLE


@dataclass(frozen=True)
class AuditFailure:
    """A pair of matchings violating one clause of the unpopular-projects facts."""

    clause: str  # "i", "ii" or "iii"
    first: Matching
    second: Matching
    detail: str

    def __str__(self) -> str:
        return f"clause ({self.clause}): {self.detail}"


def unpopular_projects_audit(instance: Instance, matchings: Iterable[Matching]) -> AuditFailure | None:
    """Check that all matchings agree on who is assigned and on the loads.

    Returns None when every clause holds, otherwise the first violation found
    against the first matching of the collection.
    """
    ms = list(matchings)
    if len(ms) < 2:
        return None
    ref = ms[0]
    ref_l = {k: len(v) for k, v in ref.by_lecturer(instance).items()}
    under = set()
    for m in ms:
        loads = m.by_lecturer(instance)
        for k in range(1, instance.n_lecturers + 1):
            if len(loads.get(k, ())) < instance.lecturer_capacity(k):
                under.add(k)

    for m in ms[1:]:
        if m.students != ref.students:
            diff = sorted(m.students ^ ref.students)
            return AuditFailure("i", ref, m, f"assigned students differ on s{diff[0]}")
    for m in ms[1:]:
        loads = {k: len(v) for k, v in m.by_lecturer(instance).items()}
        for k in range(1, instance.n_lecturers + 1):
            if loads.get(k, 0) != ref_l.get(k, 0):
                return AuditFailure(
                    "ii", ref, m, f"l{k} has {ref_l.get(k, 0)} vs {loads.get(k, 0)} students"
                )
    ref_p = {p: len(v) for p, v in ref.by_project().items()}
    for m in ms[1:]:
        loads = {p: len(v) for p, v in m.by_project().items()}
        for k in sorted(under):
            for p in instance.offered[k - 1]:
                if loads.get(p, 0) != ref_p.get(p, 0):
                    return AuditFailure(
                        "iii", ref, m,
                        f"p{p} of undersubscribed l{k} has {ref_p.get(p, 0)} vs {loads.get(p, 0)} students",
                    )
    return None
