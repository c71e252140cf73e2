"""Meta-rotations: next projects, the successor digraph, elimination, pruning."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .model import Instance, LecturerSpec, Matching, StudentPref, validate_matching
from .solvers import lecturer_optimal, student_optimal

__all__ = [
    "Mode",
    "NextStep",
    "MetaRotation",
    "RotationDigraph",
    "NotExposedError",
    "worst_assigned",
    "worst_assigned_lecturer",
    "next_project",
    "build_digraph",
    "exposed_rotations",
    "is_exposed",
    "eliminate",
    "reduce_instance",
    "parse_rotation",
]


class Mode(str, enum.Enum):
    PROJECT_FULL = "project_full"
    LECTURER_FULL = "lecturer_full"


@dataclass(frozen=True)
class NextStep:
    project: int
    displaced: int
    mode: Mode


class NotExposedError(ValueError):
    pass


@dataclass(frozen=True)
class MetaRotation:
    """A cyclic list of (student, project) pairs, led by its smallest student."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(s), int(p)) for s, p in self.pairs)
        if len(pairs) < 2:
            raise ValueError("a meta-rotation needs at least two pairs")
        if len({s for s, _ in pairs}) != len(pairs) or len({p for _, p in pairs}) != len(pairs):
            raise ValueError("students and projects in a meta-rotation must be distinct")
        lead = min(range(len(pairs)), key=lambda i: pairs[i][0])
        object.__setattr__(self, "pairs", pairs[lead:] + pairs[:lead])

    @property
    def students(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self.pairs)

    @property
    def projects(self) -> tuple[int, ...]:
        return tuple(p for _, p in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __str__(self) -> str:
        return "".join(f"(s{s},p{p})" for s, p in self.pairs)

    def to_text(self) -> str:
        return f"rho = {self}"


def parse_rotation(text: str) -> MetaRotation:
    """Inverse of ``MetaRotation.to_text`` (the ``rho =`` prefix is optional)."""
    import re

    body = text.strip()
    if body.startswith("rho"):
        body = body.split("=", 1)[1].strip()
    pairs = re.findall(r"\(\s*s(\d+)\s*,\s*p(\d+)\s*\)", body)
    if not pairs or re.sub(r"\(\s*s\d+\s*,\s*p\d+\s*\)", "", body).strip():
        raise ValueError(f"not a rotation: {text!r}")
    return MetaRotation(tuple((int(s), int(p)) for s, p in pairs))


class _Loads:
    """Per-project and per-lecturer assignee sets of one matching."""

    def __init__(self, instance: Instance, matching: Matching):
        self.instance = instance
        self.by_p = matching.by_project()
        self.by_l = matching.by_lecturer(instance)

    def p_full(self, p: int) -> bool:
        return len(self.by_p.get(p, ())) >= self.instance.project_capacity(p)

    def l_full(self, k: int) -> bool:
        return len(self.by_l.get(k, ())) >= self.instance.lecturer_capacity(k)

    def worst_p(self, p: int) -> int:
        k = self.instance.owner(p)
        return max(self.by_p[p], key=self.instance.lecturer_rank[k - 1].__getitem__)

    def worst_l(self, k: int) -> int:
        return max(self.by_l[k], key=self.instance.lecturer_rank[k - 1].__getitem__)


def worst_assigned(instance: Instance, matching: Matching, project: int) -> int:
    """The student in ``matching(project)`` ranked lowest by the project's lecturer."""
    loads = _Loads(instance, matching)
    if not loads.by_p.get(project):
        raise ValueError(f"p{project} has no assigned students")
    return loads.worst_p(project)


def worst_assigned_lecturer(instance: Instance, matching: Matching, lecturer: int) -> int:
    loads = _Loads(instance, matching)
    if not loads.by_l.get(lecturer):
        raise ValueError(f"l{lecturer} has no assigned students")
    return loads.worst_l(lecturer)


def _next(instance: Instance, matching: Matching, loads: _Loads, s: int) -> NextStep | None:
    current = matching.get(s)
    if current is None:
        raise ValueError(f"s{s} is unassigned")
    ranked = instance.prefs(s)
    for p in ranked[ranked.index(current) + 1:]:
        k = instance.owner(p)
        rank = instance.lecturer_rank[k - 1]
        if loads.p_full(p):
            w = loads.worst_p(p)
            if rank[s] < rank[w]:
                return NextStep(p, w, Mode.PROJECT_FULL)
        elif loads.l_full(k):
            w = loads.worst_l(k)
            if rank[s] < rank[w]:
                return NextStep(p, w, Mode.LECTURER_FULL)
    return None


def next_project(instance: Instance, matching: Matching, s: int) -> NextStep | None:
    """First project after ``matching(s)`` on ``s``'s list that ``s`` could
    move to, and the student it would displace; None if there is none.

    A full project qualifies when its lecturer prefers ``s`` to the project's
    worst assignee.  An undersubscribed project qualifies when its lecturer is
    full and prefers ``s`` to the lecturer's worst assignee.
    """
    return _next(instance, matching, _Loads(instance, matching), s)


@dataclass(frozen=True)
class RotationDigraph:
    """Successor graph on the students whose assignment differs from the
    lecturer-optimal matching; every vertex has exactly one out-edge."""

    steps: dict[int, NextStep]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.steps))

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((s, self.steps[s].displaced) for s in self.vertices)

    def successor(self, s: int) -> int:
        return self.steps[s].displaced

    def cycles(self) -> list[list[int]]:
        """Every directed cycle, each listed from the vertex where it was entered.

        Functional-graph walk: follow out-edges from each unvisited vertex,
        stamping vertices with the walk number; meeting a vertex stamped by
        the current walk closes a new cycle.
        """
        stamp: dict[int, int] = {}
        found = []
        for walk, start in enumerate(self.vertices):
            path = []
            v = start
            while v not in stamp:
                stamp[v] = walk
                path.append(v)
                v = self.successor(v)
            if stamp[v] == walk:
                found.append(path[path.index(v):])
        return found


def build_digraph(instance: Instance, matching: Matching, lecturer_opt: Matching | None = None) -> RotationDigraph:
    if lecturer_opt is None:
        lecturer_opt = lecturer_optimal(instance)
    loads = _Loads(instance, matching)
    steps = {}
    for s, p in matching:
        if lecturer_opt.get(s) != p:
            step = _next(instance, matching, loads, s)
            if step is None:
                raise RuntimeError(
                    f"s{s} differs from the lecturer-optimal matching but has no next project;"
                    " the input matching is probably not stable"
                )
            steps[s] = step
    for s, step in steps.items():
        if step.displaced not in steps:
            raise RuntimeError(f"next student of s{s} is s{step.displaced}, which is not a vertex")
    return RotationDigraph(steps)


def _rotation_from_cycle(matching: Matching, cycle: list[int]) -> MetaRotation:
    return MetaRotation(tuple((s, matching[s]) for s in cycle))


def exposed_rotations(instance: Instance, matching: Matching, lecturer_opt: Matching | None = None) -> list[MetaRotation]:
    """The meta-rotations exposed in a stable matching, sorted by their pairs."""
    graph = build_digraph(instance, matching, lecturer_opt)
    return sorted((_rotation_from_cycle(matching, c) for c in graph.cycles()), key=lambda r: r.pairs)


def is_exposed(instance: Instance, matching: Matching, rotation: MetaRotation) -> bool:
    """Check the exposure conditions directly: each student holds its listed
    project as that project's worst assignee, and the next student of each
    pair is the student of the following pair."""
    loads = _Loads(instance, matching)
    r = len(rotation.pairs)
    for t, (s, p) in enumerate(rotation.pairs):
        if matching.get(s) != p or loads.worst_p(p) != s:
            return False
        step = _next(instance, matching, loads, s)
        if step is None or step.displaced != rotation.pairs[(t + 1) % r][0]:
            return False
    return True


def eliminate(instance: Instance, matching: Matching, rotation: MetaRotation) -> Matching:
    """Move every student of ``rotation`` to its next project at once."""
    if not is_exposed(instance, matching, rotation):
        raise NotExposedError(f"{rotation} is not exposed in the given matching")
    loads = _Loads(instance, matching)
    moves = {s: _next(instance, matching, loads, s).project for s in rotation.students}
    result = matching.replace(moves)
    problems = validate_matching(instance, result)
    if problems:
        raise RuntimeError("elimination produced an invalid matching: " + "; ".join(problems))
    return result


def reduce_instance(instance: Instance) -> Instance:
    """Drop every pair that cannot occur in a stable matching.

    Each student keeps the stretch of its list from its student-optimal
    project to its lecturer-optimal project; students unassigned there keep
    nothing.  Lecturers then forget students who no longer list any of their
    projects.
    """
    best, worst = student_optimal(instance), lecturer_optimal(instance)
    students = []
    for s in range(1, instance.n_students + 1):
        ranked = instance.prefs(s)
        a, b = best.get(s), worst.get(s)
        if a is None or b is None:
            students.append(StudentPref(()))
        else:
            students.append(StudentPref(ranked[ranked.index(a): ranked.index(b) + 1]))
    lecturers = []
    for k, spec in enumerate(instance.lecturers, 1):
        mine = set(instance.offered[k - 1])
        keep = tuple(s for s in spec.ranked_students if mine.intersection(students[s - 1].ranked_projects))
        lecturers.append(LecturerSpec(spec.capacity, keep))
    return Instance(tuple(students), instance.projects, tuple(lecturers))
