"""Instances, matchings, and their text formats.

Students, projects and lecturers are identified by dense 1-based integers,
written ``s<i>``, ``p<j>`` and ``l<k>`` in text.  An instance document looks
like::

    # comment
    students 2
    projects 2
    lecturers 1
    s1: p1 p2
    s2: p2
    p1: cap 1 lecturer l1
    p2: cap 1 lecturer l1
    l1: cap 2 prefs s2 s1

A matching document holds one ``s<i> p<j>`` pair per line.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import cached_property

__all__ = [
    "StudentPref",
    "ProjectSpec",
    "LecturerSpec",
    "Instance",
    "Matching",
    "ParseError",
    "InstanceError",
    "parse_instance",
    "format_instance",
    "parse_matching",
    "format_matching",
    "validate_matching",
]


class ParseError(ValueError):
    """Malformed instance or matching text."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" if column is None else f"line {line}, column {column}"
            message = f"{where}: {message}"
        super().__init__(message)


class InstanceError(ValueError):
    """Structurally invalid instance (bad reference, duplicate, capacity...)."""


@dataclass(frozen=True)
class StudentPref:
    ranked_projects: tuple[int, ...] = ()


@dataclass(frozen=True)
class ProjectSpec:
    capacity: int
    owner: int


@dataclass(frozen=True)
class LecturerSpec:
    capacity: int
    ranked_students: tuple[int, ...] = ()


@dataclass(frozen=True)
class Instance:
    """An SPA-S instance.  Construction validates every invariant."""

    students: tuple[StudentPref, ...]
    projects: tuple[ProjectSpec, ...]
    lecturers: tuple[LecturerSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "students", tuple(self.students))
        object.__setattr__(self, "projects", tuple(self.projects))
        object.__setattr__(self, "lecturers", tuple(self.lecturers))
        _check_instance(self)

    @classmethod
    def build(
        cls,
        students: Iterable[Iterable[int]],
        projects: Iterable[tuple[int, int]],
        lecturers: Iterable[tuple[int, Iterable[int]]],
    ) -> Instance:
        """Shorthand constructor from plain lists.

        ``projects`` holds ``(capacity, owner)`` pairs and ``lecturers`` holds
        ``(capacity, ranked_students)`` pairs.
        """
        return cls(
            tuple(StudentPref(tuple(p)) for p in students),
            tuple(ProjectSpec(c, o) for c, o in projects),
            tuple(LecturerSpec(d, tuple(ss)) for d, ss in lecturers),
        )

    @property
    def n_students(self) -> int:
        return len(self.students)

    @property
    def n_projects(self) -> int:
        return len(self.projects)

    @property
    def n_lecturers(self) -> int:
        return len(self.lecturers)

    def prefs(self, s: int) -> tuple[int, ...]:
        return self.students[s - 1].ranked_projects

    def lecturer_prefs(self, l: int) -> tuple[int, ...]:
        return self.lecturers[l - 1].ranked_students

    def owner(self, p: int) -> int:
        return self.projects[p - 1].owner

    def project_capacity(self, p: int) -> int:
        return self.projects[p - 1].capacity

    def lecturer_capacity(self, l: int) -> int:
        return self.lecturers[l - 1].capacity

    @cached_property
    def offered(self) -> tuple[tuple[int, ...], ...]:
        """``offered[k-1]`` lists the projects of lecturer ``k`` in index order."""
        out: list[list[int]] = [[] for _ in self.lecturers]
        for j, spec in enumerate(self.projects, 1):
            out[spec.owner - 1].append(j)
        return tuple(tuple(ps) for ps in out)

    @cached_property
    def student_rank(self) -> tuple[dict[int, int], ...]:
        return tuple({p: r for r, p in enumerate(sp.ranked_projects)} for sp in self.students)

    @cached_property
    def lecturer_rank(self) -> tuple[dict[int, int], ...]:
        return tuple({s: r for r, s in enumerate(ls.ranked_students)} for ls in self.lecturers)

    def rank_of_project(self, s: int, p: int) -> int:
        return self.student_rank[s - 1][p]

    def rank_of_student(self, l: int, s: int) -> int:
        return self.lecturer_rank[l - 1][s]

    def is_acceptable(self, s: int, p: int) -> bool:
        if not (1 <= s <= self.n_students and 1 <= p <= self.n_projects):
            return False
        return p in self.student_rank[s - 1] and s in self.lecturer_rank[self.owner(p) - 1]

    def to_text(self) -> str:
        return format_instance(self)


def _check_instance(inst: Instance) -> None:
    n1, n2, n3 = len(inst.students), len(inst.projects), len(inst.lecturers)
    for j, spec in enumerate(inst.projects, 1):
        if spec.capacity < 1:
            raise InstanceError(f"p{j}: capacity must be positive, got {spec.capacity}")
        if not 1 <= spec.owner <= n3:
            raise InstanceError(f"p{j}: owner l{spec.owner} is undefined")
    for k, spec in enumerate(inst.lecturers, 1):
        if spec.capacity < 1:
            raise InstanceError(f"l{k}: capacity must be positive, got {spec.capacity}")
        seen: set[int] = set()
        for s in spec.ranked_students:
            if not 1 <= s <= n1:
                raise InstanceError(f"l{k}: student s{s} is undefined")
            if s in seen:
                raise InstanceError(f"l{k}: student s{s} listed twice")
            seen.add(s)
    for i, sp in enumerate(inst.students, 1):
        seen = set()
        for p in sp.ranked_projects:
            if not 1 <= p <= n2:
                raise InstanceError(f"s{i}: project p{p} is undefined")
            if p in seen:
                raise InstanceError(f"s{i}: project p{p} listed twice")
            seen.add(p)
            k = inst.projects[p - 1].owner
            if i not in inst.lecturers[k - 1].ranked_students:
                raise InstanceError(f"s{i} lists p{p} but l{k} does not rank s{i}")


class Matching:
    """Partial map from students to projects.

    Immutable and hashable; equality is equality of the assignment maps.
    Accepts a mapping ``{student: project}`` or an iterable of pairs.
    """

    __slots__ = ("_pairs", "_map")

    def __init__(self, assignment: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = assignment.items() if isinstance(assignment, Mapping) else assignment
        m: dict[int, int] = {}
        for s, p in items:
            if s in m:
                raise ValueError(f"student s{s} assigned twice")
            m[int(s)] = int(p)
        self._pairs = tuple(sorted(m.items()))
        self._map = dict(self._pairs)

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return self._pairs

    def get(self, s: int) -> int | None:
        return self._map.get(s)

    def __getitem__(self, s: int) -> int:
        return self._map[s]

    def __contains__(self, pair) -> bool:
        s, p = pair
        return self._map.get(s) == p

    def __iter__(self):
        return iter(self._pairs)

    def __len__(self) -> int:
        return len(self._pairs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Matching) and self._pairs == other._pairs

    def __hash__(self) -> int:
        return hash(self._pairs)

    def __repr__(self) -> str:
        body = ", ".join(f"(s{s},p{p})" for s, p in self._pairs)
        return f"Matching({{{body}}})"

    def as_dict(self) -> dict[int, int]:
        return dict(self._map)

    @property
    def students(self) -> frozenset[int]:
        return frozenset(self._map)

    def by_project(self) -> dict[int, set[int]]:
        out: dict[int, set[int]] = {}
        for s, p in self._pairs:
            out.setdefault(p, set()).add(s)
        return out

    def by_lecturer(self, instance: Instance) -> dict[int, set[int]]:
        out: dict[int, set[int]] = {}
        for s, p in self._pairs:
            out.setdefault(instance.owner(p), set()).add(s)
        return out

    def replace(self, changes: Mapping[int, int | None]) -> Matching:
        m = dict(self._map)
        for s, p in changes.items():
            if p is None:
                m.pop(s, None)
            else:
                m[s] = p
        return Matching(m)

    def to_text(self) -> str:
        return format_matching(self)


def validate_matching(instance: Instance, matching: Matching) -> list[str]:
    """Return every way ``matching`` breaks the matching rules; empty if valid."""
    problems = []
    for s, p in matching:
        if not 1 <= s <= instance.n_students:
            problems.append(f"s{s} is not a student of the instance")
        elif not 1 <= p <= instance.n_projects:
            problems.append(f"p{p} is not a project of the instance")
        elif not instance.is_acceptable(s, p):
            problems.append(f"(s{s},p{p}) is not an acceptable pair")
    load_p: dict[int, int] = {}
    load_l: dict[int, int] = {}
    for s, p in matching:
        if 1 <= p <= instance.n_projects:
            load_p[p] = load_p.get(p, 0) + 1
            k = instance.owner(p)
            load_l[k] = load_l.get(k, 0) + 1
    for p in sorted(load_p):
        if load_p[p] > instance.project_capacity(p):
            problems.append(
                f"project p{p} capacity {instance.project_capacity(p)} exceeded ({load_p[p]} assigned)"
            )
    for k in sorted(load_l):
        if load_l[k] > instance.lecturer_capacity(k):
            problems.append(
                f"lecturer l{k} capacity {instance.lecturer_capacity(k)} exceeded ({load_l[k]} assigned)"
            )
    return problems


# -- text formats -----------------------------------------------------------

_HEADERS = ("students", "projects", "lecturers")
_ID = re.compile(r"([spl])(\d+)\Z")


def _tokens(line: str):
    """Yield ``(column, token)`` for whitespace-separated tokens (1-based columns)."""
    for m in re.finditer(r"\S+", line):
        yield m.start() + 1, m.group()


def _ident(tok: str, kind: str, lineno: int, col: int) -> int:
    m = _ID.match(tok)
    if not m or m.group(1) != kind:
        raise ParseError(f"expected {kind}<number>, got {tok!r}", lineno, col)
    value = int(m.group(2))
    if value < 1:
        raise ParseError(f"identifiers are 1-based, got {tok!r}", lineno, col)
    return value


def _int(tok: str, lineno: int, col: int) -> int:
    if not re.fullmatch(r"[+-]?\d+", tok):
        raise ParseError(f"expected an integer, got {tok!r}", lineno, col)
    return int(tok)


def _keyword(toks, i, word, lineno, line_len) -> None:
    if i >= len(toks):
        raise ParseError(f"expected {word!r}", lineno, line_len + 1)
    col, tok = toks[i]
    if tok != word:
        raise ParseError(f"expected {word!r}, got {tok!r}", lineno, col)


def parse_instance(text: str | bytes) -> Instance:
    """Parse the instance grammar.  Raises ParseError or InstanceError."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8 ({exc.reason} at byte {exc.start})") from None

    counts: dict[str, int] = {}
    students: dict[int, tuple[int, ...]] = {}
    projects: dict[int, tuple[int, int]] = {}
    lecturers: dict[int, tuple[int, tuple[int, ...]]] = {}

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = list(_tokens(line))
        if not toks:
            continue
        col, head = toks[0]

        if len(counts) < 3:
            want = _HEADERS[len(counts)]
            if head != want:
                raise ParseError(f"expected header {want!r}, got {head!r}", lineno, col)
            if len(toks) != 2:
                raise ParseError(f"header {want!r} takes exactly one count", lineno, col)
            n = _int(toks[1][1], lineno, toks[1][0])
            if n < 0:
                raise ParseError(f"{want} count must be non-negative", lineno, toks[1][0])
            counts[want] = n
            continue

        if not head.endswith(":"):
            raise ParseError(f"expected '<id>:' at start of line, got {head!r}", lineno, col)
        label = head[:-1]
        m = _ID.match(label)
        if not m:
            raise ParseError(f"bad entity label {label!r}", lineno, col)
        kind, idx = m.group(1), int(m.group(2))
        limit = counts[{"s": "students", "p": "projects", "l": "lecturers"}[kind]]
        if not 1 <= idx <= limit:
            raise ParseError(f"{label} is outside 1..{limit}", lineno, col)
        rest = toks[1:]

        if kind == "s":
            if idx in students:
                raise ParseError(f"duplicate line for {label}", lineno, col)
            ranked = []
            for c, t in rest:
                p = _ident(t, "p", lineno, c)
                if p > counts["projects"]:
                    raise ParseError(f"reference to undefined project {t}", lineno, c)
                if p in ranked:
                    raise ParseError(f"{t} appears twice in {label}'s list", lineno, c)
                ranked.append(p)
            students[idx] = tuple(ranked)
        elif kind == "p":
            if idx in projects:
                raise ParseError(f"{label} declared twice (a project has exactly one owner)", lineno, col)
            _keyword(rest, 0, "cap", lineno, len(line))
            if len(rest) < 2:
                raise ParseError("missing capacity", lineno, len(line) + 1)
            cap = _int(rest[1][1], lineno, rest[1][0])
            if cap < 1:
                raise ParseError(f"capacity must be positive, got {cap}", lineno, rest[1][0])
            _keyword(rest, 2, "lecturer", lineno, len(line))
            if len(rest) != 4:
                c = rest[4][0] if len(rest) > 4 else len(line) + 1
                raise ParseError("expected exactly one owning lecturer", lineno, c)
            k = _ident(rest[3][1], "l", lineno, rest[3][0])
            if k > counts["lecturers"]:
                raise ParseError(f"reference to undefined lecturer {rest[3][1]}", lineno, rest[3][0])
            projects[idx] = (cap, k)
        else:
            if idx in lecturers:
                raise ParseError(f"duplicate line for {label}", lineno, col)
            _keyword(rest, 0, "cap", lineno, len(line))
            if len(rest) < 2:
                raise ParseError("missing capacity", lineno, len(line) + 1)
            cap = _int(rest[1][1], lineno, rest[1][0])
            if cap < 1:
                raise ParseError(f"capacity must be positive, got {cap}", lineno, rest[1][0])
            _keyword(rest, 2, "prefs", lineno, len(line))
            ranked = []
            for c, t in rest[3:]:
                s = _ident(t, "s", lineno, c)
                if s > counts["students"]:
                    raise ParseError(f"reference to undefined student {t}", lineno, c)
                if s in ranked:
                    raise ParseError(f"{t} appears twice in {label}'s list", lineno, c)
                ranked.append(s)
            lecturers[idx] = (cap, tuple(ranked))

    if len(counts) < 3:
        raise ParseError(f"missing header {_HEADERS[len(counts)]!r}")
    for kind, table, name in (("s", students, "students"), ("p", projects, "projects"), ("l", lecturers, "lecturers")):
        if len(table) < counts[name]:
            first = next(i for i in range(1, counts[name] + 1) if i not in table)
            what = "project with no owner" if kind == "p" else "missing line"
            raise ParseError(f"{what}: {kind}{first}")

    try:
        return Instance(
            tuple(StudentPref(students[i]) for i in range(1, counts["students"] + 1)),
            tuple(ProjectSpec(*projects[j]) for j in range(1, counts["projects"] + 1)),
            tuple(LecturerSpec(*lecturers[k]) for k in range(1, counts["lecturers"] + 1)),
        )
    except InstanceError as exc:
        raise ParseError(str(exc)) from None


def format_instance(instance: Instance) -> str:
    lines = [
        f"students {instance.n_students}",
        f"projects {instance.n_projects}",
        f"lecturers {instance.n_lecturers}",
    ]
    for i, sp in enumerate(instance.students, 1):
        lines.append(" ".join([f"s{i}:"] + [f"p{p}" for p in sp.ranked_projects]))
    for j, spec in enumerate(instance.projects, 1):
        lines.append(f"p{j}: cap {spec.capacity} lecturer l{spec.owner}")
    for k, spec in enumerate(instance.lecturers, 1):
        lines.append(" ".join([f"l{k}: cap {spec.capacity} prefs"] + [f"s{s}" for s in spec.ranked_students]))
    return "\n".join(lines) + "\n"


def parse_matching(text: str | bytes) -> Matching:
    """Parse ``s<i> p<j>`` lines.  Comments and blank lines are ignored."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8 ({exc.reason} at byte {exc.start})") from None
    pairs: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = list(_tokens(raw.split("#", 1)[0]))
        if not toks:
            continue
        if len(toks) != 2:
            raise ParseError("expected 's<i> p<j>'", lineno, toks[0][0])
        s = _ident(toks[0][1], "s", lineno, toks[0][0])
        p = _ident(toks[1][1], "p", lineno, toks[1][0])
        if s in pairs:
            raise ParseError(f"s{s} assigned twice", lineno, toks[0][0])
        pairs[s] = p
    return Matching(pairs)


def format_matching(matching: Matching) -> str:
    return "".join(f"s{s} p{p}\n" for s, p in matching)
