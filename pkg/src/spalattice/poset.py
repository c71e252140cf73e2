"""The lattice of stable matchings and the meta-rotation poset.

The lattice is explored breadth-first from the student-optimal matching by
eliminating every exposed meta-rotation.  Each matching is labelled with the
set of rotations eliminated on the way to it; the must-precede order on
rotations, its closed subsets, and the closed-set/matching bijection are all
derived from that labelling.
"""

from __future__ import annotations

import json
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

from .model import Instance, Matching, format_matching
from .rotations import MetaRotation, eliminate, exposed_rotations, next_project
from .solvers import lecturer_optimal, student_optimal
from .stability import UnstableMatchingError, blocking_pairs, is_stable, weakly_preferred

__all__ = [
    "LatticeError",
    "EliminationLattice",
    "RotationPoset",
    "explore_lattice",
    "build_poset",
    "closed_subsets",
    "is_closed",
    "matching_from_closed_set",
    "closed_set_of_matching",
    "find_target",
    "export_poset",
    "read_poset_json",
]


class LatticeError(RuntimeError):
    """An internal consistency check failed during lattice construction."""


@dataclass
class EliminationLattice:
    instance: Instance
    matchings: list[Matching]
    rotations: list[MetaRotation]
    edges: list[tuple[int, int, int]]  # (from matching, rotation id, to matching)
    closed: list[frozenset[int]]
    exposed: list[tuple[int, ...]]  # rotation ids exposed in each matching
    index: dict[Matching, int] = field(repr=False)
    rotation_ids: dict[MetaRotation, int] = field(repr=False)

    @property
    def source(self) -> Matching:
        return self.matchings[0]

    @property
    def sink(self) -> Matching:
        sinks = [m for i, m in enumerate(self.matchings) if not self.exposed[i]]
        if len(sinks) != 1:
            raise LatticeError(f"expected one sink, found {len(sinks)}")
        return sinks[0]

    def stable_matchings(self) -> list[Matching]:
        return sorted(self.matchings, key=format_matching)

    def closed_set(self, matching: Matching) -> frozenset[int]:
        return self.closed[self.index[matching]]


def explore_lattice(instance: Instance, check: bool = True) -> EliminationLattice:
    """Every stable matching reachable from the student-optimal one.

    With ``check`` on, every elimination result is re-verified stable and
    strictly dominated by its parent.
    """
    top, bottom = student_optimal(instance), lecturer_optimal(instance)
    matchings = [top]
    index = {top: 0}
    closed = [frozenset()]
    exposed: list[tuple[int, ...]] = []
    rotations: list[MetaRotation] = []
    rotation_ids: dict[MetaRotation, int] = {}
    edges = []

    queue = deque([0])
    while queue:
        i = queue.popleft()
        m = matchings[i]
        here = []
        for rho in exposed_rotations(instance, m, bottom):
            rid = rotation_ids.setdefault(rho, len(rotations))
            if rid == len(rotations):
                rotations.append(rho)
            here.append(rid)
            if rid in closed[i]:
                raise LatticeError(f"{rho} exposed again after being eliminated")
            child = eliminate(instance, m, rho)
            label = closed[i] | {rid}
            j = index.get(child)
            if j is None:
                if check:
                    if not is_stable(instance, child):
                        raise LatticeError(f"eliminating {rho} gave an unstable matching")
                    if not weakly_preferred(instance, m, child) or child == m:
                        raise LatticeError(f"eliminating {rho} did not move strictly down")
                j = len(matchings)
                matchings.append(child)
                index[child] = j
                closed.append(label)
                queue.append(j)
            elif closed[j] != label:
                raise LatticeError(
                    f"matching {j} reached with rotation sets {sorted(closed[j])} and {sorted(label)}"
                )
            edges.append((i, rid, j))
        exposed.append(tuple(here))

    lattice = EliminationLattice(instance, matchings, rotations, edges, closed, exposed, index, rotation_ids)
    if lattice.sink != bottom:
        raise LatticeError("exploration did not end at the lecturer-optimal matching")
    if len(lattice.closed_set(bottom)) != len(rotations):
        raise LatticeError("some rotation is not eliminated on the way to the bottom")
    return lattice


@dataclass
class RotationPoset:
    """Rotations with dense ids, the order ``leq[a, b]`` (a must come no
    later than b), and its cover relation."""

    rotations: list[MetaRotation]
    leq: np.ndarray
    hasse: list[tuple[int, int]]

    def __len__(self) -> int:
        return len(self.rotations)

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def predecessors(self, b: int) -> set[int]:
        return {a for a in range(len(self.rotations)) if a != b and self.leq[a, b]}

    def leq_pairs(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(self.leq))]

    def id_of(self, rotation: MetaRotation) -> int:
        return self.rotations.index(rotation)


def _transitive_closure(rel: np.ndarray) -> np.ndarray:
    reach = rel.copy()
    for k in range(len(reach)):
        reach |= reach[:, k, None] & reach[None, k, :]
    return reach


def _cover_edges(leq: np.ndarray) -> list[tuple[int, int]]:
    strict = leq & ~np.eye(len(leq), dtype=bool)
    two_step = (strict.astype(np.int64) @ strict.astype(np.int64)) > 0
    cover = strict & ~two_step
    return [(int(a), int(b)) for a, b in zip(*np.nonzero(cover))]


def build_poset(lattice: EliminationLattice) -> RotationPoset:
    """``a`` must precede ``b`` when ``a`` has been eliminated in every lattice
    matching where ``b`` is exposed."""
    n = len(lattice.rotations)
    must: list[frozenset[int] | None] = [None] * n
    for i, ids in enumerate(lattice.exposed):
        for b in ids:
            must[b] = lattice.closed[i] if must[b] is None else must[b] & lattice.closed[i]
    rel = np.eye(n, dtype=bool)
    for b, before in enumerate(must):
        if before is None:
            raise LatticeError(f"rotation {b} is never exposed")
        for a in before:
            rel[a, b] = True
    leq = _transitive_closure(rel)
    strict = leq & ~np.eye(n, dtype=bool)
    if (strict & strict.T).any():
        raise LatticeError("must-precede relation has a cycle")
    return RotationPoset(list(lattice.rotations), leq, _cover_edges(leq))


def is_closed(poset: RotationPoset, ids: Iterable[int]) -> bool:
    chosen = set(ids)
    n = len(poset)
    if any(not 0 <= b < n for b in chosen):
        return False
    return all(poset.predecessors(b) <= chosen for b in chosen)


def closed_subsets(poset: RotationPoset) -> list[frozenset[int]]:
    """All downward-closed id sets, ordered by their sorted id tuples.

    Walks a linear extension of the order, deciding membership of each
    rotation in turn; a rotation may join only if all its predecessors have.
    """
    n = len(poset)
    order = sorted(range(n), key=lambda b: (len(poset.predecessors(b)), b))
    preds = [poset.predecessors(b) for b in range(n)]
    out: list[frozenset[int]] = []

    def grow(i: int, chosen: frozenset[int]) -> None:
        if i == n:
            out.append(chosen)
            return
        b = order[i]
        grow(i + 1, chosen)
        if preds[b] <= chosen:
            grow(i + 1, chosen | {b})

    grow(0, frozenset())
    return sorted(out, key=lambda c: tuple(sorted(c)))


def matching_from_closed_set(instance: Instance, poset: RotationPoset, ids: Iterable[int]) -> Matching:
    """Eliminate the rotations of a closed set from the student-optimal matching.

    The result is computed twice, always taking the smallest and always the
    largest eligible id, and the two must agree.
    """
    wanted = frozenset(ids)
    if not is_closed(poset, wanted):
        raise ValueError(f"rotation set {sorted(wanted)} is not closed")
    bottom = lecturer_optimal(instance)
    lookup = {rho: i for i, rho in enumerate(poset.rotations)}
    results = []
    for pick in (min, max):
        m = student_optimal(instance)
        done: set[int] = set()
        while done != wanted:
            ready = [lookup[r] for r in exposed_rotations(instance, m, bottom) if lookup.get(r) in wanted - done]
            if not ready:
                raise LatticeError(f"no rotation of {sorted(wanted - done)} is exposed")
            rid = pick(ready)
            m = eliminate(instance, m, poset.rotations[rid])
            done.add(rid)
        results.append(m)
    if results[0] != results[1]:
        raise LatticeError("elimination order changed the resulting matching")
    return results[0]


def closed_set_of_matching(lattice: EliminationLattice, matching: Matching) -> frozenset[int]:
    try:
        return lattice.closed_set(matching)
    except KeyError:
        raise ValueError(f"{matching!r} is not a stable matching of this lattice") from None


def find_target(instance: Instance, target: Matching) -> list[MetaRotation]:
    """Rotations whose elimination, in order, leads from the student-optimal
    matching to ``target``.

    At each step the successor walk starts at the smallest-indexed student
    whose project differs from ``target``; the cycle it falls into is the
    exposed rotation to eliminate next.
    """
    bps = blocking_pairs(instance, target)
    if bps:
        raise UnstableMatchingError(bps)
    m = student_optimal(instance)
    if m.students != target.students:
        raise LatticeError("target assigns different students than the student-optimal matching")
    sequence: list[MetaRotation] = []
    for _ in range(sum(len(instance.prefs(s)) for s in range(1, instance.n_students + 1)) + 1):
        differing = [s for s, p in m if target.get(s) != p]
        if not differing:
            return sequence
        seen: dict[int, int] = {}
        walk = []
        v = differing[0]
        while v not in seen:
            seen[v] = len(walk)
            walk.append(v)
            step = next_project(instance, m, v)
            if step is None:
                raise LatticeError(f"s{v} differs from the target but has no next project")
            v = step.displaced
        rho = MetaRotation(tuple((s, m[s]) for s in walk[seen[v]:]))
        m = eliminate(instance, m, rho)
        sequence.append(rho)
    raise LatticeError("target search did not terminate")


# -- export -----------------------------------------------------------------

def export_poset(poset: RotationPoset, fmt: str = "dot") -> str:
    if fmt == "dot":
        lines = ["digraph poset {"]
        for i, rho in enumerate(poset.rotations):
            lines.append(f'  r{i} [label="{rho}"];')
        for a, b in poset.hasse:
            lines.append(f"  r{a} -> r{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        doc = {
            "rotations": [{"id": i, "pairs": [list(pr) for pr in rho.pairs]} for i, rho in enumerate(poset.rotations)],
            "hasse": [list(e) for e in poset.hasse],
            "leq": [list(e) for e in poset.leq_pairs()],
        }
        return json.dumps(doc) + "\n"
    raise ValueError(f"unknown poset format {fmt!r}; expected 'dot' or 'json'")


def read_poset_json(text: str) -> RotationPoset:
    doc = json.loads(text)
    rots = sorted(doc["rotations"], key=lambda r: r["id"])
    if [r["id"] for r in rots] != list(range(len(rots))):
        raise ValueError("rotation ids must be dense from 0")
    rotations = [MetaRotation(tuple(tuple(p) for p in r["pairs"])) for r in rots]
    leq = np.zeros((len(rotations), len(rotations)), dtype=bool)
    for a, b in doc["leq"]:
        leq[a, b] = True
    return RotationPoset(rotations, leq, [tuple(e) for e in doc["hasse"]])
