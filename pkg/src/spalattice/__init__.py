"""Stable matchings of Student-Project Allocation instances (SPA-S) and the
meta-rotation structure that generates all of them."""

from .model import (
    Instance,
    InstanceError,
    LecturerSpec,
    Matching,
    ParseError,
    ProjectSpec,
    StudentPref,
    format_instance,
    format_matching,
    parse_instance,
    parse_matching,
    validate_matching,
)
from .poset import (
    EliminationLattice,
    LatticeError,
    RotationPoset,
    build_poset,
    closed_set_of_matching,
    closed_subsets,
    explore_lattice,
    export_poset,
    find_target,
    matching_from_closed_set,
    read_poset_json,
)
from .rotations import (
    MetaRotation,
    Mode,
    NextStep,
    RotationDigraph,
    build_digraph,
    eliminate,
    exposed_rotations,
    next_project,
    reduce_instance,
    worst_assigned,
    worst_assigned_lecturer,
)
from .solvers import (
    EnumerationLimitError,
    StableSet,
    brute_force_all_stable,
    lecturer_optimal,
    random_instance,
    student_optimal,
)
from .stability import (
    BlockingPair,
    InvalidMatchingError,
    UnstableMatchingError,
    Verdict,
    blocking_pairs,
    compare_for_student,
    dominates,
    is_stable,
    lecturer_prefers,
    unpopular_projects_audit,
)

__version__ = "0.1.0"
