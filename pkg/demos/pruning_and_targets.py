"""
Pruning lists and steering toward a target
==========================================

No stable matching can give a student something better than its
student-optimal project or worse than its lecturer-optimal one, so
everything outside that window can go.  Given any stable matching, the
rotations leading to it can then be found one cycle at a time.
"""

from pathlib import Path

from spalattice import (
    eliminate,
    explore_lattice,
    find_target,
    parse_instance,
    reduce_instance,
    student_optimal,
)

data = Path(__file__).resolve().parent.parent / "data"
instance = parse_instance((data / "nine_students.txt").read_text())

reduced = reduce_instance(instance)
for s in range(1, instance.n_students + 1):
    before = " ".join(f"p{p}" for p in instance.prefs(s))
    after = " ".join(f"p{p}" for p in reduced.prefs(s))
    print(f"s{s}: {before:<14} -> {after}")

###############################################################################
# Pick a stable matching deep in the lattice and ask how to get there.  Each
# step follows the chain of displaced students from the first student still
# off target until it closes into a cycle, then eliminates that cycle.

lattice = explore_lattice(instance)
target = lattice.matchings[-1]
print("\ntarget:", target)

current = student_optimal(instance)
for rho in find_target(instance, target):
    current = eliminate(instance, current, rho)
    print(f"  eliminate {rho}")
print("reached target:", current == target)
