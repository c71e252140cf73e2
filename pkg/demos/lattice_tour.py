"""
A tour of the lattice
=====================

Every stable matching of an instance is reached from the student-optimal one
by eliminating meta-rotations.  This script walks the nine-student example:
the matchings, the rotations that connect them, the order the rotations must
respect, and how each closed set of rotations names exactly one matching.
"""

from pathlib import Path

from spalattice import (
    build_poset,
    closed_subsets,
    explore_lattice,
    export_poset,
    matching_from_closed_set,
    parse_instance,
)

data = Path(__file__).resolve().parent.parent / "data"
instance = parse_instance((data / "nine_students.txt").read_text())

###############################################################################
# Breadth-first exploration, starting at the student-optimal matching.

lattice = explore_lattice(instance)
print(f"{len(lattice.matchings)} stable matchings, {len(lattice.rotations)} meta-rotations\n")
for rid, rho in enumerate(lattice.rotations):
    print(f"  r{rid} = {rho}")

print("\nEliminations:")
for i, rid, j in lattice.edges:
    print(f"  M{i} --r{rid}--> M{j}")

###############################################################################
# A rotation must precede another when it has already been eliminated in
# every matching where the other one is exposed.  The cover relation of that
# order is small enough to draw.

poset = build_poset(lattice)
print("\nHasse diagram (Graphviz):")
print(export_poset(poset, "dot"))

###############################################################################
# Downward-closed sets of rotations and stable matchings are in one-to-one
# correspondence.

for ids in closed_subsets(poset):
    m = matching_from_closed_set(instance, poset, ids)
    label = "{" + ", ".join(f"r{i}" for i in sorted(ids)) + "}"
    print(f"{label:>20}  ->  {m}")
