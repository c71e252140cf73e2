"""
First steps: instances, matchings and blocking pairs
=====================================================

Load a small allocation problem, compute the two extreme stable matchings,
and see what a blocking pair looks like.
"""

from pathlib import Path

from spalattice import (
    Matching,
    blocking_pairs,
    compare_for_student,
    dominates,
    lecturer_optimal,
    parse_instance,
    student_optimal,
)

data = Path(__file__).resolve().parent.parent / "data"

# Four students, four single-seat projects, one project per lecturer.
instance = parse_instance((data / "four_students.txt").read_text())
print(instance.to_text())

###############################################################################
# The student-proposing algorithm gives every student the best project it can
# have in any stable matching; the lecturer-proposing one gives the worst.

best = student_optimal(instance)
worst = lecturer_optimal(instance)
print("student-optimal:", best)
print("lecturer-optimal:", worst)

for s in range(1, instance.n_students + 1):
    print(f"  s{s}: {compare_for_student(instance, best, worst, s).value}")
print("best dominates worst:", dominates(instance, best, worst))

###############################################################################
# Swap two students and the result is no longer stable.  Each blocking pair
# names the condition that fired: (a) project and lecturer both have room,
# (b) the project has room but the lecturer is full, (c) the project is full.

shaky = Matching({1: 1, 2: 4, 3: 2, 4: 3})
for bp in blocking_pairs(instance, shaky):
    print(bp)
