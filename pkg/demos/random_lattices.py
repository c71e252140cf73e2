"""
How big do lattices get?
========================

Generate random instances, enumerate them two independent ways, and
tabulate lattice sizes.  Lecturers that rank students against the grain of
the students' own preferences produce more conflict and larger lattices.
"""

import numpy as np

from spalattice import brute_force_all_stable, explore_lattice, random_instance

SEEDS = range(500)

for contrarian in (0.0, 0.5, 1.0):
    sizes = []
    for seed in SEEDS:
        inst = random_instance(seed, n1=7, n2=5, n3=3, contrarian=contrarian)
        lattice = explore_lattice(inst)
        assert set(lattice.matchings) == set(brute_force_all_stable(inst))
        sizes.append(len(lattice.matchings))
    sizes = np.array(sizes)
    counts = np.bincount(sizes)
    print(f"contrarian={contrarian:.1f}  mean={sizes.mean():.3f}  max={sizes.max()}")
    for k in np.nonzero(counts)[0]:
        print(f"  {k:2d} matchings: {counts[k]:4d} {'#' * (counts[k] // 10)}")

###############################################################################
# The biggest lattice in the last batch, for a closer look with the CLI:
#
#     spalattice poset --format dot biggest.txt | dot -Tpng > poset.png

biggest = int(np.argmax(sizes))
print(f"\nseed {biggest}:")
print(random_instance(biggest, n1=7, n2=5, n3=3, contrarian=1.0).to_text())
