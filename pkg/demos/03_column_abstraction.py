"""Follow a merge through the ones-per-column view of M_k.

A 2-sorted 0-1 input keeps every column of the n_k x b_k register matrix
sorted, so the column ones counts describe the whole state. Each stage of M_k
acts on that short vector through one of three maps.

Run: python3 demos/03_column_abstraction.py
"""
import numpy as np

from permerge import columns as C

k = 5
rng = np.random.default_rng(7)
c = C.random_two_flat(k, rng)
rep = C.check_trajectory(k, c)
print(f"start {c}  balanced={rep.balanced}")
for i, state in enumerate(rep.states):
    tag = "flat" if C.is_flat(state) else ""
    print(f"{i:>3} {state} {tag}")
print("all claims hold along the trajectory:", rep.ok)

summary = C.sweep(4)
print(summary.result_line(), f"(worst flat-from {summary.worst_flat_from})")
