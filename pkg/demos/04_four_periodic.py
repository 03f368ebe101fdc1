"""Experimental: a 4-stage merger obtained by splitting each register in k/2-1 parts.

Run: python3 demos/04_four_periodic.py
"""
from permerge import build_m4, build_p4, delay
from permerge.oracle import failure_profile, pass_bound

for k in (4, 6, 8):
    p = build_p4(k)
    m = build_m4(k)
    profile = failure_profile(m, "two_sorted", pass_bound(m.n_registers))
    print(
        f"k={k}: delay(P'_k)={delay(p)}, M'_k has {m.n_registers} registers; "
        f"unsorted outputs per pass count {profile}"
    )
