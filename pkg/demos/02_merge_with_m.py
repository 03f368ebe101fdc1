"""Merge two sorted lists with the 3-stage network M_k.

The first list goes on the even registers and the second on the odd ones.
After 2k-5 passes through the three stages the registers hold the merged output.

Run: python3 demos/02_merge_with_m.py
"""
import random

from permerge import build_m, merge_oracle, run_periodic, verify_merging

k = 4
net = build_m(k)
n = net.n_registers
rng = random.Random(1)
a = sorted(rng.randrange(100) for _ in range((n + 1) // 2))
b = sorted(rng.randrange(100) for _ in range(n // 2))
x = [0] * n
x[0::2], x[1::2] = a, b

out = run_periodic(net, x, 2 * k - 5)
print("A      ", a)
print("B      ", b)
print("output ", list(out))
print("matches a two-finger merge:", out == merge_oracle(a, b))

# The zero-one principle reduces the general claim to (n/2+1)^2 binary inputs.
for passes in range(1, 2 * k - 4):
    print(verify_merging(net, passes).result_line())
