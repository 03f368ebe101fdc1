"""Build the three network families for k=5 and look at their shape.

Run: python3 demos/01_build_and_inspect.py
"""
from permerge import build_cw, build_m, build_p, compact_form, delay
from permerge.render import to_ascii

for net in (build_cw(5), build_p(5), build_m(5)):
    sizes = [len(s) for s in net.stages]
    print(f"{net.name}: {net.n_registers} registers, {net.depth} stages {sizes}, delay {delay(net)}")

# P_5 has delay 3, so folding its seven stages three apart gives a 3-stage network.
folded = compact_form(build_p(5))
print(f"compact form of P_5: {folded.depth} stages on {folded.n_registers} registers")

# Small networks are readable as text: 'o' is the min end, 'v' the max end.
print()
print(to_ascii(build_cw(3)))
