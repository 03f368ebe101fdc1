"""Text renderings of a network: Graphviz DOT and an ASCII stage diagram."""
from __future__ import annotations

from .netcore import Comparator, Network


def to_dot(net: Network) -> str:
    name = (net.name or "network").replace('"', "'")
    lines = [f'digraph "{name}" {{', "  rankdir=TB;", "  node [shape=point];"]
    for r in range(net.n_registers):
        lines.append(f'  r{r} [xlabel="{r}"];')
    for q, c in net.comparators():
        lines.append(f'  r{c.lo} -> r{c.hi} [label="{q}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _columns(comps: list[Comparator]) -> list[list[Comparator]]:
    """Greedy packing of comparators into drawing columns with non-overlapping spans."""
    cols: list[list[Comparator]] = []
    ends: list[int] = []
    for c in sorted(comps, key=lambda c: (c.lo, c.hi)):
        lo, hi = min(c), max(c)
        for i, end in enumerate(ends):
            if end < lo:
                cols[i].append(c)
                ends[i] = hi
                break
        else:
            cols.append([c])
            ends.append(hi)
    return cols


def to_ascii(net: Network) -> str:
    """One text row per register; ``o`` marks the min end of a comparator and
    ``v`` the max end, ``|`` a comparator passing by, ``:`` a stage boundary."""
    n = net.n_registers
    width = len(str(max(n - 1, 0)))
    grid = [[] for _ in range(n)]
    for q, st in enumerate(net.stages):
        if q:
            for row in grid:
                row.append(" : ")
        for col in _columns(st.sorted()):
            cells = ["-"] * n
            for c in col:
                lo, hi = min(c), max(c)
                for r in range(lo + 1, hi):
                    cells[r] = "|"
                cells[c.lo] = "o"
                cells[c.hi] = "v"
            for r in range(n):
                grid[r].append(cells[r])
    lines = [f"{r:>{width}} -" + "".join(grid[r]) + "-" for r in range(n)]
    return "\n".join(lines) + "\n"


def render(net: Network, style: str = "ascii") -> str:
    if style == "dot":
        return to_dot(net)
    if style == "ascii":
        return to_ascii(net)
    raise ValueError(f"unknown render style {style!r}")
