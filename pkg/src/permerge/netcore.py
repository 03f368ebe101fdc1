"""Comparator networks: stages, execution, periodicity, delay, union and compact form.

Registers are indexed from 0. Stage indices reported by :func:`fst`, :func:`lst`
and carried in provenance maps are 1-based, matching the usual way of counting
network stages.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np


class NetworkError(ValueError):
    """Structural problem in a comparator network."""


class StageConflictError(NetworkError):
    """Two stages that must be merged touch a common register."""

    def __init__(self, index: int, registers: Iterable[int]):
        self.index = index
        self.registers = sorted(registers)
        super().__init__(
            f"stage register conflict at stage {index}: registers {self.registers}"
        )


class Comparator(NamedTuple):
    """``[lo:hi]``: after the exchange ``lo`` holds the minimum and ``hi`` the maximum."""

    lo: int
    hi: int

    @property
    def standard(self) -> bool:
        return self.lo < self.hi

    def __str__(self) -> str:
        return f"{self.lo}:{self.hi}"


@dataclass(frozen=True)
class Stage:
    """A set of comparators on pairwise disjoint registers."""

    comparators: frozenset[Comparator] = frozenset()

    def __post_init__(self):
        comps = frozenset(Comparator(int(a), int(b)) for a, b in self.comparators)
        seen: set[int] = set()
        for c in comps:
            if c.lo == c.hi:
                raise NetworkError(f"comparator {c} connects a register to itself")
            if c.lo in seen or c.hi in seen:
                raise NetworkError(f"comparator {c} reuses a register within one stage")
            seen.update(c)
        object.__setattr__(self, "comparators", comps)

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]]) -> "Stage":
        return cls(frozenset(Comparator(*p) for p in pairs))

    def __len__(self) -> int:
        return len(self.comparators)

    def __iter__(self):
        return iter(self.sorted())

    def sorted(self) -> list[Comparator]:
        return sorted(self.comparators)

    @cached_property
    def index_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(lo, hi) register index arrays, used by the vectorised runners."""
        comps = self.sorted()
        lo = np.fromiter((c.lo for c in comps), dtype=np.intp, count=len(comps))
        hi = np.fromiter((c.hi for c in comps), dtype=np.intp, count=len(comps))
        return lo, hi


@dataclass(frozen=True)
class Network:
    """An ``n_registers``-register network given as an ordered list of stages.

    ``period`` is the declared period, if any; it is checked structurally
    (stage ``i`` equals stage ``i + period`` as a set). ``provenance`` maps
    ``(stage index, comparator)`` to the stage index of some source network
    the comparator was taken from; it takes no part in equality.
    """

    n_registers: int
    stages: tuple[Stage, ...] = ()
    period: int | None = None
    name: str = field(default="", compare=False)
    provenance: Mapping[tuple[int, Comparator], int] | None = field(
        default=None, compare=False, hash=False, repr=False
    )

    def __post_init__(self):
        stages = tuple(s if isinstance(s, Stage) else Stage.of(s) for s in self.stages)
        object.__setattr__(self, "stages", stages)
        if self.n_registers < 0:
            raise NetworkError("negative register count")
        for q, st in enumerate(stages, start=1):
            for c in st.comparators:
                if not (0 <= c.lo < self.n_registers and 0 <= c.hi < self.n_registers):
                    raise NetworkError(
                        f"comparator {c} in stage {q} is outside [0, {self.n_registers})"
                    )
        if self.period is not None:
            p = self.period
            if p < 1:
                raise NetworkError(f"period must be positive, got {p}")
            for i in range(len(stages) - p):
                if stages[i] != stages[i + p]:
                    raise NetworkError(
                        f"declared period {p} broken: stage {i + 1} differs from stage {i + 1 + p}"
                    )

    @property
    def depth(self) -> int:
        return len(self.stages)

    @property
    def size(self) -> int:
        return sum(len(s) for s in self.stages)

    def comparators(self) -> list[tuple[int, Comparator]]:
        """All comparators as ``(1-based stage index, comparator)``, in stage order."""
        return [(q, c) for q, st in enumerate(self.stages, start=1) for c in st.sorted()]

    def all_standard(self) -> bool:
        return all(c.standard for _, c in self.comparators())

    def with_period(self, period: int | None, name: str | None = None) -> "Network":
        return Network(
            self.n_registers,
            self.stages,
            period,
            self.name if name is None else name,
            self.provenance,
        )


def regs(stage: Stage | Iterable[tuple[int, int]]) -> set[int]:
    comps = stage.comparators if isinstance(stage, Stage) else stage
    out: set[int] = set()
    for lo, hi in comps:
        out.add(lo)
        out.add(hi)
    return out


def _usage(net: Network) -> dict[int, tuple[int, int]]:
    span: dict[int, tuple[int, int]] = {}
    for q, st in enumerate(net.stages, start=1):
        for r in regs(st):
            first, _ = span.get(r, (q, q))
            span[r] = (first, q)
    return span


def fst(j: int, net: Network) -> int:
    """First (1-based) stage touching register ``j``."""
    try:
        return _usage(net)[j][0]
    except KeyError:
        raise NetworkError(f"register unused: {j}") from None


def lst(j: int, net: Network) -> int:
    """Last (1-based) stage touching register ``j``."""
    try:
        return _usage(net)[j][1]
    except KeyError:
        raise NetworkError(f"register unused: {j}") from None


def delay(net: Network) -> int:
    """Longest stage span of any register; untouched registers are ignored."""
    return max((b - a + 1 for a, b in _usage(net).values()), default=0)


def union(a: Network, b: Network) -> Network:
    """Stage-wise union; the shallower network is padded with empty stages."""
    if a.n_registers != b.n_registers:
        raise NetworkError(
            f"register counts differ: {a.n_registers} vs {b.n_registers}"
        )
    stages = []
    for q in range(max(a.depth, b.depth)):
        sa = a.stages[q] if q < a.depth else Stage()
        sb = b.stages[q] if q < b.depth else Stage()
        clash = regs(sa) & regs(sb)
        if clash:
            raise StageConflictError(q + 1, clash)
        stages.append(Stage(sa.comparators | sb.comparators))
    return Network(a.n_registers, tuple(stages))


def compact_form(net: Network) -> Network:
    """Fold a delay-``D`` network onto ``D`` stages: stage ``q`` collects stages ``q, q+D, ...``.

    The result declares period ``D`` and records, for every comparator, the
    original stage it came from.
    """
    d = delay(net)
    if d == 0:
        return Network(net.n_registers, (), None, net.name, {})
    buckets: list[set[Comparator]] = [set() for _ in range(d)]
    used: list[set[int]] = [set() for _ in range(d)]
    provenance: dict[tuple[int, Comparator], int] = {}
    for q, st in enumerate(net.stages, start=1):
        t = (q - 1) % d
        clash = used[t] & regs(st)
        if clash:
            raise StageConflictError(t + 1, clash)
        used[t] |= regs(st)
        buckets[t] |= st.comparators
        for c in st.comparators:
            provenance[(t + 1, c)] = q
    return Network(
        net.n_registers,
        tuple(Stage(frozenset(b)) for b in buckets),
        d,
        net.name,
        provenance,
    )


def delete_registers(
    net: Network, drop: Iterable[int], allow_prune: bool = False
) -> Network:
    """Remove registers and renumber the survivors contiguously, keeping their order.

    In strict mode a comparator touching a dropped register is an error; with
    ``allow_prune`` such comparators are removed along with the registers.
    """
    drop = set(drop)
    touching = [
        (q, c) for q, c in net.comparators() if c.lo in drop or c.hi in drop
    ]
    if touching and not allow_prune:
        listed = ", ".join(f"[{c}] in stage {q}" for q, c in touching)
        raise NetworkError(f"dropped registers still referenced by {listed}")
    keep = [r for r in range(net.n_registers) if r not in drop]
    renum = {old: new for new, old in enumerate(keep)}
    stages = []
    provenance = {} if net.provenance is not None else None
    for q, st in enumerate(net.stages, start=1):
        comps = set()
        for c in st.comparators:
            if c.lo in drop or c.hi in drop:
                continue
            nc = Comparator(renum[c.lo], renum[c.hi])
            comps.add(nc)
            if provenance is not None:
                provenance[(q, nc)] = net.provenance[(q, c)]
        stages.append(Stage(frozenset(comps)))
    return Network(len(keep), tuple(stages), net.period, net.name, provenance)


def run_stage(stage: Stage, values: Sequence) -> tuple:
    """Apply one stage of compare-exchange operations to a value vector."""
    out = list(values)
    for lo, hi in stage.comparators:
        if max(lo, hi) >= len(out):
            raise NetworkError(
                f"comparator [{lo}:{hi}] outside a vector of length {len(out)}"
            )
        a, b = out[lo], out[hi]
        if b < a:
            out[lo], out[hi] = b, a
    return tuple(out)


def _check_length(net: Network, n: int):
    if n != net.n_registers:
        raise NetworkError(
            f"value vector has length {n}, network has {net.n_registers} registers"
        )


def run(net: Network, values: Sequence) -> tuple:
    _check_length(net, len(values))
    out = tuple(values)
    for st in net.stages:
        out = run_stage(st, out)
    return out


def run_periodic(net: Network, values: Sequence, passes: int) -> tuple:
    """Run all stages of ``net`` ``passes`` times in a row."""
    _check_length(net, len(values))
    out = tuple(values)
    for _ in range(passes):
        out = run(net, out)
    return out


def run_stage_batch(stage: Stage, x: np.ndarray) -> None:
    """In-place compare-exchange on every row of ``x`` (shape ``(batch, n)``)."""
    lo, hi = stage.index_arrays
    if lo.size == 0:
        return
    a = x[:, lo]
    b = x[:, hi]
    x[:, lo] = np.minimum(a, b)
    x[:, hi] = np.maximum(a, b)


def run_batch(net: Network, x: np.ndarray, passes: int = 1) -> np.ndarray:
    """Vectorised :func:`run_periodic` over the rows of ``x``; returns a new array."""
    x = np.array(x, copy=True)
    if x.ndim != 2:
        raise NetworkError("batch input must be two-dimensional")
    _check_length(net, x.shape[1])
    for _ in range(passes):
        for st in net.stages:
            run_stage_batch(st, x)
    return x


# -- netlist text format ----------------------------------------------------


class NetlistError(NetworkError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def format_netlist(net: Network) -> str:
    lines = [f"registers {net.n_registers}", f"period {net.period if net.period else '-'}"]
    for st in net.stages:
        lines.append(" ".join(str(c) for c in st.sorted()))
    return "\n".join(lines) + "\n"


def parse_netlist(text: str, name: str = "") -> Network:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 2:
        raise NetlistError(len(lines) + 1, "expected 'registers N' and 'period P' header")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "registers" or not head[1].isdigit():
        raise NetlistError(1, f"expected 'registers N', got {lines[0]!r}")
    n = int(head[1])
    per = lines[1].split()
    if len(per) != 2 or per[0] != "period" or not (per[1] == "-" or per[1].isdigit()):
        raise NetlistError(2, f"expected 'period P' or 'period -', got {lines[1]!r}")
    period = None if per[1] == "-" else int(per[1])
    stages = []
    for lineno, line in enumerate(lines[2:], start=3):
        pairs = []
        for tok in line.split():
            a, sep, b = tok.partition(":")
            if not sep or not a.isdigit() or not b.isdigit():
                raise NetlistError(lineno, f"bad comparator {tok!r}")
            i, j = int(a), int(b)
            if i >= j:
                raise NetlistError(lineno, f"comparator {tok} is not standard (need i<j)")
            if j >= n:
                raise NetlistError(lineno, f"comparator {tok} outside {n} registers")
            pairs.append((i, j))
        try:
            stages.append(Stage.of(pairs))
        except NetworkError as e:
            raise NetlistError(lineno, str(e)) from None
    try:
        return Network(n, tuple(stages), period, name)
    except NetworkError as e:
        raise NetlistError(2, str(e)) from None


def save_netlist(net: Network, path) -> None:
    with open(path, "w", newline="\n") as f:
        f.write(format_netlist(net))


def load_netlist(path) -> Network:
    from pathlib import Path

    p = Path(path)
    return parse_netlist(p.read_text(), name=p.stem)
