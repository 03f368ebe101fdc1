"""Constructors for the periodic sorter CW_k and its constant-period merging versions.

``build_cw``  -- the log N-periodic sorter CW_k on 2^k registers.
``build_p``   -- P_k: CW_k with every interior register split into k-2 registers
                 and short stages inserted between the long ones; delay 3.
``build_m``   -- M_k: compact form of P_k without its first and last register;
                 a 3-stage network on (2^k-2)(k-2) registers.
``build_p4``  -- experimental 4-periodic analogue P'_k (k even); delay 4.
``build_m4``  -- compact form of P'_k without its boundary registers.

M_k registers are 0-based here: register ``r`` of M_k is register ``r + 1`` of
P_k, so it matches a 1-based numbering of M_k.
"""
from __future__ import annotations

from dataclasses import dataclass

from .netcore import (
    Comparator,
    Network,
    NetworkError,
    Stage,
    compact_form,
    delay,
    delete_registers,
)


class ParameterError(ValueError):
    pass


def H(i: int) -> int:
    return 2**i - 1


@dataclass(frozen=True)
class FamilyParams:
    k: int

    def __post_init__(self):
        if self.k < 3:
            raise ParameterError(f"k must be at least 3, got {self.k}")

    @property
    def n(self) -> int:
        """Rows of the register matrix: 2^(k-1) - 1."""
        return 2 ** (self.k - 1) - 1

    @property
    def b(self) -> int:
        """Columns of the register matrix: 2(k-2)."""
        return 2 * (self.k - 2)

    def h(self, i: int) -> int:
        """Displacement of the long comparators in column pair ``i``."""
        return 2 ** (self.k - i - 1) - 1

    @property
    def n_registers_p(self) -> int:
        return self.n * self.b + 2

    @property
    def n_registers_m(self) -> int:
        return self.n * self.b


def build_cw(k: int) -> Network:
    if k < 1:
        raise ParameterError(f"k must be at least 1, got {k}")
    stages = [Stage.of((2 * i, 2 * i + 1) for i in range(2 ** (k - 1)))]
    for j in range(1, k):
        stages.append(
            Stage.of(
                (2 * i + 1, 2 * i + 2 ** (k - j))
                for i in range(2 ** (k - 1) - 2 ** (k - j - 1))
            )
        )
    return Network(2**k, tuple(stages), period=k, name=f"CW_{k}")


def p_stages(k: int) -> list[Stage]:
    """Stages S_{k,1}, ..., S_{k,2k-3} of P_k (stage 1 without its two boundary comparators)."""
    fp = FamilyParams(k)
    n, b = fp.n, fp.b
    stages = [Stage.of((b * i, b * i + 1) for i in range(1, n))]
    for j in range(1, b // 2 + 1):
        stages.append(
            Stage.of(
                (b * i + j, b * (i + fp.h(j)) + (b - j + 1))
                for i in range(n - 2 ** (k - j - 1) + 1)
            )
        )
        if j < b // 2:
            pairs = [(b * i + j, b * i + j + 1) for i in range(n)]
            pairs += [(b * i + b - j, b * i + b - j + 1) for i in range(n)]
        else:
            # both halves of the formula name the same comparators here
            pairs = [(b * i + j, b * i + j + 1) for i in range(n)]
        stages.append(Stage.of(pairs))
    return stages


def build_p(k: int) -> Network:
    fp = FamilyParams(k)
    N = fp.n_registers_p
    stages = p_stages(k)
    stages[0] = Stage(stages[0].comparators | {Comparator(0, 1), Comparator(N - 2, N - 1)})
    net = Network(N, tuple(stages), name=f"P_{k}")
    if net.depth != 2 * k - 3:
        raise NetworkError(f"P_{k} has {net.depth} stages, expected {2 * k - 3}")
    if delay(net) != 3:
        raise NetworkError(f"delay(P_{k}) = {delay(net)}, expected 3")
    return net


def _drop_boundary(compact: Network, name: str) -> Network:
    """Delete the first and last register of a compacted network.

    Only the two boundary comparators of the first original stage may touch
    them; anything else means the construction is broken.
    """
    N = compact.n_registers
    boundary = {Comparator(0, 1), Comparator(N - 2, N - 1)}
    touching = {
        (q, c) for q, c in compact.comparators() if {0, N - 1} & {c.lo, c.hi}
    }
    expected = {(1, c) for c in boundary}
    if touching != expected or any(compact.provenance[qc] != 1 for qc in touching):
        raise NetworkError(
            f"unexpected comparators on boundary registers: {sorted(touching)}"
        )
    return delete_registers(compact, {0, N - 1}, allow_prune=True).with_period(
        compact.period, name
    )


def build_m(k: int) -> Network:
    fp = FamilyParams(k)
    m = _drop_boundary(compact_form(build_p(k)), f"M_{k}")
    if m.n_registers != fp.n_registers_m or m.n_registers != (2**k - 2) * (k - 2):
        raise NetworkError(f"M_{k} has {m.n_registers} registers")
    if m.depth != 3:
        raise NetworkError(f"M_{k} has {m.depth} stages")
    return m


def m_stages_direct(k: int) -> list[Stage]:
    """T^k_j as the union of S_{k,j+3i}, 0 <= i <= (2k-j-3)/3, renumbered to M_k registers.

    An independent route to the stages of M_k used to cross-check ``build_m``.
    """
    S = p_stages(k)
    out = []
    for j in (1, 2, 3):
        comps = set()
        for i in range((2 * k - j - 3) // 3 + 1):
            comps |= {Comparator(c.lo - 1, c.hi - 1) for c in S[j + 3 * i - 1].comparators}
        out.append(Stage(frozenset(comps)))
    return out


def grouped_network(k: int, group: int) -> Network:
    """CW_k with each interior register split into ``(k-2)/group`` sub-registers.

    The k-2 long stages of CW_k are cut into consecutive groups of ``group``
    stages. Within group ``t`` the long comparators leave sub-register ``t`` of
    the odd register and land on sub-register ``m-t+1`` of the even register;
    after each group but the last a short stage moves both endpoints one
    sub-register on. The final stage of CW_k joins the last sub-register of an
    odd register to the first sub-register of its even neighbour.

    ``group=1`` gives P_k; ``group=2`` gives the 4-periodic P'_k.
    """
    if (k - 2) % group:
        raise ParameterError(f"k-2 must be divisible by {group}, got k={k}")
    m = (k - 2) // group
    top = 2**k - 1
    N = m * (2**k - 2) + 2

    def sub(r: int, s: int) -> int:
        if r == 0:
            return 0
        if r == top:
            return N - 1
        return m * (r - 1) + s

    stages = [Stage.of((sub(2 * i, m), sub(2 * i + 1, 1)) for i in range(2 ** (k - 1)))]
    j = 0
    for t in range(1, m + 1):
        for _ in range(group):
            j += 1
            stages.append(
                Stage.of(
                    (sub(2 * i + 1, t), sub(2 * i + 2 ** (k - j), m - t + 1))
                    for i in range(2 ** (k - 1) - 2 ** (k - j - 1))
                )
            )
        if t < m:
            pairs = []
            for r in range(1, top):
                if r % 2:
                    pairs.append((sub(r, t), sub(r, t + 1)))
                else:
                    pairs.append((sub(r, m - t), sub(r, m - t + 1)))
            stages.append(Stage.of(pairs))
    stages.append(Stage.of((sub(2 * i + 1, m), sub(2 * i + 2, 1)) for i in range(2 ** (k - 1) - 1)))
    return Network(N, tuple(stages))


def build_p4(k: int) -> Network:
    """Experimental 4-periodic P'_k; only k=6 is pinned down by a published drawing."""
    if k % 2:
        raise ParameterError(f"k must be even, got {k}")
    if k < 4:
        raise ParameterError(f"k must be at least 4, got {k}")
    net = grouped_network(k, 2)
    net = Network(net.n_registers, net.stages, name=f"P'_{k}")
    if delay(net) != 4:
        raise NetworkError(f"delay(P'_{k}) = {delay(net)}, expected 4")
    return net


def build_m4(k: int) -> Network:
    """4-stage compact form of P'_k with the boundary registers deleted."""
    return _drop_boundary(compact_form(build_p4(k)), f"M'_{k}")


FAMILIES = {
    "cw": build_cw,
    "p": build_p,
    "m": build_m,
    "p4": build_p4,
    "m4": build_m4,
}
EXPERIMENTAL = {"p4", "m4"}


def build(family: str, k: int) -> Network:
    try:
        return FAMILIES[family](k)
    except KeyError:
        raise ParameterError(f"unknown family {family!r}") from None
