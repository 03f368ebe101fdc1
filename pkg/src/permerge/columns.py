"""Ones-per-column abstraction of the 3-periodic merger M_k.

The N_k = n_k * b_k registers of M_k are read as an n_k x b_k matrix whose
column ``j`` (1-based) holds registers ``j-1, j-1+b_k, j-1+2b_k, ...``. While
every column stays sorted, a 0-1 state is fully described by the vector of
ones counts per column, and each stage of M_k acts on that vector through
the maps ``q_apply(k, 1..3, .)``.

Conventions used throughout this module:

* positions inside a column vector and function indices (``dec(k, i, .)``)
  are 1-based, as in the usual statement of these maps;
* an "application" is one Q-map, i.e. one stage of M_k; a pass is three
  applications, and application ``i`` uses phase ``(i-1) % 3 + 1``;
* reduced sequences and intervals are exact ``Fraction`` values;
* interval descriptors are ints: ``0..k-1`` stand for themselves, ``-k`` for
  the interval named -k, and ``+k`` for the symmetric interval named ±k.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .builders import FamilyParams, H


class ColumnError(ValueError):
    pass


# -- 0-1 states <-> column vectors ------------------------------------------


def column_matrix(x: Sequence[int] | np.ndarray, k: int) -> np.ndarray:
    fp = FamilyParams(k)
    x = np.asarray(x)
    if x.shape[-1] != fp.n * fp.b:
        raise ColumnError(f"expected {fp.n * fp.b} registers for k={k}, got {x.shape[-1]}")
    return x.reshape(x.shape[:-1] + (fp.n, fp.b))


def unsorted_columns(x, k: int) -> list[int]:
    """1-based indices of columns whose content is not of the form 0*1*."""
    m = column_matrix(x, k)
    bad = np.any(m[1:, :] < m[:-1, :], axis=0)
    return [int(j) + 1 for j in np.flatnonzero(bad)]


def ones_per_column(x: Sequence[int], k: int) -> tuple[int, ...]:
    bad = unsorted_columns(x, k)
    if bad:
        raise ColumnError(f"column {bad[0]} is not sorted; ones counts do not describe the state")
    return tuple(int(v) for v in column_matrix(x, k).sum(axis=0))


def ones_per_column_batch(x: np.ndarray, k: int) -> np.ndarray:
    """Row-wise ones counts for a ``(batch, N_k)`` array; column sortedness is not checked."""
    return column_matrix(x, k).sum(axis=1, dtype=np.int64)


def state_from_columns(c: Sequence[int], k: int) -> tuple[int, ...]:
    """The 0-1 state whose column ``j`` is sorted with ``c_j`` ones."""
    fp = FamilyParams(k)
    if len(c) != fp.b or any(not 0 <= v <= fp.n for v in c):
        raise ColumnError(f"need {fp.b} counts in [0, {fp.n}]")
    m = (np.arange(fp.n)[:, None] >= fp.n - np.asarray(c)[None, :]).astype(np.uint8)
    return tuple(int(v) for v in m.reshape(-1))


# -- predicates ---------------------------------------------------------------


def is_flat(c: Sequence) -> bool:
    return all(c[i] <= c[i + 1] for i in range(len(c) - 1)) and (
        len(c) == 0 or c[-1] <= c[0] + 1
    )


def is_two_flat(c: Sequence) -> bool:
    return is_flat(c[0::2]) and is_flat(c[1::2])


def is_balanced(c: Sequence) -> bool:
    n = len(c)
    return all(c[i] + c[n - 1 - i] == c[0] + c[-1] for i in range(1, n // 2))


def height(c: Sequence):
    if not is_balanced(c):
        raise ColumnError(f"height is defined for balanced sequences only: {tuple(c)}")
    return c[0] + c[-1]


# -- the maps dec, mov, cyc ----------------------------------------------------
#
# The private versions work on anything indexable by position whose copy()
# gives a fresh container: lists of numbers, or arrays of shape (b, batch).


def _copy(c):
    return c.copy() if isinstance(c, np.ndarray) else list(c)


def _ops(c):
    if isinstance(c, np.ndarray):
        return np.minimum, np.maximum
    return min, max


def _check(k: int, c, i: int | None = None):
    b = 2 * (k - 2)
    if len(c) != b:
        raise ColumnError(f"column vector for k={k} must have {b} entries, got {len(c)}")
    if i is not None and not 1 <= i <= k - 2:
        raise ColumnError(f"function index {i} outside 1..{k - 2}")


def _dec(k, i, c):
    mn, mx = _ops(c)
    b, h = 2 * (k - 2), 2 ** (k - i - 1) - 1
    out = _copy(c)
    out[i - 1] = mn(c[i - 1], c[b - i] + h)
    out[b - i] = mx(c[i - 1] - h, c[b - i])
    return out


def _mov(k, i, c):
    mn, mx = _ops(c)
    b = 2 * (k - 2)
    out = _copy(c)
    for t in (i, b - i):
        out[t - 1] = mn(c[t - 1], c[t])
    for t in (i + 1, b - i + 1):
        out[t - 1] = mx(c[t - 2], c[t - 1])
    return out


def _cyc(k, c):
    mn, mx = _ops(c)
    b = 2 * (k - 2)
    out = _copy(c)
    out[0] = mx(c[0], c[b - 1] - 1)
    out[b - 1] = mn(c[0] + 1, c[b - 1])
    return out


def dec(k: int, i: int, c: Sequence) -> tuple:
    _check(k, c, i)
    return tuple(_dec(k, i, c))


def mov(k: int, i: int, c: Sequence) -> tuple:
    _check(k, c, i)
    return tuple(_mov(k, i, c))


def cyc(k: int, c: Sequence) -> tuple:
    _check(k, c)
    return tuple(_cyc(k, c))


def args(k: int, fn: tuple[str, int | None]) -> set[int]:
    """Positions a map may change."""
    b = 2 * (k - 2)
    name, i = fn
    if name == "cyc":
        return {1, b}
    if name == "dec":
        return {i, b - i + 1}
    return {i, i + 1, b - i, b - i + 1}


def q_functions(k: int, phase: int) -> list[tuple[str, int | None]]:
    """The maps making up phase ``phase`` (one stage of M_k), as ``(name, index)``."""
    if phase == 1:
        return (
            [("cyc", None)]
            + [("dec", 3 * i - 1) for i in range(1, (k - 1) // 3 + 1)]
            + [("mov", 3 * i) for i in range(1, (k - 2) // 3 + 1)]
        )
    if phase == 2:
        return [("dec", 3 * i - 2) for i in range(1, k // 3 + 1)] + [
            ("mov", 3 * i - 1) for i in range(1, (k - 1) // 3 + 1)
        ]
    if phase == 3:
        return [("dec", 3 * i) for i in range(1, (k - 2) // 3 + 1)] + [
            ("mov", 3 * i - 2) for i in range(1, k // 3 + 1)
        ]
    raise ColumnError(f"phase must be 1, 2 or 3, got {phase}")


def _apply_fn(k, fn, c):
    name, i = fn
    if name == "cyc":
        return _cyc(k, c)
    if name == "dec":
        return _dec(k, i, c)
    return _mov(k, i, c)


def q_apply(k: int, phase: int, c, order: Sequence[int] | None = None):
    """Apply every map of phase ``phase`` to ``c``, one after another.

    ``order`` permutes the maps; the result does not depend on it because
    the maps of one phase touch disjoint positions. ``c`` may be a sequence
    (a tuple comes back) or an array of shape ``(batch, b_k)``.
    """
    fns = q_functions(k, phase)
    if order is not None:
        fns = [fns[i] for i in order]
    if isinstance(c, np.ndarray):
        if c.ndim != 2 or c.shape[1] != 2 * (k - 2):
            raise ColumnError(f"batch must have shape (batch, {2 * (k - 2)})")
        cur = c.T.copy()
        for fn in fns:
            cur = _apply_fn(k, fn, cur)
        return cur.T.copy()
    _check(k, c)
    cur = list(c)
    for fn in fns:
        cur = _apply_fn(k, fn, cur)
    return tuple(cur)


def phase_of(application: int) -> int:
    return (application - 1) % 3 + 1


def iterate_q(k: int, c, applications: int) -> list:
    """States after 0, 1, ..., ``applications`` Q-applications (phases 1, 2, 3, 1, ...)."""
    states = [tuple(c) if not isinstance(c, np.ndarray) else c]
    for i in range(1, applications + 1):
        states.append(q_apply(k, phase_of(i), states[-1]))
    return states


# -- reduced sequences ----------------------------------------------------------


def reduce(c: Sequence) -> tuple[tuple[Fraction, ...], Fraction]:
    """(first half of ``c`` minus half its height, height)."""
    s = Fraction(height(c))
    half = len(c) // 2
    return tuple(Fraction(v) - s / 2 for v in c[:half]), s


def ext(d: Sequence, s) -> tuple[Fraction, ...]:
    s = Fraction(s)
    d = [Fraction(v) for v in d]
    return tuple(v + s / 2 for v in d) + tuple(s / 2 - v for v in reversed(d))


def Cyc(x):
    return max(x, -x - 1)


def Dec(i: int, x):
    return min(x, -x + H(i))


def Min(x):
    return min(x, -x)


def MinMax(x, y):
    return min(x, y), max(x, y)


def hat_functions(k: int, phase: int) -> list[tuple[str, int | None]]:
    """Slot layout of the reduced phase map; ``minmax`` covers two positions."""
    r = k % 3

    def tail(i):
        if r == (2 * i + 1) % 3:
            return []
        if r == (2 * i + 2) % 3:
            return [("dec", 1)]
        return [("dec", 2), ("min", None)]

    if phase == 1:
        seq = [("cyc", None)]
        for i in range(1, (k - 3) // 3 + 1):
            seq += [("dec", k - 3 * i), ("minmax", None)]
        seq += tail(1)
    elif phase == 2:
        seq = []
        for i in range(1, (k - 2) // 3 + 1):
            seq += [("dec", k - 3 * i + 1), ("minmax", None)]
        seq += tail(2)
    elif phase == 3:
        seq = []
        for i in range(1, (k - 2) // 3 + 1):
            seq += [("minmax", None), ("dec", k - 3 * i - 1)]
        seq += {2: [], 0: [("min", None)], 1: [("minmax", None)]}[r]
    else:
        raise ColumnError(f"phase must be 1, 2 or 3, got {phase}")
    width = sum(2 if f[0] == "minmax" else 1 for f in seq)
    if width != k - 2:
        raise ColumnError(f"reduced phase {phase} for k={k} spans {width} slots, not {k - 2}")
    return seq


def hat_q(k: int, phase: int, d: Sequence) -> tuple:
    """The phase map acting on reduced sequences, slot by slot."""
    if len(d) != k - 2:
        raise ColumnError(f"reduced sequence for k={k} must have {k - 2} entries")
    out = []
    pos = 0
    for name, i in hat_functions(k, phase):
        if name == "minmax":
            out.extend(MinMax(d[pos], d[pos + 1]))
            pos += 2
            continue
        x = d[pos]
        out.append(Cyc(x) if name == "cyc" else Min(x) if name == "min" else Dec(i, x))
        pos += 1
    return tuple(out)


# -- intervals and state sequences ---------------------------------------------


def interval(w: int, k: int) -> tuple[Fraction, Fraction]:
    half = Fraction(1, 2)
    if w == 0:
        return -half, Fraction(0)
    if 1 <= w <= k - 1:
        return -half, Fraction(H(w), 2)
    if w == -k:
        return Fraction(-H(k - 1), 2), Fraction(0)
    if w == k:
        return Fraction(-H(k - 1), 2), Fraction(H(k - 1), 2)
    raise ColumnError(f"{w} is not an interval descriptor for k={k}")


def interval_contains(w: int, x, k: int) -> bool:
    lo, hi = interval(w, k)
    return lo <= x <= hi


def in_intervals(ws: Sequence[int], d: Sequence, k: int) -> bool:
    return all(interval_contains(w, x, k) for w, x in zip(ws, d, strict=True))


def descriptor_str(w: int, k: int) -> str:
    return "±k" if w == k else "-k" if w == -k else str(w)


def _grid(w: int, k: int, step: Fraction):
    lo, hi = interval(w, k)
    x = lo
    while x <= hi:
        yield x
        x += step
    if (hi - lo) % step:
        yield hi


def interval_inclusion_violations(k: int, step=Fraction(1, 2)) -> list[str]:
    """Probe the inclusions between intervals that the reduced maps respect.

    Every source interval is sampled on a grid of spacing ``step`` (endpoints
    included) and each image is tested for membership in its target interval:

    * ``Dec_i`` maps I(i+1) into I(i), and I(w) into itself for w in {0, -k, ±k};
    * ``Cyc`` maps I(-k) into I(k-1), and I(w) into itself for w in {0, k-1};
    * ``Min`` maps I(±k) into I(-k) and I(1) into I(0);
    * ``MinMax`` maps I(±k) x I(-k) into I(-k) x I(±k);
    * ``MinMax`` maps I(i) x I(w) into I(w) x I(i) for 1 <= i <= k-1, w in {0, -k}.

    Returns one message per failing sample point (empty when all hold).
    """
    step = Fraction(step)
    bad: list[str] = []

    def unary(name, f, src, dst):
        for x in _grid(src, k, step):
            y = f(x)
            if not interval_contains(dst, y, k):
                bad.append(
                    f"{name}({x}) = {y} not in I({descriptor_str(dst, k)}) "
                    f"for x in I({descriptor_str(src, k)})"
                )

    def pair(src, dst):
        for x in _grid(src[0], k, step):
            for y in _grid(src[1], k, step):
                out = MinMax(x, y)
                if not in_intervals(dst, out, k):
                    bad.append(f"MinMax({x}, {y}) = {out} outside I{dst}")

    for i in range(1, k - 1):
        dec = lambda x, i=i: Dec(i, x)  # noqa: E731
        unary(f"Dec_{i}", dec, i + 1, i)
        for w in (0, -k, k):
            unary(f"Dec_{i}", dec, w, w)
    unary("Cyc", Cyc, -k, k - 1)
    for w in (0, k - 1):
        unary("Cyc", Cyc, w, w)
    unary("Min", Min, k, -k)
    unary("Min", Min, 1, 0)
    pair((k, -k), (-k, k))
    for i in range(1, k):
        for w in (0, -k):
            pair((i, w), (w, i))
    return bad


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _patterns(k: int):
    rep = _ceil_div(k - 2, 3)
    pm, neg = k, -k
    Z = (0, 0, 0) * rep
    U = {1: (pm, pm, neg) * rep, 2: (pm, neg, pm) * rep, 0: (neg, pm, pm) * rep}
    V, W = {}, {}
    for low, table in ((neg, V), (0, W)):
        table[1] = sum(((k - 3 * i + 2, k - 3 * i, low) for i in range(1, rep + 1)), ())
        table[2] = sum(((k - 3 * i + 1, low, k - 3 * i) for i in range(1, rep + 1)), ())
        table[0] = sum(((low, k - 3 * i + 1, k - 3 * i - 1) for i in range(1, rep + 1)), ())
    return Z, U, V, W


def join(k: int, i: int, a: Sequence, b: Sequence) -> tuple:
    return tuple(a[:i]) + tuple(b[i : k - 2])


def state_sequence(k: int, i: int) -> tuple[int, ...]:
    """Interval descriptors bounding the reduced state after ``i`` Q-applications."""
    if not 1 <= i <= 5 * k - 12:
        raise ColumnError(f"state index {i} outside 1..{5 * k - 12}")
    Z, U, V, W = _patterns(k)
    r = i % 3
    if i <= 2 * k - 5:
        seq = join(k, _ceil_div(i + 1, 2), V[r], U[r])
    elif i <= 3 * k - 7:
        seq = join(k, 3 * k - 6 - i, V[r], W[r])
    else:
        seq = join(k, _ceil_div(i + 1 - (3 * k - 6), 2), Z, W[r])
    for w in seq:
        interval(w, k)
    return seq


# -- lower/upper balanced bounds --------------------------------------------------


def _step_indices(c: Sequence, k: int) -> tuple[int, int]:
    b = 2 * (k - 2)
    i = next((t for t in range(1, k - 2) if c[2 * t - 2] < c[2 * t]), k - 2)
    j = next((t for t in range(1, k - 2) if c[b - 2 * t - 1] < c[b - 2 * t + 1]), k - 2)
    return i, j


def bounds(c: Sequence[int], k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Balanced sequences ``lower <= c <= upper`` whose heights differ by one."""
    _check(k, c)
    if not is_two_flat(c):
        raise ColumnError(f"bounds need a 2-flat sequence: {tuple(c)}")
    if is_balanced(c):
        raise ColumnError(f"bounds are defined for unbalanced sequences only: {tuple(c)}")
    b = 2 * (k - 2)
    i, j = _step_indices(c, k)
    C = lambda t: c[t - 1]  # noqa: E731
    lower, upper = [], []
    for l in range(1, b + 1):
        odd = l % 2 == 1
        if i < j:
            lower.append((C(1) if l <= 2 * j - 1 else C(b - 1)) if odd else C(l))
            upper.append(C(b - 1) if odd else C(b))
        elif i > j:
            lower.append(C(1) if odd else C(2))
            upper.append(C(l) if odd else (C(2) if l <= b - 2 * i else C(b)))
        else:
            raise ColumnError(f"unbalanced 2-flat sequence with equal step indices: {tuple(c)}")
    return tuple(lower), tuple(upper)


# -- enumeration ----------------------------------------------------------------


def enumerate_flat(m: int, top: int) -> Iterator[tuple[int, ...]]:
    """All flat integer sequences of length ``m`` with entries in ``[0, top]``."""
    for a in range(top + 1):
        yield (a,) * m
        if a < top:
            for p in range(1, m):
                yield (a,) * p + (a + 1,) * (m - p)


def enumerate_two_flat(k: int) -> Iterator[tuple[int, ...]]:
    """All 2-flat column vectors for ``k`` with entries in ``[0, 2^(k-1) - 1]``."""
    top = 2 ** (k - 1) - 1
    flats = list(enumerate_flat(k - 2, top))
    for odd, even in product(flats, flats):
        c = [0] * (2 * (k - 2))
        c[0::2] = odd
        c[1::2] = even
        yield tuple(c)


def random_two_flat(k: int, rng: np.random.Generator) -> tuple[int, ...]:
    top = 2 ** (k - 1) - 1

    def flat():
        a = int(rng.integers(0, top + 1))
        p = int(rng.integers(1, k - 1)) if a < top else k - 2
        return (a,) * p + (a + 1,) * (k - 2 - p)

    c = [0] * (2 * (k - 2))
    c[0::2] = flat()
    c[1::2] = flat()
    return tuple(c)


# -- trajectories ---------------------------------------------------------------


def balanced_endpoint(s: int, k: int) -> tuple:
    if s % 2 == 0:
        return (Fraction(s, 2),) * (2 * (k - 2))
    return (Fraction(s - 1, 2),) * (k - 2) + (Fraction(s + 1, 2),) * (k - 2)


@dataclass
class TrajectoryReport:
    k: int
    initial: tuple[int, ...]
    states: list[tuple[int, ...]]
    balanced: bool
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def final_flat(self) -> bool:
        return is_flat(self.states[-1])

    @property
    def flat_from(self) -> int | None:
        """Smallest application count after which every later state is flat."""
        first = None
        for i in range(len(self.states) - 1, -1, -1):
            if not is_flat(self.states[i]):
                break
            first = i
        return first

    def interval_ok(self, i: int) -> bool | None:
        """Interval-state membership after application ``i``; None when not checked."""
        if not self.balanced or not 1 <= i <= 5 * self.k - 12:
            return None
        d, _ = reduce(self.states[i])
        return in_intervals(state_sequence(self.k, i), d, self.k)


def check_trajectory(k: int, c: Sequence[int], applications: int | None = None) -> TrajectoryReport:
    """Run 6k-15 Q-applications from a 2-flat ``c`` and check every claim along the way.

    Balanced start: height is preserved, the reduced state after application
    ``i <= 5k-12`` lies in the intervals of ``state_sequence(k, i)``, and from
    application 5k-12 on the state is the closed form (s/2)^b, or
    ((s-1)/2)^(k-2) ((s+1)/2)^(k-2) for odd height s.

    Unbalanced start: the balanced bounds sandwich every state, the pinned
    halves hold on applications 3k-6..6k-15, and each minority value that
    enters the pinned region travels one position per application to its
    final slot.

    Either way the final state must be flat.
    """
    fp = FamilyParams(k)
    c = tuple(int(v) for v in c)
    _check(k, c)
    if any(not 0 <= v <= fp.n for v in c):
        raise ColumnError(f"entries must lie in [0, {fp.n}]")
    if not is_two_flat(c):
        raise ColumnError(f"trajectory start must be 2-flat: {c}")
    total = 6 * k - 15 if applications is None else applications
    states = iterate_q(k, c, total)
    balanced = is_balanced(c)
    rep = TrajectoryReport(k, c, states, balanced)
    v = rep.violations
    last_interval = min(5 * k - 12, total)
    if balanced:
        s = height(c)
        for i in range(1, total + 1):
            if not is_balanced(states[i]) or height(states[i]) != s:
                v.append(f"application {i}: balance or height lost")
                continue
            if i <= last_interval:
                d, _ = reduce(states[i])
                if not in_intervals(state_sequence(k, i), d, k):
                    v.append(f"application {i}: reduced state {d} outside its interval state")
            if i >= 5 * k - 12 and states[i] != balanced_endpoint(s, k):
                v.append(f"application {i}: {states[i]} differs from the closed-form endpoint")
    else:
        _check_unbalanced(k, c, states, total, v)
    if total >= 6 * k - 15 and not is_flat(states[-1]):
        v.append(f"final state {states[-1]} is not flat")
    return rep


def _check_unbalanced(k, c, states, total, v):
    b = 2 * (k - 2)
    lower, upper = bounds(c, k)
    lows, ups = iterate_q(k, lower, total), iterate_q(k, upper, total)
    s = height(lower)
    if height(upper) != s + 1:
        v.append(f"bound heights {s} and {height(upper)} do not differ by one")
    for i in range(total + 1):
        if not all(a <= x <= z for a, x, z in zip(lows[i], states[i], ups[i])):
            v.append(f"application {i}: state escapes its balanced bounds")
    odd = s % 2 == 1
    lo_val, hi_val = (s - 1) // 2, (s + 1) // 2

    def pinned(state, j):
        left, right = state[j - 1], state[b - j]
        if odd:
            return left in (lo_val, hi_val) and right == hi_val
        return left == s // 2 and right in (s // 2, s // 2 + 1)

    for i in range(3 * k - 6, min(5 * k - 12, total) + 1):
        for j in range(1, _ceil_div(i + 1 - (3 * k - 6), 2) + 1):
            if not pinned(states[i], j):
                v.append(f"application {i}: pair {j} not pinned to half height")
    for i in range(5 * k - 11, total + 1):
        for j in range(1, k - 1):
            if not pinned(states[i], j):
                v.append(f"application {i}: pair {j} not pinned to half height")
    # minority values entering the pinned region slide to their final slots
    moving = lo_val if odd else s // 2 + 1
    arrived = 0
    for t in range(1, k - 1):
        it = 3 * k + 2 * t - 8
        if it > total:
            break
        tpos = t if odd else b - t + 1
        if states[it][tpos - 1] != moving:
            continue
        arrived += 1
        for i in range(0, total - it + 1):
            pos = max(t - i, arrived) if odd else min(tpos + i, b - arrived + 1)
            if states[it + i][pos - 1] != moving:
                v.append(
                    f"application {it + i}: moving value from slot {tpos} not at slot {pos}"
                )
                break


@dataclass
class SweepSummary:
    k: int
    applications: int
    inputs: int = 0
    balanced: int = 0
    failures: list = field(default_factory=list)
    worst_flat_from: int = 0
    worst_flat_from_balanced: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def result_line(self) -> str:
        return (
            f"RESULT family=two_flat network=Q_{self.k} passes={self.applications} "
            f"inputs={self.inputs} failures={len(self.failures)}"
        )


def sweep(k: int, inputs=None) -> SweepSummary:
    """Check trajectories for many starts (all 2-flat vectors by default)."""
    summary = SweepSummary(k, 6 * k - 15)
    for c in enumerate_two_flat(k) if inputs is None else inputs:
        rep = check_trajectory(k, c)
        summary.inputs += 1
        ff = rep.flat_from if rep.flat_from is not None else summary.applications + 1
        summary.worst_flat_from = max(summary.worst_flat_from, ff)
        if rep.balanced:
            summary.balanced += 1
            summary.worst_flat_from_balanced = max(summary.worst_flat_from_balanced, ff)
        if not rep.ok:
            summary.failures.append((c, rep.violations))
    return summary
