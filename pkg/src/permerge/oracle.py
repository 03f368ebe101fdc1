"""Ground-truth checks and exhaustive/randomised verification by the zero-one principle.

Merging inputs are "2-sorted": the values on even register indices form one
sorted sequence (A) and the values on odd indices another (B). Under 1-based
register numbering A sits on the *odd* registers and B on the even ones;
the partition is the same.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .netcore import Network, run_batch

EXHAUSTIVE_LIMIT = 22
CHUNK = 1 << 14


class VerificationError(ValueError):
    pass


def is_sorted(v: Sequence) -> bool:
    return all(v[i] <= v[i + 1] for i in range(len(v) - 1))


def is_two_sorted(v: Sequence) -> bool:
    return is_sorted(v[0::2]) and is_sorted(v[1::2])


def merge_oracle(a: Sequence, b: Sequence) -> tuple:
    """Stable two-finger merge of two sorted sequences."""
    if not is_sorted(a) or not is_sorted(b):
        raise VerificationError("merge_oracle needs sorted inputs")
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        if b[j] < a[i]:
            out.append(b[j])
            j += 1
        else:
            out.append(a[i])
            i += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


class TwoSortedSpec(NamedTuple):
    """A 2-sorted 0-1 vector of length ``n`` with ``ones_a`` ones on the even
    indices and ``ones_b`` ones on the odd indices."""

    n: int
    ones_a: int
    ones_b: int

    def vector(self) -> tuple[int, ...]:
        na, nb = (self.n + 1) // 2, self.n // 2
        if not (0 <= self.ones_a <= na and 0 <= self.ones_b <= nb):
            raise VerificationError(f"invalid spec {self}")
        v = [0] * self.n
        for i in range(na - self.ones_a, na):
            v[2 * i] = 1
        for i in range(nb - self.ones_b, nb):
            v[2 * i + 1] = 1
        return tuple(v)


def two_sorted_specs(n: int) -> list[TwoSortedSpec]:
    return [
        TwoSortedSpec(n, a, b)
        for a in range((n + 1) // 2 + 1)
        for b in range(n // 2 + 1)
    ]


def enumerate_two_sorted(n: int) -> Iterator[tuple[int, ...]]:
    for spec in two_sorted_specs(n):
        yield spec.vector()


def two_sorted_matrix(specs: Sequence[TwoSortedSpec], n: int) -> np.ndarray:
    """Rows are the vectors of ``specs``; built without Python-level loops over registers."""
    na, nb = (n + 1) // 2, n // 2
    a = np.array([s.ones_a for s in specs], dtype=np.intp)
    b = np.array([s.ones_b for s in specs], dtype=np.intp)
    x = np.zeros((len(specs), n), dtype=np.uint8)
    x[:, 0::2] = np.arange(na) >= (na - a)[:, None]
    x[:, 1::2] = np.arange(nb) >= (nb - b)[:, None]
    return x


def rows_sorted(x: np.ndarray) -> np.ndarray:
    return np.all(x[:, 1:] >= x[:, :-1], axis=1)


@dataclass
class VerificationReport:
    family: str
    network: str
    passes: int
    total_inputs: int = 0
    failure_count: int = 0
    failures: list = field(default_factory=list)
    min_passes_found: int | None = None

    @property
    def verified(self) -> bool:
        return self.failure_count == 0

    def result_line(self) -> str:
        return (
            f"RESULT family={self.family} network={self.network or '-'} "
            f"passes={self.passes} inputs={self.total_inputs} failures={self.failure_count}"
        )

    def text(self) -> str:
        status = "verified" if self.verified else "FAILED"
        lines = [
            f"{self.network or 'network'}: {status} ({self.family} inputs, {self.passes} passes)",
            f"  inputs checked: {self.total_inputs}",
            f"  failures: {self.failure_count}",
        ]
        if self.min_passes_found is not None:
            lines.append(f"  minimum passes found: {self.min_passes_found}")
        for spec, out in self.failures[:5]:
            lines.append(f"  e.g. {spec} -> {''.join(map(str, out))}")
        return "\n".join(lines)


def _workers(workers: int | None) -> int:
    return max(1, workers if workers else (os.cpu_count() or 1))


def _map_chunks(fn, chunks, workers):
    if workers == 1 or len(chunks) == 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(fn, chunks))


def verify_merging(
    net: Network,
    passes: int,
    workers: int | None = 1,
    max_failures: int = 1000,
) -> VerificationReport:
    """Run ``passes`` passes on every 2-sorted 0-1 input and check the outputs are sorted.

    Exhaustive over the (ceil(n/2)+1)(floor(n/2)+1) inputs, which by the 0-1
    principle for merging covers arbitrary sorted sequences.
    """
    n = net.n_registers
    specs = two_sorted_specs(n)
    chunks = [specs[i : i + CHUNK] for i in range(0, len(specs), CHUNK)]

    def check(chunk):
        out = run_batch(net, two_sorted_matrix(chunk, n), passes)
        bad = np.flatnonzero(~rows_sorted(out))
        return [(chunk[i], tuple(int(v) for v in out[i])) for i in bad]

    failures = [f for part in _map_chunks(check, chunks, _workers(workers)) for f in part]
    failures.sort(key=lambda f: f[0])
    return VerificationReport(
        "two_sorted", net.name, passes, len(specs), len(failures), failures[:max_failures]
    )


def _bits_matrix(codes: np.ndarray, n: int) -> np.ndarray:
    """Row ``i`` holds the binary digits of ``codes[i]``; register ``r`` gets bit ``r``."""
    return ((codes[:, None] >> np.arange(n, dtype=np.uint64)) & 1).astype(np.uint8)


def verify_sorting(
    net: Network,
    passes: int,
    samples: int | None = None,
    seed: int = 0,
    workers: int | None = 1,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
    max_failures: int = 1000,
) -> VerificationReport:
    """Check that ``passes`` passes sort 0-1 inputs.

    With ``samples=None`` every one of the 2^n inputs is tried (refused above
    ``exhaustive_limit`` registers). Otherwise ``samples`` uniform random 0-1
    vectors are drawn from a generator seeded with ``seed``. Failures are
    reported as the input vector.
    """
    n = net.n_registers
    if samples is None:
        if n > exhaustive_limit:
            raise VerificationError(
                f"exhaustive sorting check refused for {n} > {exhaustive_limit} registers; "
                "pass samples=... for randomised mode"
            )
        total = 1 << n
        starts = list(range(0, total, CHUNK))

        def inputs(start):
            codes = np.arange(start, min(start + CHUNK, total), dtype=np.uint64)
            return _bits_matrix(codes, n)

    else:
        total = samples
        starts = list(range(0, total, CHUNK))
        seeds = np.random.SeedSequence(seed).spawn(len(starts))
        seed_of = dict(zip(starts, seeds))

        def inputs(start):
            rng = np.random.default_rng(seed_of[start])
            return rng.integers(0, 2, size=(min(CHUNK, total - start), n), dtype=np.uint8)

    def check(start):
        x = inputs(start)
        out = run_batch(net, x, passes)
        bad = np.flatnonzero(~rows_sorted(out))
        return [
            (tuple(int(v) for v in x[i]), tuple(int(v) for v in out[i])) for i in bad
        ]

    failures = [f for part in _map_chunks(check, starts, _workers(workers)) for f in part]
    failures.sort(key=lambda f: f[0])
    family = "all" if samples is None else "random"
    return VerificationReport(
        family, net.name, passes, total, len(failures), failures[:max_failures]
    )


def failure_profile(
    net: Network, family: str, max_passes: int, samples: int | None = None, seed: int = 0
) -> list[int]:
    """Number of inputs left unsorted after exactly p passes, for p = 0..max_passes.

    Each p is judged on its own output; nothing assumes the counts decrease.
    """
    n = net.n_registers
    if family == "two_sorted":
        x = two_sorted_matrix(two_sorted_specs(n), n)
    elif family == "all":
        if samples is None:
            if n > EXHAUSTIVE_LIMIT:
                raise VerificationError(f"{n} registers is too many for exhaustive mode")
            x = _bits_matrix(np.arange(1 << n, dtype=np.uint64), n)
        else:
            x = np.random.default_rng(seed).integers(0, 2, size=(samples, n), dtype=np.uint8)
    else:
        raise VerificationError(f"unknown input family {family!r}")
    counts = []
    for p in range(max_passes + 1):
        if p:
            x = run_batch(net, x, 1)
        counts.append(int(np.count_nonzero(~rows_sorted(x))))
    return counts


def min_passes(
    net: Network, family: str = "two_sorted", max_passes: int = 10, **kw
) -> int | None:
    """Smallest pass count that handles the whole input family, or None if above ``max_passes``."""
    for p, bad in enumerate(failure_profile(net, family, max_passes, **kw)):
        if bad == 0:
            return p
    return None


def pass_bound(n_registers: int) -> int:
    return math.floor(math.log2(n_registers))
