"""Command-line front end.

Exit codes: 0 success or verified, 1 a property violation was found,
2 usage, parameter or parse error.
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import sys

import numpy as np

from . import columns, oracle
from .builders import EXPERIMENTAL, FAMILIES, ParameterError, build
from .netcore import NetworkError, delay, format_netlist, load_netlist
from .render import render

DEFAULT_SEED = 20240101


class UsageError(Exception):
    pass


def _family_network(family: str, k: int, experimental: bool):
    if family == "p4" or family == "m4":
        if k % 2:
            raise UsageError("k must be even")
        if not experimental:
            raise UsageError(f"family {family} is experimental; pass --experimental")
    return build(family, k)


def _network(args):
    """Resolve ``FAMILY K`` / ``FAMILY --k K`` / ``PATH`` into a network."""
    target = args.network
    if target[0] in FAMILIES:
        if len(target) > 2:
            raise UsageError("expected FAMILY K")
        k = int(target[1]) if len(target) == 2 else args.k
        if k is None:
            raise UsageError(f"family {target[0]} needs k")
        return _family_network(target[0], k, getattr(args, "experimental", False))
    if len(target) != 1:
        raise UsageError("expected a netlist path or FAMILY K")
    return load_netlist(target[0])


def _write(text: str, out: str | None):
    if out:
        with open(out, "w", newline="\n") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args):
    if args.family not in FAMILIES:
        raise UsageError(f"unknown family {args.family!r}")
    k = args.k_pos if args.k_pos is not None else args.k
    if k is None:
        raise UsageError("k is required")
    net = _family_network(args.family, k, args.experimental)
    _write(format_netlist(net), args.out)
    return 0


def cmd_stats(args):
    net = _network(args)
    lines = [
        f"registers {net.n_registers}",
        f"depth {net.depth}",
        f"size {net.size}",
        "stage-sizes " + " ".join(str(len(s)) for s in net.stages),
        f"delay {delay(net)}",
        f"period {net.period} verified" if net.period else "period -",
        f"standard {'yes' if net.all_standard() else 'no'}",
    ]
    print("\n".join(lines))
    return 0


def cmd_render(args):
    _write(render(_network(args), args.style), args.out)
    return 0


def cmd_verify_merge(args):
    net = _network(args)
    rep = oracle.verify_merging(net, args.passes, workers=args.workers)
    print(rep.text())
    print(rep.result_line())
    return 0 if rep.verified else 1


def cmd_verify_sort(args):
    net = _network(args)
    samples = None if args.exhaustive else args.samples
    if samples is not None:
        print(f"seed={args.seed}")
    try:
        rep = oracle.verify_sorting(
            net, args.passes, samples=samples, seed=args.seed, workers=args.workers
        )
    except oracle.VerificationError as e:
        raise UsageError(str(e)) from None
    print(rep.text())
    print(rep.result_line())
    return 0 if rep.verified else 1


def cmd_min_passes(args):
    net = _network(args)
    samples = None if args.exhaustive else args.samples
    if args.input_family == "all" and samples is not None:
        print(f"seed={args.seed}")
    kw = {"samples": samples, "seed": args.seed} if args.input_family == "all" else {}
    try:
        profile = oracle.failure_profile(net, args.input_family, args.max_passes, **kw)
    except oracle.VerificationError as e:
        raise UsageError(str(e)) from None
    for p, bad in enumerate(profile):
        print(f"passes={p} failures={bad}")
    found = next((p for p, bad in enumerate(profile) if bad == 0), None)
    monotone = all(a >= b for a, b in zip(profile, profile[1:]))
    print(f"monotone={'yes' if monotone else 'no'}")
    if found is None:
        print(f"min_passes=exceeded max_passes={args.max_passes}")
        return 1
    print(f"min_passes={found}")
    return 0


def _parse_vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise UsageError(f"bad column vector {text!r}") from None


def cmd_trace(args):
    k = args.k
    if args.c:
        c = _parse_vector(args.c)
    else:
        print(f"# seed={args.seed}", file=sys.stderr)
        c = columns.random_two_flat(k, np.random.default_rng(args.seed))
    try:
        rep = columns.check_trajectory(k, c, args.applications)
    except (columns.ColumnError, ParameterError) as e:
        raise UsageError(str(e)) from None
    b = 2 * (k - 2)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(
        ["application", "phase"]
        + [f"c{j}" for j in range(1, b + 1)]
        + ["flat", "two_flat", "balanced", "interval"]
    )
    for i, st in enumerate(rep.states):
        ok = rep.interval_ok(i)
        w.writerow(
            [i, columns.phase_of(i) if i else ""]
            + list(st)
            + [
                int(columns.is_flat(st)),
                int(columns.is_two_flat(st)),
                int(columns.is_balanced(st)),
                "na" if ok is None else "pass" if ok else "fail",
            ]
        )
    _write(buf.getvalue(), args.out)
    for msg in rep.violations:
        print(f"violation: {msg}", file=sys.stderr)
    return 0 if rep.ok else 1


def cmd_abstract_sim(args):
    k = args.k
    try:
        columns.FamilyParams(k)
    except ParameterError as e:
        raise UsageError(str(e)) from None
    if args.exhaustive:
        inputs = None
    else:
        print(f"seed={args.seed}")
        rng = np.random.default_rng(args.seed)
        inputs = [columns.random_two_flat(k, rng) for _ in range(args.samples)]
    summary = columns.sweep(k, inputs)
    print(
        f"k={k} inputs={summary.inputs} balanced={summary.balanced} "
        f"applications={summary.applications}"
    )
    print(
        f"flat after at most {summary.worst_flat_from} applications "
        f"({summary.worst_flat_from_balanced} for balanced starts; bounds {6 * k - 15} and {5 * k - 12})"
    )
    for c, msgs in summary.failures[:5]:
        print(f"violation from {c}: {msgs[0]}")
    print(summary.result_line())
    return 0 if summary.ok else 1


def _add_network(p):
    p.add_argument("network", nargs="+", metavar="NET", help="FAMILY K, or a netlist file")
    p.add_argument("--k", type=int)
    p.add_argument("--experimental", action="store_true")


def _add_sampling(p, default_samples):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--samples", type=int, default=default_samples)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="permerge", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a netlist")
    p.add_argument("family", choices=sorted(FAMILIES))
    p.add_argument("k_pos", nargs="?", type=int, metavar="K")
    p.add_argument("--k", type=int)
    p.add_argument("--out")
    p.add_argument("--experimental", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", help="depth, size, delay and period of a network")
    _add_network(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("render", help="DOT or ASCII drawing")
    _add_network(p)
    p.add_argument("--style", choices=["ascii", "dot"], default="ascii")
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)

    workers = os.cpu_count() or 1
    p = sub.add_parser("verify-merge", help="exhaustive 0-1 merging check")
    _add_network(p)
    p.add_argument("--passes", type=int, required=True)
    p.add_argument("--workers", type=int, default=workers)
    p.set_defaults(func=cmd_verify_merge)

    p = sub.add_parser("verify-sort", help="0-1 sorting check")
    _add_network(p)
    p.add_argument("--passes", type=int, required=True)
    p.add_argument("--workers", type=int, default=workers)
    _add_sampling(p, None)
    p.set_defaults(func=cmd_verify_sort)

    p = sub.add_parser("min-passes", help="failures per pass count")
    _add_network(p)
    p.add_argument("--family", dest="input_family", choices=["two_sorted", "all"], default="two_sorted")
    p.add_argument("--max-passes", type=int, default=10)
    _add_sampling(p, None)
    p.set_defaults(func=cmd_min_passes)

    p = sub.add_parser("trace", help="CSV of column-vector states along a trajectory")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--c", help="comma-separated 2-flat column vector; random if omitted")
    p.add_argument("--applications", type=int)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("abstract-sim", help="trajectory checks over many 2-flat starts")
    p.add_argument("--k", type=int, required=True)
    _add_sampling(p, 1000)
    p.set_defaults(func=cmd_abstract_sim)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParameterError, NetworkError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
