"""Periodic merging comparator networks derived from the log N-periodic sorter CW_k."""
from .builders import FamilyParams, build, build_cw, build_m, build_m4, build_p, build_p4
from .netcore import (
    Comparator,
    Network,
    Stage,
    compact_form,
    delay,
    delete_registers,
    format_netlist,
    fst,
    load_netlist,
    lst,
    parse_netlist,
    regs,
    run,
    run_batch,
    run_periodic,
    run_stage,
    union,
)
from .oracle import (
    VerificationReport,
    is_sorted,
    is_two_sorted,
    merge_oracle,
    min_passes,
    verify_merging,
    verify_sorting,
)

__version__ = "0.1.0"
