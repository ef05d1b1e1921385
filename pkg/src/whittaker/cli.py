"""Command-line driver: verification jobs with machine-readable reports.

Subcommands
-----------
verify          norm/dimension verdict for Ind_U^G(theta_a) at one group
gl2-sl2-tables  the six n = 2 count/dimension formulas and their identities
branching       GL -> SL restriction norms against the iota prediction
chartab         build, cache and summarize an exact character table
classes         build and summarize the conjugacy classes

Exit codes: 0 all checks pass, 1 a predicted/computed mismatch, 2 a size
cap was exceeded, 3 an internal exactness fault.  A mismatch is a result
(the tool exists to falsify), not a crash.
"""

from __future__ import annotations

import argparse
import sys
import time
from collections import Counter
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .localring import CONWAY_POLYS, get_ring, parse_ring
from .groups import CapExceeded, GroupSpec, TABLE_CAP, unipotent_order
from .whittaker_verify import (IntegralityError, predictions_supported,
                               sl2_printed_index, verify_multiplicity_one)
from .chartab import (CHARTAB_CAP, classify_regular, restriction_norm,
                      sl_class_profile)
from .regular import iota
from .cache import (cached_char_table, cached_group_table, cached_irreducibles,
                    chartab_cache_key, default_cache_dir, group_cache_key)
from .reporting import (EXIT_CAP, EXIT_INTERNAL, ReportEnvelope)


@dataclass
class JobConfig:
    subcommand: str
    ring: str = "mixed:3^2"
    family: str = "GL"
    n: int = 2
    a_select: str = "1"
    table_cap: int = TABLE_CAP
    chartab_cap: int = CHARTAB_CAP
    threads: int = 1
    cache_dir: str = ""
    no_cache: bool = False
    out: str = ""
    fmt: str = "text"
    timings: bool = False

    def __post_init__(self):
        if min(self.table_cap, self.chartab_cap, self.threads) < 1:
            raise ValueError("caps and thread count must be positive")

    def to_dict(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_dict(d: dict) -> "JobConfig":
        return JobConfig(**d)

    def group_spec(self) -> GroupSpec:
        return GroupSpec(self.family, self.n, parse_ring(self.ring))

    def cache_path(self) -> Path | None:
        if self.no_cache:
            return None
        return Path(self.cache_dir) if self.cache_dir else default_cache_dir()

    def selected_units(self, ring) -> list[int]:
        if self.a_select == "all":
            return ring.unit_codes()
        code = int(self.a_select)
        if not ring.is_unit(code):
            raise ValueError(f"--a {code} is not a unit of {ring.desc.key()}")
        return [code]


def _envelope(cfg: JobConfig) -> ReportEnvelope:
    env = ReportEnvelope(tool_version=__version__, config=cfg.to_dict())
    desc = parse_ring(cfg.ring)
    env.provenance["ring"] = {
        "key": desc.key(),
        "modulus_polynomial": list(CONWAY_POLYS.get((desc.p, desc.f), (0, 1))),
    }
    env.provenance["cache_keys"] = []
    return env


def _maybe_table(spec: GroupSpec, cfg: JobConfig, env: ReportEnvelope):
    if spec.order() > cfg.table_cap:
        return None
    table = cached_group_table(spec, cfg.cache_path(), cfg.table_cap)
    env.provenance["cache_keys"].append(group_cache_key(spec))
    return table


def _chartab(spec: GroupSpec, cfg: JobConfig, env: ReportEnvelope):
    table = cached_group_table(spec, cfg.cache_path(), cfg.table_cap)
    ct = cached_char_table(table, cfg.cache_path(), cfg.chartab_cap)
    # classification factors characteristic polynomials of degree n
    cached_irreducibles(spec.ring.q, spec.n, cfg.cache_path())
    env.provenance["cache_keys"].extend([group_cache_key(spec), chartab_cache_key(spec)])
    env.provenance.setdefault("dixon", {})[spec.key()] = {"e": ct.e, "r": ct.r}
    return ct


# ---------------------------------------------------------------------------
# verify


def cmd_verify(cfg: JobConfig) -> ReportEnvelope:
    env = _envelope(cfg)
    spec = cfg.group_spec()
    ring = get_ring(spec.ring)
    t0 = time.perf_counter()
    table = _maybe_table(spec, cfg, env)
    for a in cfg.selected_units(ring):
        rep = verify_multiplicity_one(spec, a, table=table, threads=cfg.threads)
        for chk in rep.checks:
            env.add(f"{chk.claim}[a={a}]", chk.claim, chk.predicted, chk.computed,
                    chk.passed, chk.informational)
    if cfg.timings:
        env.timings["verify"] = time.perf_counter() - t0
    return env


# ---------------------------------------------------------------------------
# gl2-sl2-tables

TYPE_LABELS = ("cuspidal", "split-nss", "split-ss")


def gl2_formula_row(q: int, ell: int) -> tuple[dict, dict]:
    counts = {
        "cuspidal": (q - 1) * (q * q - 1) * q ** (2 * ell - 3) // 2,
        "split-nss": (q - 1) * q ** (2 * ell - 2),
        "split-ss": q ** (2 * ell - 3) * (q - 1) ** 3 // 2,
    }
    dims = {
        "cuspidal": q ** (ell - 1) * (q - 1),
        "split-nss": (q * q - 1) * q ** (ell - 2),
        "split-ss": q ** (ell - 1) * (q + 1),
    }
    return counts, dims


def sl2_formula_row(q: int, ell: int) -> tuple[dict, dict] | None:
    if q % 2 == 0:
        return None  # the sl_2 table assumes odd residue characteristic
    counts = {
        "cuspidal": (q * q - 1) * q ** (ell - 2) // 2,
        "split-nss": 4 * q ** (ell - 1),
        "split-ss": q ** (ell - 2) * (q - 1) ** 2 // 2,
    }
    dims = {
        "cuspidal": q ** (ell - 1) * (q - 1),
        "split-nss": (q * q - 1) * q ** (ell - 2) // 2,
        "split-ss": q ** (ell - 1) * (q + 1),
    }
    return counts, dims


def _classified_profile(ct) -> tuple[Counter, dict]:
    flags = classify_regular(ct)
    regs = [f for f in flags if f.regular]
    counts = Counter(f.label for f in regs)
    dims: dict[str, set] = {}
    for f in regs:
        dims.setdefault(f.label, set()).add(f.degree)
    return counts, dims


def cmd_tables(cfg: JobConfig) -> ReportEnvelope:
    env = _envelope(cfg)
    desc = parse_ring(cfg.ring)
    q, ell = desc.q, desc.ell
    if ell < 2:
        raise CapExceeded("the n = 2 tables require l >= 2")
    t0 = time.perf_counter()

    gl_counts, gl_dims = gl2_formula_row(q, ell)
    gl_spec = GroupSpec("GL", 2, desc)
    gl_index = gl_spec.order() // unipotent_order(2, desc)
    gl_sum = sum(gl_counts[t] * gl_dims[t] for t in TYPE_LABELS)
    env.add("gl2-dimension-sum-identity", "gl2-regular-dimension-sum",
            (q * q - 1) * (q - 1) * q ** (3 * ell - 3), gl_sum)
    env.add("gl2-sum-equals-index", "gl2-regular-dimension-sum", gl_index, gl_sum)

    sl_row = sl2_formula_row(q, ell)
    sl_spec = GroupSpec("SL", 2, desc)
    sl_index = sl_spec.order() // unipotent_order(2, desc)
    if sl_row is not None:
        sl_counts, sl_dims = sl_row
        sl_sum = sum(sl_counts[t] * sl_dims[t] for t in TYPE_LABELS)
        env.add("sl2-dimension-sum-identity", "sl2-regular-dimension-sum",
                (q * q - 1) * (q + 1) * q ** (2 * ell - 3), sl_sum)
        env.add("sl2-sum-exceeds-index", "sl2-induced-is-proper-subset",
                True, sl_sum > sl_index)
    else:
        env.add("sl2-formula-row-not-applicable", "sl2-table-assumes-odd-q",
                None, None, True, informational=True)
    env.add("sl2-printed-index-identity", "sl2-printed-index-identity",
            sl2_printed_index(q, ell), sl_index,
            sl2_printed_index(q, ell) == sl_index, informational=True)

    # cross-check each cell against the character-table classification
    for family, spec, row in (("gl", gl_spec, (gl_counts, gl_dims)),
                              ("sl", sl_spec, sl_row)):
        if row is None:
            continue
        counts, dims = row
        if spec.order() > cfg.chartab_cap or spec.order() > cfg.table_cap:
            env.add(f"{family}2-chartab-crosscheck-skipped", "cap-exceeded-downgrade",
                    None, f"|G| = {spec.order()}", True, informational=True)
            continue
        ct = _chartab(spec, cfg, env)
        got_counts, got_dims = _classified_profile(ct)
        for t in TYPE_LABELS:
            env.add(f"{family}2-count-{t}", f"{family}2-regular-count-{t}",
                    counts[t], got_counts.get(t, 0))
            env.add(f"{family}2-dim-{t}", f"{family}2-regular-dimension-{t}",
                    [dims[t]], sorted(got_dims.get(t, set())),
                    got_dims.get(t, set()) == {dims[t]})
    if cfg.timings:
        env.timings["tables"] = time.perf_counter() - t0
    return env


# ---------------------------------------------------------------------------
# branching


def cmd_branching(cfg: JobConfig) -> ReportEnvelope:
    env = _envelope(cfg)
    desc = parse_ring(cfg.ring)
    n = cfg.n
    gl_spec = GroupSpec("GL", n, desc)
    sl_spec = GroupSpec("SL", n, desc)
    t0 = time.perf_counter()
    ct = _chartab(gl_spec, cfg, env)
    sl_table = cached_group_table(sl_spec, cfg.cache_path(), cfg.table_cap)
    flags = classify_regular(ct)
    regs = [f for f in flags if f.regular]
    profile = sl_class_profile(ct, sl_table)
    norms = {f.index: restriction_norm(ct, f.index, sl_table, profile) for f in regs}
    env.add("branching-norm-at-most-n", "restriction-constituent-bound",
            f"<= {n}", max(norms.values()), max(norms.values()) <= n)
    assert_iota = predictions_supported(sl_spec)
    by_label: dict[str, set] = {}
    for f in regs:
        by_label.setdefault(f.label, set()).add(norms[f.index])
    for label, got in sorted(by_label.items()):
        tau = next(f.tau for f in regs if f.label == label)
        if assert_iota:
            env.add(f"branching-iota-{label}", "restriction-norm-equals-iota",
                    [iota(tau, desc.q - 1)], sorted(got),
                    got == {iota(tau, desc.q - 1)})
        else:
            env.add(f"branching-norms-{label}", "restriction-norms-observed",
                    None, sorted(got), True, informational=True)
    env.add("branching-regular-count", "gl-regular-count", len(regs), len(regs))
    if cfg.timings:
        env.timings["branching"] = time.perf_counter() - t0
    return env


# ---------------------------------------------------------------------------
# chartab / classes


def cmd_chartab(cfg: JobConfig) -> ReportEnvelope:
    env = _envelope(cfg)
    spec = cfg.group_spec()
    t0 = time.perf_counter()
    ct = _chartab(spec, cfg, env)
    ct.verify()
    env.add("class-count", "conjugacy-class-count", ct.k, ct.k)
    env.add("sum-degree-squares", "character-completeness",
            len(ct.table), int(np.sum(ct.degrees**2)))
    env.add("orthogonality-exact", "character-orthogonality", True, True)
    env.provenance["degrees"] = sorted(int(d) for d in ct.degrees)
    if cfg.timings:
        env.timings["chartab"] = time.perf_counter() - t0
    return env


def cmd_classes(cfg: JobConfig) -> ReportEnvelope:
    from .chartab import conjugacy_classes

    env = _envelope(cfg)
    spec = cfg.group_spec()
    t0 = time.perf_counter()
    table = cached_group_table(spec, cfg.cache_path(), cfg.table_cap)
    env.provenance["cache_keys"].append(group_cache_key(spec))
    cd = conjugacy_classes(table)
    env.add("class-partition", "class-sizes-sum-to-order",
            len(table), int(cd.sizes.sum()))
    env.add("class-count", "conjugacy-class-count", cd.k, cd.k)
    env.provenance["class_sizes"] = sorted(int(s) for s in cd.sizes)
    if cfg.timings:
        env.timings["classes"] = time.perf_counter() - t0
    return env


# ---------------------------------------------------------------------------
# entry point


COMMANDS = {
    "verify": cmd_verify,
    "gl2-sl2-tables": cmd_tables,
    "branching": cmd_branching,
    "chartab": cmd_chartab,
    "classes": cmd_classes,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="whittaker",
        description="Exact verification of Whittaker-model multiplicity, "
                    "counting and branching identities over finite local rings.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--group", default="GL2",
                       help="group family and rank, e.g. GL2, SL3")
        p.add_argument("--ring", default="mixed:3^2",
                       help="ring descriptor: mixed:p^l or equal:q^l")
        p.add_argument("--a", dest="a_select", default="1",
                       help="unit twist code, or 'all'")
        p.add_argument("--all-units", dest="a_select", action="store_const",
                       const="all", help="shorthand for --a all")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--table-cap", type=int, default=TABLE_CAP)
        p.add_argument("--chartab-cap", type=int, default=CHARTAB_CAP)
        p.add_argument("--cache-dir", default="")
        p.add_argument("--no-cache", action="store_true")
        p.add_argument("--out", default="", help="also write the report to a file")
        p.add_argument("--format", dest="fmt", choices=("text", "json"),
                       default="text")
        p.add_argument("--timings", action="store_true",
                       help="record wall times (breaks byte-level determinism)")
    return parser


def parse_group(text: str) -> tuple[str, int]:
    fam = text[:2].upper()
    if fam not in ("GL", "SL") or not text[2:].isdigit():
        raise ValueError(f"bad group {text!r}, expected e.g. GL2 or SL3")
    return fam, int(text[2:])


def config_from_args(args: argparse.Namespace) -> JobConfig:
    family, n = parse_group(args.group)
    return JobConfig(
        subcommand=args.subcommand,
        ring=args.ring,
        family=family,
        n=n,
        a_select=args.a_select,
        table_cap=args.table_cap,
        chartab_cap=args.chartab_cap,
        threads=args.threads,
        cache_dir=args.cache_dir,
        no_cache=args.no_cache,
        out=args.out,
        fmt=args.fmt,
        timings=args.timings,
    )


def run(cfg: JobConfig) -> ReportEnvelope:
    return COMMANDS[cfg.subcommand](cfg)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        env = run(cfg)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except IntegralityError as exc:
        print(f"internal arithmetic fault: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    rendered = env.to_text() if cfg.fmt == "text" else env.to_json()
    sys.stdout.write(rendered)
    if cfg.out:
        Path(cfg.out).write_text(rendered)
    return env.exit_code


if __name__ == "__main__":
    sys.exit(main())
