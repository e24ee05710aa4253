"""Command-line entry point: ``hitchin-monodromy <subcommand> ...``.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
usage or domain errors (bad genus, parity mismatch, state guard).
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import asdict, dataclass

from .copeland import DomainError, build_complex, complex_to_dict, validate_checklist
from .generators import build_generators, matrix_to_dict, theorem_group, verify_group_relations
from .gf2 import Gf2Error
from .invariants import (FAMILIES, GENUS_FAMILIES, ParityError, dim_identity_check, group_dims,
                         lefschetz_upp, sp2p2p_dims, spectral_genus, supp_constraints,
                         sweep_invariants, toledo, upp_from_m, upp_from_vw)
from .orbits import (StateGuardError, compare_partitions, component_count, enumerate_orbits,
                     invariant_matches, warm_up)
from .reports import FORMAT_TAG, SuiteResult, ValidationReport, emit

SUITES = ("graph", "generators", "orbits", "invariants", "all")
SUITE_DEFAULT_GENUS = {"graph": 10, "generators": 6, "orbits": 4, "invariants": 10}
EXHAUSTIVE_INVARIANT_BITS = 18


class UsageError(Exception):
    pass


@dataclass
class SuiteOptions:
    max_genus: int | None = None
    max_p: int = 5
    force: bool = False
    threads: int | None = None
    seed: int = 0
    sample: int = 4096


def _timed(result: SuiteResult, report: ValidationReport, prefix: str, started: float) -> None:
    share = (time.perf_counter() - started) * 1000.0 / max(1, len(report.items))
    before = len(result.items)
    result.extend(report, prefix)
    for it in result.items[before:]:
        it.elapsed_ms = share


def _genera(name: str, opts: SuiteOptions) -> range:
    top = SUITE_DEFAULT_GENUS[name] if opts.max_genus is None else opts.max_genus
    if name == "generators":
        top = min(top, SUITE_DEFAULT_GENUS["generators"])
    return range(3, top + 1)


def _graph_suite(result: SuiteResult, opts: SuiteOptions) -> None:
    for g in _genera("graph", opts):
        t = time.perf_counter()
        _timed(result, validate_checklist(build_complex(g)), "graph/g%d/" % g, t)


def _generator_suite(result: SuiteResult, opts: SuiteOptions) -> None:
    for g in _genera("generators", opts):
        t = time.perf_counter()
        _timed(result, verify_group_relations(build_generators(g)), "generators/g%d/" % g, t)


def _orbit_suite(result: SuiteResult, opts: SuiteOptions) -> None:
    warm_up()
    for g in _genera("orbits", opts):
        if g > 6 and not opts.force:
            raise UsageError("orbit enumeration above genus 6 needs --force")
        t = time.perf_counter()
        rep = ValidationReport("orbits g=%d" % g)
        expected, _ = component_count(g)
        thm = enumerate_orbits(theorem_group(g), g, force=opts.force, threads=opts.threads, group="theorem")
        gs = build_generators(g, with_theorem=False)
        gra = enumerate_orbits(gs.p2_matrices(), g, force=opts.force, threads=opts.threads, group="graph")
        rep.add("theorem_orbit_count", thm.orbit_count == expected, expected, thm.orbit_count)
        rep.add("graph_orbit_count", gra.orbit_count == expected, expected, gra.orbit_count)
        same = compare_partitions(thm, gra)
        rep.add("partitions_equal", same, True, same)
        rep.add("singletons", thm.singleton_count == 4 ** g, 4 ** g, thm.singleton_count)
        total = int(thm.orbit_sizes.sum())
        rep.add("sizes_sum", total == thm.state_count, thm.state_count, total)
        if thm.dim <= EXHAUSTIVE_INVARIANT_BITS:
            ok = invariant_matches(thm)
            how = "exhaustive"
        else:
            ok = invariant_matches(thm, sample=opts.sample, seed=opts.seed)
            how = "sampled %d states, seed %d" % (opts.sample, opts.seed)
        rep.add("invariant_separates_orbits", ok, True, ok, how)
        rep.add("component_count_first", component_count(g)[0] == thm.orbit_count,
                list(component_count(g)), thm.orbit_count)
        _timed(result, rep, "orbits/g%d/" % g, t)


def _invariant_suite(result: SuiteResult, opts: SuiteOptions) -> None:
    top = SUITE_DEFAULT_GENUS["invariants"] if opts.max_genus is None else max(2, opts.max_genus)
    t = time.perf_counter()
    _timed(result, sweep_invariants(max_p=opts.max_p, max_genus=top), "invariants/", t)


def run_suite(name: str, opts: SuiteOptions | None = None) -> SuiteResult:
    opts = opts or SuiteOptions()
    if name not in SUITES:
        raise UsageError("unknown suite %r (choose from %s)" % (name, ", ".join(SUITES)))
    result = SuiteResult(name)
    steps = {"graph": _graph_suite, "generators": _generator_suite,
             "orbits": _orbit_suite, "invariants": _invariant_suite}
    for key in (SUITES[:-1] if name == "all" else (name,)):
        steps[key](result, opts)
    return result


# --------------------------------------------------------------------------
# subcommands


def _cmd_graph(args) -> tuple[dict, bool]:
    c = build_complex(args.genus)
    out = complex_to_dict(c)
    out["format"] = FORMAT_TAG
    out["complex_format"] = "copeland/1"
    out.pop("suite_format", None)
    rep = validate_checklist(c)
    out["checklist"] = [{"check": i.check_id, "status": i.status} for i in rep.items]
    return out, rep.passed


def _cmd_generators(args) -> tuple[dict, bool]:
    g = args.genus
    out = {"format": FORMAT_TAG, "kind": "generators", "genus": g, "group": args.group}
    ok = True
    if args.group == "graph":
        gs = build_generators(g, with_theorem=False)
        out["generators"] = [{"edge": r.edge, "label": r.label, "klass": r.klass,
                              "p2": None if r.on_p2 is None else matrix_to_dict(r.on_p2),
                              "c1": matrix_to_dict(r.on_c1)} for r in gs.records]
        if args.verify:
            rep = verify_group_relations(gs)
            out["checks"] = [{"check": i.check_id, "status": i.status} for i in rep.items]
            ok = rep.passed
    else:
        gens = theorem_group(g)
        n_elem = 2 * g * (4 * g - 6)
        out["generators"] = [{"index": k, "kind": "elementary" if k < n_elem else "transposition",
                              "p2": matrix_to_dict(m)} for k, m in enumerate(gens)]
    out["count"] = len(out["generators"])
    return out, ok


def _cmd_orbits(args) -> tuple[dict, bool]:
    g = args.genus
    if g > 6 and not args.force:
        raise UsageError("orbit enumeration above genus 6 needs --force")
    warm_up()
    groups = ("theorem", "graph") if args.group == "both" else (args.group,)
    reports = {}
    for grp in groups:
        gens = theorem_group(g) if grp == "theorem" else build_generators(g, with_theorem=False).p2_matrices()
        reports[grp] = enumerate_orbits(gens, g, force=args.force, threads=args.threads, group=grp)
    out = {"format": FORMAT_TAG, "kind": "orbits", "genus": g,
           "groups": {k: v.to_dict(timings=args.timings) for k, v in reports.items()}}
    expected = component_count(g)[0]
    ok = all(r.orbit_count == expected for r in reports.values())
    if len(reports) == 2:
        same = compare_partitions(reports["theorem"], reports["graph"])
        out["partitions_equal"] = same
        ok = ok and same
    first = next(iter(reports.values()))
    out["orbit_count"] = first.orbit_count
    if args.timings:
        out["wall_time_ms"] = round(sum(r.wall_time_ms for r in reports.values()), 3)
    return out, ok


def _cmd_invariants(args) -> tuple[dict, bool]:
    kind, p, g = args.kind, args.p, args.genus
    out = {"format": FORMAT_TAG, "kind": "invariants/" + kind, "genus": g}
    ok = True
    if kind == "upp":
        if args.v is not None and args.w is not None:
            u = upp_from_vw(p, g, args.v, args.w)
        elif args.m is not None and args.mt is not None:
            u = upp_from_m(p, g, args.m, args.mt)
        else:
            raise UsageError("upp needs --v and --w, or --m and --mt")
        t = toledo(p, g, u.v, u.w)
        lef = lefschetz_upp(p, g, u.m_tilde, u.m)
        out.update(u.to_dict())
        out.update({"toledo": t.tau, "toledo_opposite_sign": t.tau_opposite_sign,
                    "toledo_bound": t.bound, "toledo_within_bound": t.within_bound,
                    "toledo_note": t.note, "lefschetz": lef.lefschetz,
                    "h_plus": lef.h_plus, "h_minus": lef.h_minus})
        ok = u.valid
    elif kind == "supp":
        if args.w is None:
            raise UsageError("supp needs --w")
        r = supp_constraints(p, g, args.w)
        out.update({"p": p, "w": args.w, "v": -args.w, **r._asdict()})
        ok = r.valid and r.nm_degree_check
    elif kind == "sp2p2p":
        out.update(asdict(sp2p2p_dims(p, g)))
    elif kind == "dims":
        d = group_dims(args.family, args.n, g)
        out.update(asdict(d))
        out["identity_holds"] = dim_identity_check(args.family, args.n, g)
        ok = out["identity_holds"]
    elif kind == "genus":
        out.update({"family": args.genus_family, "n": args.n,
                    "genus_value": spectral_genus(args.genus_family, args.n, g)})
    return out, ok


def _cmd_check(args) -> tuple[dict, bool]:
    opts = SuiteOptions(max_genus=args.max_genus, max_p=args.max_p, force=args.force,
                        threads=args.threads, seed=args.seed)
    res = run_suite(args.suite, opts)
    return res.to_dict(timings=args.timings), res.passed


# --------------------------------------------------------------------------
# parser


def _globals_parser(suppress: bool) -> argparse.ArgumentParser:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    gp = argparse.ArgumentParser(add_help=False)
    gp.add_argument("--emit", choices=("json", "csv", "text"), default=d("json"), help="output format")
    gp.add_argument("--out", default=d(None), metavar="PATH", help="write the report here instead of stdout")
    gp.add_argument("--seed", type=int, default=d(0), help="seed for sampled checks")
    gp.add_argument("--threads", type=int, default=d(None), help="cap on worker threads")
    gp.add_argument("--force", action="store_true", default=d(False), help="lift the enumeration guards")
    gp.add_argument("--timings", action="store_true", default=d(False),
                    help="include wall-clock fields (output is then no longer byte-stable)")
    return gp


def build_parser() -> argparse.ArgumentParser:
    sub_globals = _globals_parser(suppress=True)
    parser = argparse.ArgumentParser(prog="hitchin-monodromy", parents=[_globals_parser(False)],
                                     description="Monodromy of the SL(2) Hitchin fibration on points of order two.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph", parents=[sub_globals], help="build and validate the Copeland complex")
    p.add_argument("--genus", type=int, required=True)
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("generators", parents=[sub_globals], help="emit monodromy generators")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--group", choices=("graph", "theorem"), default="graph")
    p.add_argument("--verify", action="store_true", help="run the relation checks")
    p.set_defaults(func=_cmd_generators)

    p = sub.add_parser("orbits", parents=[sub_globals], help="enumerate orbits on P[2]")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--group", choices=("graph", "theorem", "both"), default="theorem")
    p.set_defaults(func=_cmd_orbits)

    p = sub.add_parser("invariants", parents=[sub_globals], help="closed-form spectral invariants")
    p.add_argument("kind", choices=("upp", "supp", "sp2p2p", "dims", "genus"))
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--v", type=int)
    p.add_argument("--w", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--mt", type=int)
    p.add_argument("--family", choices=FAMILIES, default="SL", help="group family for dims")
    p.add_argument("--genus-family", choices=GENUS_FAMILIES, default="classical", help="curve for genus")
    p.add_argument("--n", type=int, default=2)
    p.set_defaults(func=_cmd_invariants)

    p = sub.add_parser("check", parents=[sub_globals], help="run a verification suite")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--max-genus", type=int)
    p.add_argument("--max-p", type=int, default=5)
    p.set_defaults(func=_cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, ok = args.func(args)
    except (UsageError, DomainError, ParityError, StateGuardError, Gf2Error, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    emit(payload, args.emit, path=args.out, stream=None if args.out else sys.stdout)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
