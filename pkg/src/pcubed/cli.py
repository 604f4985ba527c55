"""Command-line front end: classification tables, orbit dumps, verification.

Exit codes: 0 on success, 1 when a --check assertion or verification fails,
2 on usage errors (argparse's convention).
"""

import argparse
import csv
import io
import json
import sys

from .graded_ring import verify_identity_suite
from .groups import FAMILIES, Family, build_group, center, enumerate_automorphisms, normal_abelian_subgroup_classes
from .h4_models import ActionGenerator, action_generators, cross_check_actions, h4_model
from .lhs_morita import (
    consistency_checks,
    emit_table,
    expected_component_count,
    morita_components,
    verify_pages,
)
from .orbits import DEFAULT_MAX_STATES, enumerate_orbits, expected_orbit_count, orbit_rows
from .quadforms import congruence_invariant, representatives, select_h
from .report import Report


def _parse_primes(text: str) -> list[int]:
    try:
        primes = [int(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}")
    if not primes:
        raise argparse.ArgumentTypeError("empty prime list")
    return primes


def _families(args) -> tuple[Family, ...]:
    if getattr(args, "family", None):
        return (Family.parse(args.family),)
    return FAMILIES


def _write(args, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_classify(args) -> int:
    failures = 0
    out = []
    payload = []
    for p in args.primes:
        counts = {}
        for fam in _families(args):
            index = enumerate_orbits(h4_model(fam, p), max_states=args.max_states)
            counts[fam] = len(index.orbits)
            payload.append(
                {
                    "p": p,
                    "family": fam.value,
                    "orbits": orbit_rows(index),
                }
            )
        total = sum(counts.values())
        for fam, n in counts.items():
            expected = expected_orbit_count(fam, p)
            mark = "" if n == expected else f"  MISMATCH (expected {expected})"
            if n != expected:
                failures += 1
            out.append(f"p={p}  {fam.value:<13} {n:>4} orbits{mark}")
        if len(counts) == len(FAMILIES):
            expected_total = 6 * p + 43
            mark = "" if total == expected_total else "  MISMATCH"
            if total != expected_total:
                failures += 1
            out.append(f"p={p}  total         {total:>4} = 6*{p}+43{mark}")
    if args.format == "json":
        _write(args, json.dumps(payload, indent=2))
    else:
        _write(args, "\n".join(out))
    if args.check and failures:
        return 1
    return 0


def cmd_morita(args) -> int:
    failures = 0
    chunks = []
    for p in args.primes:
        graph = morita_components(p, max_states=args.max_states)
        table = emit_table(p, fmt=args.format, graph=graph)
        n = len(graph.components)
        hist = graph.size_histogram()
        summary = (
            f"p={p}: {n} Morita classes (expected {expected_component_count(p)}), "
            f"size histogram {dict(sorted(hist.items()))}"
        )
        if args.format == "md":
            chunks.append(f"## p = {p}\n\n{table}\n{summary}\n")
        else:
            chunks.append(table)
        if n != expected_component_count(p):
            failures += 1
        nontrivial = graph.nontrivial()
        if len(nontrivial) != p + 10 or hist.get(3, 0) != 1 or hist.get(2, 0) != p + 9:
            failures += 1
    _write(args, "\n".join(chunks))
    if args.check and failures:
        return 1
    return 0


def cmd_quadforms(args) -> int:
    p = args.primes[0] if args.primes else 3
    lines = []
    if args.which_h:
        lines.append(f"h = {select_h(p)}")
    else:
        reps = representatives(args.n, p)
        lines.append(f"{2 * args.n + 1} congruence classes of rank <= {args.n} over F_{p}:")
        for q in reps:
            inv = congruence_invariant(q)
            diag = [q.matrix[i][i] for i in range(q.n)]
            lines.append(f"  diag{tuple(diag)}  rank={inv.rank}  disc={inv.disc_class}")
    _write(args, "\n".join(lines))
    return 0


def cmd_orbits_dump(args) -> int:
    rows = []
    for p in args.primes:
        for fam in _families(args):
            index = enumerate_orbits(h4_model(fam, p), max_states=args.max_states)
            rows.extend(orbit_rows(index))
    if args.format == "json":
        _write(args, json.dumps(rows, indent=2))
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["family", "p", "orbit", "rep_coeffs", "rep_label", "size"])
        for r in rows:
            writer.writerow(
                [r["family"], r["p"], r["orbit"], " ".join(map(str, r["rep_coeffs"])), r["rep_label"], r["size"]]
            )
        _write(args, buf.getvalue())
    return 0


def _corrupt_generators(fam: Family, p: int, row: int, col: int):
    gens = list(action_generators(fam, p))
    mat = [list(r) for r in gens[0].matrix]
    modulus = gens[0].model.moduli[row]
    mat[row][col] = (mat[row][col] + 1) % modulus
    gens[0] = ActionGenerator(gens[0].model, tuple(tuple(r) for r in mat), gens[0].provenance + " CORRUPTED")
    return tuple(gens)


def cmd_verify(args) -> int:
    reports = []
    for p in args.primes:
        rep = Report(f"verification at p = {p}")

        rep.extend(verify_identity_suite(p))
        for fam in FAMILIES:
            rep.extend(cross_check_actions(fam, p))
        rep.extend(verify_pages(p))

        indices = {}
        for fam in FAMILIES:
            gens = action_generators(fam, p)
            if args.corrupt and fam is Family.parse(args.corrupt.split(":")[0]):
                _, row, col = args.corrupt.split(":")
                gens = _corrupt_generators(fam, p, int(row), int(col))
            indices[fam] = enumerate_orbits(h4_model(fam, p), gens, max_states=args.max_states)
        for fam in FAMILIES:
            n = len(indices[fam].orbits)
            rep.add(
                f"counts.{fam.value}.p{p}",
                n == expected_orbit_count(fam, p),
                f"{n} orbits",
            )
        graph = morita_components(p, indices=indices)
        rep.add(
            f"counts.morita.p{p}",
            len(graph.components) == expected_component_count(p),
            f"{len(graph.components)} components",
        )
        hist = graph.size_histogram()
        rep.add(
            f"counts.morita_histogram.p{p}",
            hist.get(2, 0) == p + 9 and hist.get(3, 0) == 1,
            f"{hist}",
        )
        rep.extend(consistency_checks(p, graph=graph))

        for n in (1, 2, 3):
            reps_n = representatives(n, p)
            invs = {congruence_invariant(q) for q in reps_n}
            rep.add(
                f"quadforms.classes.n{n}.p{p}",
                len(reps_n) == 2 * n + 1 and len(invs) == 2 * n + 1,
                f"{len(reps_n)} representatives",
            )

        if args.deep or p == 3:
            rep.extend(_group_oracles(p))
        reports.append(rep)

    text = "\n\n".join(r.render() for r in reports)
    _write(args, text)
    return 0 if all(r.ok for r in reports) else 1


def _group_oracles(p: int):
    """Brute-force group checks; full automorphism enumeration only at p=3."""
    from .report import CheckResult

    checks = []
    if p != 3:
        return checks
    expected_aut = {
        Family.CYCLIC: 18,
        Family.P2XP: 108,
        Family.ELEM_ABELIAN: 11232,
        Family.HEISENBERG: 432,
        Family.GP: 54,
    }
    for fam in FAMILIES:
        G = build_group(fam, p)
        auts = enumerate_automorphisms(G)
        checks.append(
            CheckResult(
                f"groups.aut_order.{fam.value}.p{p}",
                len(auts) == expected_aut[fam],
                f"|Aut| = {len(auts)}",
            )
        )
    H = build_group(Family.HEISENBERG, p)
    zc = center(H)
    c_gen = H.gen_names["C"]
    checks.append(
        CheckResult(
            "groups.center.heisenberg.p3",
            zc == H.closure([c_gen]),
            f"|Z| = {len(zc)}",
        )
    )
    expected_classes = {
        Family.CYCLIC: 2,
        Family.P2XP: 4,
        Family.ELEM_ABELIAN: 2,
        Family.HEISENBERG: 2,
        Family.GP: 3,
    }
    for fam in FAMILIES:
        G = build_group(fam, p)
        classes = normal_abelian_subgroup_classes(G)
        checks.append(
            CheckResult(
                f"groups.subgroup_classes.{fam.value}.p{p}",
                len(classes) == expected_classes[fam],
                f"{len(classes)} classes: " + "; ".join(
                    ",".join(c.generator_words) for c in classes
                ),
            )
        )
    return checks


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pcubed",
        description="Classify pointed fusion categories of global dimension p^3.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, fmt_choices=("md", "csv", "json"), default_fmt="md"):
        sp.add_argument("-p", "--primes", type=_parse_primes, default=[3], help="comma list of odd primes")
        sp.add_argument("--format", choices=fmt_choices, default=default_fmt)
        sp.add_argument("-o", "--output", help="write output to a file instead of stdout")
        sp.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES, help="orbit state-space bound")

    sp = sub.add_parser("classify", help="per-family orbit counts and totals")
    common(sp, fmt_choices=("md", "json"))
    sp.add_argument("--family", help="restrict to one family")
    sp.add_argument("--check", action="store_true", help="exit nonzero on count mismatches")
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("morita", help="merged weak-Morita tables")
    common(sp)
    sp.add_argument("--check", action="store_true")
    sp.set_defaults(fn=cmd_morita)

    sp = sub.add_parser("verify", help="run the full verification report")
    common(sp, fmt_choices=("md",))
    sp.add_argument("--deep", action="store_true", help="run group oracles for every prime")
    sp.add_argument(
        "--corrupt",
        help="negative control: 'family:row:col' perturbs one action-matrix entry",
    )
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("quadforms", help="congruence classes of quadratic forms")
    common(sp, fmt_choices=("md",))
    sp.add_argument("-n", type=int, default=3, choices=(1, 2, 3))
    sp.add_argument("--which-h", action="store_true", help="print the h selection")
    sp.set_defaults(fn=cmd_quadforms)

    sp = sub.add_parser("orbits-dump", help="one row per orbit, csv or json")
    common(sp, fmt_choices=("csv", "json"), default_fmt="csv")
    sp.add_argument("--family", help="restrict to one family")
    sp.set_defaults(fn=cmd_orbits_dump)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ValueError as exc:
        print(f"pcubed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
