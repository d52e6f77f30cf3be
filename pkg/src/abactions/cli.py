"""Command-line front end: golden tables, classification reports and verification suites.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 infeasible
signature, 4 ceiling exceeded, 5 outside the supported range.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass

from .abelian import AbelianGroup, Signature, genus_from_signature
from .classify import count_actions, genus_census
from .errors import CeilingExceeded, InfeasibleSignature, OutOfScope
from .ff import is_prime
from .genvec import orbit_classes_oracle
from .ramified.omega import ENUM_CEILING, TABLE51_PAIRS, omega_count, orbit_count_oracle, table51
from .ramified.pipeline import build_strata_report
from .unramified import (canonical_reps_elementary, classify_unramified, count_elementary, cup_classes,
                         genus65_catalogue, normal_form_family)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_CEILING, EXIT_SCOPE = 0, 1, 2, 3, 4, 5

TABLE51_COLUMNS = ["r", "v", "p", "closed_form", "oracle", "pipeline", "match"]
CENSUS_COLUMNS = ["prime", "rank", "genus", "signature", "h_vector", "e_vector", "count"]
GROUP_COLUMNS = ["group", "rho", "genus", "at_most", "at_least", "oracle", "classes"]
VERIFY_COLUMNS = ["suite", "case", "expected", "observed", "status"]


# Output -------------------------------------------------------------------------

@dataclass
class Table:
    columns: list[str]
    rows: list[dict]
    payload: object  # what --format json writes
    notes: tuple[str, ...] = ()

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.payload, indent=2) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.DictWriter(buf, self.columns, lineterminator="\n", extrasaction="ignore")
            w.writeheader()
            w.writerows(self.rows)
            return buf.getvalue()
        width = {c: max(len(c), *(len(_cell(r.get(c))) for r in self.rows)) if self.rows else len(c)
                 for c in self.columns}
        lines = ["  ".join(c.ljust(width[c]) for c in self.columns)]
        lines += ["  ".join(_cell(r.get(c)).ljust(width[c]) for c in self.columns) for r in self.rows]
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines) + "\n"


def _cell(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "yes" if x else "no"
    return str(x)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


# table51 ------------------------------------------------------------------------

def table51_row(r: int, v: int, p: int, oracle_ceiling: int, with_pipeline: bool = True) -> dict:
    try:
        closed = table51(r, v, p)
    except OutOfScope:
        closed = None
    try:
        oracle = orbit_count_oracle(v, r, p, oracle_ceiling)
    except CeilingExceeded:
        oracle = None
    pipe = None
    if with_pipeline and p > r and omega_count(v, r, p):
        pipe = build_strata_report(None, v, r, p).total
    seen = [x for x in (closed, oracle, pipe) if x is not None]
    return {"r": r, "v": v, "p": p, "closed_form": closed, "oracle": oracle, "pipeline": pipe,
            "match": len(seen) >= 2 and len(set(seen)) == 1}


def cmd_table51(primes: Sequence[int], pairs: Sequence[tuple[int, int]], oracle_ceiling: int,
                with_pipeline: bool = True) -> Table:
    rows = [table51_row(r, v, p, oracle_ceiling, with_pipeline) for r, v in pairs for p in primes]
    return Table(TABLE51_COLUMNS, rows, rows)


# classify -----------------------------------------------------------------------

def _census_row(prime: int, rank: int, e: dict) -> dict:
    return {"prime": prime, "rank": rank, "genus": e["genus"], "signature": e["signature"],
            "h_vector": " ".join(map(str, e["h-vector"])), "e_vector": " ".join(map(str, e["e-vector"])),
            "count": e["count"]}


def cmd_classify(args: argparse.Namespace) -> Table:
    if args.group:
        G = AbelianGroup.parse(args.group)
        sig = Signature.parse(args.signature) if args.signature else Signature(2)
        if sig.periods:
            if not G.is_elementary():
                raise OutOfScope("ramified signatures are supported for elementary abelian groups only")
            return _count_table(G.factors[0], G.rank, sig, args)
        genus = genus_from_signature(G.order, sig)
        if args.genus is not None and args.genus != genus:
            raise InfeasibleSignature(f"{G} with {sig} acts on genus {genus}, not {args.genus}")
        rep = classify_unramified(G, sig.rho, args.oracle_ceiling)
        payload = rep.as_json()
        if not args.genus_check:
            payload.pop("representatives")
        row = {"group": ",".join(map(str, G.factors)), "rho": sig.rho, "genus": rep.genus,
               "at_most": rep.upper_bound, "at_least": rep.cup_lower_bound, "oracle": rep.oracle_count,
               "classes": rep.exact}
        return Table(GROUP_COLUMNS, [row], payload)
    if args.prime is None or args.rank is None:
        raise _Usage("classify needs --group, or --prime and --rank")
    p = args.prime[0]
    if args.signature:
        return _count_table(p, args.rank, Signature.parse(args.signature), args)
    if args.genus is None:
        raise _Usage("classify needs --signature or --genus")
    rep = genus_census(p, args.rank, args.genus, args.oracle_ceiling, args.workers)
    payload = rep.as_json()
    rows = [_census_row(p, args.rank, e) for e in payload["entries"]]
    rows.append({"prime": p, "rank": args.rank, "genus": args.genus, "signature": "total", "count": rep.total})
    return Table(CENSUS_COLUMNS, rows, payload, tuple(rep.notes))


def _count_table(p: int, w: int, sig: Signature, args: argparse.Namespace) -> Table:
    rep = count_actions(p, w, sig, args.oracle_ceiling)
    if rep.genus is None or rep.note:
        raise InfeasibleSignature(f"{sig} for F_{p}^{w}: {rep.note}")
    if args.genus is not None and args.genus != rep.genus:
        raise InfeasibleSignature(f"{sig} for F_{p}^{w} acts on genus {rep.genus}, not {args.genus}")
    e = rep.as_json()
    payload = {"prime": p, "rank": w, "genus": rep.genus, "entries": [e], "total": rep.count}
    return Table(CENSUS_COLUMNS, [_census_row(p, w, e)], payload)


# verify -------------------------------------------------------------------------

@dataclass
class Check:
    case: str
    expected: object
    observed: object
    ok: bool


def _eq(case: str, expected, observed) -> Check:
    return Check(case, expected, observed, expected == observed)


# Two primes per congruence family, plus the small primes with their own rows.
TABLE51_SUITE = {
    (3, 1): (2, 3, 5, 11, 7, 13),
    (3, 2): (2, 3, 5, 7),
    (4, 1): (2, 3, 5, 13, 7, 11),
    (4, 2): (3, 5, 17, 7, 19, 11, 23, 13, 37),
    (4, 3): (2, 3, 5, 7),
}


SUITE_ORACLE_LIMIT = 2**21  # larger rows are checked against the pipeline instead


def suite_table51(oracle_ceiling: int) -> list[Check]:
    out = []
    for (r, v), primes in TABLE51_SUITE.items():
        for p in primes:
            row = table51_row(r, v, p, min(oracle_ceiling, SUITE_ORACLE_LIMIT))
            out.append(Check(f"r={r} v={v} p={p}", row["closed_form"], row["oracle"] if row["oracle"] is not None
                             else row["pipeline"], row["match"]))
    return out


def suite_genus33(oracle_ceiling: int) -> list[Check]:
    G = AbelianGroup((4, 4, 2))
    cands = normal_form_family(G, 2)
    published = next(c for c in genus65_catalogue() if c["group"] == G)
    part = orbit_classes_oracle(G, Signature(2), oracle_ceiling)
    pub_orbits = len({part.orbit_of(x) for x in published["representatives"]})
    return [
        Check("reducer candidates <= 6", 6, len(cands), len(cands) <= 6),
        _eq("cup-distinct published representatives", 3, len(cup_classes(published["representatives"]))),
        _eq("published representatives in distinct orbits", 3, pub_orbits),
        _eq("oracle classes", published["published_classes"], part.count),
    ]


def suite_genus65(oracle_ceiling: int) -> list[Check]:
    out = []
    for entry in genus65_catalogue():
        G = entry["group"]
        if G.factors == (4, 4, 2):
            continue
        rep = classify_unramified(G, 2, oracle_ceiling)
        name = "x".join(f"C{n}" for n in G.factors)
        out.append(_eq(f"{name} reducer candidates", 3, rep.upper_bound))
        out.append(_eq(f"{name} cup lower bound", 3, rep.cup_lower_bound))
        if rep.oracle_count is not None:
            out.append(_eq(f"{name} oracle", entry["published_classes"], rep.oracle_count))
    return out


UNRAMIFIED_GRID = [(p, w, rho) for p in (2, 3) for rho in (1, 2) for w in range(1, 5) if w <= 2 * rho]
UNRAMIFIED_GRID += [(5, w, rho) for rho in (1, 2) for w in (1, 2) if w <= 2 * rho]


def suite_unramified_elementary(oracle_ceiling: int) -> list[Check]:
    out = []
    for p, w, rho in UNRAMIFIED_GRID:
        G = AbelianGroup.elementary(p, w)
        n = count_elementary(rho, w)
        reps = len(canonical_reps_elementary(p, w, rho))
        try:
            oracle = orbit_classes_oracle(G, Signature(rho), oracle_ceiling).count
        except CeilingExceeded:
            oracle = None
        ok = reps == n and (oracle is None or oracle == n)
        out.append(Check(f"p={p} w={w} rho={rho}", n, (reps, oracle), ok))
    return out


PIPELINE_SUITE = [(1, 3, 5), (1, 3, 7), (1, 4, 5), (1, 4, 7), (2, 3, 5), (2, 4, 5), (2, 4, 7), (3, 4, 5)]


def suite_pipeline_vs_oracle(oracle_ceiling: int) -> list[Check]:
    out = []
    for v, r, p in PIPELINE_SUITE:
        out.append(_eq(f"v={v} r={r} p={p}", orbit_count_oracle(v, r, p, oracle_ceiling),
                       build_strata_report(None, v, r, p).total))
    return out


SUITES: dict[str, Callable[[int], list[Check]]] = {
    "table51": suite_table51,
    "genus33": suite_genus33,
    "genus65": suite_genus65,
    "unramified-elementary": suite_unramified_elementary,
    "pipeline-vs-oracle": suite_pipeline_vs_oracle,
}


def cmd_verify(suite: str, oracle_ceiling: int) -> tuple[Table, bool]:
    if suite not in SUITES:
        raise _Usage(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    t0 = time.perf_counter()
    checks = SUITES[suite](oracle_ceiling)
    rows = [{"suite": suite, "case": c.case, "expected": _cell(c.expected), "observed": _cell(c.observed),
             "status": "PASS" if c.ok else "FAIL"} for c in checks]
    passed = all(c.ok for c in checks)
    payload = {"suite": suite, "passed": passed, "seconds": round(time.perf_counter() - t0, 2), "cases": rows}
    return Table(VERIFY_COLUMNS, rows, payload), passed


# Entry point --------------------------------------------------------------------

class _Usage(Exception):
    pass


def _positive(text: str) -> int:
    n = int(text)
    if n <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def _prime(text: str) -> int:
    n = int(text)
    if not is_prime(n):
        raise argparse.ArgumentTypeError(f"{n} is not prime")
    return n


def _pair(text: str) -> tuple[int, int]:
    r, v = (int(x) for x in text.split(","))
    if (r, v) not in TABLE51_PAIRS:
        raise argparse.ArgumentTypeError(f"(r,v)=({r},{v}) is not tabulated")
    return r, v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--out", help="write to this file instead of stdout")
    common.add_argument("--oracle-ceiling", type=_positive, default=ENUM_CEILING,
                        help="largest brute-force enumeration allowed")
    common.add_argument("--workers", type=_positive, default=1)

    ap = argparse.ArgumentParser(prog="abactions", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table51", parents=[common], help="closed forms beside oracle and pipeline counts")
    t.add_argument("--prime", type=_prime, action="append", help="repeatable; default 2,3,5,7,11,13")
    t.add_argument("--pair", type=_pair, action="append", metavar="R,V", help="repeatable; default all")
    t.add_argument("--no-pipeline", action="store_true")

    c = sub.add_parser("classify", parents=[common], help="count classes for a signature, a genus or a group")
    c.add_argument("--prime", type=_prime, action="append")
    c.add_argument("--rank", type=_positive)
    c.add_argument("--signature", help='"rho;m1,m2,..." with "-" for no periods')
    c.add_argument("--group", help='invariant factors, e.g. "4,4"')
    c.add_argument("--genus", type=int)
    c.add_argument("--genus-check", action="store_true", help="report the Riemann-Hurwitz genus and representatives")

    v = sub.add_parser("verify", parents=[common], help="run a golden suite")
    v.add_argument("suite", choices=sorted(SUITES))
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "table51":
            primes = args.prime or [2, 3, 5, 7, 11, 13]
            table = cmd_table51(primes, args.pair or list(TABLE51_PAIRS), args.oracle_ceiling, not args.no_pipeline)
            code = EXIT_OK
        elif args.command == "classify":
            table, code = cmd_classify(args), EXIT_OK
        else:
            table, passed = cmd_verify(args.suite, args.oracle_ceiling)
            code = EXIT_OK if passed else EXIT_VERIFY
    except _Usage as e:
        ap.print_usage(sys.stderr)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleSignature as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except CeilingExceeded as e:
        print(f"refused: {e}", file=sys.stderr)
        return EXIT_CEILING
    except OutOfScope as e:
        print(f"out of scope: {e}", file=sys.stderr)
        return EXIT_SCOPE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    _emit(table.render(args.format), args.out)
    return code
