"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 internal
verification failure (an exact cross-check that should never fail did).
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from fractions import Fraction

from .catalogue import catalogue, records_to_csv, records_to_json, records_to_table
from .errors import (
    InvalidSequenceError,
    NotEigenvectorError,
    NotSimplyStructuredError,
    ThresholdlabError,
    TooLargeError,
    VerifyFailedError,
)
from .graphs import ThresholdGraph, degree_data
from .spectra import eigenbasis_csv, spectrum
from .structured import is_simply_structured, ss_eigenbasis, ss_oracle
from .walks import PureState, fidelity, pair_pst, threshold_pst_pairs, vertex_pst, walk_operator
from .weak_hadamard import whd_construct, whd_search

USAGE_ERROR, INVALID_INPUT, VERIFY_ERROR = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _graph(text: str) -> ThresholdGraph:
    return ThresholdGraph.parse(text)


def _parse_time(text: str) -> Fraction:
    """Times are rational multiples of pi, written like 1/2pi or 2pi."""
    m = re.fullmatch(r"(\d+)(?:/(\d+))?\s*pi", text.strip())
    if m is None:
        raise InvalidSequenceError("E_BAD_CHAR", f"time must look like '1/2pi', got {text!r}")
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


def _parse_state(text: str) -> PureState:
    m = re.fullmatch(r"vertex:(\d+)", text.strip())
    if m:
        return PureState.vertex(int(m.group(1)))
    m = re.fullmatch(r"pair:(\d+),(\d+)", text.strip())
    if m:
        return PureState.pair(int(m.group(1)), int(m.group(2)))
    raise InvalidSequenceError(
        "E_BAD_CHAR", f"state must be 'vertex:A' or 'pair:A,B', got {text!r}"
    )


def _cmd_analyze(args) -> int:
    g = _graph(args.bits)
    verdict = is_simply_structured(g)
    spec = spectrum(g)
    attempts: list[str] = []
    cert = whd_construct(g, search_budget=args.search_budget, attempts=attempts)
    transfers = threshold_pst_pairs(g)
    vres = vertex_pst(g)
    degrees, trace = degree_data(g)
    record = {
        "n": g.n,
        "sequence": g.sequence,
        "blocks": [list(b) for b in g.blocks],
        "expression": g.join_expression(),
        "degrees": list(degrees),
        "trace": trace,
        "spectrum": [{"value": v, "multiplicity": m} for v, m in spec.entries],
        "ss": bool(verdict),
        "ss_violation": None if verdict else list(verdict.violation),
        "whd": "yes" if cert else "unknown" if verdict else "no",
        "whd_provenance": list(cert.provenance) if cert else attempts,
        "pst_pairs": [r.to_json_dict() for r in transfers],
        "vertex_pst": vres.present,
        "vertex_pst_reason": vres.reason,
    }
    if args.json:
        print(json.dumps(record, indent=2))
        return 0
    print(f"sequence   {record['sequence']}  (n={g.n}, blocks {g.blocks})")
    print(f"expression {record['expression']}")
    print(f"degrees    {record['degrees']}  trace {trace}")
    print(f"spectrum   {spec}")
    print(f"ss         {'yes' if record['ss'] else 'no'}")
    print(f"whd        {record['whd']}")
    if transfers:
        pairs = ", ".join(f"(1,{r.v.b})<->(2,{r.v.b})" for r in transfers)
        print(f"pair pst   {pairs} at pi/{transfers[0].tau.denominator}")
    else:
        print("pair pst   none")
    print(f"vertex pst {'yes' if vres.present else 'no'} ({vres.reason})")
    return 0


def _cmd_spectrum(args) -> int:
    g = _graph(args.bits)
    spec = spectrum(g)
    if args.json:
        print(spec.to_json())
    else:
        print(spec)
    return 0


def _cmd_eigenbasis(args) -> int:
    g = _graph(args.bits)
    if args.ss:
        basis = ss_eigenbasis(g)
        if args.json:
            print(basis.to_json())
        else:
            print(basis.to_csv())
    else:
        print(eigenbasis_csv(g))
    return 0


def _cmd_whd(args) -> int:
    g = _graph(args.bits)
    attempts: list[str] = []
    cert = whd_construct(g, search_budget=args.search_budget, attempts=attempts)
    if cert is None and args.search_budget and is_simply_structured(g):
        outcome = whd_search(g, budget=args.search_budget)
        if outcome.status == "found":
            cert = outcome.certificate
        else:
            attempts.append(f"standalone search: {outcome.status}")
    if cert is None:
        status = "no" if not is_simply_structured(g) else "unknown"
        if args.json:
            print(json.dumps({"whd": status, "attempts": attempts}))
        else:
            print(f"whd {status}")
            for line in attempts:
                print(f"  {line}")
        return 0
    if args.json:
        print(cert.to_json())
    else:
        print(f"whd yes via {' -> '.join(cert.provenance)}")
        print(f"lambda {list(cert.eigenvalues)}")
        print(cert.to_csv())
    return 0


def _cmd_pst(args) -> int:
    g = _graph(args.bits)
    if args.pair:
        try:
            a, b, c, d = (int(x) for x in args.pair.split(","))
        except ValueError:
            raise InvalidSequenceError("E_BAD_CHAR", "--pair wants four integers a,b,c,d")
        result = pair_pst(g, PureState.pair(a, b), PureState.pair(c, d))
        if args.json:
            print(json.dumps(result.to_json_dict()))
        else:
            if result.verdict == "pst":
                print(
                    f"pst between {result.u.label()} and {result.v.label()} at "
                    f"pi/{result.tau.denominator}; fidelity {result.fidelity:.12f}"
                )
            else:
                print(f"{result.verdict}: {result.reason}")
        return 0
    if args.vertex:
        vres = vertex_pst(g)
        payload = {
            "vertex_pst": vres.present,
            "reason": vres.reason,
            "tau": {"num": 1, "den": 2, "times_pi": True} if vres.present else None,
            "periodic_vertices": list(vres.periodic_vertices),
            "notes": list(vres.notes),
        }
        if args.json:
            print(json.dumps(payload))
        else:
            print(f"vertex pst {'yes at pi/2' if vres.present else 'no'} ({vres.reason})")
        return 0
    transfers = threshold_pst_pairs(g)
    vres = vertex_pst(g)
    if args.json:
        print(
            json.dumps(
                {
                    "pairs": [r.to_json_dict() for r in transfers],
                    "vertex_pst": vres.present,
                }
            )
        )
    else:
        if not transfers:
            print("no pair state transfer")
        for r in transfers:
            print(
                f"pst {r.u.label()} <-> {r.v.label()} at pi/{r.tau.denominator} "
                f"(fidelity {r.fidelity:.12f})"
            )
        print(f"vertex pst {'yes' if vres.present else 'no'}")
    return 0


def _cmd_walk(args) -> int:
    g = _graph(args.bits)
    tau = _parse_time(args.time)
    src, dst = _parse_state(args.src), _parse_state(args.dst)
    t = float(tau) * math.pi
    value = fidelity(g, src, dst, t)
    print(f"fidelity {value:.12f} at t = {tau}*pi")
    if args.snapshot:
        op = walk_operator(g, t)
        rows = []
        for i in range(g.n):
            cells = []
            for j in range(g.n):
                z = op[i, j]
                cells.append(f"{z.real:.12g}")
                cells.append(f"{z.imag:.12g}")
            rows.append(",".join(cells))
        with open(args.snapshot, "w") as fh:
            fh.write("\n".join(rows) + "\n")
        print(f"snapshot written to {args.snapshot}")
    return 0


def _cmd_enumerate(args) -> int:
    records, summary = catalogue(
        args.n_min,
        args.n_max,
        ss_only=args.ss_only,
        whd_search_budget=args.whd_search_budget,
        keep_certificates=bool(args.json_path),
        jobs=args.jobs,
    )
    csv_text = records_to_csv(records)
    if args.csv_path:
        with open(args.csv_path, "w") as fh:
            fh.write(csv_text)
    if args.json_path:
        with open(args.json_path, "w") as fh:
            fh.write(records_to_json(records, summary))
    if not args.csv_path and not args.json_path:
        sys.stdout.write(csv_text)
    for n in sorted(summary.per_n):
        counts = summary.per_n[n]
        print(
            f"n={n}: records {counts['records']}, ss {counts['ss']}, "
            f"whd yes/unknown/no {counts['whd_yes']}/{counts['whd_unknown']}/{counts['whd_no']}, "
            f"pst {counts['pst']}, vertex {counts['vertex_pst']}",
            file=sys.stderr,
        )
    return 0


def _cmd_table1(args) -> int:
    records, _ = catalogue(2, args.n_max, ss_only=True, jobs=args.jobs)
    with open(args.out, "w") as fh:
        fh.write(records_to_table(records))
    print(f"{len(records)} structured-eigenbasis records written to {args.out}")
    return 0


def _cmd_oracle(args) -> int:
    g = _graph(args.bits)
    print("yes" if ss_oracle(g) else "no")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="thresholdlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full record for one sequence")
    p.add_argument("bits")
    p.add_argument("--json", action="store_true")
    p.add_argument("--search-budget", type=int, default=0)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("spectrum", help="exact Laplacian spectrum")
    p.add_argument("bits")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("eigenbasis", help="shared eigenbasis, or --ss for the {-1,0,1} one")
    p.add_argument("bits")
    p.add_argument("--ss", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_eigenbasis)

    p = sub.add_parser("whd", help="weak Hadamard certificate")
    p.add_argument("bits")
    p.add_argument("--search-budget", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_whd)

    p = sub.add_parser("pst", help="pair/vertex state transfer analysis")
    p.add_argument("bits")
    p.add_argument("--pair", help="a,b,c,d for the pair states (a,b) and (c,d)")
    p.add_argument("--vertex", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_pst)

    p = sub.add_parser("walk", help="fidelity of the walk between two states")
    p.add_argument("bits")
    p.add_argument("--time", required=True, help="rational multiple of pi, e.g. 1/2pi")
    p.add_argument("--src", required=True, help="vertex:A or pair:A,B")
    p.add_argument("--dst", required=True, help="vertex:A or pair:A,B")
    p.add_argument("--snapshot", help="write U(t) as CSV of re,im pairs")
    p.set_defaults(func=_cmd_walk)

    p = sub.add_parser("enumerate", help="catalogue a size range")
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--ss-only", action="store_true")
    p.add_argument("--csv", dest="csv_path")
    p.add_argument("--json", dest="json_path")
    p.add_argument("--whd-search-budget", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("table1", help="structured-eigenbasis catalogue (five-column survey layout)")
    p.add_argument("--out", required=True)
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_table1)

    p = sub.add_parser("oracle", help="brute-force structured-basis answer (small n)")
    p.add_argument("bits")
    p.set_defaults(func=_cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (VerifyFailedError, NotEigenvectorError) as exc:
        print(f"internal verification failure [{exc.code}]: {exc}", file=sys.stderr)
        return VERIFY_ERROR
    except (InvalidSequenceError, NotSimplyStructuredError, TooLargeError) as exc:
        print(f"invalid input [{exc.code}]: {exc}", file=sys.stderr)
        return INVALID_INPUT
    except ThresholdlabError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return INVALID_INPUT
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return INVALID_INPUT


if __name__ == "__main__":
    sys.exit(main())
