"""Command-line front end: ``ffmzv <command> [options]``.

Exit codes: 0 success (or a NONZERO verdict), 2 FALSIFIED, 3 budget or
precision exhausted, 64 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from typing import Sequence

from .combinatorics import format_base, g_sequence, parse_int, sheats_minimality_check
from .curves import basis_name, load_curve, nongap_sequence
from .errors import FFMZVError, ResourceError
from .zeta import PrecisionPolicy, ZetaEngine, default_budget

log = logging.getLogger("ffmzv")

EXIT_OK, EXIT_FALSIFIED, EXIT_RESOURCE, EXIT_USAGE = 0, 2, 3, 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int(text: str) -> int:
    try:
        return parse_int(text)
    except (ValueError, FFMZVError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _tuple(text: str) -> tuple[int, ...]:
    try:
        values = tuple(parse_int(part) for part in text.split(",") if part.strip())
    except (ValueError, FFMZVError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("expected a comma-separated list of positive integers")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "human"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--budget", type=_int, default=None,
                        help="max monic elements per power sum (env FFMZV_BUDGET)")
    common.add_argument("--window", type=_int, default=None, help="initial series window")
    common.add_argument("--max-doublings", type=int, default=8)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="ffmzv", description="Valuations of multiple zeta values over function fields")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gseq", parents=[common], help="greedy carry-free sequence G_0, G_1, ...")
    p.add_argument("--q", type=_int, required=True)
    p.add_argument("--s", type=_int, required=True)
    p.add_argument("--count", type=_int, required=True)

    p = sub.add_parser("nongap", parents=[common], help="Weierstrass non-gaps at infinity")
    p.add_argument("--curve", required=True)
    p.add_argument("--count", type=_int, required=True)

    for name, text in (("powersum", "brute-force power sum S_{d_i}(s)"),
                       ("predict", "predicted valuation of S_{d_i}(s)")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--curve", required=True)
        p.add_argument("--i", type=_int, required=True)
        p.add_argument("--s", type=_int, required=True)

    for name, text in (("mzv", "truncated multiple zeta value"),
                       ("certify", "non-vanishing certificate")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--curve", required=True)
        p.add_argument("--tuple", type=_tuple, required=True)
        p.add_argument("--cutoff", type=_int, required=True)

    p = sub.add_parser("sheats", parents=[common], help="bounded minimality check for G")
    p.add_argument("--q", type=_int, required=True)
    p.add_argument("--s", type=_int, required=True)
    p.add_argument("--i", type=_int, required=True)
    p.add_argument("--strategy", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--bound", type=_int, default=None)
    p.add_argument("--samples", type=_int, default=1000)
    return parser


def _engine(args) -> ZetaEngine:
    curve = load_curve(args.curve)
    log.info("curve %s, genus %d", curve.curve_id, curve.genus)
    policy = PrecisionPolicy(initial_window=args.window, max_doublings=args.max_doublings,
                             budget=args.budget if args.budget is not None else default_budget(),
                             threads=max(1, args.threads))
    return ZetaEngine(curve, policy)


# each command returns (payload, csv rows, human text, exit code)

def cmd_gseq(args):
    g = g_sequence(args.s, args.q, args.count)
    p = g.p
    payload = {"q": g.q, "s": g.s, "terms": list(g.terms)}
    rows = [{"j": j, "G": v, "base_p": format_base(v, p)} for j, v in enumerate(g.terms)]
    human = "\n".join([f"s = {format_base(g.s, p)}, q = {g.q}"]
                      + [f"G_{j} = {format_base(v, p)}" for j, v in enumerate(g.terms)])
    return payload, rows, human, EXIT_OK


def cmd_nongap(args):
    eng = _engine(args)
    seq = nongap_sequence(eng.curve, args.count)
    terms = list(seq.terms[:args.count])
    payload = {"curve": eng.curve.curve_id, "genus": seq.genus, "nongaps": terms,
               "condition_class": seq.condition_class.value}
    rows = [{"i": i, "d_i": d, "basis": basis_name(eng.curve, i)} for i, d in enumerate(terms)]
    human = f"{', '.join(map(str, terms))}  (genus {seq.genus}, class {seq.condition_class.value})"
    return payload, rows, human, EXIT_OK


def cmd_powersum(args):
    res = _engine(args).power_sum(args.i, args.s)
    payload = res.to_dict()
    row = {k: v for k, v in payload.items() if k != "series"}
    human = (f"S_{res.d_i}({res.s}) = {res.series}\n"
             f"valuation {res.observed_valuation} (predicted {res.predicted_valuation})")
    return payload, [row], human, EXIT_OK


def cmd_predict(args):
    eng = _engine(args)
    value = eng.predicted_valuation(args.i, args.s)
    cls = eng.condition
    payload = {"curve": eng.curve.curve_id, "i": args.i, "d_i": eng.degree(args.i), "s": args.s,
               "predicted": value, "condition_class": cls.value,
               "experimental": not cls.certified}
    human = str(value) + ("" if cls.certified else "  (experimental)")
    return payload, [payload], human, EXIT_OK


def cmd_mzv(args):
    res = _engine(args).mzv(args.tuple, args.cutoff)
    payload = res.to_dict()
    row = {k: (",".join(map(str, v)) if isinstance(v, list) else v)
           for k, v in payload.items() if k != "series"}
    human = f"zeta{res.tuple} up to index {res.cutoff}: {res.series}\nvaluation {res.valuation}"
    return payload, [row], human, EXIT_OK


def cmd_certify(args):
    cert = _engine(args).certificate(args.tuple, args.cutoff)
    payload = cert.to_dict()
    lines = [f"curve {cert.curve_id}, class {cert.condition_class.value}, tuple {cert.tuple}, cutoff {cert.cutoff}"]
    lines += [f"  i={r['i']} d_i={r['d_i']} s={r['s_j']}: observed {r['observed']}, predicted {r['predicted']}"
              for r in cert.table]
    lines.append(f"dominant valuation {cert.dominant_valuation}, mzv valuation {cert.mzv_valuation}")
    lines.append(f"verdict {cert.verdict}")
    code = EXIT_FALSIFIED if cert.verdict == "FALSIFIED" else EXIT_OK
    return payload, cert.table, "\n".join(lines), code


def cmd_sheats(args):
    rep = sheats_minimality_check(args.s, args.q, args.i, args.strategy, bound=args.bound,
                                  samples=args.samples, seed=args.seed)
    payload = rep.to_dict()
    row = {k: v for k, v in payload.items() if not isinstance(v, list)}
    row["violations"] = len(rep.violations)
    human = (f"G = {list(rep.g_terms)}, WS = {rep.ws_g}; checked {rep.checked} tuples, "
             f"{len(rep.violations)} violations, min gap {rep.min_gap}")
    return payload, [row], human, EXIT_OK


COMMANDS = {"gseq": cmd_gseq, "nongap": cmd_nongap, "powersum": cmd_powersum,
            "predict": cmd_predict, "mzv": cmd_mzv, "certify": cmd_certify, "sheats": cmd_sheats}


def render(fmt: str, command: str, seed: int, payload: dict, rows: list[dict], human: str) -> str:
    if fmt == "json":
        return json.dumps({"command": command, "seed": seed, "result": payload}, sort_keys=True)
    if fmt == "csv":
        buf = io.StringIO()
        keys = list(dict.fromkeys(k for row in rows for k in row)) + ["seed"]
        writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({**row, "seed": seed})
        return buf.getvalue().rstrip("\n")
    return f"{human}\n(seed {seed})"


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:       # --help, or a usage error (exit 64)
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        payload, rows, human, code = COMMANDS[args.command](args)
    except ResourceError as exc:
        print(f"ffmzv: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (FFMZVError, ValueError, OSError) as exc:
        print(f"ffmzv: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(render(args.format, args.command, args.seed, payload, rows, human))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
