"""Command-line front end: ``cigraph verify``, ``cigraph export`` and ``cigraph weil``."""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import verify as V
from .field import FieldError, make_field, prime_power
from .graph import InvolutionGraph, build_graph, to_dimacs
from .psl2 import enumerate_involutions

log = logging.getLogger("cigraph")

CACHE_VERSION = "1"
CACHE_ENV = "CIGRAPH_CACHE_DIR"
LEMMAS = ["disks", "4cycle", "eigen", "poly1", "poly2", "bound1", "bound2", "faithful1",
          "weil", "theorem1"]
HYPOTHESIS_VIOLATION = "hypothesis-violation"


# --- q parsing ---

def parse_q(text):
    try:
        q = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"q must be an integer, got {text!r}")
    try:
        prime_power(q)
    except FieldError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    if q <= 3:
        raise argparse.ArgumentTypeError(f"q must exceed 3, got {q}")
    return q


def parse_range(text):
    lo, sep, hi = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError("range must look like a..b")
    try:
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    out = []
    for q in range(max(lo, 4), hi + 1):
        try:
            prime_power(q)
        except FieldError:
            continue
        out.append(q)
    if not out:
        raise argparse.ArgumentTypeError(f"no prime power above 3 in {text}")
    return out


def collect_qs(args, parser):
    qs = list(args.q or [])
    for r in args.q_range or []:
        qs.extend(r)
    if args.p is not None:
        f = args.f or 1
        try:
            qs.append(parse_q(str(args.p ** f)))
        except argparse.ArgumentTypeError as exc:
            parser.error(str(exc))
    if not qs:
        parser.error("give at least one of --q, --q-range or --p")
    return sorted(set(qs))


# --- graph cache ---

def cache_dir(arg):
    path = arg or os.environ.get(CACHE_ENV)
    return Path(path) if path else None


def _cache_key(F):
    mod = "-".join(str(c) for c in F.modulus)
    return f"C_p{F.p}_f{F.f}_m{mod}_v{CACHE_VERSION}"


def _digest(adj):
    return hashlib.sha256(np.packbits(adj).tobytes()).hexdigest()


def load_graph(q, directory=None):
    """Build the graph for q, going through the on-disk cache when a directory is set."""
    p, f = prime_power(q)
    F = make_field(p, f)
    if directory is None:
        return build_graph(F)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / (_cache_key(F) + ".npz")
    if path.exists():
        try:
            with np.load(path) as data:
                n = int(data["n"])
                adj = np.unpackbits(data["bits"])[: n * n].reshape(n, n).astype(bool)
                stored = str(data["sha256"])
            if _digest(adj) == stored:
                return InvolutionGraph(F, enumerate_involutions(F), adj)
            log.warning("cache checksum mismatch for q=%d, rebuilding", q)
        except (OSError, ValueError, KeyError) as exc:
            log.warning("unreadable cache entry for q=%d (%s), rebuilding", q, exc)
    g = build_graph(F)
    tmp = path.with_suffix(".tmp.npz")
    np.savez_compressed(tmp, n=g.n, bits=np.packbits(g.adj), sha256=_digest(g.adj))
    tmp.replace(path)
    return g


# --- running checks ---

def applicable(lemma, q):
    """None if the lemma applies to q, else the reason it does not."""
    odd = q % 2 == 1
    if lemma == "theorem1":
        return None
    if not odd:
        return "needs odd q"
    needs = {"poly1": 1, "bound1": 1, "faithful1": 1, "poly2": 3, "bound2": 3}
    if lemma in needs and q % 4 != needs[lemma]:
        return f"needs q = {needs[lemma]} mod 4"
    return None


def weil_family(q):
    return "bound1" if q % 4 == 1 else "bound2"


def run_weil(q, family=None, samples=20, seed=1):
    from .weil import run_audits

    t0 = time.perf_counter()
    family = family or weil_family(q)
    F = make_field(*prime_power(q))
    try:
        audits = run_audits(F, family, samples, seed)
    except ValueError as exc:
        return V.LemmaReport("weil", q, V.OUT_OF_RANGE, [], (time.perf_counter() - t0) * 1000,
                             {"family": family, "skipped": str(exc)})
    witnesses = [a.as_dict() for a in audits if not (a.holds and a.holds_7sqrtq)]
    threshold = 73 if family == "bound1" else 67
    return V._report("weil", q, q >= threshold, not witnesses, witnesses, t0,
                     family=family, seed=seed, samples=samples,
                     max_abs_N_minus_q=max(abs(a.N - q) for a in audits),
                     audits=[a.as_dict() for a in audits])


def audit_polynomial(q, coeffs):
    """Weil audit of one explicit polynomial, low degree first."""
    from .weil import HypothesisViolation, Poly, audit_weil_bound

    t0 = time.perf_counter()
    F = make_field(*prime_power(q))
    f = Poly(F, [F.from_int(c) for c in coeffs])
    millis = lambda: (time.perf_counter() - t0) * 1000
    try:
        inst = audit_weil_bound(f)
    except HypothesisViolation as exc:
        return V.LemmaReport("weil", q, HYPOTHESIS_VIOLATION, [], millis(),
                             {"coeffs": list(coeffs), "reason": str(exc)})
    holds = inst.holds
    return V.LemmaReport("weil", q, V.VERIFIED if holds else V.FAILED,
                         [] if holds else [{"N": inst.N}], millis(),
                         {"coeffs": list(coeffs), "N": inst.N, "d": inst.d,
                          "bound_sq": inst.bound_sq})


def run_lemma(g, lemma, timeout=600.0, seed=1, samples=20, family=None):
    from .autgrp.theorem import verify_theorem1

    if lemma == "theorem1":
        return verify_theorem1(g, timeout=timeout)
    if lemma == "weil":
        return run_weil(g.q, family, samples, seed)
    fn = {
        "disks": V.verify_disc_formulas, "4cycle": V.verify_4cycle, "eigen": V.verify_eigen,
        "poly1": V.verify_poly1, "poly2": V.verify_poly2, "bound1": V.verify_bound1,
        "bound2": V.verify_bound2, "faithful1": V.verify_faithful1,
    }[lemma]
    return fn(g)


def run_q(q, lemmas, explicit, timeout, cache, seed, samples, family):
    """All requested reports for one q, in lemma order."""
    reports = []
    g = None
    for lemma in lemmas:
        reason = applicable(lemma, q)
        if reason is not None:
            if explicit:
                reports.append(V.LemmaReport(lemma, q, V.OUT_OF_RANGE, [], 0.0,
                                             {"skipped": reason}))
            continue
        if lemma == "weil":
            reports.append(run_weil(q, family, samples, seed))
            continue
        try:
            if g is None:
                g = load_graph(q, cache)
            reports.append(run_lemma(g, lemma, timeout, seed, samples, family))
        except Exception as exc:  # a crash in one check is reported, not fatal
            log.exception("q=%d %s crashed", q, lemma)
            reports.append(V.LemmaReport(lemma, q, V.ERROR, [{"exception": repr(exc)}], 0.0, {}))
    return reports


# --- output ---

def render(reports, fmt):
    if fmt == "json":
        return "".join(r.to_json() + "\n" for r in reports)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lemma", "q", "status", "millis", "witnesses", "details"])
        for r in reports:
            d = r.as_dict()
            w.writerow([r.lemma, r.q, r.status, d["millis"], len(r.witnesses),
                        json.dumps(d["details"], sort_keys=True, default=V._jsonable)])
        return buf.getvalue()
    lines = []
    for r in reports:
        line = f"q={r.q:<4} {r.lemma:<10} {r.status:<20} {r.millis:9.1f} ms"
        if r.witnesses:
            line += f"  first witness: {json.dumps(r.witnesses[0], default=V._jsonable)}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def exit_code(reports):
    return 1 if any(r.status in (V.FAILED, V.ERROR) for r in reports) else 0


# --- subcommands ---

def cmd_verify(args, parser):
    qs = collect_qs(args, parser)
    explicit = not args.all and args.lemma and "all" not in args.lemma
    lemmas = LEMMAS if not explicit else [l for l in LEMMAS if l in args.lemma]
    cache = cache_dir(args.cache_dir)
    job = dict(lemmas=lemmas, explicit=explicit, timeout=args.timeout_secs, cache=cache,
               seed=args.seed, samples=args.samples, family=args.family)
    if args.jobs > 1 and len(qs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(run_q, q, **job) for q in qs]
            per_q = [fut.result() for fut in futures]
    else:
        per_q = [run_q(q, **job) for q in qs]
    reports = [r for rs in per_q for r in rs]
    sys.stdout.write(render(reports, args.format))
    return exit_code(reports)


def cmd_export(args, parser):
    g = load_graph(args.q, cache_dir(args.cache_dir))
    text = to_dimacs(g)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
    return 0


def cmd_weil(args, parser):
    if args.q % 2 == 0:
        parser.error("the Weil audit needs odd q")
    if args.poly:
        try:
            coeffs = [int(c) for c in args.poly.split(",")]
        except ValueError:
            parser.error("--poly takes comma-separated integers, constant term first")
        reports = [audit_polynomial(args.q, coeffs)]
    else:
        family = args.family or weil_family(args.q)
        need = 1 if family == "bound1" else 3
        if args.q % 4 != need:
            parser.error(f"family {family} needs q = {need} mod 4")
        reports = [run_weil(args.q, family, args.samples, args.seed)]
    sys.stdout.write(render(reports, args.format))
    return exit_code(reports)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cigraph", description="Checks on the commuting involution graph of PSL(2, q).")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", help=f"graph cache directory (default: ${CACHE_ENV})")
    common.add_argument("--format", choices=["json", "csv", "human"], default="json")
    common.add_argument("--seed", type=int, default=1)
    common.add_argument("--samples", type=int, default=20)
    common.add_argument("--family", choices=["bound1", "bound2"])

    pv = sub.add_parser("verify", parents=[common], help="run lemma checks")
    pv.add_argument("--q", type=parse_q, action="append")
    pv.add_argument("--q-range", type=parse_range, action="append", metavar="A..B")
    pv.add_argument("--p", type=int)
    pv.add_argument("--f", type=int)
    pv.add_argument("--lemma", choices=LEMMAS + ["all"], action="append")
    pv.add_argument("--all", action="store_true", help="every lemma that applies to each q")
    pv.add_argument("--timeout-secs", type=float, default=600.0)
    pv.add_argument("--jobs", type=int, default=1)
    pv.set_defaults(func=cmd_verify)

    pe = sub.add_parser("export", parents=[common], help="write the graph in DIMACS format")
    pe.add_argument("--q", type=parse_q, required=True)
    pe.add_argument("-o", "--output")
    pe.set_defaults(func=cmd_export)

    pw = sub.add_parser("weil", parents=[common], help="audit the point-count bound")
    pw.add_argument("--q", type=parse_q, required=True)
    pw.add_argument("--poly", help="explicit polynomial: comma-separated coefficients, constant first")
    pw.set_defaults(func=cmd_weil)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    return args.func(args, parser)


if __name__ == "__main__":
    sys.exit(main())
