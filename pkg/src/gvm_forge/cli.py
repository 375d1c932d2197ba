"""Command-line front end.

    gvm-forge axioms   --n 2 [--S 1,3] [--seed 0]
    gvm-forge det      --n 2 [--S 3] [--N 2] [--b 1/2 --lambda 0]
    gvm-forge classify --n 1 --S 1 --b 0 --lambda 1 [--a 2] [--n-max 4 --hdeg 4]
    gvm-forge singular --n 2 --S 3 --series v1 --N 2 [--symbolic]
    gvm-forge search   --n 1 --S 1 --b 0 --lambda 1 --n-max 2 --hdeg 3
    gvm-forge lemma7   --n 3 [--S 1,4] [--n-max 4]
    gvm-forge sweep    [--n 1,2] [--grid=-2,-1,-1/2,0,1/3,1,2]

Exit codes: 0 success/all checks pass (classify: simple), 1 a check failed,
2 reducible, 3 inducing module not simple, 64 bad configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from gmpy2 import mpq

from .analysis import (
    SERIES,
    build_A,
    compositions,
    constrain,
    cross_check,
    det,
    det_closed_form,
    lemma7_cases,
    oracle_summary,
    raising_images,
    search_singular,
    singular_vector,
)
from .analysis import classify as classify_params
from .errors import ConfigError, GVMError
from .freemod import ModuleParams
from .gvm import act
from .liealg import basis, bracket, h_elt
from .poly import Poly, Q
from .suites import all_subsets, central_checks, freemod_axiom_checks, gvm_axiom_checks, lemma2_checks

EXIT_OK, EXIT_FAIL, EXIT_REDUCIBLE, EXIT_V_NOT_SIMPLE, EXIT_CONFIG = 0, 1, 2, 3, 64

DEFAULT_GRID = "-2,-1,-1/2,0,1/3,1,2"


@dataclass
class RunConfig:
    command: str
    n: list[int]
    S: frozenset | None = None
    a: tuple | None = None
    b: mpq | None = None
    lam: mpq | None = None
    N: int | None = None
    N_max: int | None = None
    h_deg_max: int = 4
    seed: int = 0
    fmt: str = "json"
    out: str | None = None
    series: str | None = None
    samples: int = 20
    verbose: bool = False
    grid: list = field(default_factory=list)

    @property
    def single_n(self) -> int:
        if len(self.n) != 1:
            raise ConfigError(f"{self.command} needs a single --n")
        return self.n[0]

    def subsets(self, n: int) -> list[frozenset]:
        if self.S is None:
            return all_subsets(n)
        if not self.S <= set(range(1, n + 2)):
            raise ConfigError(f"S={sorted(self.S)} is not a subset of 1..{n + 1}")
        return [self.S]

    def params(self, n: int, S: frozenset, *, lam=True) -> ModuleParams:
        a = self.a
        if a is not None and len(a) != n:
            raise ConfigError(f"--a needs {n} values")
        return ModuleParams(n, S, a=a, b=self.b, lam=self.lam if lam else None)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_CONFIG)


def _rational_or_symbolic(text: str):
    if text.strip().lower() == "symbolic":
        return None
    try:
        return Q(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}")


def _subset(text: str) -> frozenset:
    if text.strip().lower() in ("", "-", "empty", "none"):
        return frozenset()
    return frozenset(_int_list(text))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=_int_list, default=None, help="rank parameter n (sweep: comma list)")
    common.add_argument("--S", type=_subset, default=None, help="comma list, e.g. 1,3; 'empty' for the empty set")
    common.add_argument("--a", default=None, help="comma list of nonzero rationals, or 'symbolic'")
    common.add_argument("--b", type=_rational_or_symbolic, default=None, help="rational or 'symbolic'")
    common.add_argument("--lambda", dest="lam", type=_rational_or_symbolic, default=None)
    common.add_argument("--symbolic", action="store_true", help="treat a and b as symbols")
    common.add_argument("--N", type=int, default=None)
    common.add_argument("--n-max", dest="n_max", type=int, default=None)
    common.add_argument("--hdeg", type=int, default=4)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None)
    common.add_argument("--format", dest="fmt", choices=("json", "text"), default="json")

    parser = _Parser(prog="gvm-forge", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("axioms", parents=[common], help="module-axiom property suites")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--verbose", action="store_true", help="list every checked triple")
    sub.add_parser("det", parents=[common], help="determinant of the obstruction matrix")
    sub.add_parser("classify", parents=[common], help="decide simplicity")
    p = sub.add_parser("singular", parents=[common], help="build and verify a singular vector")
    p.add_argument("--series", choices=SERIES, required=True)
    sub.add_parser("search", parents=[common], help="brute-force singular vector search")
    sub.add_parser("lemma7", parents=[common], help="shift identities of the polynomial families")
    p = sub.add_parser("sweep", parents=[common], help="classifier vs search over a parameter grid")
    p.add_argument("--grid", default=DEFAULT_GRID, help="comma list of rationals used for b and lambda")
    return parser


def config_from_args(args) -> RunConfig:
    cmd = args.command
    n = args.n
    if n is None:
        if cmd in ("sweep",):
            n = [1, 2]
        else:
            raise ConfigError("--n is required")
    if any(x < 1 for x in n):
        raise ConfigError("n must be >= 1")
    a = None
    if args.a is not None and args.a.strip().lower() != "symbolic":
        try:
            a = tuple(Q(x) for x in args.a.split(","))
        except ValueError:
            raise ConfigError(f"bad --a {args.a!r}")
        if any(x == 0 for x in a):
            raise ConfigError("a-values must be nonzero")
    b = args.b
    if args.symbolic:
        a = b = None
    elif args.a is None and cmd in ("classify", "search", "sweep") and len(n) == 1:
        a = tuple(mpq(1) for _ in range(n[0]))
    cfg = RunConfig(
        command=cmd,
        n=n,
        S=args.S,
        a=a,
        b=b,
        lam=args.lam,
        N=args.N,
        N_max=args.n_max,
        h_deg_max=args.hdeg,
        seed=args.seed,
        fmt=args.fmt,
        out=args.out,
        series=getattr(args, "series", None),
        samples=getattr(args, "samples", 20),
        verbose=getattr(args, "verbose", False),
    )
    if cmd == "sweep":
        try:
            cfg.grid = [Q(x) for x in args.grid.split(",") if x.strip()]
        except ValueError:
            raise ConfigError(f"bad --grid {args.grid!r}")
    if cfg.N is not None and cfg.N < 1:
        raise ConfigError("--N must be >= 1")
    if cfg.N_max is not None and cfg.N_max < 0:
        raise ConfigError("--n-max must be >= 0")
    if cfg.h_deg_max < 0:
        raise ConfigError("--hdeg must be >= 0")
    for x in n:
        cfg.subsets(x)
    return cfg


# commands


def _tally(name: str, checks, suites: dict, failures: list, verbose_log: list | None):
    total = failed = 0
    for label, ok in checks:
        total += 1
        if not ok:
            failed += 1
            failures.append(f"{name}: {label}")
        if verbose_log is not None:
            verbose_log.append({"suite": name, "check": label, "pass": ok})
    suites[name] = {"total": total, "failed": failed}


def lie_axiom_checks(n: int):
    B = basis(n)
    for x in B:
        for y in B:
            yield f"antisymmetry {x},{y}", bracket(x, y) == -bracket(y, x)
    for x in B:
        for y in B:
            for z in B:
                jac = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
                yield f"jacobi {x},{y},{z}", not jac


def cmd_axioms(cfg: RunConfig):
    n = cfg.single_n
    if n > 3:
        raise ConfigError("axioms is limited to n <= 3")
    subsets = cfg.subsets(n)
    suites: dict = {}
    failures: list = []
    log = [] if cfg.verbose else None
    _tally("lie", lie_axiom_checks(n), suites, failures, log)
    _tally("inducing-module", freemod_axiom_checks(n, subsets), suites, failures, log)
    _tally("central-h", central_checks(n, subsets), suites, failures, log)
    _tally("induced-module", gvm_axiom_checks(n, samples=cfg.samples, seed=cfg.seed, subsets=subsets), suites, failures, log)
    _tally("commutation", lemma2_checks(n, subsets=subsets, seed=cfg.seed), suites, failures, log)
    ok = not failures
    obj = {"command": "axioms", "n": n, "seed": cfg.seed, "S": _subset_label(cfg.S),
           "suites": suites, "failures": failures, "pass": ok}
    if log is not None:
        obj["checks"] = log
    lines = [f"axioms n={n} seed={cfg.seed} S={_subset_label(cfg.S)}"]
    for name, s in suites.items():
        lines.append(f"  {name:16s} {s['total'] - s['failed']}/{s['total']} pass")
    lines += [f"  FAIL {f}" for f in failures]
    lines.append("PASS" if ok else "FAIL")
    return obj, lines, EXIT_OK if ok else EXIT_FAIL


def _subset_label(S):
    return "all" if S is None else sorted(S)


def cmd_det(cfg: RunConfig):
    n = cfg.single_n
    Ns = [cfg.N] if cfg.N else [1, 2, 3, 4]
    rows = []
    lines = []
    ok = True
    for S in cfg.subsets(n):
        p = cfg.params(n, S)
        for N in Ns:
            d = det(build_A(p, N))
            closed = det_closed_form(p, N)
            eq = d == closed
            ok = ok and eq
            row = {"S": sorted(S), "N": N, "det": d.to_text(), "closed_form": closed.to_text(), "equal": eq}
            value = d.constant_value()
            if value is not None:
                row["value"] = str(value)
            rows.append(row)
            lines.append(f"S={sorted(S)} N={N} equal={eq}")
            lines.append(f"  det A       = {d.to_text()}")
            lines.append(f"  closed form = {closed.to_text()}")
            if value is not None:
                lines.append(f"  value       = {value}")
    obj = {"command": "det", "n": n, "params": cfg.params(n, frozenset()).to_json_obj(), "results": rows, "pass": ok}
    return obj, lines, EXIT_OK if ok else EXIT_FAIL


def _require_concrete(cfg: RunConfig, *, need_a: bool):
    if cfg.b is None or cfg.lam is None:
        raise ConfigError(f"{cfg.command} needs concrete --b and --lambda")
    if need_a and cfg.a is None:
        raise ConfigError(f"{cfg.command} needs concrete --a")


def _single_S(cfg: RunConfig, n: int) -> frozenset:
    if cfg.S is None:
        raise ConfigError(f"{cfg.command} needs --S")
    return cfg.subsets(n)[0]


def cmd_classify(cfg: RunConfig):
    n = cfg.single_n
    _require_concrete(cfg, need_a=cfg.N_max is not None)
    p = cfg.params(n, _single_S(cfg, n))
    report = classify_params(p)
    if cfg.N_max is not None:
        report.oracle = oracle_summary(p, cfg.N_max, cfg.h_deg_max)
    code = {"simple": EXIT_OK, "reducible": EXIT_REDUCIBLE}.get(report.verdict, EXIT_V_NOT_SIMPLE)
    return report.to_json_obj(), report.to_text().splitlines(), code


def cmd_singular(cfg: RunConfig):
    n = cfg.single_n
    N = cfg.N or 1
    p = cfg.params(n, _single_S(cfg, n))
    v = singular_vector(cfg.series, N, p)
    q = v.params
    killed = [not w for w in raising_images(v)]
    weight = q.lam_poly + mpq((n + 2) * N, n + 1)
    weight_ok = act(h_elt(n, n + 2), v) == v.scale(weight)
    ok = all(killed) and weight_ok and bool(v)
    obj = {
        "command": "singular",
        "series": cfg.series,
        "N": N,
        "params": q.to_json_obj(),
        "vector": v.to_json_obj(),
        "annihilated": {str(i): k for i, k in enumerate(killed, start=1)},
        "weight": weight.to_text(),
        "weight_vector": weight_ok,
        "pass": ok,
    }
    lines = [
        f"{cfg.series} at N={N}, lambda = {q.lam_poly.to_text()}",
        f"  v = {v.to_text()}",
    ]
    lines += [f"  e({i},{n + 2}) . v == 0 : {k}" for i, k in enumerate(killed, start=1)]
    lines.append(f"  h{n + 2} weight {weight.to_text()} : {weight_ok}")
    lines.append("PASS" if ok else "FAIL")
    return obj, lines, EXIT_OK if ok else EXIT_FAIL


def cmd_search(cfg: RunConfig):
    n = cfg.single_n
    _require_concrete(cfg, need_a=True)
    p = cfg.params(n, _single_S(cfg, n))
    N_max = 4 if cfg.N_max is None else cfg.N_max
    found = search_singular(p, N_max, cfg.h_deg_max)
    obj = {
        "command": "search",
        "params": p.to_json_obj(),
        "N_max": N_max,
        "h_deg_max": cfg.h_deg_max,
        "found": [{"N": N, "vector": v.to_json_obj()} for N, v in found],
    }
    counts = Counter(N for N, _ in found)
    lines = [f"search N_max={N_max} hdeg={cfg.h_deg_max} params={json.dumps(p.to_json_obj())}"]
    for N in range(1, N_max + 1):
        lines.append(f"  N={N}: {counts.get(N, 0)} independent singular vectors")
    for N, v in found:
        lines.append(f"    N={N}: {v.to_text()}")
    return obj, lines, EXIT_OK


def cmd_lemma7(cfg: RunConfig):
    n = cfg.single_n
    max_m = 4 if cfg.N_max is None else cfg.N_max
    totals: Counter = Counter()
    failed: Counter = Counter()
    failures = []
    for S in cfg.subsets(n):
        p = ModuleParams(n, S)
        for k in range(max_m + 1):
            for m in compositions(k, n + 1):
                for N in (k + 1, k + 2):
                    for name, ok in lemma7_cases(m, N, p):
                        case = name.split(":j=")[0] + ":" + name.rsplit(":", 1)[1]
                        totals[case] += 1
                        if not ok:
                            failed[case] += 1
                            failures.append(f"S={sorted(S)} m={list(m)} N={N} {name}")
    ok = not failures
    obj = {
        "command": "lemma7",
        "n": n,
        "S": _subset_label(cfg.S),
        "max_abs_m": max_m,
        "cases": {c: {"total": totals[c], "failed": failed[c]} for c in sorted(totals)},
        "failures": failures,
        "pass": ok,
    }
    lines = [f"lemma7 n={n} |m|<={max_m} S={_subset_label(cfg.S)}"]
    lines += [f"  {c:32s} {totals[c] - failed[c]}/{totals[c]}" for c in sorted(totals)]
    lines += [f"  FAIL {f}" for f in failures]
    lines.append("PASS" if ok else "FAIL")
    return obj, lines, EXIT_OK if ok else EXIT_FAIL


def _sweep_point(args) -> dict:
    p, N_max, hdeg = args
    res = cross_check(p, N_max, hdeg)
    rep = res["report"]
    return {
        "n": p.n,
        "S": sorted(p.S),
        "a": [str(x) for x in p.a],
        "b": str(p.b),
        "lambda": str(p.lam),
        "verdict": rep.verdict,
        "conditions": {"i": rep.cond_i, "ii": rep.cond_ii, "iii": rep.cond_iii},
        "witness": None if rep.witness is None else {"series": rep.witness.series, "N": rep.witness.N},
        "found_degrees": res["found_degrees"],
        "expected_degrees": res["expected_degrees"],
        "agree": res["agree"],
        "asserted": res["asserted"],
    }


def sweep_points(ns, grid, a=None):
    for n in ns:
        a_n = a if a is not None and len(a) == n else tuple(mpq(1) for _ in range(n))
        for S in all_subsets(n):
            for b in grid:
                for lam in grid:
                    yield ModuleParams(n, S, a=a_n, b=b, lam=lam)


def _workers() -> int:
    try:
        cap = int(os.environ.get("GVM_FORGE_THREADS", "0"))
    except ValueError:
        raise ConfigError("GVM_FORGE_THREADS must be an integer")
    cpus = os.cpu_count() or 1
    return max(1, min(cap, cpus) if cap > 0 else cpus)


def run_sweep(ns, grid, N_max=4, hdeg=4, a=None, workers=1) -> list[dict]:
    jobs = [(p, N_max, hdeg) for p in sweep_points(ns, grid, a)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_point, jobs, chunksize=4))
    return [_sweep_point(j) for j in jobs]


def cmd_sweep(cfg: RunConfig):
    N_max = 4 if cfg.N_max is None else cfg.N_max
    rows = run_sweep(cfg.n, cfg.grid, N_max, cfg.h_deg_max, cfg.a, _workers())
    bad = [r for r in rows if r["asserted"] and not r["agree"]]
    summary = {
        "command": "sweep",
        "points": len(rows),
        "asserted": sum(r["asserted"] for r in rows),
        "disagreements": len(bad),
        "verdicts": dict(sorted(Counter(r["verdict"] for r in rows).items())),
        "pass": not bad,
    }
    lines = [
        f"n={r['n']} S={r['S']} b={r['b']} lambda={r['lambda']} verdict={r['verdict']} "
        f"found={r['found_degrees']} expected={r['expected_degrees']} agree={r['agree']}"
        + ("" if r["asserted"] else " (not asserted)")
        for r in rows
    ]
    lines.append(json.dumps(summary))
    return {"rows": rows, "summary": summary}, lines, EXIT_OK if not bad else EXIT_FAIL


COMMANDS = {
    "axioms": cmd_axioms,
    "det": cmd_det,
    "classify": cmd_classify,
    "singular": cmd_singular,
    "search": cmd_search,
    "lemma7": cmd_lemma7,
    "sweep": cmd_sweep,
}


def render(cfg: RunConfig, obj, lines) -> str:
    if cfg.fmt == "text":
        return "\n".join(lines) + "\n"
    if cfg.command == "sweep":
        out = [json.dumps(r, sort_keys=True) for r in obj["rows"]]
        out.append(json.dumps(obj["summary"], sort_keys=True))
        return "\n".join(out) + "\n"
    return json.dumps(obj, indent=2) + "\n"


_NEG_RATIONAL = re.compile(r"-\d+(/\d+)?(,.*)?$")


def _glue_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "--b -1/2" as two options; rewrite it as "--b=-1/2"
    out: list[str] = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEG_RATIONAL.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        cfg = config_from_args(args)
        obj, lines, code = COMMANDS[cfg.command](cfg)
    except GVMError as exc:
        sys.stderr.write(f"gvm-forge: error: {exc}\n")
        return EXIT_CONFIG
    text = render(cfg, obj, lines)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
