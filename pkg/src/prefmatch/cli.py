"""Command line entry point: ``prefmatch <subcommand>``.

Exit codes: 0 success, 1 oracle check failed, 2 validation error,
3 infeasible or too large for the oracle, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .aupcr import compute_aupcr
from .gen import GenSpec, generate
from .harness import (
    ALGORITHMS,
    TABLE_ALGORITHMS,
    GridConfig,
    parse_density_range,
    parse_range,
    rank_means,
    read_csv,
    run_grid,
    solve,
    tables_to_csv,
)
from .instance import (
    InvalidMatching,
    ParseError,
    parse_instance,
    parse_matching,
    serialize_instance,
    serialize_matching,
    signature_of,
)
from .metrics import evaluate_all, unpopularity_margin
from .oracle import InstanceTooLarge, oracle_optima
from .wmatch import InfeasiblePerfect

log = logging.getLogger("prefmatch")

EXIT_CHECK_FAILED = 1
EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4


def _read_instance(path):
    return parse_instance(Path(path).read_bytes())


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_gen(args):
    spec = GenSpec(args.model, args.n, args.n, args.density, args.seed)
    _write(args.output, serialize_instance(generate(spec)))


def cmd_solve(args):
    inst = _read_instance(args.input)
    m, _ = solve(args.algo, inst)
    _write(args.output, serialize_matching(m))


def cmd_eval(args):
    inst = _read_instance(args.input)
    m = parse_matching(Path(args.matching).read_bytes(), inst)
    rec = evaluate_all(inst, m)
    if args.json:
        print(json.dumps(rec.as_json(), indent=2))
    else:
        for k, v in rec.as_row().items():
            if k != "wall_time_ms":
                print(f"{k}: {v}")


def cmd_bench(args):
    cfg = GridConfig(
        models=[m.strip() for m in args.models.split(",")],
        sizes=parse_range(args.sizes),
        densities=parse_density_range(args.densities),
        replicates=args.replicates,
        algorithms=[a.strip() for a in args.algos.split(",")],
        master_seed=args.seed,
        output=args.output,
    )

    def progress(done, total):
        log.info("cell %d/%d", done, total)

    rows = run_grid(cfg, workers=args.workers, progress=progress)
    log.info("wrote %d rows to %s", len(rows), args.output)


def cmd_ranks(args):
    rows = read_csv(args.input)
    algos = [a.strip().upper() for a in args.algos.split(",")] if args.algos else None
    _write(args.output, tables_to_csv(rank_means(rows, algorithms=algos)))


def cmd_oracle(args):
    inst = _read_instance(args.input)
    opt = oracle_optima(inst, max_applicants=args.cap)
    if not args.check:
        print(json.dumps({
            "n_matchings": opt.n_matchings,
            "max_aupcr": str(opt.max_aupcr),
            "mcamm_card": opt.mcamm_card,
            "rank_maximal_signature": list(opt.rank_maximal_signature.as_tuple()),
            "fair_signature": list(opt.fair_signature.as_tuple()),
            "max_cardinality": opt.max_cardinality,
            "min_margin": opt.min_margin,
            "popular_exists": opt.popular_exists,
        }, indent=2))
        return 0
    if not args.matching:
        raise ValueError("--check needs -m <matching>")
    m = parse_matching(Path(args.matching).read_bytes(), inst)
    r = inst.max_rank
    sig = signature_of(inst, m).padded(r)
    checks = {
        "amm": lambda: compute_aupcr(inst, m) == opt.max_aupcr,
        "mcamm": lambda: (compute_aupcr(inst, m), len(m)) == (opt.max_aupcr, opt.mcamm_card),
        "rmm": lambda: sig == opt.rank_maximal_signature.padded(r),
        "fm": lambda: sig == opt.fair_signature.padded(r),
        "pom": lambda: opt.pareto_set_check(m) and len(m) == opt.max_cardinality,
        "popular": lambda: opt.margin_of(m) <= 0,
        "margin": lambda: opt.margin_of(m) == unpopularity_margin(inst, m),
    }
    ok = checks[args.check]()
    print(f"{args.check}: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="prefmatch", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("--model", required=True, type=str.upper, choices=["UNI", "HC"])
    g.add_argument("--n", required=True, type=int, help="applicants (= posts)")
    g.add_argument("--density", required=True)
    g.add_argument("--seed", required=True, type=int)
    g.add_argument("-o", "--output", default="-")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="compute a matching")
    s.add_argument("--algo", required=True, type=str.upper, choices=ALGORITHMS)
    s.add_argument("-i", "--input", required=True)
    s.add_argument("-o", "--output", default="-")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("eval", help="evaluate a matching")
    e.add_argument("-i", "--input", required=True)
    e.add_argument("-m", "--matching", required=True)
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_eval)

    b = sub.add_parser("bench", help="run an experiment grid")
    b.add_argument("--models", default="uni,hc")
    b.add_argument("--sizes", required=True, help="a..b:step or comma list")
    b.add_argument("--densities", required=True, help="a..b:step or comma list")
    b.add_argument("--replicates", type=int, default=1)
    b.add_argument("--algos", default=",".join(TABLE_ALGORITHMS))
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("-o", "--output", required=True)
    b.set_defaults(func=cmd_bench)

    r = sub.add_parser("ranks", help="rank-mean tables from a bench CSV")
    r.add_argument("-i", "--input", required=True)
    r.add_argument("-o", "--output", default="-")
    r.add_argument("--algos", default=None, help="restrict to these algorithms")
    r.set_defaults(func=cmd_ranks)

    o = sub.add_parser("oracle", help="brute-force optima for a small instance")
    o.add_argument("-i", "--input", required=True)
    o.add_argument("--check", choices=["amm", "mcamm", "rmm", "fm", "pom", "popular", "margin"])
    o.add_argument("-m", "--matching")
    o.add_argument("--cap", type=int, default=8)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args) or 0
    except (InfeasiblePerfect, InstanceTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ParseError, InvalidMatching, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
