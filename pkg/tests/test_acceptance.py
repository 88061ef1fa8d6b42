"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line (see the "acceptance criteria" section
of the pytest summary). The desk-scale grid takes about ten minutes on one
core; set PREFMATCH_WORKERS to spread it over more processes.
"""

import os
import time
from fractions import Fraction
from pathlib import Path

from prefmatch.aupcr import AupcrValue, aupc_from_counts, compute_aupcr, solve_amm, solve_mcamm
from prefmatch.classic import solve_fm, solve_pom, solve_popular, solve_rmm
from prefmatch.harness import (
    TABLE_ALGORITHMS,
    CSV_COLUMNS,
    GridConfig,
    cell_instance,
    parse_density_range,
    rank_means,
    read_csv,
    run_grid,
    tables_to_csv,
)
from prefmatch.cli import main as cli_main
from prefmatch.instance import Signature, compare_rank_maximal, serialize_instance, signature_of
from prefmatch.metrics import unpopularity_margin
from prefmatch.oracle import _Table, oracle_optima

from conftest import load, random_suite

SUITE_SIZE = 520


def _suite():
    return random_suite(SUITE_SIZE, seed=20240601)


def test_c1_aupcr_formula(report):
    t0 = time.perf_counter()
    value = AupcrValue(aupc_from_counts(6, Signature((4, 0, 2, 1, 1), 0).per_rank), 8 * 6)
    elapsed = time.perf_counter() - t0
    ok = value.as_fraction() == Fraction(37, 48) and elapsed < 1e-3
    report("C1 AUPCR of (4,0,2,1,1,0) with |A|=8 |P|=6 is 37/48", ok,
           f"got {value.as_fraction()} in {elapsed * 1e6:.0f} us")
    assert ok


def test_c2_fixture_a(report):
    t0 = time.perf_counter()
    inst = load("fix_a.txt")
    m = solve_amm(inst)
    opt = oracle_optima(inst)
    elapsed = time.perf_counter() - t0
    ok = (len(m) == 3 and opt.max_cardinality == 4
          and compute_aupcr(inst, m) == opt.max_aupcr and elapsed < 1)
    report("C2 FIX-A AMM cardinality 3, max cardinality 4, AMM optimal", ok,
           f"AMM |M|={len(m)} AUPCR={compute_aupcr(inst, m)}, oracle max card={opt.max_cardinality} "
           f"max AUPCR={opt.max_aupcr}, {elapsed:.3f}s")
    assert ok


def test_c3_fixture_b(report):
    t0 = time.perf_counter()
    inst = load("fix_b.txt")
    amm, mcamm = solve_amm(inst), solve_mcamm(inst)
    table = _Table(inst)
    best = int(table.aupc.max())
    optimal_cards = sorted({int(c) for c in table.card[table.aupc == best]})
    elapsed = time.perf_counter() - t0
    target = Fraction(30, 36)
    checks = {
        "AMM AUPCR = 30/36": compute_aupcr(inst, amm).as_fraction() == target,
        "MCAMM AUPCR = 30/36": compute_aupcr(inst, mcamm).as_fraction() == target,
        "MCAMM cardinality 6": len(mcamm) == 6,
        "optimal matching of cardinality 5 exists": 5 in optimal_cards,
        "under 1 s": elapsed < 1,
    }
    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    report("C3 FIX-B AMM/MCAMM AUPCR 30/36, cardinality 6, optimal cardinality-5 AMM exists", ok,
           f"AMM {compute_aupcr(inst, amm)} |M|={len(amm)}, MCAMM {compute_aupcr(inst, mcamm)} "
           f"|M|={len(mcamm)}, oracle max {best}/36 at cardinalities {optimal_cards}"
           + (f"; failed: {', '.join(failed)}" if failed else ""))
    assert ok


def test_c4_fixture_c(report):
    t0 = time.perf_counter()
    inst = load("fix_c.txt")
    fm_sig = signature_of(inst, solve_fm(inst))
    amm_sig = signature_of(inst, solve_amm(inst))
    opt = oracle_optima(inst)
    hand = Signature((3, 3, 0, 0, 1), 0)
    hand_value = AupcrValue(aupc_from_counts(inst.n_posts, hand.per_rank), 49)
    elapsed = time.perf_counter() - t0
    ok = (fm_sig.padded(5).per_rank == (4, 0, 1, 2, 0)
          and compare_rank_maximal(fm_sig, amm_sig) == 1
          and hand_value == opt.max_aupcr
          and compute_aupcr(inst, solve_amm(inst)) == opt.max_aupcr
          and elapsed < 1)
    report("C4 FIX-C FM signature (4,0,1,2,0), FM more rank-maximal than AMM", ok,
           f"FM {fm_sig}, AMM {amm_sig}, (3,3,0,0,1) value {hand_value} vs oracle max "
           f"{opt.max_aupcr}, {elapsed:.3f}s")
    assert ok


def test_c5_oracle_equivalence(report):
    t0 = time.perf_counter()
    failures = []
    suite = _suite()
    for i, inst in enumerate(suite):
        opt = oracle_optima(inst)
        r = inst.max_rank
        amm, mcamm = solve_amm(inst), solve_mcamm(inst)
        rmm, fm, pom = solve_rmm(inst), solve_fm(inst), solve_pom(inst)
        pop = solve_popular(inst)
        checks = {
            "amm": compute_aupcr(inst, amm) == opt.max_aupcr,
            "mcamm": (compute_aupcr(inst, mcamm), len(mcamm)) == (opt.max_aupcr, opt.mcamm_card),
            "rmm": signature_of(inst, rmm).padded(r) == opt.rank_maximal_signature.padded(r),
            "fm": signature_of(inst, fm).padded(r) == opt.fair_signature.padded(r),
            "pom": opt.pareto_set_check(pom) and len(pom) == opt.max_cardinality,
            "margin": all(unpopularity_margin(inst, m) == opt.margin_of(m)
                          for m in (amm, fm, pom, pop.matching)),
            "popular": pop.popular_exists == opt.popular_exists,
        }
        failures += [(i, k) for k, v in checks.items() if not v]
    elapsed = time.perf_counter() - t0
    ok = not failures and len(suite) >= 500 and elapsed < 120
    report("C5 oracle equivalence suite", ok,
           f"{len(suite)} instances, {len(failures)} failures, {elapsed:.1f}s"
           + (f", first: {failures[:5]}" if failures else ""))
    assert ok


def test_c6_amm_is_pareto_optimal(report):
    failures = [i for i, inst in enumerate(_suite())
                if not oracle_optima(inst).pareto_set_check(solve_amm(inst))]
    ok = not failures
    report("C6 every AMM output is Pareto optimal", ok,
           f"{SUITE_SIZE} instances, {len(failures)} failures")
    assert ok


def test_c7_aupcr_granularity(report):
    failures = []
    for i, inst in enumerate(_suite()):
        values = sorted({Fraction(int(x), inst.n_applicants * inst.n_posts)
                         for x in _Table(inst).aupc})
        step = Fraction(1, inst.n_applicants * inst.n_posts)
        if any(b - a < step for a, b in zip(values, values[1:])):
            failures.append(i)
    ok = not failures
    report("C7 distinct AUPCR values differ by at least 1/(|A||P|)", ok,
           f"{SUITE_SIZE} instances, {len(failures)} failures")
    assert ok


def test_c8_desk_grid(report, tmp_path_factory):
    out_dir = Path(os.environ.get("PREFMATCH_ACCEPTANCE_DIR") or tmp_path_factory.mktemp("grid"))
    out_dir.mkdir(parents=True, exist_ok=True)
    workers = int(os.environ.get("PREFMATCH_WORKERS", "1"))
    cfg = GridConfig(
        models=["UNI", "HC"],
        sizes=[50, 100, 150, 200],
        densities=parse_density_range("0.02..0.20:0.02"),
        replicates=10,
        algorithms=TABLE_ALGORITHMS,
        master_seed=0,
        output=str(out_dir / "desk_grid.csv"),
    )
    t0 = time.perf_counter()
    rows = run_grid(cfg, workers=workers)
    elapsed = time.perf_counter() - t0
    tables = rank_means(rows)
    (out_dir / "desk_ranks.csv").write_text(tables_to_csv(tables))

    # cardinality counterexamples: AMM below POM (a maximum matching) on some instance
    by_cell = {}
    for r in rows:
        by_cell.setdefault((r["model"], int(r["n"]), r["d"], int(r["replicate"])), {})[r["algorithm"]] = r
    counterexamples = []
    for (model, n, d, rep), by in sorted(by_cell.items()):
        if int(by["AMM"]["cardinality"]) < int(by["POM"]["cardinality"]):
            path = out_dir / f"amm_not_max_{model}_{n}_{d}_{rep}.txt"
            path.write_text(serialize_instance(cell_instance(0, model, n, d, rep)))
            counterexamples.append(str(path))

    ok_a, ok_b, ok_c = True, True, True
    details = []
    for model, table in tables.items():
        rm = table.rank_mean
        others = min(v for a, v in rm.items() if a != "AMM")
        ok_a &= rm["AMM"] < others
        ok_b &= table.mean_rank["AMM", "aupcr"] == 1
        ok_c &= all(table.mean_rank[a, "cardinality"] == 1 for a in ("POM", "FM", "AMM"))
        details.append(f"{model} rank means " + " ".join(f"{a}={float(v):.2f}" for a, v in rm.items()))
    ok_time = elapsed < 30 * 60
    report("C8a AMM has the strictly lowest rank mean", ok_a, "; ".join(details))
    report("C8b AMM mean AUPCR rank is 1.00", ok_b)
    report("C8c POM, FM, AMM mean cardinality rank 1.00", ok_c and not counterexamples,
           f"{len(counterexamples)} counterexample instances"
           + (f" written: {counterexamples[:3]}" if counterexamples else ""))
    report("C8 runtime under 30 min", ok_time,
           f"{len(rows)} rows in {elapsed:.0f}s with {workers} worker(s); CSV in {out_dir}")
    assert ok_a and ok_b and ok_c and not counterexamples and ok_time


def test_c9_bench_determinism(report, tmp_path):
    outputs = []
    for k in range(2):
        path = tmp_path / f"run{k}.csv"
        assert cli_main(["bench", "--models", "uni,hc", "--sizes", "20..40:20",
                         "--densities", "0.05..0.15:0.05", "--replicates", "2",
                         "--seed", "42", "-o", str(path)]) == 0
        outputs.append(path)

    def without_wall_time(path):
        drop = CSV_COLUMNS.index("wall_time_ms")
        lines = path.read_bytes().splitlines()
        return b"\n".join(b",".join(f for j, f in enumerate(line.split(b",")) if j != drop)
                          for line in lines)

    ok = without_wall_time(outputs[0]) == without_wall_time(outputs[1])
    rows = len(read_csv(outputs[0]))
    report("C9 bench output is byte-identical without wall_time", ok, f"{rows} rows compared")
    assert ok
