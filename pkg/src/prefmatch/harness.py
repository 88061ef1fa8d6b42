"""Experiment grids and rank-mean tables."""

from __future__ import annotations

import csv
import io
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .aupcr import solve_amm, solve_mcamm
from .classic import solve_fm, solve_pom, solve_popular, solve_rmm
from .gen import MODELS, GenSpec, as_density, cell_seed, generate
from .instance import Instance, Matching
from .metrics import evaluate_all

ALGORITHMS = ("POM", "RMM", "POPM", "FM", "AMM", "MCAMM")
TABLE_ALGORITHMS = ("POM", "RMM", "POPM", "FM", "AMM")

CSV_COLUMNS = (
    "model", "n", "d", "replicate", "algorithm", "cardinality", "unpopularity",
    "rank1", "aupcr", "rhpl", "avg_rank", "worst_rank", "wall_time_ms", "heuristic_flag",
)

# metric -> True when larger is better
TABLE_METRICS = {
    "cardinality": True,
    "unpopularity": False,
    "rank1": True,
    "aupcr": True,
    "rhpl": True,
    "avg_rank": False,
    "worst_rank": False,
}


def _popular(inst: Instance) -> Tuple[Matching, bool]:
    res = solve_popular(inst)
    return res.matching, res.heuristic


def _plain(fn: Callable[[Instance], Matching]):
    return lambda inst: (fn(inst), False)


SOLVERS: Dict[str, Callable[[Instance], Tuple[Matching, bool]]] = {
    "POM": _plain(solve_pom),
    "RMM": _plain(solve_rmm),
    "POPM": _popular,
    "FM": _plain(solve_fm),
    "AMM": _plain(solve_amm),
    "MCAMM": _plain(solve_mcamm),
}


def solve(algo: str, inst: Instance) -> Tuple[Matching, bool]:
    """Run one algorithm; returns the matching and whether a heuristic produced it."""
    try:
        fn = SOLVERS[algo.upper()]
    except KeyError:
        raise ValueError(f"unknown algorithm {algo!r}") from None
    return fn(inst)


def fmt_density(d: Fraction) -> str:
    s = f"{float(d):.6f}".rstrip("0")
    return s + "0" if s.endswith(".") else s


@dataclass
class GridConfig:
    models: Sequence[str]
    sizes: Sequence[int]
    densities: Sequence[Fraction]
    replicates: int
    algorithms: Sequence[str] = TABLE_ALGORITHMS
    master_seed: int = 0
    output: Optional[str] = None

    def __post_init__(self):
        self.models = [m.upper() for m in self.models]
        self.algorithms = [a.upper() for a in self.algorithms]
        self.densities = [as_density(d) for d in self.densities]
        if not (self.models and self.sizes and self.densities and self.algorithms):
            raise ValueError("grid lists must be non-empty")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        for m in self.models:
            if m not in MODELS:
                raise ValueError(f"unknown model {m!r}")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}")

    def cells(self) -> List[Tuple[str, int, Fraction, int]]:
        return [
            (m, n, d, rep)
            for m in self.models
            for n in self.sizes
            for d in self.densities
            for rep in range(self.replicates)
        ]


def cell_instance(master_seed: int, model: str, n: int, d, replicate: int) -> Instance:
    seed = cell_seed(master_seed, model, n, d, replicate)
    return generate(GenSpec(model, n, n, d, seed))


def run_cell(args) -> List[dict]:
    master_seed, model, n, d, rep, algorithms = args
    inst = cell_instance(master_seed, model, n, d, rep)
    rows = []
    for algo in algorithms:
        try:
            t0 = time.perf_counter()
            m, heuristic = solve(algo, inst)
            elapsed = (time.perf_counter() - t0) * 1000.0
        except Exception as exc:
            raise RuntimeError(
                f"{algo} failed on cell model={model} n={n} d={fmt_density(d)} replicate={rep}"
            ) from exc
        rec = evaluate_all(inst, m, wall_time_ms=elapsed, heuristic=heuristic)
        row = {"model": model, "n": n, "d": fmt_density(d), "replicate": rep,
               "algorithm": algo}
        row.update(rec.as_row())
        rows.append(row)
    return rows


def _row_key(row) -> tuple:
    return (MODELS.index(row["model"]), int(row["n"]), Fraction(row["d"]),
            int(row["replicate"]), ALGORITHMS.index(row["algorithm"]))


def run_grid(config: GridConfig, workers: int = 1,
             progress: Optional[Callable[[int, int], None]] = None) -> List[dict]:
    """Run every cell of the grid; rows come back in canonical order."""
    tasks = [(config.master_seed, m, n, d, rep, tuple(config.algorithms))
             for m, n, d, rep in config.cells()]
    rows: List[dict] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for i, cell_rows in enumerate(pool.map(run_cell, tasks, chunksize=1), 1):
                rows.extend(cell_rows)
                if progress:
                    progress(i, len(tasks))
    else:
        for i, task in enumerate(tasks, 1):
            rows.extend(run_cell(task))
            if progress:
                progress(i, len(tasks))
    rows.sort(key=_row_key)
    if config.output:
        write_csv(rows, config.output)
    return rows


def write_csv(rows: Iterable[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(rows_to_csv(rows))


def rows_to_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def read_csv(path) -> List[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


# ---------------------------------------------------------------------------
# rank means


def _metric_value(row: dict, metric: str) -> Optional[Fraction]:
    raw = row[metric]
    return None if raw == "" else Fraction(raw)


def dense_ranks(values: Dict[str, Optional[Fraction]], higher_better: bool) -> Dict[str, int]:
    """Dense ranking; absent values (no matched edges) rank after every present one."""
    distinct = sorted({v for v in values.values() if v is not None}, reverse=higher_better)
    pos = {v: i + 1 for i, v in enumerate(distinct)}
    worst = len(distinct) + 1
    return {k: (worst if v is None else pos[v]) for k, v in values.items()}


@dataclass
class RankTable:
    model: str
    algorithms: List[str]
    metrics: List[str]
    mean_rank: Dict[Tuple[str, str], Fraction] = field(default_factory=dict)

    @property
    def rank_mean(self) -> Dict[str, Fraction]:
        return {
            a: sum(self.mean_rank[a, m] for m in self.metrics) / len(self.metrics)
            for a in self.algorithms
        }

    def to_rows(self, digits: int = 4) -> List[List[str]]:
        out = []
        for m in self.metrics:
            out.append([self.model, m] + [f"{float(self.mean_rank[a, m]):.{digits}f}"
                                          for a in self.algorithms])
        rm = self.rank_mean
        out.append([self.model, "rank_mean"] + [f"{float(rm[a]):.{digits}f}"
                                                for a in self.algorithms])
        return out


def _mean(xs):
    xs = list(xs)
    return sum(xs, Fraction(0)) / len(xs)


def rank_means(rows: Sequence[dict], metrics: Sequence[str] = tuple(TABLE_METRICS),
               algorithms: Optional[Sequence[str]] = None) -> Dict[str, RankTable]:
    """Per-model tables of mean dense ranks.

    Ranks are taken per instance, averaged over replicates, then densities,
    then sizes.
    """
    if algorithms is None:
        present = {r["algorithm"] for r in rows}
        algorithms = [a for a in ALGORITHMS if a in present]
    algorithms = [a.upper() for a in algorithms]
    cells: Dict[tuple, Dict[str, dict]] = defaultdict(dict)
    for r in rows:
        if r["algorithm"] in algorithms:
            cells[(r["model"], int(r["n"]), Fraction(r["d"]), int(r["replicate"]))][r["algorithm"]] = r

    # model -> n -> d -> list of per-replicate rank dicts
    nested = defaultdict(lambda: defaultdict(lambda: defaultdict(list)))
    for (model, n, d, rep), by_algo in sorted(cells.items()):
        missing = [a for a in algorithms if a not in by_algo]
        if missing:
            raise ValueError(f"cell {model} n={n} d={d} rep={rep} lacks rows for {missing}")
        ranks = {}
        for metric in metrics:
            vals = {a: _metric_value(by_algo[a], metric) for a in algorithms}
            ranks[metric] = dense_ranks(vals, TABLE_METRICS[metric])
        nested[model][n][d].append(ranks)

    tables = {}
    for model in sorted(nested, key=MODELS.index):
        table = RankTable(model, list(algorithms), list(metrics))
        for a in algorithms:
            for metric in metrics:
                per_n = []
                for n, by_d in nested[model].items():
                    per_d = [_mean(rk[metric][a] for rk in reps) for reps in by_d.values()]
                    per_n.append(_mean(per_d))
                table.mean_rank[a, metric] = _mean(per_n)
        tables[model] = table
    return tables


def tables_to_csv(tables: Dict[str, RankTable]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for i, table in enumerate(tables.values()):
        if i == 0:
            w.writerow(["model", "metric"] + table.algorithms)
        w.writerows(table.to_rows())
    return buf.getvalue()


def parse_range(spec: str, kind=int) -> list:
    """'a..b:step' (inclusive) or a comma list."""
    spec = spec.strip()
    if ".." in spec:
        bounds, _, step = spec.partition(":")
        lo, _, hi = bounds.partition("..")
        lo, hi = kind(lo), kind(hi)
        step = kind(step) if step else kind(1)
        if step <= 0:
            raise ValueError(f"non-positive step in {spec!r}")
        out = []
        k = 0
        while lo + k * step <= hi:
            out.append(lo + k * step)
            k += 1
        return out
    return [kind(x) for x in spec.split(",") if x.strip()]


def parse_density_range(spec: str) -> List[Fraction]:
    return parse_range(spec, kind=lambda s: Fraction(str(s).strip()))
