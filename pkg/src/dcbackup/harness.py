"""Seeded scenario generation and experiment campaigns.

Random draws use one PCG64 stream per quantity class, seeded from
``SeedSequence([seed, STREAMS[name]])``.  Adding a new class therefore never
perturbs the values drawn for the existing ones.
"""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Optional

import numpy as np

from .milp import OPTIMAL
from .netmodel import DataItem, DcInfo, Instance, Link, Network, load_topology
from .pathgen import build_candidate_sets
from .planner import MAXBW, MINCOST, solve_instance

STREAMS = {"link_capacity": 1, "item_size": 2, "storage_cost": 3, "storage_capacity": 4}

DEFAULT_SAFE = (9, 12, 14, 18)
LARGE_SAFE = (2, 5, 7, 8, 9, 11, 12, 14, 15, 16)

CSV_COLUMNS = ["d_count", "epsilon1", "seed", "status_mincost", "cost_mincost", "status_maxbw",
               "cost_maxbw_as_mincost", "reduction", "solve_time_s", "bb_nodes"]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    topology: str = "builtin:internetmci"
    affected: int = 3
    safe: tuple[int, ...] = DEFAULT_SAFE
    d_counts: tuple[int, ...] = (5, 10, 15, 20)
    epsilon1s: tuple = (70,)
    seeds: tuple[int, ...] = (1,)
    capacity_range: tuple[int, int] = (10, 20)
    size_range: tuple[int, int] = (50, 70)
    wcost_range: tuple[int, int] = (50, 100)
    pn: Optional[int] = None        # None: every candidate path may be used
    vn: Optional[int] = None        # None: number of safe DCs
    lam: Optional[int] = 10000      # None: 1 + largest capacity in the instance
    max_hops: Optional[int] = None  # None: |V| - 1
    extra_dcs: tuple[int, ...] = ()  # nodes promoted to data centers
    time_limit: Optional[float] = 600.0
    node_limit: Optional[int] = None
    lp_method: str = "auto"
    record_timing: bool = True
    workers: int = 1

    def __post_init__(self):
        for name in ("capacity_range", "size_range", "wcost_range"):
            lo, hi = getattr(self, name)
            if int(lo) != lo or int(hi) != hi or lo > hi or lo < 0:
                raise ConfigError(f"{name} must be a non-empty non-negative integer interval")
        for s in self.seeds:
            if not 0 <= s < 2**64:
                raise ConfigError(f"seed {s} is not a 64-bit unsigned value")
        if not self.safe:
            raise ConfigError("safe DC set is empty")
        if self.affected in self.safe:
            raise ConfigError("affected node is listed as safe")
        if self.size_range[0] < 1:
            raise ConfigError("item sizes must be at least 1")


def _rng(seed: int, stream: str) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, STREAMS[stream]])))


@lru_cache(maxsize=8)
def _topology(source: str) -> Network:
    return load_topology(source)


@lru_cache(maxsize=32)
def _candidates(source: str, affected: int, safe: tuple[int, ...], max_hops: Optional[int]):
    cands = build_candidate_sets(_topology(source), affected, safe, max_hops)
    return tuple(p for v in sorted(cands) for p in cands[v])


def generate_instance(config: ScenarioConfig, num_items: int, seed: int,
                      epsilon1=None) -> Instance:
    """Deterministic instance for ``(config, num_items, seed)``."""
    base = _topology(config.topology)
    if config.extra_dcs:
        missing = [v for v in config.extra_dcs if v not in base.nodes]
        if missing:
            raise ConfigError(f"extra DC nodes {missing} are not in {config.topology}")
        info = dict(base.dc_nodes)
        info.update({v: info.get(v, DcInfo()) for v in config.extra_dcs})
        base = base.with_dc_info(info)
    for v in (config.affected, *config.safe):
        if v not in base.dc_nodes:
            raise ConfigError(f"node {v} is not a data center in {config.topology}")
    if not 0 <= seed < 2**64:
        raise ConfigError(f"seed {seed} is not a 64-bit unsigned value")

    lo, hi = config.capacity_range
    caps = _rng(seed, "link_capacity").integers(lo, hi, size=len(base.links), endpoint=True)
    network = base.with_capacities({l.endpoints: int(c) for l, c in zip(base.links, caps)})

    lo, hi = config.size_range
    sizes = [int(x) for x in _rng(seed, "item_size").integers(lo, hi, size=num_items,
                                                                endpoint=True)]
    dcs = sorted(base.dc_nodes)
    lo, hi = config.wcost_range
    wcost = dict(zip(dcs, (int(x) for x in _rng(seed, "storage_cost").integers(
        lo, hi, size=len(dcs), endpoint=True))))

    total = sum(sizes)
    safe = sorted(config.safe)
    s_lo = max(sizes, default=0)
    s_hi = max(s_lo, math.ceil(2 * total / len(safe)))
    storage = [int(x) for x in _rng(seed, "storage_capacity").integers(
        s_lo, s_hi, size=len(safe), endpoint=True)]
    if sum(storage) <= total:
        # smallest uniform scale-up that makes the safe DCs hold strictly more than all data
        factor = (total + 1) / max(sum(storage), 1)
        storage = [max(1, math.ceil(s * factor)) for s in storage]
    info = {v: DcInfo(0, wcost[v]) for v in dcs}
    info.update({v: DcInfo(s, wcost[v]) for v, s in zip(safe, storage)})
    network = network.with_dc_info(info)

    paths = _candidates(config.topology, config.affected, tuple(safe), config.max_hops)
    items = tuple(DataItem(i, config.affected, size, paths) for i, size in enumerate(sizes))
    eps = config.epsilon1s[0] if epsilon1 is None else epsilon1
    vn = len(safe) if config.vn is None else config.vn
    return Instance(network, config.affected, tuple(safe), items, eps, vn, lam=config.lam,
                    pn=config.pn, max_hops=config.max_hops)


def random_instance(seed: int, num_nodes: int = 6, num_items: int = 3, num_safe: int = 2,
                    size_range=(5, 30), capacity_range=(2, 10), cost_range=(1, 9),
                    storage_range=None, wcost_range=(1, 5), epsilon1_range=(1, 10),
                    extra_links: int = 2, vn=None, pn=None, max_hops=None) -> Instance:
    """Small random instance on a random connected graph; node 0 is affected.

    Storage is drawn so the safe DCs usually, not always, hold all the data.
    """
    rng = np.random.default_rng([seed, 99])
    nodes = tuple(range(num_nodes))
    pairs = {(int(rng.integers(0, v)), v) for v in range(1, num_nodes)}  # spanning tree
    others = [(u, v) for u in nodes for v in nodes if u < v and (u, v) not in pairs]
    for k in rng.permutation(len(others))[:extra_links]:
        pairs.add(others[k])
    links = tuple(Link(u, v, int(rng.integers(capacity_range[0], capacity_range[1] + 1)),
                       int(rng.integers(cost_range[0], cost_range[1] + 1)))
                  for u, v in sorted(pairs))
    safe = tuple(sorted(int(v) for v in rng.choice(np.arange(1, num_nodes), num_safe,
                                                   replace=False)))
    sizes = [int(x) for x in rng.integers(size_range[0], size_range[1] + 1, size=num_items)]
    if storage_range is None:
        hi = max(1, math.ceil(2 * sum(sizes) / num_safe))
        storage_range = (max(1, hi // 3), hi)
    info = {0: DcInfo(0, 1)}
    for v in safe:
        info[v] = DcInfo(int(rng.integers(storage_range[0], storage_range[1] + 1)),
                         int(rng.integers(wcost_range[0], wcost_range[1] + 1)))
    network = Network(nodes, links, info)
    paths = tuple(p for v, ps in sorted(build_candidate_sets(network, 0, safe, max_hops).items())
                  for p in ps)
    items = tuple(DataItem(i, 0, c, paths) for i, c in enumerate(sizes))
    eps = int(rng.integers(epsilon1_range[0], epsilon1_range[1] + 1))
    return Instance(network, 0, safe, items, eps, num_safe if vn is None else vn, pn=pn,
                    max_hops=max_hops)


def tiny_instance(seed: int, cap: int = 10**7) -> Instance:
    """Instance with at most 4 nodes and 2 items whose model domain is at most ``cap``.

    Draws are repeated on derived seeds until the domain fits.
    """
    from .milp import domain_size
    from .planner import build_backup_ilp

    for attempt in range(1000):
        rng = np.random.default_rng([seed, attempt, 7])
        n = int(rng.integers(3, 5))
        inst = random_instance(
            int(rng.integers(0, 2**32)), num_nodes=n, num_items=int(rng.integers(1, 3)),
            num_safe=int(rng.integers(1, min(2, n - 1) + 1)), size_range=(1, 3),
            capacity_range=(1, 3), cost_range=(1, 4), storage_range=(1, 4), wcost_range=(1, 3),
            epsilon1_range=(1, 3), extra_links=int(rng.integers(0, 2)))
        if domain_size(build_backup_ilp(inst)[0]) <= cap:
            return inst
    raise RuntimeError(f"no tiny instance within the domain cap for seed {seed}")


@dataclass
class CellResult:
    d_count: int
    epsilon1: object
    seed: int
    status_mincost: str
    cost_mincost: Optional[int]
    status_maxbw: str
    cost_maxbw: Optional[int]
    solve_time_s: float
    bb_nodes: int
    plan_mincost: object = field(default=None, repr=False)
    plan_maxbw: object = field(default=None, repr=False)

    @property
    def reduction(self) -> Optional[float]:
        if self.cost_mincost is None or not self.cost_maxbw:
            return None
        return 1 - self.cost_mincost / self.cost_maxbw

    def row(self, record_timing: bool = True) -> dict[str, str]:
        red = self.reduction
        return {
            "d_count": str(self.d_count),
            "epsilon1": str(self.epsilon1),
            "seed": str(self.seed),
            "status_mincost": self.status_mincost,
            "cost_mincost": "" if self.cost_mincost is None else str(self.cost_mincost),
            "status_maxbw": self.status_maxbw,
            "cost_maxbw_as_mincost": "" if self.cost_maxbw is None else str(self.cost_maxbw),
            "reduction": "" if red is None else f"{red:.6f}",
            "solve_time_s": f"{self.solve_time_s:.6f}" if record_timing else "",
            "bb_nodes": str(self.bb_nodes),
        }


def run_cell(config: ScenarioConfig, d_count: int, epsilon1, seed: int) -> CellResult:
    instance = generate_instance(config, d_count, seed, epsilon1)
    kw = dict(time_limit=config.time_limit, node_limit=config.node_limit,
              method=config.lp_method)
    t0 = time.perf_counter()
    low = solve_instance(instance, MINCOST, **kw)
    elapsed = time.perf_counter() - t0
    high = solve_instance(instance, MAXBW, **kw)
    return CellResult(
        d_count, epsilon1, seed,
        low.status, low.plan.total_cost if low.plan else None,
        high.status, high.plan.total_cost if high.plan else None,
        elapsed, low.result.stats.nodes, low.plan, high.plan)


def _cell_job(args):
    return run_cell(*args)


def experiment_cells(config: ScenarioConfig):
    return [(d, eps, seed) for d in config.d_counts for eps in config.epsilon1s
            for seed in config.seeds]


def run_experiment(config: ScenarioConfig, progress=None) -> list[CellResult]:
    """Solve every (|D|, epsilon1, seed) cell; results come back in cell order."""
    cells = experiment_cells(config)
    jobs = [(config, *cell) for cell in cells]
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            results = list(pool.map(_cell_job, jobs))
    else:
        results = []
        for job in jobs:
            results.append(_cell_job(job))
            if progress:
                progress(results[-1])
    return results


def format_csv(results: list[CellResult], record_timing: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in results:
        writer.writerow(r.row(record_timing))
    return buf.getvalue()


def large_scale_config(**overrides) -> ScenarioConfig:
    """Ten safe DCs with epsilon1 = 60, the stress scenario."""
    return replace(ScenarioConfig(safe=LARGE_SAFE, epsilon1s=(60,), extra_dcs=LARGE_SAFE),
                   **overrides)
