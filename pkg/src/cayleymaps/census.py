"""Exhaustive MRR censuses, uniform map sampling, and fraction estimation.

The census measure is the labelled one: each connection set S carries
(|S|-1)! maps, so most maps live on the largest sets. The sampler
reproduces that measure exactly with a weight table over inverse-class
profiles plus rejection on non-generating draws; rejection keeps the
conditional distribution uniform because weights are proportional to each
set's map count.
"""

from __future__ import annotations

import math
import random
import time
from bisect import bisect_right
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist

from . import _kernel
from .cayley import CayleyMap, ConnectionSet, count_labelled_maps, enumerate_connection_sets
from .errors import BudgetExceededError, InvalidInputError, SamplerRetryError
from .group import FiniteGroup, generates, inverse_class_partition
from .perm import CyclicOrdering

DEFAULT_BUDGET = 10 ** 8
SAMPLER_RETRY_CAP = 10 ** 6


@dataclass(frozen=True)
class CensusResult:
    """Exact labelled-map census of one group."""

    group_name: str
    order: int
    total_maps: int
    mrr_count: int
    fraction: Fraction
    per_size: dict[int, tuple[int, int]]  # |S| -> (maps, mrr maps)
    shards: int
    backend: str
    wall_time_s: float

    def __post_init__(self):
        if self.mrr_count > self.total_maps:
            raise InvalidInputError("mrr_count exceeds total_maps")
        sizes = sorted(self.per_size)
        if sum(self.per_size[s][0] for s in sizes) != self.total_maps:
            raise InvalidInputError("per-size map counts do not sum to the total")
        if sum(self.per_size[s][1] for s in sizes) != self.mrr_count:
            raise InvalidInputError("per-size MRR counts do not sum to the total")

    def data_fields(self) -> dict:
        """Deterministic payload (everything except timing/backend metadata)."""
        return {
            "group": self.group_name,
            "order": self.order,
            "total_maps": self.total_maps,
            "mrr_count": self.mrr_count,
            "fraction": str(self.fraction),
            "per_size": {str(k): list(v) for k, v in sorted(self.per_size.items())},
        }


@dataclass(frozen=True)
class SampleEstimate:
    """Monte Carlo estimate of the MRR fraction with a Wilson score interval."""

    group_name: str
    order: int
    n_samples: int
    mrr_hits: int
    point_estimate: float
    ci_low: float
    ci_high: float
    confidence: float
    seed: int
    workers: int = 1

    def __post_init__(self):
        if not 0.0 <= self.ci_low <= self.point_estimate <= self.ci_high <= 1.0:
            raise InvalidInputError("confidence interval does not bracket the point estimate")


def _budget_guard(group: FiniteGroup, budget: int) -> int:
    """Exact map count if within budget, else BudgetExceededError.

    The full connection set alone contributes (r-2)! maps, so that lower
    bound is checked before any subset enumeration.
    """
    floor = math.factorial(max(group.order - 2, 0))
    if floor > budget:
        raise BudgetExceededError(
            f"census of {group.name} needs at least {floor} maps, over the budget of {budget}; "
            "use sampling instead")
    total = count_labelled_maps(group)
    if total > budget:
        raise BudgetExceededError(
            f"census of {group.name} has {total} maps, over the budget of {budget}; "
            "use sampling instead")
    return total


def _shard_ranges(block_sizes: list[int], shards: int) -> list[list[tuple[int, int, int]]]:
    """Split the concatenated index space into per-shard (block, start, stop) jobs."""
    total = sum(block_sizes)
    cuts = [i * total // shards for i in range(shards + 1)]
    jobs: list[list[tuple[int, int, int]]] = [[] for _ in range(shards)]
    offset = 0
    for b, size in enumerate(block_sizes):
        for i in range(shards):
            lo = max(cuts[i], offset)
            hi = min(cuts[i + 1], offset + size)
            if lo < hi:
                jobs[i].append((b, lo - offset, hi - offset))
        offset += size
    return jobs


def exhaustive_census(group: FiniteGroup, budget: int = DEFAULT_BUDGET,
                      shards: int = 1, kernel=None) -> CensusResult:
    """Visit every labelled Cayley map on the group and count the MRRs.

    The (S, ordering-index) stream is cut into `shards` contiguous ranges;
    results are order-independent sums, so any shard count yields identical
    data fields. With the compiled kernel the shards run on real threads.
    """
    if group.order < 2:
        raise InvalidInputError("census needs a group of order >= 2")
    if shards < 1:
        raise InvalidInputError("shards must be >= 1")
    kern = kernel or _kernel.get_kernel()
    started = time.perf_counter()
    _budget_guard(group, budget)
    sets = list(enumerate_connection_sets(group))
    block_sizes = [math.factorial(c.size - 1) for c in sets]
    mult, inv, e = group.packed()
    r = group.order

    def run_jobs(jobs: list[tuple[int, int, int]]) -> dict[int, tuple[int, int]]:
        acc: dict[int, tuple[int, int]] = {}
        for b, start, stop in jobs:
            elems = sets[b].elements
            maps, mrr = kern.census_block(mult, inv, e, r, elems, start, stop)
            m0, h0 = acc.get(len(elems), (0, 0))
            acc[len(elems)] = (m0 + maps, h0 + mrr)
        return acc

    shard_jobs = _shard_ranges(block_sizes, shards)
    if shards == 1:
        partials = [run_jobs(shard_jobs[0])]
    else:
        with ThreadPoolExecutor(max_workers=shards) as pool:
            partials = list(pool.map(run_jobs, shard_jobs))

    per_size: dict[int, tuple[int, int]] = {}
    for part in partials:
        for size, (maps, mrr) in part.items():
            m0, h0 = per_size.get(size, (0, 0))
            per_size[size] = (m0 + maps, h0 + mrr)
    total = sum(v[0] for v in per_size.values())
    mrr_count = sum(v[1] for v in per_size.values())
    return CensusResult(
        group_name=group.name,
        order=group.order,
        total_maps=total,
        mrr_count=mrr_count,
        fraction=Fraction(mrr_count, total),
        per_size=dict(sorted(per_size.items())),
        shards=shards,
        backend=_kernel.BACKEND if kernel is None else getattr(kernel, "__name__", "custom"),
        wall_time_s=time.perf_counter() - started,
    )


# ---------------------------------------------------------------------------
# uniform sampling of labelled maps

class MapSampler:
    """Uniform sampler over the labelled Cayley maps of one group.

    Proposal: pick (a, b) = (number of involution classes, number of pair
    classes) with weight C(A,a)*C(B,b)*(a+2b-1)!, then uniform classes of
    each kind; reject and redraw whenever the proposed set does not
    generate. Finally shuffle the non-anchor elements into a cycle.
    """

    def __init__(self, group: FiniteGroup):
        if group.order < 3:
            raise InvalidInputError("sampler needs a group of order >= 3")
        self.group = group
        part = inverse_class_partition(group)
        self.involutions = list(part.involution_classes)
        self.pairs = list(part.pair_classes)
        a_max, b_max = len(self.involutions), len(self.pairs)
        self._profiles: list[tuple[int, int]] = []
        cumulative: list[int] = []
        running = 0
        for a in range(a_max + 1):
            for b in range(b_max + 1):
                if a + 2 * b == 0:
                    continue
                w = (math.comb(a_max, a) * math.comb(b_max, b)
                     * math.factorial(a + 2 * b - 1))
                self._profiles.append((a, b))
                running += w
                cumulative.append(running)
        self._cumulative = cumulative
        self._total_weight = running

    def sample(self, rng: random.Random) -> CayleyMap:
        for _ in range(SAMPLER_RETRY_CAP):
            idx = bisect_right(self._cumulative, rng.randrange(self._total_weight))
            a, b = self._profiles[idx]
            chosen = rng.sample(self.involutions, a)
            chosen_pairs = rng.sample(self.pairs, b)
            elems = sorted(chosen + [x for p in chosen_pairs for x in p])
            if not generates(self.group, elems):
                continue
            tail = elems[1:]
            rng.shuffle(tail)
            ordering = CyclicOrdering([elems[0]] + tail)
            conn = ConnectionSet(self.group, tuple(elems))
            return CayleyMap(self.group, conn, ordering)
        raise SamplerRetryError("rejection cap hit; connection-set weights look wrong")


def _sampler(group: FiniteGroup) -> MapSampler:
    if "sampler" not in group._cache:
        group._cache["sampler"] = MapSampler(group)
    return group._cache["sampler"]


def sample_map(group: FiniteGroup, rng: random.Random) -> CayleyMap:
    """One labelled Cayley map drawn uniformly from all of them."""
    return _sampler(group).sample(rng)


def wilson_interval(hits: int, n: int, confidence: float) -> tuple[float, float]:
    """Wilson score interval; well-behaved near fractions 0 and 1."""
    if n < 1:
        raise InvalidInputError("need at least one sample")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    phat = hits / n
    denom = 1 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def estimate_fraction(group: FiniteGroup, n_samples: int, seed: int,
                      confidence: float = 0.95, workers: int = 1) -> SampleEstimate:
    """Monte Carlo MRR fraction over n_samples uniform maps.

    Deterministic for a fixed (seed, workers): sample block i is drawn from
    its own stream seeded with seed XOR i.
    """
    if n_samples < 1:
        raise InvalidInputError("n_samples must be >= 1")
    if workers < 1 or workers > n_samples:
        raise InvalidInputError("workers must be in 1..n_samples")
    sampler = _sampler(group)
    mult, inv, e = group.packed()
    kern = _kernel.get_kernel()
    r = group.order

    def run_block(i: int) -> int:
        rng = random.Random(seed ^ i)
        count = n_samples // workers + (1 if i < n_samples % workers else 0)
        hits = 0
        for _ in range(count):
            m = sampler.sample(rng)
            if kern.is_mrr_cycle(mult, inv, e, r, m.ordering.cycle):
                hits += 1
        return hits

    if workers == 1:
        total_hits = run_block(0)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            total_hits = sum(pool.map(run_block, range(workers)))

    low, high = wilson_interval(total_hits, n_samples, confidence)
    phat = total_hits / n_samples
    return SampleEstimate(
        group_name=group.name, order=group.order, n_samples=n_samples,
        mrr_hits=total_hits, point_estimate=phat,
        ci_low=min(low, phat), ci_high=max(high, phat),
        confidence=confidence, seed=seed, workers=workers,
    )


# ---------------------------------------------------------------------------
# report rows (shared CSV/JSON schema)

REPORT_COLUMNS = ("group", "order", "mode", "total_or_n", "mrr_count_or_hits",
                  "fraction", "ci_low", "ci_high", "seed")


@dataclass(frozen=True)
class ReportRow:
    group: str
    order: int | None
    mode: str  # "exhaustive" | "sampled" | "error"
    total_or_n: int | None = None
    mrr_count_or_hits: int | None = None
    fraction: float | None = None
    ci_low: float | None = None
    ci_high: float | None = None
    seed: int | None = None
    note: str = field(default="", compare=False)

    def as_record(self) -> dict:
        return {c: getattr(self, c) for c in REPORT_COLUMNS}


def census_row(res: CensusResult) -> ReportRow:
    return ReportRow(group=res.group_name, order=res.order, mode="exhaustive",
                     total_or_n=res.total_maps, mrr_count_or_hits=res.mrr_count,
                     fraction=float(res.fraction))


def sample_row(est: SampleEstimate) -> ReportRow:
    return ReportRow(group=est.group_name, order=est.order, mode="sampled",
                     total_or_n=est.n_samples, mrr_count_or_hits=est.mrr_hits,
                     fraction=est.point_estimate, ci_low=est.ci_low,
                     ci_high=est.ci_high, seed=est.seed)


def trend_report(groups, n_samples: int, seed: int,
                 budget: int = DEFAULT_BUDGET, confidence: float = 0.95,
                 shards: int = 1) -> list[ReportRow]:
    """One row per group, exhaustive when affordable, sampled otherwise.

    Per-row failures become mode="error" rows instead of aborting the sweep.
    """
    from .group import resolve_group_spec

    rows = []
    for spec in groups:
        try:
            group = spec if isinstance(spec, FiniteGroup) else resolve_group_spec(spec)
            try:
                res = exhaustive_census(group, budget=budget, shards=shards)
                rows.append(census_row(res))
            except BudgetExceededError:
                est = estimate_fraction(group, n_samples, seed, confidence)
                rows.append(sample_row(est))
        except Exception as exc:  # noqa: BLE001 - per-row isolation is the contract
            rows.append(ReportRow(group=str(spec), order=None, mode="error", note=str(exc)))
    return rows


def rows_to_csv(rows) -> str:
    def cell(v):
        if v is None:
            return ""
        if isinstance(v, float):
            return repr(v)
        return str(v)

    lines = [",".join(REPORT_COLUMNS)]
    for row in rows:
        rec = row.as_record()
        lines.append(",".join(cell(rec[c]) for c in REPORT_COLUMNS))
    return "\n".join(lines) + "\n"


def rows_to_json(rows) -> str:
    import json

    return json.dumps({"rows": [row.as_record() for row in rows]}, sort_keys=True, indent=2) + "\n"
