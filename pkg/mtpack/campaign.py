"""
Verification campaigns: generate seeded instances satisfying an out-degree
bound, pack them, cross-check small ones with the oracle and collect one
record per trial.

Trial i uses seed `config.seed + i`. Records are merged in trial order
whatever the worker count, so the same config always gives the same report.
"""

from collections import Counter
from collections.abc import Callable
from multiprocessing import Pool
from typing import Literal, Optional, get_args
import json
import logging
import time

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from .config import get_settings
from .digraph import MultipartiteTournament, min_out_degree
from .diversify import diversify_3partite
from .exceptions import HypothesisError, InvalidSpec, MtpackError
from .generators import (
    SEED_LIMIT,
    GenSpec,
    gen_bt,
    gen_random_extended,
    gen_split_with_min_outdegree,
    gen_with_min_outdegree,
    make_rng,
)
from .lemmas import find_triangle
from .mtg import parse_mtg, serialize_mtg
from .oracle import OracleBudget, exists_k_disjoint
from .packing import (
    pack_3partite,
    pack_bipartite_4cycles,
    pack_extended,
    pack_multipartite_3k2,
    pack_triangle_free,
)

log = logging.getLogger("mtpack")

Family = Literal["3partite", "multipartite", "bipartite", "split", "4partite", "bt", "extended"]
Outcome = Literal["packed", "diverse", "counterexample-candidate", "hypothesis-unmet", "error"]

THEOREM_BACKED = "theorem-backed"
SEARCH_VERIFIED = "search-verified"

_PART_COUNTS = {"3partite": 3, "bipartite": 2, "4partite": 4, "split": 2}

# used by `hunt` when neither sizes nor size ranges are given
DEFAULT_SIZES: dict[str, list[int]] = {
    "3partite": [5, 5, 5],
    "multipartite": [3, 3, 3, 3],
    "bipartite": [8, 8],
    "split": [5, 7],
    "4partite": [3, 3, 3, 3],
    "bt": [3, 3, 3, 3],
    "extended": [2, 1, 2, 1, 2, 1, 2],
}


class CampaignConfig(BaseModel):
    """
    One campaign. `sizes` fixes the part sizes of every trial; `size_ranges`
    instead draws each size uniformly from an inclusive (low, high) range.
    For the split family the two sizes are (clique, independent set).
    """

    family: Family
    sizes: Optional[list[int]] = None
    size_ranges: Optional[list[tuple[int, int]]] = None
    k_min: int = Field(default=2, ge=1)
    k_max: Optional[int] = None
    trials: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0, lt=SEED_LIMIT)
    delta_rule: Literal["2k-1", "3k-2"] = "2k-1"
    oracle_cross_check_max_n: int = Field(default=14, ge=0)
    diversify: bool = True
    max_cycle_len: Optional[int] = Field(default=None, ge=2)

    @field_validator("size_ranges")
    @classmethod
    def validate_ranges(cls, v: Optional[list[tuple[int, int]]]) -> Optional[list[tuple[int, int]]]:
        if v is None:
            return v
        for low, high in v:
            if low < 1 or low > high:
                raise ValueError(f"Size range ({low}, {high}) is empty or non-positive")
        return v

    @model_validator(mode="after")
    def validate_shape(self) -> "CampaignConfig":
        if (self.sizes is None) == (self.size_ranges is None):
            raise ValueError("Give exactly one of sizes and size_ranges")
        count = len(self.sizes) if self.sizes is not None else len(self.size_ranges)
        if self.sizes is not None and any(size < 1 for size in self.sizes):
            raise ValueError(f"Part sizes must be positive, got {self.sizes}")
        expected = _PART_COUNTS.get(self.family)
        if expected is not None and count != expected:
            raise ValueError(f"Family {self.family} needs {expected} sizes, got {count}")
        if count < 2:
            raise ValueError("At least two sizes are required")
        if self.family == "bt" and (count < 4 or count % 2):
            raise ValueError("The bt family needs an even number (>= 4) of group sizes")
        if self.k_max is not None and self.k_max < self.k_min:
            raise ValueError(f"k_max {self.k_max} is below k_min {self.k_min}")
        return self

    @classmethod
    def make(cls, **kwargs) -> "CampaignConfig":
        try:
            return cls(**kwargs)
        except ValidationError as e:
            raise InvalidSpec(str(e)) from e

    @property
    def k_values(self) -> list[int]:
        if self.family == "bt":
            count = len(self.sizes) if self.sizes is not None else len(self.size_ranges)
            return [count // 2]
        return list(range(self.k_min, (self.k_max or self.k_min) + 1))

    def bound(self, k: int) -> int:
        return 2 * k - 1 if self.delta_rule == "2k-1" else 3 * k - 2

    def budget(self) -> OracleBudget:
        return OracleBudget(max_cycle_len=self.max_cycle_len)


class TrialRecord(BaseModel):
    """
    Outcome of one trial. Counterexample candidates and errors on generated
    instances carry the instance in mtg form.
    """

    index: int
    seed: int
    family: Family
    sizes: list[int]
    k: int
    delta_plus: Optional[int] = None
    algorithm: Optional[str] = None
    backing: Optional[str] = None
    outcome: Outcome
    lengths: list[int] = []
    oracle: Optional[str] = None
    detail: Optional[str] = None
    elapsed: Optional[float] = None
    mtg: Optional[str] = None

    @model_validator(mode="after")
    def candidates_embed_instance(self) -> "TrialRecord":
        if self.outcome == "counterexample-candidate" and not self.mtg:
            raise ValueError("Counterexample candidates must embed the instance")
        return self


class CampaignReport(BaseModel):
    config: CampaignConfig
    records: list[TrialRecord]

    @property
    def counts(self) -> dict[str, int]:
        counter = Counter(r.outcome for r in self.records)
        return {outcome: counter.get(outcome, 0) for outcome in get_args(Outcome)}

    @property
    def candidates(self) -> list[TrialRecord]:
        return [r for r in self.records if r.outcome == "counterexample-candidate"]

    def summary(self) -> dict:
        backing = sorted({r.backing for r in self.records if r.backing})
        return {
            "summary": True,
            "family": self.config.family,
            "trials": len(self.records),
            "backing": ",".join(backing),
            **self.counts,
        }


def _trial_sizes(config: CampaignConfig, seed: int) -> list[int]:
    if config.sizes is not None:
        return list(config.sizes)
    rng = make_rng(seed)
    return [int(rng.integers(low, high + 1)) for low, high in config.size_ranges]


def _generate(config: CampaignConfig, sizes: list[int], seed: int, bound: int) -> MultipartiteTournament:
    match config.family:
        case "bt":
            return gen_bt(sizes)
        case "split":
            return gen_split_with_min_outdegree(sizes[0], sizes[1], seed, bound)
        case "extended":
            return gen_random_extended(sizes, seed, bound)
        case _:
            return gen_with_min_outdegree(GenSpec.make(sizes=sizes, seed=seed, delta_min=bound))


def _packer(config: CampaignConfig) -> Optional[tuple[str, Callable]]:
    """The constructive packer covering this family and rule, None when only the oracle applies"""
    match config.family, config.delta_rule:
        case "3partite", _:
            return "pack_3partite", pack_3partite
        case "bipartite", _:
            return "pack_bipartite_4cycles", pack_bipartite_4cycles
        case "bt", _:
            return "pack_triangle_free", pack_triangle_free
        case "extended", _:
            return "pack_extended", pack_extended
        case _, "3k-2":
            return "pack_multipartite_3k2", pack_multipartite_3k2
    return None


def _oracle_trial(config: CampaignConfig, D: MultipartiteTournament, k: int, record: dict) -> None:
    budget = config.budget()
    found = exists_k_disjoint(D, k, budget)
    record.update(algorithm="exists_k_disjoint", backing=SEARCH_VERIFIED)
    if found is not None:
        record.update(outcome="packed", lengths=list(found.lengths), oracle="found")
    elif budget.is_unconditional(D):
        log.critical(f"Trial {record['index']}: no {k} disjoint cycles with delta+ = {record['delta_plus']}")
        record.update(outcome="counterexample-candidate", oracle="none", mtg=serialize_mtg(D))
    else:
        record.update(
            outcome="error",
            oracle="none-within-cap",
            detail=f"inconclusive: cycle cap {budget.cap(D)} is below n = {D.n}",
            mtg=serialize_mtg(D),
        )


def _packer_trial(
    config: CampaignConfig, D: MultipartiteTournament, k: int, record: dict, name: str, packer: Callable
) -> None:
    packing = packer(D, k)
    record.update(algorithm=name, backing=THEOREM_BACKED, outcome="packed", lengths=list(packing.lengths))
    if config.diversify and config.family == "3partite" and k >= 2 and find_triangle(D) is not None:
        diverse = diversify_3partite(D, k)
        record.update(algorithm=f"{name}+diversify_3partite", outcome="diverse", lengths=list(diverse.packing.lengths))
    if D.n <= config.oracle_cross_check_max_n:
        found = exists_k_disjoint(D, k, config.budget())
        record["oracle"] = "agrees" if found is not None else "disagrees"
        if found is None:
            record.update(
                outcome="error",
                detail="oracle found no packing although the packer returned one",
                mtg=serialize_mtg(D),
            )


def run_trial(config: CampaignConfig, index: int) -> TrialRecord:
    seed = (config.seed + index) % SEED_LIMIT
    k_values = config.k_values
    k = k_values[index % len(k_values)]
    sizes = _trial_sizes(config, seed)
    bound = config.bound(k)
    record: dict = {"index": index, "seed": seed, "family": config.family, "sizes": sizes, "k": k}
    start = time.perf_counter()

    D = None
    try:
        D = _generate(config, sizes, seed, bound)
        record["delta_plus"] = min_out_degree(D)
        if record["delta_plus"] < bound:
            record.update(outcome="hypothesis-unmet", detail=f"delta+ below {bound}")
        elif (chosen := _packer(config)) is not None:
            _packer_trial(config, D, k, record, *chosen)
        else:
            _oracle_trial(config, D, k, record)
    except HypothesisError as e:
        record.update(outcome="hypothesis-unmet", detail=str(e))
    except MtpackError as e:
        log.error(f"Trial {index} (seed {seed}) failed: {e}")
        record.update(outcome="error", detail=f"{type(e).__name__}: {e}")
        if D is not None:
            record["mtg"] = serialize_mtg(D)

    if get_settings().report_timings:
        record["elapsed"] = round(time.perf_counter() - start, 6)
    return TrialRecord(**record)


def _run_indexed(args: tuple[CampaignConfig, int]) -> TrialRecord:
    return run_trial(*args)


def run_campaign(config: CampaignConfig, workers: Optional[int] = None) -> CampaignReport:
    workers = workers or get_settings().workers
    log.info(
        f"Campaign {config.family} sizes={config.sizes or config.size_ranges} "
        f"k={config.k_values} trials={config.trials} seed={config.seed} workers={workers}"
    )
    work_items = [(config, i) for i in range(config.trials)]
    if workers > 1 and config.trials > 1:
        with Pool(processes=min(workers, config.trials)) as pool:
            records = pool.map(_run_indexed, work_items)
    else:
        records = [_run_indexed(item) for item in work_items]
    report = CampaignReport(config=config, records=records)
    log.info(f"Campaign finished: {report.counts}")
    return report


def _text_line(r: TrialRecord) -> str:
    fields = [
        f"trial={r.index}",
        f"seed={r.seed}",
        f"family={r.family}",
        f"sizes={','.join(map(str, r.sizes))}",
        f"k={r.k}",
        f"delta={r.delta_plus if r.delta_plus is not None else '-'}",
        f"algorithm={r.algorithm or '-'}",
        f"outcome={r.outcome}",
        f"lengths={','.join(map(str, r.lengths)) or '-'}",
    ]
    if r.oracle:
        fields.append(f"oracle={r.oracle}")
    if r.elapsed is not None:
        fields.append(f"elapsed={r.elapsed}")
    if r.detail:
        fields.append(f"detail={json.dumps(r.detail)}")
    lines = [" ".join(fields)]
    if r.mtg:
        lines.extend(f"  {line}" for line in r.mtg.splitlines())
    return "\n".join(lines)


def format_report(report: CampaignReport, fmt: Literal["text", "json"] = "text") -> str:
    """Text: one line per trial then a summary line. JSON: one object per line, summary last."""
    summary = report.summary()
    if fmt == "json":
        lines = [r.model_dump_json(exclude_none=True) for r in report.records]
        lines.append(json.dumps(summary, sort_keys=True))
    else:
        lines = [_text_line(r) for r in report.records]
        lines.append(" ".join(f"{key}={value}" for key, value in summary.items() if key != "summary"))
    return "\n".join(lines) + "\n"


def read_records(text: str) -> list[TrialRecord]:
    """Trial records of a JSON report, skipping the summary line"""
    records = []
    for line in text.splitlines():
        if not line.strip():
            continue
        payload = json.loads(line)
        if not payload.get("summary"):
            records.append(TrialRecord(**payload))
    return records


def reverify_candidate(record: TrialRecord) -> bool:
    """
    Rerun the unconditional oracle on a candidate's embedded instance. True
    when it again finds no k disjoint cycles.
    """
    if not record.mtg:
        return False
    D = parse_mtg(record.mtg)
    found = exists_k_disjoint(D, record.k, OracleBudget())
    if found is not None:
        log.warning(f"Candidate from trial {record.index} has a packing: {[c.verts for c in found]}")
    return found is None
