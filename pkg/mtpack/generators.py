"""
Instance generators.

Randomness comes from numpy's PCG64 bit generator seeded with the 64-bit
seed of the request. Cross-part pairs are visited in lexicographic order
and each draws one bit: 1 orients the pair from the smaller label to the
larger one. The same seed therefore always gives the same instance.
"""

from collections.abc import Callable, Iterable, Sequence
from itertools import combinations
from typing import Optional
import logging

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator

from .config import get_settings
from .digraph import MultipartiteTournament, build_multipartite, min_out_degree
from .exceptions import BadArity, ExhaustedAttempts, InvalidSpec, SizeMismatch

log = logging.getLogger("mtpack")

SEED_LIMIT = 2**64


def _default_attempts() -> int:
    return get_settings().max_attempts


class GenSpec(BaseModel):
    """
    Request for a random multipartite tournament
    """

    sizes: list[int]
    seed: int = Field(default=0, ge=0, lt=SEED_LIMIT)
    delta_min: Optional[int] = Field(default=None, ge=0)
    max_attempts: int = Field(default_factory=_default_attempts, ge=1)

    @field_validator("sizes")
    @classmethod
    def validate_sizes(cls, v: list[int]) -> list[int]:
        if len(v) < 2:
            raise ValueError("At least two part sizes are required")
        if any(size < 1 for size in v):
            raise ValueError(f"Part sizes must be positive, got {v}")
        return v

    @classmethod
    def make(cls, **kwargs) -> "GenSpec":
        """Validate, converting pydantic errors to InvalidSpec"""
        try:
            return cls(**kwargs)
        except ValidationError as e:
            raise InvalidSpec(str(e)) from e


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed % SEED_LIMIT))


def _consecutive_parts(sizes: Sequence[int]) -> list[list[int]]:
    parts, start = [], 0
    for size in sizes:
        parts.append(list(range(start, start + size)))
        start += size
    return parts


def _orient(
    parts: list[list[int]], rng: np.random.Generator, fixed: Optional[dict] = None
) -> MultipartiteTournament:
    """
    Orient every cross-part pair with one bit from `rng`. Pairs listed in
    `fixed` keep the given orientation and consume no bits.
    """
    part_of = {v: i for i, part in enumerate(parts) for v in part}
    n = len(part_of)
    pairs = [
        (u, v)
        for u, v in combinations(range(n), 2)
        if part_of[u] != part_of[v] and (fixed is None or (u, v) not in fixed)
    ]
    bits = rng.integers(0, 2, size=len(pairs))
    arcs = [(u, v) if bit else (v, u) for (u, v), bit in zip(pairs, bits)]
    if fixed:
        arcs.extend(fixed.values())
    return build_multipartite(parts, arcs)


def gen_random_multipartite(spec: GenSpec) -> MultipartiteTournament:
    """Uniformly random orientation of the complete multipartite graph"""
    return _orient(_consecutive_parts(spec.sizes), make_rng(spec.seed))


def filter_min_outdegree(
    sample: Callable[[np.random.Generator], MultipartiteTournament],
    rng: np.random.Generator,
    delta_min: int,
    max_attempts: int,
) -> MultipartiteTournament:
    """
    Rejection sampling: draw from `sample` until the minimum out-degree
    reaches `delta_min`
    """
    for attempt in range(1, max_attempts + 1):
        candidate = sample(rng)
        if min_out_degree(candidate) >= delta_min:
            log.debug(f"Accepted instance after {attempt} attempts")
            return candidate
    raise ExhaustedAttempts(
        f"No instance with minimum out-degree >= {delta_min} "
        f"in {max_attempts} attempts"
    )


def gen_with_min_outdegree(
    spec: GenSpec, fixed_arcs: Iterable[tuple[int, int]] = ()
) -> MultipartiteTournament:
    """
    Random multipartite tournament with minimum out-degree >= spec.delta_min.
    Arcs in `fixed_arcs` are kept in every sample.
    """
    if spec.delta_min is None:
        raise InvalidSpec("gen_with_min_outdegree needs delta_min")
    parts = _consecutive_parts(spec.sizes)
    fixed = {(min(u, v), max(u, v)): (u, v) for u, v in fixed_arcs}
    return filter_min_outdegree(
        lambda rng: _orient(parts, rng, fixed),
        make_rng(spec.seed),
        spec.delta_min,
        spec.max_attempts,
    )


def gen_bt(n_list: Sequence[int]) -> MultipartiteTournament:
    """
    Member of BT(n_1, ..., n_2k): X_i has n_i vertices, Y = {y_1, ..., y_2k};
    X_i -> y_j for i != j and y_i -> X_i.

    Labels: the X groups come first (X_1 then X_2 ...), then y_1..y_2k.
    Part 0 is X, part 1 is Y.
    """
    if len(n_list) < 4 or len(n_list) % 2:
        raise BadArity(f"BT needs an even number (>= 4) of group sizes, got {len(n_list)}")
    if any(size < 1 for size in n_list):
        raise BadArity(f"BT group sizes must be positive, got {list(n_list)}")

    groups = _consecutive_parts(n_list)
    x_count = sum(n_list)
    ys = [x_count + i for i in range(len(n_list))]
    arcs = []
    for i, group in enumerate(groups):
        for j, y in enumerate(ys):
            for x in group:
                arcs.append((y, x) if i == j else (x, y))
    return build_multipartite([range(x_count), ys], arcs)


def gen_extended_tournament(
    T: MultipartiteTournament, sizes: Sequence[int], seed: Optional[int] = None
) -> MultipartiteTournament:
    """
    Blow up every vertex i of the tournament T into an independent set of
    sizes[i] vertices; an arc i -> j becomes all arcs from blob i to blob j.

    Blobs get consecutive labels; with a seed the labels are shuffled.
    """
    if not T.is_tournament:
        raise InvalidSpec("gen_extended_tournament needs a tournament (singleton parts)")
    if len(sizes) != T.n:
        raise SizeMismatch(f"{len(sizes)} sizes for a tournament on {T.n} vertices")
    if any(size < 1 for size in sizes):
        raise SizeMismatch(f"Blob sizes must be positive, got {list(sizes)}")

    blobs = _consecutive_parts(sizes)
    total = sum(sizes)
    labels = list(range(total))
    if seed is not None:
        labels = [int(v) for v in make_rng(seed).permutation(total)]

    parts = [[labels[v] for v in blob] for blob in blobs]
    arcs = [
        (labels[a], labels[b])
        for i, j in T.sorted_arcs()
        for a in blobs[i]
        for b in blobs[j]
    ]
    return build_multipartite(parts, arcs)


def gen_random_extended(
    sizes: Sequence[int], seed: int, delta_min: int, max_attempts: Optional[int] = None
) -> MultipartiteTournament:
    """
    Blow-up of a random tournament on len(sizes) vertices, redrawn until the
    minimum out-degree reaches `delta_min`
    """
    singletons = [[i] for i in range(len(sizes))]
    return filter_min_outdegree(
        lambda rng: gen_extended_tournament(_orient(singletons, rng), sizes),
        make_rng(seed),
        delta_min,
        max_attempts or get_settings().max_attempts,
    )


def split_parts(clique_size: int, independent_size: int) -> list[list[int]]:
    """Independent set Y = 0..s-1 as one part, then one singleton per clique vertex"""
    parts = [list(range(independent_size))]
    parts.extend([independent_size + i] for i in range(clique_size))
    return parts


def gen_complete_split(
    clique_size: int, independent_size: int, seed: int = 0
) -> MultipartiteTournament:
    """
    Random orientation of the complete split graph with clique X and
    independent set Y, as a multipartite tournament with clique_size + 1 parts
    """
    if clique_size < 1 or independent_size < 1:
        raise InvalidSpec("Both sides of a complete split graph must be non-empty")
    return _orient(split_parts(clique_size, independent_size), make_rng(seed))


def gen_split_with_min_outdegree(
    clique_size: int,
    independent_size: int,
    seed: int,
    delta_min: int,
    max_attempts: Optional[int] = None,
) -> MultipartiteTournament:
    """Complete split oriented graph with minimum out-degree >= delta_min"""
    if clique_size < 1 or independent_size < 1:
        raise InvalidSpec("Both sides of a complete split graph must be non-empty")
    parts = split_parts(clique_size, independent_size)
    return filter_min_outdegree(
        lambda rng: _orient(parts, rng),
        make_rng(seed),
        delta_min,
        max_attempts or get_settings().max_attempts,
    )
