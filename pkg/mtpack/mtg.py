"""
The line-oriented "mtg" instance format and the packing file format.

    c <comment>
    p mtg <n> <t> <m>        (or "p dig <n> <m>" for a plain digraph)
    s <part_id> <v> <v> ...  (t lines)
    a <u> <v>                (m lines)

Serialization is canonical: parts by id with ascending vertices, arcs in
lexicographic order.
"""

from collections.abc import Iterable
from pathlib import Path
from typing import Union
import json
import logging

from .cycle import Cycle, CyclePacking
from .digraph import Digraph, MultipartiteTournament, build_multipartite
from .exceptions import CountMismatch, MtgSyntaxError

log = logging.getLogger("mtpack")


def _ints(tokens: list[str], line_no: int) -> list[int]:
    try:
        values = [int(tok) for tok in tokens]
    except ValueError:
        raise MtgSyntaxError(line_no, f"expected integers, got {' '.join(tokens)!r}") from None
    if any(v < 0 for v in values):
        raise MtgSyntaxError(line_no, "negative values are not allowed")
    return values


def parse_mtg(text: str) -> Union[Digraph, MultipartiteTournament]:
    """
    Parse mtg text. Returns a validated MultipartiteTournament for "p mtg"
    and a Digraph for "p dig".
    """
    kind = None
    n = t = m = 0
    parts: dict[int, list[int]] = {}
    arcs: list[tuple[int, int]] = []
    seen_arcs: set[tuple[int, int]] = set()

    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        tag, rest = tokens[0], tokens[1:]
        match tag:
            case "p":
                if kind is not None:
                    raise MtgSyntaxError(line_no, "duplicate problem line")
                if rest[:1] == ["mtg"] and len(rest) == 4:
                    kind = "mtg"
                    n, t, m = _ints(rest[1:], line_no)
                elif rest[:1] == ["dig"] and len(rest) == 3:
                    kind = "dig"
                    n, m = _ints(rest[1:], line_no)
                else:
                    raise MtgSyntaxError(line_no, "expected 'p mtg <n> <t> <m>' or 'p dig <n> <m>'")
            case "s":
                if kind != "mtg":
                    raise MtgSyntaxError(line_no, "part line outside an mtg instance")
                values = _ints(rest, line_no)
                if not values:
                    raise MtgSyntaxError(line_no, "part line without a part id")
                part_id, members = values[0], values[1:]
                if part_id >= t:
                    raise MtgSyntaxError(line_no, f"part id {part_id} out of range 0..{t - 1}")
                if part_id in parts:
                    raise MtgSyntaxError(line_no, f"part {part_id} declared twice")
                parts[part_id] = members
            case "a":
                if kind is None:
                    raise MtgSyntaxError(line_no, "arc line before the problem line")
                values = _ints(rest, line_no)
                if len(values) != 2:
                    raise MtgSyntaxError(line_no, "arc line needs exactly two vertices")
                u, v = values
                if u >= n or v >= n:
                    raise MtgSyntaxError(line_no, f"arc ({u}, {v}) outside vertices 0..{n - 1}")
                if u == v:
                    raise MtgSyntaxError(line_no, f"loop at vertex {u}")
                if (u, v) in seen_arcs:
                    raise MtgSyntaxError(line_no, f"duplicate arc ({u}, {v})")
                seen_arcs.add((u, v))
                arcs.append((u, v))
            case _:
                raise MtgSyntaxError(line_no, f"unknown line type {tag!r}")

    if kind is None:
        raise MtgSyntaxError(0, "missing problem line")
    if len(arcs) != m:
        raise CountMismatch(f"declared {m} arcs, read {len(arcs)}")
    if kind == "dig":
        return Digraph.from_arcs(n, arcs)

    if len(parts) != t:
        raise CountMismatch(f"declared {t} parts, read {len(parts)}")
    graph = build_multipartite([parts[i] for i in range(t)], arcs)
    if graph.n != n:
        raise CountMismatch(f"declared {n} vertices, parts cover {graph.n}")
    return graph


def serialize_mtg(D: Digraph, comments: Iterable[str] = ()) -> str:
    """Canonical mtg text for D"""
    lines = [f"c {comment}" for comment in comments]
    arcs = D.sorted_arcs()
    if isinstance(D, MultipartiteTournament):
        lines.append(f"p mtg {D.n} {D.t} {len(arcs)}")
        for part_id, part in enumerate(D.parts):
            lines.append(" ".join(["s", str(part_id), *(str(v) for v in sorted(part))]))
    else:
        lines.append(f"p dig {D.n} {len(arcs)}")
    lines.extend(f"a {u} {v}" for u, v in arcs)
    return "\n".join(lines) + "\n"


def _read_text(path: Union[str, Path]) -> str:
    data = Path(path).read_bytes()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        line_no = data.count(b"\n", 0, e.start) + 1
        raise MtgSyntaxError(line_no, f"invalid UTF-8 byte 0x{data[e.start]:02x}") from None


def read_mtg(path: Union[str, Path]) -> Union[Digraph, MultipartiteTournament]:
    log.debug(f"Reading instance from {path}")
    return parse_mtg(_read_text(path))


def write_mtg(D: Digraph, path: Union[str, Path], comments: Iterable[str] = ()) -> None:
    Path(path).write_text(serialize_mtg(D, comments), encoding="utf-8")
    log.info(f"Wrote instance to {path}")


def serialize_packing(packing: CyclePacking) -> str:
    """One "y v0 v1 ..." line per cycle"""
    return "".join(f"y {cycle}\n" for cycle in packing)


def parse_packing(text: str) -> CyclePacking:
    """
    Read a packing file. Accepts the "y" line format and the JSON object
    that `pack --format json` prints.
    """
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            payload = json.loads(stripped)
            return CyclePacking.of(Cycle(tuple(c)) for c in payload["cycles"])
        except (json.JSONDecodeError, KeyError, TypeError) as e:
            raise MtgSyntaxError(1, f"malformed JSON packing: {e}") from e

    cycles = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        if tokens[0] != "y":
            raise MtgSyntaxError(line_no, f"expected a 'y' cycle line, got {tokens[0]!r}")
        cycles.append(Cycle(tuple(_ints(tokens[1:], line_no))))
    return CyclePacking.of(cycles)


def read_packing(path: Union[str, Path]) -> CyclePacking:
    log.debug(f"Reading packing from {path}")
    return parse_packing(_read_text(path))
