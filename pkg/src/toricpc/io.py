"""Fan JSON documents, smooth Fano polytope databases and m-value tables.

Fan documents are JSON objects::

    {"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]],
     "max_cones": [[0, 1], [0, 2], [1, 2]], "name": "P2"}

Integers with absolute value >= 2**53 are written as decimal strings and
accepted either way on input.

A polytope database is plain text made of blank-line separated blocks. Each
block starts with a line ``d v`` followed by v lines of d integers (the
vertices). Lines starting with ``#`` are comments; a ``# id N`` comment inside
a block names it. Vertex lists from other sources (for instance the
Graded Ring Database, which prints one vertex per matrix column) only need to
be transposed into this layout.
"""

from __future__ import annotations

import itertools
import json
import sys
import warnings
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .fan import Fan, FanError, InvalidFanData
from .lattice import LatticeError, Vector, inverse
from .primcoll import minimal_p_dimension, primitive_collections

_BIG = 2 ** 53


class FanFormatError(ValueError):
    pass


def _dec_int(x, where: str) -> int:
    if isinstance(x, bool):
        raise FanFormatError(f"{where}: expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            pass
    raise FanFormatError(f"{where}: expected an integer, got {x!r}")


def _enc_int(x: int):
    return str(x) if abs(x) >= _BIG else x


def parse_fan(text: str | bytes) -> Fan:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FanFormatError(f"line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise FanFormatError("document must be a JSON object")
    for key in ("dim", "rays", "max_cones"):
        if key not in doc:
            raise FanFormatError(f"missing key {key!r}")
    extra = set(doc) - {"dim", "rays", "max_cones", "name"}
    if extra:
        raise FanFormatError(f"unknown keys {sorted(extra)}")
    dim = _dec_int(doc["dim"], "dim")
    if not isinstance(doc["rays"], list) or not all(isinstance(r, list) for r in doc["rays"]):
        raise FanFormatError("rays must be a list of integer lists")
    if not isinstance(doc["max_cones"], list) or not all(isinstance(c, list) for c in doc["max_cones"]):
        raise FanFormatError("max_cones must be a list of index lists")
    rays = [[_dec_int(x, f"rays[{i}]") for x in r] for i, r in enumerate(doc["rays"])]
    cones = [[_dec_int(x, f"max_cones[{i}]") for x in c] for i, c in enumerate(doc["max_cones"])]
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise FanFormatError("name must be a string")
    for i, r in enumerate(rays):
        if len(r) != dim:
            raise InvalidFanData(f"ray {i} has {len(r)} entries, expected {dim}")
    return Fan(dim, rays, cones, name=name)


def canonical_document(fan: Fan) -> dict:
    order = sorted(range(fan.nrays), key=lambda i: fan.rays[i])
    pos = {old: new for new, old in enumerate(order)}
    cones = sorted(sorted(pos[i] for i in c) for c in fan.max_cones)
    doc = {"dim": fan.dim,
           "rays": [[_enc_int(x) for x in fan.rays[i]] for i in order],
           "max_cones": cones}
    if fan.name is not None:
        doc["name"] = fan.name
    return doc


def write_fan(fan: Fan) -> str:
    """Canonical JSON text: rays sorted lexicographically, cones renumbered and sorted."""
    doc = canonical_document(fan)
    lines = ["{", f'  "dim": {doc["dim"]},']
    lines.append('  "rays": [' + ", ".join(json.dumps(r) for r in doc["rays"]) + "],")
    tail = "," if "name" in doc else ""
    lines.append('  "max_cones": [' + ", ".join(json.dumps(c) for c in doc["max_cones"]) + "]" + tail)
    if "name" in doc:
        lines.append(f'  "name": {json.dumps(doc["name"])}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def read_text(path: str | Path) -> str:
    """Read a file, with ``-`` meaning standard input."""
    if str(path) == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def load_fan(path: str | Path) -> Fan:
    return parse_fan(read_text(path))


# ---------------------------------------------------------------------------
# polytope databases

class PolytopeError(ValueError):
    pass


@dataclass
class PolytopeBlock:
    vertices: list[Vector]
    ident: str | None = None
    line: int = 0


def polytope_facets(vertices: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Facets of a simplicial polytope with 0 in its interior, as vertex-index tuples.

    Brute force over d-subsets: a subset spans a facet iff its vertices are
    linearly independent, the affine hyperplane through them misses 0, and
    every other vertex lies strictly on the origin's side.
    """
    verts = [tuple(v) for v in vertices]
    d = len(verts[0])
    out = []
    for combo in itertools.combinations(range(len(verts)), d):
        try:
            inv = inverse([verts[i] for i in combo])
        except LatticeError:
            continue
        # normal u with <u, v_i> = 1 on the subset: u = rows^-1 applied to (1, ..., 1)
        u = [sum(row) for row in inv]
        if all(sum(a * b for a, b in zip(u, verts[j])) < 1 for j in range(len(verts)) if j not in combo):
            out.append(combo)
    return out


def face_fan(vertices: Sequence[Sequence[int]], name: str | None = None) -> Fan:
    verts = [tuple(int(x) for x in v) for v in vertices]
    if not verts:
        raise PolytopeError("no vertices")
    d = len(verts[0])
    if any(len(v) != d for v in verts):
        raise PolytopeError("vertices of different lengths")
    facets = polytope_facets(verts)
    if not facets:
        raise PolytopeError("no facets found; 0 is not an interior point or the polytope is not simplicial")
    return Fan(d, verts, facets, name=name)


def _parse_blocks(text: str) -> tuple[list[PolytopeBlock], list[tuple[str, str]]]:
    blocks: list[PolytopeBlock] = []
    errors: list[tuple[str, str]] = []
    chunk: list[tuple[int, str]] = []
    ident: str | None = None

    def flush():
        nonlocal chunk, ident
        if chunk:
            lineno = chunk[0][0]
            label = ident or f"block at line {lineno}"
            try:
                head = chunk[0][1].split()
                if len(head) != 2:
                    raise PolytopeError(f"header {chunk[0][1]!r} is not 'd v'")
                d, v = int(head[0]), int(head[1])
                rows = [tuple(int(x) for x in line.split()) for _, line in chunk[1:]]
                if len(rows) != v:
                    raise PolytopeError(f"header announces {v} vertices, found {len(rows)}")
                if any(len(r) != d for r in rows):
                    raise PolytopeError(f"vertex of wrong length (expected {d})")
                blocks.append(PolytopeBlock(rows, label, lineno))
            except (ValueError, PolytopeError) as e:
                errors.append((label, str(e)))
        chunk = []
        ident = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            flush()
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("id ") and not chunk:
                ident = body[3:].strip()
            continue
        chunk.append((lineno, line))
    flush()
    return blocks, errors


@dataclass
class DatabaseLoad:
    fans: list[Fan]
    errors: list[tuple[str, str]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.fans)

    def __iter__(self):
        return iter(self.fans)


def _block_to_fan(block: PolytopeBlock) -> Fan:
    return face_fan(block.vertices, name=block.ident)


def parse_polytope_db(text: str | bytes, jobs: int = 1) -> DatabaseLoad:
    """Face fans of every block; malformed or non-smooth blocks are collected, not raised."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    blocks, errors = _parse_blocks(text)
    results: list = []
    if jobs > 1 and len(blocks) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            futures = [ex.submit(_safe_block, b) for b in blocks]
            results = [f.result() for f in futures]
    else:
        results = [_safe_block(b) for b in blocks]
    fans = []
    for block, res in zip(blocks, results):
        if isinstance(res, Fan):
            fans.append(res)
        else:
            errors.append((block.ident or f"block at line {block.line}", res))
    return DatabaseLoad(fans, errors)


def _safe_block(block: PolytopeBlock):
    try:
        return _block_to_fan(block)
    except (FanError, PolytopeError, LatticeError) as e:
        return f"{type(e).__name__}: {e}"


def load_polytope_db(path: str | Path, jobs: int = 1) -> DatabaseLoad:
    return parse_polytope_db(read_text(path), jobs=jobs)


def bundled_database(dim: int) -> Path:
    """Path of a shipped smooth Fano polytope list (dimensions 2, 3 and 4)."""
    from importlib.resources import files
    p = files("toricpc") / "data" / f"sfp{dim}.txt"
    if not p.is_file():
        raise FileNotFoundError(f"no bundled database for dimension {dim}")
    return Path(str(p))


# ---------------------------------------------------------------------------
# tables

@dataclass(frozen=True)
class MTable:
    dim: int | None
    total: int
    counts: dict[int | None, int]
    pc_total: int
    pc_size2: int
    rejected: int = 0

    def m_values(self) -> list[int]:
        top = max([m for m in self.counts if m is not None] + [self.dim or 0])
        return list(range(1, top + 1))

    def row(self) -> list[int]:
        return [self.counts.get(m, 0) for m in self.m_values()]

    def csv(self) -> str:
        cols = ["dim", "total"] + [f"m{m}" for m in self.m_values()]
        vals = [self.dim if self.dim is not None else "", self.total] + self.row()
        if self.counts.get(None):
            cols.append("m_none")
            vals.append(self.counts[None])
        return ",".join(cols) + "\n" + ",".join(str(v) for v in vals) + "\n"

    def text(self) -> str:
        ms = self.m_values()
        head = ["dim", "total"] + [f"m={m}" for m in ms]
        vals = [str(self.dim if self.dim is not None else "-"), str(self.total)] + [str(x) for x in self.row()]
        if self.counts.get(None):
            head.append("m=none")
            vals.append(str(self.counts[None]))
        widths = [max(len(a), len(b)) for a, b in zip(head, vals)]
        lines = ["  ".join(h.rjust(w) for h, w in zip(head, widths)),
                 "  ".join(v.rjust(w) for v, w in zip(vals, widths)),
                 f"primitive collections: {self.pc_total} (of cardinality 2: {self.pc_size2})"]
        if self.rejected:
            lines.append(f"rejected entries: {self.rejected}")
        return "\n".join(lines) + "\n"


def tabulate_m(fans: Iterable[Fan], rejected: int = 0) -> MTable:
    fans = list(fans)
    dims = {f.dim for f in fans}
    counts: Counter = Counter()
    pc_total = pc2 = 0
    for f in fans:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            counts[minimal_p_dimension(f)] += 1
        pcs = primitive_collections(f)
        pc_total += len(pcs)
        pc2 += sum(1 for p in pcs if len(p) == 2)
    dim = dims.pop() if len(dims) == 1 else None
    return MTable(dim, len(fans), dict(counts), pc_total, pc2, rejected)
