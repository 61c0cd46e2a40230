"""Primitive collections, primitive relations and the invariants built on them."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

from .fan import Fan, locate
from .lattice import Vector

Collection = tuple[int, ...]


class NotPrimitiveCollection(ValueError):
    pass


class HypothesisViolated(ValueError):
    """A theorem's hypotheses fail for the given input. ``hypothesis`` names which."""

    def __init__(self, message: str, hypothesis: str):
        super().__init__(message)
        self.hypothesis = hypothesis


class NonProjectiveWarning(UserWarning):
    pass


def _enumerate(fan: Fan) -> list[Collection]:
    n, m = fan.dim, fan.nrays
    found: list[int] = []
    out: list[Collection] = []
    for size in range(2, min(m, n + 1) + 1):
        for combo in itertools.combinations(range(m), size):
            mask = 0
            for i in combo:
                mask |= 1 << i
            if any(pc & mask == pc for pc in found):
                continue
            if fan.is_cone_mask(mask):
                continue
            # pairs are settled by the first test; larger sets need every facet to be a cone
            if size > 2 and not all(fan.is_cone_mask(mask & ~(1 << i)) for i in combo):
                continue
            found.append(mask)
            out.append(combo)
    return sorted(out)


def primitive_collections(fan: Fan) -> list[Collection]:
    """All primitive collections, sorted lexicographically.

    Subsets are scanned by increasing cardinality; supersets of collections
    already found are skipped. A primitive collection has at most n + 1
    elements, since dropping one element leaves the generators of a cone.
    """
    return list(fan.cached("pcs", lambda: _enumerate(fan)))


def is_primitive_collection(fan: Fan, P: Iterable[int]) -> bool:
    P = tuple(sorted(set(P)))
    if len(P) < 2 or any(i < 0 or i >= fan.nrays for i in P):
        return False
    if fan.is_cone(P):
        return False
    return all(fan.is_cone([j for j in P if j != i]) for i in P)


@dataclass(frozen=True)
class PrimitiveRelation:
    """``sum_{v in P} v = sum_j mu_j w_j`` with ``w_j`` spanning sigma(P)."""

    collection: Collection
    sigma: tuple[int, ...]
    multiplicities: tuple[int, ...]
    nrays: int

    @property
    def order(self) -> int:
        return len(self.collection)

    @property
    def degree(self) -> int:
        return len(self.collection) - sum(self.multiplicities)

    @property
    def is_centrally_symmetric(self) -> bool:
        return not self.sigma

    def nu(self) -> tuple[int, ...]:
        """Coefficient vector over all rays: +1 on P, -mu_j on sigma(P)."""
        out = [0] * self.nrays
        for i in self.collection:
            out[i] = 1
        for w, mu in zip(self.sigma, self.multiplicities):
            out[w] = -mu
        return tuple(out)

    def format(self, fan: Fan | None = None) -> str:
        def name(i: int) -> str:
            return f"v{i}" if fan is None else str(list(fan.rays[i]))
        lhs = " + ".join(name(i) for i in self.collection)
        if not self.sigma:
            rhs = "0"
        else:
            rhs = " + ".join((f"{mu}*" if mu != 1 else "") + name(w)
                             for w, mu in zip(self.sigma, self.multiplicities))
        return f"{lhs} = {rhs}"


def primitive_relation(fan: Fan, P: Iterable[int]) -> PrimitiveRelation:
    P = tuple(sorted(set(P)))
    if not is_primitive_collection(fan, P):
        raise NotPrimitiveCollection(f"{list(P)} is not a primitive collection")
    s = [sum(fan.rays[i][k] for i in P) for k in range(fan.dim)]
    sigma, coeffs = locate(fan, s)
    return PrimitiveRelation(P, sigma, coeffs, fan.nrays)


def primitive_relations(fan: Fan) -> list[PrimitiveRelation]:
    def compute():
        return [primitive_relation(fan, P) for P in primitive_collections(fan)]
    return list(fan.cached("relations", compute))


def centrally_symmetric_collections(fan: Fan) -> list[PrimitiveRelation]:
    return [r for r in primitive_relations(fan) if r.is_centrally_symmetric]


def minimal_p_dimension(fan: Fan) -> int | None:
    """Smallest order minus one over centrally symmetric collections.

    Returns None, with a :class:`NonProjectiveWarning`, when there is none;
    this can only happen for a complete fan that is not projective.
    """
    cs = centrally_symmetric_collections(fan)
    if not cs:
        warnings.warn("fan has no centrally symmetric primitive collection; it is not projective",
                      NonProjectiveWarning, stacklevel=2)
        return None
    return min(r.order for r in cs) - 1


# ---------------------------------------------------------------------------
# opponents

@dataclass(frozen=True)
class OpponentTable:
    opponent: dict[int, int | None]
    relations: dict[frozenset, PrimitiveRelation]

    def pairs(self) -> list[tuple[int, int]]:
        return sorted({tuple(sorted((x, y))) for x, y in self.opponent.items() if y is not None})

    def __getitem__(self, x: int) -> int | None:
        return self.opponent[x]


def opponent_table(fan: Fan) -> OpponentTable:
    """For each ray x, the unique y with {x, y} primitive, if any.

    Requires a Fano fan with minimal P-dimension > 1. Under those hypotheses
    every order-two collection has the shape x + y = z.
    """
    from .mori import is_fano

    verdict = is_fano(fan)
    if not verdict:
        raise HypothesisViolated(
            f"fan is not Fano (collection {list(verdict.witness)} has degree {verdict.witness_degree})",
            "fano")
    m = minimal_p_dimension(fan)
    if m is None or m <= 1:
        raise HypothesisViolated(f"minimal P-dimension is {m}, need > 1", "m>1")
    opp: dict[int, int | None] = {i: None for i in range(fan.nrays)}
    rels = {}
    for r in primitive_relations(fan):
        if r.order != 2:
            continue
        x, y = r.collection
        if opp[x] is not None or opp[y] is not None:
            raise HypothesisViolated(f"ray {x if opp[x] is not None else y} has two opponents",
                                     "unique-opponent")
        if len(r.sigma) != 1 or r.multiplicities != (1,):
            raise HypothesisViolated(f"order-two relation {r.format()} is not of the form x + y = z",
                                     "shape")
        opp[x], opp[y] = y, x
        rels[frozenset(r.collection)] = r
    return OpponentTable(opp, rels)


# ---------------------------------------------------------------------------
# Picard rank three

class NotRankThree(ValueError):
    pass


class StructureNotFound(RuntimeError):
    pass


@dataclass(frozen=True)
class Rho3Structure:
    """Partition of the rays of a Picard-rank-three fan into primitive collections.

    For ``l == 3`` the parts are the three (disjoint) primitive collections.
    For ``l == 5`` the parts X0..X4 are cyclically arranged so that the
    collections are X_i + X_{i+1}; ``relations[i]`` is the relation of
    X_i + X_{i+1}. The relation of X4 + X0 reads c.X2 + b.X3, and ``c``, ``b``
    are those coefficient vectors (in the order of the parts).
    """

    l: int
    parts: tuple[tuple[int, ...], ...]
    relations: tuple[PrimitiveRelation, ...]
    c: tuple[int, ...] | None = None
    b: tuple[int, ...] | None = None


def _vec_add(a: Sequence[int], b: Sequence[int]) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def batyrev_rho3_structure(fan: Fan) -> Rho3Structure:
    rho = fan.nrays - fan.dim
    if rho != 3:
        raise NotRankThree(f"Picard rank is {rho}, not 3")
    rels = primitive_relations(fan)
    pcs = [set(r.collection) for r in rels]
    allrays = set(range(fan.nrays))
    if len(rels) == 3:
        if set().union(*pcs) != allrays or sum(map(len, pcs)) != fan.nrays:
            raise StructureNotFound("three primitive collections that do not partition the rays")
        order = sorted(range(3), key=lambda i: rels[i].collection)
        return Rho3Structure(3, tuple(rels[i].collection for i in order),
                             tuple(rels[i] for i in order))
    if len(rels) != 5:
        raise StructureNotFound(f"{len(rels)} primitive collections, expected 3 or 5")
    # atoms: classes of rays by which collections contain them
    sig: dict[tuple[bool, ...], list[int]] = {}
    for v in range(fan.nrays):
        sig.setdefault(tuple(v in p for p in pcs), []).append(v)
    if len(sig) != 5 or any(sum(k) != 2 for k in sig):
        raise StructureNotFound("primitive collections do not come from a cyclic partition")
    atoms = [tuple(sorted(vs)) for vs in sig.values()]
    keys = list(sig.keys())
    # adjacency: atoms i, j are adjacent iff some collection contains both
    adj = {i: {j for j in range(5) if j != i and any(keys[i][p] and keys[j][p] for p in range(5))}
           for i in range(5)}
    if any(len(a) != 2 for a in adj.values()):
        raise StructureNotFound("atom graph is not a 5-cycle")
    candidates = []
    for start in range(5):
        for nxt in adj[start]:
            cyc = [start, nxt]
            while len(cyc) < 5:
                cyc.append(next(iter(adj[cyc[-1]] - {cyc[-2]})))
            candidates.append(cyc)
    coll_index = {r.collection: r for r in rels}
    for cyc in sorted(candidates, key=lambda c: [atoms[i] for i in c]):
        parts = [atoms[i] for i in cyc]
        rs = []
        for i in range(5):
            P = tuple(sorted(parts[i] + parts[(i + 1) % 5]))
            if P not in coll_index:
                break
            rs.append(coll_index[P])
        else:
            if _rho3_shape_ok(parts, rs):
                nu0, nu4 = rs[0].nu(), rs[4].nu()
                c = tuple(-nu0[v] for v in parts[2])
                b = tuple(-nu4[v] for v in parts[3])
                if not (_vec_add(rs[1].nu(), rs[3].nu()) == rs[2].nu()
                        and _vec_add(rs[0].nu(), rs[3].nu()) == rs[4].nu()):
                    raise StructureNotFound("relation identities r2 = r1 + r3, r4 = r0 + r3 fail")
                return Rho3Structure(5, tuple(parts), tuple(rs), c, b)
    raise StructureNotFound("no labelling of the 5-cycle matches the expected relations")


def _rho3_shape_ok(parts: list[tuple[int, ...]], rs: list[PrimitiveRelation]) -> bool:
    """Check the five relations against the standard shape, coefficient by coefficient.

    r0: X0 + X1 = c.X2 + (b+1).X3    r1: X1 + X2 = X4    r2: X2 + X3 = 0
    r3: X3 + X4 = X1                 r4: X4 + X0 = c.X2 + b.X3
    """
    nus = [r.nu() for r in rs]

    def rhs(i: int, part: int) -> list[int]:
        return [-nus[i][v] for v in parts[part]]

    def zero_off(i: int, allowed: set[int]) -> bool:
        # no coefficient outside the collection X_i + X_{i+1} and the allowed parts
        skip = allowed | {i, (i + 1) % 5}
        return all(nus[i][v] == 0 for p in range(5) if p not in skip for v in parts[p])

    ones = lambda part: [1] * len(parts[part])
    c, b = rhs(4, 2), rhs(4, 3)
    return (rhs(0, 2) == c and rhs(0, 3) == [x + 1 for x in b] and zero_off(0, {2, 3})
            and rhs(1, 4) == ones(4) and zero_off(1, {4})
            and not rs[2].sigma
            and rhs(3, 1) == ones(1) and zero_off(3, {1})
            and zero_off(4, {2, 3})
            and all(x >= 0 for x in c + b) and 0 in c)
