"""Curve classes, the Fano test, Picard rank and extremal blowdowns."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .fan import Fan
from .primcoll import (
    Collection,
    HypothesisViolated,
    PrimitiveRelation,
    primitive_collections,
    primitive_relation,
    primitive_relations,
)


@dataclass(frozen=True)
class CurveClass:
    """A 1-cycle class recorded by its intersection numbers nu_v = V(v) . C."""

    nu: tuple[int, ...]

    @property
    def anticanonical_degree(self) -> int:
        return sum(self.nu)

    def check_exact(self, fan: Fan) -> bool:
        """True iff sum_v nu_v * v = 0 in the lattice."""
        return all(sum(c * r[k] for c, r in zip(self.nu, fan.rays)) == 0 for k in range(fan.dim))


def curve_class(relation: PrimitiveRelation) -> CurveClass:
    return CurveClass(relation.nu())


def picard_rank(fan: Fan) -> int:
    return fan.nrays - fan.dim


@dataclass(frozen=True)
class FanoVerdict:
    fano: bool
    witness: Collection | None = None
    witness_degree: int | None = None

    def __bool__(self) -> bool:
        return self.fano


def is_fano(fan: Fan) -> FanoVerdict:
    """Fano iff every primitive relation has positive degree.

    On failure the witness is the first (lexicographically) collection of
    degree <= 0.
    """
    for r in primitive_relations(fan):
        if r.degree <= 0:
            return FanoVerdict(False, r.collection, r.degree)
    return FanoVerdict(True)


# ---------------------------------------------------------------------------
# blowdowns

class WrongShape(ValueError):
    pass


@dataclass(frozen=True)
class BlowdownResult:
    """Contraction of a relation t_1 + ... + t_s = z.

    ``index_map[i]`` is the target index of source ray i (None for z).
    ``center`` is the cone spanned by the t_i in the target. ``predicted_pcs``
    are the target's primitive collections predicted from the source's ones.
    """

    source: Fan
    target: Fan
    relation: PrimitiveRelation
    removed_ray: int
    center: tuple[int, ...]
    predicted_pcs: list[Collection]
    index_map: tuple[int | None, ...] = field(repr=False)


def _sato_prediction(pcs: list[Collection], z: int, T: Collection) -> list[Collection]:
    Tset = set(T)
    out = set()
    for P in pcs:
        if z not in P:
            if set(P) != Tset:
                out.add(tuple(P))
            continue
        rest = set(P) - {z}
        # keep (P - z) + T unless some (P - z) + S with S a proper subset of T is already primitive
        blocked = False
        for Q in pcs:
            if z in Q:
                continue
            Qs = set(Q)
            if rest <= Qs and (Qs - rest) < Tset:
                blocked = True
                break
        if not blocked:
            out.add(tuple(sorted(rest | Tset)))
    return sorted(out)


def blowdown(fan: Fan, relation: PrimitiveRelation | Iterable[int], name: str | None = None) -> BlowdownResult:
    """Remove the ray z of a relation t_1 + ... + t_s = z.

    The caller is responsible for extremality of the relation; a degree-one
    relation on a Fano fan is always extremal.
    """
    if not isinstance(relation, PrimitiveRelation):
        relation = primitive_relation(fan, relation)
    if len(relation.sigma) != 1 or relation.multiplicities != (1,):
        raise WrongShape(f"relation {relation.format()} is not of the form t_1 + ... + t_s = z")
    (z,) = relation.sigma
    T = relation.collection
    Tset = set(T)
    n = fan.dim
    cones = set()
    for c in fan.max_cones:
        if z not in c:
            cones.add(c)
            continue
        merged = tuple(sorted((set(c) - {z}) | Tset))
        if len(merged) != n:
            raise WrongShape(f"cone {list(c)} does not merge to a simplicial cone; relation is not contractible")
        cones.add(merged)
    index_map = tuple(None if i == z else (i if i < z else i - 1) for i in range(fan.nrays))
    rays = [r for i, r in enumerate(fan.rays) if i != z]
    target = Fan(n, rays, [[index_map[i] for i in c] for c in cones], name=name)
    center = tuple(sorted(index_map[t] for t in T))
    pred_src = _sato_prediction(primitive_collections(fan), z, T)
    predicted = sorted(tuple(sorted(index_map[i] for i in P)) for P in pred_src)
    return BlowdownResult(fan, target, relation, z, center, predicted, index_map)


def contractible_relations(fan: Fan) -> list[PrimitiveRelation]:
    """Relations of degree one and shape t_1 + ... + t_s = z (extremal when Fano)."""
    return [r for r in primitive_relations(fan)
            if r.degree == 1 and len(r.sigma) == 1 and r.multiplicities == (1,)]


# ---------------------------------------------------------------------------
# reduction of an order-two centrally symmetric collection

@dataclass(frozen=True)
class ReductionResult:
    fan: Fan
    steps: list[BlowdownResult]
    collection: Collection

    def __iter__(self):
        # allows ``fan, steps = reduce_order2(...)``
        return iter((self.fan, self.steps))


def reduce_order2(fan: Fan, P: Iterable[int]) -> ReductionResult:
    """Blow down until the bundle structure of P = {x, -x} has no divisorial exceptional locus.

    At each step the lexicographically first order-two collection other than
    P that contains x or -x is contracted. On a Fano fan at most two steps are
    needed and the centres are disjoint.
    """
    from .bundle import exceptional_set

    P = tuple(sorted(set(P)))
    verdict = is_fano(fan)
    if not verdict:
        raise HypothesisViolated("fan is not Fano", "fano")
    try:
        rel = primitive_relation(fan, P)
    except ValueError:
        raise HypothesisViolated(f"{list(P)} is not a primitive collection", "cs-order-2") from None
    if rel.order != 2 or not rel.is_centrally_symmetric:
        raise HypothesisViolated(f"{list(P)} is not centrally symmetric of order 2", "cs-order-2")

    steps: list[BlowdownResult] = []
    current, cur_P = fan, P
    while True:
        x, y = cur_P
        candidates = [Q for Q in primitive_collections(current)
                      if len(Q) == 2 and Q != cur_P and (x in Q or y in Q)]
        if not candidates:
            break
        if len(steps) == 2:
            raise RuntimeError("more than two blowdowns needed; input violates the Fano hypothesis")
        Q = candidates[0]
        r = primitive_relation(current, Q)
        step = blowdown(current, r)
        steps.append(step)
        current = step.target
        cur_P = tuple(sorted(step.index_map[i] for i in cur_P))
    if any(len(c) == 1 for c in exceptional_set(current, cur_P)):
        raise RuntimeError("exceptional locus still has a divisorial component")
    return ReductionResult(current, steps, cur_P)


# ---------------------------------------------------------------------------
# Reid's cone condition for degree-one relations

def reid_violations(fan: Fan) -> list[tuple[Collection, tuple[int, ...]]]:
    """Cones tau witnessing a failure of Reid's condition for some degree-one relation.

    For r(P) with sigma(P) = sigma and any tau disjoint from P and sigma with
    sigma + tau a cone, every (P - v) + sigma + tau must be a cone too. Returns
    (P, tau) pairs where this fails; empty for Fano fans.
    """
    from .fan import faces

    out = []
    allfaces = faces(fan).all()
    for r in primitive_relations(fan):
        if r.degree != 1:
            continue
        used = set(r.collection) | set(r.sigma)
        for tau in allfaces:
            if used & set(tau):
                continue
            base = set(r.sigma) | set(tau)
            if not fan.is_cone(base):
                continue
            for v in r.collection:
                if not fan.is_cone((set(r.collection) - {v}) | base):
                    out.append((r.collection, tau))
                    break
    return out
