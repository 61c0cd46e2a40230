"""Projective-bundle structures from centrally symmetric collections.

A centrally symmetric primitive collection P of order k + 1 makes an open
subset U of X a P^k-bundle over a smooth toric variety. The cones removed to
obtain U are described by E_P; the base is the quotient of the fan of U by the
span of P.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .fan import Cone, Fan, faces, hirzebruch, product, projective_space, quotient_projection, star_subdivision
from .lattice import Vector, dot
from .primcoll import Collection, primitive_collections, primitive_relation


class NotCentrallySymmetric(ValueError):
    pass


def _require_cs(fan: Fan, P: Iterable[int]) -> Collection:
    P = tuple(sorted(set(P)))
    try:
        rel = primitive_relation(fan, P)
    except ValueError:
        raise NotCentrallySymmetric(f"{list(P)} is not a primitive collection") from None
    if not rel.is_centrally_symmetric:
        raise NotCentrallySymmetric(f"{list(P)} is not centrally symmetric")
    return P


def _minimal(cones: Iterable[Cone]) -> list[Cone]:
    cones = sorted(set(cones), key=lambda c: (len(c), c))
    keep: list[Cone] = []
    for c in cones:
        s = set(c)
        if not any(set(k) <= s for k in keep):
            keep.append(c)
    return sorted(keep)


def exceptional_set(fan: Fan, P: Iterable[int]) -> list[Cone]:
    """Minimal cones of E_P.

    A cone sigma lies in E_P when it avoids P and sigma + P' is primitive for
    some nonempty proper subset P' of P. Its minimal elements are the sets
    R - P for primitive collections R != P meeting P.
    """
    P = _require_cs(fan, P)
    Pset = set(P)
    out = []
    for R in primitive_collections(fan):
        Rs = set(R)
        if Rs == Pset or not (Rs & Pset):
            continue
        # R meets P properly (two distinct primitive collections cannot nest)
        out.append(tuple(sorted(Rs - Pset)))
    return _minimal(out)


def _tau_condition(fan: Fan, P: Collection, tau: Sequence[int]) -> bool:
    return all(fan.is_cone(set(tau) | (set(P) - {x})) for x in P)


@dataclass(frozen=True)
class OpenSubfan:
    """A (generally incomplete) fan given by its cones, not validated as complete."""

    dim: int
    rays: tuple[Vector, ...]
    cones: tuple[Cone, ...]

    def maximal_cones(self) -> list[Cone]:
        cs = sorted(self.cones, key=len, reverse=True)
        out: list[Cone] = []
        for c in cs:
            if not any(set(c) < set(o) for o in out):
                out.append(c)
        return sorted(out)

    @property
    def is_pure(self) -> bool:
        return all(len(c) == self.dim for c in self.maximal_cones())


def open_subset_fan(fan: Fan, P: Iterable[int]) -> list[Cone]:
    """Cones tau + J with tau avoiding P, J a subset of P, and tau + (P - x) a cone for every x in P."""
    P = _require_cs(fan, P)
    Pset = set(P)
    return [c for c in faces(fan).all()
            if _tau_condition(fan, P, [i for i in c if i not in Pset])]


def open_subset_fan_by_complement(fan: Fan, P: Iterable[int]) -> list[Cone]:
    """Cones of the fan containing no cone of E_P (orbit closures missing V(E_P))."""
    E = [set(e) for e in exceptional_set(fan, P)]
    return [c for c in faces(fan).all() if not any(e <= set(c) for e in E)]


@dataclass(frozen=True)
class BundleStructure:
    """P^k-bundle structure attached to a centrally symmetric collection.

    ``ray_projection`` maps each ray of the open subfan either to a base ray
    index or to the string ``"fiber"``. ``base`` is a :class:`Fan` when E_P is
    empty and an :class:`OpenSubfan` otherwise.
    """

    collection: Collection
    exceptional_cones: list[Cone]
    open_fan: list[Cone]
    base: Fan | OpenSubfan
    fiber_dim: int
    ray_projection: dict[int, int | str]
    projection: tuple[tuple[int, ...], ...]

    @property
    def is_global(self) -> bool:
        return not self.exceptional_cones


def _base_data(fan: Fan, P: Collection):
    Pset = set(P)
    k = len(P) - 1
    proj = quotient_projection(fan.dim, [fan.rays[i] for i in P[1:]])
    hat = [c for c in faces(fan).all() if not (set(c) & Pset) and _tau_condition(fan, P, c)]
    base_rays: list[Vector] = []
    index: dict[int, int] = {}
    for (u,) in sorted(c for c in hat if len(c) == 1):
        index[u] = len(base_rays)
        base_rays.append(tuple(dot(row, fan.rays[u]) for row in proj))
    cones = [tuple(sorted(index[i] for i in c)) for c in hat]
    return k, proj, hat, base_rays, index, cones


def base_fan(fan: Fan, P: Iterable[int]) -> Fan | OpenSubfan:
    """Image of the open subfan in N / span(P).

    Complete (returned as a validated :class:`Fan`) exactly when E_P is empty;
    otherwise an :class:`OpenSubfan`. When P uses every ray the base is a
    point, returned as the 0-dimensional ``OpenSubfan`` with the single cone ().
    """
    P = _require_cs(fan, P)
    k, _, _, base_rays, _, cones = _base_data(fan, P)
    d = fan.dim - k
    if d == 0:
        return OpenSubfan(0, (), ((),))
    if not exceptional_set(fan, P):
        return Fan(d, base_rays, [c for c in cones if len(c) == d])
    return OpenSubfan(d, tuple(base_rays), tuple(sorted(set(cones))))


def bundle_structure(fan: Fan, P: Iterable[int]) -> BundleStructure:
    P = _require_cs(fan, P)
    k, proj, hat, base_rays, index, _ = _base_data(fan, P)
    E = exceptional_set(fan, P)
    U = open_subset_fan(fan, P)
    base = base_fan(fan, P)
    rp: dict[int, int | str] = {i: "fiber" for i in P}
    rp.update(index)
    return BundleStructure(P, E, U, base, k, rp, proj)


def split_check(fan: Fan, P: Iterable[int]) -> bool:
    """Every maximal cone of the open subfan is tau + (k of the k+1 P-rays), with
    tau running bijectively over maximal cones of the base."""
    P = _require_cs(fan, P)
    Pset = set(P)
    k, _, hat, _, index, _ = _base_data(fan, P)
    U = open_subset_fan(fan, P)
    d = fan.dim - k
    maxU = [c for c in U if len(c) == fan.dim]
    taus = set()
    for c in maxU:
        J = set(c) & Pset
        tau = tuple(sorted(set(c) - Pset))
        if len(J) != k or len(tau) != d:
            return False
        taus.add(tau)
    hat_max = {c for c in hat if len(c) == d}
    if taus != hat_max:
        return False
    # each tau appears with all k+1 choices of omitted P-ray
    return len(maxU) == len(taus) * (k + 1)


# ---------------------------------------------------------------------------
# split projective bundles

@dataclass(frozen=True)
class SplitBundleSpec:
    """P(O(D_1) + ... + O(D_k) + O) over ``base``; ``twists[i][j]`` is the
    coefficient of the j-th base divisor in D_{i+1}."""

    base: Fan
    twists: tuple[tuple[int, ...], ...]


def split_bundle_fan(spec: SplitBundleSpec, name: str | None = None) -> Fan:
    """Fan of a split projective bundle.

    Rays: fiber rays e_1..e_k and -(e_1+...+e_k) in the first k coordinates,
    then each base ray u_j lifted to (a_{1j}, ..., a_{kj}, u_j).
    """
    base, twists = spec.base, [tuple(int(x) for x in t) for t in spec.twists]
    k = len(twists)
    if k < 1:
        raise ValueError("need at least one twist (the fiber is P^k with k >= 1)")
    for t in twists:
        if len(t) != base.nrays:
            raise ValueError(f"twist {list(t)} has {len(t)} entries, base has {base.nrays} rays")
    rays: list[Vector] = []
    for i in range(k):
        rays.append(tuple(int(i == j) for j in range(k)) + (0,) * base.dim)
    rays.append((-1,) * k + (0,) * base.dim)
    for j, u in enumerate(base.rays):
        rays.append(tuple(twists[i][j] for i in range(k)) + tuple(u))
    off = k + 1
    cones = []
    for bc in base.max_cones:
        lifted = [off + j for j in bc]
        for omit in range(k + 1):
            cones.append([i for i in range(k + 1) if i != omit] + lifted)
    return Fan(k + base.dim, rays, cones, name=name)


def _p2() -> Fan:
    return projective_space(2)


def _p1p1() -> Fan:
    return product(projective_space(1), projective_space(1))


def _bundle(base: Fan, first: Sequence[Sequence[int]], n: int, name: str) -> Fan:
    k = n - base.dim
    zero = (0,) * base.nrays
    twists = tuple(tuple(t) for t in first) + (zero,) * (k - len(first))
    return split_bundle_fan(SplitBundleSpec(base, twists), name=name)


def _y_blowup_family(n: int, which: str) -> Fan:
    # Y = blowup of P^n along the linear subspace V(e1, e2, e3); E = V(z) with z = e1 + e2 + e3
    y = star_subdivision(projective_space(n), (0, 1, 2))
    z = y.nrays - 1
    if which == "E-hyperplane":
        center = (0, z)
    else:
        center = (0, 3)
    return star_subdivision(y, center)


def _family_builders() -> dict[str, tuple[int, Callable[[int], Fan]]]:
    # P^1 x P^1 rays: 0 = e1, 1 = -e1, 2 = e2, 3 = -e2. F_1 rays (see hirzebruch):
    # D1 = V(e1) is a fiber f, D2 = V(e2) the (-1)-curve e.
    return {
        "Pn": (1, lambda n: projective_space(n)),
        "blP^{n-2}": (3, lambda n: star_subdivision(projective_space(n), (0, 1))),
        "P2-O1": (6, lambda n: _bundle(_p2(), [(1, 0, 0)], n, "P2-O1")),
        "P2-O1O1": (6, lambda n: _bundle(_p2(), [(1, 0, 0), (1, 0, 0)], n, "P2-O1O1")),
        "P2-O2": (6, lambda n: _bundle(_p2(), [(2, 0, 0)], n, "P2-O2")),
        "P1P1-O11": (6, lambda n: _bundle(_p1p1(), [(1, 0, 1, 0)], n, "P1P1-O11")),
        "P1P1-O10-O01": (6, lambda n: _bundle(_p1p1(), [(1, 0, 0, 0), (0, 0, 1, 0)], n, "P1P1-O10-O01")),
        "F1-Oef": (6, lambda n: _bundle(hirzebruch(1), [(1, 1, 0, 0)], n, "F1-Oef")),
        "blowup-E-hyperplane": (6, lambda n: _y_blowup_family(n, "E-hyperplane")),
        "blowup-two-hyperplanes": (6, lambda n: _y_blowup_family(n, "two-hyperplanes")),
    }


FAMILIES: tuple[str, ...] = tuple(_family_builders())
#: the eight families with m(X) = n - 2
CLASSIFIED_FAMILIES: tuple[str, ...] = FAMILIES[2:]


def classification_family(name: str, n: int) -> Fan:
    """Fan of one of the named families in dimension n.

    The eight m = n - 2 families are defined for n >= 6, the blowup of P^n
    along a linear P^(n-2) for n >= 3.
    """
    builders = _family_builders()
    if name not in builders:
        raise KeyError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    lo, build = builders[name]
    if not isinstance(n, int) or n < lo:
        raise ValueError(f"family {name} needs n >= {lo}, got {n}")
    fan = build(n)
    label = name.replace("n", str(n)) if name == "Pn" else f"{name} (n={n})"
    return fan.with_name(label)
