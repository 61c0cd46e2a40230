"""Regular complete fans.

A cone is stored as a sorted tuple of ray indices. A :class:`Fan` is immutable
after construction and caches derived data (face lattice, inverse generator
matrices) on first use.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .lattice import (
    LatticeError,
    Vector,
    basis_with,
    determinant,
    dot,
    is_primitive,
    transpose,
    unimodular_inverse,
)

Cone = tuple[int, ...]


class FanError(ValueError):
    """Base class for invalid fan data. ``cones`` lists the offending cones."""

    def __init__(self, message: str, cones: Sequence[Cone] = ()):
        super().__init__(message)
        self.cones = [tuple(c) for c in cones]


class InvalidFanData(FanError):
    """Structural problem: wrong lengths, bad indices, repeated rays, unused rays."""


class NonPrimitiveRay(FanError):
    pass


class NonRegularCone(FanError):
    pass


class FanConditionViolated(FanError):
    pass


class NotComplete(FanError):
    pass


class ConeNotInFan(ValueError):
    pass


class Fan:
    """A validated regular complete fan in Z^dim.

    Build one with :func:`build_fan` (or the constructor, which validates).
    """

    def __init__(self, dim: int, rays: Iterable[Sequence[int]], max_cones: Iterable[Iterable[int]],
                 name: str | None = None):
        rays_t = [tuple(int(x) for x in r) for r in rays]
        cones_t = [tuple(sorted(int(i) for i in c)) for c in max_cones]
        _validate(dim, rays_t, cones_t)
        self.dim: int = dim
        self.rays: tuple[Vector, ...] = tuple(rays_t)
        self.max_cones: tuple[Cone, ...] = tuple(sorted(cones_t))
        self.name = name
        self._lock = threading.Lock()
        self._cache: dict = {}
        self._ray_index = {r: i for i, r in enumerate(self.rays)}
        self._ray_cones = [0] * len(self.rays)
        for ci, cone in enumerate(self.max_cones):
            for i in cone:
                self._ray_cones[i] |= 1 << ci

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<Fan{label} dim={self.dim} rays={len(self.rays)} cones={len(self.max_cones)}>"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Fan):
            return NotImplemented
        return (self.dim, self.rays, self.max_cones) == (other.dim, other.rays, other.max_cones)

    def __hash__(self) -> int:
        return hash((self.dim, self.rays, self.max_cones))

    def __getstate__(self) -> dict:
        # the lock cannot be pickled; the cache is rebuilt on demand
        state = self.__dict__.copy()
        del state["_lock"]
        state["_cache"] = {}
        return state

    def __setstate__(self, state: dict) -> None:
        self.__dict__.update(state)
        self._lock = threading.Lock()

    @property
    def nrays(self) -> int:
        return len(self.rays)

    def cached(self, key, compute):
        """Memoise ``compute()`` under ``key``; safe for concurrent readers."""
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        value = compute()
        with self._lock:
            return self._cache.setdefault(key, value)

    def ray_index(self, v: Sequence[int]) -> int:
        try:
            return self._ray_index[tuple(v)]
        except KeyError:
            raise KeyError(f"{tuple(v)} is not a ray of the fan") from None

    def is_cone(self, indices: Iterable[int]) -> bool:
        """True iff the rays span a cone of the fan (i.e. lie in one maximal cone)."""
        acc = (1 << len(self.max_cones)) - 1
        for i in indices:
            acc &= self._ray_cones[i]
            if not acc:
                return False
        return True

    def is_cone_mask(self, mask: int) -> bool:
        acc = (1 << len(self.max_cones)) - 1
        i = 0
        while mask:
            if mask & 1:
                acc &= self._ray_cones[i]
                if not acc:
                    return False
            mask >>= 1
            i += 1
        return True

    def cone_inverse(self, ci: int) -> list[list[int]]:
        """Inverse of the generator matrix of maximal cone ``ci`` (rays as columns).

        Row j gives the coordinate of a vector along the j-th generator.
        """
        def compute():
            cols = [self.rays[i] for i in self.max_cones[ci]]
            return unimodular_inverse(transpose(cols))
        return self.cached(("inv", ci), compute)

    def with_name(self, name: str | None) -> "Fan":
        return Fan(self.dim, self.rays, self.max_cones, name=name)

    def relabel(self, order: Sequence[int]) -> "Fan":
        """Fan with rays listed as ``[rays[order[0]], rays[order[1]], ...]``."""
        pos = {old: new for new, old in enumerate(order)}
        return Fan(self.dim, [self.rays[i] for i in order],
                   [[pos[i] for i in c] for c in self.max_cones], name=self.name)


def _validate(dim: int, rays: list[Vector], cones: list[Cone]) -> None:
    if not isinstance(dim, int) or dim < 1:
        raise InvalidFanData(f"dimension must be a positive integer, got {dim!r}")
    if not rays:
        raise InvalidFanData("fan has no rays")
    for i, r in enumerate(rays):
        if len(r) != dim:
            raise InvalidFanData(f"ray {i} has {len(r)} entries, expected {dim}")
    for i, r in enumerate(rays):
        if not is_primitive(r):
            raise NonPrimitiveRay(f"ray {i} = {list(r)} is not a primitive nonzero vector", [(i,)])
    seen: dict[Vector, int] = {}
    for i, r in enumerate(rays):
        if r in seen:
            raise InvalidFanData(f"duplicate ray {list(r)} at indices {seen[r]} and {i}", [(seen[r], i)])
        seen[r] = i
    if not cones:
        raise InvalidFanData("fan has no maximal cones")
    for c in cones:
        if len(c) != dim or len(set(c)) != dim:
            raise InvalidFanData(f"maximal cone {list(c)} must have {dim} distinct rays", [c])
        if any(i < 0 or i >= len(rays) for i in c):
            raise InvalidFanData(f"maximal cone {list(c)} refers to a missing ray", [c])
    if len(set(cones)) != len(cones):
        dup = next(c for c in cones if cones.count(c) > 1)
        raise FanConditionViolated(f"maximal cone {list(dup)} listed twice", [dup])
    used = set(itertools.chain.from_iterable(cones))
    unused = [i for i in range(len(rays)) if i not in used]
    if unused:
        raise InvalidFanData(f"rays {unused} lie in no maximal cone", [(i,) for i in unused])

    bad = [c for c in cones if abs(determinant([rays[i] for i in c])) != 1]
    if bad:
        raise NonRegularCone(f"cones {[list(c) for c in bad]} are not regular (|det| != 1)", bad)

    # wall condition: every codimension-one face lies in exactly two maximal cones,
    # and the two cones sit on opposite sides of it
    walls: dict[Cone, list[int]] = {}
    for c in cones:
        for p in c:
            wall = tuple(i for i in c if i != p)
            walls.setdefault(wall, []).append(p)
    crowded = [w for w, ps in walls.items() if len(ps) > 2]
    if crowded:
        raise FanConditionViolated(
            f"walls {[list(w) for w in crowded]} lie in more than two maximal cones", crowded)
    open_walls = [w for w, ps in walls.items() if len(ps) == 1]
    if open_walls:
        raise NotComplete(
            f"walls {[list(w) for w in open_walls]} lie in only one maximal cone", open_walls)
    for wall, (p, q) in walls.items():
        wv = [rays[i] for i in wall]
        if determinant(wv + [rays[p]]) * determinant(wv + [rays[q]]) > 0:
            raise FanConditionViolated(
                f"cones {sorted(wall + (p,))} and {sorted(wall + (q,))} overlap across their common wall",
                [tuple(sorted(wall + (p,))), tuple(sorted(wall + (q,)))])
    # global overlap: the barycentre of each cone must lie in no other cone
    invs = [unimodular_inverse(transpose([rays[i] for i in c])) for c in cones]
    for a, c in enumerate(cones):
        bary = [sum(rays[i][k] for i in c) for k in range(dim)]
        for b, other in enumerate(cones):
            if a == b:
                continue
            if all(dot(row, bary) >= 0 for row in invs[b]):
                raise FanConditionViolated(
                    f"maximal cones {list(c)} and {list(other)} overlap", [c, other])


def build_fan(dim: int, rays: Iterable[Sequence[int]], max_cones: Iterable[Iterable[int]],
              name: str | None = None) -> Fan:
    """Validate fan data and return a :class:`Fan`.

    Checks run in order (shape, primitivity, regularity, walls, overlap) and
    raise the matching :class:`FanError` subclass naming the offending cones.
    """
    return Fan(dim, rays, max_cones, name=name)


@dataclass(frozen=True)
class FaceSet:
    by_dim: tuple[tuple[Cone, ...], ...]

    def __contains__(self, cone) -> bool:
        cone = tuple(sorted(cone))
        return len(cone) < len(self.by_dim) and cone in set(self.by_dim[len(cone)])

    def all(self) -> list[Cone]:
        return [c for layer in self.by_dim for c in layer]

    def __len__(self) -> int:
        return sum(len(layer) for layer in self.by_dim)


def faces(fan: Fan) -> FaceSet:
    """All cones of the fan grouped by dimension, each layer sorted."""
    def compute():
        layers: list[set[Cone]] = [set() for _ in range(fan.dim + 1)]
        for c in fan.max_cones:
            for k in range(fan.dim + 1):
                layers[k].update(itertools.combinations(c, k))
        return FaceSet(tuple(tuple(sorted(layer)) for layer in layers))
    return fan.cached("faces", compute)


def locate(fan: Fan, v: Sequence[int]) -> tuple[Cone, tuple[int, ...]]:
    """Minimal cone containing ``v`` and the (positive) coefficients of ``v`` in it."""
    if len(v) != fan.dim:
        raise LatticeError(f"vector of length {len(v)} in a fan of dimension {fan.dim}")
    if not any(v):
        return (), ()
    for ci, cone in enumerate(fan.max_cones):
        coeffs = [dot(row, v) for row in fan.cone_inverse(ci)]
        if all(x >= 0 for x in coeffs):
            keep = [(i, x) for i, x in zip(cone, coeffs) if x > 0]
            return tuple(i for i, _ in keep), tuple(x for _, x in keep)
    raise NotComplete(f"vector {list(v)} lies in no maximal cone")


def minimal_cone_containing(fan: Fan, v: Sequence[int]) -> Cone:
    """The unique cone whose relative interior contains ``v``."""
    return locate(fan, v)[0]


def _require_cone(fan: Fan, tau: Iterable[int]) -> Cone:
    tau = tuple(sorted(set(tau)))
    if any(i < 0 or i >= fan.nrays for i in tau) or not fan.is_cone(tau):
        raise ConeNotInFan(f"{list(tau)} is not a cone of the fan")
    return tau


def star_subdivision(fan: Fan, tau: Iterable[int], name: str | None = None) -> Fan:
    """Blow up the orbit closure of ``tau``: add z = sum of its generators.

    The new ray gets index ``fan.nrays``; existing indices are unchanged.
    """
    tau = _require_cone(fan, tau)
    if len(tau) < 2:
        raise ConeNotInFan(f"star subdivision needs a cone of dimension >= 2, got {list(tau)}")
    z = tuple(sum(fan.rays[i][k] for i in tau) for k in range(fan.dim))
    zi = fan.nrays
    tset = set(tau)
    cones = []
    for c in fan.max_cones:
        if tset <= set(c):
            for t in tau:
                cones.append([i for i in c if i != t] + [zi])
        else:
            cones.append(list(c))
    return Fan(fan.dim, list(fan.rays) + [z], cones, name=name)


@dataclass(frozen=True)
class StarFan:
    """Fan of the orbit closure V(tau) with the induced map on rays.

    ``ray_map[i]`` is the quotient ray index for ambient rays ``i`` with
    ``tau + i`` a cone; other ambient rays (including those in tau) map to None.
    ``projection`` maps ambient vectors to quotient coordinates.
    """

    fan: Fan
    tau: Cone
    ray_map: dict[int, int | None]
    projection: tuple[tuple[int, ...], ...]

    def project(self, v: Sequence[int]) -> Vector:
        return tuple(dot(row, v) for row in self.projection)


def quotient_projection(dim: int, vectors: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Rows of a surjection Z^dim -> Z^(dim-k) with kernel the span of ``vectors``.

    ``vectors`` must extend to a lattice basis.
    """
    _, binv = basis_with([tuple(v) for v in vectors], dim)
    return tuple(tuple(row) for row in binv[len(vectors):])


def star_fan(fan: Fan, tau: Iterable[int]) -> StarFan:
    tau = _require_cone(fan, tau)
    if not tau:
        ident = tuple(tuple(int(i == j) for j in range(fan.dim)) for i in range(fan.dim))
        return StarFan(fan, (), {i: i for i in range(fan.nrays)}, ident)
    if len(tau) == fan.dim:
        raise ConeNotInFan("the star fan of a maximal cone is zero-dimensional")
    proj = quotient_projection(fan.dim, [fan.rays[i] for i in tau])
    tset = set(tau)
    star = [c for c in fan.max_cones if tset <= set(c)]
    new_index: dict[int, int] = {}
    rays: list[Vector] = []
    for i in sorted({i for c in star for i in c} - tset):
        new_index[i] = len(rays)
        rays.append(tuple(dot(row, fan.rays[i]) for row in proj))
    cones = [[new_index[i] for i in c if i not in tset] for c in star]
    qfan = Fan(fan.dim - len(tau), rays, cones)
    ray_map = {i: new_index.get(i) for i in range(fan.nrays)}
    return StarFan(qfan, tau, ray_map, proj)


# ---------------------------------------------------------------------------
# canonical forms and isomorphism

CanonicalForm = tuple[int, tuple[Vector, ...], tuple[Cone, ...]]


def canonical_form(fan: Fan) -> CanonicalForm:
    """A complete invariant of the fan up to GL(n, Z) and ray relabelling.

    Every lattice automorphism sending the fan to another fan maps some
    maximal cone, with an ordering of its generators, to the standard basis.
    So we try every (maximal cone, generator order), express all rays in that
    basis, and keep the lexicographically least (sorted rays, relabelled cones).
    """
    def compute():
        n = fan.dim
        m = fan.nrays
        R = np.array(fan.rays, dtype=np.int64)
        perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
        coords_all = [R @ np.array(fan.cone_inverse(ci), dtype=np.int64).T
                      for ci in range(len(fan.max_cones))]
        lo = min(int(c.min()) for c in coords_all)
        hi = max(int(c.max()) for c in coords_all)
        base = hi - lo + 1
        if base ** n >= 2 ** 62:
            raise OverflowError("ray coordinates too large for the vectorised canonical form")
        weights = base ** np.arange(n - 1, -1, -1, dtype=np.int64)
        best = None
        for coords in coords_all:
            shifted = coords - lo  # (m, n)
            # codes[p, i] = code of ray i under column permutation p
            codes = (shifted[:, perms] * weights).sum(axis=2).T  # (P, m)
            order = np.argsort(codes, axis=1, kind="stable")
            sorted_codes = np.take_along_axis(codes, order, axis=1)
            # lexicographic minimum over rows
            idx = np.lexsort(sorted_codes.T[::-1])
            first = sorted_codes[idx[0]]
            ties = idx[(sorted_codes[idx] == first).all(axis=1)]
            for p in ties:
                rank = np.empty(m, dtype=np.int64)
                rank[order[p]] = np.arange(m)
                rays = tuple(tuple(int(x) for x in row) for row in coords[order[p]][:, perms[p]])
                cones = tuple(sorted(tuple(sorted(int(rank[i]) for i in c)) for c in fan.max_cones))
                key = (n, rays, cones)
                if best is None or key < best:
                    best = key
        return best
    return fan.cached("canonical", compute)


def canonical_fan(fan: Fan) -> Fan:
    n, rays, cones = canonical_form(fan)
    return Fan(n, rays, cones, name=fan.name)


def is_isomorphic(a: Fan, b: Fan) -> bool:
    if (a.dim, a.nrays, len(a.max_cones)) != (b.dim, b.nrays, len(b.max_cones)):
        return False
    return canonical_form(a) == canonical_form(b)


# ---------------------------------------------------------------------------
# small standard fans

def projective_space(n: int) -> Fan:
    if n < 1:
        raise ValueError("n must be positive")
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)] + [tuple([-1] * n)]
    cones = [[j for j in range(n + 1) if j != i] for i in range(n + 1)]
    return Fan(n, rays, cones, name=f"P{n}")


def product(a: Fan, b: Fan, name: str | None = None) -> Fan:
    """Product fan: rays of ``a`` first (padded), then rays of ``b``."""
    za, zb = (0,) * a.dim, (0,) * b.dim
    rays = [r + zb for r in a.rays] + [za + r for r in b.rays]
    off = a.nrays
    cones = [list(ca) + [off + i for i in cb] for ca in a.max_cones for cb in b.max_cones]
    return Fan(a.dim + b.dim, rays, cones, name=name)


def hirzebruch(a: int) -> Fan:
    """F_a with rays e1, e2, -e1 + a e2, -e2 (F_1 is the blowup of P2 in a point)."""
    return Fan(2, [(1, 0), (0, 1), (-1, a), (0, -1)], [[0, 1], [1, 2], [2, 3], [0, 3]], name=f"F{a}")
