"""Intersection numbers of invariant divisors and the second Chern character.

Everything is exact: intersection numbers are ints, ch_2 values are Fractions
with denominator dividing 2.

The 2-Fano verdict uses invariant surfaces only. On a complete toric variety
the cone of effective 2-cycles is generated by the classes of the orbit
closures V(tau), dim tau = n - 2 (Fulton-Sturmfels, "Intersection theory on
toric varieties"), so positivity of ch_2 on those surfaces is equivalent to
positivity on all surfaces.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .fan import Cone, ConeNotInFan, Fan, faces, star_subdivision
from .lattice import basis_with, dot
from .mori import FanoVerdict, is_fano


class DegreeMismatch(ValueError):
    pass


class NonTransverse(ValueError):
    """The surface meets the blowup centre in a non-transverse way."""


def _dual_rows(fan: Fan, sigma: Cone) -> list[list[int]]:
    """Rows of B^-1 where B = generators of sigma followed by a completion."""
    def compute():
        _, binv = basis_with([fan.rays[i] for i in sigma], fan.dim)
        return binv
    return fan.cached(("dual", sigma), compute)


def _link(fan: Fan, sigma: Cone) -> list[int]:
    """Rays w not in sigma with sigma + w a cone."""
    def compute():
        s = set(sigma)
        return [w for w in range(fan.nrays) if w not in s and fan.is_cone(s | {w})]
    return fan.cached(("link", sigma), compute)


def _insert(sigma: Cone, w: int) -> Cone:
    return tuple(sorted(sigma + (w,)))


class _Engine:
    def __init__(self, fan: Fan, rng: random.Random | None = None):
        self.fan = fan
        self.rng = rng
        self.memo: dict | None = None if rng is not None else fan.cached("chow-memo", dict)

    def dual(self, sigma: Cone, v: int) -> list[int]:
        rows = _dual_rows(self.fan, sigma)
        m = list(rows[sigma.index(v)])
        if self.rng is not None:
            # shift by vectors vanishing on sigma: the result must not change
            for row in rows[len(sigma):]:
                c = self.rng.randint(-3, 3)
                m = [a + c * b for a, b in zip(m, row)]
        return m

    def eval(self, sigma: Cone, divs: tuple[int, ...]) -> int:
        if not divs:
            return 1
        key = (sigma, divs)
        if self.memo is not None and key in self.memo:
            return self.memo[key]
        if self.rng is not None:
            j = self.rng.randrange(len(divs))
        else:
            # prefer a divisor that is transverse to sigma
            j = next((i for i, v in enumerate(divs) if v not in sigma), 0)
        v = divs[j]
        rest = divs[:j] + divs[j + 1:]
        if self.rng is None:
            rest = tuple(sorted(rest))
        fan = self.fan
        if v not in sigma:
            s2 = _insert(sigma, v)
            val = self.eval(s2, rest) if fan.is_cone(s2) else 0
        else:
            m = self.dual(sigma, v)
            val = 0
            for w in _link(fan, sigma):
                c = dot(m, fan.rays[w])
                if c:
                    val -= c * self.eval(_insert(sigma, w), rest)
        if self.memo is not None:
            self.memo[key] = val
        return val


def intersection_number(fan: Fan, divisors: Iterable[int], tau: Iterable[int] = (),
                        rng: random.Random | None = None) -> int:
    """V(v_1) ... V(v_r) . V(tau) for ray indices v_i (with repetition).

    Requires r + dim tau = n. Divisors are popped one at a time: a divisor
    transverse to the current cone sigma moves to sigma + v (or gives 0 when
    that is not a cone); a divisor already in sigma is replaced by a linearly
    equivalent combination of rays outside sigma using a dual vector m with
    <m, v> = 1 and <m, u> = 0 on the rest of sigma.

    With ``rng`` the pop order and the dual vectors are randomised and no
    memo is used; the value must not change.
    """
    divs = tuple(divisors)
    tau = tuple(sorted(set(tau)))
    if len(divs) + len(tau) != fan.dim:
        raise DegreeMismatch(f"{len(divs)} divisors on a cone of dimension {len(tau)} in dimension {fan.dim}")
    if any(i < 0 or i >= fan.nrays for i in divs + tau):
        raise IndexError("ray index out of range")
    if not fan.is_cone(tau):
        raise ConeNotInFan(f"{list(tau)} is not a cone of the fan")
    engine = _Engine(fan, rng)
    if rng is None:
        divs = tuple(sorted(divs))
    return engine.eval(tau, divs)


def ch2_dot_surface(fan: Fan, tau: Iterable[int]) -> Fraction:
    """ch_2(X) . V(tau) = 1/2 sum_v V(v)^2 . V(tau) for an (n-2)-cone tau."""
    tau = tuple(sorted(set(tau)))
    if len(tau) != fan.dim - 2:
        raise DegreeMismatch(f"need a cone of dimension {fan.dim - 2}, got {len(tau)}")
    total = 0
    for v in range(fan.nrays):
        # V(v) . V(tau) vanishes unless v is in tau or tau + v is a cone
        if v in tau or fan.is_cone(tau + (v,)):
            total += intersection_number(fan, (v, v), tau)
    return Fraction(total, 2)


@dataclass(frozen=True)
class TwoFanoVerdict:
    """Invariant-surface 2-Fano test.

    ``passes`` requires the fan to be Fano and ch_2 . V(tau) > 0 for every
    (n-2)-cone tau. ``witness`` is the first tau with a nonpositive value.
    """

    passes: bool
    fano: FanoVerdict
    values: dict[Cone, Fraction] = field(repr=False)
    witness: Cone | None = None

    def __bool__(self) -> bool:
        return self.passes

    @property
    def witness_value(self) -> Fraction | None:
        return None if self.witness is None else self.values[self.witness]


def two_fano_invariant_test(fan: Fan) -> TwoFanoVerdict:
    # a curve has no surfaces, so only the Fano condition is left
    surfaces = faces(fan).by_dim[fan.dim - 2] if fan.dim >= 2 else []
    values = {tau: ch2_dot_surface(fan, tau) for tau in surfaces}
    witness = next((tau for tau, val in values.items() if val <= 0), None)
    fano = is_fano(fan)
    return TwoFanoVerdict(bool(fano) and witness is None, fano, values, witness)


@dataclass(frozen=True)
class BlowupCheck:
    """ch_2(X) . S_X against ch_2(Y) . S - (3/2) k for X the blowup of Y along V(center)."""

    center: Cone
    tau: Cone
    k: int
    ch2_x: Fraction
    ch2_y: Fraction

    @property
    def expected(self) -> Fraction:
        return self.ch2_y - Fraction(3, 2) * self.k

    @property
    def holds(self) -> bool:
        return self.ch2_x == self.expected


def ch2_blowup_check(fan_y: Fan, center: Sequence[int], tau: Sequence[int]) -> BlowupCheck:
    """Compare ch_2 on an invariant surface before and after blowing up a codim-2 centre.

    S = V(tau) meets Z = V(center) transversely in k points: k = 1 when
    center + tau is a maximal cone and k = 0 when it is not a cone. A tau that
    shares a ray with the centre is rejected as non-transverse.
    """
    center = tuple(sorted(set(center)))
    tau = tuple(sorted(set(tau)))
    if len(center) != 2:
        raise ValueError("the centre must be a 2-dimensional cone")
    if len(tau) != fan_y.dim - 2:
        raise DegreeMismatch(f"need a cone of dimension {fan_y.dim - 2}, got {len(tau)}")
    for c in (center, tau):
        if not fan_y.is_cone(c):
            raise ConeNotInFan(f"{list(c)} is not a cone of the fan")
    if set(center) & set(tau):
        raise NonTransverse(f"surface V({list(tau)}) meets the centre V({list(center)}) non-transversely")
    k = 1 if fan_y.is_cone(center + tau) else 0
    fan_x = star_subdivision(fan_y, center)
    return BlowupCheck(center, tau, k, ch2_dot_surface(fan_x, tau), ch2_dot_surface(fan_y, tau))


def blowup_configurations(fan_y: Fan) -> list[tuple[Cone, Cone]]:
    """All (center, tau) pairs with a 2-cone centre and an (n-2)-cone tau disjoint from it."""
    fs = faces(fan_y)
    return [(c, t) for c in fs.by_dim[2] for t in fs.by_dim[fan_y.dim - 2] if not set(c) & set(t)]
