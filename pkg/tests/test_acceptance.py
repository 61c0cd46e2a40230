"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline, or
``python3 tests/test_acceptance.py`` for a plain report.
"""

import os
import random
import sys
import time
import warnings
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import naive_primitive_collections, p1p1p1, random_fan  # noqa: E402
from toricpc.bundle import CLASSIFIED_FAMILIES, classification_family, exceptional_set  # noqa: E402
from toricpc.chow import blowup_configurations, ch2_blowup_check, intersection_number, two_fano_invariant_test  # noqa: E402
from toricpc.fan import canonical_form, faces, projective_space, star_subdivision  # noqa: E402
from toricpc.io import bundled_database, load_polytope_db, tabulate_m  # noqa: E402
from toricpc.mori import blowdown, contractible_relations, is_fano, picard_rank, reduce_order2  # noqa: E402
from toricpc.primcoll import (  # noqa: E402
    centrally_symmetric_collections,
    minimal_p_dimension,
    primitive_collections,
    primitive_relation,
)

# an external dimension-4 list can be supplied instead of the bundled one
DB4 = os.environ.get("TORICPC_SFP4")


@contextmanager
def criterion(label):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        _report("FAIL", label, time.perf_counter() - t0)
        raise
    _report("PASS", label, time.perf_counter() - t0)


def _report(status, label, seconds):
    sys.__stdout__.write(f"\n[{status}] {label} ({seconds:.2f} s)\n")
    sys.__stdout__.flush()


def _m(fan):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return minimal_p_dimension(fan)


def _db(dim):
    return load_polytope_db(DB4 if (dim == 4 and DB4) else bundled_database(dim))


def test_c1_m_table_dimension_4():
    with criterion("1: dim-4 database gives 124 fans with m = 107/15/1/1 in under 60 s"):
        t0 = time.perf_counter()
        load = _db(4)
        table = tabulate_m(load.fans, rejected=len(load.errors))
        elapsed = time.perf_counter() - t0
        assert table.total == 124 and not load.errors
        assert table.counts == {1: 107, 2: 15, 3: 1, 4: 1}
        assert elapsed < 60
        # the dimension-3 list: 18 classes, only P^3 has m = 3
        t3 = tabulate_m(_db(3).fans)
        assert t3.total == 18 and t3.counts.get(3) == 1
        (p3,) = [f for f in _db(3) if _m(f) == 3]
        assert canonical_form(p3) == canonical_form(projective_space(3))


def test_c2_primitive_collection_totals():
    with criterion("2: dim-4 database has 785 primitive collections, 566 of size 2"):
        fans = _db(4).fans
        pcs = [p for f in fans for p in primitive_collections(f)]
        assert len(pcs) == 785
        assert sum(1 for p in pcs if len(p) == 2) == 566


def test_c3_classification_fingerprints():
    with criterion("3: eight n=6 families are Fano with m = 4, expected rho, distinct, under 10 s"):
        t0 = time.perf_counter()
        forms = set()
        for name in CLASSIFIED_FAMILIES:
            x = classification_family(name, 6)
            assert is_fano(x), name
            assert _m(x) == 4, name
            assert picard_rank(x) == (2 if name.startswith("P2-") else 3), name
            forms.add(canonical_form(x))
        assert len(forms) == 8
        assert time.perf_counter() - t0 < 10


def test_c4_large_m():
    with criterion("4: m = n-1 for the blowup along P^(n-2) (n = 3, 4, 5), m = n for P^n (n <= 6)"):
        for n in (3, 4, 5):
            assert _m(classification_family("blP^{n-2}", n)) == n - 1
        for n in range(1, 7):
            assert _m(projective_space(n)) == n


def test_c5_two_fano_verdicts():
    with criterion("5: P^n passes 2-Fano with ch2.V(tau) = (n+1)/2; families and blowups fail with witnesses"):
        for n in range(2, 6):
            v = two_fano_invariant_test(projective_space(n))
            assert v.passes
            assert set(v.values.values()) == {Fraction(n + 1, 2)}
        failing = [classification_family(name, 6) for name in CLASSIFIED_FAMILIES]
        failing += [classification_family("blP^{n-2}", n) for n in (4, 5)]
        for x in failing:
            v = two_fano_invariant_test(x)
            assert not v.passes and v.witness is not None, x.name
            assert len(v.witness) == x.dim - 2 and v.values[v.witness] <= 0
            assert isinstance(v.values[v.witness], Fraction)


def test_c6_oracle_equivalences():
    with criterion("6: naive PCs on 200 fans, Sato prediction, 100 intersection queries, blowdown o star = id"):
        # (a) and (d) on 200 seeded random fans
        blowdowns = 0
        for seed in range(200):
            rng = random.Random(seed)
            fan = random_fan(rng, max_rays=12)
            assert fan.nrays <= 12
            assert primitive_collections(fan) == naive_primitive_collections(fan), seed
            k = rng.randint(2, fan.dim)
            tau = rng.choice(faces(fan).by_dim[k])
            bl = star_subdivision(fan, tau)
            if bl.nrays <= 12:
                res = blowdown(bl, primitive_relation(bl, tau))
                assert res.target == fan.with_name(None), seed
                assert res.predicted_pcs == primitive_collections(res.target)
                blowdowns += 1
        # (b) every contractible relation of the database fans
        for d in (3, 4):
            for fan in _db(d):
                for r in contractible_relations(fan):
                    res = blowdown(fan, r)
                    assert res.predicted_pcs == primitive_collections(res.target), fan.name
                    blowdowns += 1
        assert blowdowns >= 200
        # (c) order and dual choice
        fans = [projective_space(3), p1p1p1(), classification_family("blP^{n-2}", 3),
                classification_family("blP^{n-2}", 4), star_subdivision(p1p1p1(), (0, 2))]
        rng = random.Random(2024)
        for _ in range(100):
            fan = rng.choice(fans)
            k = rng.randint(0, fan.dim - 1)
            tau = rng.choice(faces(fan).by_dim[k])
            divs = [rng.randrange(fan.nrays) for _ in range(fan.dim - k)]
            base = intersection_number(fan, divs, tau)
            perm = divs[:]
            rng.shuffle(perm)
            assert intersection_number(fan, perm, tau, rng=random.Random(rng.random())) == base


def test_c7_ch2_blowup_identity():
    with criterion("7: ch2 blowup identity on at least 20 configurations over P^3, P^4 and Y"):
        y = star_subdivision(projective_space(6), (0, 1, 2))
        counts = {}
        for label, fan in (("P3", projective_space(3)), ("P4", projective_space(4)), ("Y", y)):
            configs = blowup_configurations(fan)
            if label == "Y":
                # centres (x0, z) yield the blown up families of rank three
                z = y.nrays - 1
                configs = [(c, t) for c, t in configs if z in c] + configs[:20]
            done = 0
            for c, t in configs:
                r = ch2_blowup_check(fan, c, t)
                assert r.holds, (label, c, t)
                assert r.ch2_x == r.ch2_y - Fraction(3, 2) * r.k
                done += 1
            counts[label] = done
        assert all(counts.values()) and sum(counts.values()) >= 20


def test_c8_order_two_reduction():
    with criterion("8: reduce_order2 needs at most 2 blowdowns on every m=1 Fano fan in dimension 3"):
        seen = 0
        for fan in _db(3):
            if _m(fan) != 1 or not is_fano(fan):
                continue
            for r in centrally_symmetric_collections(fan):
                if r.order != 2:
                    continue
                res = reduce_order2(fan, r.collection)
                assert len(res.steps) <= 2
                assert all(len(c) >= 2 for c in exceptional_set(res.fan, res.collection))
                seen += 1
        assert seen > 0


def test_spot_m1_fans_are_not_two_fano():
    with criterion("spot check: every m=1 fan in the bundled lists fails 2-Fano"):
        for d in (2, 3, 4):
            for fan in _db(d):
                if _m(fan) == 1:
                    assert not two_fano_invariant_test(fan).passes, fan.name


def test_spot_rank_bound_for_order_n_minus_1():
    with criterion("spot check: constructed n=6 fans with a symmetric collection of order 5 have rho <= 3"):
        # the eight families are exactly the constructions with such a collection
        fans = [classification_family(name, 6) for name in CLASSIFIED_FAMILIES]
        checked = 0
        for x in fans:
            if any(r.order == 5 for r in centrally_symmetric_collections(x)):
                assert picard_rank(x) <= 3
                checked += 1
        assert checked == len(fans)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
