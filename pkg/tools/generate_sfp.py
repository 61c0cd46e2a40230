"""Enumerate smooth Fano polytopes of a given dimension and write a vertex-block file.

This is a development tool used to produce the bundled database files under
``src/toricpc/data``. It is deliberately independent of the ``toricpc``
package: it shares no code with the fan, facet or primitive-collection logic
that the test-suite checks against these files.

Method
------
Every smooth Fano polytope P has a *special* facet F, one whose cone contains
the sum of all vertices of P. After a unimodular change of basis F is the
standard simplex conv(e_1, ..., e_d) and, writing level(v) = v_1 + ... + v_d,

* every vertex off F has level in [-d, 0], and the levels sum to >= -d;
* every coordinate of every vertex is >= level(v) - 1 (apply the facet
  inequality of each facet adjacent to F).

So the vertices lie in a finite candidate set. Starting from F we grow the
boundary complex ridge by ridge: across an open ridge R of a facet R+{p} the
neighbouring vertex w must have coefficient -1 on p in that facet's basis
(unimodularity and opposite side), and every facet hyperplane must keep every
other vertex strictly below level 1. A closed complex that satisfies all these
inequalities is the boundary of the convex hull of its vertices. Results are
deduplicated with a normal form (minimum over facets and vertex orderings of
the sorted vertex list in facet coordinates).

Usage::

    python tools/generate_sfp.py 4 > src/toricpc/data/sfp4.txt
"""

import argparse
import itertools
import math
import sys
import time

import numpy as np


def compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def candidate_vertices(d):
    out = []
    for level in range(0, -d - 1, -1):
        lo = level - 1
        for comp in compositions(level - d * lo, d):
            v = tuple(c + lo for c in comp)
            if not any(v):
                continue
            if math.gcd(*v) != 1:
                continue
            out.append(v)
    return out


def int_inverse(rows):
    """Inverse of a unimodular integer matrix (rows), or None if |det| != 1."""
    m = np.array(rows, dtype=object)
    d = len(rows)
    aug = [list(m[i]) + [1 if i == j else 0 for j in range(d)] for i in range(d)]
    from fractions import Fraction

    aug = [[Fraction(x) for x in row] for row in aug]
    det = Fraction(1)
    for c in range(d):
        piv = next((r for r in range(c, d) if aug[r][c] != 0), None)
        if piv is None:
            return None
        if piv != c:
            aug[c], aug[piv] = aug[piv], aug[c]
            det = -det
        pv = aug[c][c]
        det *= pv
        aug[c] = [x / pv for x in aug[c]]
        for r in range(d):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    if abs(det) != 1:
        return None
    inv = [[int(x) for x in row[d:]] for row in aug]
    return inv


class Search:
    def __init__(self, d, max_vertices=None):
        self.d = d
        self.max_vertices = max_vertices or 3 * d
        self.pool = np.array(candidate_vertices(d), dtype=np.int64)
        self.pool_levels = self.pool.sum(axis=1)
        self.found = []
        self.leaves = 0

    def run(self):
        d = self.d
        verts = [tuple(1 if i == j else 0 for j in range(d)) for i in range(d)]
        f0 = tuple(range(d))
        inv = [list(r) for r in np.eye(d, dtype=np.int64)]
        alive = self.pool_levels <= 0
        # facet F0 normal is (1,...,1): off-facet vertices need level <= 0
        facets = {f0: ((1,) * d, inv)}
        ridges = {}
        for r in itertools.combinations(f0, d - 1):
            ridges[r] = 1
        self._dfs(verts, facets, ridges, alive, 0)

    def _dfs(self, verts, facets, ridges, alive, level_sum):
        open_ridges = [r for r, c in ridges.items() if c == 1]
        if not open_ridges:
            self.leaves += 1
            total = np.array(verts, dtype=np.int64).sum(axis=0)
            if (total >= 0).all():
                self.found.append(list(verts))
            return
        # most constrained ridge first
        best = None
        for ridge in open_ridges:
            opts = self._options(ridge, verts, facets, ridges, alive, level_sum)
            if best is None or len(opts) < len(best[1]):
                best = (ridge, opts)
                if not opts:
                    return
        ridge, opts = best
        for w, is_new, normal, inv in opts:
            if is_new:
                new_verts = verts + [w]
                widx = len(verts)
                new_level = level_sum + sum(w)
            else:
                new_verts = verts
                widx = w
                new_level = level_sum
            g = tuple(sorted(ridge + (widx,)))
            new_facets = dict(facets)
            new_facets[g] = (normal, inv)
            new_ridges = dict(ridges)
            for r in itertools.combinations(g, self.d - 1):
                new_ridges[r] = new_ridges.get(r, 0) + 1
            new_alive = alive & (self.pool @ np.array(normal, dtype=np.int64) <= 0)
            if is_new:
                new_alive = new_alive & ~(self.pool == np.array(w)).all(axis=1)
            self._dfs(new_verts, new_facets, new_ridges, new_alive, new_level)

    def _options(self, ridge, verts, facets, ridges, alive, level_sum):
        d = self.d
        facet = next(f for f in facets if set(ridge) <= set(f) and ridges[ridge] == 1)
        p = next(i for i in facet if i not in ridge)
        _, inv = facets[facet]
        # coefficients of w in the facet basis are w @ inv; take the p column
        j = facet.index(p)
        mp = [inv[r][j] for r in range(d)]
        opts = []

        def facet_ok(wvec, widx):
            g_idx = tuple(sorted(ridge + (widx,)))
            if g_idx in facets:
                return None
            for r in itertools.combinations(g_idx, d - 1):
                if r != ridge and ridges.get(r, 0) >= 2:
                    return None
            rows = [verts[i] if i != widx else wvec for i in g_idx]
            inv_g = int_inverse(rows)
            if inv_g is None:
                return None
            normal = tuple(sum(inv_g[r][c] for c in range(d)) for r in range(d))
            # normal u solves rows @ u = 1, so u = inv @ 1 with inv = rows^-1
            for i, v in enumerate(verts):
                if i in g_idx:
                    continue
                if sum(a * b for a, b in zip(normal, v)) > 0:
                    return None
            return normal, inv_g

        for widx, wvec in enumerate(verts):
            if widx in facet:
                continue
            if sum(a * b for a, b in zip(mp, wvec)) != -1:
                continue
            res = facet_ok(wvec, widx)
            if res is not None:
                opts.append((widx, False, res[0], res[1]))
        if len(verts) < self.max_vertices:
            mask = alive & (self.pool @ np.array(mp, dtype=np.int64) == -1)
            mask &= self.pool_levels + level_sum >= -d
            for row in np.nonzero(mask)[0]:
                wvec = tuple(int(x) for x in self.pool[row])
                res = facet_ok(wvec, len(verts))
                if res is not None:
                    opts.append((wvec, True, res[0], res[1]))
        return opts


def facets_of(verts):
    """Facets (as index tuples) of a simplicial polytope with 0 in its interior."""
    d = len(verts[0])
    out = []
    for combo in itertools.combinations(range(len(verts)), d):
        inv = int_inverse([verts[i] for i in combo])
        if inv is None:
            continue
        normal = [sum(inv[r][c] for c in range(d)) for r in range(d)]
        if all(
            sum(a * b for a, b in zip(normal, verts[i])) <= 0
            for i in range(len(verts))
            if i not in combo
        ):
            out.append((combo, inv))
    return out


def normal_form(verts):
    d = len(verts[0])
    arr = np.array(verts, dtype=np.int64)
    best = None
    for _, inv in facets_of(verts):
        coords = arr @ np.array(inv, dtype=np.int64)
        # coords[i] = coordinates of vertex i in the facet basis
        for perm in itertools.permutations(range(d)):
            key = tuple(sorted(map(tuple, coords[:, perm].tolist())))
            if best is None or key < best:
                best = key
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("dim", type=int)
    args = ap.parse_args(argv)
    t0 = time.time()
    search = Search(args.dim)
    search.run()
    classes = {}
    for verts in search.found:
        nf = normal_form(verts)
        classes.setdefault(nf, verts)
    keys = sorted(classes, key=lambda k: (len(k), k))
    print(
        f"# smooth Fano polytopes, dim {args.dim}: {len(keys)} classes "
        f"({search.leaves} closed complexes, {len(search.found)} embeddings, "
        f"{time.time() - t0:.1f}s)",
        file=sys.stderr,
    )
    out = [f"# smooth Fano {args.dim}-polytopes, {len(keys)} isomorphism classes"]
    for n, key in enumerate(keys, 1):
        out.append("")
        out.append(f"# id {n}")
        out.append(f"{args.dim} {len(key)}")
        for v in key:
            out.append(" ".join(str(x) for x in v))
    print("\n".join(out))


if __name__ == "__main__":
    main()
