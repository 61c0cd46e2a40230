"""Walk through the fans with m = n - 2 in dimension 6.

For each construction print its Picard rank, the centrally symmetric
collections, the bundle structure they induce and the 2-Fano verdict.

    python3 demos/classification_tour.py
"""

from toricpc.bundle import CLASSIFIED_FAMILIES, bundle_structure, classification_family
from toricpc.chow import two_fano_invariant_test
from toricpc.mori import picard_rank
from toricpc.primcoll import centrally_symmetric_collections, minimal_p_dimension

N = 6

for name in CLASSIFIED_FAMILIES:
    x = classification_family(name, N)
    print(f"{x.name}: {x.nrays} rays, rho = {picard_rank(x)}, m = {minimal_p_dimension(x)}")
    for r in centrally_symmetric_collections(x):
        b = bundle_structure(x, r.collection)
        kind = "global" if b.is_global else f"off {len(b.exceptional_cones)} exceptional cone(s)"
        print(f"  order {r.order}: P^{b.fiber_dim}-bundle over a {b.base.dim}-dimensional base, {kind}")
    v = two_fano_invariant_test(x)
    print(f"  2-Fano: {'passes' if v.passes else 'fails'}", end="")
    if v.witness is not None:
        print(f", ch2 . V({list(v.witness)}) = {v.witness_value}", end="")
    print()
