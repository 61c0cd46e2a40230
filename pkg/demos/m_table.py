"""Tabulate the minimal P-dimension over the bundled smooth Fano lists.

    python3 demos/m_table.py
"""

import time

from toricpc.io import bundled_database, load_polytope_db, tabulate_m

for dim in (2, 3, 4):
    t0 = time.perf_counter()
    load = load_polytope_db(bundled_database(dim))
    table = tabulate_m(load.fans, rejected=len(load.errors))
    print(table.text(), end="")
    print(f"({time.perf_counter() - t0:.1f} s)\n")
