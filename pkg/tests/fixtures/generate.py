"""Regenerate the frozen oracle values: python3 tests/fixtures/generate.py"""

import itertools
import json
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, os.path.dirname(HERE))

from oracles import (cyclic_cohomology_orders, h1_order_brute, h2_order_brute,  # noqa: E402
                     twining_by_matrices, type_a_dimension)

CASES = [
    ("A2", 2, [1, 0], lambda a, b: (a, a)),
    ("A3", 3, [2, 1, 0], lambda a, b: (a, b, a)),
    ("A4", 4, [3, 2, 1, 0], lambda a, b: (a, b, b, a)),
]
MAX_DIM = 800


def twining_fixtures():
    out = []
    for name, n, perm, shape in CASES:
        for a, b in itertools.product(range(3), repeat=2):
            w = shape(a, b)
            if name == "A2" and b:
                continue
            if type_a_dimension_bound(n, w) > MAX_DIM:
                continue
            tw = twining_by_matrices(n, w, perm)
            out.append({"type": name, "perm": perm, "weight": list(w),
                        "dimension": type_a_dimension(n, w),
                        "terms": sorted([list(k), v] for k, v in tw.items())})
    return out


def type_a_dimension_bound(n, w):
    # Weyl dimension for SL(n+1), used only to skip oversized cases
    from fractions import Fraction
    num = Fraction(1)
    for i in range(n):
        for j in range(i, n):
            num *= Fraction(sum(w[i:j + 1]) + j - i + 1, j - i + 1)
    return int(num)


def cohomology_fixtures():
    z2 = [[0, 1], [1, 0]]
    z3 = [[(a + b) % 3 for b in range(3)] for a in range(3)]
    v4 = [[a ^ b for b in range(4)] for a in range(4)]
    out = []
    for name, table, factors, mats in [
        ("Z2 on Z/2", z2, [2], [[[1]], [[1]]]),
        ("Z2 on Z/4 sign", z2, [4], [[[1]], [[3]]]),
        ("Z3 on Z/3", z3, [3], [[[1]]] * 3),
        ("V4 on Z/2", v4, [2], [[[1]]] * 4),
        ("Z2 on Z/2+Z/2 swap", z2, [2, 2], [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]),
    ]:
        out.append({"name": name, "table": table, "factors": factors, "matrices": mats,
                    "h1": h1_order_brute(table, 0, factors, mats),
                    "h2": h2_order_brute(table, 0, factors, mats)})
    cyc = []
    for n, factors, g in [(2, [4], [[3]]), (3, [7], [[2]]), (4, [5], [[2]]), (6, [9], [[8]]),
                          (4, [2, 2], [[0, 1], [1, 0]]), (5, [11], [[3]])]:
        h1, h2 = cyclic_cohomology_orders(n, factors, g)
        cyc.append({"n": n, "factors": factors, "generator": g, "h1": h1, "h2": h2})
    return out, cyc


if __name__ == "__main__":
    brute, cyc = cohomology_fixtures()
    data = {"twining": twining_fixtures(), "cohomology_brute": brute, "cohomology_cyclic": cyc}
    with open(os.path.join(HERE, "oracle_values.json"), "w") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(len(data["twining"]), "twining cases")
