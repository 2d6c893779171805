"""Brute-force census of small monoid structures and homomorphisms.

Writes ../fixtures/census.json. Run from this directory:

    python3 census.py
"""

import itertools
import json
import os


def monoids(k, commutative):
    elems = range(k)
    found = []
    for table in itertools.product(elems, repeat=k * k):
        mul = lambda a, b: table[a * k + b]
        if commutative and any(mul(a, b) != mul(b, a) for a in elems for b in elems):
            continue
        if any(mul(mul(a, b), c) != mul(a, mul(b, c)) for a in elems for b in elems for c in elems):
            continue
        for e in elems:
            if all(mul(e, a) == a and mul(a, e) == a for a in elems):
                found.append((e, table))
    return found


def homs(src, dst, ka, kb):
    (e0, t0), (e1, t1) = src, dst
    out = []
    for f in itertools.product(range(kb), repeat=ka):
        if f[e0] != e1:
            continue
        if all(f[t0[a * ka + b]] == t1[f[a] * kb + f[b]] for a in range(ka) for b in range(ka)):
            out.append(f)
    return out


def main():
    census = {}
    for kind, comm in (("monoids", False), ("commutative_monoids", True)):
        census[kind] = {str(k): len(monoids(k, comm)) for k in (1, 2, 3)}
    ms = monoids(2, False)
    census["monoid_homs_2_2"] = sum(len(homs(a, b, 2, 2)) for a in ms for b in ms)
    strings = 0
    for a in ms:
        for b in ms:
            for c in ms:
                strings += len(homs(a, b, 2, 2)) * len(homs(b, c, 2, 2))
    census["monoid_hom_strings_2_2_2"] = strings
    cms = monoids(2, True)
    census["commutative_monoid_homs_2_2"] = sum(len(homs(a, b, 2, 2)) for a in cms for b in cms)
    census["functions_2_2"] = 4
    census["function_strings_2_2_2"] = 16
    here = os.path.dirname(os.path.abspath(__file__))
    with open(os.path.join(here, "..", "fixtures", "census.json"), "w") as fh:
        json.dump(census, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(json.dumps(census, sort_keys=True))


if __name__ == "__main__":
    main()
