"""Exhaustive counts for vertex/leaf-numbered planar trees and for iterated
composition products of small collections.

Writes ../fixtures/trees.json. Run from this directory:

    python3 trees.py
"""

import itertools
import json
import os
from math import factorial


def op_count(valences, n):
    """Number of pairwise non-isomorphic (T, sigma, tau): vertex i carries
    valence valences[i]; vertices are labeled, so an isomorphism preserving
    labels is the identity and structures are counted directly."""
    k = len(valences)
    if k == 0:
        return 1 if n == 1 else 0
    slots = [(v, s) for v in range(k) for s in range(valences[v])]
    total = 0
    for root in range(k):
        others = [v for v in range(k) if v != root]
        for chosen in itertools.permutations(slots, len(others)):
            parent = dict(zip(others, chosen))
            if not reaches_root(parent, root):
                continue
            leaves = len(slots) - len(others)
            if leaves == n:
                total += factorial(n)
    return total


def reaches_root(parent, root):
    for v in parent:
        seen = set()
        while v != root:
            if v in seen:
                return False
            seen.add(v)
            v = parent[v][0]
    return True


class Collection:
    def __init__(self, elems, act):
        self.elems = elems
        self.act = act


def word_collection(max_arity, min_arity):
    elems = {}
    for k in range(min_arity, max_arity + 1):
        elems[k] = [tuple(p) for p in itertools.permutations(range(k))]

    def act(w, sigma):
        inv = [0] * len(sigma)
        for i, s in enumerate(sigma):
            inv[s] = i
        return tuple(inv[a] for a in w)

    return Collection(elems, act)


def point_collection(max_arity, min_arity):
    return Collection({k: [("c", k)] for k in range(min_arity, max_arity + 1)}, lambda x, s: x)


def unit_collection():
    return Collection({1: [("1",)]}, lambda x, s: x)


def ordered_partitions(n, k, allow_empty):
    for assign in itertools.product(range(k), repeat=n):
        blocks = [tuple(i for i in range(n) if assign[i] == b) for b in range(k)]
        if not allow_empty and any(len(b) == 0 for b in blocks):
            continue
        yield blocks


def circle(m, nn, max_arity):
    elems = {}
    has_nullary = bool(nn.elems.get(0))

    def canon(root, blocks, inners):
        k = len(blocks)
        best = None
        for sigma in itertools.permutations(range(k)):
            cand = (m.act(root, sigma), tuple(blocks[s] for s in sigma), tuple(inners[s] for s in sigma))
            if best is None or cand < best:
                best = cand
        return best

    for n in range(max_arity + 1):
        found = set()
        for k, roots in m.elems.items():
            if not has_nullary and k > n:
                continue
            for blocks in ordered_partitions(n, k, has_nullary):
                choices = [nn.elems.get(len(b), []) for b in blocks]
                for root in roots:
                    for inners in itertools.product(*choices):
                        found.add(canon(root, blocks, inners))
        if found:
            elems[n] = sorted(found)

    def act(x, tau):
        root, blocks, inners = x
        inv = [0] * len(tau)
        for i, t in enumerate(tau):
            inv[t] = i
        new_blocks, new_inners = [], []
        for b, inner in zip(blocks, inners):
            moved = [inv[l] for l in b]
            order = sorted(range(len(b)), key=lambda r: moved[r])
            new_blocks.append(tuple(moved[r] for r in order))
            new_inners.append(nn.act(inner, order))
        return canon(root, new_blocks, new_inners)

    return Collection(elems, act)


def counts(c, max_arity):
    return {str(n): len(c.elems.get(n, [])) for n in range(max_arity + 1)}


def main():
    out = {"op": {}}
    for k in range(0, 4):
        for vals in itertools.product(range(0, 4), repeat=k):
            for n in range(0, 5):
                c = op_count(list(vals), n)
                if c:
                    out["op"][",".join(map(str, vals)) + ";" + str(n)] = c
    cap = 3
    as2 = word_collection(2, 1)
    com2 = point_collection(2, 1)
    unit = unit_collection()
    out["as2_circle_as2"] = counts(circle(as2, as2, cap), cap)
    out["com2_circle_com2"] = counts(circle(com2, com2, cap), cap)
    out["unit_circle_as2"] = counts(circle(unit, as2, cap), cap)
    # Bar levels B_n(P,P,P) = P^(n+2), truncated at arity 3.
    for name, p in (("as2", as2), ("unit", unit)):
        levels = []
        cur = p
        for n in range(0, 4):
            cur = circle(p, cur, cap)
            levels.append(counts(cur, cap))
        out["bar_" + name] = levels
    here = os.path.dirname(os.path.abspath(__file__))
    with open(os.path.join(here, "..", "fixtures", "trees.json"), "w") as fh:
        json.dump(out, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(json.dumps({k: v for k, v in out.items() if k != "op"}, sort_keys=True))
    print({k: out["op"][k] for k in ("2,2;3", "1;1", "3;3", "2;2", "0;0", "0,2;1", "2,0;1")})


if __name__ == "__main__":
    main()
