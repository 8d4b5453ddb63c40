"""Exhaustive search over generator-only attachments (test evidence only).

States are (faces, thin) pairs reachable from ``small`` by An1/An2 pushouts
that stay inside ``big``.  Returns whether ``big`` is reachable.
"""
from itertools import combinations

from scaledtw.anodyne import CertificateError, Step, apply_step


def generator_steps(size):
    out = []
    for n in range(2, size):
        for emb in combinations(range(size), n + 1):
            out += [Step("an1", emb, n=n, i=i) for i in range(1, n)]
    out += [Step("an2", emb) for emb in combinations(range(size), 5)]
    return out


def _no_ref(ref):
    raise CertificateError("no derived steps in search")


def reachable(small, big, max_states=5000):
    amb = big.ambient
    steps = generator_steps(amb.size)
    goal = (frozenset(big.faces), frozenset(big.thin))
    start = (frozenset(small.faces), frozenset(small.thin))
    if start == goal:
        return True
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for faces, thin in frontier:
            for st in steps:
                try:
                    f2, t2, _, _ = apply_step(amb, faces, thin, st, _no_ref)
                except CertificateError:
                    continue
                if not (f2 <= goal[0] and t2 <= goal[1]):
                    continue
                state = (frozenset(f2), frozenset(t2))
                if state == goal:
                    return True
                if state not in seen:
                    if len(seen) >= max_states:
                        raise RuntimeError("search budget exhausted")
                    seen.add(state)
                    nxt.append(state)
        frontier = nxt
    return False
