"""Twisted-arrow simplices of nerves of finite categories.

A level-n simplex of the Q-model is a functor from the linear order tw(n)
into C, stored as its spine: the 2n+1 consecutive morphisms.  A T-model
simplex labels the vertices and edges of Ω^n so that every triangle of Ω^n
commutes.  Restricting a Q-simplex to Ω^n gives the comparison map.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .complex import bits
from .constructions import codegeneracy, coface, omega_full, tw_vertex_map

MAX_OBJECTS = 12
MAX_MORPHISMS = 64


class CategoryError(ValueError):
    def __init__(self, msg: str, lineno: int | None = None):
        super().__init__(msg if lineno is None else f"line {lineno}: {msg}")
        self.lineno = lineno


class FiniteCategory:
    """Objects, named morphisms and a total composition table.

    ``comp[(g, f)]`` is g ∘ f, defined whenever target(f) = source(g).
    Identities are named ``id_<object>``.
    """

    def __init__(self, name: str, objects: Sequence[str], morphisms: dict[str, tuple[str, str]],
                 comp: dict[tuple[str, str], str], lines: dict | None = None):
        self.name = name
        self.objects = tuple(objects)
        if len(self.objects) > MAX_OBJECTS:
            raise CategoryError(f"more than {MAX_OBJECTS} objects")
        if len(set(self.objects)) != len(self.objects):
            raise CategoryError("duplicate object")
        lines = lines or {}
        self.ident = {x: f"id_{x}" for x in self.objects}
        mors: dict[str, tuple[str, str]] = {self.ident[x]: (x, x) for x in self.objects}
        for m, (s, t) in morphisms.items():
            if m in mors:
                raise CategoryError(f"duplicate morphism {m!r}", lines.get(("mor", m)))
            for o in (s, t):
                if o not in self.objects:
                    raise CategoryError(f"unknown object {o!r}", lines.get(("mor", m)))
            mors[m] = (s, t)
        if len(mors) > MAX_MORPHISMS:
            raise CategoryError(f"more than {MAX_MORPHISMS} morphisms")
        self.mor = mors
        table = {}
        for (g, f), h in comp.items():
            ln = lines.get(("comp", g, f))
            for m in (g, f, h):
                if m not in mors:
                    raise CategoryError(f"unknown morphism {m!r}", ln)
            if mors[f][1] != mors[g][0]:
                raise CategoryError(f"{g} ∘ {f} is not composable", ln)
            if mors[h] != (mors[f][0], mors[g][1]):
                raise CategoryError(f"{h} has the wrong source or target for {g} ∘ {f}", ln)
            if (g, f) in table and table[(g, f)] != h:
                raise CategoryError(f"conflicting composite for {g} ∘ {f}", ln)
            table[(g, f)] = h
        for m, (s, t) in mors.items():
            for key, val in (((m, self.ident[s]), m), ((self.ident[t], m), m)):
                if table.setdefault(key, val) != val:
                    raise CategoryError(f"identity law fails for {m}", lines.get(("comp",) + key))
        for f, (s, t) in mors.items():
            for g, (s2, t2) in mors.items():
                if s2 == t and (g, f) not in table:
                    ln = max(lines.get(("mor", f), 0), lines.get(("mor", g), 0)) or None
                    raise CategoryError(f"composition is not total: {g} ∘ {f} undefined", ln)
        self.comp = table
        self.hom: dict[tuple[str, str], tuple[str, ...]] = {}
        for m, st in sorted(mors.items()):
            self.hom.setdefault(st, ())
            self.hom[st] = self.hom[st] + (m,)
        for f, (a, b) in mors.items():
            for g, (b2, c) in mors.items():
                if b2 != b:
                    continue
                for h, (c2, d) in mors.items():
                    if c2 != c:
                        continue
                    if table[(h, table[(g, f)])] != table[(table[(h, g)], f)]:
                        ln = lines.get(("comp", g, f)) or lines.get(("comp", h, g))
                        raise CategoryError(f"associativity fails for {h}, {g}, {f}", ln)

    def homs(self, a: str, b: str) -> tuple[str, ...]:
        return self.hom.get((a, b), ())

    def src(self, m: str) -> str:
        return self.mor[m][0]

    def dst(self, m: str) -> str:
        return self.mor[m][1]

    def compose(self, g: str, f: str) -> str:
        return self.comp[(g, f)]

    def compose_path(self, path: Sequence[str], start: str) -> str:
        """Composite of a string of morphisms (first applied first); identity if empty."""
        out = self.ident[start]
        for m in path:
            out = self.comp[(m, out)]
        return out

    def __repr__(self):
        return f"FiniteCategory({self.name}, objects={len(self.objects)}, morphisms={len(self.mor)})"


def parse_category(text: str, name: str = "category") -> FiniteCategory:
    objects: list[str] = []
    mors: dict[str, tuple[str, str]] = {}
    comp: dict[tuple[str, str], str] = {}
    lines: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0]
        if head == "obj":
            if len(toks) != 2:
                raise CategoryError("expected 'obj <name>'", lineno)
            if toks[1] in objects:
                raise CategoryError(f"duplicate object {toks[1]!r}", lineno)
            objects.append(toks[1])
        elif head == "mor":
            rest = line[3:].strip()
            nm, sep, arrow = rest.partition(":")
            src, sep2, dst = arrow.partition("->")
            nm, src, dst = nm.strip(), src.strip(), dst.strip()
            if not sep or not sep2 or not nm or not src or not dst or " " in nm:
                raise CategoryError("expected 'mor <name>: <src> -> <dst>'", lineno)
            if nm in mors or nm.startswith("id_"):
                raise CategoryError(f"duplicate or reserved morphism name {nm!r}", lineno)
            mors[nm] = (src, dst)
            lines[("mor", nm)] = lineno
        elif head == "comp":
            if len(toks) != 5 or toks[3] != "=":
                raise CategoryError("expected 'comp <g> <f> = <h>'", lineno)
            g, f, h = toks[1], toks[2], toks[4]
            if (g, f) in comp and comp[(g, f)] != h:
                raise CategoryError(f"conflicting composite for {g} ∘ {f}", lineno)
            comp[(g, f)] = h
            lines[("comp", g, f)] = lineno
        else:
            raise CategoryError(f"unknown record {head!r}", lineno)
    if not objects:
        raise CategoryError("no objects declared")
    return FiniteCategory(name, objects, mors, comp, lines)


def poset_category(name: str, elements: Sequence[str], less: Iterable[tuple[str, str]]) -> FiniteCategory:
    """The category of a finite poset given by generating relations."""
    rel = {(a, b) for a, b in less}
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for c, d in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    mors = {f"{a}<{b}": (a, b) for a, b in sorted(rel)}
    comp = {}
    for a, b in rel:
        for c, d in rel:
            if b == c:
                comp[(f"{c}<{d}", f"{a}<{b}")] = f"{a}<{d}"
    return FiniteCategory(name, elements, mors, comp)


def linear_order(k: int) -> FiniteCategory:
    els = [str(i) for i in range(k + 1)]
    return poset_category(f"[{k}]", els, [(els[i], els[i + 1]) for i in range(k)])


CATALOG_TEXT = {
    "terminal": "obj *\n",
    "commutative-square": (
        "obj a\nobj b\nobj c\nobj d\n"
        "mor f: a -> b\nmor g: a -> c\nmor h: b -> d\nmor k: c -> d\nmor e: a -> d\n"
        "comp h f = e\ncomp k g = e\n"
    ),
    "parallel-pair": "obj x\nobj y\nmor f: x -> y\nmor g: x -> y\n",
}


def catalog() -> list[FiniteCategory]:
    out = [parse_category(CATALOG_TEXT["terminal"], "terminal"), linear_order(1), linear_order(2),
           parse_category(CATALOG_TEXT["commutative-square"], "commutative-square"),
           parse_category(CATALOG_TEXT["parallel-pair"], "parallel-pair"),
           poset_category("bowtie", ["a", "b", "c", "d", "e"],
                          [("a", "c"), ("b", "c"), ("c", "d"), ("c", "e")])]
    return out


# --------------------------------------------------------------------------
# Q-model: composable strings along tw(n)

def composable_strings(C: FiniteCategory, length: int) -> list[tuple[str, ...]]:
    if length == 0:
        return [(C.ident[x],) for x in C.objects]
    out: list[tuple[str, ...]] = []

    def extend(prefix: tuple[str, ...]):
        if len(prefix) == length:
            out.append(prefix)
            return
        end = C.dst(prefix[-1])
        for m in sorted(C.mor):
            if C.src(m) == end:
                extend(prefix + (m,))

    for m in sorted(C.mor):
        extend((m,))
    return out


@dataclass(frozen=True)
class TwModelLevel:
    model: str
    n: int
    simplices: frozenset

    def __len__(self):
        return len(self.simplices)


def q_level(C: FiniteCategory, n: int) -> TwModelLevel:
    return TwModelLevel("Q", n, frozenset(composable_strings(C, 2 * n + 1)))


@lru_cache(maxsize=None)
def omega_edges(n: int) -> tuple[tuple[tuple[int, int], ...], tuple[tuple[int, int, int], ...]]:
    """Edges (spine first, then by gap) and triangles of Ω^n, as position tuples."""
    k = omega_full(n)
    edges = [tuple(bits(f)) for f in k.faces_of_dim(1)]
    edges.sort(key=lambda e: (e[1] - e[0], e))
    tris = sorted(tuple(bits(f)) for f in k.faces_of_dim(2))
    return tuple(edges), tuple(tris)


def t_level(C: FiniteCategory, n: int) -> TwModelLevel:
    """All labelings of the edges of Ω^n commuting on every triangle."""
    edges, tris = omega_edges(n)
    size = 2 * n + 2
    by_edge: dict[tuple[int, int], list[tuple[int, int, int]]] = {}
    for t in tris:
        a, b, c = t
        for e in ((a, b), (b, c), (a, c)):
            by_edge.setdefault(e, []).append(t)
    spine_count = size - 1
    out = set()
    label: dict[tuple[int, int], str] = {}

    def consistent(e) -> bool:
        for a, b, c in by_edge.get(e, ()):
            ab, bc, ac = label.get((a, b)), label.get((b, c)), label.get((a, c))
            if ab is not None and bc is not None and ac is not None:
                if C.compose(bc, ab) != ac:
                    return False
        return True

    def rec(idx: int):
        if idx == len(edges):
            out.add(tuple(label[e] for e in edges))
            return
        e = edges[idx]
        a, c = e
        if idx < spine_count:
            if idx == 0:
                cands = sorted(C.mor)
            else:
                prev = label[edges[idx - 1]]
                cands = [m for m in sorted(C.mor) if C.src(m) == C.dst(prev)]
        else:
            src = C.src(label[(a, a + 1)])
            dst = C.dst(label[(c - 1, c)])
            cands = list(C.homs(src, dst))
        for m in cands:
            label[e] = m
            if consistent(e):
                rec(idx + 1)
            del label[e]

    if size == 2:
        # Ω^0 is the single edge 00 -> 10
        return TwModelLevel("T", n, frozenset((m,) for m in C.mor))
    rec(0)
    return TwModelLevel("T", n, frozenset(out))


def tw_model(C: FiniteCategory, model: str, n: int) -> TwModelLevel:
    if model == "Q":
        return q_level(C, n)
    if model == "T":
        return t_level(C, n)
    raise ValueError(f"unknown model {model!r}")


def restrict(C: FiniteCategory, n: int, spine: Sequence[str]) -> tuple[str, ...]:
    """Q-simplex (spine string) to the labeling of the edges of Ω^n."""
    edges, _ = omega_edges(n)
    out = []
    for a, c in edges:
        out.append(C.compose_path(spine[a:c], C.src(spine[a])))
    return tuple(out)


# --------------------------------------------------------------------------
# classical twisted arrows: functors out of the poset [n] ⋆ [n]^op

def functors_from_linear(C: FiniteCategory, size: int) -> set[tuple[str, ...]]:
    """Functors from the linear order on ``size`` elements, as all-pairs labelings.

    Every comparable pair (i < j) gets a morphism; composites must agree.
    Returned in spine form for comparison.
    """
    pairs = [(i, j) for j in range(size) for i in range(j)]
    pairs.sort(key=lambda p: (p[1] - p[0], p))
    lab: dict[tuple[int, int], str] = {}
    obj: dict[int, str] = {}
    out: set[tuple[str, ...]] = set()

    def ok(i, j) -> bool:
        for k in range(size):
            if i < k < j:
                if (i, k) in lab and (k, j) in lab and C.compose(lab[(k, j)], lab[(i, k)]) != lab[(i, j)]:
                    return False
            if k > j and (j, k) in lab and (i, k) in lab:
                if C.compose(lab[(j, k)], lab[(i, j)]) != lab[(i, k)]:
                    return False
            if k < i and (k, i) in lab and (k, j) in lab:
                if C.compose(lab[(i, j)], lab[(k, i)]) != lab[(k, j)]:
                    return False
        return True

    def rec(idx: int):
        if idx == len(pairs):
            out.add(tuple(lab[(i, i + 1)] for i in range(size - 1)))
            return
        i, j = pairs[idx]
        for m in sorted(C.mor):
            s, t = C.mor[m]
            if obj.get(i, s) != s or obj.get(j, t) != t:
                continue
            new = [v for v, o in ((i, s), (j, t)) if v not in obj]
            for v, o in ((i, s), (j, t)):
                obj[v] = o
            lab[(i, j)] = m
            if ok(i, j):
                rec(idx + 1)
            del lab[(i, j)]
            for v in new:
                del obj[v]

    if size == 1:
        return {(C.ident[x],) for x in C.objects}
    rec(0)
    return out


def classical_tw(C: FiniteCategory, n: int) -> frozenset:
    return frozenset(functors_from_linear(C, 2 * n + 2))


# --------------------------------------------------------------------------
# operators

def q_act(C: FiniteCategory, alpha: Sequence[int], n: int, spine: Sequence[str]) -> tuple[str, ...]:
    """Pull a level-n Q-simplex back along alpha : [m] -> [n]."""
    table = tw_vertex_map(alpha, n).table
    start = C.src(spine[0])
    objs = [start] + [C.dst(m) for m in spine]
    out = []
    for p in range(len(table) - 1):
        a, b = table[p], table[p + 1]
        out.append(C.compose_path(spine[a:b], objs[a]))
    return tuple(out)


def t_act(C: FiniteCategory, alpha: Sequence[int], n: int, lab: Sequence[str]) -> tuple[str, ...]:
    m = len(alpha) - 1
    table = tw_vertex_map(alpha, n).table
    edges_n, _ = omega_edges(n)
    index = {e: k for k, e in enumerate(edges_n)}
    objs: dict[int, str] = {}
    for (a, c), f in zip(edges_n, lab):
        objs[a] = C.src(f)
        objs[c] = C.dst(f)
    edges_m, _ = omega_edges(m)
    out = []
    for a, c in edges_m:
        x, y = table[a], table[c]
        out.append(C.ident[objs[x]] if x == y else lab[index[(x, y)]])
    return tuple(out)


def endpoints_q(C: FiniteCategory, n: int, spine: Sequence[str]) -> tuple[tuple, tuple]:
    """Row restrictions: an n-simplex of N(C) and one of N(C^op)."""
    return tuple(spine[:n]), tuple(spine[n + 1:])


def endpoints_t(C: FiniteCategory, n: int, lab: Sequence[str]) -> tuple[tuple, tuple]:
    edges, _ = omega_edges(n)
    index = {e: k for k, e in enumerate(edges)}
    size = 2 * n + 2
    row0 = tuple(lab[index[(p, p + 1)]] for p in range(n))
    row1 = tuple(lab[index[(p, p + 1)]] for p in range(n + 1, size - 1))
    return row0, row1


@dataclass
class ModelReport:
    category: str
    passed: bool
    counts: tuple[int, ...] = ()
    detail: str = ""
    checks: list[str] = field(default_factory=list)


def compare_models(C: FiniteCategory, n_max: int) -> ModelReport:
    q = {n: q_level(C, n) for n in range(n_max + 1)}
    t = {n: t_level(C, n) for n in range(n_max + 1)}
    counts = tuple(len(q[n]) for n in range(n_max + 1))
    rep = ModelReport(C.name, True, counts)

    def fail(msg: str) -> ModelReport:
        rep.passed = False
        rep.detail = msg
        return rep

    for n in range(n_max + 1):
        cl = classical_tw(C, n)
        if cl != q[n].simplices:
            return fail(f"level {n}: classical twisted arrows differ from the Q-model")
        image = {}
        for x in sorted(q[n].simplices):
            y = restrict(C, n, x)
            if y in image:
                return fail(f"level {n}: restriction not injective at {x} and {image[y]}")
            image[y] = x
            if endpoints_q(C, n, x) != endpoints_t(C, n, y):
                return fail(f"level {n}: endpoint projection mismatch at {x}")
        if set(image) != set(t[n].simplices):
            missing = sorted(set(t[n].simplices) - set(image))
            return fail(f"level {n}: restriction not surjective, e.g. {missing[:1]}")
    rep.checks.append("bijective")
    ops = []
    for n in range(1, n_max + 1):
        ops += [(coface(n, i), n) for i in range(n + 1)]
    for n in range(0, n_max):
        ops += [(codegeneracy(n, i), n) for i in range(n + 1)]
    for alpha, n in ops:
        for x in sorted(q[n].simplices):
            lhs = restrict(C, len(alpha) - 1, q_act(C, alpha, n, x))
            rhs = t_act(C, alpha, n, restrict(C, n, x))
            if lhs != rhs:
                return fail(f"operator {alpha} into [{n}] does not commute at {x}")
    rep.checks.append("operators")
    rep.checks.append("endpoints")
    return rep
