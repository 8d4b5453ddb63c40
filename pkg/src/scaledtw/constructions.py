"""Named objects over the twisted ambients tw(n).

Conventions: tw(n) has positions 0..2n+1 with 0i at position i and 1i at
position 2n+1-i.  Subcomplexes K of Δ^n are ordinary :class:`Subcomplex`
values over ``Ambient.simplex(n)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Callable, Iterable, Sequence

from .complex import (
    Ambient,
    ComplexError,
    Label,
    Subcomplex,
    VertexMap,
    bits,
    horn,
    spanned,
    union_all,
)
from .scaling import (
    ScaledComplex,
    induce,
    make_scaled,
    scaled_image,
)


# --------------------------------------------------------------------------
# positions and projections on tw(n)

def tw_pos(n: int, row: int, i: int) -> int:
    return i if row == 0 else 2 * n + 1 - i


def tw_mask(n: int, labels: Iterable[Label]) -> int:
    m = 0
    for row, i in labels:
        m |= 1 << tw_pos(n, row, i)
    return m


def _check_level(n: int) -> None:
    if not isinstance(n, int) or n < 0:
        raise ComplexError(f"level must be a nonnegative integer, got {n!r}")


def _check_base(n: int, K: Subcomplex) -> None:
    if K.ambient != Ambient.simplex(n):
        raise ComplexError(f"expected a subcomplex of simplex:{n}, got {K.ambient.name}")


def index_projection(n: int, mask: int) -> int:
    """Mask over Δ^n of the indices occurring in a tw(n) face."""
    out = 0
    for p in bits(mask):
        out |= 1 << (p if p <= n else 2 * n + 1 - p)
    return out


def row_masks(n: int) -> tuple[int, int]:
    row0 = (1 << (n + 1)) - 1
    return row0, row0 << (n + 1)


def simplex_base(n: int) -> Subcomplex:
    return Subcomplex.full_simplex(Ambient.simplex(n))


# --------------------------------------------------------------------------
# Q(n)

@lru_cache(maxsize=None)
def q_thin_families(n: int) -> dict[str, frozenset[int]]:
    _check_level(n)
    t1, t2, t3 = set(), set(), set()
    for k, k1, k2 in combinations(range(n + 1), 3):
        t1.add(tw_mask(n, [(0, k), (0, k1), (0, k2)]))
        t1.add(tw_mask(n, [(1, k), (1, k1), (1, k2)]))
    for k, k1 in combinations(range(n + 1), 2):
        for k2 in range(k1, n + 1):
            t2.add(tw_mask(n, [(0, k), (0, k1), (1, k2)]))
            t3.add(tw_mask(n, [(1, k), (1, k1), (0, k2)]))
    return {"T1": frozenset(t1), "T2": frozenset(t2), "T3": frozenset(t3)}


@lru_cache(maxsize=None)
def q_thin(n: int) -> frozenset[int]:
    fam = q_thin_families(n)
    return fam["T1"] | fam["T2"] | fam["T3"]


@lru_cache(maxsize=None)
def q_full(n: int) -> ScaledComplex:
    amb = Ambient.twisted(n)
    return ScaledComplex(Subcomplex.full_simplex(amb), q_thin(n))


def q_of(n: int, K: Subcomplex | None = None) -> ScaledComplex:
    """Q(K): faces of tw(n) whose index projection lies in K."""
    _check_level(n)
    if K is None:
        return q_full(n)
    _check_base(n, K)
    amb = Ambient.twisted(n)
    gens = []
    for I in K.facets():
        gens.append(tw_mask(n, [(r, i) for i in bits(I) for r in (0, 1)]))
    return induce(q_full(n), Subcomplex.from_masks(amb, gens))


# --------------------------------------------------------------------------
# Ω(K) and T(n)

def sigma_of(n: int, I: Sequence[int], r: int) -> tuple[Label, ...]:
    """The staircase over index set I switching rows at r."""
    return tuple([(0, i) for i in I if i <= r] + [(1, i) for i in sorted(I, reverse=True) if i >= r])


def omega(n: int, K: Subcomplex) -> Subcomplex:
    """Ω(Δ^1 × K), via the maximal staircases of each facet of K."""
    _check_level(n)
    _check_base(n, K)
    gens = []
    for I in K.facets():
        idx = bits(I)
        for r in idx:
            gens.append(tw_mask(n, sigma_of(n, idx, r)))
    return Subcomplex.from_masks(Ambient.twisted(n), gens)


def rows_of(n: int, K: Subcomplex) -> Subcomplex:
    """Ω(∂Δ^1 × K): one copy of K in each row."""
    _check_base(n, K)
    gens = []
    for I in K.facets():
        idx = bits(I)
        gens.append(tw_mask(n, [(0, i) for i in idx]))
        gens.append(tw_mask(n, [(1, i) for i in idx]))
    return Subcomplex.from_masks(Ambient.twisted(n), gens)


def omega_by_hats(n: int, chains_allowed: Callable[[tuple], bool]) -> Subcomplex:
    """Brute-force Ω: hats of every chain of Δ^1 × [n] accepted by the predicate.

    A chain is a tuple of (row, index) pairs strictly increasing in the
    product order.  Used as an oracle for :func:`omega`.
    """
    verts = [(r, i) for r in (0, 1) for i in range(n + 1)]
    faces = set()
    for size in range(1, len(verts) + 1):
        for subset in combinations(verts, size):
            chain = sorted(subset, key=lambda v: (v[1], v[0]))
            ok = all(a[0] <= b[0] and a[1] <= b[1] for a, b in zip(chain, chain[1:]))
            if ok and chains_allowed(tuple(chain)):
                faces.add(tw_mask(n, chain))
    return Subcomplex(Ambient.twisted(n), faces)


def omega_hat_of(n: int, K: Subcomplex) -> Subcomplex:
    return omega_by_hats(n, lambda chain: _index_mask(chain) in K.faces)


def _index_mask(chain) -> int:
    m = 0
    for _, i in chain:
        m |= 1 << i
    return m


@lru_cache(maxsize=None)
def omega_full(n: int) -> Subcomplex:
    return omega(n, simplex_base(n))


def cart_thin(n: int) -> frozenset[int]:
    if n < 1:
        raise ComplexError("the cartesian scaling needs n >= 1")
    return frozenset(tw_mask(n, [(0, i), (1, n - 1), (1, n)]) for i in range(n))


@lru_cache(maxsize=None)
def t_of(n: int, variant: str = "plain") -> ScaledComplex:
    _check_level(n)
    base = induce(q_full(n), omega_full(n))
    if variant == "plain":
        return base
    if variant == "cart":
        return ScaledComplex(base.complex, base.thin | cart_thin(n))
    raise ComplexError(f"unknown T variant {variant!r}")


# --------------------------------------------------------------------------
# named simplices

def sigma(n: int, r: int) -> tuple[Label, ...]:
    _check_level(n)
    if not 0 <= r <= n:
        raise ComplexError(f"sigma: need 0 <= r <= n, got r={r}, n={n}")
    return sigma_of(n, range(n + 1), r)


def tau(n: int, k: int, l: int) -> tuple[Label, ...]:
    _check_level(n)
    if not 0 <= k < l <= n + 1:
        raise ComplexError(f"tau: need 0 <= k < l <= n+1, got k={k}, l={l}, n={n}")
    row0 = [(0, i) for i in range(k + 1)] + [(0, i) for i in range(l, n + 1)]
    row1 = [(1, i) for i in range(n, k - 1, -1)]
    return tuple(row0 + row1)


def closure_of(n: int, labels: Iterable[Label]) -> Subcomplex:
    return spanned(Ambient.twisted(n), [list(labels)])


# --------------------------------------------------------------------------
# filtration complexes

def _horn_base(n: int, i: int) -> Subcomplex:
    if not 0 <= i <= n:
        raise ComplexError(f"horn index out of range: i={i}, n={n}")
    return horn(Ambient.simplex(n), range(n + 1), [i])


def _lambda_bar_complex(n: int, i: int) -> Subcomplex:
    return omega(n, _horn_base(n, i)) | rows_of(n, simplex_base(n))


def _staircases(n: int, rs: Iterable[int]) -> list[Subcomplex]:
    return [closure_of(n, sigma(n, r)) for r in rs]


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise ComplexError(msg)


def filtration(kind: str, **p) -> ScaledComplex:
    """Named intermediate complexes of the horn filtrations."""
    n = p.get("n")
    amb_parts: list[Subcomplex]
    if kind == "LambdaT":
        _need(n >= 1 and 0 <= p["i"] <= n, "LambdaT: need n >= 1, 0 <= i <= n")
        return induce(t_of(n), omega(n, _horn_base(n, p["i"])))
    if kind == "LambdaBarT":
        _need(n >= 1 and 0 <= p["i"] <= n, "LambdaBarT: need n >= 1, 0 <= i <= n")
        return induce(t_of(n), _lambda_bar_complex(n, p["i"]))
    if kind == "X":
        i, s = p["i"], p["s"]
        _need(n >= 1 and 0 <= i <= n and 0 <= s <= n + 1, "X: need 0 <= i <= n, 0 <= s <= n+1")
        amb_parts = [_lambda_bar_complex(n, i)] + _staircases(n, range(s, n + 1))
        return induce(t_of(n), union_all(Ambient.twisted(n), amb_parts))
    if kind == "U":
        k = p["k"]
        _need(0 <= k <= n, "U: need 0 <= k <= n")
        amb_parts = [omega_full(n)] + [closure_of(n, tau(n, i, i + 1)) for i in range(k, n + 1)]
        return induce(q_full(n), union_all(Ambient.twisted(n), amb_parts))
    if kind == "V":
        k, l = p["k"], p["l"]
        _need(0 <= k < n and k < l <= n + 1, "V: need 0 <= k < n, k < l <= n+1")
        amb_parts = [filtration("U", n=n, k=k + 1).complex]
        amb_parts += [closure_of(n, tau(n, k, j)) for j in range(l, n + 2)]
        return induce(q_full(n), union_all(Ambient.twisted(n), amb_parts))
    if kind == "Xcart":
        s = p["s"]
        _need(n >= 1 and 0 <= s <= n + 1, "Xcart: need n >= 1, 0 <= s <= n+1")
        amb_parts = [_lambda_bar_complex(n, n)] + _staircases(n, range(s, n + 1))
        return induce(t_of(n, "cart"), union_all(Ambient.twisted(n), amb_parts))
    if kind == "LambdaBarTcart":
        return filtration("Xcart", n=n, s=n + 1)
    if kind == "LambdaBarTPrime":
        _need(n >= 2, "LambdaBarTPrime: need n >= 2")
        base = filtration("LambdaBarT", n=n, i=n)
        edge = Subcomplex.from_masks(Ambient.simplex(n), [(1 << (n - 1)) | (1 << n)])
        piece = induce(t_of(n, "cart"), omega(n, edge))
        return ScaledComplex(base.complex, base.thin | piece.thin)
    if kind == "SpineSp":
        i, j = p["i"], p["j"]
        _need(0 <= i <= j <= n, "SpineSp: need 0 <= i <= j <= n")
        amb = Ambient.simplex(n)
        gens = [[k, k + 1] for k in range(i, j)] or [[i]]
        return make_scaled(spanned(amb, gens), mode="flat")
    if kind == "SComplex":
        i = p["i"]
        _need(n >= 1 and 0 <= i < n, "SComplex: need 0 <= i < n")
        amb = Ambient.simplex(n)
        return make_scaled(spanned(amb, [range(n), range(i, n + 1)]), mode="flat")
    if kind == "KComplex":
        i = p["i"]
        _need(n >= 1 and 0 <= i <= n, "KComplex: need 0 <= i <= n")
        k = q_of(n, _horn_base(n, i)).complex | rows_of(n, simplex_base(n))
        return induce(q_full(n), k)
    raise ComplexError(f"unknown filtration kind {kind!r}")


FILTRATION_KINDS = (
    "LambdaT", "LambdaBarT", "X", "U", "V", "Xcart", "LambdaBarTcart",
    "LambdaBarTPrime", "SpineSp", "SComplex", "KComplex",
)


# --------------------------------------------------------------------------
# cosimplicial operators

def coface(n: int, i: int) -> tuple[int, ...]:
    """d^i : [n-1] -> [n], skipping i."""
    if not (n >= 1 and 0 <= i <= n):
        raise ComplexError(f"coface d^{i} into [{n}] out of range")
    return tuple(j if j < i else j + 1 for j in range(n))


def codegeneracy(n: int, i: int) -> tuple[int, ...]:
    """s^i : [n+1] -> [n], hitting i twice."""
    if not (n >= 0 and 0 <= i <= n):
        raise ComplexError(f"codegeneracy s^{i} onto [{n}] out of range")
    return tuple(j if j <= i else j - 1 for j in range(n + 2))


def compose_ops(beta: Sequence[int], alpha: Sequence[int]) -> tuple[int, ...]:
    """beta ∘ alpha."""
    return tuple(beta[a] for a in alpha)


def inert(n: int, i: int, j: int) -> tuple[int, ...]:
    """The inclusion [j-i] -> [n] with image {i..j}."""
    return tuple(range(i, j + 1))


def _check_op(alpha: Sequence[int], n: int) -> tuple[int, ...]:
    alpha = tuple(alpha)
    if not alpha or any(not 0 <= a <= n for a in alpha):
        raise ComplexError("operator leaves [n]")
    if any(a > b for a, b in zip(alpha, alpha[1:])):
        raise ComplexError("operator is not monotone")
    return alpha


def tw_vertex_map(alpha: Sequence[int], n: int) -> VertexMap:
    alpha = _check_op(alpha, n)
    m = len(alpha) - 1
    src, dst = Ambient.twisted(m), Ambient.twisted(n)
    return VertexMap.from_function(src, dst, lambda v: (v[0], alpha[v[1]]))


# --------------------------------------------------------------------------
# path complexes for E(n)

def path_core(path: Sequence[int]) -> tuple[int, ...]:
    """Collapse consecutive repeats: the nondegenerate simplex a path degenerates from."""
    out: list[int] = []
    for v in path:
        if not out or out[-1] != v:
            out.append(v)
    return tuple(out)


@dataclass(frozen=True)
class PathComplex:
    """Nondegenerate simplices of dimension <= d of a nerve of a free groupoid."""

    n: int
    d: int
    simplices: frozenset

    def of_dim(self, k: int) -> frozenset:
        return frozenset(s for s in self.simplices if len(s) == k + 1)

    def counts(self) -> tuple[int, ...]:
        return tuple(len(self.of_dim(k)) for k in range(self.d + 1))

    def is_closed(self) -> bool:
        for s in self.simplices:
            for j in range(len(s)):
                face = path_core(s[:j] + s[j + 1:])
                if face and face not in self.simplices:
                    return False
        return True

    def union(self, other: "PathComplex") -> "PathComplex":
        if (self.n, self.d) != (other.n, other.d):
            raise ComplexError("path complex mismatch")
        return PathComplex(self.n, self.d, self.simplices | other.simplices)

    def image(self, alpha: Sequence[int], n: int) -> "PathComplex":
        alpha = _check_op(alpha, n)
        if len(alpha) != self.n + 1:
            raise ComplexError("operator source does not match")
        out = frozenset(path_core(tuple(alpha[v] for v in s)) for s in self.simplices)
        return PathComplex(n, self.d, out)


def e_nerve(n: int, d: int, latching: bool = False) -> PathComplex:
    if n < 0 or d < 0:
        raise ComplexError("e_nerve: need n >= 0 and d >= 0")
    paths = set()
    for k in range(d + 1):
        for s in product(range(n + 1), repeat=k + 1):
            if any(a == b for a, b in zip(s, s[1:])):
                continue
            if latching and len(set(s)) == n + 1:
                continue
            paths.add(s)
    return PathComplex(n, d, frozenset(paths))


# --------------------------------------------------------------------------
# cosimplicial families

class CosimplicialFamily:
    def __init__(self, name: str, level: Callable[[int], object],
                 act: Callable[[Sequence[int], int, object], object]):
        self.name = name
        self._level = level
        self._act = act

    def level(self, n: int):
        return self._level(n)

    def act(self, alpha: Sequence[int], n: int, x=None):
        """Image of level(m) (or of x) under alpha : [m] -> [n]."""
        m = len(alpha) - 1
        if x is None:
            x = self.level(m)
        return self._act(alpha, n, x)

    def __repr__(self):
        return f"CosimplicialFamily({self.name})"


def _tw_act(alpha, n, x):
    return scaled_image(tw_vertex_map(alpha, n), x)


def _rev_simplex_ambient(n: int) -> Ambient:
    return Ambient(range(n, -1, -1), name=f"simplex-op:{n}")


def _delta_sharp(n: int) -> ScaledComplex:
    return make_scaled(simplex_base(n), mode="sharp")


def _delta_op_sharp(n: int) -> ScaledComplex:
    return make_scaled(Subcomplex.full_simplex(_rev_simplex_ambient(n)), mode="sharp")


def _delta_act(alpha, n, x):
    alpha = _check_op(alpha, n)
    f = VertexMap.from_function(x.ambient, Ambient.simplex(n), lambda v: alpha[v])
    return scaled_image(f, x)


def _delta_op_act(alpha, n, x):
    alpha = _check_op(alpha, n)
    f = VertexMap.from_function(x.ambient, _rev_simplex_ambient(n), lambda v: alpha[v])
    return scaled_image(f, x)


E_DIM_OFFSET = 2


FAMILIES: dict[str, CosimplicialFamily] = {
    "Q": CosimplicialFamily("Q", q_of, _tw_act),
    "T": CosimplicialFamily("T", t_of, _tw_act),
    "Omega": CosimplicialFamily("Omega", lambda n: make_scaled(omega_full(n), mode="flat"), _tw_act),
    "DeltaSharp": CosimplicialFamily("DeltaSharp", _delta_sharp, _delta_act),
    "DeltaOpSharp": CosimplicialFamily("DeltaOpSharp", _delta_op_sharp, _delta_op_act),
}


def family(name: str) -> CosimplicialFamily:
    try:
        return FAMILIES[name]
    except KeyError:
        raise ComplexError(f"unknown cosimplicial family {name!r}") from None


def _union_scaled(parts: list[ScaledComplex]) -> ScaledComplex:
    amb = parts[0].ambient
    faces: set[int] = set()
    thin: set[int] = set()
    for p in parts:
        faces |= p.faces
        thin |= p.thin
    return ScaledComplex(Subcomplex(amb, faces, check=False), thin)


def latching(name: str, n: int, d: int | None = None):
    """Union of the coface images into level n.

    For ``E`` the truncation dimension ``d`` defaults to n + 2.
    """
    if n < 1:
        raise ComplexError("latching objects are defined for n >= 1")
    if name == "E":
        d = n + E_DIM_OFFSET if d is None else d
        src = e_nerve(n - 1, d)
        out = PathComplex(n, d, frozenset())
        for i in range(n + 1):
            out = out.union(src.image(coface(n, i), n))
        return out
    if name not in ("Q", "T", "DeltaSharp", "Omega", "DeltaOpSharp"):
        raise ComplexError(f"latching: unsupported family {name!r}")
    fam = family(name)
    return _union_scaled([fam.act(coface(n, i), n) for i in range(n + 1)])


def co_segal_sub(name: str, n: int) -> ScaledComplex:
    if name not in ("Q", "T"):
        raise ComplexError(f"co_segal_sub: unsupported family {name!r}")
    _check_level(n)
    fam = family(name)
    if n == 0:
        return fam.level(0)
    return _union_scaled([fam.act(inert(n, i, i + 1), n) for i in range(n)])


def spine(n: int, i: int = 0, j: int | None = None) -> Subcomplex:
    j = n if j is None else j
    return filtration("SpineSp", n=n, i=i, j=j).complex
