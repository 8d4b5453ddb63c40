"""Finite simplicial complexes as downward-closed families of vertex subsets.

Every object lives inside a fixed totally ordered vertex set (an
:class:`Ambient`).  A face is stored as an integer bitmask over ambient
positions, so lattice operations are plain set operations on ints and the
downward-closure kernel can run in compiled code.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence, Tuple, Union

from . import kernels

Label = Union[int, Tuple[int, int]]


class ComplexError(ValueError):
    """Raised on malformed constructions or mismatched ambients."""


def format_label(label: Label) -> str:
    if isinstance(label, tuple):
        return f"{label[0]}{label[1]}"
    return str(label)


def popcount(mask: int) -> int:
    return mask.bit_count()


def bits(mask: int) -> tuple[int, ...]:
    out = []
    pos = 0
    while mask:
        if mask & 1:
            out.append(pos)
        mask >>= 1
        pos += 1
    return tuple(out)


def face_key(mask: int) -> tuple:
    """Canonical face order: dimension first, then lexicographic positions."""
    return (popcount(mask), bits(mask))


class Ambient:
    """An ordered list of distinct vertex labels."""

    __slots__ = ("labels", "name", "_index")

    def __init__(self, labels: Sequence[Label], name: str | None = None):
        labels = tuple(labels)
        if not labels:
            raise ComplexError("empty ambient")
        if len(set(labels)) != len(labels):
            raise ComplexError("ambient labels must be distinct")
        if len(labels) > 64:
            raise ComplexError("ambients are limited to 64 vertices")
        self.labels = labels
        self.name = name or "labels:" + ",".join(format_label(v) for v in labels)
        self._index = {v: p for p, v in enumerate(labels)}

    @staticmethod
    def simplex(n: int) -> "Ambient":
        return _simplex_ambient(n)

    @staticmethod
    def twisted(n: int) -> "Ambient":
        """Vertices of the join Δ^n ⋆ Δ^{n,op}: 00 < … < 0n < 1n < … < 10."""
        return _twisted_ambient(n)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        return (1 << len(self.labels)) - 1

    @property
    def is_twisted(self) -> bool:
        return all(isinstance(v, tuple) for v in self.labels)

    def position(self, label: Label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ComplexError(f"unknown vertex label {format_label(label)!r} "
                               f"in ambient {self.name}") from None

    def mask(self, labels: Iterable[Label]) -> int:
        m = 0
        for v in labels:
            m |= 1 << self.position(v)
        return m

    def labels_of(self, mask: int) -> tuple[Label, ...]:
        return tuple(self.labels[p] for p in bits(mask))

    def format_face(self, mask: int) -> str:
        return " ".join(format_label(v) for v in self.labels_of(mask))

    def parse_label(self, token: str) -> Label:
        if self.is_twisted:
            if len(token) < 2 or token[0] not in "01" or not token[1:].isdigit():
                raise ComplexError(f"bad twisted label {token!r}")
            label: Label = (int(token[0]), int(token[1:]))
        else:
            try:
                label = int(token)
            except ValueError:
                raise ComplexError(f"bad vertex label {token!r}") from None
        self.position(label)
        return label

    def __eq__(self, other):
        return isinstance(other, Ambient) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)

    def __repr__(self):
        return f"Ambient({self.name})"


@lru_cache(maxsize=None)
def _simplex_ambient(n: int) -> Ambient:
    if n < 0:
        raise ComplexError("simplex dimension must be >= 0")
    return Ambient(range(n + 1), name=f"simplex:{n}")


@lru_cache(maxsize=None)
def _twisted_ambient(n: int) -> Ambient:
    if n < 0:
        raise ComplexError("twisted level must be >= 0")
    labels = [(0, i) for i in range(n + 1)] + [(1, i) for i in range(n, -1, -1)]
    return Ambient(labels, name=f"tw:{n}")


def ambient_from_id(ident: str) -> Ambient:
    kind, _, arg = ident.partition(":")
    if kind == "simplex" and arg.isdigit():
        return Ambient.simplex(int(arg))
    if kind == "tw" and arg.isdigit():
        return Ambient.twisted(int(arg))
    raise ComplexError(f"unknown ambient id {ident!r}")


class Subcomplex:
    """A downward-closed family of nonempty faces of an ambient simplex."""

    __slots__ = ("ambient", "faces", "_hash")

    def __init__(self, ambient: Ambient, faces: Iterable[int] = (), *, check: bool = True):
        self.ambient = ambient
        self.faces = frozenset(faces)
        self._hash = None
        if check:
            full = ambient.full
            for f in self.faces:
                if f <= 0 or f & ~full:
                    raise ComplexError(f"face mask {f} outside ambient {ambient.name}")
            if not kernels.is_closed(self.faces):
                raise ComplexError("face family is not downward closed")

    # construction helpers
    @classmethod
    def from_masks(cls, ambient: Ambient, generators: Iterable[int]) -> "Subcomplex":
        gens = [g for g in generators]
        for g in gens:
            if g <= 0 or g & ~ambient.full:
                raise ComplexError(f"generator mask {g} outside ambient {ambient.name}")
        return cls(ambient, kernels.closure(gens), check=False)

    @classmethod
    def full_simplex(cls, ambient: Ambient) -> "Subcomplex":
        return cls.from_masks(ambient, [ambient.full])

    # queries
    def __contains__(self, face) -> bool:
        if isinstance(face, int):
            return face in self.faces
        return self.ambient.mask(face) in self.faces

    def __len__(self):
        return len(self.faces)

    def __iter__(self):
        return iter(self.sorted_faces())

    def sorted_faces(self) -> list[int]:
        return sorted(self.faces, key=face_key)

    def faces_of_dim(self, k: int) -> frozenset[int]:
        return frozenset(f for f in self.faces if popcount(f) == k + 1)

    @property
    def dim(self) -> int:
        return max((popcount(f) for f in self.faces), default=0) - 1

    def f_vector(self) -> tuple[int, ...]:
        counts = [0] * (self.dim + 1)
        for f in self.faces:
            counts[popcount(f) - 1] += 1
        return tuple(counts)

    def facets(self) -> list[int]:
        """Maximal faces, canonically ordered."""
        out = []
        for f in self.faces:
            free = self.ambient.full & ~f
            maximal = True
            while free:
                low = free & -free
                if f | low in self.faces:
                    maximal = False
                    break
                free ^= low
            if maximal:
                out.append(f)
        return sorted(out, key=face_key)

    def is_empty(self) -> bool:
        return not self.faces

    def issubset(self, other: "Subcomplex") -> bool:
        _same_ambient(self, other)
        return self.faces <= other.faces

    __le__ = issubset

    def __or__(self, other):
        return union(self, other)

    def __and__(self, other):
        return intersection(self, other)

    def __eq__(self, other):
        return (isinstance(other, Subcomplex) and self.ambient == other.ambient
                and self.faces == other.faces)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ambient, self.faces))
        return self._hash

    def __repr__(self):
        return f"Subcomplex({self.ambient.name}, f={self.f_vector()})"

    def to_text(self) -> str:
        return "\n".join(
            f"{popcount(f) - 1}: {self.ambient.format_face(f)}" for f in self.sorted_faces()
        )


def _same_ambient(a: Subcomplex, b: Subcomplex) -> None:
    if a.ambient != b.ambient:
        raise ComplexError(f"ambient mismatch: {a.ambient.name} vs {b.ambient.name}")


def spanned(ambient: Ambient, generators: Iterable[Iterable[Label]]) -> Subcomplex:
    """Smallest subcomplex containing every generator vertex set."""
    masks = []
    for gen in generators:
        m = ambient.mask(gen)
        if m == 0:
            raise ComplexError("empty generator")
        masks.append(m)
    return Subcomplex.from_masks(ambient, masks)


def horn_mask(ambient: Ambient, index_mask: int, missing_mask: int) -> Subcomplex:
    if missing_mask & ~index_mask:
        raise ComplexError("horn: M is not a subset of I")
    gens = []
    rest = index_mask & ~missing_mask
    while rest:
        low = rest & -rest
        face = index_mask ^ low
        if face:
            gens.append(face)
        rest ^= low
    return Subcomplex.from_masks(ambient, gens)


def horn(ambient: Ambient, I: Iterable[Label], M: Iterable[Label]) -> Subcomplex:
    """Union of the facets of Δ^I opposite the vertices of I − M."""
    I = list(I)
    if not I:
        raise ComplexError("horn: I must be nonempty")
    M = list(M)
    i_mask = ambient.mask(I)
    m_mask = ambient.mask(M)
    if m_mask & ~i_mask:
        bad = [format_label(v) for v in M if v not in I]
        raise ComplexError(f"horn: M is not a subset of I (extra {' '.join(bad)})")
    return horn_mask(ambient, i_mask, m_mask)


def boundary(ambient: Ambient, I: Iterable[Label]) -> Subcomplex:
    return horn(ambient, I, ())


def union(a: Subcomplex, b: Subcomplex) -> Subcomplex:
    _same_ambient(a, b)
    return Subcomplex(a.ambient, a.faces | b.faces, check=False)


def intersection(a: Subcomplex, b: Subcomplex) -> Subcomplex:
    _same_ambient(a, b)
    return Subcomplex(a.ambient, a.faces & b.faces, check=False)


def union_all(ambient: Ambient, parts: Iterable[Subcomplex]) -> Subcomplex:
    faces: set[int] = set()
    for p in parts:
        if p.ambient != ambient:
            raise ComplexError(f"ambient mismatch: {p.ambient.name} vs {ambient.name}")
        faces |= p.faces
    return Subcomplex(ambient, faces, check=False)


class VertexMap:
    """A weakly order-preserving map between ambient vertex sets."""

    __slots__ = ("source", "target", "table")

    def __init__(self, source: Ambient, target: Ambient, table: Sequence[int]):
        table = tuple(table)
        if len(table) != source.size:
            raise ComplexError("vertex map table has the wrong length")
        for p in table:
            if not 0 <= p < target.size:
                raise ComplexError("vertex map leaves the target ambient")
        if any(a > b for a, b in zip(table, table[1:])):
            raise ComplexError("vertex map is not weakly order-preserving")
        self.source = source
        self.target = target
        self.table = table

    @classmethod
    def from_function(cls, source: Ambient, target: Ambient, fn) -> "VertexMap":
        return cls(source, target, [target.position(fn(v)) for v in source.labels])

    @classmethod
    def identity(cls, ambient: Ambient) -> "VertexMap":
        return cls(ambient, ambient, range(ambient.size))

    @property
    def injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def __call__(self, label: Label) -> Label:
        return self.target.labels[self.table[self.source.position(label)]]

    def map_mask(self, mask: int) -> int:
        return kernels.image([mask], self.table)[0]

    def compose(self, first: "VertexMap") -> "VertexMap":
        """``self ∘ first``."""
        if first.target != self.source:
            raise ComplexError("cannot compose: ambient mismatch")
        return VertexMap(first.source, self.target, [self.table[p] for p in first.table])

    def __eq__(self, other):
        return (isinstance(other, VertexMap) and self.source == other.source
                and self.target == other.target and self.table == other.table)

    def __hash__(self):
        return hash((self.source, self.target, self.table))

    def __repr__(self):
        return f"VertexMap({self.source.name} -> {self.target.name}, {self.table})"


def map_image(f: VertexMap, s: Subcomplex) -> Subcomplex:
    if s.ambient != f.source:
        raise ComplexError(f"ambient mismatch: {s.ambient.name} vs {f.source.name}")
    images = kernels.image(s.faces, f.table)
    if f.injective:
        return Subcomplex(f.target, images, check=False)
    return Subcomplex.from_masks(f.target, images)


def reverse_mask(mask: int, size: int) -> int:
    out = 0
    for p in bits(mask):
        out |= 1 << (size - 1 - p)
    return out


def order_reverse(s: Subcomplex) -> Subcomplex:
    """Relabel by the order-reversing bijection of the ambient onto itself.

    On Δ^n this is i ↦ n − i; on tw(n) it exchanges 0i and 1i.
    """
    size = s.ambient.size
    return Subcomplex(s.ambient, (reverse_mask(f, size) for f in s.faces), check=False)


def all_subsets_of_dim(ambient: Ambient, k: int) -> list[int]:
    """All k-dimensional faces of the full ambient simplex (brute force)."""
    return [sum(1 << p for p in combo) for combo in combinations(range(ambient.size), k + 1)]


def parse_face_list(text: str, ambient: Ambient) -> tuple[Subcomplex, frozenset[int]]:
    """Parse the ``k: v0 … vk`` / ``thin: a b c`` format back into masks."""
    faces = []
    thin = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise ComplexError(f"line {lineno}: missing ':'")
        tokens = rest.split()
        mask = ambient.mask(ambient.parse_label(t) for t in tokens)
        if head == "thin":
            if len(tokens) != 3:
                raise ComplexError(f"line {lineno}: thin entries are triangles")
            thin.append(mask)
        elif head.isdigit():
            if int(head) != len(tokens) - 1:
                raise ComplexError(f"line {lineno}: dimension does not match vertex count")
            faces.append(mask)
        else:
            raise ComplexError(f"line {lineno}: unknown record {head!r}")
    return Subcomplex(ambient, faces), frozenset(thin)
