"""Scaled subcomplexes: a subcomplex plus a set of thin triangles.

Degenerate thin triangles are implicit and never stored.
"""
from __future__ import annotations

from typing import Iterable

from .complex import (
    Ambient,
    ComplexError,
    Label,
    Subcomplex,
    face_key,
    map_image,
    popcount,
    reverse_mask,
    VertexMap,
)


class ScaledComplex:
    __slots__ = ("complex", "thin", "_hash")

    def __init__(self, complex: Subcomplex, thin: Iterable[int] = ()):
        self.complex = complex
        self.thin = frozenset(thin)
        self._hash = None
        for t in self.thin:
            if popcount(t) != 3:
                raise ComplexError(f"thin entry {complex.ambient.format_face(t)} is not a triangle")
            if t not in complex.faces:
                raise ComplexError(f"thin triangle {complex.ambient.format_face(t)} is not a face")

    @property
    def ambient(self) -> Ambient:
        return self.complex.ambient

    @property
    def faces(self) -> frozenset[int]:
        return self.complex.faces

    def sorted_thin(self) -> list[int]:
        return sorted(self.thin, key=face_key)

    def is_thin(self, labels: Iterable[Label]) -> bool:
        return self.ambient.mask(labels) in self.thin

    def __eq__(self, other):
        return (isinstance(other, ScaledComplex) and self.complex == other.complex
                and self.thin == other.thin)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.complex, self.thin))
        return self._hash

    def __repr__(self):
        return (f"ScaledComplex({self.ambient.name}, f={self.complex.f_vector()}, "
                f"thin={len(self.thin)})")

    def to_text(self) -> str:
        lines = [self.complex.to_text()] if self.complex.faces else []
        lines += [f"thin: {self.ambient.format_face(t)}" for t in self.sorted_thin()]
        return "\n".join(lines)


def make_scaled(k: Subcomplex, thin: Iterable = (), mode: str = "explicit") -> ScaledComplex:
    """Build a scaled complex; ``thin`` may hold masks or label triples."""
    if mode == "sharp":
        return ScaledComplex(k, k.faces_of_dim(2))
    if mode == "flat":
        return ScaledComplex(k, ())
    if mode != "explicit":
        raise ComplexError(f"unknown scaling mode {mode!r}")
    return ScaledComplex(k, (_as_mask(k.ambient, t) for t in thin))


def sharp(k: Subcomplex) -> ScaledComplex:
    return make_scaled(k, mode="sharp")


def flat(k: Subcomplex) -> ScaledComplex:
    return make_scaled(k, mode="flat")


def _as_mask(ambient: Ambient, t) -> int:
    return t if isinstance(t, int) else ambient.mask(t)


def induce(parent: ScaledComplex, sub: Subcomplex) -> ScaledComplex:
    if sub.ambient != parent.ambient:
        raise ComplexError(f"ambient mismatch: {sub.ambient.name} vs {parent.ambient.name}")
    if not sub.faces <= parent.faces:
        extra = min(sub.faces - parent.faces, key=face_key)
        raise ComplexError(f"induce: face {sub.ambient.format_face(extra)} not in parent")
    return ScaledComplex(sub, parent.thin & sub.faces)


def add_thin(x: ScaledComplex, extra: Iterable) -> ScaledComplex:
    masks = {_as_mask(x.ambient, t) for t in extra}
    return ScaledComplex(x.complex, x.thin | masks)


def scaled_union(a: ScaledComplex, b: ScaledComplex) -> ScaledComplex:
    return ScaledComplex(a.complex | b.complex, a.thin | b.thin)


def scaled_image(f: VertexMap, x: ScaledComplex) -> ScaledComplex:
    """Image under a vertex map; thin triangles collapsing to edges become degenerate."""
    k = map_image(f, x.complex)
    thin = {f.map_mask(t) for t in x.thin}
    return ScaledComplex(k, {t for t in thin if popcount(t) == 3})


def order_reverse_scaled(x: ScaledComplex) -> ScaledComplex:
    size = x.ambient.size
    faces = (reverse_mask(f, size) for f in x.faces)
    return ScaledComplex(Subcomplex(x.ambient, faces, check=False),
                         (reverse_mask(t, size) for t in x.thin))


def conj(x: ScaledComplex) -> ScaledComplex:
    """Swap rows 0i <-> 1i on tw(n).

    On the twisted ambient the row swap composed with reversing the order is
    the position reversal p -> 2n+1-p, so this is order reversal in disguise.
    """
    if not x.ambient.is_twisted:
        raise ComplexError(f"conj needs a twisted ambient, got {x.ambient.name}")
    return order_reverse_scaled(x)
