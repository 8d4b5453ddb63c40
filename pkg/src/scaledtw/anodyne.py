"""Certificates for scaled-anodyne inclusions and the replay kernel.

A certificate claims ``small -> big`` inside one ambient and lists steps.
Each step embeds a generator pair ``D -> E`` (from a generator, a trusted
rule or an earlier certificate) into the ambient.  Replay checks that the
current complex ``C`` meets the embedded ``E`` exactly in ``D``, that the
thin triangles ``D`` carries are already thin in ``C``, and then glues.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .complex import (
    Ambient,
    ComplexError,
    Subcomplex,
    bits,
    face_key,
    horn_mask,
    popcount,
    reverse_mask,
)
from .scaling import ScaledComplex, induce, make_scaled

GENERATORS = ("An1", "An2", "An3")


class CertificateError(ValueError):
    """Structural problem with a certificate (dangling reference, bad shape)."""


class HypothesisViolated(ValueError):
    def __init__(self, clause: str, detail: str):
        super().__init__(detail)
        self.clause = clause
        self.detail = detail


# --------------------------------------------------------------------------
# data model

@dataclass(frozen=True)
class ScaledInclusion:
    small: ScaledComplex
    big: ScaledComplex

    def __post_init__(self):
        if self.small.ambient != self.big.ambient:
            raise CertificateError("claim: ambient mismatch")
        if not self.small.faces <= self.big.faces:
            raise CertificateError("claim: small complex is not contained in big")
        if not self.small.thin <= self.big.thin:
            raise CertificateError("claim: small thin triangles are not thin in big")

    @property
    def induced(self) -> bool:
        return self.small.thin == self.big.thin & self.small.faces

    @property
    def ambient(self) -> Ambient:
        return self.big.ambient


@dataclass(frozen=True)
class Step:
    kind: str  # an1 | an2 | an3 | trusted | derived
    embed: tuple[int, ...]
    n: int | None = None
    i: int | None = None
    rule: str | None = None
    ref: str | None = None
    added_faces: frozenset | None = None
    added_thins: frozenset | None = None

    def label(self) -> str:
        if self.kind == "an1":
            return f"An1({self.n},{self.i})"
        if self.kind == "an2":
            return "An2"
        if self.kind == "an3":
            return "An3"
        if self.kind == "trusted":
            args = "" if self.n is None else f"({self.n},{self.i})"
            return f"{self.rule}{args}"
        return f"Derived({self.ref})"


@dataclass(frozen=True)
class Certificate:
    id: str
    claim: ScaledInclusion
    steps: tuple[Step, ...]
    deps: tuple["Certificate", ...] = ()

    @property
    def ambient(self) -> Ambient:
        return self.claim.ambient


def collect(cert: Certificate, store: Mapping[str, Certificate] | None = None) -> dict[str, Certificate]:
    """All certificates reachable through ``deps``, plus an explicit store."""
    out: dict[str, Certificate] = dict(store or {})
    stack = [cert]
    while stack:
        c = stack.pop()
        if c.id in out and out[c.id] is not c and out[c.id] != c:
            raise CertificateError(f"two different certificates share id {c.id!r}")
        out[c.id] = c
        stack.extend(d for d in c.deps if d.id not in out)
    return out


def dependency_order(cert: Certificate, store: Mapping[str, Certificate] | None = None) -> list[Certificate]:
    """Referenced certificates first, ``cert`` last."""
    table = collect(cert, store)
    seen: set[str] = set()
    order: list[Certificate] = []

    def visit(c: Certificate, trail: tuple[str, ...]):
        if c.id in trail:
            raise CertificateError(f"cyclic certificate reference through {c.id!r}")
        if c.id in seen:
            return
        for s in c.steps:
            if s.kind == "derived":
                if s.ref not in table:
                    raise CertificateError(f"dangling certificate reference {s.ref!r}")
                visit(table[s.ref], trail + (c.id,))
        seen.add(c.id)
        order.append(c)

    visit(cert, ())
    return order


# --------------------------------------------------------------------------
# generators and trusted rules

def an1_pair(n: int, i: int) -> tuple[ScaledComplex, ScaledComplex]:
    if not 0 < i < n:
        raise CertificateError(f"An1 needs 0 < i < n, got n={n}, i={i}")
    amb = Ambient.simplex(n)
    witness = (1 << (i - 1)) | (1 << i) | (1 << (i + 1))
    small = horn_mask(amb, amb.full, 1 << i)
    big = Subcomplex.full_simplex(amb)
    return (ScaledComplex(small, {witness} & small.faces), ScaledComplex(big, {witness}))


AN2_THIN = ((0, 2, 4), (1, 2, 3), (0, 1, 3), (1, 3, 4), (0, 1, 2))
AN2_ADDED = ((0, 3, 4), (0, 1, 4))


def an2_pair() -> tuple[ScaledComplex, ScaledComplex]:
    amb = Ambient.simplex(4)
    full = Subcomplex.full_simplex(amb)
    d = make_scaled(full, AN2_THIN)
    return d, make_scaled(full, AN2_THIN + AN2_ADDED)


@dataclass(frozen=True)
class TrustedRule:
    rule_id: str
    citation: str
    parametrized: bool
    build: Callable[..., tuple[ScaledComplex, ScaledComplex]]

    def instantiate(self, n: int | None, i: int | None) -> tuple[ScaledComplex, ScaledComplex]:
        if self.parametrized:
            if n is None or i is None:
                raise CertificateError(f"{self.rule_id} needs parameters n and i")
            return self.build(n, i)
        if n is not None or i is not None:
            raise CertificateError(f"{self.rule_id} takes no parameters")
        return self.build()


def _sharp_inner_horn(n: int, i: int):
    if not (n >= 2 and 0 < i < n):
        raise CertificateError(f"R-SHARP-INNER-HORN needs n >= 2, 0 < i < n; got n={n}, i={i}")
    amb = Ambient.simplex(n)
    h = horn_mask(amb, amb.full, 1 << i)
    return make_scaled(h, mode="sharp"), make_scaled(Subcomplex.full_simplex(amb), mode="sharp")


THIN3_MISSING = 0b1101  # positions {0, 2, 3}
THIN3_MISSING_013 = 0b1011  # positions {0, 1, 3}


def _thin_3simplex(missing: int = THIN3_MISSING):
    amb = Ambient.simplex(3)
    full = Subcomplex.full_simplex(amb)
    tri = full.faces_of_dim(2)
    return ScaledComplex(full, tri - {missing}), ScaledComplex(full, tri)


def _thin_3simplex_013():
    return _thin_3simplex(THIN3_MISSING_013)


def _gs_k(n: int, i: int):
    if not (n >= 2 and 0 < i < n):
        raise CertificateError(f"AX-GS-K needs n >= 2, 0 < i < n; got n={n}, i={i}")
    from .constructions import filtration, q_of
    return filtration("KComplex", n=n, i=i), q_of(n)


TRUSTED_RULES: dict[str, TrustedRule] = {
    "R-SHARP-INNER-HORN": TrustedRule(
        "R-SHARP-INNER-HORN",
        "Lurie, Goodwillie calculus, Remark 3.1.5: sharp inner horn inclusions are scaled anodyne",
        True, _sharp_inner_horn),
    "R-THIN-3SIMPLEX": TrustedRule(
        "R-THIN-3SIMPLEX",
        "Lurie, Goodwillie calculus, Remark 3.1.4: a 3-simplex with every 2-face but {0,2,3} thin"
        " includes anodyne into its sharp scaling",
        False, _thin_3simplex),
    "R-THIN-3SIMPLEX-013": TrustedRule(
        "R-THIN-3SIMPLEX-013",
        "Lurie, Goodwillie calculus, Remark 3.1.4 (mirror form): a 3-simplex with every 2-face"
        " but {0,1,3} thin includes anodyne into its sharp scaling",
        False, _thin_3simplex_013),
    "AX-GS-K": TrustedRule(
        "AX-GS-K",
        "Garcia-Stern, Lemmas 2.10.1 and 2.12.1: (K^n_i)_S -> Q(n) is scaled anodyne",
        True, _gs_k),
}


# --------------------------------------------------------------------------
# replay kernel

@dataclass(frozen=True)
class Report:
    cert_id: str
    passed: bool
    trust: tuple[str, ...] = ()
    failed_step: int | None = None
    detail: str = ""
    steps: int = 0

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def summary(self) -> str:
        trust = ",".join(self.trust) or "-"
        if self.passed:
            return f"PASS {self.cert_id} steps={self.steps} trust={trust}"
        where = "claim" if self.failed_step is None else f"step {self.failed_step}"
        return f"FAIL {self.cert_id} at {where}: {self.detail}"


def _fmt(amb: Ambient, masks: Iterable[int], limit: int = 6) -> str:
    items = sorted(masks, key=face_key)
    shown = ["{" + ",".join(amb.format_face(m).split()) + "}" for m in items[:limit]]
    if len(items) > limit:
        shown.append(f"... ({len(items)} total)")
    return " ".join(shown) or "none"


def _embed_masks(masks: Iterable[int], embed: Sequence[int]) -> set[int]:
    out = set()
    for m in masks:
        img = 0
        for p in bits(m):
            img |= 1 << embed[p]
        out.add(img)
    return out


def _generator_pair(step: Step, resolve: Callable[[str], tuple[ScaledComplex, ScaledComplex]]):
    if step.kind == "an1":
        return an1_pair(step.n, step.i)
    if step.kind == "an2":
        return an2_pair()
    if step.kind == "an3":
        raise CertificateError("An3 has no matcher: its codomain is a quotient")
    if step.kind == "trusted":
        rule = TRUSTED_RULES.get(step.rule)
        if rule is None:
            raise CertificateError(f"unknown trusted rule {step.rule!r}")
        return rule.instantiate(step.n, step.i)
    if step.kind == "derived":
        return resolve(step.ref)
    raise CertificateError(f"unknown step kind {step.kind!r}")


def apply_step(amb: Ambient, faces: frozenset, thin: frozenset, step: Step,
               resolve) -> tuple[frozenset, frozenset, frozenset, frozenset]:
    """Check one pushout step; return (faces, thin, added_faces, added_thins).

    Raises CertificateError with a description of the violated equation.
    """
    d, e = _generator_pair(step, resolve)
    src = e.ambient
    emb = tuple(step.embed)
    if len(emb) != src.size:
        raise CertificateError(f"embedding has {len(emb)} vertices, generator ambient has {src.size}")
    if any(not 0 <= p < amb.size for p in emb):
        raise CertificateError("embedding leaves the ambient")
    if any(a >= b for a, b in zip(emb, emb[1:])):
        raise CertificateError("embedding is not injective and order-preserving")
    d_faces = _embed_masks(d.faces, emb)
    e_faces = _embed_masks(e.faces, emb)
    d_thin = _embed_masks(d.thin, emb)
    e_thin = _embed_masks(e.thin, emb)
    meet = faces & e_faces
    if meet != d_faces:
        raise CertificateError(
            "face equation C ∩ E = D fails: missing " + _fmt(amb, d_faces - meet)
            + "; unexpected " + _fmt(amb, meet - d_faces))
    lacking = d_thin - thin
    if lacking:
        raise CertificateError("thin-set equation fails: domain thin triangles not thin in C: "
                               + _fmt(amb, lacking))
    new_faces = frozenset(e_faces - faces)
    new_thin = frozenset(e_thin - thin)
    if not new_faces and not new_thin:
        raise CertificateError("step adds nothing")
    if step.added_faces is not None and step.added_faces != new_faces:
        raise CertificateError("recorded added faces differ from replay: "
                               + _fmt(amb, step.added_faces ^ new_faces))
    if step.added_thins is not None and step.added_thins != new_thin:
        raise CertificateError("recorded added thins differ from replay: "
                               + _fmt(amb, step.added_thins ^ new_thin))
    return faces | new_faces, thin | new_thin, new_faces, new_thin


class Verifier:
    """Replays certificates, memoizing derived references by id."""

    def __init__(self, store: Mapping[str, Certificate] | None = None):
        self.store: dict[str, Certificate] = dict(store or {})
        self.results: dict[str, Report] = {}
        self._active: set[str] = set()

    def verify(self, cert: Certificate) -> Report:
        for k, v in collect(cert).items():
            self.store.setdefault(k, v)
        return self._verify(cert)

    def _resolve(self, ref: str):
        sub = self.store.get(ref)
        if sub is None:
            raise CertificateError(f"dangling certificate reference {ref!r}")
        rep = self._verify(sub)
        if not rep.passed:
            raise CertificateError(f"referenced certificate {ref!r} fails: {rep.summary()}")
        self._last_trust = rep.trust
        return sub.claim.small, sub.claim.big

    def _verify(self, cert: Certificate) -> Report:
        if cert.id in self.results:
            return self.results[cert.id]
        if cert.id in self._active:
            return Report(cert.id, False, detail="cyclic certificate reference")
        self._active.add(cert.id)
        try:
            rep = self._replay(cert)
        finally:
            self._active.discard(cert.id)
        self.results[cert.id] = rep
        return rep

    def _replay(self, cert: Certificate) -> Report:
        amb = cert.ambient
        faces = cert.claim.small.faces
        thin = cert.claim.small.thin
        trust: Counter = Counter()
        for k, step in enumerate(cert.steps, 1):
            self._last_trust = ()
            try:
                faces, thin, _, _ = apply_step(amb, faces, thin, step, self._resolve)
            except (CertificateError, ComplexError) as exc:
                return Report(cert.id, False, failed_step=k, detail=f"{step.label()}: {exc}",
                              steps=len(cert.steps))
            if step.kind == "trusted":
                trust[step.rule] += 1
            elif step.kind == "derived":
                trust.update(self._last_trust)
        big = cert.claim.big
        if faces != big.faces or thin != big.thin:
            detail = ("final state differs from claim: missing faces " + _fmt(amb, big.faces - faces)
                      + "; missing thins " + _fmt(amb, big.thin - thin)
                      + "; extra thins " + _fmt(amb, thin - big.thin))
            return Report(cert.id, False, failed_step=len(cert.steps) + 1, detail=detail,
                          steps=len(cert.steps))
        return Report(cert.id, True, trust=tuple(sorted(trust.elements())), steps=len(cert.steps))


def verify(cert: Certificate, store: Mapping[str, Certificate] | None = None) -> Report:
    try:
        return Verifier(store).verify(cert)
    except CertificateError as exc:
        return Report(cert.id, False, detail=str(exc), steps=len(cert.steps))


def trust_base(cert: Certificate, store: Mapping[str, Certificate] | None = None) -> tuple[str, ...]:
    """Multiset of trusted rules used, collected through derived references."""
    table = collect(cert, store)
    memo: dict[str, Counter] = {}

    def walk(c: Certificate, trail: tuple[str, ...]) -> Counter:
        if c.id in memo:
            return memo[c.id]
        if c.id in trail:
            raise CertificateError(f"cyclic certificate reference through {c.id!r}")
        acc: Counter = Counter()
        for s in c.steps:
            if s.kind == "trusted":
                acc[s.rule] += 1
            elif s.kind == "derived":
                if s.ref not in table:
                    raise CertificateError(f"dangling certificate reference {s.ref!r}")
                acc.update(walk(table[s.ref], trail + (c.id,)))
        memo[c.id] = acc
        return acc

    return tuple(sorted(walk(cert, ()).elements()))


# --------------------------------------------------------------------------
# emission helpers

def record_additions(cert: Certificate) -> Certificate:
    """Fill in added_faces / added_thins for every step by replaying."""
    verifier = Verifier(collect(cert))
    amb = cert.ambient
    faces, thin = cert.claim.small.faces, cert.claim.small.thin
    steps = []
    for step in cert.steps:
        bare = Step(step.kind, step.embed, step.n, step.i, step.rule, step.ref)
        faces, thin, af, at = apply_step(amb, faces, thin, bare, verifier._resolve)
        steps.append(Step(step.kind, step.embed, step.n, step.i, step.rule, step.ref, af, at))
    return Certificate(cert.id, cert.claim, tuple(steps), cert.deps)


def _horn_steps(V: tuple[int, ...], order: Sequence[int]) -> list[Step]:
    """Fill Λ^V_M → Δ^V, removing elements of M in ``order``; the last one is the pivot."""
    if len(order) == 1:
        m = order[0]
        return [Step("an1", V, n=len(V) - 1, i=V.index(m))]
    m, rest = order[0], order[1:]
    facet = tuple(v for v in V if v != m)
    return _horn_steps(facet, rest) + _horn_steps(V, rest)


def _simplex_check(S: ScaledComplex) -> int:
    amb = S.ambient
    if amb != Ambient.simplex(amb.size - 1) or S.faces != Subcomplex.full_simplex(amb).faces:
        raise CertificateError("expected a scaling of a full standard simplex")
    return amb.size - 1


def _mask_of(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def _tri(a: int, b: int, c: int) -> int:
    return (1 << a) | (1 << b) | (1 << c)


def _fmt_tri(pts: Iterable[int]) -> str:
    return "{" + ",".join(str(p) for p in sorted(pts)) + "}"


# --------------------------------------------------------------------------
# the horn lemma

@dataclass(frozen=True)
class HypothesisCheck:
    ok: bool
    clause: str = ""
    detail: str = ""
    s: int | None = None
    t: int | None = None

    def __bool__(self):
        return self.ok


def check_lemma36_hypotheses(S: ScaledComplex, M: Iterable[int], dual: bool = False) -> HypothesisCheck:
    """Evaluate the horn-lemma clauses in order; the first failure is returned."""
    try:
        n = _simplex_check(S)
    except CertificateError as exc:
        return HypothesisCheck(False, "ambient", str(exc))
    M = sorted(set(M))
    # mirror the dual case onto the primal one; triangles are reported in original labels
    mirror = (lambda v: n - v) if dual else (lambda v: v)
    thin = S.thin
    if n < 3:
        return HypothesisCheck(False, "dimension", f"need n >= 3, got n={n}")
    if not M:
        return HypothesisCheck(False, "nonempty", "M must be nonempty")
    if any(not 0 <= v <= n for v in M):
        return HypothesisCheck(False, "range", "M must be a subset of [n]")
    if dual and 0 in M:
        return HypothesisCheck(False, "range", "M must avoid the bottom vertex")
    if not dual and n in M:
        return HypothesisCheck(False, "range", "M must avoid the top vertex")
    Mp = sorted(mirror(v) for v in M)
    t = Mp[-1]
    s = t - 1
    while s >= 0 and s in Mp:
        s -= 1
    if s < 0:
        return HypothesisCheck(False, "s-exists", "no vertex s outside M below the run ending at "
                               f"{mirror(t)}")
    if len(M) > n - 2:
        return HypothesisCheck(False, "size", f"|M| = {len(M)} exceeds n-2 = {n - 2}")
    if len(M) == n - 2:
        comp = [v for v in range(n + 1) if v not in M]
        if _mask_of(comp) in thin:
            return HypothesisCheck(False, "complement", f"{_fmt_tri(comp)} is thin but |M| = n-2")
    for b in range(s, t):
        tri = [mirror(b), mirror(t), mirror(t + 1)]
        if _mask_of(tri) not in thin:
            return HypothesisCheck(False, "witness", f"{_fmt_tri(tri)} not thin")
    return HypothesisCheck(True, s=mirror(s), t=mirror(t))


def required_witnesses(n: int, M: Iterable[int], dual: bool = False) -> list[int]:
    """Minimal thin set demanded by the witness clause (empty if s does not exist)."""
    mirror = (lambda v: n - v) if dual else (lambda v: v)
    Mp = sorted(mirror(v) for v in M)
    if not Mp:
        return []
    t = Mp[-1]
    s = t - 1
    while s >= 0 and s in Mp:
        s -= 1
    if s < 0 or t + 1 > n:
        return []
    return [_mask_of([mirror(b), mirror(t), mirror(t + 1)]) for b in range(s, t)]


def lemma36(S: ScaledComplex, M: Iterable[int], dual: bool = False,
            cert_id: str | None = None) -> Certificate:
    """Certificate for Λ^n_M → Δ^n following the induction on |M|."""
    M = sorted(set(M))
    check = check_lemma36_hypotheses(S, M, dual)
    if not check:
        raise HypothesisViolated(check.clause, check.detail)
    n = S.ambient.size - 1
    V = tuple(range(n + 1))
    order = sorted(M, reverse=dual)
    amb = S.ambient
    small = induce(S, horn_mask(amb, amb.full, _mask_of(M)))
    cid = cert_id or default_lemma_id(S, M, dual)
    cert = Certificate(cid, ScaledInclusion(small, S), tuple(_horn_steps(V, order)))
    return record_additions(cert)


def default_lemma_id(S: ScaledComplex, M: Sequence[int], dual: bool) -> str:
    n = S.ambient.size - 1
    thin = ";".join(",".join(str(p) for p in bits(t)) for t in sorted(S.thin, key=face_key))
    tag = "dual" if dual else "primal"
    return f"lemma36[n={n};M={','.join(map(str, M))};{tag};thin={thin or '-'}]"


def reverse_certificate(cert: Certificate, cert_id: str | None = None) -> Certificate:
    """Mirror a generator-only certificate on Δ^n through i ↦ n − i."""
    amb = cert.ambient
    size = amb.size

    def rev_sc(x: ScaledComplex) -> ScaledComplex:
        faces = Subcomplex(amb, (reverse_mask(f, size) for f in x.faces), check=False)
        return ScaledComplex(faces, (reverse_mask(t, size) for t in x.thin))

    steps = []
    for s in cert.steps:
        if s.kind != "an1":
            raise CertificateError("only An1 certificates can be mirrored")
        emb = tuple(size - 1 - p for p in reversed(s.embed))
        af = None if s.added_faces is None else frozenset(reverse_mask(f, size) for f in s.added_faces)
        at = None if s.added_thins is None else frozenset(reverse_mask(f, size) for f in s.added_thins)
        steps.append(Step("an1", emb, n=s.n, i=s.n - s.i, added_faces=af, added_thins=at))
    claim = ScaledInclusion(rev_sc(cert.claim.small), rev_sc(cert.claim.big))
    return Certificate(cert_id or cert.id + "~rev", claim, tuple(steps))


# --------------------------------------------------------------------------
# generic horn filling with a chosen pivot plus trusted thin promotions

def _simulate(amb: Ambient, faces, thin, steps: Sequence[Step]):
    for st in steps:
        faces, thin, _, _ = apply_step(amb, faces, thin, st, _no_refs)
    return faces, thin


def _no_refs(ref):
    raise CertificateError("derived steps are not allowed here")


def _an2_candidates(tri: int, size: int):
    """Embeddings of An2 whose added triangles include ``tri``."""
    from itertools import combinations
    pts = bits(tri)
    for a, b, c in ((0, 3, 4), (0, 1, 4)):
        others = [p for p in range(size) if p not in pts]
        for extra in combinations(others, 2):
            emb = tuple(sorted(pts + extra))
            if (emb[a], emb[b], emb[c]) == pts:
                yield emb


def _an2_fits(emb, faces, thin, target_thin) -> bool:
    if sum(1 << p for p in emb) not in faces:
        return False
    need = [_tri(*(emb[q] for q in t)) for t in AN2_THIN]
    if not all(t in thin for t in need):
        return False
    return all(_tri(*(emb[q] for q in t)) in target_thin for t in AN2_ADDED)


def _promotions(faces, thin, target_thin, size: int) -> list[Step] | None:
    """Make the remaining target triangles thin.

    An2 pushouts are tried first, then the trusted 3-simplex rule with the
    {0,2,3} pattern, then its {0,1,3} mirror.
    """
    steps: list[Step] = []
    thin = set(thin)
    missing = sorted(set(target_thin) - thin, key=face_key)
    while missing:
        progressed = False
        for tri in missing:
            for emb in _an2_candidates(tri, size):
                if _an2_fits(emb, faces, thin, target_thin):
                    steps.append(Step("an2", emb))
                    thin.update(_tri(*(emb[q] for q in t)) for t in AN2_ADDED)
                    progressed = True
                    break
            if progressed:
                break
        if not progressed:
            for tri in missing:
                x, y, z = bits(tri)
                for w in range(x + 1, y):
                    if tri | (1 << w) not in faces:
                        continue
                    if _tri(x, w, y) in thin and _tri(x, w, z) in thin and _tri(w, y, z) in thin:
                        steps.append(Step("trusted", (x, w, y, z), rule="R-THIN-3SIMPLEX"))
                        thin.add(tri)
                        progressed = True
                        break
                if progressed:
                    break
        if not progressed:
            for tri in missing:
                x, y, z = bits(tri)
                for w in range(y + 1, z):
                    if tri | (1 << w) not in faces:
                        continue
                    if _tri(x, y, w) in thin and _tri(x, w, z) in thin and _tri(y, w, z) in thin:
                        steps.append(Step("trusted", (x, y, w, z), rule="R-THIN-3SIMPLEX-013"))
                        thin.add(tri)
                        progressed = True
                        break
                if progressed:
                    break
        if not progressed:
            return None
        missing = sorted(set(target_thin) - thin, key=face_key)
    return steps


def generator_obstruction(small: ScaledComplex, big: ScaledComplex) -> str | None:
    """A reason why no An1/An2-only certificate for ``small -> big`` can exist.

    An1 steps of dimension >= 3 add no thin triangles; an An1(2,1) step adds
    one thin triangle together with its long edge, which must be new.  So
    every target thin triangle outside the reach of An2 needs its own
    missing long edge.  Returns None when this count does not rule
    certificates out (which does not mean one exists).
    """
    need = set(big.thin) - set(small.thin)
    reach = set()
    for f in big.faces:
        if popcount(f) == 5:
            emb = bits(f)
            reach.update(_tri(*(emb[q] for q in t)) for t in AN2_ADDED)
    amb = big.ambient
    owners: dict[int, int] = {}
    for t in sorted(need - reach, key=face_key):
        a, _, c = bits(t)
        edge = (1 << a) | (1 << c)
        if edge in small.faces:
            return (f"{amb.format_face(t)} must become thin but its long edge "
                    f"{amb.format_face(edge)} is already present and no An2 reaches it")
        if edge in owners:
            return (f"{amb.format_face(owners[edge])} and {amb.format_face(t)} both need "
                    f"the new edge {amb.format_face(edge)} from an An1(2,1) step")
        owners[edge] = t
    return None


def horn_fill(S: ScaledComplex, M: Iterable[int], pivot: int | None = None,
              cert_id: str | None = None) -> Certificate:
    """Certificate for Λ^n_M → Δ^n with the given pivot (or the cheapest one found).

    The An1 recursion removes the non-pivot elements of M in increasing
    order.  Thin triangles the recursion cannot produce are promoted
    afterwards, preferring pivots that need no trusted steps.
    """
    n = _simplex_check(S)
    M = sorted(set(M))
    if not M:
        raise CertificateError("horn_fill: M must be nonempty")
    amb = S.ambient
    small = induce(S, horn_mask(amb, amb.full, _mask_of(M)))
    candidates = [pivot] if pivot is not None else [M[-1]] + [m for m in reversed(M[:-1])]
    best = None
    for p in candidates:
        if p not in M:
            raise CertificateError(f"pivot {p} is not in M")
        order = [m for m in M if m != p] + [p]
        try:
            steps = _horn_steps(tuple(range(n + 1)), order)
            faces, thin = _simulate(amb, small.faces, small.thin, steps)
        except CertificateError:
            continue
        if faces != S.faces or not thin <= S.thin:
            continue
        extra = _promotions(faces, thin, S.thin, n + 1)
        if extra is None:
            continue
        cost = (sum(st.rule == "R-THIN-3SIMPLEX-013" for st in extra),
                sum(st.kind == "trusted" for st in extra), len(extra))
        if best is None or cost < best[2]:
            best = (steps, extra, cost)
        if not extra:
            break
    if best is None:
        raise CertificateError(f"no pivot of M={M} fills this horn")
    cid = cert_id or f"fill[n={n};M={','.join(map(str, M))}]"
    cert = Certificate(cid, ScaledInclusion(small, S), tuple(best[0] + best[1]))
    return record_additions(cert)


# --------------------------------------------------------------------------
# instance generation for the horn lemma

def admissible_sets(n: int, dual: bool = False) -> list[tuple[int, ...]]:
    """Every M for which some scaling satisfies the hypotheses."""
    from itertools import combinations
    out = []
    pool = range(1, n + 1) if dual else range(n)
    for size in range(1, n - 1):
        for M in combinations(pool, size):
            flat_sc = make_scaled(Subcomplex.full_simplex(Ambient.simplex(n)), mode="flat")
            wit = required_witnesses(n, M, dual)
            sc = ScaledComplex(flat_sc.complex, wit)
            if check_lemma36_hypotheses(sc, M, dual):
                out.append(M)
    return out


def random_superset(S: ScaledComplex, M: Sequence[int], rng: random.Random,
                    dual: bool = False) -> ScaledComplex:
    """Add random thin triangles while keeping the hypotheses satisfied."""
    n = S.ambient.size - 1
    tris = sorted(S.complex.faces_of_dim(2), key=face_key)
    forbidden = set()
    if len(set(M)) == n - 2:
        forbidden.add(_mask_of(v for v in range(n + 1) if v not in M))
    pool = [t for t in tris if t not in S.thin and t not in forbidden]
    k = rng.randint(0, len(pool))
    extra = rng.sample(pool, k)
    return ScaledComplex(S.complex, S.thin | set(extra))
