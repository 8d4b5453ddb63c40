"""Named verification suites with deterministic reports.

Each suite emits one record per instance.  Oracle checks here use only the
set operations of :mod:`scaledtw.complex`; certificates are replayed by
the kernel separately, so the two never share a code path.
"""
from __future__ import annotations

import hashlib
import json
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable

from . import nerve
from .anodyne import (
    Certificate,
    HypothesisViolated,
    admissible_sets,
    check_lemma36_hypotheses,
    generator_obstruction,
    lemma36,
    random_superset,
    required_witnesses,
    trust_base,
    verify,
)
from .complex import (
    Ambient,
    Subcomplex,
    bits,
    face_key,
    horn_mask,
    intersection,
    map_image,
)
from .constructions import (
    closure_of,
    co_segal_sub,
    coface,
    compose_ops,
    e_nerve,
    family,
    filtration,
    latching,
    omega,
    omega_hat_of,
    q_of,
    q_thin_families,
    sigma,
    spine,
    t_of,
    tau,
    tw_mask,
    tw_vertex_map,
)
from .proofs import (
    all_subcerts,
    cart,
    cart_prime,
    inner_horn_T,
    lemma_check,
    q_consec,
    q_cosegal,
    spine_P,
    t_cosegal,
    t_in_q,
    table_cart,
    table_inner,
    table_t_in_q,
)
from .scaling import ScaledComplex, conj, induce, order_reverse_scaled

DEFAULT_N_MAX = 4
DEFAULT_SEED = 20260606
T3_SCAN_MAX = 6
NERVE_N_CAP = 3
PERTURBATIONS = 8
RANDOM_PAIRS = 100
RANDOM_INVOLUTIONS = 200

PASS, TRUSTED, FAIL, REFUSED = "PASS", "TRUSTED-PASS", "FAIL", "REFUSED"


# --------------------------------------------------------------------------
# the intersection oracle

@dataclass(frozen=True)
class Intersection:
    """closure(simplex) ∩ sub, classified.

    ``kind`` is ``full`` (the simplex itself is present, M = ∅), ``horn``
    (the intersection is Λ^I_M) or ``other``.
    """
    kind: str
    I: int
    M: int
    complex: Subcomplex

    def M_labels(self):
        return tuple(self.complex.ambient.labels_of(self.M)) if self.kind != "other" else None


def oracle_intersection(simplex: int, sub: Subcomplex) -> Intersection:
    amb = sub.ambient
    if simplex & ~amb.full or not simplex:
        raise ValueError("simplex must be a nonempty face of the ambient")
    X = intersection(Subcomplex.from_masks(amb, [simplex]), sub)
    if simplex in X.faces:
        return Intersection("full", simplex, 0, X)
    missing = 0
    for p in bits(simplex):
        if (simplex & ~(1 << p)) not in X.faces:
            missing |= 1 << p
    if horn_mask(amb, simplex, missing).faces == X.faces:
        return Intersection("horn", simplex, missing, X)
    return Intersection("other", simplex, 0, X)


# --------------------------------------------------------------------------
# reports

@dataclass
class Record:
    suite: str
    params: str
    status: str
    trust: tuple[str, ...] = ()
    millis: float | None = None
    detail: str = ""
    key: tuple = ()

    def trust_text(self) -> str:
        if not self.trust:
            return "-"
        c = Counter(self.trust)
        return ",".join(r if c[r] == 1 else f"{r}*{c[r]}" for r in sorted(c))

    def line(self, timings: bool = False) -> str:
        ms = f"{self.millis:.1f}" if timings and self.millis is not None else "-"
        return "\t".join((self.suite, self.params, self.status, self.trust_text(), ms))

    def digest_line(self) -> str:
        return "\t".join((self.suite, self.params, self.status, self.trust_text()))

    def as_dict(self, timings: bool = False) -> dict:
        return {"suite": self.suite, "params": self.params, "status": self.status,
                "trust": list(self.trust), "millis": round(self.millis, 1) if timings and self.millis is not None else None,
                "detail": self.detail}


@dataclass
class SuiteReport:
    name: str
    records: list[Record] = field(default_factory=list)

    def sort(self) -> "SuiteReport":
        self.records.sort(key=lambda r: (SUITE_ORDER.get(r.suite, 99), r.suite, r.key, r.params))
        return self

    @property
    def digest(self) -> str:
        h = hashlib.sha256()
        for r in self.records:
            h.update(r.digest_line().encode("utf-8"))
            h.update(b"\n")
        return h.hexdigest()

    @property
    def ok(self) -> bool:
        return all(r.status != FAIL for r in self.records)

    def counts(self) -> Counter:
        return Counter(r.status for r in self.records)

    def to_text(self, timings: bool = False) -> str:
        lines = [r.line(timings) for r in self.records]
        lines.append(f"digest {self.digest}")
        return "\n".join(lines) + "\n"

    def to_records(self, timings: bool = False) -> str:
        lines = [json.dumps(r.as_dict(timings), sort_keys=True, ensure_ascii=False) for r in self.records]
        lines.append(json.dumps({"digest": self.digest, "suite": self.name}, sort_keys=True))
        return "\n".join(lines) + "\n"

    def failures(self) -> list[Record]:
        return [r for r in self.records if r.status == FAIL]


class _Ctx:
    def __init__(self, suite: str, n_max: int, seed: int):
        self.suite = suite
        self.n_max = n_max
        self.seed = seed
        self.records: list[Record] = []

    def rng(self, tag: str) -> random.Random:
        return random.Random(f"{self.seed}:{self.suite}:{tag}")

    def run(self, params: str, key: tuple, fn: Callable[[], tuple[str, tuple, str]]) -> Record:
        t0 = time.perf_counter()
        try:
            status, trust, detail = fn()
        except Exception as exc:  # a crash is a failed instance, not a crashed suite
            status, trust, detail = FAIL, (), f"{type(exc).__name__}: {exc}"
        rec = Record(self.suite, params, status, tuple(trust), (time.perf_counter() - t0) * 1000, detail, key)
        self.records.append(rec)
        return rec


def _cert_status(cert: Certificate, allowed: Iterable[str] | None = None,
                 exact: Iterable[str] | None = None) -> tuple[str, tuple, str]:
    rep = verify(cert)
    if not rep.passed:
        return FAIL, rep.trust, rep.summary()
    trust = trust_base(cert)
    used = set(trust)
    if allowed is not None and not used <= set(allowed):
        return FAIL, trust, f"trust base uses {sorted(used - set(allowed))}"
    if exact is not None and used != set(exact):
        return FAIL, trust, f"trust base {sorted(used)} differs from {sorted(exact)}"
    return (TRUSTED if trust else PASS), trust, ""


def _fmt_labels(amb: Ambient, mask: int) -> str:
    return "{" + ",".join(amb.format_face(mask).split()) + "}"


def _obstructions(cert: Certificate) -> str:
    """Notes on sub-certificates whose trusted thin promotions are forced."""
    notes = []
    for c in all_subcerts(cert):
        if any(s.kind == "trusted" and s.rule and s.rule.startswith("R-THIN") for s in c.steps):
            why = generator_obstruction(c.claim.small, c.claim.big)
            notes.append(f"{c.id}: {why or 'trusted promotion'}")
    return "; ".join(notes)


# --------------------------------------------------------------------------
# suite_lemma36

def _flat(n: int) -> ScaledComplex:
    return ScaledComplex(Subcomplex.full_simplex(Ambient.simplex(n)), ())


def _lemma_positive(S: ScaledComplex, M, dual: bool):
    def go():
        cert = lemma36(S, M, dual)
        if any(s.kind != "an1" for s in cert.steps):
            return FAIL, (), "non-An1 step emitted"
        return _cert_status(cert, allowed=())
    return go


def _lemma_negative(S: ScaledComplex, M, dual: bool, clause: str):
    def go():
        chk = check_lemma36_hypotheses(S, M, dual)
        try:
            lemma36(S, M, dual)
        except HypothesisViolated as exc:
            if exc.clause != clause or chk.clause != clause:
                return FAIL, (), f"refused under {exc.clause!r}, expected {clause!r}"
            return REFUSED, (), exc.detail
        return FAIL, (), "violation was not refused"
    return go


def _suite_lemma36(ctx: _Ctx) -> None:
    top = max(3, ctx.n_max)
    for dual in (False, True):
        tag = "dual" if dual else "primal"
        for n in range(3, top + 1):
            base = _flat(n)
            for M in admissible_sets(n, dual):
                wit = required_witnesses(n, M, dual)
                S = ScaledComplex(base.complex, wit)
                mtxt = ",".join(map(str, M))
                key = (n, dual, M)
                ctx.run(f"n={n} M={mtxt} {tag} min", key + (0,), _lemma_positive(S, M, dual))
                rng = ctx.rng(f"{n}:{mtxt}:{tag}")
                for k in range(1, PERTURBATIONS + 1):
                    T = random_superset(S, M, rng, dual)
                    ctx.run(f"n={n} M={mtxt} {tag} rand{k} thin={len(T.thin)}", key + (k,), _lemma_positive(T, M, dual))
                # one minimal violation per applicable clause
                drop = ScaledComplex(base.complex, wit[1:])
                ctx.run(f"n={n} M={mtxt} {tag} neg=witness", key + (100,),
                        _lemma_negative(drop, M, dual, "witness"))
                if len(M) == n - 2:
                    comp = sum(1 << v for v in range(n + 1) if v not in M)
                    bad = ScaledComplex(base.complex, list(wit) + [comp])
                    ctx.run(f"n={n} M={mtxt} {tag} neg=complement", key + (101,),
                            _lemma_negative(bad, M, dual, "complement"))
            sharp = ScaledComplex(base.complex, base.complex.faces_of_dim(2))
            top_v, bot_v = (0, n) if dual else (n, 0)
            per_n = [("nonempty", ()), ("range", (top_v,)), ("s-exists", (bot_v,)),
                     ("size", tuple(range(1, n)))]
            for j, (clause, M) in enumerate(per_n):
                ctx.run(f"n={n} M={','.join(map(str, M)) or '-'} {tag} neg={clause}", (n, dual, (), 200 + j),
                        _lemma_negative(sharp, M, dual, clause))
        tiny = ScaledComplex(Subcomplex.full_simplex(Ambient.simplex(2)), [0b111])
        ctx.run(f"n=2 M=1 {tag} neg=dimension", (2, dual, (), 300), _lemma_negative(tiny, (1,), dual, "dimension"))


# --------------------------------------------------------------------------
# horn filtrations

INNER_CASES = ("s=0", "s<i", "s=i", "s>i")


def _inner_case(i: int, s: int) -> str:
    return "s=0" if s == 0 else "s<i" if s < i else "s=i" if s == i else "s>i"


def _check_table(amb: Ambient, pieces) -> str:
    """``pieces`` yields (name, simplex mask, complex it is attached to, expected M labels)."""
    for name, simplex, sub, expected in pieces:
        got = oracle_intersection(simplex, sub)
        want = amb.mask(expected)
        if got.kind != "horn" or got.M != want:
            shown = _fmt_labels(amb, got.M) if got.kind == "horn" else got.kind
            return f"{name}: oracle gives {shown}, table gives {_fmt_labels(amb, want)}"
    return ""


def _hyp_notes(parent: ScaledComplex, attachments) -> str:
    out = []
    for name, labels, M in attachments:
        chk = lemma_check(parent, labels, M)
        out.append(f"{name}:{'ok' if chk else chk.clause}")
    return "horn-lemma " + " ".join(out)


def _suite_inner_horn_T(ctx: _Ctx) -> None:
    for n in range(2, ctx.n_max + 1):
        amb = Ambient.twisted(n)
        for i in range(1, n):
            def go(n=n, i=i):
                pieces = [(f"sigma({s})", tw_mask(n, sigma(n, s)), filtration("X", n=n, i=i, s=s + 1).complex,
                           table_inner(n, i, s)) for s in range(n, -1, -1)]
                bad = _check_table(amb, pieces)
                if bad:
                    return FAIL, (), bad
                cert = inner_horn_T(n, i)
                status, trust, detail = _cert_status(cert, allowed=("R-SHARP-INNER-HORN", "R-THIN-3SIMPLEX"))
                cases = sorted({_inner_case(i, s) for s in range(n + 1)}, key=INNER_CASES.index)
                notes = [f"cases {' '.join(cases)}",
                         _hyp_notes(t_of(n), [(f"sigma({s})", sigma(n, s), table_inner(n, i, s))
                                              for s in range(n, -1, -1)])]
                if status != FAIL:
                    notes.append(_obstructions(cert))
                return status, trust, detail or "; ".join(x for x in notes if x)
            ctx.run(f"n={n} i={i}", (n, i), go)


def _suite_T_in_Q(ctx: _Ctx) -> None:
    for n in range(1, ctx.n_max + 1):
        amb = Ambient.twisted(n)

        def go(n=n, amb=amb):
            u0 = filtration("U", n=n, k=0)
            qn = q_of(n)
            if u0.faces != qn.faces or u0.thin != qn.thin:
                return FAIL, (), "U(0) differs from Q(n)"
            un = filtration("U", n=n, k=n)
            tn = t_of(n)
            if un.faces != tn.faces or un.thin != tn.thin:
                return FAIL, (), "U(n) differs from T(n)"
            pieces = []
            for k in range(n - 1, -1, -1):
                for j in range(n, k, -1):
                    sub = filtration("V", n=n, k=k, l=j + 1).complex
                    pieces.append((f"tau({k},{j})", tw_mask(n, tau(n, k, j)), sub, table_t_in_q(n, k, j)))
            bad = _check_table(amb, pieces)
            if bad:
                return FAIL, (), bad
            cert = t_in_q(n)
            status, trust, detail = _cert_status(cert, allowed=("R-SHARP-INNER-HORN", "R-THIN-3SIMPLEX"))
            note = _hyp_notes(q_of(n), [(p[0], tau(n, *map(int, p[0][4:-1].split(","))),
                                         table_t_in_q(n, *map(int, p[0][4:-1].split(","))))
                                        for p in pieces])
            obs = _obstructions(cert) if status != FAIL else ""
            return status, trust, detail or "; ".join(x for x in (f"{len(pieces)} attachments", note, obs) if x)
        ctx.run(f"n={n}", (n,), go)


def _cart_extra(n: int) -> set[int]:
    return {tw_mask(n, [(0, i), (1, n - 1), (1, n)]) for i in range(n - 1)}


def _suite_cart(ctx: _Ctx) -> None:
    for n in range(1, ctx.n_max + 1):
        amb = Ambient.twisted(n)

        def go(n=n, amb=amb):
            pieces = [(f"sigma({s})", tw_mask(n, sigma(n, s)), filtration("Xcart", n=n, s=s + 1).complex,
                       table_cart(n, s)) for s in range(n, -1, -1)]
            bad = _check_table(amb, pieces)
            if bad:
                return FAIL, (), bad
            cert = cart(n)
            status, trust, detail = _cert_status(
                cert, allowed=("R-THIN-3SIMPLEX", "R-THIN-3SIMPLEX-013"))
            obs = _obstructions(cert) if status != FAIL else ""
            return status, trust, detail or obs
        ctx.run(f"cart n={n}", (0, n), go)
    for n in range(2, ctx.n_max + 1):
        def go(n=n):
            small = filtration("LambdaBarTPrime", n=n)
            big = filtration("LambdaBarTcart", n=n)
            if small.faces != big.faces:
                return FAIL, (), "underlying complexes differ"
            if set(big.thin) - set(small.thin) != _cart_extra(n) & big.faces:
                return FAIL, (), "missing thin triangles are not the {0i,1(n-1),1n}, i < n-1"
            cert = cart_prime(n)
            if n == 2 and (cert.steps or small.thin != big.thin):
                return FAIL, (), "expected the identity at n = 2"
            status, trust, detail = _cert_status(cert, allowed=("R-THIN-3SIMPLEX",))
            return status, trust, detail or ("identity" if not cert.steps else f"{len(cert.steps)} steps")
        ctx.run(f"cart-prime n={n}", (1, n), go)


# --------------------------------------------------------------------------
# co-Segal suites

COSEGAL_Q_TRUST = ("AX-GS-K", "R-SHARP-INNER-HORN")


def _suite_q_cosegal(ctx: _Ctx) -> None:
    for n in range(2, ctx.n_max + 1):
        for i in range(1, n):
            ctx.run(f"consec n={n} i={i}", (0, n, i),
                    lambda n=n, i=i: _cert_status(q_consec(n, i), exact=COSEGAL_Q_TRUST))
    for n in range(0, ctx.n_max + 1):
        def go(n=n):
            cert = q_cosegal(n)
            sub = co_segal_sub("Q", n)
            if cert.claim.small.faces != sub.faces or cert.claim.small.thin != sub.thin:
                return FAIL, (), "certificate source differs from the co-Segal subobject"
            if cert.claim.small.faces != q_of(n, spine(n)).faces:
                return FAIL, (), "co-Segal subobject differs from Q(sp)"
            return _cert_status(cert, exact=COSEGAL_Q_TRUST if n >= 2 else ())
        ctx.run(f"cosegal n={n}", (1, n), go)


def _suite_T_cosegal(ctx: _Ctx) -> None:
    for n in range(0, ctx.n_max + 1):
        def go(n=n):
            cert = t_cosegal(n)
            sub = co_segal_sub("T", n)
            if cert.claim.small.faces != sub.faces or cert.claim.small.thin != sub.thin:
                return FAIL, (), "certificate source differs from the co-Segal subobject"
            status, trust, detail = _cert_status(cert, allowed=("R-SHARP-INNER-HORN", "R-THIN-3SIMPLEX"))
            return status, trust, detail or _obstructions(cert)
        ctx.run(f"n={n}", (n,), go)


# --------------------------------------------------------------------------
# latching

def _same(a: ScaledComplex, b: ScaledComplex) -> bool:
    return a.faces == b.faces and a.thin == b.thin


def _facet_closure(n: int, i: int) -> Subcomplex:
    amb = Ambient.simplex(n)
    return Subcomplex.from_masks(amb, [amb.full & ~(1 << i)])


def _suite_latching(ctx: _Ctx) -> None:
    for n in range(1, ctx.n_max + 1):
        def q(n=n):
            lat = latching("Q", n)
            parts = [q_of(n, _facet_closure(n, i)) for i in range(n + 1)]
            faces = set().union(*(p.faces for p in parts))
            thin = set().union(*(p.thin for p in parts))
            ok = lat.faces == faces and lat.thin == thin
            return (PASS, (), f"{len(faces)} faces") if ok else (FAIL, (), "latching(Q) differs")
        ctx.run(f"Q n={n}", (0, n), q)

        def t(n=n):
            amb = Ambient.simplex(n)
            bd = horn_mask(amb, amb.full, 0)
            want = induce(t_of(n), omega(n, bd))
            ok = _same(latching("T", n), want)
            return (PASS, (), f"{len(want.faces)} faces") if ok else (FAIL, (), "latching(T) differs")
        ctx.run(f"T n={n}", (1, n), t)
    for n in range(1, min(ctx.n_max, 3) + 1):
        def e(n=n):
            lat = latching("E", n)
            want = e_nerve(n, n + 2, latching=True)
            if lat.simplices != want.simplices:
                return FAIL, (), "latching(E) differs from the union of facet groupoids"
            return PASS, (), "counts " + ",".join(map(str, lat.counts()))
        ctx.run(f"E n={n}", (2, n), e)

    def e_counts():
        got = e_nerve(1, 2).counts()
        return (PASS, (), f"counts {got}") if got == (2, 2, 2) else (FAIL, (), f"counts {got}")
    ctx.run("E counts n=1 d=2", (3, 1), e_counts)


# --------------------------------------------------------------------------
# basic identities

def random_subcomplex(amb: Ambient, rng: random.Random, gens: int | None = None) -> Subcomplex:
    k = rng.randint(0, 4) if gens is None else gens
    masks = [rng.randint(1, amb.full) for _ in range(k)]
    return Subcomplex.from_masks(amb, masks)


def random_scaled(amb: Ambient, rng: random.Random) -> ScaledComplex:
    k = random_subcomplex(amb, rng, rng.randint(1, 4))
    tris = sorted(k.faces_of_dim(2), key=face_key)
    return ScaledComplex(k, [t for t in tris if rng.random() < 0.5])


def _conj_label(v):
    r, i = v
    return (1 - r, i)


def conj_by_relabel(x: ScaledComplex) -> ScaledComplex:
    """Conjugation computed from labels alone, without position arithmetic."""
    amb = x.ambient
    f = lambda m: amb.mask(_conj_label(v) for v in amb.labels_of(m))
    return ScaledComplex(Subcomplex(amb, (f(m) for m in x.faces)), (f(t) for t in x.thin))


def _suite_basic(ctx: _Ctx) -> None:
    n_max = ctx.n_max

    def q_pairs():
        rng = ctx.rng("q-pairs")
        amb = Ambient.simplex(4)
        for k in range(RANDOM_PAIRS):
            K, L = random_subcomplex(amb, rng), random_subcomplex(amb, rng)
            a, b, c = q_of(4, K), q_of(4, L), q_of(4, intersection(K, L))
            if (a.faces & b.faces) != c.faces or (a.thin & b.thin) != c.thin:
                return FAIL, (), f"pair {k}: Q(K∩L) != Q(K)∩Q(L)"
        return PASS, (), f"{RANDOM_PAIRS} pairs"
    ctx.run("Q(K∩L) n=4", (0,), q_pairs)

    def omega_lattice():
        rng = ctx.rng("omega-pairs")
        for n in range(1, n_max + 1):
            amb = Ambient.simplex(n)
            for k in range(RANDOM_PAIRS):
                K, L = random_subcomplex(amb, rng), random_subcomplex(amb, rng)
                oK, oL = omega(n, K), omega(n, L)
                if omega(n, intersection(K, L)) != intersection(oK, oL):
                    return FAIL, (), f"n={n} pair {k}: Ω(K∩L) != Ω(K)∩Ω(L)"
                if not omega(n, intersection(K, L)).issubset(oK):
                    return FAIL, (), f"n={n} pair {k}: Ω not monotone"
        return PASS, (), f"{RANDOM_PAIRS} pairs per level"
    ctx.run(f"Omega lattice n<={n_max}", (1,), omega_lattice)

    for n in range(0, max(T3_SCAN_MAX, n_max) + 1):
        def t3(n=n):
            hit = q_thin_families(n)["T3"] & t_of(n).faces
            if hit:
                return FAIL, (), f"{len(hit)} T3 triangles in Ω^{n}"
            return PASS, (), f"{len(t_of(n).complex.faces_of_dim(2))} triangles checked"
        ctx.run(f"T3-exclusion n={n}", (2, n), t3)

    for n in range(0, n_max + 1):
        def cj(n=n):
            qn, tn = q_of(n), t_of(n)
            if not _same(conj(qn), qn):
                return FAIL, (), "conj(Q(n)) != Q(n)"
            if not _same(conj(tn), conj_by_relabel(tn)):
                return FAIL, (), "conj(T(n)) differs from the relabelled description"
            fam = q_thin_families(n)
            if {conj(ScaledComplex(qn.complex, [t])).sorted_thin()[0] for t in fam["T2"]} != set(fam["T3"]):
                return FAIL, (), "conj does not exchange T2 and T3"
            conj_sigmas = [closure_of(n, [_conj_label(v) for v in sigma(n, r)]) for r in range(n + 1)]
            faces = set().union(*(c.faces for c in conj_sigmas))
            if conj(tn).faces != faces:
                return FAIL, (), "conj(Ω^n) is not spanned by the conjugate staircases"
            return PASS, (), ""
        ctx.run(f"conj n={n}", (3, n), cj)

    def involutions():
        rng = ctx.rng("involutions")
        for k in range(RANDOM_INVOLUTIONS):
            n = rng.randint(1, 3)
            x = random_scaled(Ambient.twisted(n), rng)
            if not _same(conj(conj(x)), x):
                return FAIL, (), f"sample {k}: conj not an involution"
            y = order_reverse_scaled(order_reverse_scaled(x))
            if y.faces != x.faces or y.thin != x.thin:
                return FAIL, (), f"sample {k}: order reversal not an involution"
            if len(order_reverse_scaled(x).thin) != len(x.thin):
                return FAIL, (), f"sample {k}: order reversal changed the thin count"
        return PASS, (), f"{RANDOM_INVOLUTIONS} samples"
    ctx.run("involutions", (4,), involutions)

    for n in range(0, n_max + 1):
        def hats(n=n):
            rng = ctx.rng(f"hats-{n}")
            amb = Ambient.simplex(n)
            Ks = [Subcomplex.full_simplex(amb)] + [random_subcomplex(amb, rng) for _ in range(10)]
            for K in Ks:
                if omega(n, K) != omega_hat_of(n, K):
                    return FAIL, (), "staircase and hat descriptions of Ω differ"
            return PASS, (), f"{len(Ks)} complexes"
        ctx.run(f"Omega-vs-hats n={n}", (5, n), hats)

    for name in ("Q", "T"):
        def cosimp(name=name):
            fam = family(name)
            count = 0
            for n in range(2, n_max + 1):
                for j in range(n + 1):
                    for i in range(j):
                        x = fam.level(n - 2)
                        lhs = compose_ops(coface(n, j), coface(n - 1, i))
                        rhs = compose_ops(coface(n, i), coface(n - 1, j - 1))
                        a = map_image(tw_vertex_map(lhs, n), x.complex)
                        b = map_image(tw_vertex_map(rhs, n), x.complex)
                        if a != b or fam.act(lhs, n).thin != fam.act(rhs, n).thin:
                            return FAIL, (), f"d^{j} d^{i} != d^{i} d^{j - 1} at level {n}"
                        count += 1
            return PASS, (), f"{count} identities"
        ctx.run(f"cosimplicial {name}", (6, name), cosimp)


# --------------------------------------------------------------------------
# spine of P and nerve models

def _suite_spine_P(ctx: _Ctx) -> None:
    def go():
        cert = spine_P()
        status, trust, detail = _cert_status(cert, allowed=("R-THIN-3SIMPLEX",))
        return status, trust, detail or _obstructions(cert)
    ctx.run("n=1", (1,), go)


def _suite_nerve_models(ctx: _Ctx) -> None:
    cap = min(ctx.n_max, NERVE_N_CAP)
    for idx, C in enumerate(nerve.catalog()):
        rep = nerve.compare_models(C, cap)
        counts = ",".join(map(str, rep.counts))

        def go(rep=rep):
            return (PASS if rep.passed else FAIL), (), rep.detail or " ".join(rep.checks)
        ctx.run(f"category={C.name} n<={cap} counts={counts}", (idx,), go)


SUITES: dict[str, Callable[[_Ctx], None]] = {
    "suite_lemma36": _suite_lemma36,
    "suite_inner_horn_T": _suite_inner_horn_T,
    "suite_T_in_Q": _suite_T_in_Q,
    "suite_cart": _suite_cart,
    "suite_q_cosegal": _suite_q_cosegal,
    "suite_T_cosegal": _suite_T_cosegal,
    "suite_latching": _suite_latching,
    "suite_basic_identities": _suite_basic,
    "suite_spine_P": _suite_spine_P,
    "suite_nerve_models": _suite_nerve_models,
}
SUITE_ORDER = {name: k for k, name in enumerate(SUITES)}


class UnknownSuite(KeyError):
    pass


def run_suite(name: str, n_max: int | None = None, seed: int | None = None) -> SuiteReport:
    if name not in SUITES:
        raise UnknownSuite(name)
    ctx = _Ctx(name, DEFAULT_N_MAX if n_max is None else n_max, DEFAULT_SEED if seed is None else seed)
    SUITES[name](ctx)
    return SuiteReport(name, ctx.records).sort()


def run_all(n_max: int | None = None, seed: int | None = None) -> SuiteReport:
    out = SuiteReport("all")
    for name in SUITES:
        out.records += run_suite(name, n_max, seed).records
    return out.sort()
