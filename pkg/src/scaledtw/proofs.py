"""Certificates for the horn filtrations over tw(n).

Each filtration attaches one simplex at a time.  An attachment is a derived
step pointing at a horn-filling certificate on the simplex's own vertex
set, whose scaling is pulled back from the target complex.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .anodyne import (
    Certificate,
    ScaledInclusion,
    Step,
    check_lemma36_hypotheses,
    horn_fill,
    record_additions,
)
from .complex import Ambient, Label, Subcomplex, bits, horn, spanned
from .constructions import (
    coface,
    filtration,
    inert,
    omega,
    q_of,
    sigma,
    spine,
    t_of,
    tau,
    tw_vertex_map,
)
from .scaling import ScaledComplex, induce, make_scaled


# --------------------------------------------------------------------------
# tables of the missing vertex sets

def table_inner(n: int, i: int, s: int) -> tuple[Label, ...]:
    if s == 0:
        return ((1, i),)
    if s < i:
        return ((0, s), (1, i))
    if s == i:
        return ((0, i),)
    return ((0, i), (0, s))


def table_t_in_q(n: int, k: int, j: int) -> tuple[Label, ...]:
    out = [(0, a) for a in range(k + 1)] + [(1, a) for a in range(k + 1, n + 1)]
    if j < n:
        out += [(0, a) for a in range(j + 1, n + 1)]
    return tuple(out)


def table_cart(n: int, s: int) -> tuple[Label, ...]:
    if s == 0:
        return ((1, n),)
    if s < n:
        return ((0, s), (1, n))
    return ((0, n),)


# --------------------------------------------------------------------------
# local pullbacks

def pullback(parent: ScaledComplex, labels: Sequence[Label]) -> tuple[ScaledComplex, tuple[int, ...]]:
    """Scaling of Δ^m induced on the simplex spanned by ``labels``."""
    amb = parent.ambient
    positions = tuple(sorted(amb.position(v) for v in labels))
    local = {p: q for q, p in enumerate(positions)}
    top = sum(1 << p for p in positions)
    thin = []
    for t in parent.thin:
        if t & ~top == 0:
            thin.append(sum(1 << local[p] for p in bits(t)))
    m = len(positions) - 1
    return ScaledComplex(Subcomplex.full_simplex(Ambient.simplex(m)), thin), positions


def local_horn_set(parent: ScaledComplex, labels: Sequence[Label], M: Sequence[Label]) -> list[int]:
    amb = parent.ambient
    positions = sorted(amb.position(v) for v in labels)
    return [positions.index(amb.position(v)) for v in M]


def horn_attachment(parent: ScaledComplex, labels: Sequence[Label], M: Sequence[Label],
                    cert_id: str) -> tuple[Step, Certificate]:
    S, positions = pullback(parent, labels)
    sub = horn_fill(S, local_horn_set(parent, labels, M), cert_id=cert_id)
    return Step("derived", positions, ref=cert_id), sub


def lemma_check(parent: ScaledComplex, labels: Sequence[Label], M: Sequence[Label]):
    """Horn-lemma hypotheses for an attachment, tried in both orientations."""
    S, _ = pullback(parent, labels)
    local = local_horn_set(parent, labels, M)
    primal = check_lemma36_hypotheses(S, local, dual=False)
    if primal:
        return primal
    dual = check_lemma36_hypotheses(S, local, dual=True)
    return dual if dual else primal


def _cert(cid: str, small: ScaledComplex, big: ScaledComplex, steps, deps) -> Certificate:
    cert = Certificate(cid, ScaledInclusion(small, big), tuple(steps), tuple(deps))
    return record_additions(cert)


def _row_positions(n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return tuple(range(n + 1)), tuple(range(n + 1, 2 * n + 2))


# --------------------------------------------------------------------------
# inner horns of T

@lru_cache(maxsize=None)
def inner_horn_T(n: int, i: int) -> Certificate:
    """Λ^n_i T → T(n)."""
    if not 0 < i < n:
        raise ValueError("inner horn needs 0 < i < n")
    big = t_of(n)
    small = filtration("LambdaT", n=n, i=i)
    cid = f"inner-horn-T({n},{i})"
    row0, row1 = _row_positions(n)
    steps = [Step("trusted", row0, n=n, i=i, rule="R-SHARP-INNER-HORN"),
             Step("trusted", row1, n=n, i=n - i, rule="R-SHARP-INNER-HORN")]
    deps = []
    for s in range(n, -1, -1):
        st, sub = horn_attachment(big, sigma(n, s), table_inner(n, i, s), f"{cid}/sigma({s})")
        steps.append(st)
        deps.append(sub)
    return _cert(cid, small, big, steps, deps)


# --------------------------------------------------------------------------
# T(n) inside Q(n)

@lru_cache(maxsize=None)
def t_in_q(n: int) -> Certificate:
    big = q_of(n)
    small = t_of(n)
    cid = f"T-in-Q({n})"
    steps, deps = [], []
    for k in range(n - 1, -1, -1):
        for j in range(n, k, -1):
            st, sub = horn_attachment(big, tau(n, k, j), table_t_in_q(n, k, j), f"{cid}/tau({k},{j})")
            steps.append(st)
            deps.append(sub)
    return _cert(cid, small, big, steps, deps)


# --------------------------------------------------------------------------
# cartesian scaling

@lru_cache(maxsize=None)
def cart(n: int) -> Certificate:
    """Λ̄^n_n T_cart → T(n)_cart."""
    if n < 1:
        raise ValueError("cart needs n >= 1")
    big = t_of(n, "cart")
    small = filtration("LambdaBarTcart", n=n)
    cid = f"cart({n})"
    steps, deps = [], []
    for s in range(n, -1, -1):
        st, sub = horn_attachment(big, sigma(n, s), table_cart(n, s), f"{cid}/sigma({s})")
        steps.append(st)
        deps.append(sub)
    return _cert(cid, small, big, steps, deps)


@lru_cache(maxsize=None)
def cart_prime(n: int) -> Certificate:
    """Λ̄^n_n T′ → Λ̄^n_n T_cart."""
    if n < 2:
        raise ValueError("cart_prime needs n >= 2")
    small = filtration("LambdaBarTPrime", n=n)
    big = filtration("LambdaBarTcart", n=n)
    amb = Ambient.twisted(n)
    steps = []
    # at n = 2 the 3-simplices below are not in the complex: identity map
    for i in range(n - 1 if n >= 3 else 0):
        emb = tuple(sorted(amb.position(v) for v in [(0, i), (0, n - 1), (1, n), (1, n - 1)]))
        steps.append(Step("trusted", emb, rule="R-THIN-3SIMPLEX"))
    return _cert(f"cart-prime({n})", small, big, steps, ())


# --------------------------------------------------------------------------
# co-Segal filtrations

def _consec_base(n: int, i: int) -> Subcomplex:
    return horn(Ambient.simplex(n), range(n + 1), range(1, i + 1))


@lru_cache(maxsize=None)
def q_inner(n: int, i: int) -> Certificate:
    """Q(Λ^n_i) → Q(n) through (K^n_i)_S."""
    small = q_of(n, horn(Ambient.simplex(n), range(n + 1), [i]))
    big = q_of(n)
    row0, row1 = _row_positions(n)
    steps = [Step("trusted", row0, n=n, i=i, rule="R-SHARP-INNER-HORN"),
             Step("trusted", row1, n=n, i=n - i, rule="R-SHARP-INNER-HORN"),
             Step("trusted", tuple(range(2 * n + 2)), n=n, i=i, rule="AX-GS-K")]
    return _cert(f"Q-inner({n},{i})", small, big, steps, ())


def _tw_embed(alpha: Sequence[int], n: int) -> tuple[int, ...]:
    return tw_vertex_map(alpha, n).table


@lru_cache(maxsize=None)
def q_consec(n: int, i: int) -> Certificate:
    """Q(Λ^n_{1..i}) → Q(n) for 1 <= i < n."""
    if not 1 <= i < n:
        raise ValueError("consecutive horn needs 1 <= i < n")
    if i == 1:
        return q_inner(n, 1)
    lower = q_consec(n - 1, i - 1)
    prev = q_consec(n, i - 1)
    steps = [Step("derived", _tw_embed(coface(n, i), n), ref=lower.id),
             Step("derived", tuple(range(2 * n + 2)), ref=prev.id)]
    return _cert(f"Q-consec({n},{i})", q_of(n, _consec_base(n, i)), q_of(n), steps, (lower, prev))


@lru_cache(maxsize=None)
def q_cosegal(n: int) -> Certificate:
    """Q(sp_[0,n]) → Q(n)."""
    small = q_of(n, spine(n))
    big = q_of(n)
    steps, deps = [], []
    if n >= 3:
        lower = q_cosegal(n - 1)
        steps.append(Step("derived", _tw_embed(coface(n, n), n), ref=lower.id))
        deps.append(lower)
    for i in range(n - 2, -1, -1):
        sub = q_consec(n - i, n - i - 1)
        steps.append(Step("derived", _tw_embed(inert(n, i, n), n), ref=sub.id))
        deps.append(sub)
    return _cert(f"Q-cosegal({n})", small, big, steps, deps)


def _t_on(n: int, K: Subcomplex) -> ScaledComplex:
    return induce(t_of(n), omega(n, K))


@lru_cache(maxsize=None)
def t_consec(n: int, i: int) -> Certificate:
    """Ω(Δ^1 × Λ^n_{1..i}) → T(n) for 1 <= i < n."""
    if not 1 <= i < n:
        raise ValueError("consecutive horn needs 1 <= i < n")
    if i == 1:
        return inner_horn_T(n, 1)
    lower = t_consec(n - 1, i - 1)
    prev = t_consec(n, i - 1)
    steps = [Step("derived", _tw_embed(coface(n, i), n), ref=lower.id),
             Step("derived", tuple(range(2 * n + 2)), ref=prev.id)]
    return _cert(f"T-consec({n},{i})", _t_on(n, _consec_base(n, i)), t_of(n), steps, (lower, prev))


@lru_cache(maxsize=None)
def t_cosegal(n: int) -> Certificate:
    """T(1) ∐_{T(0)} ... ∐_{T(0)} T(1) → T(n)."""
    small = _t_on(n, spine(n))
    big = t_of(n)
    steps, deps = [], []
    if n >= 3:
        lower = t_cosegal(n - 1)
        steps.append(Step("derived", _tw_embed(coface(n, n), n), ref=lower.id))
        deps.append(lower)
    for i in range(n - 2, -1, -1):
        sub = t_consec(n - i, n - i - 1)
        steps.append(Step("derived", _tw_embed(inert(n, i, n), n), ref=sub.id))
        deps.append(sub)
    return _cert(f"T-cosegal({n})", small, big, steps, deps)


# --------------------------------------------------------------------------
# the spine of P(1)

@lru_cache(maxsize=None)
def spine_P() -> Certificate:
    """Sp_1(P) → P(1) = (Δ^3 on 00<01<11<10)_♯."""
    amb = Ambient.twisted(1)
    big = make_scaled(Subcomplex.full_simplex(amb), mode="sharp")
    small = make_scaled(spanned(amb, [[(0, 0), (0, 1)], [(0, 1), (1, 1)], [(1, 1), (1, 0)]]),
                        mode="sharp")
    steps = [Step("an1", (0, 1, 2), n=2, i=1),
             Step("an1", (1, 2, 3), n=2, i=1),
             Step("an1", (0, 1, 3), n=2, i=1),
             Step("an1", (0, 1, 2, 3), n=3, i=1),
             Step("trusted", (0, 1, 2, 3), rule="R-THIN-3SIMPLEX")]
    return _cert("spine-P(1)", small, big, steps, ())


def all_subcerts(cert: Certificate) -> list[Certificate]:
    from .anodyne import dependency_order
    return dependency_order(cert)

