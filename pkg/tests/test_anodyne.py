import random
from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from scaledtw.anodyne import (
    AN2_ADDED,
    AN2_THIN,
    TRUSTED_RULES,
    Certificate,
    CertificateError,
    HypothesisViolated,
    ScaledInclusion,
    Step,
    admissible_sets,
    an2_pair,
    apply_step,
    check_lemma36_hypotheses,
    generator_obstruction,
    horn_fill,
    lemma36,
    random_superset,
    required_witnesses,
    reverse_certificate,
    trust_base,
    verify,
)
from scaledtw.complex import Ambient, Subcomplex, VertexMap, horn_mask
from scaledtw.scaling import ScaledComplex, induce, order_reverse_scaled, scaled_image


def simplex_scaling(n, thin=()):
    amb = Ambient.simplex(n)
    return ScaledComplex(Subcomplex.full_simplex(amb), [amb.mask(t) if not isinstance(t, int) else t
                                                        for t in thin])


@st.composite
def lemma_instances(draw, n_values=(3, 4, 5)):
    n = draw(st.sampled_from(n_values))
    dual = draw(st.booleans())
    M = draw(st.sampled_from(admissible_sets(n, dual)))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    base = simplex_scaling(n, required_witnesses(n, M, dual))
    return random_superset(base, M, random.Random(seed), dual), M, dual


# ---------------------------------------------------------------- horn lemma examples

def test_base_case_single_step():
    S = simplex_scaling(3, [(0, 1, 2)])
    cert = lemma36(S, [1])
    assert [s.label() for s in cert.steps] == ["An1(3,1)"]
    rep = verify(cert)
    assert rep.passed and rep.trust == ()


def test_missing_witness_fails_at_step_one():
    good = lemma36(simplex_scaling(3, [(0, 1, 2)]), [1])
    flat = simplex_scaling(3)
    small = induce(flat, good.claim.small.complex)
    bare = tuple(Step(s.kind, s.embed, s.n, s.i) for s in good.steps)
    bad = Certificate("bad", ScaledInclusion(small, flat), bare)
    rep = verify(bad)
    assert not rep.passed and rep.failed_step == 1
    assert "thin" in rep.detail


def test_five_dimensional_example():
    S = simplex_scaling(5, [(2, 4, 5), (3, 4, 5)])
    assert (0b100101 not in S.thin)
    cert = lemma36(S, [1, 3, 4])
    rep = verify(cert)
    assert rep.passed and rep.trust == ()
    assert all(s.kind == "an1" for s in cert.steps)


def test_flat_violation_message():
    with pytest.raises(HypothesisViolated, match=r"\{0,1,2\} not thin"):
        lemma36(simplex_scaling(3), [1])


@pytest.mark.parametrize("M,dual,clause,msg", [
    ([5], False, "range", "M must avoid the top vertex"),
    ([0], True, "range", "M must avoid the bottom vertex"),
    ([], False, "nonempty", ""),
    ([0], False, "s-exists", ""),
    ([1, 2, 3, 4], False, "size", ""),
])
def test_clause_violations(M, dual, clause, msg):
    chk = check_lemma36_hypotheses(simplex_scaling(5), M, dual)
    assert not chk and chk.clause == clause and msg in chk.detail


def test_complement_clause_names_triangle():
    S = simplex_scaling(4, [(1, 3, 4), (2, 3, 4), (0, 1, 4)])
    chk = check_lemma36_hypotheses(S, [2, 3])
    assert chk.clause == "complement" and "{0,1,4}" in chk.detail


def test_dimension_clause():
    chk = check_lemma36_hypotheses(simplex_scaling(2, [(0, 1, 2)]), [1])
    assert chk.clause == "dimension"


def test_admissible_counts():
    assert [len(admissible_sets(n)) for n in (3, 4, 5)] == [2, 8, 22]
    assert [len(admissible_sets(n, dual=True)) for n in (3, 4, 5)] == [2, 8, 22]


@given(lemma_instances())
def test_lemma_certificates_verify(inst):
    S, M, dual = inst
    assert check_lemma36_hypotheses(S, M, dual)
    cert = lemma36(S, M, dual)
    assert all(s.kind == "an1" for s in cert.steps)
    rep = verify(cert)
    assert rep.passed, rep.summary()
    assert trust_base(cert) == ()
    assert generator_obstruction(cert.claim.small, cert.claim.big) is None


@given(lemma_instances())
def test_monotone_replay(inst):
    cert = lemma36(*inst)
    faces, thin = cert.claim.small.faces, cert.claim.small.thin
    for s in cert.steps:
        f2, t2, af, at = apply_step(cert.ambient, faces, thin, s, None)
        assert (f2 > faces) or (t2 > thin)
        faces, thin = f2, t2


@given(lemma_instances(), st.data())
def test_mutated_records_fail(inst, data):
    cert = lemma36(*inst)
    k = data.draw(st.integers(0, len(cert.steps) - 1))
    step = cert.steps[k]
    amb = cert.ambient
    extra = data.draw(st.sampled_from(sorted(cert.claim.big.faces)))
    mutated_faces = step.added_faces ^ {extra}
    steps = list(cert.steps)
    steps[k] = replace(step, added_faces=frozenset(mutated_faces))
    rep = verify(replace(cert, steps=tuple(steps)))
    assert not rep.passed and rep.failed_step == k + 1
    steps[k] = replace(step, added_thins=step.added_thins | {amb.mask([0, 1, 2])} if amb.mask([0, 1, 2]) not in step.added_thins else frozenset())
    assert not verify(replace(cert, steps=tuple(steps))).passed


@given(lemma_instances())
def test_dual_is_reversed_primal(inst):
    S, M, dual = inst
    n = S.ambient.size - 1
    R = order_reverse_scaled(S)
    Mr = sorted(n - v for v in M)
    other = lemma36(R, Mr, not dual)
    mirrored = reverse_certificate(other)
    mine = lemma36(S, M, dual)
    assert mirrored.claim == mine.claim
    assert [(s.embed, s.n, s.i, s.added_faces, s.added_thins) for s in mirrored.steps] == \
           [(s.embed, s.n, s.i, s.added_faces, s.added_thins) for s in mine.steps]


# ---------------------------------------------------------------- kernel checks

def test_an1_outer_index_rejected():
    S = simplex_scaling(3, [(0, 1, 2)])
    small = induce(S, horn_mask(S.ambient, S.ambient.full, 1))
    for i in (0, 3):
        cert = Certificate("x", ScaledInclusion(small, S), (Step("an1", (0, 1, 2, 3), n=3, i=i),))
        assert not verify(cert).passed


def test_non_injective_embedding_rejected():
    S = simplex_scaling(3, [(0, 1, 2)])
    small = induce(S, horn_mask(S.ambient, S.ambient.full, 1))
    cert = Certificate("x", ScaledInclusion(small, S), (Step("an1", (0, 1, 1, 3), n=3, i=1),))
    rep = verify(cert)
    assert not rep.passed and "injective" in rep.detail


def test_an3_has_no_matcher():
    S = simplex_scaling(3)
    cert = Certificate("x", ScaledInclusion(S, S), (Step("an3", (0, 1, 2, 3)),))
    assert "An3" in verify(cert).detail


def test_trusted_shape_is_checked():
    S = simplex_scaling(3, [(0, 1, 2), (0, 1, 3), (1, 2, 3), (0, 2, 3)])
    small = ScaledComplex(S.complex, [S.ambient.mask(t) for t in [(0, 1, 2), (0, 1, 3), (1, 2, 3)]])
    good = Certificate("g", ScaledInclusion(small, S), (Step("trusted", (0, 1, 2, 3), rule="R-THIN-3SIMPLEX"),))
    assert verify(good).passed and trust_base(good) == ("R-THIN-3SIMPLEX",)
    wrong = Certificate("w", ScaledInclusion(small, S), (Step("trusted", (0, 1, 2, 3), rule="R-THIN-3SIMPLEX-013"),))
    assert not verify(wrong).passed
    unknown = Certificate("u", ScaledInclusion(small, S), (Step("trusted", (0, 1, 2, 3), rule="R-NOPE"),))
    assert "unknown trusted rule" in verify(unknown).detail


def test_final_state_must_match():
    S = simplex_scaling(3, [(0, 1, 2)])
    cert = lemma36(S, [1])
    short = replace(cert, steps=cert.steps[:-1]) if len(cert.steps) > 1 else replace(cert, steps=())
    rep = verify(short)
    assert not rep.passed and rep.failed_step == len(short.steps) + 1
    assert "final state differs" in rep.detail


def test_dangling_reference():
    S = simplex_scaling(3, [(0, 1, 2)])
    cert = Certificate("x", ScaledInclusion(S, S), (Step("derived", (0, 1, 2, 3), ref="ghost"),))
    assert not verify(cert).passed
    with pytest.raises(CertificateError, match="dangling"):
        trust_base(cert)


def test_trust_accumulates_through_derived_steps():
    full = Subcomplex.full_simplex(Ambient.simplex(3))
    S = ScaledComplex(full, full.faces_of_dim(2))
    sub = Certificate("piece", ScaledInclusion(ScaledComplex(full, sorted(S.thin - {0b1101})), S),
                      (Step("trusted", (0, 1, 2, 3), rule="R-THIN-3SIMPLEX"),))
    assert verify(sub).passed
    parent = Certificate("parent", sub.claim, (Step("derived", (0, 1, 2, 3), ref="piece"),), (sub,))
    rep = verify(parent)
    assert rep.passed and rep.trust == trust_base(parent) == ("R-THIN-3SIMPLEX",)


# ---------------------------------------------------------------- trusted rules as An2 images

@pytest.mark.parametrize("table,rule", [((0, 1, 1, 2, 3), "R-THIN-3SIMPLEX"),
                                        ((0, 1, 2, 2, 3), "R-THIN-3SIMPLEX-013")])
def test_thin_rules_are_collapsed_an2(table, rule):
    """Pushing An2 out along a codegeneracy Δ^4 → Δ^3 gives exactly the rule."""
    d, e = an2_pair()
    f = VertexMap(Ambient.simplex(4), Ambient.simplex(3), table)
    rd, re = TRUSTED_RULES[rule].build()
    assert scaled_image(f, d) == rd
    assert scaled_image(f, e) == re


def test_an2_pair_shape():
    d, e = an2_pair()
    assert len(d.thin) == len(AN2_THIN) == 5
    assert e.thin - d.thin == {Ambient.simplex(4).mask(t) for t in AN2_ADDED}


# ---------------------------------------------------------------- horn_fill

def test_horn_fill_prefers_generators():
    S = simplex_scaling(4, [(0, 1, 2), (1, 2, 3), (2, 3, 4), (1, 3, 4)])
    cert = horn_fill(S, [3])
    assert verify(cert).passed and trust_base(cert) == ()


def test_horn_fill_rejects_bad_pivot():
    with pytest.raises(CertificateError):
        horn_fill(simplex_scaling(3, [(0, 1, 2)]), [1], pivot=2)


def test_obstruction_examples():
    amb = Ambient.simplex(3)
    big = ScaledComplex(Subcomplex.full_simplex(amb), Subcomplex.full_simplex(amb).faces_of_dim(2))
    spine = Subcomplex.from_masks(amb, [0b0011, 0b0110, 0b1100])
    why = generator_obstruction(induce(big, spine), big)
    assert why and "0 3" in why
    assert generator_obstruction(big, big) is None


# ---------------------------------------------------------------- trusted promotions are necessary

def _trusted_pieces(cert):
    from scaledtw.proofs import all_subcerts
    return {s.id: s for s in all_subcerts(cert)
            if s.ambient.name.startswith("simplex") and any(st.kind == "trusted" for st in s.steps)}


@pytest.mark.parametrize("maker,args,piece", [
    ("inner_horn_T", (2, 1), "inner-horn-T(2,1)/sigma(2)"),
    ("inner_horn_T", (3, 1), "inner-horn-T(3,1)/sigma(3)"),
    ("cart", (2,), "cart(2)/sigma(1)"),
    ("cart", (2,), "cart(2)/sigma(2)"),
    ("t_in_q", (2,), "T-in-Q(2)/tau(0,2)"),
    ("t_in_q", (3,), "T-in-Q(3)/tau(1,3)"),
    ("t_in_q", (4,), "T-in-Q(4)/tau(2,4)"),
])
def test_generator_obstruction_fires(maker, args, piece):
    from scaledtw import proofs
    sub = _trusted_pieces(getattr(proofs, maker)(*args))[piece]
    assert generator_obstruction(sub.claim.small, sub.claim.big)


@pytest.mark.parametrize("maker,args,piece", [
    ("inner_horn_T", (2, 1), "inner-horn-T(2,1)/sigma(2)"),
    ("cart", (2,), "cart(2)/sigma(1)"),
    ("cart", (2,), "cart(2)/sigma(2)"),
    ("t_in_q", (3,), "T-in-Q(3)/tau(1,3)"),
])
def test_no_generator_only_fill_exists(maker, args, piece):
    from scaledtw import proofs
    from search import reachable
    sub = _trusted_pieces(getattr(proofs, maker)(*args))[piece]
    assert reachable(sub.claim.small, sub.claim.big) is False


def test_spine_needs_a_promotion():
    from scaledtw.proofs import spine_P
    from search import reachable
    c = spine_P()
    assert generator_obstruction(c.claim.small, c.claim.big)
    assert reachable(c.claim.small, c.claim.big) is False


def test_search_finds_lemma_fill():
    from search import reachable
    c = lemma36(simplex_scaling(3, [(0, 1, 2)]), [1])
    assert reachable(c.claim.small, c.claim.big) is True
