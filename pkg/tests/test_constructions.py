import pytest
from hypothesis import given
from hypothesis import strategies as st

from scaledtw.complex import Ambient, ComplexError, Subcomplex, horn, intersection, map_image
from scaledtw.constructions import (
    closure_of,
    co_segal_sub,
    codegeneracy,
    coface,
    compose_ops,
    e_nerve,
    family,
    filtration,
    latching,
    omega,
    omega_full,
    omega_hat_of,
    q_of,
    q_thin_families,
    sigma,
    spine,
    t_of,
    tau,
    tw_vertex_map,
)
from scaledtw.scaling import induce

import oracles


def labels(x, masks):
    return oracles.masks_to_labels(x.ambient, masks)


def L(*toks):
    return frozenset((int(t[0]), int(t[1])) for t in toks)


@st.composite
def base_complexes(draw, n=4):
    amb = Ambient.simplex(n)
    gens = draw(st.lists(st.integers(1, amb.full), max_size=4))
    return Subcomplex.from_masks(amb, gens)


def as_label_faces(K):
    return {frozenset(K.ambient.labels_of(m)) for m in K.faces}


# ---------------------------------------------------------------- Q

def test_q1_thin_set():
    q = q_of(1)
    assert labels(q, q.thin) == {L("00", "01", "11"), L("01", "11", "10")}
    assert L("00", "11", "10") not in labels(q, q.thin)


def test_q2_family_sizes():
    fam = q_thin_families(2)
    assert (len(fam["T1"]), len(fam["T2"]), len(fam["T3"])) == (2, 4, 4)
    q = q_of(2)
    assert len(q.thin) == 10 and len(q.complex.faces_of_dim(2)) == 20


@pytest.mark.parametrize("n", range(5))
def test_q_thin_matches_definition(n):
    q = q_of(n)
    assert labels(q, q.thin) == oracles.q_thin(n)


def test_q_intersection_example():
    amb = Ambient.simplex(2)
    K = horn(amb, range(3), [1])
    Lc = Subcomplex.from_masks(amb, [0b101])
    a, b = q_of(2, K), q_of(2, Lc)
    c = q_of(2, intersection(K, Lc))
    assert a.faces & b.faces == c.faces and a.thin & b.thin == c.thin


@given(base_complexes(), base_complexes())
def test_q_intersection_property(K, M):
    a, b, c = q_of(4, K), q_of(4, M), q_of(4, intersection(K, M))
    assert a.faces & b.faces == c.faces
    assert a.thin & b.thin == c.thin


@given(base_complexes(3))
def test_q_of_faces_oracle(K):
    got = q_of(3, K)
    assert labels(got, got.faces) == oracles.q_faces(3, as_label_faces(K))


# ---------------------------------------------------------------- Ω and T

def test_omega_counts():
    assert len(omega_full(2)) == 31
    assert omega_full(1).f_vector() == (4, 5, 2)
    assert omega(3, Subcomplex(Ambient.simplex(3), ())).is_empty()


@pytest.mark.parametrize("n", range(5))
def test_omega_oracle_and_shape(n):
    om = omega_full(n)
    assert labels(om, om.faces) == oracles.omega_faces(n)
    assert len(om.faces_of_dim(n + 1)) == n + 1
    amb = om.ambient
    for i in range(n + 1):
        for j in range(n + 1):
            edge = amb.mask([(0, i), (1, j)])
            assert (edge in om.faces) == (i <= j)
    for r in range(n + 1):
        assert len(sigma(n, r)) == n + 2


@given(base_complexes(), base_complexes())
def test_omega_lattice_and_oracle(K, M):
    assert omega(4, intersection(K, M)) == omega(4, K) & omega(4, M)
    assert omega(4, K | M) == omega(4, K) | omega(4, M)
    assert omega(4, intersection(K, M)).issubset(omega(4, K))
    got = omega(4, K)
    assert labels(got, got.faces) == oracles.omega_faces(4, as_label_faces(K))


@given(base_complexes())
def test_omega_hat_agreement(K):
    assert omega(4, K) == omega_hat_of(4, K)


def test_t2_thin():
    t = t_of(2)
    want = {L("00", "01", "02"), L("10", "11", "12"), L("00", "01", "11"),
            L("00", "01", "12"), L("00", "02", "12"), L("01", "02", "12")}
    assert labels(t, t.thin) == want
    cart = t_of(2, "cart")
    assert labels(cart, cart.thin) == want | {L("00", "11", "12"), L("01", "11", "12")}


def test_t_cart_at_zero_rejected():
    with pytest.raises(ComplexError):
        t_of(0, "cart")


@pytest.mark.parametrize("n", range(7))
def test_t3_exclusion(n):
    assert not (q_thin_families(n)["T3"] & t_of(n).faces)


@pytest.mark.parametrize("n", range(5))
def test_t_scaling_induced_from_q(n):
    assert t_of(n) == induce(q_of(n), omega_full(n))


# ---------------------------------------------------------------- σ and τ

def test_sigma_tau_examples():
    assert set(sigma(2, 1)) == set(L("00", "01", "11", "12"))
    assert set(tau(2, 0, 2)) == set(L("00", "02", "10", "11", "12"))
    assert set(tau(2, 0, 3)) == set(sigma(2, 0))
    with pytest.raises(ComplexError):
        sigma(2, 3)
    with pytest.raises(ComplexError):
        tau(2, 2, 2)


# ---------------------------------------------------------------- filtrations

def test_lambda_bar_t21():
    got = filtration("LambdaBarT", n=2, i=1)
    parts = [omega(2, Subcomplex.from_masks(Ambient.simplex(2), [m])) for m in (0b011, 0b110)]
    rows = [closure_of(2, [(0, 0), (0, 1), (0, 2)]), closure_of(2, [(1, 0), (1, 1), (1, 2)])]
    k = parts[0] | parts[1] | rows[0] | rows[1]
    assert got == induce(t_of(2), k)
    assert filtration("X", n=2, i=1, s=3) == got


@pytest.mark.parametrize("n", range(1, 5))
def test_u0_is_q(n):
    assert filtration("U", n=n, k=0) == q_of(n)
    assert filtration("U", n=n, k=n) == t_of(n)


def test_filtration_range_errors():
    with pytest.raises(ComplexError):
        filtration("X", n=2, i=1, s=5)
    with pytest.raises(ComplexError):
        filtration("nope", n=2)


def test_spine_and_s_complex():
    sp = spine(3)
    assert sp.f_vector() == (4, 3)
    s = filtration("SComplex", n=3, i=1).complex
    assert s.facets() == sorted(s.facets()) and len(s.facets()) == 2


def test_k_complex_contains_rows():
    k = filtration("KComplex", n=2, i=1)
    assert closure_of(2, [(0, 0), (0, 1), (0, 2)]).issubset(k.complex)
    assert q_of(2, horn(Ambient.simplex(2), range(3), [1])).complex.issubset(k.complex)


# ---------------------------------------------------------------- cosimplicial structure

@pytest.mark.parametrize("name", ["Q", "T"])
def test_cosimplicial_identities(name):
    fam = family(name)
    for n in range(2, 5):
        x = fam.level(n - 2).complex
        for j in range(n + 1):
            for i in range(j):
                lhs = compose_ops(coface(n, j), coface(n - 1, i))
                rhs = compose_ops(coface(n, i), coface(n - 1, j - 1))
                assert lhs == rhs
                assert map_image(tw_vertex_map(lhs, n), x) == map_image(tw_vertex_map(rhs, n), x)


def test_codegeneracy_identity():
    for n in range(1, 4):
        for i in range(n):
            assert compose_ops(codegeneracy(n - 1, i), coface(n, i)) == tuple(range(n))


def test_latching_q1():
    lat = latching("Q", 1)
    want = closure_of(1, [(0, 0), (1, 0)]) | closure_of(1, [(0, 1), (1, 1)])
    assert lat.complex == want and not lat.thin


@pytest.mark.parametrize("n", range(1, 5))
def test_latching_identities(n):
    amb = Ambient.simplex(n)
    parts = [q_of(n, Subcomplex.from_masks(amb, [amb.full & ~(1 << i)])) for i in range(n + 1)]
    lat = latching("Q", n)
    assert lat.faces == set().union(*(p.faces for p in parts))
    assert lat.thin == set().union(*(p.thin for p in parts))
    bd = horn(amb, range(n + 1), [])
    assert latching("T", n) == induce(t_of(n), omega(n, bd))


def test_co_segal_examples():
    assert co_segal_sub("Q", 1) == q_of(1)
    amb = Ambient.simplex(2)
    parts = omega(2, Subcomplex.from_masks(amb, [0b011])) | omega(2, Subcomplex.from_masks(amb, [0b110]))
    assert co_segal_sub("T", 2) == induce(t_of(2), parts)
    for n in range(5):
        assert co_segal_sub("Q", n).faces == q_of(n, spine(n)).faces


# ---------------------------------------------------------------- E

def test_e_nerve_small():
    e = e_nerve(1, 2)
    assert e.counts() == (2, 2, 2)
    assert e.of_dim(1) == {(0, 1), (1, 0)}
    assert e.of_dim(2) == {(0, 1, 0), (1, 0, 1)}
    assert e_nerve(1, 2, latching=True).counts() == (2, 0, 0)
    assert e_nerve(4, 0).counts() == (5,)


@pytest.mark.parametrize("n,d", [(1, 3), (2, 3), (3, 2)])
def test_e_nerve_counts_oracle(n, d):
    e = e_nerve(n, d)
    assert e.counts() == tuple(oracles.alternating_words(n + 1, k + 1) for k in range(d + 1))
    assert e.is_closed()


@pytest.mark.parametrize("n", range(1, 4))
def test_e_latching(n):
    assert latching("E", n).simplices == e_nerve(n, n + 2, latching=True).simplices
