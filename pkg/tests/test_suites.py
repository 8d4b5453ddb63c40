import json

import pytest

from scaledtw.complex import Ambient, Subcomplex
from scaledtw.constructions import filtration, sigma
from scaledtw.suites import (
    FAIL,
    PASS,
    REFUSED,
    SUITES,
    TRUSTED,
    Record,
    SuiteReport,
    UnknownSuite,
    oracle_intersection,
    run_suite,
)


def tw_mask(n, labels):
    return Ambient.twisted(n).mask(labels)


def test_oracle_intersection_sigma1_in_x2():
    got = oracle_intersection(tw_mask(2, sigma(2, 1)), filtration("X", n=2, i=1, s=2).complex)
    assert got.kind == "horn"
    assert Ambient.twisted(2).labels_of(got.M) == ((0, 1),)


def test_oracle_intersection_sigma2_in_x3():
    got = oracle_intersection(tw_mask(2, sigma(2, 2)), filtration("X", n=2, i=1, s=3).complex)
    assert got.kind == "horn"
    assert set(Ambient.twisted(2).labels_of(got.M)) == {(0, 1), (0, 2)}


def test_oracle_intersection_full_and_other():
    amb = Ambient.simplex(3)
    full = Subcomplex.full_simplex(amb)
    assert oracle_intersection(0b0111, full).kind == "full"
    edges = Subcomplex.from_masks(amb, [0b0011, 0b1100])
    assert oracle_intersection(amb.full, edges).kind == "other"
    with pytest.raises(ValueError):
        oracle_intersection(0, full)


def test_record_rendering():
    r = Record("suite_x", "n=2", TRUSTED, ("B", "A", "B"), 12.34)
    assert r.trust_text() == "A,B*2"
    assert r.line() == "suite_x\tn=2\tTRUSTED-PASS\tA,B*2\t-"
    assert r.line(timings=True).endswith("\t12.3")
    assert Record("s", "p", PASS).trust_text() == "-"


def test_digest_ignores_timings():
    a = SuiteReport("x", [Record("s", "p", PASS, (), 1.0)])
    b = SuiteReport("x", [Record("s", "p", PASS, (), 99.0)])
    assert a.digest == b.digest
    c = SuiteReport("x", [Record("s", "p", FAIL, (), 1.0)])
    assert a.digest != c.digest and not c.ok and a.ok


def test_records_format():
    rep = run_suite("suite_spine_P")
    lines = rep.to_records().splitlines()
    rows = [json.loads(x) for x in lines]
    assert rows[-1] == {"digest": rep.digest, "suite": "suite_spine_P"}
    assert {"suite", "params", "status", "trust", "millis", "detail"} <= set(rows[0])
    assert rep.to_text().splitlines()[-1] == f"digest {rep.digest}"


@pytest.mark.parametrize("name", sorted(SUITES))
def test_each_suite_green_at_small_size(name):
    rep = run_suite(name, n_max=3)
    assert rep.records
    assert rep.ok, [r.detail for r in rep.failures()]


def test_lemma_suite_mixes_positive_and_negative():
    counts = run_suite("suite_lemma36", n_max=4).counts()
    assert counts[PASS] > 0 and counts[REFUSED] > 0 and counts[FAIL] == 0


def test_determinism_and_seed_sensitivity():
    a = run_suite("suite_lemma36", n_max=4, seed=7)
    b = run_suite("suite_lemma36", n_max=4, seed=7)
    c = run_suite("suite_lemma36", n_max=4, seed=8)
    assert a.to_text() == b.to_text()
    assert a.digest != c.digest


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("suite_nope")
