from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biqlab.invariants import present_t3_quotient, record_t3, reference_topology
from biqlab.moves import IDENTITY, SPORADIC, family_matrix
from biqlab.ringiso import (
    IncomparableError,
    class_preserving_iso,
    compose,
    decide_diffeo,
    dold_whitney_check,
    invert,
    is_ring_iso,
    iso_search,
    maps_relations,
    p1_mod24_obstruction,
    preserves_classes,
    r_family_criterion,
)

ID3 = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
SMALL = list(SPORADIC.values()) + [family_matrix("Family1", p) for p in
                                   [(0, 0), (0, 1), (1, 1), (1, 0), (2, 2), (-1, 3)]]


def pq(m):
    return present_t3_quotient(m)


class TestSearch:
    def test_self_identity(self):
        for m in (IDENTITY, SPORADIC["SporadicA1"], family_matrix("Family1", (1, 2))):
            r, c = pq(m)
            assert iso_search(r, r) == ID3
            assert class_preserving_iso(r, c, r, c) == ID3

    def test_a2_family1_01(self):
        ra, ca = pq(SPORADIC["SporadicA2"])
        rf, cf = pq(family_matrix("Family1", (0, 1)))
        s = class_preserving_iso(rf, cf, ra, ca, 2)
        assert s is not None and is_ring_iso(rf, ra, s)
        assert preserves_classes(ra, cf, ca, s)

    def test_a4_matches_family1_10(self):
        ra, ca = pq(SPORADIC["SporadicA4"])
        rf, cf = pq(family_matrix("Family1", (1, 0)))
        assert class_preserving_iso(rf, cf, ra, ca, 2) == ((1, 0, 0), (0, 1, 1), (0, 0, 1))

    def test_a4_and_family1_02_differ_in_w2(self):
        v = decide_diffeo(record_t3(SPORADIC["SporadicA4"]),
                          record_t3(family_matrix("Family1", (0, 2))))
        assert v.relation == "distinct" and v.evidence["kind"] == "w2 vanishing"

    def test_a1_a3_no_class_preserving_iso(self):
        r1, c1 = pq(SPORADIC["SporadicA1"])
        r3, c3 = pq(SPORADIC["SporadicA3"])
        assert class_preserving_iso(r1, c1, r3, c3) is None

    @settings(max_examples=30)
    @given(st.sampled_from(SMALL), st.sampled_from(SMALL))
    def test_soundness_and_inverse(self, m1, m2):
        r1, c1 = pq(m1)
        r2, c2 = pq(m2)
        s = iso_search(r1, r2, 3)
        if s is None:
            return
        assert is_ring_iso(r1, r2, s)
        assert maps_relations(r1, r2, s)
        assert is_ring_iso(r2, r1, invert(s))
        assert iso_search(r2, r1, 3) is not None

    def test_witnesses_compose(self):
        ra, ca = pq(SPORADIC["SporadicA2"])
        r1, c1 = pq(family_matrix("Family1", (0, 1)))
        r2, c2 = pq(family_matrix("Family1", (1, 1)))
        sigma = class_preserving_iso(r1, c1, r2, c2)
        tau = class_preserving_iso(r2, c2, ra, ca)
        both = compose(sigma, tau)
        assert is_ring_iso(r1, ra, both) and preserves_classes(ra, c1, ca, both)

    def test_rank_mismatch(self):
        r, _ = pq(IDENTITY)
        from biqlab.invariants import t2_ring
        assert iso_search(r, t2_ring([1] * 10)) is None


class TestRFamily:
    def test_examples(self):
        assert r_family_criterion(0, 1, 0, -1)
        assert not r_family_criterion(0, 0, 1, 1)
        assert r_family_criterion(1, 2, 1, 0)

    def test_symmetric(self):
        for c in range(-2, 3):
            for d in range(-2, 3):
                assert r_family_criterion(c, d, d, c) == r_family_criterion(d, c, c, d)


class TestDecide:
    def test_a2_family1(self):
        v = decide_diffeo(record_t3(family_matrix("Family1", (0, 1))),
                          record_t3(SPORADIC["SporadicA2"]))
        assert v.relation == "diffeomorphic" and v.certified
        assert "substitution" in v.evidence

    def test_a1_a3_distinct_mod_24(self):
        v = decide_diffeo(record_t3(SPORADIC["SporadicA1"]), record_t3(SPORADIC["SporadicA3"]))
        assert v.relation == "distinct"

    def test_reflexive(self):
        for m in SMALL:
            v = decide_diffeo(record_t3(m), record_t3(m))
            assert v.relation == "diffeomorphic"
            assert v.evidence["substitution"] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]

    def test_symmetric_on_sample(self):
        recs = [record_t3(m) for m in SMALL]
        for a in recs:
            for b in recs:
                assert decide_diffeo(a, b).relation == decide_diffeo(b, a).relation

    def test_transitive_on_sample(self):
        recs = [record_t3(m) for m in SMALL]
        same = {(i, j) for i, a in enumerate(recs) for j, b in enumerate(recs)
                if decide_diffeo(a, b).relation == "diffeomorphic"}
        for i, j in same:
            for k in range(len(recs)):
                if (j, k) in same:
                    assert (i, k) in same

    def test_dimension_mismatch(self):
        with pytest.raises(IncomparableError):
            decide_diffeo(record_t3(IDENTITY), reference_topology("X"))

    def test_first_and_second_family_meet_at_zero(self):
        v = decide_diffeo(record_t3(family_matrix("Family1", (0, 0))),
                          record_t3(family_matrix("Family2", (0, 0))))
        assert v.relation == "diffeomorphic" and v.certified

    def test_family3_degenerate_types(self):
        # third family with c2 = 0 or 2 c1 = b1 c2: every pair is decided, and the
        # members fall into three classes (the same count holds up to |entry| 4)
        params = [p for p in product(range(-2, 3), repeat=3)
                  if p[2] == 0 or 2 * p[1] == p[0] * p[2]]
        recs = {p: record_t3(family_matrix("Family3", p)) for p in params}
        classes = []
        for p in params:
            for c in classes:
                v = decide_diffeo(recs[c[0]], recs[p], bound=4)
                assert v.certified and v.relation in ("diffeomorphic", "distinct")
                if v.relation == "diffeomorphic":
                    c.append(p)
                    break
            else:
                classes.append([p])
        assert len(params) == 41
        assert sorted(len(c) for c in classes) == [8, 15, 18]

    def test_references(self):
        X, Y = reference_topology("X"), reference_topology("Y")
        assert decide_diffeo(X, Y).relation == "distinct"
        assert decide_diffeo(X, X).relation == "diffeomorphic"


class TestMod24:
    def test_calc_references_pairwise(self):
        refs = [reference_topology(t) for t in ("X", "Y", "S3xS4")]
        for i, a in enumerate(refs):
            for b in refs[i + 1:]:
                assert p1_mod24_obstruction(a, b) is not None
            assert p1_mod24_obstruction(a, a) is None

    def test_a1_a3(self):
        cert = p1_mod24_obstruction(record_t3(SPORADIC["SporadicA1"]),
                                    record_t3(SPORADIC["SporadicA3"]))
        assert cert is not None and cert["values"] == [1, 2]

    def test_needs_same_h4(self):
        with pytest.raises(IncomparableError):
            p1_mod24_obstruction(reference_topology("X"),
                                 reference_topology("s3cp2-family1:2,1"))


class TestDoldWhitney:
    @pytest.mark.parametrize("a,b", [(0, 0), (1, 0), (1, 1), (2, -3)])
    def test_circle_reduction(self, a, b):
        dw = dold_whitney_check((a, b), a * a + b * b)
        assert dw.congruence and dw.reduces_to_circle

    def test_congruence_fails(self):
        dw = dold_whitney_check((1, 1), 4)
        assert not dw and not dw.reduces_to_circle

    def test_zero(self):
        assert dold_whitney_check((0, 0), 0, "S2xS2").reduces_to_circle

    def test_unknown_base(self):
        with pytest.raises(ValueError):
            dold_whitney_check((1, 0), 1, "RP4")
