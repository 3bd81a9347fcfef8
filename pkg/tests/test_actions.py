from itertools import product
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from biqlab.actions import (
    BiquotientExponents,
    LinearTorusAction,
    OracleBoundError,
    SphereProduct,
    biquotient_to_linear,
    check_family_conditions,
    find_fixed_element,
    freeness_oracle,
    global_kernel,
    is_effectively_free,
    is_free,
    linear_to_biquotient,
    required_oracle_bound,
    s3cp2_linear,
    swap_pq,
    t3_action,
)
from biqlab.lattice import AbelianGroup
from biqlab.moves import SPORADIC

HOPF = LinearTorusAction.from_factors(1, [[(1,), (1,)]])
DOUBLED = LinearTorusAction.from_factors(1, [[(2,), (2,)]])


def s3_factor(rank, lo=-3, hi=3):
    w = st.tuples(*[st.integers(lo, hi)] * rank)
    return st.tuples(w, w)


def actions_on_s3_cubed(rank, lo=-3, hi=3):
    return st.lists(s3_factor(rank, lo, hi), min_size=3, max_size=3).map(
        lambda fs: LinearTorusAction.from_factors(rank, [list(f) for f in fs]))


def actions_on_s5s3(rank, lo=-3, hi=3):
    w = st.tuples(*[st.integers(lo, hi)] * rank)
    return st.tuples(st.lists(w, min_size=3, max_size=3), st.lists(w, min_size=2, max_size=2)).map(
        lambda fs: LinearTorusAction.from_factors(rank, list(fs)))


class TestTypes:
    def test_sphere_product(self):
        assert str(SphereProduct((3, 2))) == "S^5 x S^3"
        with pytest.raises(ValueError):
            SphereProduct((0,))

    def test_weight_shape_checked(self):
        with pytest.raises(ValueError):
            LinearTorusAction(1, SphereProduct((2,)), ((1,),))
        with pytest.raises(ValueError):
            LinearTorusAction(2, SphereProduct((2,)), ((1,), (1,)))


class TestConversions:
    def test_examples(self):
        a = biquotient_to_linear(BiquotientExponents(1, ((1,),), ((0,),)))
        assert a.weights == ((1,), (1,))
        a = biquotient_to_linear(BiquotientExponents(1, ((3,),), ((3,),)))
        assert a.weights == ((0,), (6,))
        a = biquotient_to_linear(BiquotientExponents(3, ((1, 0, 0),), ((0, 1, 0),)))
        assert a.weights == ((1, -1, 0), (1, 1, 0))

    def test_inverse_examples(self):
        b = linear_to_biquotient(LinearTorusAction.from_factors(1, [[(2,), (2,)]]))
        assert b.m == ((2,),) and b.n == ((0,),)
        b = linear_to_biquotient(LinearTorusAction.from_factors(1, [[(0,), (0,)]]))
        assert b.m == ((0,),) and b.n == ((0,),)
        b = linear_to_biquotient(LinearTorusAction.from_factors(2, [[(2, 0), (0, 2)]]))
        assert b.m == ((1, 1),) and b.n == ((1, -1),)

    def test_odd_weight_rejected(self):
        with pytest.raises(ValueError):
            linear_to_biquotient(HOPF)

    @given(st.integers(1, 3).flatmap(lambda r: st.lists(
        st.tuples(st.tuples(*[st.integers(-4, 4)] * r), st.tuples(*[st.integers(-4, 4)] * r)),
        min_size=1, max_size=3).map(lambda fs: (r, fs))))
    def test_round_trip(self, data):
        r, fs = data
        even = LinearTorusAction.from_factors(
            r, [[tuple(2 * x for x in p), tuple(2 * x for x in q)] for p, q in fs])
        back = biquotient_to_linear(linear_to_biquotient(even))
        assert back == swap_pq(even)
        assert linear_to_biquotient(swap_pq(back)) == linear_to_biquotient(even)


class TestKernelAndFreeness:
    def test_global_kernel(self):
        assert global_kernel(HOPF).is_trivial
        assert global_kernel(DOUBLED) == AbelianGroup(0, (2,))
        zero = LinearTorusAction.from_factors(1, [[(0,), (0,)]])
        assert global_kernel(zero) == AbelianGroup(1)

    def test_free_examples(self):
        assert is_free(t3_action(((1, 0, 0), (0, 1, 0), (0, 0, 1))))
        assert is_free(s3cp2_linear(1, 1, 1, 1, 1))
        assert not is_free(s3cp2_linear(2, 1, 1, 2, 1))

    def test_rank_exceeding_factors_is_not_free(self):
        a = LinearTorusAction.from_factors(2, [[(1, 0), (0, 1)]])
        assert not is_free(a)

    def test_effectively_free_examples(self):
        assert is_effectively_free(HOPF)
        assert not is_free(DOUBLED) and is_effectively_free(DOUBLED)
        assert not is_effectively_free(LinearTorusAction.from_factors(1, [[(2,), (1,)]]))

    def test_oracle_examples(self):
        assert freeness_oracle(HOPF, 2)
        a = s3cp2_linear(2, 1, 1, 2, 1)
        assert not freeness_oracle(a, required_oracle_bound(a))
        assert find_fixed_element(a, 2) == (2, (1,))
        assert freeness_oracle(t3_action(SPORADIC["SporadicA1"]), 7)

    def test_oracle_refuses_small_bound(self):
        a = s3cp2_linear(1, 1, 5, 1, 1)
        with pytest.raises(OracleBoundError) as exc:
            freeness_oracle(a, 3)
        assert exc.value.required == 5

    @given(actions_on_s3_cubed(3))
    def test_free_implies_effectively_free_s3_cubed(self, a):
        if is_free(a):
            assert is_effectively_free(a)

    @given(st.integers(1, 2).flatmap(actions_on_s5s3))
    def test_free_implies_effectively_free_s5s3(self, a):
        if is_free(a):
            assert is_effectively_free(a)

    @given(st.integers(1, 3).flatmap(lambda r: actions_on_s3_cubed(r, -2, 2)))
    def test_free_agrees_with_oracle(self, a):
        assert is_free(a) == freeness_oracle(a, required_oracle_bound(a))

    @given(st.integers(1, 2).flatmap(lambda r: actions_on_s3_cubed(r, -2, 2)))
    def test_effectively_free_means_free_after_quotient(self, a):
        # Removing the kernel: a free action has trivial kernel, so the two
        # notions coincide exactly when the kernel is trivial.
        if global_kernel(a).is_trivial:
            assert is_free(a) == is_effectively_free(a)


def test_s3cp2_gcd_rule_exhaustive_small():
    rng = range(-3, 4)
    for a, b, c, d, e in product(rng, repeat=5):
        act = s3cp2_linear(a, b, c, d, e)
        assert is_free(act) == (gcd(a * b * c, d * e) == 1)


class TestFamilyConditions:
    def test_s2s4_examples(self):
        v = check_family_conditions("s2s4/su4", (1, 1, 1))
        assert v.effectively_free and v.verdict == "S4xS2"
        v = check_family_conditions("s2s4/su4", (1, 1, 2))
        assert v.effectively_free and v.verdict == "S4xhatS2"
        assert not check_family_conditions("s2s4/su4", (1, 1, 4)).effectively_free

    def test_s2s4_so8(self):
        assert check_family_conditions("s2s4/so8", (1, 3, 5)).verdict == "S2xS4"
        assert check_family_conditions("s2s4/so8", (2, 1, 3)).verdict == "S4xhatS2"
        assert check_family_conditions("s2s4/so8", (2, 2, 3)).verdict == "S2xS4"
        assert not check_family_conditions("s2s4/so8", (3, 1, 1)).effectively_free

    def test_s3cp2_linear_matches_is_free(self):
        for params in [(1, 1, 1, 1, 1), (2, 1, 1, 2, 1), (1, 3, 1, 2, 5)]:
            v = check_family_conditions("s3cp2/linear", params)
            assert v.effectively_free == is_free(s3cp2_linear(*params))

    def test_s3cp2_su3_f1(self):
        assert check_family_conditions("s3cp2/su3-f1", (1, 0, 1, 1)).effectively_free
        assert not check_family_conditions("s3cp2/su3-f1", (1, 1, 1, 1)).effectively_free

    def test_t3_matrix(self):
        v = check_family_conditions("t3/matrix", (2, 2, 1, 2, 1, 1))
        assert v.effectively_free and v.verdict == "SporadicA1"
        assert not check_family_conditions("t3/matrix", (1, 0, 1, 0, 0, 0)).effectively_free

    def test_errors(self):
        with pytest.raises(KeyError):
            check_family_conditions("nope", ())
        with pytest.raises(ValueError):
            check_family_conditions("s2s4/su4", (1, 1))
