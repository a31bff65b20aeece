import pytest
from hypothesis import given, strategies as st

from skelbody.completion import (
    PowerSum, Tail, TruncatedVector, make_wn, p_divisibility_check, refine,
    telescope_check, telescope_difference, telescope_holds,
)
from skelbody.errors import DomainError
from skelbody.skeleton import generator

V = [generator(f"x{i}") for i in range(12)]


def int_valuation(n, p):
    if n == 0:
        return float("inf")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


@st.composite
def schedules(draw, max_k=8):
    """(K, l, a) with l strictly increasing and long enough for depth K + 2."""
    K = draw(st.integers(1, max_k))
    gaps = draw(st.lists(st.integers(1, 6), min_size=K + 3, max_size=K + 3))
    l = [sum(gaps[:i]) for i in range(K + 3)]
    a = draw(st.lists(st.integers(0, 1), min_size=K + 2, max_size=K + 2))
    return K, l, a


power_sums = st.dictionaries(st.integers(0, 12), st.integers(-30, 30), max_size=5).map(PowerSum)


class TestPowerSum:
    def test_printing(self):
        assert str(PowerSum.power(0)) == "1"
        assert str(PowerSum({1: 1, 3: 2})) == "p + 2*p^3"
        assert str(PowerSum({0: -1, 2: -3})) == "-1 - 3*p^2"
        assert str(PowerSum()) == "0"

    def test_merging(self):
        assert PowerSum([(2, 1), (2, -1)]) == PowerSum()
        assert PowerSum.power(3, 2) == PowerSum({3: 2})

    def test_negative_exponent(self):
        with pytest.raises(DomainError):
            PowerSum.power(-1)

    def test_huge_exponents_stay_formal(self):
        big = PowerSum.power(4 ** 30) - PowerSum.power(4 ** 30 + 1)
        assert big.valuation(2) == 4 ** 30

    @given(power_sums, st.sampled_from([2, 3, 5]))
    def test_valuation_matches_integers(self, s, p):
        assert s.valuation(p) == int_valuation(s.to_int(p), p)

    @given(power_sums, power_sums, st.integers(0, 5), st.integers(-4, 4))
    def test_ring_maps_to_integers(self, s, t, e, c):
        p = 3
        assert (s + t).to_int(p) == s.to_int(p) + t.to_int(p)
        assert (s - t).to_int(p) == s.to_int(p) - t.to_int(p)
        assert s.shift(e).to_int(p) == p ** e * s.to_int(p)
        assert s.scale(c).to_int(p) == c * s.to_int(p)


class TestWn:
    def test_examples(self):
        assert str(make_wn(0, 2, [0, 1, 2], [1, 1], V)) == "(1)*x0 + (p)*x1 + (p^2)*Tail(2)"
        assert str(make_wn(0, 3, [0, 2, 3, 5], [1, 0, 1], V)) == \
            "(1)*x0 + (p^3)*x2 + (p^5)*Tail(3)"
        assert str(make_wn(1, 2, [0, 1, 4], [1, 1], V)) == "(1)*x1 + (p^3)*Tail(2)"

    @pytest.mark.parametrize("n, K, l, a, v", [
        (2, 2, [0, 1, 2], [1, 1], V),          # n must be below K
        (0, 2, [0, 1], [1, 1], V),             # l too short
        (0, 2, [0, 2, 2], [1, 1], V),          # l not increasing
        (0, 2, [0, 1, 2], [1, 2], V),          # a not 0/1
        (0, 2, [0, 1, 2], [1, 1], [V[0], V[0]]),
    ])
    def test_validation(self, n, K, l, a, v):
        with pytest.raises(DomainError):
            make_wn(n, K, l, a, v)

    def test_telescope_example(self):
        l, a = [0, 1, 3, 7], [1, 0, 1]
        assert telescope_difference(0, 3, l, a, V) == TruncatedVector(3, {V[0]: PowerSum.power(0)})
        assert telescope_difference(1, 3, l, a, V) == TruncatedVector(3, {})

    @given(schedules())
    def test_telescope_for_every_n(self, sched):
        K, l, a = sched
        for n in range(K - 1):
            assert telescope_check(n, K, l, a, V)

    @given(schedules())
    def test_fast_growth_regime(self, sched):
        # l_{k+1} > 3 l_k: exponents explode but everything stays exact
        K, _, a = sched
        l = [1]
        for _ in range(K + 2):
            l.append(4 * l[-1])
        for n in range(K - 1):
            assert telescope_check(n, K, l, a, V)
            assert p_divisibility_check(n, K, l, a, V, modulo=V[n:n + 1])

    def test_corrupted_sequence_is_caught(self):
        l, a = [0, 1, 3, 7], [1, 1, 1]
        w0 = make_wn(0, 3, l, a, V)
        bad = w0 + TruncatedVector(3, {V[2]: PowerSum.power(0)})
        assert not telescope_holds(bad, make_wn(1, 3, l, a, V), 1, 1, V[0])
        assert not telescope_holds(w0, make_wn(1, 3, l, a, V), 2, 1, V[0])

    def test_divisibility_needs_the_modulus(self):
        l, a = [0, 1, 3, 7], [1, 1, 1]
        assert p_divisibility_check(0, 3, l, a, V, modulo=[V[0]])
        assert not p_divisibility_check(0, 3, l, a, V, modulo=[V[1]])


class TestRefine:
    def test_example(self):
        l, a = [0, 1, 2, 4], [1, 1, 1]
        w = refine(make_wn(0, 2, l, a, V), 3, l, a, V)
        assert str(w) == "(1)*x0 + (p)*x1 + (p^2)*x2 + (p^4)*Tail(3)"

    def test_cannot_coarsen(self):
        with pytest.raises(DomainError):
            refine(make_wn(0, 3, [0, 1, 2, 3], [1, 1, 1], V), 2, [0, 1, 2, 3], [1, 1, 1], V)

    @given(schedules(), st.data())
    def test_refine_agrees_with_direct_construction(self, sched, data):
        K, l, a = sched
        n = data.draw(st.integers(0, K - 1))
        K2 = data.draw(st.integers(K, K + 2))
        assert refine(make_wn(n, K, l, a, V), K2, l, a, V) == make_wn(n, K2, l, a, V)

    @given(schedules())
    def test_refine_is_idempotent_at_same_depth(self, sched):
        K, l, a = sched
        w = make_wn(0, K, l, a, V)
        assert refine(w, K, l, a, V) is w
        assert w.coefficient(Tail(K)) == PowerSum.power(l[K] - l[0])
