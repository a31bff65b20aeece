import pytest
from hypothesis import assume, given

from skelbody.errors import ArityMismatch, Divergent
from skelbody.skeleton import SkeletonElement, act, apply_symbol, generator, identity, times
from skelbody.syntax import parse
from tests.strategies import elements

x0, x1, x2 = (generator(f"x{i}") for i in range(3))


def el(text):
    return SkeletonElement.of(parse(text))


class TestExamples:
    def test_identity(self):
        assert identity().term == parse("1")
        assert times(identity(), x0) == x0
        assert times(x0, identity()) == x0

    def test_times(self):
        assert times(x0, x1).term == parse("(* x0 x1)")
        assert times(x0, el("(ap [(* %0 %0)])")).term == parse("(* x0 x0)")
        assert times(times(x0, x1), x2) == times(x0, times(x1, x2))
        assert times(times(x0, x1), x2).term == parse("(* x0 x1 x2)")

    def test_noncommutative(self):
        assert times(x0, x1) != times(x1, x0)

    def test_apply_symbol(self):
        f = parse("(ap [(* %0 %1)] x1)").symbol
        assert apply_symbol(f, [x1]).term == parse("(ap [(* %0 %1)] x1)")
        assert times(x0, apply_symbol(f, [x1])).term == parse("(* x0 x1)")
        with pytest.raises(ArityMismatch):
            apply_symbol(f, [])

    def test_act(self):
        assert act(identity(), x1) == x1
        assert act(act(x0, x1), x2) == act(x0, times(x1, x2))
        assert act(x0, identity()) == x0

    def test_omega_product_diverges(self):
        f = el("(ap [(* %0 %0)])")
        with pytest.raises(Divergent):
            times(f, f)

    def test_associativity_fails_for_duplicating_symbols(self):
        # (x0 x1) F = x0 x1 x0 x1 while x0 (x1 F) = x0 x1 x1
        f = el("(ap [(* %0 %0)])")
        assert times(times(x0, x1), f).term == parse("(* x0 x1 x0 x1)")
        assert times(x0, times(x1, f)).term == parse("(* x0 x1 x1)")


class TestProperties:
    @given(elements())
    def test_two_sided_identity(self, a):
        assert times(identity(), a) == a == times(a, identity())

    @given(elements(), elements())
    def test_action_of_one_is_faithful(self, a, b):
        assume(a != b)
        assert act(identity(), a) != act(identity(), b)

    @given(elements(), elements(), elements())
    def test_words_associate(self, a, b, c):
        # plain words (no applications) always associate
        assume(all(not _has_apply(m.term) for m in (a, b, c)))
        assert times(times(a, b), c) == times(a, times(b, c))


def _has_apply(t):
    from skelbody.terms import Apply, Word
    if isinstance(t, Apply):
        return True
    return isinstance(t, Word) and any(_has_apply(f) for f in t.factors)
