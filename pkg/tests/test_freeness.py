import pytest
from hypothesis import given, strategies as st

from skelbody.body import BodyElement, Polynomial, eval_at
from skelbody.errors import DomainError
from skelbody.freeness import (
    Y1, Y2, count_y_occurrences, depends_on_y, exchange_add, exchange_sum,
    independence_sample_check, represented_check, shift,
)
from skelbody.syntax import parse
from skelbody.terms import SpecifiedTerm, Var
from tests.strategies import coefficients

X = [Var("x", i) for i in range(4)]

# symbol-free values keep products of values convergent
words = st.lists(st.sampled_from(X), min_size=1, max_size=3).map(
    lambda xs: BodyElement.from_term(parse("(* " + " ".join(x.name for x in xs) + " 1)")))
plain_elements = st.lists(st.tuples(coefficients, words), max_size=3).map(
    lambda cs: sum((c * w for c, w in cs), BodyElement.zero()))


def B(text):
    return BodyElement.from_term(parse(text))


class TestShift:
    def test_square(self):
        q = shift(parse("(* y y)"), 3)
        assert q.expr == parse("(+ (* y1 y2) (* y2 y1) (scal 3 (* y2 y2)))")

    def test_linear_monomial_has_constant_shift(self):
        assert shift(parse("(* x1 y)"), 5).expr == parse("(* x1 y2)")
        assert shift(parse("x1"), 5).expr == parse("0")

    @pytest.mark.parametrize("text", [
        "(* y y)", "(+ (scal 2 (* y x1 y)) x2)", "(* y (ap [(* %0 %1)] y))",
        "(+ y (scal -1 (* y y y)))",
    ])
    @given(a=plain_elements, b=plain_elements, r=coefficients)
    def test_shift_identity(self, text, a, b, r):
        q = parse(text)
        env = {X[1]: B("x1"), X[2]: B("x2")}
        lhs = eval_at(q, a + r * b, env)
        q2 = shift(q, r)
        rhs = eval_at(q, a, env) + r * eval_at(q2, a, {**env, Y1: a, Y2: b})
        assert lhs == rhs

    def test_keeps_coefficients(self):
        q = Polynomial(parse("(* b y)"), {Var("b"): B("x1")})
        assert shift(q, 2).coefficients == q.coefficients


class TestLinearity:
    def test_counts(self):
        assert count_y_occurrences(parse("(+ (* y y) y)")) == (2, 3)
        # y in argument 1 of a symbol that uses slot 1 twice
        assert count_y_occurrences(parse("(ap [(* %0 %1 %1)] y)")) == (2, 2)
        assert count_y_occurrences(parse("x0")) == (0, 0)

    def test_depends_on_y(self):
        assert depends_on_y(parse("(* x0 y)"))
        assert not depends_on_y(parse("(+ (* x0 y) (scal -1 (* x0 y)))"))
        assert not depends_on_y(parse("(ap [%0] y)"))

    def test_represented(self):
        sample = {B("x0"): B("(* x0 x0)"), B("x1"): B("(* x1 x0)")}
        assert not represented_check(sample, parse("(* y y)"))
        assert represented_check([(B("x0"), B("(* x0 x0)"))], parse("(* y y)"))
        assert represented_check(sample, Polynomial(parse("(* y c)"), {Var("c"): B("x0")}))


class TestExchange:
    def test_add(self):
        ex = exchange_add(X[:3], X[0], parse("(* x1 x2)"))
        u = Var("u", 0)
        assert ex.new_basis == (u, X[1], X[2])
        assert ex.forward == {u: parse("(+ x0 (* x1 x2))")}
        assert ex.verify_generators()

    def test_add_zero_is_identity(self):
        ex = exchange_add(X[:2], X[0], parse("(+ x1 (scal -1 x1))"))
        assert ex.new_basis == ex.old_basis and not ex.forward

    def test_add_rejects(self):
        with pytest.raises(DomainError):
            exchange_add(X[:2], X[0], parse("(* x0 x1)"))
        with pytest.raises(DomainError):
            exchange_add(X[:2], X[3], parse("x1"))
        with pytest.raises(DomainError):
            exchange_add(X[:2], X[0], parse("x3"))

    def test_sum(self):
        ex = exchange_sum(X[:2], X[:3], parse("(* x0 x1)"), X[2])
        w = Var("w", 0)
        assert ex.backward == {X[2]: parse("(+ w0 (scal -1 (* x0 x1)))")}
        assert ex.forward[w] == parse("(+ (* x0 x1) x2)")
        assert ex.verify_generators()
        zero = exchange_sum(X[:2], X[:3], parse("0"), X[2])
        assert zero.forward == {w: X[2]}

    def test_sum_rejects(self):
        with pytest.raises(DomainError):
            exchange_sum(X[:2], X[:3], parse("x2"), X[2])
        with pytest.raises(DomainError):
            exchange_sum(X[:3], X[:2], parse("x0"), X[2])

    @given(st.sampled_from(["x1", "(* x1 x2)", "(+ x1 (scal 3 (* x2 x1)))",
                            "(ap [(* %0 %1 %1)] x2)"]),
           st.sampled_from(["x0", "(* x0 x1)", "(+ (* x2 x0) (scal -2 x0))",
                            "(ap [(* %1 %0)] x0)", "(* x0 (ap [(* %0 %1)] x0))"]))
    def test_round_trips(self, w, t):
        ex = exchange_add(X[:3], X[0], parse(w))
        assert ex.round_trip_old(parse(t))
        assert ex.round_trip_new(ex.to_new(parse(t)))


class TestIndependence:
    def specified(self, text, n=2):
        return SpecifiedTerm(parse(text), tuple(X[:n]))

    def test_distinct_values(self):
        assert independence_sample_check(self.specified("(* x0 x1)"), [X[0], X[1]],
                                         self.specified("(* x0 x1)"), [X[1], X[0]])

    def test_permutation_explains_coincidence(self):
        assert independence_sample_check(self.specified("(* x0 x1)"), [X[2], X[3]],
                                         self.specified("(* x1 x0)"), [X[3], X[2]])

    def test_dummy_variables_are_dropped(self):
        assert independence_sample_check(self.specified("(* x0 x0)"), [X[2], X[3]],
                                         self.specified("(* x1 x1)"), [X[0], X[2]])

    def test_rejects_repeated_values(self):
        with pytest.raises(DomainError):
            independence_sample_check(self.specified("x0"), [X[2], X[2]],
                                      self.specified("x0"), [X[2], X[3]])
        with pytest.raises(DomainError):
            independence_sample_check(self.specified("x0", 1), [parse("(* x0 x1)")],
                                      self.specified("x0", 1), [X[0]])
