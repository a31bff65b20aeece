"""Acceptance checks A1-A11.

Each check is exact and seeded.  ``scale`` shrinks the sample sizes for
quick runs; time limits always apply at their full-size values.
"""
from __future__ import annotations

import io
import json
import random
import time
from dataclasses import dataclass
from importlib import resources
from typing import Callable

from .body import BodyElement, Polynomial, add, eval_at, evaluate, linearize, mul, weak_complete
from .completion import (
    PowerSum, TruncatedVector, make_wn, make_wns, p_divisibility_check, p_divisible, refine,
    telescope_holds,
)
from .errors import Divergent
from .freeness import Y1, Y2, exchange_add, exchange_sum, shift
from .random_terms import (
    random_body_element, random_body_term, random_monomial_with,
    random_skeleton_term, scramble, symbol_pool,
)
from .reduction import (
    canonicalize, essentially_equal, essentially_equal_by_search, normal_form, reduce,
)
from .skeleton import SkeletonElement, generator, identity, times
from .syntax import parse, to_text
from .terms import Apply, Scal, SpecifiedTerm, Sum, Var, substitute_map, word

__all__ = ["CriterionResult", "CRITERIA", "run_all", "run_one", "a1_corpus", "OMEGA"]

DEFAULT_SEED = 20240601
OMEGA = "(* (ap [(* %0 %0)]) (ap [(* %0 %0)]))"


@dataclass
class CriterionResult:
    cid: str
    title: str
    passed: bool
    checked: int = 0
    excluded: int = 0
    failures: int = 0
    seconds: float = 0.0
    detail: str = ""
    witness: str | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = (f"{self.cid} {status} {self.title}: {self.checked} checked, "
                f"{self.failures} failed, {self.excluded} excluded, {self.seconds:.2f}s")
        if self.detail:
            text += f"; {self.detail}"
        if self.witness and not self.passed:
            text += f"; witness {self.witness}"
        return text

    def as_dict(self) -> dict:
        return {"id": self.cid, "title": self.title, "passed": self.passed,
                "checked": self.checked, "failed": self.failures,
                "excluded": self.excluded, "detail": self.detail,
                "witness": self.witness}


def _n(base: int, scale: float) -> int:
    return max(1, round(base * scale))


def _bases(k: int) -> list[Var]:
    return [Var("x", i) for i in range(k)]


# ---------------------------------------------------------------- A1

def a1_corpus(seed: int, count: int):
    """The random skeleton corpus shared by A1 and A10."""
    rng = random.Random(seed)
    pool = symbol_pool(rng)
    for i in range(count):
        if i and i % 1000 == 0:
            pool = symbol_pool(rng)
        yield random_skeleton_term(rng, 4, rng.randint(1, 6), 3, pool)


def check_a1(seed: int, scale: float, p: int) -> CriterionResult:
    count = _n(10_000, scale)
    limit = 10.0
    start = time.perf_counter()
    checked = excluded = failures = 0
    witness = None
    for t in a1_corpus(seed, count):
        try:
            c = canonicalize(t)
        except Divergent:
            excluded += 1
            continue
        checked += 1
        if canonicalize(c) != c:
            failures += 1
            witness = witness or to_text(t)
    secs = time.perf_counter() - start
    return CriterionResult("A1", "normalization idempotence",
                           failures == 0 and secs < limit, checked, excluded, failures,
                           secs, f"time limit {limit:.1f}s", witness)


# ---------------------------------------------------------------- A2

def check_a2(seed: int, scale: float, p: int) -> CriterionResult:
    rng = random.Random(seed + 2)
    pool = symbol_pool(rng)
    count = _n(5_000, scale)
    start = time.perf_counter()
    checked = excluded = failures = equal_pairs = 0
    witness = None

    def both(a, b):
        """Canonical equality and the search matcher must agree."""
        x = canonicalize(a) == canonicalize(b)
        y = essentially_equal_by_search(normal_form(a), normal_form(b))
        if x != y:
            raise AssertionError("decision procedures disagree")
        return x

    for _ in range(count):
        a = random_skeleton_term(rng, 4, rng.randint(1, 5), 3, pool)
        b = scramble(rng, a) if rng.random() < 0.6 else random_skeleton_term(rng, 4, 3, 3, pool)
        c = scramble(rng, b) if rng.random() < 0.6 else random_skeleton_term(rng, 4, 3, 3, pool)
        try:
            ok = both(a, a)
            ab, ba = both(a, b), both(b, a)
            ok = ok and ab == ba
            bc, ac = both(b, c), both(a, c)
            if ab and bc:
                ok = ok and ac
            if ab:
                equal_pairs += 1
                sym = rng.choice([s for s in pool if s.arity >= 1] or pool)
                others = [random_skeleton_term(rng, 4, 2, 3, pool)
                          for _ in range(sym.arity - 1)]
                pos = rng.randrange(sym.arity)
                fa = Apply(sym, others[:pos] + [a] + others[pos:])
                fb = Apply(sym, others[:pos] + [b] + others[pos:])
                x = random_skeleton_term(rng, 4, 2, 3, pool)
                ok = ok and both(fa, fb) and both(word([x, a]), word([x, b]))
        except Divergent:
            excluded += 1
            continue
        except AssertionError:
            ok = False
        checked += 1
        if not ok:
            failures += 1
            witness = witness or f"{to_text(a)} | {to_text(b)} | {to_text(c)}"
    return CriterionResult("A2", "essential equality is a congruence", failures == 0,
                           checked, excluded, failures, time.perf_counter() - start,
                           f"{equal_pairs} equal pairs exercised congruence", witness)


# ---------------------------------------------------------------- A3

def check_a3(seed: int, scale: float, p: int) -> CriterionResult:
    rng = random.Random(seed + 3)
    pool = symbol_pool(rng)
    count = _n(10_000, scale)
    start = time.perf_counter()
    checked = excluded = failures = equal = 0
    witness = None
    for _ in range(count):
        a = random_skeleton_term(rng, 3, rng.randint(1, 5), 3, pool)
        r = rng.random()
        if r < 0.5:
            b = scramble(rng, a)
        elif r < 0.75:
            # a near miss: rename one variable
            b = substitute_map(scramble(rng, a), {Var("x", 0): Var("x", 1)})
        else:
            b = random_skeleton_term(rng, 3, rng.randint(1, 5), 3, pool)
        try:
            by_canon = essentially_equal(a, b)
            by_search = essentially_equal_by_search(normal_form(a), normal_form(b))
        except Divergent:
            excluded += 1
            continue
        checked += 1
        equal += by_canon
        if by_canon != by_search:
            failures += 1
            witness = witness or f"{to_text(a)} vs {to_text(b)}"
    return CriterionResult("A3", "provable equality decision", failures == 0,
                           checked, excluded, failures, time.perf_counter() - start,
                           f"{equal} equal / {checked - equal} unequal pairs", witness)


# ---------------------------------------------------------------- A4

def check_a4(seed: int, scale: float, p: int) -> CriterionResult:
    rng = random.Random(seed + 4)
    pool = symbol_pool(rng)
    count = _n(5_000, scale)
    start = time.perf_counter()
    checked = excluded = failures = 0
    witness = None
    one = identity()
    for _ in range(count):
        try:
            a, b, c = (SkeletonElement(canonicalize(
                random_skeleton_term(rng, 3, rng.randint(1, 3), 3, pool))) for _ in range(3))
            left = times(times(a, b), c)
            right = times(a, times(b, c))
            units = (times(one, a) == a and times(a, one) == a)
        except Divergent:
            excluded += 1
            continue
        checked += 1
        if left != right or not units:
            failures += 1
            if witness is None:
                witness = (f"a={a} b={b} c={c}: (ab)c={left} a(bc)={right}")
    x0, x1 = generator("x0"), generator("x1")
    noncommutative = times(x0, x1) != times(x1, x0)
    detail = "[x0][x1] != [x1][x0]" if noncommutative else "noncommutativity witness missing"
    return CriterionResult("A4", "monoid laws", failures == 0 and noncommutative,
                           checked, excluded, failures, time.perf_counter() - start,
                           detail, witness)


# ---------------------------------------------------------------- A5

def check_a5(seed: int, scale: float, p: int) -> CriterionResult:
    rng = random.Random(seed + 5)
    pool = symbol_pool(rng)
    count = _n(2_000, scale)
    start = time.perf_counter()
    checked = excluded = failures = 0
    witness = None
    for _ in range(count):
        s = random_body_term(rng, 4, rng.randint(1, 4), 3, pool)
        values = {x: Var("x", rng.randrange(6)) for x in _bases(4)}
        try:
            direct = evaluate(s, {x: BodyElement.basis(v) for x, v in values.items()})
            expanded = BodyElement.from_pairs(
                (c, SkeletonElement(canonicalize(substitute_map(m, values))))
                for c, m in linearize(s))
        except Divergent:
            excluded += 1
            continue
        checked += 1
        if direct != expanded:
            failures += 1
            witness = witness or to_text(s)
    return CriterionResult("A5", "linearization soundness", failures == 0,
                           checked, excluded, failures, time.perf_counter() - start,
                           "basis-variable assignments", witness)


# ---------------------------------------------------------------- A6

def _random_weak_input(rng, pool) -> SpecifiedTerm:
    x0 = Var("x", 0)
    parts = []
    for _ in range(rng.randint(1, 3)):
        m = random_monomial_with(rng, x0, 3, rng.randint(1, 2), 3, pool)
        c = rng.choice([1, 1, 2, -1, 3])
        parts.append(m if c == 1 else Scal(c, m))
    t = parts[0] if len(parts) == 1 else Sum(parts)
    return SpecifiedTerm(t, tuple(_bases(3)))


def check_a6(seed: int, scale: float, p: int) -> CriterionResult:
    rng = random.Random(seed + 6)
    pool = symbol_pool(rng)
    count = _n(1_000, scale)
    start = time.perf_counter()
    checked = excluded = failures = additive_failures = 0
    witness = None
    x0, x1, x2 = _bases(3)
    for _ in range(count):
        s = _random_weak_input(rng, pool)
        env = {x1: random_body_element(rng, 1, 3, 1, 3, pool),
               x2: random_body_element(rng, 1, 3, 1, 3, pool)}
        d = random_body_element(rng, 3, 3, 1, 3, pool)
        d2 = random_body_element(rng, 3, 3, 1, 3, pool)
        try:
            sp = weak_complete(s)
            lhs = evaluate(s.term, {x0: d, **env})
            rhs = mul(d, evaluate(sp, env))
            additive = (evaluate(s.term, {x0: add(d, d2), **env})
                        == add(lhs, evaluate(s.term, {x0: d2, **env})))
        except Divergent:
            excluded += 1
            continue
        checked += 1
        if lhs != rhs or not additive:
            failures += 1
            additive_failures += not additive
            if witness is None:
                witness = f"s={to_text(s.term)} d={d}"
    return CriterionResult("A6", "weak completeness", failures == 0,
                           checked, excluded, failures, time.perf_counter() - start,
                           f"{additive_failures} additivity failures", witness)


# ---------------------------------------------------------------- A7

def check_a7(seed: int, scale: float, p: int) -> CriterionResult:
    rng = random.Random(seed + 7)
    pool = symbol_pool(rng)
    count = _n(1_000, scale)
    start = time.perf_counter()
    checked = excluded = failures = 0
    witness = None
    y = Var("y")
    atoms = [y, y, Var("x", 0), Var("x", 1)]
    coeffs = {Var("x", 0): BodyElement.basis("x0"), Var("x", 1): BodyElement.basis("x1")}
    for _ in range(count):
        q = Polynomial(random_body_term(rng, 2, rng.randint(1, 3), 3, pool, atoms), coeffs)
        r = rng.choice([-3, -2, -1, 0, 1, 2, 5])
        g1 = random_body_element(rng, rng.randint(1, 3), 3, 1, 3, pool)
        g2 = random_body_element(rng, rng.randint(1, 3), 3, 1, 3, pool)
        try:
            q2 = shift(q, r)
            lhs = eval_at(q, add(g1, r * g2))
            rhs = add(eval_at(q, g1), r * eval_at(q2, None, {Y1: g1, Y2: g2}))
        except Divergent:
            excluded += 1
            continue
        checked += 1
        if lhs != rhs:
            failures += 1
            witness = witness or f"q={to_text(q.expr)} r={r}"
    return CriterionResult("A7", "shift identity", failures == 0,
                           checked, excluded, failures, time.perf_counter() - start,
                           "", witness)


# ---------------------------------------------------------------- A8

def _a8_parameters(rng: random.Random, i: int, depth: int):
    if i == 0:
        l = list(range(depth + 1))
        a = [1] * depth
    else:
        l = [rng.randint(0, 3)]
        fast_growth = i % 2 == 0
        for _ in range(depth):
            l.append(3 * l[-1] + rng.randint(1, 4) if fast_growth else l[-1] + rng.randint(1, 5))
        a = [rng.randint(0, 1) for _ in range(depth)]
    names = rng.sample(range(4 * depth), depth)
    v = [SkeletonElement(Var("x", k)) for k in names]
    return l, a, v


def check_a8(seed: int, scale: float, p: int) -> CriterionResult:
    rng = random.Random(seed + 8)
    sets = _n(200, scale)
    limit = 5.0
    depth = 32
    start = time.perf_counter()
    checked = failures = controls = 0
    witness = None
    for i in range(sets):
        l, a, v = _a8_parameters(rng, i, depth)
        allowed = frozenset(v)
        for K in range(1, depth + 1):
            ws = make_wns(K, l, a, v)
            for n in range(K):
                checked += 1
                ok = True
                if n + 1 < K:
                    gap = l[n + 1] - l[n]
                    residual = ws[n] - ws[n + 1].shift(gap)
                    expected = TruncatedVector(K, {v[n]: PowerSum.power(0, a[n])})
                    ok = residual == expected and p_divisible(residual, gap, allowed, p)
                if K == depth // 2:
                    ok = ok and refine(ws[n], depth, l, a, v) == make_wn(n, depth, l, a, v)
                if not ok:
                    failures += 1
                    witness = witness or f"set {i} n={n} K={K}"
        # negative controls: a corrupted coefficient must be caught
        K = depth
        w0, w1 = make_wn(0, K, l, a, v), make_wn(1, K, l, a, v)
        bad = dict(w1.entries)
        key = v[2] if a[2] else v[1] if a[1] else None
        if key is not None:
            bad[key] = bad[key] + PowerSum.power(0)
            controls += 1
            if telescope_holds(w0, TruncatedVector(K, bad), l[1] - l[0], a[0], v[0]):
                failures += 1
                witness = witness or f"corruption undetected in set {i}"
        if a[0] and p_divisibility_check(0, K, l, a, v, [], p):
            failures += 1
            witness = witness or f"empty modulo accepted in set {i}"
    secs = time.perf_counter() - start
    return CriterionResult("A8", "telescope and divisibility",
                           failures == 0 and secs < limit, checked, 0, failures, secs,
                           f"{controls} corruption controls; time limit {limit:.1f}s", witness)


# ---------------------------------------------------------------- A9

def check_a9(seed: int, scale: float, p: int) -> CriterionResult:
    rng = random.Random(seed + 9)
    pool = symbol_pool(rng)
    count = _n(500, scale)
    start = time.perf_counter()
    checked = excluded = failures = 0
    witness = None
    for i in range(count):
        basis = _bases(rng.randint(2, 4))
        v = rng.choice(basis)
        rest = [x for x in basis if x != v]
        try:
            if i % 2:
                small = rng.sample(rest, rng.randint(1, len(rest)))
                u = random_body_term(rng, 0, rng.randint(0, 2), 3, pool, small)
                ex = exchange_sum(small, basis, u, v)
            else:
                w = random_body_term(rng, 0, rng.randint(0, 2), 3, pool, rest)
                ex = exchange_add(basis, v, w)
            old_terms = [random_body_term(rng, 0, 2, 3, pool, list(ex.old_basis)) for _ in range(2)]
            new_terms = [random_body_term(rng, 0, 2, 3, pool, list(ex.new_basis)) for _ in range(2)]
            ok = (ex.verify_generators()
                  and all(ex.round_trip_old(t) for t in old_terms)
                  and all(ex.round_trip_new(t) for t in new_terms))
        except Divergent:
            excluded += 1
            continue
        checked += 1
        if not ok:
            failures += 1
            witness = witness or f"basis={[x.name for x in basis]} v={v.name}"
    return CriterionResult("A9", "basis-exchange round-trips", failures == 0,
                           checked, excluded, failures, time.perf_counter() - start,
                           "", witness)


# ---------------------------------------------------------------- A10

def check_a10(seed: int, scale: float, p: int) -> CriterionResult:
    start = time.perf_counter()
    outcome = reduce(parse(OMEGA))
    omega_ok = (not outcome.ok and outcome.divergent.reason == "cycle"
                and outcome.divergent.steps <= 1000)
    checked = flagged = false_positives = 0
    witness = None
    for t in a1_corpus(seed, _n(10_000, scale)):
        checked += 1
        first = reduce(t)
        if first.ok:
            continue
        flagged += 1
        # a flagged term that normalizes with ten times the fuel was a false alarm
        second = reduce(t, fuel=10 * 10_000)
        if second.ok:
            false_positives += 1
            witness = witness or to_text(t)
    passed = omega_ok and false_positives == 0
    detail = (f"omega {'cycle' if omega_ok else 'NOT detected'} "
              f"after {outcome.divergent.steps if outcome.divergent else '-'} step(s); "
              f"{flagged} flagged, {false_positives} normalize with 10x fuel")
    return CriterionResult("A10", "divergence detection", passed, checked, 0,
                           false_positives + (not omega_ok), time.perf_counter() - start,
                           detail, witness)


# ---------------------------------------------------------------- A11

def golden_cases() -> list[dict]:
    text = resources.files("skelbody").joinpath("data/golden.json").read_text("utf-8")
    return json.loads(text)


def run_cli_case(case: dict) -> tuple[int, str, str]:
    import sys
    from .cli import run
    out, err = io.StringIO(), io.StringIO()
    saved = sys.stdin
    sys.stdin = io.StringIO(case.get("stdin", ""))
    try:
        code = run(case["args"], out, err)
    finally:
        sys.stdin = saved
    return code, out.getvalue(), err.getvalue()


def check_a11(seed: int, scale: float, p: int) -> CriterionResult:
    start = time.perf_counter()
    cases = golden_cases()
    failures = 0
    witness = None
    for case in cases:
        first = run_cli_case(case)
        second = run_cli_case(case)
        expected = (case["exit"], case["stdout"], case["stderr"])
        if first != second or first != expected:
            failures += 1
            witness = witness or " ".join(case["args"])
    return CriterionResult("A11", "CLI golden files", failures == 0 and len(cases) == 30,
                           len(cases), 0, failures, time.perf_counter() - start,
                           "", witness)


CRITERIA: dict[str, Callable[[int, float, int], CriterionResult]] = {
    "A1": check_a1, "A2": check_a2, "A3": check_a3, "A4": check_a4,
    "A5": check_a5, "A6": check_a6, "A7": check_a7, "A8": check_a8,
    "A9": check_a9, "A10": check_a10, "A11": check_a11,
}


def run_one(cid: str, seed: int = DEFAULT_SEED, scale: float = 1.0, p: int = 2) -> CriterionResult:
    return CRITERIA[cid](seed, scale, p)


def run_all(only=None, scale: float = 1.0, seed: int = DEFAULT_SEED,
            p: int = 2) -> list[CriterionResult]:
    ids = [c for c in CRITERIA if only is None or c in only]
    return [run_one(c, seed, scale, p) for c in ids]
