"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line straight to the terminal
(bypassing capture) before asserting, so ``pytest -v`` shows the verdicts
even when a criterion fails.  Tolerances are the stated ones; nothing here
is loosened to make a criterion go green.
"""
import random
from fractions import Fraction as F

import pytest

from oracles import random_pieces, random_rational, random_reduced_path
from plsig.analysis import (
    one_variation_bound_holds,
    random_path,
    three_piece_level2_family,
    three_piece_level3_family,
    trial_rng,
)
from plsig.cumulants import GaussianSpec, concat_brownian_cumulant, gaussian_cumulant, isserlis_moments, sym_exp
from plsig.lie import LiePolynomial, bch, bracket, is_lie_series, tensor_to_lyndon
from plsig.path import (
    PiecewiseLinearPath,
    SampledPath,
    is_reduced,
    level2_closed_form,
    level3_closed_form,
    log_signature_tensor,
    signature,
    signature_numeric_oracle,
)
from plsig.tensor import TensorSeries, is_grouplike, mul


@pytest.fixture
def verdict(capsys):
    def _report(criterion: str, ok: bool, detail: str = "") -> None:
        with capsys.disabled():
            line = f"\n{'PASS' if ok else 'FAIL'}  criterion {criterion}"
            print(line + (f"  ({detail})" if detail else ""))
        assert ok, detail
    return _report


def corpus():
    """Fixed examples, both vanishing families and seeded random reduced paths."""
    paths = [
        PiecewiseLinearPath.from_pieces([(1, 0)]),
        PiecewiseLinearPath.from_pieces([(1, 1)]),
        PiecewiseLinearPath.from_pieces([(1, 0), (0, 1)]),
        PiecewiseLinearPath.from_pieces([(3, -4), (F(1, 2), 2), (-1, -1)]),
        three_piece_level2_family(5),
        three_piece_level2_family(F(1, 3)),
        three_piece_level3_family((1, F(2, 3)), (F(-1, 2), 4)),
        PiecewiseLinearPath.from_pieces([(1, 0, 0), (0, 1, 0), (0, 0, 1)]),
    ]
    rng = random.Random(2024)
    for _ in range(12):
        d, m = rng.randint(1, 3), rng.randint(1, 4)
        paths.append(PiecewiseLinearPath(d, tuple(random_pieces(rng, m, d))))
    return paths


def ell(i):
    return TensorSeries.letter(i, 2, 3)


# 1 ---------------------------------------------------------------------------

def test_criterion_1_bch_coordinates(verdict):
    got = tensor_to_lyndon(bch(ell(1), ell(2), 3))
    want = LiePolynomial(2, 3, {(1,): 1, (2,): 1, (1, 2): F(1, 2), (1, 1, 2): F(1, 12), (1, 2, 2): F(1, 12)})
    # cross-check in the tensor algebra, with [b,[b,a]] = -[b,[a,b]]
    a, b = ell(1), ell(2)
    expanded = a + b + bracket(a, b) / 2 + (bracket(a, bracket(a, b)) + bracket(b, bracket(b, a))) / 12
    ok = got == want and bch(a, b, 3) == expanded
    verdict("1 BCH Lyndon coordinates", ok, f"got {got.to_json()['coeffs']}")


# 2 ---------------------------------------------------------------------------

def test_criterion_2_chen_identity(verdict):
    rng = random.Random(2)
    bad = []
    for i in range(100):
        d, N = rng.randint(1, 3), rng.randint(1, 5)
        p = PiecewiseLinearPath(d, tuple(random_pieces(rng, rng.randint(1, 4), d)))
        q = PiecewiseLinearPath(d, tuple(random_pieces(rng, rng.randint(1, 4), d)))
        if signature(p.concat(q), N) != mul(signature(p, N), signature(q, N)):
            bad.append(i)
    verdict("2 Chen identity, 100 paths", not bad, f"failing samples {bad}" if bad else "")


# 3 ---------------------------------------------------------------------------

def test_criterion_3_closed_forms(verdict):
    rng = random.Random(3)
    bad = []
    for i in range(100):
        d, m = rng.randint(1, 3), rng.randint(1, 5)
        path = PiecewiseLinearPath(d, tuple(random_pieces(rng, m, d)))
        ls = log_signature_tensor(path, 3)
        if level2_closed_form(path) != ls.project(2).truncate(2) or level3_closed_form(path) != ls.project(3):
            bad.append(i)
    verdict("3 closed forms at levels 2 and 3, 100 paths", not bad, f"failing samples {bad}" if bad else "")


# 4 ---------------------------------------------------------------------------

def test_criterion_4_three_piece_family(verdict):
    problems = []
    for a in (F(-2), F(-1), F(0), F(1, 3), F(5)):
        path = three_piece_level2_family(a)
        if not log_signature_tensor(path, 2).project(2).is_zero():
            problems.append(f"a={a}: level 2 nonzero")
        if not is_reduced(path):
            problems.append(f"a={a}: not reduced")
    verdict("4 level-2 vanishing family, a in {-2,-1,0,1/3,5}", not problems, "; ".join(problems))


# 5 ---------------------------------------------------------------------------

def test_criterion_5_vanishing_orders(verdict):
    problems = []

    # (a), (b): two pieces never kill level 2 or level 3
    rng = random.Random(5)
    for i in range(200):
        ls = log_signature_tensor(random_reduced_path(rng, 2, rng.randint(2, 3)), 3)
        for k in (2, 3):
            if ls.project(k).is_zero():
                problems.append(f"(a/b) sample {i}: level {k} zero")

    # (c): random reduced three-piece paths, never levels 2 and 3 together
    for t in range(1000):
        ls = log_signature_tensor(random_path(trial_rng(7, t), 3, 2), 3)
        if ls.project(2).is_zero() and ls.project(3).is_zero():
            problems.append(f"(c) trial {t}: levels 2 and 3 both zero")
    if not log_signature_tensor(three_piece_level2_family(5), 2).project(2).is_zero():
        problems.append("(c) structured family misses level-2 zero")

    # (d): v3 = -v1 - 3 v2 kills level 3
    rng = random.Random(55)
    for i in range(10):
        v1 = [random_rational(rng) for _ in range(2)]
        v2 = [random_rational(rng) for _ in range(2)]
        if not log_signature_tensor(three_piece_level3_family(v1, v2), 3).project(3).is_zero():
            problems.append(f"(d) sample {i}: level 3 nonzero")

    verdict("5 vanishing orders (a)-(d)", not problems, "; ".join(problems[:5]))


# 6 ---------------------------------------------------------------------------

def _first_nonzero_level(path, lo=2, hi=8):
    for N in range(lo, hi + 1):
        ls = log_signature_tensor(path, N)
        if not ls.project(N).is_zero():
            return N
    return None


def test_criterion_6_degree_one_or_not_polynomial(verdict):
    problems = []
    rng = random.Random(6)
    lines = [(2, 10)] * 4 + [(3, 10)]
    for d, N in lines:
        ls = log_signature_tensor(PiecewiseLinearPath(d, (tuple(random_rational(rng) for _ in range(d)),)), N)
        if any(len(w) > 1 for w in ls):
            problems.append(f"straight line in d={d} has support above level 1")

    samples = [random_reduced_path(rng, rng.randint(2, 4), rng.randint(2, 3)) for _ in range(40)]
    samples += [three_piece_level2_family(random_rational(rng)) for _ in range(5)]
    samples += [three_piece_level3_family([random_rational(rng) for _ in range(2)],
                                          [random_rational(rng) for _ in range(2)]) for _ in range(5)]
    for i, path in enumerate(samples):
        if not is_reduced(path):
            continue
        if _first_nonzero_level(path) is None:
            problems.append(f"finding: reduced path {path.to_json()} vanishes on levels 2..8")
    verdict("6 lines are degree one, reduced multi-piece paths are not", not problems, "; ".join(problems))


# 7 ---------------------------------------------------------------------------

def test_criterion_7_grouplike_and_lie(verdict):
    bad = []
    for path in corpus():
        sig = signature(path, 6)
        if not (is_grouplike(sig) and is_lie_series(log_signature_tensor(path, 6))):
            bad.append(path.to_json())
    verdict("7 group-like signatures and Lie log-signatures, N = 6", not bad, f"failing {bad}" if bad else "")


# 8 ---------------------------------------------------------------------------

def test_criterion_8_euler_oracle(verdict):
    path = PiecewiseLinearPath.from_pieces([(1, 0), (0, 1)])
    exact = signature(path, 4).to_float()
    sampled = SampledPath.from_path(path)
    err = {n: (signature_numeric_oracle(sampled, 4, n) - exact).max_abs() for n in (10_000, 20_000)}
    ratio = err[10_000] / err[20_000]
    ok = err[10_000] <= 1e-3 and 1.6 <= ratio <= 2.4
    verdict("8 Euler oracle", ok, f"max error {err[10_000]:.3e} at 1e4 steps, contraction {ratio:.3f}")


# 9 ---------------------------------------------------------------------------

def test_criterion_9_one_variation_bound(verdict):
    # path_length is the Euclidean 1-variation, as the criterion states; the
    # l1 version is reported alongside since it pairs with the l1 tensor norm
    paths = corpus()
    bad = [p.to_json() for p in paths if not one_variation_bound_holds(p, 8, "l2", atol=1e-9)]
    l1_bad = [p.to_json() for p in paths if not one_variation_bound_holds(p, 8, "l1", atol=1e-9)]
    detail = f"{len(bad)}/{len(paths)} paths exceed the Euclidean length, e.g. {bad[0]['pieces']}" if bad else ""
    detail += f"; with l1 length {len(l1_bad)} exceed"
    verdict("9 signature growth bounded by path length, k <= 8", not bad, detail)


# 10 --------------------------------------------------------------------------

def _random_cov(rng, d):
    b = [[random_rational(rng) for _ in range(d)] for _ in range(d)]
    return tuple(tuple(sum(b[i][k] * b[j][k] for k in range(d)) for j in range(d)) for i in range(d))


def _level2(a, N):
    d = len(a)
    return TensorSeries(d, N, {(i + 1, j + 1): a[i][j] for i in range(d) for j in range(d)})


def test_criterion_10_gaussian_and_brownian(verdict):
    problems = []
    rng = random.Random(10)
    for i in range(50):
        d = rng.randint(1, 3)
        g = GaussianSpec(tuple(random_rational(rng) for _ in range(d)), _random_cov(rng, d))
        if isserlis_moments(g, 4) != sym_exp(gaussian_cumulant(g, 4)):
            problems.append(f"Gaussian {i}: moments differ")
    for i in range(10):
        d = rng.randint(2, 3)
        a1, a2 = _random_cov(rng, d), _random_cov(rng, d)
        got = concat_brownian_cumulant(a1, a2, 4).project(4)
        if got != bracket(_level2(a1, 4), _level2(a2, 4)) / 8:
            problems.append(f"pair {i}: level 4 is not [a1,a2]/8")
        lam = random_rational(rng)
        scaled = [[lam * x for x in row] for row in a1]
        if not concat_brownian_cumulant(a1, scaled, 4).project(4).is_zero():
            problems.append(f"pair {i}: level 4 survives a2 = {lam} a1")
    verdict("10 Isserlis moments and Brownian concatenation", not problems, "; ".join(problems))
