"""Reproduction checks for the published examples, runnable from the CLI.

Each check is a zero-argument callable returning True on success; a check
that raises counts as a failure.
"""
from __future__ import annotations

from typing import Callable

from .analysis import (
    lp_profile,
    path_length,
    three_piece_level2_family,
    three_piece_level3_family,
    vanish_search,
    vanishing_report,
)
from .cumulants import (
    GaussianSpec,
    brownian_expected_signature,
    concat_brownian_cumulant,
    gaussian_cumulant,
)
from .lie import (
    LiePolynomial,
    bch,
    bch_iterated,
    bracket,
    is_lie_series,
    tensor_to_lyndon,
)
from .path import (
    PiecewiseLinearPath,
    SampledPath,
    is_reduced,
    level2_closed_form,
    level3_closed_form,
    log_signature,
    log_signature_tensor,
    sig_of_pure_rough,
    signature,
    signature_numeric_oracle,
)
from .tensor import Rational, TensorSeries, exp, is_grouplike, log, mul

Q = Rational
CHECKS: list[tuple[str, Callable[[], bool]]] = []


def check(name: str):
    def register(fn):
        CHECKS.append((name, fn))
        return fn
    return register


def _e(i: int, d: int = 2, N: int = 3) -> TensorSeries:
    return TensorSeries.letter(i, d, N)


def _path(*pieces) -> PiecewiseLinearPath:
    return PiecewiseLinearPath.from_pieces(pieces)


@check("exp of a letter is the straight-line signature")
def _():
    return exp(_e(1, 2, 2)) == TensorSeries(2, 2, {(): 1, (1,): 1, (1, 1): Q(1, 2)})


@check("level 2 of log(exp(e1) exp(e2)) is half the bracket")
def _():
    x = log(mul(exp(_e(1, 2, 2)), exp(_e(2, 2, 2))))
    return x.project(2) == TensorSeries(2, 2, {(1, 2): Q(1, 2), (2, 1): Q(-1, 2)})


@check("signatures of PL paths are group-like")
def _():
    return is_grouplike(signature(_path((1, 2), (Q(-1, 3), 1), (2, -1)), 5))


@check("Lyndon coordinates of the two-piece log-signature at level 2")
def _():
    got = log_signature(_path((1, 0), (0, 1)), 2)
    return got == LiePolynomial(2, 2, {(1,): 1, (2,): 1, (1, 2): Q(1, 2)})


@check("log-signature of a three-piece path is a Lie series (N=6)")
def _():
    return is_lie_series(log_signature_tensor(_path((1, 2), (-3, 1), (Q(1, 2), -2)), 6))


@check("BCH through level 3")
def _():
    a, b = _e(1), _e(2)
    ab = bracket(a, b)
    expected = a + b + ab.scale(Q(1, 2)) + (bracket(a, ab) + bracket(b, bracket(b, a))).scale(Q(1, 12))
    return bch(a, b, 3) == expected


@check("BCH of collinear arguments has no bracket terms")
def _():
    a = TensorSeries.from_vector([2, -1], 6)
    return bch(a, a.scale(3)) == a.scale(4)


@check("iterated BCH of a single vector is the vector")
def _():
    return bch_iterated([[1, 0]], 4) == LiePolynomial(2, 4, {(1,): 1})


@check("iterated BCH of collinear vectors is their sum")
def _():
    return bch_iterated([[1, 2], [2, 4], [Q(-1, 2), -1]], 5) == LiePolynomial(2, 5, {(1,): Q(5, 2), (2,): 5})


@check("signature of one piece is exp of the piece")
def _():
    return signature(_path((3, -2)), 5) == exp(TensorSeries.from_vector([3, -2], 5))


@check("signature of the trivial path is 1")
def _():
    return signature(PiecewiseLinearPath(2), 5) == TensorSeries.one(2, 5)


@check("log-signature of one piece has degree one")
def _():
    return log_signature(_path((3, -2)), 6) == LiePolynomial(2, 6, {(1,): 3, (2,): -2})


@check("level-2 log-signature is antisymmetric")
def _():
    ls = log_signature_tensor(_path((1, 2), (-1, 1), (3, Q(1, 2))), 2)
    return all(ls[(i, j)] == -ls[(j, i)] for i in (1, 2) for j in (1, 2))


@check("three-piece family (1,1),(1,-1),(5,1) is reduced")
def _():
    return is_reduced(three_piece_level2_family(5))


@check("level-2 closed form for pieces e1, e2")
def _():
    return level2_closed_form(_path((1, 0), (0, 1))) == TensorSeries(2, 2, {(1, 2): Q(1, 2), (2, 1): Q(-1, 2)})


@check("level-2 closed form vanishes on the three-piece family")
def _():
    return all(level2_closed_form(three_piece_level2_family(a)).is_zero()
               for a in (-3, Q(-1, 2), 0, Q(2, 7), 5, 11))


@check("level-3 closed form vanishes when v1 + 3 v2 + v3 = 0")
def _():
    return level3_closed_form(three_piece_level3_family((2, 1), (-1, 3))).is_zero()


@check("Euler oracle on a straight line approaches exp(chord)")
def _():
    exact = exp(TensorSeries.from_vector([1, 2], 4)).to_float()
    errs = [(signature_numeric_oracle(SampledPath(2, ((0, 0), (1, 2))), 4, n) - exact).max_abs()
            for n in (100, 200)]
    return errs[1] < errs[0] < 0.1


@check("pure-area rough path signature")
def _():
    sig = sig_of_pure_rough(LiePolynomial(2, 4, {(1, 2): 1}), 4)
    return not sig.project(1) and sig.project(2) == bracket(_e(1, 2, 4), _e(2, 2, 4))


@check("straight line: log-signature vanishes on levels 2..8")
def _():
    return vanishing_report(_path((2, -3)), 2, 8).zero_levels == frozenset(range(2, 9))


@check("two non-collinear pieces: levels 2 and 3 nonzero")
def _():
    return vanishing_report(_path((1, 2), (3, -1)), 2, 3).nonzero_levels == {2, 3}


@check("three-piece family: level 2 vanishes")
def _():
    return vanishing_report(three_piece_level2_family(5), 2, 2).zero_levels == {2}


@check("n2(2,2) = 2: no reduced two-piece path vanishes at level 2")
def _():
    return vanish_search(2, 2, 2, 3, 200, 7).zero_run == []


@check("n2(2,3) = 3: best zero run from level 2 is {2}")
def _():
    return vanish_search(2, 3, 2, 3, 1000, 7).zero_run == [2]


@check("n2(3,3) >= 4: level 3 vanishes for some reduced three-piece path")
def _():
    return vanish_search(3, 3, 2, 4, 100, 7).zero_run == [3]


@check("L1 profile of a PL signature is bounded by its 1-variation")
def _():
    p = _path((1, 2), (-3, 1), (Q(1, 2), -2))
    return all(v <= path_length(p, "l1") + 1e-9 for v in lp_profile(signature(p, 8), 1).values)


@check("Gaussian cumulant of N(0, I) is a/2")
def _():
    got = gaussian_cumulant(GaussianSpec((0, 0), ((1, 0), (0, 1))))
    return got.coeffs == {(1, 1): Q(1, 2), (2, 2): Q(1, 2)}


@check("Gaussian cumulant of N(0, s^2) in one dimension")
def _():
    return gaussian_cumulant(GaussianSpec((0,), ((Q(9, 4),),))).coeffs == {(1, 1): Q(9, 8)}


@check("expected Brownian signature exp(b + a/2) at level 2")
def _():
    got = brownian_expected_signature([0, 0], [[1, 0], [0, 1]], 2)
    return got == TensorSeries(2, 2, {(): 1, (1, 1): Q(1, 2), (2, 2): Q(1, 2)})


@check("log of the expected Brownian signature is b + a/2")
def _():
    b, a = [1, -2], [[2, 1], [1, 3]]
    got = log(brownian_expected_signature(b, a, 6))
    want = TensorSeries(2, 6, {(1,): 1, (2,): -2, (1, 1): 1, (1, 2): Q(1, 2), (2, 1): Q(1, 2), (2, 2): Q(3, 2)})
    return got == want


@check("concatenated Brownian cumulant: collinear covariances add")
def _():
    a = [[2, 1], [1, 3]]
    got = concat_brownian_cumulant(a, [[3 * x for x in row] for row in a], 8)
    return got == TensorSeries(2, 8, {(1, 1): 4, (1, 2): 2, (2, 1): 2, (2, 2): 6})


@check("concatenated Brownian cumulant: level 4 is [a1, a2]/8")
def _():
    a1, a2 = [[1, 0], [0, 2]], [[1, 1], [1, 0]]
    got = concat_brownian_cumulant(a1, a2, 4).project(4)
    t1 = TensorSeries(2, 4, {(i + 1, j + 1): a1[i][j] for i in range(2) for j in range(2)})
    t2 = TensorSeries(2, 4, {(i + 1, j + 1): a2[i][j] for i in range(2) for j in range(2)})
    return got == bracket(t1, t2).scale(Q(1, 8)) and not got.is_zero()


@check("BCH Lyndon coordinates through level 3")
def _():
    got = tensor_to_lyndon(bch(_e(1), _e(2), 3))
    want = {(1,): 1, (2,): 1, (1, 2): Q(1, 2), (1, 1, 2): Q(1, 12), (1, 2, 2): Q(1, 12)}
    return got == LiePolynomial(2, 3, want)


def run_all(stream=None) -> tuple[int, str | None]:
    """Run every check, print PASS/FAIL lines, return (failures, first failing name)."""
    failures, first = 0, None
    for name, fn in CHECKS:
        try:
            ok = bool(fn())
            detail = ""
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f" ({type(exc).__name__}: {exc})"
        if not ok:
            failures += 1
            first = first or name
        if stream is not None:
            print(f"{'PASS' if ok else 'FAIL'}  {name}{detail}", file=stream)
    return failures, first
