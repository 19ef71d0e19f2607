import math
import random
import warnings
from fractions import Fraction as F

import pytest

from oracles import random_rational
from plsig.cumulants import (
    GaussianSpec,
    SymSeries,
    brownian_expected_signature,
    concat_brownian_cumulant,
    gaussian_cumulant,
    gaussian_moment,
    isserlis_moments,
    sym_exp,
    sym_log,
    sym_mul,
    symmetrize,
)
from plsig.lie import bracket
from plsig.tensor import TensorError, TensorSeries, exp, log


def random_gaussian(rng, d):
    # B B^T keeps the covariance positive semidefinite
    b = [[random_rational(rng) for _ in range(d)] for _ in range(d)]
    cov = [[sum(b[i][k] * b[j][k] for k in range(d)) for j in range(d)] for i in range(d)]
    return GaussianSpec(tuple(random_rational(rng) for _ in range(d)), tuple(map(tuple, cov)))


def level2(a, N):
    d = len(a)
    return TensorSeries(d, N, {(i + 1, j + 1): a[i][j] for i in range(d) for j in range(d)})


# -- symmetric algebra -------------------------------------------------------

def test_sym_exp_one_letter():
    got = sym_exp(SymSeries(1, 5, {(1,): 1}))
    assert got.coeffs == {(1,) * k: F(1, math.factorial(k)) for k in range(6)}


def test_sym_log_exp_roundtrip():
    rng = random.Random(1)
    x = SymSeries(2, 4, {(1,): random_rational(rng), (2,): random_rational(rng),
                         (1, 2): random_rational(rng), (2, 2, 2): random_rational(rng)})
    assert sym_log(sym_exp(x)) == x


def test_sym_mul_commutes():
    rng = random.Random(2)
    for _ in range(5):
        x = SymSeries(3, 3, {(rng.randint(1, 3),) * rng.randint(0, 2): random_rational(rng) for _ in range(4)})
        y = SymSeries(3, 3, {tuple(sorted(rng.choices((1, 2, 3), k=rng.randint(0, 3)))): random_rational(rng)
                             for _ in range(4)})
        assert sym_mul(x, y) == sym_mul(y, x)


def test_sym_keys_are_sorted():
    assert SymSeries(2, 2, {(2, 1): 1, (1, 2): 2}).coeffs == {(1, 2): 3}


def test_sym_errors():
    with pytest.raises(TensorError):
        sym_exp(SymSeries(1, 2, {(): 1}))
    with pytest.raises(TensorError):
        sym_log(SymSeries(1, 2, {(1,): 1}))


# -- Gaussian ----------------------------------------------------------------

def test_cumulant_examples():
    assert gaussian_cumulant(GaussianSpec((0, 0), ((1, 0), (0, 1)))).coeffs == {(1, 1): F(1, 2), (2, 2): F(1, 2)}
    assert gaussian_cumulant(GaussianSpec((1, 0), ((0, 0), (0, 0)))).coeffs == {(1,): 1}
    assert gaussian_cumulant(GaussianSpec((0,), ((F(4, 9),),))).coeffs == {(1, 1): F(2, 9)}


def test_cumulant_merges_off_diagonal():
    got = gaussian_cumulant(GaussianSpec((0, 0), ((2, F(1, 3)), (F(1, 3), 4))))
    assert got.coeffs == {(1, 1): 1, (1, 2): F(1, 3), (2, 2): 2}


def test_fourth_moment():
    s2 = F(5, 3)
    g = GaussianSpec((0,), ((s2,),))
    assert gaussian_moment(g, (1, 1, 1, 1)) == 3 * s2 ** 2
    assert isserlis_moments(g, 4)[(1, 1, 1, 1)] == s2 ** 2 / 8


def test_deterministic_variable():
    b = (F(1, 2), -2)
    g = GaussianSpec(b, ((0, 0), (0, 0)))
    assert isserlis_moments(g, 4) == sym_exp(SymSeries(2, 4, {(1,): b[0], (2,): b[1]}))


def test_odd_levels_vanish_when_centred():
    g = random_gaussian(random.Random(3), 3)
    g = GaussianSpec((0, 0, 0), g.cov)
    got = isserlis_moments(g, 5)
    assert all(len(k) % 2 == 0 for k in got.coeffs)


@pytest.mark.parametrize("seed", range(10))
def test_isserlis_matches_closed_form(seed):
    rng = random.Random(seed)
    g = random_gaussian(rng, rng.randint(1, 3))
    assert isserlis_moments(g, 4) == sym_exp(gaussian_cumulant(g, 4))


def test_non_psd_warns_but_works():
    with pytest.warns(UserWarning):
        g = GaussianSpec((0, 0), ((1, 2), (2, 1)))
    assert isserlis_moments(g, 4) == sym_exp(gaussian_cumulant(g, 4))


def test_psd_does_not_warn():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        GaussianSpec((0, 0), ((1, 1), (1, 1)))


def test_gaussian_validation():
    with pytest.raises(ValueError):
        GaussianSpec((0, 0), ((1, 2), (0, 1)))
    with pytest.raises(ValueError):
        GaussianSpec((0, 0), ((1,),))


def test_gaussian_json():
    g = GaussianSpec((0, 1), ((1, 0), (0, 2)))
    assert g.to_json() == {"mean": ["0", "1"], "cov": [["1", "0"], ["0", "2"]]}
    assert GaussianSpec.from_json(g.to_json()) == g


# -- Brownian rough paths ----------------------------------------------------

def test_brownian_expected_signature():
    got = brownian_expected_signature([0, 0], [[1, 0], [0, 1]], 2)
    assert got == TensorSeries(2, 2, {(): 1, (1, 1): F(1, 2), (2, 2): F(1, 2)})
    b = [F(1, 3), -1]
    assert brownian_expected_signature(b, [[0, 0], [0, 0]], 5) == exp(TensorSeries.from_vector(b, 5))


def test_brownian_log_is_b_plus_half_a():
    b, a = [1, F(-1, 2)], [[3, 1], [1, F(1, 4)]]
    want = TensorSeries.from_vector(b, 6) + level2(a, 6) / 2
    assert log(brownian_expected_signature(b, a, 6)) == want


@pytest.mark.parametrize("seed", range(5))
def test_symmetrized_expected_signature_is_isserlis(seed):
    rng = random.Random(100 + seed)
    g = random_gaussian(rng, rng.randint(1, 3))
    t = brownian_expected_signature(g.mean, g.cov, 4)
    assert symmetrize(t) == isserlis_moments(g, 4)


def test_concat_cumulant_examples():
    a1 = [[2, 1], [1, 3]]
    assert concat_brownian_cumulant(a1, [[x * F(-1, 2) for x in r] for r in a1], 8) == level2(a1, 8) / 4
    assert concat_brownian_cumulant(a1, [[0, 0], [0, 0]], 6) == level2(a1, 6) / 2
    a2 = [[1, 0], [0, -1]]
    got = concat_brownian_cumulant(a1, a2, 6)
    assert got.project(4) == bracket(level2(a1, 6), level2(a2, 6)) / 8
    assert all(len(w) % 2 == 0 for w in got)


def test_concat_cumulant_non_polynomial_witness():
    rng = random.Random(4)
    for _ in range(5):
        a1 = random_gaussian(rng, 2).cov
        a2 = random_gaussian(rng, 2).cov
        assert not concat_brownian_cumulant(a1, a2, 4).project(4).is_zero()


def test_concat_cumulant_requires_level_two():
    with pytest.raises(ValueError):
        concat_brownian_cumulant([[1]], [[1]], 1)
