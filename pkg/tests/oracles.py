"""Brute-force reference computations, independent of the library's algebra."""
from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from fractions import Fraction

from plsig.path import PiecewiseLinearPath, is_reduced


def pl_signature_coeff(pieces, word) -> Fraction:
    """<Sig, word> of a PL path by summing the iterated integral piece by piece.

    The simplex t_1 < ... < t_k splits by which piece each t_j falls into;
    the assignments are non-decreasing, and a block of r letters inside one
    straight piece v integrates to prod(v[letter]) / r!.
    """
    total = Fraction(0)
    m, k = len(pieces), len(word)
    for assign in itertools.combinations_with_replacement(range(m), k):
        term = Fraction(1)
        for j, i in enumerate(assign):
            term *= Fraction(pieces[i][word[j] - 1])
        for r in Counter(assign).values():
            term /= math.factorial(r)
        total += term
    return total


def pl_signature(pieces, dim: int, N: int) -> dict:
    out = {}
    for k in range(N + 1):
        for word in itertools.product(range(1, dim + 1), repeat=k):
            c = pl_signature_coeff(pieces, word) if pieces else Fraction(int(k == 0))
            if c:
                out[word] = c
    return out


def naive_mul(a: dict, b: dict, N: int) -> dict:
    out = {}
    for u, cu in a.items():
        for v, cv in b.items():
            if len(u) + len(v) <= N:
                out[u + v] = out.get(u + v, 0) + cu * cv
    return {w: c for w, c in out.items() if c}


def naive_log(s: dict, N: int) -> dict:
    """sum_{k>=1} (-1)^(k+1) y^k / k with y = s - 1, term by term."""
    y = dict(s)
    y[()] = y.get((), 0) - 1
    y = {w: c for w, c in y.items() if c}
    out, power = {}, {(): Fraction(1)}
    for k in range(1, N + 1):
        power = naive_mul(power, y, N)
        for w, c in power.items():
            out[w] = out.get(w, 0) + Fraction((-1) ** (k + 1), k) * c
    return {w: c for w, c in out.items() if c}


def is_lyndon_bruteforce(word) -> bool:
    rotations = [word[i:] + word[:i] for i in range(1, len(word))]
    return all(word < r for r in rotations)


def interleavings(u, v):
    if not u:
        yield tuple(v)
        return
    if not v:
        yield tuple(u)
        return
    for rest in interleavings(u[1:], v):
        yield (u[0],) + rest
    for rest in interleavings(u, v[1:]):
        yield (v[0],) + rest


def random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 9))


def random_pieces(rng: random.Random, m: int, d: int):
    return [tuple(random_rational(rng) for _ in range(d)) for _ in range(m)]


def random_reduced_path(rng: random.Random, m: int, d: int) -> PiecewiseLinearPath:
    while True:
        p = PiecewiseLinearPath(d, tuple(random_pieces(rng, m, d)))
        if is_reduced(p):
            return p
