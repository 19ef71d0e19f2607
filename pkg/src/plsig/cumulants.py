"""Moment and cumulant transforms of Gaussian vectors and Brownian rough paths.

Commutative series live in the truncated symmetric algebra, with a monomial
x_{i_1} ... x_{i_k} keyed by its sorted word (i_1 <= ... <= i_k).
"""
from __future__ import annotations

import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from math import factorial
from typing import Mapping, Sequence

from .tensor import (
    Rational,
    TensorError,
    TensorSeries,
    Word,
    exp,
    format_scalar,
    format_word,
    log,
    mul,
    parse_scalar,
    parse_word,
)


class SymSeries:
    """Element of Sym^(N)(R^d); exact Rational coefficients."""

    __slots__ = ("dim", "level", "_coeffs")

    def __init__(self, dim: int, level: int, coeffs: Mapping[Sequence[int], object] | None = None):
        self.dim, self.level = int(dim), int(level)
        clean: dict[Word, Rational] = defaultdict(Rational)
        for key, value in (coeffs or {}).items():
            key = tuple(sorted(int(x) for x in key))
            if len(key) > self.level or any(x < 1 or x > self.dim for x in key):
                raise TensorError(f"monomial {key} outside dim={self.dim}, level={self.level}")
            clean[key] += Rational(value)
        self._coeffs = {k: v for k, v in clean.items() if v != 0}

    @property
    def coeffs(self) -> dict[Word, Rational]:
        return dict(self._coeffs)

    def __getitem__(self, key) -> Rational:
        return self._coeffs.get(tuple(sorted(key)), Rational(0))

    def items(self):
        return self._coeffs.items()

    def constant(self) -> Rational:
        return self[()]

    def truncate(self, level: int) -> SymSeries:
        return SymSeries(self.dim, level, {k: v for k, v in self._coeffs.items() if len(k) <= level})

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymSeries):
            return NotImplemented
        return (self.dim, self.level) == (other.dim, other.level) and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self.dim, self.level, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        return f"SymSeries(dim={self.dim}, level={self.level}, {self.to_json()['coeffs']})"

    def _check(self, other: SymSeries) -> None:
        if (self.dim, self.level) != (other.dim, other.level):
            raise TensorError(f"shape mismatch: ({self.dim}, {self.level}) vs ({other.dim}, {other.level})")

    def __add__(self, other: SymSeries) -> SymSeries:
        self._check(other)
        out = Counter(self._coeffs)
        out.update(other._coeffs)
        return SymSeries(self.dim, self.level, out)

    def __sub__(self, other: SymSeries) -> SymSeries:
        return self + other.scale(-1)

    def scale(self, factor) -> SymSeries:
        factor = Rational(factor)
        return SymSeries(self.dim, self.level, {k: factor * v for k, v in self._coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, SymSeries):
            return sym_mul(self, other)
        return self.scale(other)

    __rmul__ = scale

    def to_json(self) -> dict:
        ordered = sorted(self._coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))
        return {"dim": self.dim, "level": self.level,
                "coeffs": {format_word(k): format_scalar(v) for k, v in ordered}}

    @classmethod
    def from_json(cls, data: Mapping) -> SymSeries:
        return cls(int(data["dim"]), int(data["level"]),
                   {parse_word(k): parse_scalar(v) for k, v in data.get("coeffs", {}).items()})


def sym_mul(x: SymSeries, y: SymSeries) -> SymSeries:
    x._check(y)
    out: dict[Word, Rational] = defaultdict(Rational)
    for u, cu in x.items():
        for v, cv in y.items():
            if len(u) + len(v) <= x.level:
                out[tuple(sorted(u + v))] += cu * cv
    return SymSeries(x.dim, x.level, out)


def sym_exp(x: SymSeries) -> SymSeries:
    if x.constant() != 0:
        raise TensorError("sym_exp requires a zero constant term")
    one = SymSeries(x.dim, x.level, {(): 1})
    result = one
    for k in range(x.level, 0, -1):
        result = one + sym_mul(x, result).scale(Rational(1, k))
    return result


def sym_log(s: SymSeries) -> SymSeries:
    if s.constant() != 1:
        raise TensorError(f"sym_log requires constant term 1, got {s.constant()}")
    one = SymSeries(s.dim, s.level, {(): 1})
    if s.level == 0:
        return SymSeries(s.dim, 0)
    y = s - one
    r = one.scale(Rational(1, s.level))
    for k in range(s.level - 1, 0, -1):
        r = one.scale(Rational(1, k)) - sym_mul(y, r)
    return sym_mul(y, r)


def symmetrize(t: TensorSeries) -> SymSeries:
    """Commutative image of a tensor: each word goes to its sorted word."""
    return SymSeries(t.dim, t.level, _sum_by_sorted(t.items()))


def _sum_by_sorted(items) -> dict:
    out: dict[Word, Rational] = defaultdict(Rational)
    for w, c in items:
        out[tuple(sorted(w))] += Rational(c)
    return out


# -- Gaussian closed forms ---------------------------------------------------

def _principal_minors_nonnegative(a: list[list[Rational]]) -> bool:
    n = len(a)
    for size in range(1, n + 1):
        for idx in combinations(range(n), size):
            if _det([[a[i][j] for j in idx] for i in idx]) < 0:
                return False
    return True


def _det(m: list[list[Rational]]) -> Rational:
    m = [row[:] for row in m]
    n, det = len(m), Rational(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Rational(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            for c in range(col, n):
                m[r][c] -= f * m[col][c]
    return det


@dataclass(frozen=True)
class GaussianSpec:
    """Mean vector and symmetric covariance matrix of X ~ N(mean, cov).

    Positive semidefiniteness is not required; a warning is issued if it fails.
    """

    mean: tuple[Rational, ...]
    cov: tuple[tuple[Rational, ...], ...]

    def __post_init__(self):
        mean = tuple(Rational(x) for x in self.mean)
        cov = tuple(tuple(Rational(x) for x in row) for row in self.cov)
        d = len(mean)
        if len(cov) != d or any(len(row) != d for row in cov):
            raise ValueError(f"covariance must be {d}x{d}")
        if any(cov[i][j] != cov[j][i] for i in range(d) for j in range(d)):
            raise ValueError("covariance must be symmetric")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        if not _principal_minors_nonnegative([list(r) for r in cov]):
            warnings.warn("covariance is not positive semidefinite", stacklevel=2)

    @property
    def dim(self) -> int:
        return len(self.mean)

    def to_json(self) -> dict:
        return {"mean": [format_scalar(x) for x in self.mean],
                "cov": [[format_scalar(x) for x in row] for row in self.cov]}

    @classmethod
    def from_json(cls, data: Mapping) -> GaussianSpec:
        return cls(tuple(parse_scalar(x) for x in data["mean"]),
                   tuple(tuple(parse_scalar(x) for x in row) for row in data["cov"]))


def gaussian_cumulant(g: GaussianSpec, N: int = 2) -> SymSeries:
    """b + a/2 as a commutative series (off-diagonal halves merged)."""
    coeffs: dict[Word, Rational] = defaultdict(Rational)
    for i, bi in enumerate(g.mean):
        coeffs[(i + 1,)] += bi
    for i in range(g.dim):
        for j in range(g.dim):
            coeffs[tuple(sorted((i + 1, j + 1)))] += g.cov[i][j] / 2
    if N < 2:
        coeffs = {k: v for k, v in coeffs.items() if len(k) <= N}
    return SymSeries(g.dim, max(N, 0), coeffs)


def gaussian_moment(g: GaussianSpec, word: Sequence[int]) -> Rational:
    """E(X_{i_1} ... X_{i_k}) summed over singleton/pair partitions (Isserlis)."""
    return _moment(g.mean, g.cov, tuple(sorted(word)))


@lru_cache(maxsize=4096)
def _moment(mean: tuple, cov: tuple, word: Word) -> Rational:
    if not word:
        return Rational(1)
    first, rest = word[0] - 1, word[1:]
    # the first index is either a singleton (mean) or paired with one later index (cov)
    total = mean[first] * _moment(mean, cov, rest)
    for j in range(len(rest)):
        partner = rest[j] - 1
        if cov[first][partner]:
            total += cov[first][partner] * _moment(mean, cov, rest[:j] + rest[j + 1:])
    return total


def _multinomial(word: Word) -> int:
    out = factorial(len(word))
    for count in Counter(word).values():
        out //= factorial(count)
    return out


def isserlis_moments(g: GaussianSpec, N: int) -> SymSeries:
    """Moment transform E(exp(X)) up to level N, from Gaussian pairings."""
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    coeffs = {}
    for k in range(N + 1):
        for key in combinations_with_replacement(range(1, g.dim + 1), k):
            coeffs[key] = Rational(_multinomial(key), factorial(k)) * gaussian_moment(g, key)
    return SymSeries(g.dim, N, coeffs)


def _level2(a: Sequence[Sequence], N: int, factor) -> TensorSeries:
    d = len(a)
    return TensorSeries(d, N, {(i + 1, j + 1): Rational(a[i][j]) * factor
                               for i in range(d) for j in range(d)})


def brownian_expected_signature(b: Sequence, a: Sequence[Sequence], N: int) -> TensorSeries:
    """exp(b + a/2) in T^(N); a enters as a level-two tensor as given."""
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    d = len(b)
    if len(a) != d:
        raise TensorError("mean and covariance dimensions differ")
    if N < 2:
        x = TensorSeries.from_vector(b, N) if N >= 1 else TensorSeries.zero(d, N)
        return exp(x)
    x = TensorSeries.from_vector(b, N) + _level2(a, N, Rational(1, 2))
    return exp(x)


def concat_brownian_cumulant(a1: Sequence[Sequence], a2: Sequence[Sequence], N: int) -> TensorSeries:
    """log(exp(a1/2) exp(a2/2)) for two concatenated centred Brownian rough paths."""
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    x1 = _level2(a1, N, Rational(1, 2))
    x2 = _level2(a2, N, Rational(1, 2))
    return log(mul(exp(x1), exp(x2)))
