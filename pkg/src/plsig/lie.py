"""Free Lie algebra on the Lyndon basis, Lie membership and BCH.

A Lyndon word w is identified with the bracketing obtained from its standard
factorization w = uv (v the longest proper Lyndon suffix): P(w) = [P(u), P(v)].
P(w) has coefficient 1 on w itself and otherwise touches only words that are
lexicographically larger, which makes the change of basis triangular.
"""
from __future__ import annotations

from collections import defaultdict
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

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


class NotLieError(ValueError):
    """Raised when a tensor that must be a Lie element is not one."""

    def __init__(self, level: int, message: str | None = None):
        self.level = level
        super().__init__(message or f"not a Lie element: fails at level {level}")


# -- words -------------------------------------------------------------------

def is_lyndon(word: Sequence[int]) -> bool:
    """Nonempty and strictly smaller than each of its proper rotations."""
    word = tuple(word)
    if not word:
        return False
    return all(word < word[i:] + word[:i] for i in range(1, len(word)))


@lru_cache(maxsize=None)
def _lyndon_upto(d: int, n: int) -> tuple[Word, ...]:
    # Duval's generator: emits Lyndon words of length <= n in lexicographic order
    out = []
    w = [0]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == d:
            w.pop()
    return tuple(out)


def lyndon_words(d: int, k: int) -> list[Word]:
    """Lyndon words of length exactly ``k`` over {1..d}, lexicographically sorted."""
    if d < 1 or k < 1:
        raise ValueError(f"need d >= 1 and k >= 1, got d={d}, k={k}")
    return [w for w in _lyndon_upto(d, k) if len(w) == k]


def mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def witt_dimension(d: int, k: int) -> int:
    """Dimension of the degree-k part of the free Lie algebra on d letters."""
    total = sum(mobius(e) * d ** (k // e) for e in range(1, k + 1) if k % e == 0)
    return total // k


def standard_factorization(word: Sequence[int]) -> tuple[Word, Word]:
    """Split a Lyndon word of length >= 2 as (u, v), v its longest proper Lyndon suffix."""
    word = tuple(word)
    if len(word) < 2 or not is_lyndon(word):
        raise ValueError(f"{word} is not a Lyndon word of length >= 2")
    for i in range(1, len(word)):
        if is_lyndon(word[i:]):
            return word[:i], word[i:]
    raise AssertionError("unreachable: single letters are Lyndon")


def bracketing(word: Sequence[int]) -> str:
    """Nested bracket string of a Lyndon word, e.g. (1,1,2) -> "[1,[1,2]]"."""
    word = tuple(word)
    if len(word) == 1:
        return str(word[0])
    u, v = standard_factorization(word)
    return f"[{bracketing(u)},{bracketing(v)}]"


def _bracket_dicts(x: Mapping[Word, int], y: Mapping[Word, int]) -> dict[Word, int]:
    out: dict[Word, int] = defaultdict(int)
    for u, cu in x.items():
        for v, cv in y.items():
            out[u + v] += cu * cv
            out[v + u] -= cu * cv
    return {w: c for w, c in out.items() if c}


@lru_cache(maxsize=None)
def _lyndon_expansion(word: Word) -> dict[Word, int]:
    if len(word) == 1:
        return {word: 1}
    u, v = standard_factorization(word)
    return _bracket_dicts(_lyndon_expansion(u), _lyndon_expansion(v))


def lyndon_expansion(word: Sequence[int]) -> dict[Word, int]:
    """Integer word expansion of the bracketed Lyndon basis element."""
    return dict(_lyndon_expansion(tuple(word)))


@lru_cache(maxsize=None)
def _right_bracket(word: Word) -> dict[Word, int]:
    # [w1,[w2,[...,[w_{k-1}, w_k]]]]
    if len(word) == 1:
        return {word: 1}
    return _bracket_dicts({word[:1]: 1}, _right_bracket(word[1:]))


# -- Lie polynomials ---------------------------------------------------------

class LiePolynomial:
    """Coordinates of a truncated Lie element on the Lyndon basis."""

    __slots__ = ("dim", "level", "exact", "_coeffs")

    def __init__(self, dim: int, level: int, coeffs: Mapping[Word, object] | None = None,
                 exact: bool = True):
        self.dim, self.level, self.exact = int(dim), int(level), bool(exact)
        clean = {}
        for word, value in (coeffs or {}).items():
            word = tuple(int(x) for x in word)
            if not is_lyndon(word):
                raise ValueError(f"{word} is not a Lyndon word")
            if len(word) > self.level or any(x < 1 or x > self.dim for x in word):
                raise TensorError(f"Lyndon word {word} outside dim={self.dim}, level={self.level}")
            value = Rational(value) if self.exact else float(value)
            if value != 0:
                clean[word] = value
        self._coeffs = clean

    @property
    def coeffs(self) -> dict[Word, object]:
        return dict(self._coeffs)

    def __getitem__(self, word):
        return self._coeffs.get(tuple(word), Rational(0) if self.exact else 0.0)

    def items(self):
        return self._coeffs.items()

    def __len__(self) -> int:
        return len(self._coeffs)

    def degree(self) -> int:
        return max((len(w) for w in self._coeffs), default=0)

    def level_part(self, k: int) -> dict[Word, object]:
        return {w: c for w, c in self._coeffs.items() if len(w) == k}

    def __eq__(self, other) -> bool:
        if not isinstance(other, LiePolynomial):
            return NotImplemented
        return (self.dim, self.level) == (other.dim, other.level) and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self.dim, self.level, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        terms = " + ".join(f"{format_scalar(c)}*{bracketing(w)}" for w, c in self._sorted())
        return f"LiePolynomial(dim={self.dim}, level={self.level}, {terms or '0'})"

    def _sorted(self):
        return sorted(self._coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def to_json(self) -> dict:
        return {"dim": self.dim, "level": self.level,
                "coeffs": {format_word(w): format_scalar(c) for w, c in self._sorted()}}

    def bracket_json(self) -> dict:
        """Same coordinates keyed by nested bracket strings."""
        return {bracketing(w): format_scalar(c) for w, c in self._sorted()}

    @classmethod
    def from_json(cls, data: Mapping, exact: bool = True) -> LiePolynomial:
        coeffs = {parse_word(k): parse_scalar(v, exact) for k, v in data.get("coeffs", {}).items()}
        return cls(int(data["dim"]), int(data["level"]), coeffs, exact)


def bracket(x: TensorSeries, y: TensorSeries) -> TensorSeries:
    """[x, y] = x (x) y - y (x) x, truncated."""
    return mul(x, y) - mul(y, x)


def lyndon_to_tensor(poly: LiePolynomial) -> TensorSeries:
    out: dict[Word, object] = defaultdict(int)
    for word, c in poly.items():
        for w, m in _lyndon_expansion(word).items():
            out[w] += m * c
    return TensorSeries(poly.dim, poly.level, out, poly.exact)


def tensor_to_lyndon(t: TensorSeries) -> LiePolynomial:
    """Lyndon coordinates of a Lie element; raises NotLieError otherwise."""
    if t.constant() != 0:
        raise NotLieError(0, "not a Lie element: nonzero constant term")
    result: dict[Word, object] = {}
    for k in range(1, t.level + 1):
        rest = defaultdict(int, t.level_coeffs(k))
        if not rest:
            continue
        for word in lyndon_words(t.dim, k):
            c = rest.get(word, 0)
            if c == 0:
                continue
            result[word] = c
            for w, m in _lyndon_expansion(word).items():
                rest[w] -= m * c
        if t.exact:
            leftover = any(c != 0 for c in rest.values())
        else:
            bound = 1e-9 * (1.0 + t.max_abs())
            leftover = any(abs(c) > bound for c in rest.values())
        if leftover:
            raise NotLieError(k)
    return LiePolynomial(t.dim, t.level, result, t.exact)


def dynkin(t: TensorSeries) -> TensorSeries:
    """Right-bracketing Dynkin map applied word by word."""
    out: dict[Word, object] = defaultdict(int)
    for word, c in t.items():
        if not word:
            continue
        for w, m in _right_bracket(word).items():
            out[w] += m * c
    return TensorSeries(t.dim, t.level, out, t.exact)


def first_non_lie_level(t: TensorSeries) -> int | None:
    """Lowest level k at which dynkin(pi_k T) != k pi_k T, or None."""
    if t.constant() != 0:
        return 0
    image = dynkin(t)
    scale = max(t.max_abs(), image.max_abs())
    for k in range(1, t.level + 1):
        diff = image.project(k) - t.project(k).scale(k)
        if not diff.is_zero(scale=scale):
            return k
    return None


def is_lie_series(t: TensorSeries) -> bool:
    return first_non_lie_level(t) is None


def _check_lie(t: TensorSeries, name: str) -> None:
    k = first_non_lie_level(t)
    if k is not None:
        raise NotLieError(k, f"{name} is not a Lie element: fails at level {k}")


def bch(a: TensorSeries, b: TensorSeries, N: int | None = None) -> TensorSeries:
    """log(exp(a) exp(b)) in the truncated algebra of level N."""
    if N is not None:
        a, b = a.truncate(N), b.truncate(N)
    _check_lie(a, "a")
    _check_lie(b, "b")
    return log(mul(exp(a), exp(b)))


def bch_iterated(vs: Iterable[Sequence], N: int, exact: bool = True) -> LiePolynomial:
    """Lyndon coordinates of log(exp(v_1) ... exp(v_m)) for vectors v_i."""
    vs = [list(v) for v in vs]
    if not vs:
        raise ValueError("bch_iterated needs at least one vector")
    dim = len(vs[0])
    if any(len(v) != dim for v in vs):
        raise TensorError("vectors of differing dimension")
    if len(vs) == 1:
        return LiePolynomial(dim, N, {(i + 1,): x for i, x in enumerate(vs[0])}, exact)
    prod = TensorSeries.one(dim, N, exact)
    for v in vs:
        prod = mul(prod, exp(TensorSeries.from_vector(v, N, exact)))
    return tensor_to_lyndon(log(prod))
