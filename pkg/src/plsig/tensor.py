"""Truncated free tensor algebra T^(N)(R^d) with sparse coefficients.

Elements are stored as a map from words (tuples of 1-based letters) to
coefficients.  Two coefficient backends share one implementation:

* exact: every coefficient is an arbitrary-precision rational (``gmpy2.mpq``,
  falling back to :class:`fractions.Fraction`); the default,
* float: every coefficient is a Python ``float``.

Every binary operation requires equal ``dim`` and ``level``; a mismatch is an
error rather than a silent truncation.
"""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover
    from fractions import Fraction as Rational

Word = tuple[int, ...]

#: relative tolerance for "is zero" decisions in the float backend
FLOAT_ZERO_RTOL = 1e-9


class TensorError(ValueError):
    """Raised on dimension/level mismatch or an invalid constant term."""


def _coerce(value, exact: bool):
    # floats enter the exact backend by their exact binary expansion
    return Rational(value) if exact else float(value)


def parse_word(text: str) -> Word:
    """``"1,2,1"`` -> ``(1, 2, 1)``; the empty string is the empty word."""
    text = text.strip()
    if not text:
        return ()
    return tuple(int(part) for part in text.split(","))


def format_word(word: Word) -> str:
    return ",".join(str(letter) for letter in word)


def format_scalar(value) -> str:
    if isinstance(value, (Fraction, Rational, int)):
        value = Rational(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return repr(float(value))


def parse_scalar(text, exact: bool = True):
    if exact:
        if isinstance(text, str):
            return Rational(text.strip())
        return _coerce(text, True)
    if isinstance(text, str) and "/" in text:
        return float(Rational(text))
    return float(text)


def all_words(dim: int, k: int) -> Iterator[Word]:
    """All words of length ``k`` over ``{1..dim}`` in lexicographic order."""
    return product(range(1, dim + 1), repeat=k)


class TensorSeries:
    """An element of the truncated tensor algebra.

    Values are immutable once constructed.  ``coeffs`` never holds an exact
    zero, so equality in the exact backend is plain map equality.
    """

    __slots__ = ("dim", "level", "exact", "_coeffs", "_hash")

    def __init__(self, dim: int, level: int, coeffs: Mapping[Word, object] | None = None,
                 exact: bool = True):
        if dim < 1:
            raise TensorError(f"dim must be >= 1, got {dim}")
        if level < 0:
            raise TensorError(f"level must be >= 0, got {level}")
        self.dim = int(dim)
        self.level = int(level)
        self.exact = bool(exact)
        clean: dict[Word, object] = {}
        for word, value in (coeffs or {}).items():
            word = tuple(int(letter) for letter in word)
            if len(word) > self.level:
                raise TensorError(f"word {word} exceeds truncation level {self.level}")
            if any(letter < 1 or letter > self.dim for letter in word):
                raise TensorError(f"word {word} has a letter outside 1..{self.dim}")
            value = _coerce(value, self.exact)
            if value != 0:
                clean[word] = value
        self._coeffs = clean
        self._hash = None

    # -- construction -------------------------------------------------------

    @classmethod
    def _raw(cls, dim: int, level: int, coeffs: dict, exact: bool) -> TensorSeries:
        # trusted constructor: keys valid, values already of the right type
        obj = cls.__new__(cls)
        obj.dim, obj.level, obj.exact = dim, level, exact
        obj._coeffs = {w: c for w, c in coeffs.items() if c != 0}
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, dim: int, level: int, exact: bool = True) -> TensorSeries:
        return cls(dim, level, {}, exact)

    @classmethod
    def one(cls, dim: int, level: int, exact: bool = True) -> TensorSeries:
        return cls(dim, level, {(): 1}, exact)

    @classmethod
    def from_vector(cls, vector: Iterable, level: int, exact: bool = True) -> TensorSeries:
        """The level-one element sum_i vector[i] e_i."""
        vector = list(vector)
        return cls(len(vector), level, {(i + 1,): v for i, v in enumerate(vector)}, exact)

    @classmethod
    def letter(cls, i: int, dim: int, level: int, exact: bool = True) -> TensorSeries:
        return cls(dim, level, {(i,): 1}, exact)

    # -- access -------------------------------------------------------------

    @property
    def coeffs(self) -> dict[Word, object]:
        return dict(self._coeffs)

    def __getitem__(self, word) -> object:
        word = tuple(word)
        return self._coeffs.get(word, Rational(0) if self.exact else 0.0)

    def items(self):
        return self._coeffs.items()

    def __iter__(self):
        return iter(self._coeffs)

    def __len__(self) -> int:
        return len(self._coeffs)

    def constant(self):
        return self[()]

    def project(self, k: int) -> TensorSeries:
        """pi_k: keep only the level-``k`` part."""
        return TensorSeries._raw(self.dim, self.level,
                                 {w: c for w, c in self._coeffs.items() if len(w) == k},
                                 self.exact)

    def level_coeffs(self, k: int) -> dict[Word, object]:
        return {w: c for w, c in self._coeffs.items() if len(w) == k}

    def by_level(self) -> list[dict[Word, object]]:
        out: list[dict[Word, object]] = [{} for _ in range(self.level + 1)]
        for w, c in self._coeffs.items():
            out[len(w)][w] = c
        return out

    def truncate(self, level: int) -> TensorSeries:
        """Explicit change of truncation level (never done implicitly)."""
        return TensorSeries._raw(self.dim, level,
                                 {w: c for w, c in self._coeffs.items() if len(w) <= level},
                                 self.exact)

    def degree(self) -> int:
        """Highest level carrying a nonzero coefficient, -1 for zero."""
        return max((len(w) for w in self._coeffs), default=-1)

    def max_abs(self) -> float:
        return max((abs(float(c)) for c in self._coeffs.values()), default=0.0)

    def is_zero(self, rtol: float = FLOAT_ZERO_RTOL, scale: float | None = None) -> bool:
        if self.exact:
            return not self._coeffs
        bound = rtol * (1.0 + (self.max_abs() if scale is None else scale))
        return all(abs(c) <= bound for c in self._coeffs.values())

    def to_float(self) -> TensorSeries:
        return TensorSeries._raw(self.dim, self.level,
                                 {w: float(c) for w, c in self._coeffs.items()}, False)

    def to_exact(self) -> TensorSeries:
        return TensorSeries._raw(self.dim, self.level,
                                 {w: Rational(c) for w, c in self._coeffs.items()}, True)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: TensorSeries) -> bool:
        if not isinstance(other, TensorSeries):
            raise TypeError(f"expected TensorSeries, got {type(other).__name__}")
        if self.dim != other.dim:
            raise TensorError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if self.level != other.level:
            raise TensorError(f"level mismatch: {self.level} vs {other.level}")
        return self.exact and other.exact

    def _scalar(self, value, exact: bool):
        return Rational(value) if exact else float(value)

    def __add__(self, other: TensorSeries) -> TensorSeries:
        exact = self._check(other)
        out = dict(self._coeffs) if exact == self.exact else {w: float(c) for w, c in self._coeffs.items()}
        for w, c in other._coeffs.items():
            out[w] = out.get(w, 0) + (c if exact else float(c))
        return TensorSeries._raw(self.dim, self.level, out, exact)

    def __neg__(self) -> TensorSeries:
        return TensorSeries._raw(self.dim, self.level, {w: -c for w, c in self._coeffs.items()},
                                 self.exact)

    def __sub__(self, other: TensorSeries) -> TensorSeries:
        return self + (-other)

    def scale(self, factor) -> TensorSeries:
        exact = self.exact and not isinstance(factor, float)
        factor = self._scalar(factor, exact)
        coeffs = self._coeffs if exact == self.exact else {w: float(c) for w, c in self._coeffs.items()}
        return TensorSeries._raw(self.dim, self.level, {w: factor * c for w, c in coeffs.items()},
                                 exact)

    def __mul__(self, other):
        if isinstance(other, TensorSeries):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, factor):
        return self.scale(factor)

    def __truediv__(self, factor):
        if self.exact and not isinstance(factor, float):
            return self.scale(Rational(1) / Rational(factor))
        return self.scale(1.0 / float(factor))

    def __matmul__(self, other: TensorSeries) -> TensorSeries:
        return mul(self, other)

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorSeries):
            return NotImplemented
        return (self.dim, self.level) == (other.dim, other.level) and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dim, self.level, frozenset(self._coeffs.items())))
        return self._hash

    def allclose(self, other: TensorSeries, rtol: float = FLOAT_ZERO_RTOL) -> bool:
        """Equality up to the scale-relative float tolerance (exact if both are exact)."""
        diff = self - other
        scale = max(self.max_abs(), other.max_abs())
        return diff.is_zero(rtol, scale)

    def __repr__(self) -> str:
        if not self._coeffs:
            return f"TensorSeries(dim={self.dim}, level={self.level}, 0)"
        terms = " + ".join(f"{format_scalar(c)}*({format_word(w)})"
                           for w, c in sorted(self._coeffs.items(), key=lambda kv: (len(kv[0]), kv[0])))
        return f"TensorSeries(dim={self.dim}, level={self.level}, {terms})"

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        ordered = sorted(self._coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))
        return {"dim": self.dim, "level": self.level,
                "coeffs": {format_word(w): format_scalar(c) for w, c in ordered}}

    @classmethod
    def from_json(cls, data: Mapping, exact: bool = True) -> TensorSeries:
        coeffs = {parse_word(k): parse_scalar(v, exact) for k, v in data.get("coeffs", {}).items()}
        return cls(int(data["dim"]), int(data["level"]), coeffs, exact)


def _mul_levels(a: list[dict], b: list[dict], level: int, min_level: int = 0) -> dict:
    out: dict[Word, object] = defaultdict(int)
    for i, a_i in enumerate(a):
        if not a_i:
            continue
        for j, b_j in enumerate(b):
            if i + j > level:
                break
            if i + j < min_level or not b_j:
                continue
            for u, cu in a_i.items():
                for v, cv in b_j.items():
                    out[u + v] += cu * cv
    return out


def mul(a: TensorSeries, b: TensorSeries) -> TensorSeries:
    """Truncated concatenation product a (x) b."""
    exact = a._check(b)
    out = _mul_levels(a.by_level(), b.by_level(), a.level)
    if not exact:
        out = {w: float(c) for w, c in out.items()}
    return TensorSeries._raw(a.dim, a.level, out, exact)


def _unit_like(x: TensorSeries) -> TensorSeries:
    return TensorSeries.one(x.dim, x.level, x.exact)


def _recip(k: int, exact: bool):
    return Rational(1, k) if exact else 1.0 / k


def exp(x: TensorSeries) -> TensorSeries:
    """Truncated exponential sum_{k<=N} x^k / k!, evaluated Horner style."""
    if x.constant() != 0:
        raise TensorError("exp requires a zero constant term")
    one = _unit_like(x)
    result = one
    # 1 + x(1 + x/2(1 + x/3(...)))
    for k in range(x.level, 0, -1):
        result = one + mul(x, result).scale(_recip(k, x.exact))
    return result


def log(s: TensorSeries) -> TensorSeries:
    """Truncated logarithm of an element with constant term 1."""
    if s.constant() != 1:
        raise TensorError(f"log requires constant term 1, got {s.constant()}")
    one = _unit_like(s)
    y = s - one
    if s.level == 0:
        return TensorSeries.zero(s.dim, s.level, s.exact)
    # y(1 - y(1/2 - y(1/3 - ...)))
    r = one.scale(_recip(s.level, s.exact))
    for k in range(s.level - 1, 0, -1):
        r = one.scale(_recip(k, s.exact)) - mul(y, r)
    return mul(y, r)


def inverse(s: TensorSeries) -> TensorSeries:
    """Multiplicative inverse sum_{k<=N} (1 - S)^k of an element with constant term 1."""
    if s.constant() != 1:
        raise TensorError(f"inverse requires constant term 1, got {s.constant()}")
    one = _unit_like(s)
    y = one - s
    result = one
    for _ in range(s.level):
        result = one + mul(y, result)
    return result


def shuffle(u: Word, v: Word) -> dict[Word, int]:
    """Shuffle product of two words as a multiplicity map."""
    u, v = tuple(u), tuple(v)
    n = len(u) + len(v)
    out: dict[Word, int] = defaultdict(int)
    for positions in combinations(range(n), len(u)):
        pos = set(positions)
        iu, iv = iter(u), iter(v)
        out[tuple(next(iu) if i in pos else next(iv) for i in range(n))] += 1
    return dict(out)


def is_grouplike(s: TensorSeries, rtol: float = FLOAT_ZERO_RTOL) -> bool:
    """Shuffle relations <S,u><S,v> = <S, u sh v> for all |u| + |v| <= N."""
    if s.constant() != 1:
        return False
    scale = max(1.0, s.max_abs())
    bound = rtol * (1.0 + scale * scale)
    for len_u in range(1, s.level):
        for len_v in range(len_u, s.level - len_u + 1):
            for u in all_words(s.dim, len_u):
                su = s[u]
                for v in all_words(s.dim, len_v):
                    lhs = su * s[v]
                    rhs = sum(m * s[w] for w, m in shuffle(u, v).items())
                    if s.exact:
                        if lhs != rhs:
                            return False
                    elif abs(lhs - rhs) > bound:
                        return False
    return True

