"""Piecewise-linear paths and their signatures."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .lie import LiePolynomial, lyndon_to_tensor, tensor_to_lyndon
from .tensor import Rational, TensorSeries, exp, format_scalar, log, mul, parse_scalar


def _vec(values, exact: bool) -> tuple:
    return tuple(Rational(x) if exact else float(x) for x in values)


@dataclass(frozen=True)
class PiecewiseLinearPath:
    """A path given by its ordered piece vectors.

    Translation and parametrisation are already quotiented away: two paths
    with the same piece list have the same signature.
    """

    dim: int
    pieces: tuple[tuple, ...] = ()
    exact: bool = True

    def __post_init__(self):
        pieces = tuple(_vec(p, self.exact) for p in self.pieces)
        for p in pieces:
            if len(p) != self.dim:
                raise ValueError(f"piece {p} does not have dimension {self.dim}")
        object.__setattr__(self, "pieces", pieces)

    @classmethod
    def from_pieces(cls, pieces: Sequence[Sequence], dim: int | None = None,
                    exact: bool = True) -> PiecewiseLinearPath:
        pieces = [list(p) for p in pieces]
        if dim is None:
            if not pieces:
                raise ValueError("dim is required for an empty path")
            dim = len(pieces[0])
        return cls(dim, tuple(tuple(p) for p in pieces), exact)

    @classmethod
    def from_points(cls, points: Sequence[Sequence], exact: bool = True) -> PiecewiseLinearPath:
        pts = [_vec(p, exact) for p in points]
        pieces = [tuple(b - a for a, b in zip(p, q)) for p, q in zip(pts, pts[1:])]
        return cls(len(pts[0]), tuple(pieces), exact)

    @property
    def m(self) -> int:
        return len(self.pieces)

    def __len__(self) -> int:
        return len(self.pieces)

    def chord(self) -> tuple:
        zero = Rational(0) if self.exact else 0.0
        return tuple(sum((p[i] for p in self.pieces), zero) for i in range(self.dim))

    def concat(self, other: PiecewiseLinearPath) -> PiecewiseLinearPath:
        if other.dim != self.dim:
            raise ValueError(f"cannot concatenate dim {self.dim} with dim {other.dim}")
        return PiecewiseLinearPath(self.dim, self.pieces + other.pieces, self.exact and other.exact)

    def reversed(self) -> PiecewiseLinearPath:
        return PiecewiseLinearPath(self.dim, tuple(tuple(-x for x in p) for p in reversed(self.pieces)),
                                   self.exact)

    def points(self) -> list[tuple]:
        """Vertices of the path started at the origin."""
        pt = tuple(Rational(0) if self.exact else 0.0 for _ in range(self.dim))
        out = [pt]
        for p in self.pieces:
            pt = tuple(a + b for a, b in zip(pt, p))
            out.append(pt)
        return out

    def to_json(self) -> dict:
        return {"dim": self.dim, "pieces": [[format_scalar(x) for x in p] for p in self.pieces]}

    @classmethod
    def from_json(cls, data: Mapping, exact: bool = True) -> PiecewiseLinearPath:
        pieces = [[parse_scalar(x, exact) for x in p] for p in data.get("pieces", [])]
        return cls.from_pieces(pieces, int(data["dim"]), exact)


@dataclass(frozen=True)
class SampledPath:
    """Float samples joined by straight segments."""

    dim: int
    samples: tuple[tuple[float, ...], ...] = field(default_factory=tuple)

    def __post_init__(self):
        samples = tuple(tuple(float(x) for x in s) for s in self.samples)
        if len(samples) < 2:
            raise ValueError("a sampled path needs at least 2 samples")
        if any(len(s) != self.dim for s in samples):
            raise ValueError(f"all samples must have dimension {self.dim}")
        object.__setattr__(self, "samples", samples)

    @classmethod
    def from_path(cls, path: PiecewiseLinearPath) -> SampledPath:
        pts = path.points()
        if len(pts) < 2:
            pts = pts * 2
        return cls(path.dim, tuple(tuple(float(x) for x in p) for p in pts))

    def to_json(self) -> dict:
        return {"dim": self.dim, "samples": [list(s) for s in self.samples]}

    @classmethod
    def from_json(cls, data: Mapping) -> SampledPath:
        return cls(int(data["dim"]), tuple(tuple(s) for s in data["samples"]))


# -- signatures --------------------------------------------------------------

def signature(path: PiecewiseLinearPath, N: int) -> TensorSeries:
    """exp(v_1) (x) ... (x) exp(v_m), truncated at level N."""
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    sig = TensorSeries.one(path.dim, N, path.exact)
    for piece in path.pieces:
        sig = mul(sig, exp(TensorSeries.from_vector(piece, N, path.exact)))
    return sig


def log_signature_tensor(path: PiecewiseLinearPath, N: int) -> TensorSeries:
    return log(signature(path, N))


def log_signature(path: PiecewiseLinearPath, N: int) -> LiePolynomial:
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return tensor_to_lyndon(log_signature_tensor(path, N))


def sig_of_pure_rough(ell: LiePolynomial, N: int) -> TensorSeries:
    """Signature exp(ell) of the group path t -> exp(t ell)."""
    if ell.degree() > N:
        raise ValueError(f"N={N} is below the degree {ell.degree()} of the Lie polynomial")
    poly = LiePolynomial(ell.dim, N, ell.coeffs, ell.exact)
    return exp(lyndon_to_tensor(poly))


# -- reduction ---------------------------------------------------------------

def _is_zero_vec(v) -> bool:
    return all(x == 0 for x in v)


def collinear(u, v) -> bool:
    """All 2x2 minors of the pair vanish."""
    n = len(u)
    return all(u[i] * v[j] - u[j] * v[i] == 0 for i in range(n) for j in range(i + 1, n))


def is_reduced(path: PiecewiseLinearPath) -> bool:
    if any(_is_zero_vec(p) for p in path.pieces):
        return False
    return not any(collinear(p, q) for p, q in zip(path.pieces, path.pieces[1:]))


def reduce(path: PiecewiseLinearPath) -> PiecewiseLinearPath:
    """Drop zero pieces and merge consecutive collinear ones until nothing changes."""
    stack: list[tuple] = []
    for piece in path.pieces:
        # single left-to-right pass with a stack reaches the fixpoint:
        # every merge only needs rechecking against the new top
        cur = piece
        while True:
            if _is_zero_vec(cur):
                break
            if stack and collinear(stack[-1], cur):
                cur = tuple(a + b for a, b in zip(stack.pop(), cur))
                continue
            stack.append(cur)
            break
    return PiecewiseLinearPath(path.dim, tuple(stack), path.exact)


# -- closed forms at levels two and three ------------------------------------

def _outer(dim: int, *vectors) -> dict:
    out: dict = {(): Rational(1)}
    for v in vectors:
        out = {w + (i + 1,): c * x for w, c in out.items() for i, x in enumerate(v) if x != 0}
    return out


def _accumulate(acc: dict, terms: dict, factor) -> None:
    for w, c in terms.items():
        acc[w] = acc.get(w, 0) + factor * c


def level2_closed_form(path: PiecewiseLinearPath) -> TensorSeries:
    """1/2 sum_{i<j} (v_i v_j - v_j v_i)."""
    vs, acc = path.pieces, {}
    half = Rational(1, 2) if path.exact else 0.5
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            _accumulate(acc, _outer(path.dim, vs[i], vs[j]), half)
            _accumulate(acc, _outer(path.dim, vs[j], vs[i]), -half)
    return TensorSeries(path.dim, 2, acc, path.exact)


def level3_closed_form(path: PiecewiseLinearPath) -> TensorSeries:
    """Level-three log-signature written out term by term.

    1/12 sum_{i != j} (v_i v_i v_j + v_i v_j v_j)
      + 1/3 sum_{S1} v_i v_j v_k - 1/6 sum_{S2} v_i v_j v_k
    with S1 the monotone triples and S2 the zigzag triples.
    """
    vs, acc, m = path.pieces, {}, len(path.pieces)
    if path.exact:
        c12, c3, c6 = Rational(1, 12), Rational(1, 3), Rational(1, 6)
    else:
        c12, c3, c6 = 1 / 12, 1 / 3, 1 / 6
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            _accumulate(acc, _outer(path.dim, vs[i], vs[i], vs[j]), c12)
            _accumulate(acc, _outer(path.dim, vs[i], vs[j], vs[j]), c12)
    for i in range(m):
        for j in range(m):
            for k in range(m):
                if i < j < k or i > j > k:
                    _accumulate(acc, _outer(path.dim, vs[i], vs[j], vs[k]), c3)
                elif (i < j > k) or (i > j < k):
                    _accumulate(acc, _outer(path.dim, vs[i], vs[j], vs[k]), -c6)
    return TensorSeries(path.dim, 3, acc, path.exact)


# -- numeric oracle ----------------------------------------------------------

def signature_numeric_oracle(path: SampledPath, N: int, steps: int) -> TensorSeries:
    """Left-point Euler scheme for dS = S (x) dgamma, S(0) = 1, in floats.

    Each sample interval is cut into ``steps`` equal sub-steps and the state
    is updated by S <- S (x) (1 + dgamma).
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    d = path.dim
    sig = TensorSeries.one(d, N, exact=False)
    one = TensorSeries.one(d, N, exact=False)
    for a, b in zip(path.samples, path.samples[1:]):
        delta = [(y - x) / steps for x, y in zip(a, b)]
        if all(x == 0.0 for x in delta):
            continue
        step = one + TensorSeries.from_vector(delta, N, exact=False)
        for _ in range(steps):
            sig = _mul_step(sig, step)
    return sig


def _mul_step(sig: TensorSeries, step: TensorSeries) -> TensorSeries:
    # S (x) (1 + dx) only needs one pass over S since dx is pure level one
    coeffs = dict(sig.items())
    out = dict(coeffs)
    letters = [(w[0], c) for w, c in step.items() if len(w) == 1]
    for w, c in coeffs.items():
        if len(w) >= sig.level:
            continue
        for i, x in letters:
            key = w + (i,)
            out[key] = out.get(key, 0.0) + c * x
    return TensorSeries._raw(sig.dim, sig.level, out, False)
