"""Level-by-level vanishing diagnostics for log-signatures of PL paths.

The searches here are evidence, not proofs: random rational paths are
evaluated in exact arithmetic, so a reported nonzero level is certified at
the sampled point, while a zero level is exact.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .path import PiecewiseLinearPath, is_reduced, log_signature_tensor, signature
from .tensor import Rational, TensorSeries

# entries p/q with p in [-9, 9], q in [1, 9]
NUMERATOR_RANGE = (-9, 9)
DENOMINATOR_RANGE = (1, 9)


@dataclass(frozen=True)
class VanishingReport:
    path: PiecewiseLinearPath
    n1: int
    K: int
    zero_levels: frozenset[int]
    nonzero_levels: frozenset[int]
    seed: int | None = None
    source: str = "given"

    def __post_init__(self):
        levels = set(range(self.n1, self.K + 1))
        if set(self.zero_levels) | set(self.nonzero_levels) != levels:
            raise ValueError("zero and nonzero levels must cover the checked range")
        if set(self.zero_levels) & set(self.nonzero_levels):
            raise ValueError("zero and nonzero levels overlap")

    @property
    def first_nonzero(self) -> int | None:
        return min(self.nonzero_levels, default=None)

    @property
    def zero_run(self) -> list[int]:
        """Consecutive zero levels starting at n1."""
        run = []
        for k in range(self.n1, self.K + 1):
            if k not in self.zero_levels:
                break
            run.append(k)
        return run

    def to_json(self) -> dict:
        return {
            "n1": self.n1,
            "K": self.K,
            "zero_levels": sorted(self.zero_levels),
            "nonzero_levels": sorted(self.nonzero_levels),
            "zero_run": self.zero_run,
            "first_nonzero": self.first_nonzero,
            "source": self.source,
            "path": self.path.to_json(),
            "seed": self.seed,
        }


def vanishing_report(path: PiecewiseLinearPath, n1: int, K: int, *, seed: int | None = None,
                     source: str = "given") -> VanishingReport:
    if not 1 <= n1 <= K:
        raise ValueError(f"need 1 <= n1 <= K, got n1={n1}, K={K}")
    ls = log_signature_tensor(path, K)
    present = {len(w) for w in ls}
    if not ls.exact:
        present = {k for k in present if not ls.project(k).is_zero(scale=ls.max_abs())}
    zero = frozenset(k for k in range(n1, K + 1) if k not in present)
    nonzero = frozenset(range(n1, K + 1)) - zero
    return VanishingReport(path, n1, K, zero, nonzero, seed, source)


# -- random paths ------------------------------------------------------------

def random_rational(rng: random.Random) -> Rational:
    return Rational(rng.randint(*NUMERATOR_RANGE), rng.randint(*DENOMINATOR_RANGE))


def random_path(rng: random.Random, m: int, d: int, reduced: bool = True,
                max_tries: int = 10_000) -> PiecewiseLinearPath:
    """Random rational path with ``m`` pieces, rejection-sampled to be reduced."""
    for _ in range(max_tries):
        pieces = tuple(tuple(random_rational(rng) for _ in range(d)) for _ in range(m))
        path = PiecewiseLinearPath(d, pieces)
        if not reduced or is_reduced(path):
            return path
    raise RuntimeError(f"no reduced path found in {max_tries} tries (m={m}, d={d})")


def trial_rng(seed: int, trial: int) -> random.Random:
    # string seeds hash deterministically across runs and platforms
    return random.Random(f"{seed}:{trial}")


def _pad(v: Sequence, d: int) -> tuple:
    return tuple(v) + (0,) * (d - len(v))


def three_piece_level2_family(a, d: int = 2) -> PiecewiseLinearPath:
    """Pieces (1,1), (1,-1), (a,1): level two vanishes for every a."""
    if d < 2:
        raise ValueError("the family lives in dimension >= 2")
    return PiecewiseLinearPath(d, (_pad((1, 1), d), _pad((1, -1), d), _pad((Rational(a), 1), d)))


def three_piece_level3_family(v1: Sequence, v2: Sequence) -> PiecewiseLinearPath:
    """v_3 = -v_1 - 3 v_2, which kills level three."""
    v1 = tuple(Rational(x) for x in v1)
    v2 = tuple(Rational(x) for x in v2)
    v3 = tuple(-a - 3 * b for a, b in zip(v1, v2))
    return PiecewiseLinearPath(len(v1), (v1, v2, v3))


def _structured_candidates(n1: int, m: int, d: int, rng: random.Random, count: int):
    if m != 3:
        return
    if n1 == 2 and d >= 2:
        for _ in range(count):
            yield three_piece_level2_family(random_rational(rng), d)
    elif n1 == 3:
        for _ in range(count):
            yield three_piece_level3_family([random_rational(rng) for _ in range(d)],
                                            [random_rational(rng) for _ in range(d)])


def _better(new: VanishingReport, best: VanishingReport | None) -> bool:
    return best is None or len(new.zero_run) > len(best.zero_run)


def vanish_search(n1: int, m: int, d: int, K: int, trials: int, seed: int,
                  structured: int = 20) -> VanishingReport:
    """Best initial zero run from level n1 over random and structured reduced paths.

    Deterministic in ``seed``: trial i draws from its own generator seeded by
    (seed, i), and ties keep the earliest candidate.
    """
    if m < 1 or trials < 1:
        raise ValueError("need m >= 1 and trials >= 1")
    best = None
    for i in range(trials):
        path = random_path(trial_rng(seed, i), m, d)
        report = vanishing_report(path, n1, K, seed=seed, source=f"random[{i}]")
        if _better(report, best):
            best = report
    rng = trial_rng(seed, -1)
    for j, path in enumerate(_structured_candidates(n1, m, d, rng, structured)):
        if not is_reduced(path):
            continue
        report = vanishing_report(path, n1, K, seed=seed, source=f"structured[{j}]")
        if _better(report, best):
            best = report
    return best


# -- growth profile ----------------------------------------------------------

def l1_norm(t: TensorSeries, k: int):
    """l1 norm of the level-k coefficients (exact for exact tensors)."""
    return sum((abs(c) for c in t.level_coeffs(k).values()), Rational(0) if t.exact else 0.0)


@dataclass(frozen=True)
class LpProfile:
    p: float
    values: tuple[float, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {"p": self.p, "values": list(self.values)}


def lp_profile(t: TensorSeries, p: float, N: int | None = None) -> LpProfile:
    """((k/p)! ||pi_k T||_1)^(p/k) for k = 1..N, with (k/p)! = Gamma(k/p + 1)."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    N = t.level if N is None else N
    values = []
    for k in range(1, N + 1):
        norm = float(l1_norm(t, k))
        if norm == 0.0:
            values.append(0.0)
            continue
        # via logs: (k/p)! overflows float well before the product does
        values.append(math.exp(p / k * (math.lgamma(k / p + 1) + math.log(norm))))
    return LpProfile(float(p), tuple(values))


def path_length(path: PiecewiseLinearPath, norm: str = "l2") -> float:
    """1-variation sum_i ||v_i|| of a PL path, Euclidean unless norm="l1"."""
    if norm == "l2":
        return sum(math.sqrt(sum(float(x) ** 2 for x in v)) for v in path.pieces)
    if norm == "l1":
        return float(sum((abs(x) for v in path.pieces for x in v), Rational(0)))
    raise ValueError(f"unknown norm {norm!r}")


def one_variation_bound_holds(path: PiecewiseLinearPath, N: int, norm: str = "l1",
                              atol: float = 1e-9) -> bool:
    """(k! ||pi_k Sig||_1)^(1/k) <= length for k = 1..N."""
    profile = lp_profile(signature(path, N), 1, N)
    bound = path_length(path, norm) + atol
    return all(v <= bound for v in profile.values)

