"""Exact signatures and log-signatures of piecewise-linear paths."""
from .tensor import Rational, TensorError, TensorSeries, exp, inverse, is_grouplike, log, mul, shuffle
from .lie import (
    LiePolynomial,
    NotLieError,
    bch,
    bch_iterated,
    bracket,
    is_lie_series,
    lyndon_to_tensor,
    lyndon_words,
    tensor_to_lyndon,
)
from .path import (
    PiecewiseLinearPath,
    SampledPath,
    is_reduced,
    level2_closed_form,
    level3_closed_form,
    log_signature,
    reduce,
    sig_of_pure_rough,
    signature,
    signature_numeric_oracle,
)

__version__ = "0.1.0"
