"""Hilbert series of graded rings of modular forms and of their differential
closures, new-generator counts, and growth fits."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, UnsupportedModelError


@dataclass(frozen=True)
class GradedRingSpec:
    """Abstract ring of modular forms.

    ``dimension_table`` (dims for k = 0, 2, 4, ...) describes a ring with
    relations; when absent the ring is free on ``generator_weights``.
    """

    generator_weights: tuple[int, ...]
    cocompact: bool = True
    dimension_table: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "generator_weights", tuple(sorted(self.generator_weights)))
        for w in self.generator_weights:
            if w <= 0 or w % 2:
                raise PreconditionError(f"generator weight {w} is not positive and even")
        if self.dimension_table is not None:
            object.__setattr__(self, "dimension_table", tuple(self.dimension_table))
            if not self.dimension_table or self.dimension_table[0] != 1:
                raise PreconditionError("dimension table must start with dim M_0 = 1")

    @property
    def is_free(self) -> bool:
        return self.dimension_table is None


@dataclass(frozen=True)
class HilbertSeries:
    """dims[i] is the dimension in weight 2i."""

    dims: tuple[int, ...]

    def __getitem__(self, k: int) -> int:
        if k % 2:
            return 0
        return self.dims[k // 2]

    @property
    def max_weight(self) -> int:
        return 2 * (len(self.dims) - 1)

    def weights(self) -> range:
        return range(0, self.max_weight + 1, 2)


def _check_even(K: int) -> None:
    if K < 0 or K % 2:
        raise PreconditionError(f"K = {K} must be even and nonnegative")


def hilbert_modular(spec: GradedRingSpec, K: int) -> HilbertSeries:
    """dim M_k for even k <= K, expanding prod 1/(1 - t^w) for free rings."""
    _check_even(K)
    n = K // 2 + 1
    if spec.dimension_table is not None:
        if len(spec.dimension_table) < n:
            raise PreconditionError(f"dimension table stops below weight {K}")
        return HilbertSeries(spec.dimension_table[:n])
    dims = [1] + [0] * (n - 1)
    for w in spec.generator_weights:
        step = w // 2
        for i in range(step, n):
            dims[i] += dims[i - step]
    return HilbertSeries(tuple(dims))


def hilbert_closure(spec: GradedRingSpec, K: int) -> HilbertSeries:
    """dim CL_k = sum_j dim M_(k-2j) over k - 2j > 0, plus the phi line if not cocompact."""
    m = hilbert_modular(spec, K)
    dims = []
    for i in range(len(m.dims)):
        if i == 0:
            dims.append(1)
            continue
        d = sum(m.dims[1 : i + 1])
        if not spec.cocompact:
            d += 1
        dims.append(d)
    return HilbertSeries(tuple(dims))


def new_generator_count(spec: GradedRingSpec, k: int) -> int:
    """dim (J/J^2)_k for the closure of a free ring."""
    if not spec.is_free:
        raise UnsupportedModelError(
            "generator counts for rings with relations need the concrete ring; "
            "use structure.new_generator_dims_sl2z for SL(2, Z)"
        )
    _check_even(k)
    return sum(1 for w in spec.generator_weights if w <= k and (k - w) % 2 == 0)


def dichotomy_dim2(spec: GradedRingSpec) -> int:
    """dim of weight-2 quasimodular forms: dim M_2, plus the phi line off the cocompact case."""
    return hilbert_modular(spec, 2)[2] + (0 if spec.cocompact else 1)


@dataclass(frozen=True)
class GrowthFit:
    quadratic: float
    linear: float
    constant: float
    ratio_at_K: float
    K: int


def growth_fit(spec: GradedRingSpec, K: int, series: str = "closure") -> GrowthFit:
    """Least-squares fit dim_k ~ a k^2 + b k + c over even 2 <= k <= K.

    ``series`` selects the closure ("closure") or the ring itself ("modular").
    """
    _check_even(K)
    if K < 6:
        raise PreconditionError("need K >= 6 for a quadratic fit")
    if series == "closure":
        h = hilbert_closure(spec, K)
    elif series == "modular":
        h = hilbert_modular(spec, K)
    else:
        raise ValueError(f"unknown series {series!r}")
    ks = np.arange(2, K + 1, 2, dtype=float)
    ys = np.array([h[int(k)] for k in ks], dtype=float)
    a, b, c = np.polyfit(ks, ys, 2)
    return GrowthFit(float(a), float(b), float(c), h[K] / K**2, K)
