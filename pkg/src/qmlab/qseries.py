"""Truncated power series in q with exact rational coefficients."""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import EvaluationDomainError

DEFAULT_PRECISION = 80
# Im(z) >= 0.3 keeps |q| <= 0.152, so 80 terms leave a negligible tail.
DEFAULT_MIN_IMAG = 0.3


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class QSeries:
    """Sum c_n q^n known modulo q^precision."""

    __slots__ = ("coeffs", "precision")

    def __init__(self, coeffs: Iterable = (), precision: int | None = None):
        cs = [_frac(c) for c in coeffs]
        if precision is None:
            precision = len(cs)
        if precision < 1:
            raise ValueError("precision must be positive")
        cs = cs[:precision] + [Fraction(0)] * (precision - len(cs))
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "precision", precision)

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    @classmethod
    def constant(cls, c, precision: int = DEFAULT_PRECISION) -> QSeries:
        return cls([c], precision)

    @classmethod
    def monomial(cls, n: int, precision: int = DEFAULT_PRECISION, c=1) -> QSeries:
        cs = [0] * precision
        if n < precision:
            cs[n] = c
        return cls(cs, precision)

    def __repr__(self):
        return f"QSeries({self})"

    def __str__(self):
        return self.to_text()

    def to_text(self, terms: int | None = None) -> str:
        n = self.precision if terms is None else min(terms, self.precision)
        parts = []
        for i, c in enumerate(self.coeffs[:n]):
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                qpart = "q" if i == 1 else f"q^{i}"
                body = qpart if mag == 1 else f"{mag}*{qpart}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        if not parts:
            text = "0"
        else:
            first_sign, first = parts[0]
            text = ("-" if first_sign == "-" else "") + first
            text += "".join(f" {s} {b}" for s, b in parts[1:])
        return f"{text} + O(q^{n})"

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return self.precision

    def __eq__(self, other):
        if isinstance(other, QSeries):
            return self.precision == other.precision and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.precision, self.coeffs))

    def truncate(self, precision: int) -> QSeries:
        return QSeries(self.coeffs[:precision], min(precision, self.precision))

    def _coerce(self, other) -> QSeries:
        if isinstance(other, QSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return QSeries.constant(other, self.precision)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = min(self.precision, other.precision)
        return QSeries([a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])], n)

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-c for c in self.coeffs], self.precision)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _frac(other)
            return QSeries([c * a for a in self.coeffs], self.precision)
        if not isinstance(other, QSeries):
            return NotImplemented
        n = min(self.precision, other.precision)
        a, b = self.coeffs, other.coeffs
        nz = [(i, a[i]) for i in range(n) if a[i]]
        out = [Fraction(0)] * n
        for j in range(n):
            bj = b[j]
            if not bj:
                continue
            for i, ai in nz:
                if i + j >= n:
                    break
                out[i + j] += ai * bj
        return QSeries(out, n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / _frac(other))
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("only nonnegative integer powers")
        result = QSeries.constant(1, self.precision)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def to_json(self) -> dict:
        return {
            "precision": self.precision,
            "coeffs": [[c.numerator, c.denominator] for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> QSeries:
        return cls([Fraction(n, d) for n, d in data["coeffs"]], data["precision"])


def theta_derivative(a: QSeries) -> QSeries:
    """q d/dq, i.e. (2 pi i)^-1 d/dz."""
    return QSeries([n * c for n, c in enumerate(a.coeffs)], a.precision)


class Evaluation(NamedTuple):
    value: complex
    tail_bound: float | None


def tail_estimate(r: float, precision: int, constant: float, exponent: float) -> float:
    """Bound sum_{n>=N} C n^e r^n using the ratio of consecutive terms at n = N."""
    n = precision
    ratio = r * ((n + 1) / n) ** exponent
    if ratio >= 1:
        raise EvaluationDomainError(
            f"tail not geometric: ratio {ratio:.3g} >= 1 at N={n}, |q|={r:.3g}"
        )
    return constant * math.exp(exponent * math.log(n) + n * math.log(r)) / (1 - ratio)


def growth_constant(a: QSeries, exponent: float) -> float:
    """Empirical C with |c_n| <= C n^e over the known coefficients (n >= 1)."""
    best = 0.0
    for n in range(1, a.precision):
        c = a.coeffs[n]
        if c:
            best = max(best, abs(float(c)) / n**exponent)
    return best


def evaluate(
    a: QSeries,
    z: complex,
    *,
    growth: tuple[float, float] | None = None,
    min_imag: float = DEFAULT_MIN_IMAG,
) -> Evaluation:
    """Numerically sum the series at q = exp(2 pi i z).

    ``growth`` is ``(C, e)`` asserting |c_n| <= C n^e for n >= precision; when
    given, the returned tail bound is rigorous relative to that assumption.
    """
    z = complex(z)
    if z.imag < min_imag:
        raise EvaluationDomainError(f"Im(z) = {z.imag:.6g} below threshold {min_imag}")
    q = cmath.exp(2j * cmath.pi * z)
    total = 0j
    for c in reversed(a.coeffs):
        total = total * q + float(c)
    tail = None
    if growth is not None:
        tail = tail_estimate(abs(q), a.precision, growth[0], growth[1])
    return Evaluation(total, tail)


def divisor_sigma_table(k: int, n_max: int) -> list[int]:
    """sigma_k(n) for 0 <= n < n_max (sigma_k(0) reported as 0)."""
    sig = [0] * n_max
    for d in range(1, n_max):
        dk = d**k
        for m in range(d, n_max, d):
            sig[m] += dk
    return sig
