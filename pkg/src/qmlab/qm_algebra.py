"""The ring C[E2, E4, E6] with the operators D, delta and H.

D is normalized as q d/dq, so D(E2) = (E2^2 - E4)/12 and delta(E2) = 12.
Operators accept non-homogeneous input and act weight by weight.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .errors import PreconditionError, UndefinedDepthError
from .qseries import DEFAULT_PRECISION, QSeries, divisor_sigma_table

Exp = tuple[int, int, int]
GENERATOR_WEIGHTS = (2, 4, 6)


def monomial_weight(e: Exp) -> int:
    return 2 * e[0] + 4 * e[1] + 6 * e[2]


class QmPolynomial:
    """Finite map (a, b, c) -> coefficient of E2^a E4^b E6^c."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exp, object] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Exp, Fraction] = {}
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != 3 or min(e) < 0:
                raise ValueError(f"bad exponent {e}")
            c = c if isinstance(c, Fraction) else Fraction(c)
            total = clean.get(e, 0) + c
            if total:
                clean[e] = total
            else:
                clean.pop(e, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def constant(cls, c) -> QmPolynomial:
        return cls({(0, 0, 0): c})

    @property
    def terms(self) -> dict[Exp, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QmPolynomial.constant(other)
        if isinstance(other, QmPolynomial):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"QmPolynomial({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for e in sorted(self._terms, reverse=True):
            c = self._terms[e]
            mono = "*".join(
                f"{g}^{p}" if p > 1 else g
                for g, p in zip(("E2", "E4", "E6"), e)
                if p
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            out.append(("-" if c < 0 else "+", body))
        text = ("-" if out[0][0] == "-" else "") + out[0][1]
        return text + "".join(f" {s} {b}" for s, b in out[1:])

    # ring structure

    def _coerce(self, other):
        if isinstance(other, QmPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return QmPolynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QmPolynomial(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return QmPolynomial({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QmPolynomial({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, QmPolynomial):
            return NotImplemented
        out: dict[Exp, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                out[e] = out.get(e, 0) + c1 * c2
        return QmPolynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        result = ONE
        for _ in range(n):
            result = result * self
        return result

    # grading

    def weights(self) -> set[int]:
        return {monomial_weight(e) for e in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    @property
    def weight(self) -> int:
        ws = self.weights()
        if len(ws) != 1:
            raise PreconditionError(
                "zero polynomial has no weight" if not ws else f"not homogeneous: weights {sorted(ws)}"
            )
        return ws.pop()

    def components(self) -> dict[int, QmPolynomial]:
        parts: dict[int, dict] = {}
        for e, c in self._terms.items():
            parts.setdefault(monomial_weight(e), {})[e] = c
        return {k: QmPolynomial(v) for k, v in sorted(parts.items())}

    @property
    def depth(self) -> int:
        if not self._terms:
            raise UndefinedDepthError("depth of the zero form is undefined")
        return max(e[0] for e in self._terms)

    def is_modular(self) -> bool:
        return all(e[0] == 0 for e in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0, 0, 0), Fraction(0))

    # serialization

    def to_json(self) -> list[dict]:
        return [
            {"exp": list(e), "coeff": [c.numerator, c.denominator]}
            for e, c in sorted(self._terms.items())
        ]

    @classmethod
    def from_json(cls, data: list) -> QmPolynomial:
        return cls([(tuple(t["exp"]), Fraction(*t["coeff"])) for t in data])


ONE = QmPolynomial.constant(1)
ZERO = QmPolynomial()
E2 = QmPolynomial({(1, 0, 0): 1})
E4 = QmPolynomial({(0, 1, 0): 1})
E6 = QmPolynomial({(0, 0, 1): 1})
PHI = E2 / 12
DELTA = (E4**3 - E6**2) / 1728

NAMED_FORMS = {"1": ONE, "E2": E2, "E4": E4, "E6": E6, "phi": PHI, "Delta": DELTA}

# Ramanujan's identities under the q d/dq normalization.
_D_GENERATORS = (
    (E2 * E2 - E4) / 12,
    (E2 * E4 - E6) / 3,
    (E2 * E6 - E4 * E4) / 2,
)


def _mono(a: int, b: int, c: int) -> QmPolynomial:
    return QmPolynomial({(a, b, c): 1})


@lru_cache(maxsize=None)
def _D_monomial(e: Exp) -> QmPolynomial:
    out = ZERO
    for i in range(3):
        if e[i]:
            lower = list(e)
            lower[i] -= 1
            out = out + _mono(*lower) * _D_GENERATORS[i] * e[i]
    return out


def apply_D(f: QmPolynomial) -> QmPolynomial:
    out: dict[Exp, Fraction] = {}
    for e, c in f.items():
        for e2, c2 in _D_monomial(e).items():
            out[e2] = out.get(e2, 0) + c * c2
    return QmPolynomial(out)


def apply_delta(f: QmPolynomial) -> QmPolynomial:
    return QmPolynomial(
        {(a - 1, b, c): 12 * a * coeff for (a, b, c), coeff in f.items() if a}
    )


def apply_H(f: QmPolynomial) -> QmPolynomial:
    return QmPolynomial({e: monomial_weight(e) * c for e, c in f.items()})


euler = apply_H


def iterate(op, f: QmPolynomial, n: int) -> QmPolynomial:
    for _ in range(n):
        f = op(f)
    return f


def depth(f: QmPolynomial) -> int:
    return f.depth


def monomial_basis(k: int, weights: tuple[int, ...] = GENERATOR_WEIGHTS) -> list[QmPolynomial]:
    """Monomials of weight k; ``weights`` (4, 6) gives the E2-free (modular) basis."""
    return [_mono(*e) for e in monomial_exponents(k, weights)]


def monomial_exponents(k: int, weights: tuple[int, ...] = GENERATOR_WEIGHTS) -> list[Exp]:
    if k < 0 or k % 2:
        return []
    use2, use4, use6 = (w in weights for w in GENERATOR_WEIGHTS)
    out = []
    for c in range(k // 6 + 1 if use6 else 1):
        rest = k - 6 * c
        for b in range(rest // 4 + 1 if use4 else 1):
            r2 = rest - 4 * b
            if use2:
                out.append((r2 // 2, b, c))
            elif r2 == 0:
                out.append((0, b, c))
    return sorted(out)


# q-expansions

_EISENSTEIN_NORMALIZATION = {2: (-24, 1), 4: (240, 3), 6: (-504, 5)}


def eisenstein_qexp(k: int, precision: int = DEFAULT_PRECISION) -> QSeries:
    if k not in _EISENSTEIN_NORMALIZATION:
        raise PreconditionError(f"unsupported Eisenstein weight {k}; expected 2, 4 or 6")
    scale, power = _EISENSTEIN_NORMALIZATION[k]
    sig = divisor_sigma_table(power, precision)
    return QSeries([1] + [scale * s for s in sig[1:]], precision)


@lru_cache(maxsize=256)
def _generator_power(i: int, n: int, precision: int) -> QSeries:
    if n == 0:
        return QSeries.constant(1, precision)
    if n == 1:
        return eisenstein_qexp(GENERATOR_WEIGHTS[i], precision)
    half = _generator_power(i, n // 2, precision)
    sq = half * half
    return sq * _generator_power(i, 1, precision) if n % 2 else sq


def qexpansion(f: QmPolynomial, precision: int = DEFAULT_PRECISION) -> QSeries:
    """Substitute the Eisenstein expansions for E2, E4, E6."""
    total = QSeries.constant(0, precision)
    for (a, b, c), coeff in sorted(f.items()):
        term = (
            _generator_power(0, a, precision)
            * _generator_power(1, b, precision)
            * _generator_power(2, c, precision)
        )
        total = total + term * coeff
    return total
