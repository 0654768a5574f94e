"""PBW normal forms in the enveloping algebra of sl2 = <D, H, d>.

Monomials are D^a H^b d^c with d (the lowering operator delta) rightmost, so
the left ideal U*d is exactly the span of monomials with c >= 1.
"""
from __future__ import annotations

import random
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .qm_algebra import QmPolynomial, apply_D, apply_delta, apply_H, iterate

PBW = tuple[int, int, int]
LETTERS = ("D", "H", "d")
_ORDER = {"D": 0, "H": 1, "d": 2}

# Adjacent inversions and their replacements: [d,D] = H, [H,D] = 2D, [H,d] = -2d.
_RULES: dict[tuple[str, str], tuple[tuple[tuple[str, ...], int], ...]] = {
    ("d", "D"): ((("D", "d"), 1), (("H",), 1)),
    ("H", "D"): ((("D", "H"), 1), (("D",), 2)),
    ("d", "H"): ((("H", "d"), 1), (("d",), 2)),
}


class UEAElement:
    """Finite rational combination of PBW monomials D^a H^b d^c."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[PBW, object] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[PBW, Fraction] = {}
        for m, c in items:
            total = clean.get(m, 0) + Fraction(c)
            if total:
                clean[m] = total
            else:
                clean.pop(m, None)
        self._terms = clean

    @classmethod
    def monomial(cls, a: int = 0, b: int = 0, c: int = 0, coeff=1) -> UEAElement:
        return cls({(a, b, c): coeff})

    @classmethod
    def h_polynomial(cls, coeffs: Sequence) -> UEAElement:
        """sum coeffs[i] H^i."""
        return cls({(0, i, 0): c for i, c in enumerate(coeffs)})

    def items(self):
        return self._terms.items()

    @property
    def terms(self) -> dict[PBW, Fraction]:
        return dict(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, UEAElement):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other):
        if not isinstance(other, UEAElement):
            return NotImplemented
        return UEAElement(list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self):
        return UEAElement({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UEAElement({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, UEAElement):
            return NotImplemented
        out = UEAElement()
        for (a, b, c), coeff in self._terms.items():
            word = ("D",) * a + ("H",) * b + ("d",) * c
            out = out + _left_multiply_word(word, other) * coeff
        return out

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def degree_set(self) -> set[int]:
        return {2 * (a - c) for a, _, c in self._terms}

    def __repr__(self):
        return f"UEAElement({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m in sorted(self._terms):
            c = self._terms[m]
            mono = "*".join(
                f"{g}^{p}" if p > 1 else g for g, p in zip(LETTERS, m) if p
            )
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            parts.append(("-" if c < 0 else "+", body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return text + "".join(f" {s} {b}" for s, b in parts[1:])

    def to_text(self) -> str:
        """One line per monomial: coefficient, then D^a H^b d^c."""
        return "\n".join(
            f"{self._terms[(a, b, c)]} D^{a} H^{b} d^{c}" for a, b, c in sorted(self._terms)
        )

    def to_json(self) -> list[dict]:
        return [
            {"pbw": list(m), "coeff": [c.numerator, c.denominator]}
            for m, c in sorted(self._terms.items())
        ]


def parse_word(word: str | Sequence[str]) -> tuple[str, ...]:
    if isinstance(word, str):
        letters = [ch for ch in word.replace("δ", "d") if not ch.isspace() and ch != "*"]
    else:
        letters = ["d" if w == "δ" else w for w in word]
    for ch in letters:
        if ch not in _ORDER:
            raise ValueError(f"unknown letter {ch!r}; expected D, H or d")
    return tuple(letters)


def _left_multiply(letter: str, elem: UEAElement) -> UEAElement:
    out: dict[PBW, Fraction] = {}

    def add(m, c):
        out[m] = out.get(m, 0) + c

    for (a, b, c), coeff in elem.items():
        if letter == "D":
            add((a + 1, b, c), coeff)
        elif letter == "H":
            # H D^a = D^a (H + 2a)
            add((a, b + 1, c), coeff)
            if a:
                add((a, b, c), 2 * a * coeff)
        else:
            # d D^a = D^a d + a D^(a-1) (H + a - 1),  d H^b = (H + 2)^b d
            for i in range(b + 1):
                add((a, i, c + 1), coeff * comb(b, i) * 2 ** (b - i))
            if a:
                add((a - 1, b + 1, c), a * coeff)
                if a > 1:
                    add((a - 1, b, c), a * (a - 1) * coeff)
    return UEAElement(out)


def _left_multiply_word(word: Sequence[str], elem: UEAElement) -> UEAElement:
    for letter in reversed(word):
        elem = _left_multiply(letter, elem)
    return elem


def _is_normal(word: tuple[str, ...]) -> bool:
    return all(_ORDER[x] <= _ORDER[y] for x, y in zip(word, word[1:]))


def _word_to_pbw(word: tuple[str, ...]) -> PBW:
    return (word.count("D"), word.count("H"), word.count("d"))


def _rewrite(word: tuple[str, ...], strategy) -> UEAElement:
    pending: dict[tuple[str, ...], Fraction] = {word: Fraction(1)}
    done: dict[PBW, Fraction] = {}
    while pending:
        w, coeff = pending.popitem()
        if not coeff:
            continue
        if _is_normal(w):
            m = _word_to_pbw(w)
            done[m] = done.get(m, 0) + coeff
            continue
        spots = [i for i in range(len(w) - 1) if (w[i], w[i + 1]) in _RULES]
        if strategy == "leftmost":
            i = spots[0]
        elif strategy == "rightmost":
            i = spots[-1]
        else:
            i = strategy.choice(spots)
        for repl, mult in _RULES[(w[i], w[i + 1])]:
            nw = w[:i] + repl + w[i + 2 :]
            pending[nw] = pending.get(nw, 0) + mult * coeff
    return UEAElement(done)


def pbw_reduce(word: str | Sequence[str], strategy=None) -> UEAElement:
    """Normal form of a word in D, H, d.

    ``strategy`` None uses closed-form left multiplication; "leftmost",
    "rightmost" or a ``random.Random`` instance rewrite adjacent inversions
    one at a time in the chosen order.
    """
    w = parse_word(word)
    if strategy is None:
        result = _left_multiply_word(w, UEAElement.monomial())
    else:
        if not (strategy in ("leftmost", "rightmost") or isinstance(strategy, random.Random)):
            raise ValueError(f"unknown strategy {strategy!r}")
        result = _rewrite(w, strategy)
    expected = 2 * (w.count("D") - w.count("d"))
    if result and result.degree_set() != {expected}:
        raise AssertionError(f"grading broken for {''.join(w)}: {result.degree_set()}")
    return result


def mod_U_delta(e: UEAElement) -> UEAElement:
    return UEAElement({m: c for m, c in e.items() if m[2] == 0})


def prop4_rhs(n: int) -> UEAElement:
    """n! H (H + 1) ... (H + n - 1) as a polynomial in H."""
    if n < 1:
        raise ValueError("n must be positive")
    poly = [Fraction(factorial(n))]
    for j in range(n):
        # multiply by (H + j)
        nxt = [Fraction(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] += c
            nxt[i] += j * c
        poly = nxt
    return UEAElement.h_polynomial(poly)


def lowest_weight_eigenvalue(n: int, k: int) -> Fraction:
    if n < 0 or k < 0:
        raise ValueError("n and k must be nonnegative")
    return Fraction(factorial(n) ** 2 * comb(k + n - 1, n)) if n else Fraction(1)


def act(e: UEAElement, f: QmPolynomial) -> QmPolynomial:
    """Apply D^a H^b d^c (d first) on the quasimodular ring."""
    out = QmPolynomial()
    for (a, b, c), coeff in e.items():
        g = iterate(apply_delta, f, c)
        g = iterate(apply_H, g, b)
        g = iterate(apply_D, g, a)
        out = out + g * coeff
    return out


def act_word(word: str | Sequence[str], f: QmPolynomial) -> QmPolynomial:
    ops = {"D": apply_D, "H": apply_H, "d": apply_delta}
    for letter in reversed(parse_word(word)):
        f = ops[letter](f)
    return f
