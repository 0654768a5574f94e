"""Independent reference computations used to freeze expected values.

Nothing here imports the operator code under test; each function recomputes
its answer from first principles (divisor sums, brute products, brute search).
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import mpmath
import sympy


def sigma(k: int, n: int) -> int:
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def eisenstein(k: int, N: int) -> list[Fraction]:
    """1 - (2k / B_k) sum sigma_{k-1}(n) q^n, Bernoulli numbers from sympy."""
    b = sympy.bernoulli(k)
    c = Fraction(-2 * k) / Fraction(int(b.p), int(b.q))
    return [Fraction(1)] + [c * sigma(k - 1, n) for n in range(1, N)]


def mul(a: list, b: list) -> list:
    N = min(len(a), len(b))
    return [sum(a[i] * b[n - i] for i in range(n + 1)) for n in range(N)]


def delta_product(N: int) -> list[int]:
    """q prod (1 - q^n)^24 by repeated multiplication."""
    series = [0] * N
    if N > 1:
        series[1] = 1
    for n in range(1, N):
        for _ in range(24):
            series = [series[i] - (series[i - n] if i >= n else 0) for i in range(N)]
    return series


def theta(a: list) -> list:
    return [n * c for n, c in enumerate(a)]


def e4_at_i() -> mpmath.mpf:
    """E4(i) = 3 Gamma(1/4)^8 / (64 pi^6)."""
    with mpmath.workdps(30):
        return 3 * mpmath.gamma(mpmath.mpf(1) / 4) ** 8 / (64 * mpmath.pi**6)


def e2_at_i() -> float:
    return float(3 / mpmath.pi)


def count_monomials(k: int, weights) -> int:
    """Number of exponent vectors with sum w_i e_i = k, by brute enumeration."""
    ranges = [range(k // w + 1) for w in weights]
    return sum(1 for e in itertools.product(*ranges) if sum(w * x for w, x in zip(weights, e)) == k)


def differential_monomial_count(k: int, weights, cocompact: bool) -> int:
    """Pairs (j, modular monomial of weight k - 2j > 0), plus the phi line off the cocompact case."""
    if k == 0:
        return 1
    total = sum(count_monomials(k - 2 * j, weights) for j in range(k // 2) if k - 2 * j > 0)
    return total + (0 if cocompact else 1)


def semigroup_reachable(gens, bound: int) -> set[tuple[int, int]]:
    """All nonnegative combinations of integer generators with |coords| <= bound.

    Generators must lie in an open half plane through a linear functional with
    positive integer values, so the search terminates.
    """
    gens = [tuple(int(c) for c in g) for g in gens]
    reach = {(0, 0)}
    frontier = [(0, 0)]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = (p[0] + g[0], p[1] + g[1])
                if max(abs(q[0]), abs(q[1])) <= bound and q not in reach:
                    reach.add(q)
                    nxt.append(q)
        frontier = nxt
    return reach


def residue_box_max(coords: list[tuple[Fraction, Fraction]], orders: list[int], strict: bool):
    """Max over residue tuples of the summed new coordinates, by brute force.

    strict bounds each residue by order - 1, otherwise by order.
    """
    if not coords:
        return Fraction(0), Fraction(0)
    best_x = best_y = Fraction(0)
    tops = [a - 1 if strict else a for a in orders]
    for alphas in itertools.product(*[range(t + 1) for t in tops]):
        best_x = max(best_x, sum((al * c[0] for al, c in zip(alphas, coords)), Fraction(0)))
        best_y = max(best_y, sum((al * c[1] for al, c in zip(alphas, coords)), Fraction(0)))
    return best_x, best_y
