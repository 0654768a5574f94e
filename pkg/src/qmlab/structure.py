"""Stacks, the depth-stripping decomposition, the U_k action and numeric
checks of the transformation laws on SL(2, Z)."""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import PreconditionError
from .qm_algebra import (
    ONE,
    PHI,
    QmPolynomial,
    apply_D,
    apply_delta,
    iterate,
    monomial_basis,
    monomial_exponents,
    qexpansion,
)
from .qseries import DEFAULT_MIN_IMAG, DEFAULT_PRECISION, evaluate, growth_constant


def _homogeneous(f: QmPolynomial) -> int:
    if not f:
        return 0
    return f.weight


# stacks


@dataclass(frozen=True)
class ModularStack:
    weight: int
    coeffs: tuple[QmPolynomial, ...]

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, j):
        return self.coeffs[j]


def to_stack(f: QmPolynomial) -> ModularStack:
    """(f, delta f, delta^2 f / 2!, ...) up to the depth of f."""
    k = _homogeneous(f)
    if not f:
        return ModularStack(k, (f,))
    entries = []
    g = f
    for j in range(f.depth + 1):
        entries.append(g / factorial(j))
        g = apply_delta(g)
    return ModularStack(k, tuple(entries))


# decomposition


@dataclass
class Decomposition:
    """f = sum D^i g_i + sum c_i D^i(phi) + constant."""

    modular_parts: dict[int, QmPolynomial] = field(default_factory=dict)
    phi_coeffs: dict[int, Fraction] = field(default_factory=dict)
    constant: Fraction = Fraction(0)

    def to_json(self) -> dict:
        return {
            "modular_parts": {str(i): g.to_json() for i, g in sorted(self.modular_parts.items())},
            "phi_coeffs": {
                str(i): [c.numerator, c.denominator] for i, c in sorted(self.phi_coeffs.items())
            },
            "constant": [self.constant.numerator, self.constant.denominator],
        }

    @classmethod
    def from_json(cls, data: dict) -> Decomposition:
        return cls(
            {int(i): QmPolynomial.from_json(g) for i, g in data["modular_parts"].items()},
            {int(i): Fraction(*c) for i, c in data["phi_coeffs"].items()},
            Fraction(*data["constant"]),
        )

    def __eq__(self, other):
        if not isinstance(other, Decomposition):
            return NotImplemented
        strip = lambda d: {i: v for i, v in d.items() if v}  # noqa: E731
        return (
            strip(self.modular_parts) == strip(other.modular_parts)
            and strip(self.phi_coeffs) == strip(other.phi_coeffs)
            and self.constant == other.constant
        )


def decompose(f: QmPolynomial) -> Decomposition:
    """Strip depth one level at a time; non-homogeneous input goes weight by weight."""
    out = Decomposition()
    for k, part in f.components().items():
        _decompose_homogeneous(part, k, out)
    return out


def _decompose_homogeneous(f: QmPolynomial, k: int, out: Decomposition) -> None:
    if k == 0:
        out.constant += f.constant_term()
        return
    while f and f.depth >= 1:
        p = f.depth
        top = iterate(apply_delta, f, p)
        if 2 * p < k:
            m = top / (factorial(p) ** 2 * comb(k - p - 1, p))
            out.modular_parts[p] = out.modular_parts.get(p, QmPolynomial()) + m
            f = f - iterate(apply_D, m, p)
        else:
            line = iterate(apply_D, PHI, p - 1)
            t = iterate(apply_delta, line, p).constant_term()
            c = top.constant_term() / t
            out.phi_coeffs[p - 1] = out.phi_coeffs.get(p - 1, Fraction(0)) + c
            f = f - line * c
    if f:
        out.modular_parts[0] = out.modular_parts.get(0, QmPolynomial()) + f


def recompose(d: Decomposition) -> QmPolynomial:
    total = ONE * d.constant
    for i, g in d.modular_parts.items():
        total = total + iterate(apply_D, g, i)
    for i, c in d.phi_coeffs.items():
        total = total + iterate(apply_D, PHI, i) * c
    return total


def additive_basis(k: int) -> list[tuple[str, int, QmPolynomial]]:
    """Spanning set of weight k: D^i of modular monomials, the phi line, constants.

    Entries are (kind, i, source) with kind "modular" (source a monomial of
    weight k - 2i), "phi" (source PHI) or "constant".
    """
    if k == 0:
        return [("constant", 0, ONE)]
    basis = []
    for i in range(k // 2):
        for m in monomial_basis(k - 2 * i, (4, 6)):
            basis.append(("modular", i, m))
    basis.append(("phi", k // 2 - 1, PHI))
    return basis


def _to_domain_columns(polys: list[QmPolynomial], exps: list) -> DomainMatrix:
    index = {e: r for r, e in enumerate(exps)}
    rows = [[QQ(0)] * len(polys) for _ in exps]
    for j, p in enumerate(polys):
        for e, c in p.items():
            rows[index[e]][j] = QQ(c.numerator, c.denominator)
    return DomainMatrix(rows, (len(exps), len(polys)), QQ)


def decompose_by_linear_algebra(f: QmPolynomial) -> Decomposition:
    """Independent route: solve for coordinates in the additive basis."""
    out = Decomposition()
    for k, part in f.components().items():
        basis = additive_basis(k)
        images = [
            m if kind == "constant" else iterate(apply_D, m, i) for kind, i, m in basis
        ]
        exps = monomial_exponents(k)
        A = _to_domain_columns(images, exps)
        b = _to_domain_columns([part], exps)
        x = A.lu_solve(b).to_Matrix()
        for (kind, i, m), coord in zip(basis, x):
            c = Fraction(int(coord.p), int(coord.q))
            if not c:
                continue
            if kind == "constant":
                out.constant += c
            elif kind == "phi":
                out.phi_coeffs[i] = out.phi_coeffs.get(i, Fraction(0)) + c
            else:
                out.modular_parts[i] = out.modular_parts.get(i, QmPolynomial()) + m * c
    return out


def uk_action_check(k: int, f: QmPolynomial, j: int) -> bool:
    """delta(D^j f) == j (k + j - 1) D^(j-1) f for modular f of weight k."""
    if f and (not f.is_modular() or f.weight != k):
        raise PreconditionError(f"expected a modular form of weight {k}")
    if j < 0:
        raise PreconditionError("j must be nonnegative")
    lhs = apply_delta(iterate(apply_D, f, j))
    if j == 0:
        return lhs == QmPolynomial()
    return lhs == iterate(apply_D, f, j - 1) * (j * (k + j - 1))


# SL(2, Z) generator counting


def new_generator_dims_sl2z(k_max: int) -> list[tuple[int, int]]:
    """(k, dim I~_k - dim (I~^2)_k) for even 2 <= k <= k_max, by exact rank."""
    out = []
    for k in range(2, k_max + 1, 2):
        exps = monomial_exponents(k)
        products = set()
        for j in range(2, k - 1, 2):
            for m1 in monomial_basis(j):
                for m2 in monomial_basis(k - j):
                    products.add(m1 * m2)
        rank = 0
        if products:
            rank = _to_domain_columns(sorted(products, key=str), exps).rank()
        out.append((k, len(exps) - rank))
    return out


# transformation laws


@dataclass(frozen=True)
class GroupElement:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise PreconditionError(f"determinant of {self} is not 1")

    def __matmul__(self, other: GroupElement) -> GroupElement:
        return GroupElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def act(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.c * z + self.d)

    def automorphy(self, z: complex) -> complex:
        return self.c * z + self.d


T = GroupElement(1, 1, 0, 1)
S = GroupElement(0, -1, 1, 0)
T_INV = GroupElement(1, -1, 0, 1)
SAMPLE_GROUP = {"T": T, "S": S, "TS": T @ S, "ST^-1S": S @ T_INV @ S}
SAMPLE_POINTS = (1.1j, 0.3 + 1.2j, -0.25 + 0.9j)


@dataclass
class FunctionalEquationReport:
    weight: int
    gamma: GroupElement
    z: complex
    tol: float
    level_residuals: tuple[float, ...]
    tail_bound: float

    @property
    def eq2_residual(self) -> float:
        return self.level_residuals[0]

    @property
    def max_residual(self) -> float:
        return max(self.level_residuals)

    @property
    def ok(self) -> bool:
        return self.max_residual < self.tol

    def to_tsv(self) -> str:
        g = self.gamma
        lines = ["equation\tlevel\tresidual"]
        lines.append(f"eq2\t0\t{self.eq2_residual:.3e}")
        for l, r in enumerate(self.level_residuals):
            lines.append(f"eq3\t{l}\t{r:.3e}")
        lines.append(f"max\t-\t{self.max_residual:.3e}")
        lines.append(f"tail_bound\t-\t{self.tail_bound:.3e}")
        lines.append(f"gamma\t-\t{g.a},{g.b},{g.c},{g.d}")
        lines.append(f"verdict\t-\t{'pass' if self.ok else 'fail'}")
        return "\n".join(lines)


def check_functional_equation(
    f: QmPolynomial,
    gamma: GroupElement,
    z: complex,
    tol: float = 1e-9,
    precision: int = DEFAULT_PRECISION,
    min_imag: float = DEFAULT_MIN_IMAG,
) -> FunctionalEquationReport:
    """Residuals of the slash-action law for f and each stack level.

    Stack entry j is scaled by (2 pi i)^-j to pass from the q d/dq
    normalization to d/dz.
    """
    if not f:
        raise PreconditionError("zero form")
    k = f.weight
    stack = to_stack(f)
    z = complex(z)
    gz = gamma.act(z)
    j_fac = gamma.automorphy(z)
    x = gamma.c / j_fac
    two_pi_i = 2j * cmath.pi
    at_z, at_gz, tail = [], [], 0.0
    for j, fj in enumerate(stack.coeffs):
        series = qexpansion(fj, precision)
        scale = two_pi_i ** (-j)
        # empirical majorant C n^w fitted on the known coefficients, doubled
        growth = (2 * growth_constant(series, fj.weight) + 1, fj.weight) if fj.weight else None
        ez = evaluate(series, z, growth=growth, min_imag=min_imag)
        egz = evaluate(series, gz, growth=growth, min_imag=min_imag)
        tail = max(tail, ez.tail_bound or 0.0, egz.tail_bound or 0.0)
        at_z.append(scale * ez.value)
        at_gz.append(scale * egz.value)
    p = len(stack) - 1
    residuals = []
    for l in range(p + 1):
        lhs = j_fac ** (-k + 2 * l) * at_gz[l]
        rhs = sum(comb(j, l) * at_z[j] * x ** (j - l) for j in range(l, p + 1))
        residuals.append(abs(lhs - rhs))
    return FunctionalEquationReport(k, gamma, z, tol, tuple(residuals), tail)
