"""First Rankin-Cohen bracket, the Serre derivative and its trivialization."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError
from .qm_algebra import PHI, QmPolynomial, apply_D, apply_H


def _modular_weight(f: QmPolynomial, name: str) -> int:
    if not f.is_homogeneous() or not f.is_modular():
        raise PreconditionError(f"{name} must be a homogeneous modular form")
    return f.weight if f else 0


def rc1(f: QmPolynomial, g: QmPolynomial) -> QmPolynomial:
    """[f, g]_1 = k f D(g) - l g D(f)."""
    k = _modular_weight(f, "f")
    l = _modular_weight(g, "g")
    return f * apply_D(g) * k - g * apply_D(f) * l


def serre_derivative(f: QmPolynomial) -> QmPolynomial:
    """D(f) - k (E2/12) f, applied weight by weight."""
    return apply_D(f) - PHI * apply_H(f)


@dataclass(frozen=True)
class BracketReport:
    left: QmPolynomial
    right: QmPolynomial

    @property
    def equal(self) -> bool:
        return self.left == self.right

    def to_json(self) -> dict:
        return {"left": self.left.to_json(), "right": self.right.to_json(), "equal": self.equal}


def check_trivialization(f: QmPolynomial, g: QmPolynomial) -> BracketReport:
    """Compare rc1(f, g) with H(f) d(g) - H(g) d(f) for d the Serre derivative."""
    left = rc1(f, g)
    right = apply_H(f) * serre_derivative(g) - apply_H(g) * serre_derivative(f)
    return BracketReport(left, right)


def jacobi_check(f: QmPolynomial, g: QmPolynomial, h: QmPolynomial) -> bool:
    cyclic = rc1(rc1(f, g), h) + rc1(rc1(g, h), f) + rc1(rc1(h, f), g)
    return not cyclic


def phi_omega() -> QmPolynomial:
    """D(phi) - phi^2, which is the modular form -E4/144."""
    omega = apply_D(PHI) - PHI * PHI
    if not omega.is_modular() or omega.weight != 4:
        raise AssertionError(f"omega is not modular of weight 4: {omega}")
    return omega
