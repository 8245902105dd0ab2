"""Physical parameters and the bridge to dimensionless quantities.

The radial problem depends on the space dimension D and angular momentum l
only through k = D + 2l.  A potential/energy pair maps to the dimensionless
set (eps, beta1, beta2, delta) that the analytic machinery works with:

    eps   = sqrt(M^2 - E^2) / alpha
    beta1 = 2 (M S0 + E V0) / (alpha^2 q)
    beta2 = (S0^2 - V0^2) / (alpha^2 q^2)

and delta solves  delta^2 - delta - beta2 - (k-1)(k-3)/(4q) = 0, taking the
plus branch of the radical for q > 0 and the minus branch for q < 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, RegimeError

__all__ = [
    "PotentialSpec",
    "QuantumNumbers",
    "DimensionlessSet",
    "effective_k",
    "delta_exponent",
    "dimensionless",
]


@dataclass(frozen=True)
class PotentialSpec:
    """Screened vector/scalar potential parameters (hbar = c = 1).

    mass: particle mass M, alpha: screening (inverse length), q: shape
    deformation, v0/s0: vector and scalar well depths.
    """

    mass: float
    alpha: float
    q: float
    v0: float = 0.0
    s0: float = 0.0

    def __post_init__(self):
        if not self.mass > 0.0:
            raise DomainError(f"mass must be positive, got {self.mass}")
        if not self.alpha > 0.0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if self.q == 0.0:
            raise DomainError("q must be nonzero")
        if self.q > 1.0:
            raise DomainError(
                f"q={self.q} > 1 is rejected: 1 - q*exp(-alpha*r) vanishes at "
                f"r = ln(q)/alpha = {math.log(self.q) / self.alpha:.6g}, so the "
                "potential has a pole at finite radius")


@dataclass(frozen=True)
class QuantumNumbers:
    """Space dimension D, orbital angular momentum l, radial index n."""

    dim: int
    ell: int
    n: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError(f"dim must be >= 1, got {self.dim}")
        if self.ell < 0:
            raise DomainError(f"ell must be >= 0, got {self.ell}")
        if self.n < 0:
            raise DomainError(f"n must be >= 0, got {self.n}")


@dataclass(frozen=True)
class DimensionlessSet:
    """The (eps, beta1, beta2, delta) quadruple at a given energy, plus k."""

    eps: float
    beta1: float
    beta2: float
    delta: float
    k: int


def effective_k(qn: QuantumNumbers) -> int:
    """k = D + 2l; the only combination of (D, l) the radial problem sees."""
    return qn.dim + 2 * qn.ell


def _beta2(spec: PotentialSpec) -> float:
    return (spec.s0 ** 2 - spec.v0 ** 2) / (spec.alpha ** 2 * spec.q ** 2)


def delta_exponent(spec: PotentialSpec, k: int) -> float:
    """The (1-z)-exponent delta: root of delta^2 - delta = beta2 + (k-1)(k-3)/(4q).

    Plus branch for q > 0, minus branch for q < 0; both give delta >= 1/2.
    """
    q = spec.q
    beta2 = _beta2(spec)
    disc = q * q * (1.0 + 4.0 * beta2) + q * (k - 1.0) * (k - 3.0)
    if disc < 0.0:
        raise RegimeError(
            f"no real delta: discriminant {disc:.6g} < 0 for k={k}; "
            "parameters outside the method's regime")
    root = math.sqrt(disc) / (2.0 * q)
    return 0.5 + root if q > 0.0 else 0.5 - root


def dimensionless(spec: PotentialSpec, qn: QuantumNumbers,
                  energy: float) -> DimensionlessSet:
    """Map (potential, quantum numbers, trial energy) to (eps, beta1, beta2, delta)."""
    m = spec.mass
    if not abs(energy) < m:
        raise DomainError(
            f"|E|={abs(energy)} >= M={m}: not a bound-state energy")
    a2q = spec.alpha ** 2 * spec.q
    k = effective_k(qn)
    return DimensionlessSet(
        eps=math.sqrt(m * m - energy * energy) / spec.alpha,
        beta1=2.0 * (m * spec.s0 + energy * spec.v0) / a2q,
        beta2=_beta2(spec),
        delta=delta_exponent(spec, k),
        k=k,
    )
