"""Analytic radial eigenfunctions.

In the mapped variable z = q exp(-alpha r) the reduced wavefunction is

    u(z) = C * z^eps * (1-z)^delta * 2F1(-n, 2 eps + 2 delta + n; 1 + 2 eps; z)

and R(r) = r^(-(D-1)/2) u(r).  The 2F1 form is canonical (the
normalization integral is written against it); the equivalent Jacobi form
z^eps (1-z)^delta P_n^(2 eps, 2 delta - 1)(1 - 2z) differs by the constant
(1 + 2 eps)_n / n! and is kept as a cross-check only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedError
from .model import PotentialSpec, QuantumNumbers
from .specfun import hyp2f1_terminating, jacobi_p
from .spectrum import BoundState

__all__ = [
    "RadialSample",
    "z_of_r",
    "radial_u",
    "radial_u_jacobi",
    "radial_R",
    "default_r_grid",
    "sample_radial",
]


@dataclass(frozen=True)
class RadialSample:
    r: float
    z: float
    u: float
    R: float


def z_of_r(r: float, spec: PotentialSpec) -> float:
    """z = q exp(-alpha r); maps [0, inf) onto (0, q] for q > 0."""
    if r < 0.0:
        raise DomainError(f"r must be >= 0, got {r}")
    return spec.q * math.exp(-spec.alpha * r)


def _envelope(z: float, eps: float, delta: float) -> float:
    """z^eps (1-z)^delta, evaluated in log space so tiny z underflows
    gracefully instead of raising."""
    if z == 0.0:
        return 0.0
    one_minus = 1.0 - z
    if one_minus < 0.0:
        raise DomainError(f"1 - z = {one_minus} < 0: outside the q <= 1 domain")
    if one_minus == 0.0:
        return 0.0
    return math.exp(eps * math.log(z) + delta * math.log(one_minus))


def _require_positive_q(spec: PotentialSpec, what: str) -> None:
    if spec.q < 0.0:
        raise UnsupportedError(
            f"{what} is complex-valued for q < 0 (z^eps with z < 0); "
            "only the energy spectrum is supported there")


def radial_u(state: BoundState, spec: PotentialSpec, r: float,
             normalized: bool = False) -> float:
    """Reduced radial wavefunction u(r); the defining 2F1 form."""
    _require_positive_q(spec, "radial_u")
    z = z_of_r(r, spec)
    f = hyp2f1_terminating(state.n, 2.0 * state.eps + 2.0 * state.delta + state.n,
                           1.0 + 2.0 * state.eps, z)
    c = 1.0
    if normalized:
        if state.norm_constant is None:
            raise DomainError("state has no norm_constant; normalize it first")
        c = state.norm_constant
    return c * _envelope(z, state.eps, state.delta) * f


def radial_u_jacobi(state: BoundState, spec: PotentialSpec, r: float) -> float:
    """Jacobi-polynomial form of u(r); proportional to radial_u with ratio
    (1 + 2 eps)_n / n! (cross-check route, never used for normalization)."""
    _require_positive_q(spec, "radial_u_jacobi")
    z = z_of_r(r, spec)
    p = jacobi_p(state.n, 2.0 * state.eps, 2.0 * state.delta - 1.0, 1.0 - 2.0 * z)
    return _envelope(z, state.eps, state.delta) * p


def radial_R(state: BoundState, spec: PotentialSpec, qn: QuantumNumbers,
             r: float, normalized: bool = False) -> float:
    """Full radial factor R(r) = r^(-(D-1)/2) u(r)."""
    if r == 0.0:
        if qn.dim > 1:
            raise DomainError(
                "R(0) is singular for D > 1; sample r > 0 instead")
        return radial_u(state, spec, 0.0, normalized)
    if r < 0.0:
        raise DomainError(f"r must be >= 0, got {r}")
    u = radial_u(state, spec, r, normalized)
    return u * r ** (-(qn.dim - 1) / 2.0)


def default_r_grid(spec: PotentialSpec, points: int = 2000,
                   r_min: float | None = None, r_max: float | None = None,
                   spacing: str = "log") -> np.ndarray:
    """Sampling radii, log-spaced over [1e-4/alpha, 60/alpha] by default."""
    if points < 2:
        raise DomainError(f"points must be >= 2, got {points}")
    lo = 1e-4 / spec.alpha if r_min is None else r_min
    hi = 60.0 / spec.alpha if r_max is None else r_max
    if not 0.0 < lo < hi:
        raise DomainError(f"need 0 < r_min < r_max, got ({lo}, {hi})")
    if spacing == "log":
        return np.geomspace(lo, hi, points)
    if spacing == "uniform":
        return np.linspace(lo, hi, points)
    raise DomainError(f"spacing must be 'uniform' or 'log', got {spacing!r}")


def sample_radial(state: BoundState, spec: PotentialSpec, qn: QuantumNumbers,
                  rs, normalized: bool = True) -> list[RadialSample]:
    """Evaluate (r, z, u, R) along a radius grid."""
    out = []
    for r in np.asarray(rs, dtype=float):
        r = float(r)
        u = radial_u(state, spec, r, normalized)
        expo = -(qn.dim - 1) / 2.0
        big_r = u * r ** expo if r > 0.0 else (u if qn.dim == 1 else math.nan)
        out.append(RadialSample(r=r, z=z_of_r(r, spec), u=u, R=big_r))
    return out
