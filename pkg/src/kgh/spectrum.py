"""Bound-state energies from the quantization condition.

For radial index n the condition reads

    eps(E) = A + B*E,        eps(E) = sqrt(M^2 - E^2)/alpha,

with A = (2 M s0/(alpha^2 q) + beta2) / (2(n+delta)) - (n+delta)/2 and
B = v0 / (alpha^2 q (n+delta)).  Squaring gives an exact quadratic in E;
its roots are filtered against |E| < M, eps > 0 and the residual of the
unsquared condition, which rejects the spurious root introduced by
squaring.  A sign-change bisection on the unsquared condition serves both
as fallback for an ill-conditioned quadratic and as an independent route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

from .errors import DomainError
from .model import PotentialSpec, QuantumNumbers, delta_exponent, effective_k

__all__ = [
    "BoundState",
    "solve_level",
    "solve_level_bisection",
    "enumerate_spectrum",
    "state_from_energy",
    "condition_residual",
]

# residual of the unsquared condition above which a root is spurious
_RESIDUAL_TOL = 1e-10
# roots closer than this are the same state (degenerate quadratic)
_DEDUP_TOL = 1e-12
# quadratic treated as ill-conditioned: fall back to bisection
_SMALL_B = 1e-14
_DISC_TOL = 1e-12

_BISECT_SAMPLES = 4096
_BISECT_STEPS = 200


@dataclass(frozen=True)
class BoundState:
    """One solved level: quantum numbers, energy and derived quantities."""

    n: int
    k: int
    energy: float
    eps: float
    delta: float
    branch: str  # "pos" or "neg": sign of the radical in the quadratic
    norm_constant: Optional[float] = None

    def with_norm(self, c: float) -> "BoundState":
        return replace(self, norm_constant=c)


def _ab_coeffs(spec: PotentialSpec, delta: float, n: int) -> tuple[float, float]:
    a2q = spec.alpha ** 2 * spec.q
    beta2 = (spec.s0 ** 2 - spec.v0 ** 2) / (a2q * spec.q)
    nd = n + delta
    a = (2.0 * spec.mass * spec.s0 / a2q + beta2) / (2.0 * nd) - 0.5 * nd
    b = spec.v0 / (a2q * nd)
    return a, b


def condition_residual(spec: PotentialSpec, delta: float, n: int,
                       energy: float) -> float:
    """|eps(E) - (A + B E)|: how well E satisfies the unsquared condition."""
    a, b = _ab_coeffs(spec, delta, n)
    eps = math.sqrt(spec.mass ** 2 - energy ** 2) / spec.alpha
    return abs(eps - (a + b * energy))


def _polish(spec: PotentialSpec, a: float, b: float, e: float) -> float:
    """A few guarded Newton steps on g(E) = eps(E) - A - B E."""
    m = spec.mass
    for _ in range(3):
        s = m * m - e * e
        if s <= 0.0:
            return e
        eps = math.sqrt(s) / spec.alpha
        g = eps - a - b * e
        gp = -e / (spec.alpha * math.sqrt(s)) - b
        if gp == 0.0:
            return e
        step = g / gp
        e_new = e - step
        if not abs(e_new) < m:
            return e
        e = e_new
        if abs(step) < 1e-16 * max(1.0, abs(e)):
            break
    return e


def _accept(spec: PotentialSpec, a: float, b: float, e: float) -> bool:
    if not abs(e) < spec.mass:
        return False
    if not a + b * e > 0.0:  # eps must be positive
        return False
    eps = math.sqrt(spec.mass ** 2 - e * e) / spec.alpha
    return abs(eps - (a + b * e)) < _RESIDUAL_TOL


def _package(spec: PotentialSpec, qn: QuantumNumbers, delta: float,
             roots: list[tuple[float, str]]) -> list[BoundState]:
    k = effective_k(qn)
    states = []
    for e, branch in roots:
        eps = math.sqrt(spec.mass ** 2 - e * e) / spec.alpha
        states.append(BoundState(n=qn.n, k=k, energy=e, eps=eps,
                                 delta=delta, branch=branch))
    return states


def solve_level(spec: PotentialSpec, qn: QuantumNumbers) -> list[BoundState]:
    """All bound states at radial index qn.n: zero, one or two of them."""
    delta = delta_exponent(spec, effective_k(qn))
    a, b = _ab_coeffs(spec, delta, qn.n)

    al2 = spec.alpha ** 2
    # (1 + alpha^2 B^2) E^2 + 2 alpha^2 A B E + alpha^2 A^2 - M^2 = 0
    ca = 1.0 + al2 * b * b
    cb = 2.0 * al2 * a * b
    cc = al2 * a * a - spec.mass ** 2
    disc = cb * cb - 4.0 * ca * cc

    if abs(b) < _SMALL_B or abs(disc) < _DISC_TOL:
        return solve_level_bisection(spec, qn)
    if disc < 0.0:
        return []

    sq = math.sqrt(disc)
    candidates = [((-cb - sq) / (2.0 * ca), "neg"),
                  ((-cb + sq) / (2.0 * ca), "pos")]
    roots = []
    for e, branch in candidates:
        e = _polish(spec, a, b, e)
        if _accept(spec, a, b, e):
            roots.append((e, branch))
    if len(roots) == 2 and abs(roots[0][0] - roots[1][0]) < _DEDUP_TOL:
        roots = roots[:1]
    return _package(spec, qn, delta, roots)


def solve_level_bisection(spec: PotentialSpec, qn: QuantumNumbers) -> list[BoundState]:
    """Bound states at qn.n from sign-change bisection of the unsquared
    condition over E in (-M, M).  Independent of the quadratic route."""
    delta = delta_exponent(spec, effective_k(qn))
    a, b = _ab_coeffs(spec, delta, qn.n)
    m = spec.mass

    def g(e: float) -> float:
        return math.sqrt(m * m - e * e) / spec.alpha - a - b * e

    lo = -m * (1.0 - 1e-15)
    hi = m * (1.0 - 1e-15)
    xs = [lo + (hi - lo) * i / (_BISECT_SAMPLES - 1)
          for i in range(_BISECT_SAMPLES)]
    gs = [g(x) for x in xs]

    roots: list[float] = []
    for i in range(len(xs) - 1):
        g0, g1 = gs[i], gs[i + 1]
        if g0 == 0.0:
            roots.append(xs[i])
            continue
        if g0 * g1 < 0.0:
            x0, x1 = xs[i], xs[i + 1]
            f0 = g0
            for _ in range(_BISECT_STEPS):
                xm = 0.5 * (x0 + x1)
                fm = g(xm)
                if fm == 0.0:
                    x0 = x1 = xm
                    break
                if f0 * fm < 0.0:
                    x1 = xm
                else:
                    x0, f0 = xm, fm
            roots.append(0.5 * (x0 + x1))
    if gs[-1] == 0.0:
        roots.append(xs[-1])

    polished = sorted(_polish(spec, a, b, e) for e in roots)
    uniq: list[float] = []
    for e in polished:
        if not _accept(spec, a, b, e):
            continue
        if not uniq or abs(e - uniq[-1]) > _DEDUP_TOL:
            uniq.append(e)
    if len(uniq) == 2:
        labeled = [(uniq[1], "pos"), (uniq[0], "neg")]
    elif len(uniq) == 1:
        # a single surviving root: match the quadratic branch by sign of
        # the radical term it corresponds to
        al2 = spec.alpha ** 2
        cb = 2.0 * al2 * a * b
        ca = 1.0 + al2 * b * b
        vertex = -cb / (2.0 * ca)
        labeled = [(uniq[0], "pos" if uniq[0] >= vertex else "neg")]
    else:
        labeled = []
    labeled.sort(key=lambda t: t[1])  # deterministic: "neg" before "pos"
    return _package(spec, qn, delta, labeled)


def enumerate_spectrum(spec: PotentialSpec, qn_base: QuantumNumbers,
                       n_max: int) -> list[BoundState]:
    """solve_level over n = 0..n_max, stopping at the first empty level.

    Results are sorted by (n, branch); the number of populated levels is
    len({s.n for s in result}).
    """
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    out: list[BoundState] = []
    for n in range(n_max + 1):
        states = solve_level(spec, replace(qn_base, n=n))
        if not states:
            break
        out.extend(states)
    out.sort(key=lambda s: (s.n, s.branch))
    return out


def state_from_energy(spec: PotentialSpec, qn: QuantumNumbers, energy: float,
                      branch: str = "pos") -> BoundState:
    """Package an arbitrary trial energy as a BoundState (no quantization
    check).  Used for diagnostics and negative controls."""
    if not abs(energy) < spec.mass:
        raise DomainError(
            f"|E|={abs(energy)} >= M={spec.mass}: not a bound-state energy")
    k = effective_k(qn)
    return BoundState(
        n=qn.n, k=k, energy=energy,
        eps=math.sqrt(spec.mass ** 2 - energy ** 2) / spec.alpha,
        delta=delta_exponent(spec, k), branch=branch)
