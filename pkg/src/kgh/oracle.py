"""Independent numerical verification tools.

A second-order finite-difference discretization of the approximated radial
operator provides eigenvalues to check the closed-form spectrum against;
adaptive quadrature backs the normalization and incomplete-Beta checks;
and the transformed-variable operator applied to the analytic
eigenfunctions (with analytic derivatives) gives a pointwise residual that
is tiny exactly when the quantization condition holds.

At q = 1 the effective potential carries an r^-2 singularity at the
origin and the eigenfunction behaves like r^delta with fractional delta.
A plain central-difference stencil then converges at the anomalous rate
h^(2 delta - 1); the diagonal is therefore corrected near the origin so
the stencil is exact on r^delta, which restores clean h^2 convergence.
The correction vanishes identically when delta is 1 or 2 (smooth cases)
and is skipped for q < 1 (no singularity).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.linalg import eigh_tridiagonal

from .errors import ConvergenceError, DomainError
from .model import PotentialSpec, QuantumNumbers, delta_exponent, effective_k
from .spectrum import BoundState, solve_level
from .specfun import hyp2f1_terminating

__all__ = [
    "GridSpec",
    "default_grid",
    "integrate",
    "inc_beta_quadrature",
    "build_operator",
    "fd_eigensolve",
    "fd_refine",
    "ode_residual",
]

_QUAD_LIMIT = 500

_FIXED_POINT_TOL = 1e-10
_FIXED_POINT_CAP = 200
_FIXED_POINT_DAMPING = 0.5


@dataclass(frozen=True)
class GridSpec:
    """Radial grid description for the numerical routes."""

    r_max: float
    points: int
    spacing: str = "uniform"

    def __post_init__(self):
        if not self.r_max > 0.0:
            raise DomainError(f"r_max must be positive, got {self.r_max}")
        if self.points < 100:
            raise DomainError(f"points must be >= 100, got {self.points}")
        if self.spacing not in ("uniform", "log"):
            raise DomainError(
                f"spacing must be 'uniform' or 'log', got {self.spacing!r}")


def default_grid(spec: PotentialSpec, points: int = 200_000) -> GridSpec:
    """Uniform grid out to 60/alpha, which buries the exponential tail."""
    return GridSpec(r_max=60.0 / spec.alpha, points=points)


def integrate(f: Callable[[float], float], a: float, b: float,
              tol: float) -> float:
    """Adaptive Gauss-Kronrod integral of f over [a, b].

    The absolute-error estimate must come in at or below tol, else a
    ConvergenceError carries the diagnostics.
    """
    if not a < b:
        raise DomainError(f"integrate requires a < b, got [{a}, {b}]")
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol}")
    out = quad(f, a, b, epsabs=tol, epsrel=0.0, limit=_QUAD_LIMIT,
               full_output=1)
    val, abserr = out[0], out[1]
    if len(out) > 3 and abserr > tol:
        raise ConvergenceError(
            f"quadrature on [{a}, {b}] did not reach tol={tol:.3g}: "
            f"estimate {val:.12g}, error estimate {abserr:.3g}, "
            f"{out[2]['last']} subintervals used: {out[3]}")
    if abserr > tol:
        raise ConvergenceError(
            f"quadrature on [{a}, {b}]: error estimate {abserr:.3g} "
            f"exceeds tol={tol:.3g}")
    return val


def inc_beta_quadrature(q: float, x: float, y: float) -> float:
    """B_q(x, y) by adaptive quadrature of its integral representation.

    The substitution t = q s pulls the q^x scale out analytically, so the
    remaining O(1)-sized integral can be done to full relative precision
    even when B_q itself underflows toward zero.
    """
    if not 0.0 < q <= 1.0:
        raise DomainError(f"inc_beta_quadrature requires q in (0, 1], got {q}")
    if not (x > 0.0 and y > 0.0):
        raise DomainError(f"requires x, y > 0, got ({x}, {y})")

    def f(s: float) -> float:
        return s ** (x - 1.0) * (1.0 - q * s) ** (y - 1.0)

    guess = integrate(f, 0.0, 1.0, 1e-9)
    val = integrate(f, 0.0, 1.0, max(1e-13, 5e-12 * abs(guess)))
    return math.exp(x * math.log(q)) * val


def _potential(spec: PotentialSpec, k: int, r: np.ndarray,
               energy: float) -> np.ndarray:
    """Effective potential of the approximated radial equation, where the
    centrifugal 1/r^2 has been replaced by its exponential counterpart."""
    ear = np.exp(-spec.alpha * r)
    om = 1.0 - spec.q * ear
    coupling = -(2.0 * spec.mass * spec.s0 + 2.0 * energy * spec.v0) * ear / om
    barrier = (spec.alpha ** 2 * (k - 1) * (k - 3) / 4.0 * ear
               + (spec.s0 ** 2 - spec.v0 ** 2) * ear ** 2) / om ** 2
    return coupling + barrier


def build_operator(spec: PotentialSpec, qn: QuantumNumbers, grid: GridSpec,
                   energy: float = 0.0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Symmetric tridiagonal discretization of -u'' + W(r) u on (0, r_max).

    Returns (r, diag, offdiag) with Dirichlet ends u(0) = u(r_max) = 0.
    """
    if not 0.0 < spec.q <= 1.0:
        raise DomainError(
            f"finite-difference oracle requires q in (0, 1], got {spec.q}")
    if grid.spacing != "uniform":
        raise DomainError("build_operator requires a uniform grid")
    n = grid.points
    h = grid.r_max / (n + 1)
    r = h * np.arange(1, n + 1)
    k = effective_k(qn)
    diag = 2.0 / h ** 2 + _potential(spec, k, r, energy)
    if spec.q == 1.0:
        delta = delta_exponent(spec, k)
        # exactness-on-r^delta correction; first node's (r-h)^delta is 0^delta
        rp = r + h
        rm = r - h
        rm_pow = np.zeros_like(r)
        rm_pow[1:] = rm[1:] ** delta
        diag += ((rp ** delta - 2.0 * r ** delta + rm_pow) / (h ** 2 * r ** delta)
                 - delta * (delta - 1.0) / r ** 2)
    off = np.full(n - 1, -1.0 / h ** 2)
    return r, diag, off


def _eigenvalue(diag: np.ndarray, off: np.ndarray, target_n: int) -> float:
    if target_n >= diag.size:
        raise DomainError(
            f"target_n={target_n} exceeds the {diag.size}-point operator")
    w = eigh_tridiagonal(diag, off, eigvals_only=True, select="i",
                         select_range=(target_n, target_n))
    return float(w[0])


def _energy_from_lambda(spec: PotentialSpec, lam: float, sign: float) -> float:
    if lam >= 0.0:
        raise DomainError(
            f"eigenvalue {lam:.6g} >= 0: target level is beyond the discrete "
            "(bound) spectrum")
    e2 = spec.mass ** 2 + lam
    if e2 < 0.0:
        raise DomainError(
            f"eigenvalue {lam:.6g} below -M^2: no real energy")
    return sign * math.sqrt(e2)


def fd_eigensolve(spec: PotentialSpec, qn: QuantumNumbers, grid: GridSpec,
                  target_n: int, branch: str = "pos") -> float:
    """Energy of the target_n-th bound level from the discretized operator.

    With no vector coupling the operator is energy-independent and one
    symmetric tridiagonal eigensolve (Sturm bisection) suffices.  With
    vector coupling the operator depends on E through the 2 E v0 term and
    a damped fixed point is iterated, seeded from the analytic level when
    available and from the v0 = 0 problem otherwise.
    """
    if target_n < 0:
        raise DomainError(f"target_n must be >= 0, got {target_n}")
    if branch not in ("pos", "neg"):
        raise DomainError(f"branch must be 'pos' or 'neg', got {branch!r}")
    sign = 1.0 if branch == "pos" else -1.0

    if spec.v0 == 0.0:
        _, diag, off = build_operator(spec, qn, grid)
        return _energy_from_lambda(spec, _eigenvalue(diag, off, target_n), sign)

    e = _initial_energy(spec, qn, grid, target_n, sign)
    history = []
    for _ in range(_FIXED_POINT_CAP):
        _, diag, off = build_operator(spec, qn, grid, energy=e)
        e_map = _energy_from_lambda(spec, _eigenvalue(diag, off, target_n), sign)
        e_next = (1.0 - _FIXED_POINT_DAMPING) * e + _FIXED_POINT_DAMPING * e_map
        history.append(e_next)
        if abs(e_next - e) < _FIXED_POINT_TOL:
            return e_next
        if _oscillating(history):
            return _bisect_self_consistent(spec, qn, grid, target_n, sign,
                                           history)
        e = e_next
    raise ConvergenceError(
        f"fixed-point iteration did not converge in {_FIXED_POINT_CAP} steps; "
        f"last iterates {history[-3:]}")


def _initial_energy(spec: PotentialSpec, qn: QuantumNumbers, grid: GridSpec,
                    target_n: int, sign: float) -> float:
    from dataclasses import replace as dc_replace
    try:
        states = solve_level(spec, dc_replace(qn, n=target_n))
    except Exception:
        states = []
    wanted = "pos" if sign > 0 else "neg"
    for s in states:
        if s.branch == wanted:
            return s.energy
    if states:
        return states[0].energy
    scalar_only = PotentialSpec(mass=spec.mass, alpha=spec.alpha, q=spec.q,
                                v0=0.0, s0=spec.s0)
    _, diag, off = build_operator(scalar_only, qn, grid)
    return _energy_from_lambda(scalar_only, _eigenvalue(diag, off, target_n),
                               sign)


def _oscillating(history: list[float], window: int = 8) -> bool:
    if len(history) < window:
        return False
    inc = np.diff(history[-window:])
    if np.all(np.abs(np.diff(np.sign(inc))) > 0):
        # strict alternation without shrinking
        return abs(inc[-1]) >= 0.9 * abs(inc[0])
    return False


def _bisect_self_consistent(spec, qn, grid, target_n, sign, history):
    """Bisection on psi(E) = map(E) - E when the damped iteration rings."""
    def psi(e: float) -> float:
        _, diag, off = build_operator(spec, qn, grid, energy=e)
        return _energy_from_lambda(spec, _eigenvalue(diag, off, target_n),
                                   sign) - e

    lo, hi = min(history[-8:]), max(history[-8:])
    span = max(hi - lo, 1e-6)
    lo, hi = lo - span, hi + span
    plo, phi = psi(lo), psi(hi)
    if plo * phi > 0.0:
        raise ConvergenceError(
            f"self-consistency bisection found no bracket in [{lo}, {hi}]")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        pm = psi(mid)
        if abs(hi - lo) < _FIXED_POINT_TOL or pm == 0.0:
            return mid
        if plo * pm < 0.0:
            hi = mid
        else:
            lo, plo = mid, pm
    return 0.5 * (lo + hi)


def fd_refine(spec: PotentialSpec, qn: QuantumNumbers, target_n: int,
              branch: str = "pos", r_max: float | None = None,
              initial_points: int = 25_000, tol: float = 1e-8,
              max_points: int = 10 ** 7) -> tuple[float, list[tuple[int, float]]]:
    """Doubling refinement until successive eigenvalues differ by < tol or
    the point cap is reached.  Returns (energy, [(points, energy), ...])."""
    rm = 60.0 / spec.alpha if r_max is None else r_max
    points = initial_points
    history: list[tuple[int, float]] = []
    prev = None
    while points <= max_points:
        e = fd_eigensolve(spec, qn, GridSpec(rm, points), target_n, branch)
        history.append((points, e))
        if prev is not None and abs(e - prev) < tol:
            return e, history
        prev = e
        points *= 2
    return history[-1][1], history


def ode_residual(state: BoundState, spec: PotentialSpec,
                 grid: GridSpec) -> float:
    """Max of |transformed-operator applied to u| / max|u| over the interior
    z in [0.05 q, 0.95 q], using analytic derivatives of the 2F1 form.

    Exact solutions sit at roundoff level; an energy that violates the
    quantization condition inflates the residual by orders of magnitude.
    """
    if spec.q <= 0.0:
        raise DomainError("ode_residual requires q > 0")
    n = state.n
    eps, delta, k = state.eps, state.delta, state.k
    beta1 = 2.0 * (spec.mass * spec.s0 + state.energy * spec.v0) \
        / (spec.alpha ** 2 * spec.q)
    beta2 = (spec.s0 ** 2 - spec.v0 ** 2) / (spec.alpha ** 2 * spec.q ** 2)
    kappa = (k - 1.0) * (k - 3.0) / (4.0 * spec.q)

    b = 2.0 * eps + 2.0 * delta + n
    c = 1.0 + 2.0 * eps
    zs = np.linspace(0.05 * spec.q, 0.95 * spec.q, grid.points)

    max_res = 0.0
    max_u = 0.0
    for z in zs:
        f = hyp2f1_terminating(n, b, c, z)
        # dF/dz and d2F/dz2 via the contiguous shift of the terminating sum
        f1 = (-n * b / c) * hyp2f1_terminating(n - 1, b + 1.0, c + 1.0, z) \
            if n >= 1 else 0.0
        f2 = (n * (n - 1) * b * (b + 1.0) / (c * (c + 1.0))
              * hyp2f1_terminating(n - 2, b + 2.0, c + 2.0, z)) if n >= 2 else 0.0
        g = z ** eps * (1.0 - z) ** delta
        t = eps / z - delta / (1.0 - z)
        g1 = g * t
        g2 = g * (t * t - eps / z ** 2 - delta / (1.0 - z) ** 2)
        u = g * f
        u1 = g1 * f + g * f1
        u2 = g2 * f + 2.0 * g1 * f1 + g * f2
        lu = (u2 + u1 / z - eps ** 2 * u / z ** 2
              + beta1 * u / (z * (1.0 - z))
              - kappa * u / (z * (1.0 - z) ** 2)
              - beta2 * u / (1.0 - z) ** 2)
        max_res = max(max_res, abs(lu))
        max_u = max(max_u, abs(u))
    if max_u == 0.0:
        raise DomainError("wavefunction vanished on the residual grid")
    return max_res / max_u
