"""Normalization constants C_n, by three routes.

The unit-norm condition on the reduced wavefunction,
int_0^inf u(r)^2 dr = 1, turns the terminating 2F1 square into a double
sum of Pochhammer coefficients against incomplete-Beta values
B_q(2 eps + i + j, 2 delta + 1).  At q = 1 every B_q collapses to the
complete Beta function and the inner sum becomes a unit-argument 3F2,
leaving a single sum.  An adaptive-quadrature route is kept alongside as
the independent check.
"""

from __future__ import annotations

import math

from .errors import DomainError, RegimeError, UnsupportedError
from .model import PotentialSpec, QuantumNumbers, effective_k
from .specfun import (_Kahan, beta, hyp3f2_unit_terminating, inc_beta,
                      inc_beta_shift, log_gamma, pochhammer)
from .spectrum import BoundState
from .wavefunc import radial_u

__all__ = ["norm_general_q", "norm_q1", "norm_quadrature", "normalize_state"]


def _check_regime(state: BoundState, spec: PotentialSpec, what: str) -> None:
    if spec.q < 0.0:
        raise UnsupportedError(
            f"{what}: normalization for q < 0 is complex-valued; refused")
    if not state.eps > 0.0:
        raise DomainError(f"{what}: requires eps > 0, got {state.eps}")
    if not 2.0 * state.delta + 1.0 > 0.0:
        raise DomainError(
            f"{what}: requires 2*delta + 1 > 0, got delta={state.delta}")


def _series_coeffs(n: int, eps: float, delta: float) -> list:
    """c_i = (-n)_i (2 eps + 2 delta + n)_i / ((1 + 2 eps)_i i!) in signed-log."""
    top = 2.0 * eps + 2.0 * delta + n
    bot = 1.0 + 2.0 * eps
    out = []
    for i in range(n + 1):
        num = pochhammer(-float(n), i) * pochhammer(top, i)
        den = pochhammer(bot, i)
        sign = num.sign * den.sign
        log_mag = num.log_magnitude - den.log_magnitude - log_gamma(i + 1.0)
        out.append((sign, log_mag))
    return out


def norm_general_q(state: BoundState, spec: PotentialSpec) -> float:
    """C_n for q in (0, 1] from the incomplete-Beta double sum.

    One direct B_q evaluation anchors the recurrence ladder that supplies
    all shifted arguments; terms are grouped by i + j, within which every
    product shares the sign (-1)^(i+j), so cancellation only happens
    across groups and is handled by compensated summation.
    """
    _check_regime(state, spec, "norm_general_q")
    if not 0.0 < spec.q <= 1.0:
        raise UnsupportedError(
            f"norm_general_q requires q in (0, 1], got {spec.q}")
    n = state.n
    x0 = 2.0 * state.eps
    y0 = 2.0 * state.delta + 1.0
    base = inc_beta(spec.q, x0, y0)
    bq = [inc_beta_shift(spec.q, x0, y0, m, base) for m in range(2 * n + 1)]
    cs = _series_coeffs(n, state.eps, state.delta)

    total = _Kahan()
    for m in range(2 * n + 1):
        group = _Kahan()
        for i in range(max(0, m - n), min(n, m) + 1):
            si, li = cs[i]
            sj, lj = cs[m - i]
            if si == 0 or sj == 0:
                continue
            group.add(si * sj * math.exp(li + lj))
        total.add(group.total * bq[m])
    s = total.total
    if not s > 0.0:
        raise RegimeError(
            f"normalization sum non-positive ({s:.6g}): parameters outside "
            "regime or cancellation failure")
    return math.sqrt(spec.alpha / s)


def norm_q1(state: BoundState, spec: PotentialSpec) -> float:
    """C_n at q = 1: single Pochhammer-weighted sum of unit-argument 3F2
    values against the complete Beta function."""
    if spec.q != 1.0:
        raise DomainError(f"norm_q1 requires q = 1, got {spec.q}")
    _check_regime(state, spec, "norm_q1")
    n = state.n
    eps2 = 2.0 * state.eps
    d21 = 2.0 * state.delta + 1.0
    top = eps2 + 2.0 * state.delta + n

    acc = _Kahan()
    for i in range(n + 1):
        num = (pochhammer(-float(n), i) * pochhammer(top, i)
               * pochhammer(eps2, i))
        den = pochhammer(1.0 + eps2, i) * pochhammer(eps2 + d21, i)
        if num.sign == 0:
            continue
        coef = (num.sign * den.sign) * math.exp(
            num.log_magnitude - den.log_magnitude - log_gamma(i + 1.0))
        f32 = hyp3f2_unit_terminating(n, top, eps2 + i,
                                      1.0 + eps2, eps2 + i + d21)
        acc.add(coef * f32)
    s = acc.total * beta(eps2, d21)
    if not s > 0.0:
        raise RegimeError(
            f"normalization sum non-positive ({s:.6g}): parameters outside "
            "regime or cancellation failure")
    return math.sqrt(spec.alpha / s)


def norm_quadrature(state: BoundState, spec: PotentialSpec,
                    qn: QuantumNumbers) -> float:
    """C_n = 1/sqrt(int u_unnormalized^2 dr) by adaptive quadrature.

    The interval is truncated where the integrand falls below 1e-18 of its
    peak; the quadrature is run against the peak-rescaled integrand with
    1e-12 tolerances.
    """
    _check_regime(state, spec, "norm_quadrature")
    if effective_k(qn) != state.k:
        raise DomainError(
            f"quantum numbers give k={effective_k(qn)} but state has k={state.k}")
    from .oracle import integrate  # local import: oracle depends on spectrum

    def u2(r: float) -> float:
        v = radial_u(state, spec, r, normalized=False)
        return v * v

    # locate the peak on a coarse scan, then cut where the exponential
    # tail exp(-2 eps alpha r) is below 1e-18 of it
    scan_hi = 60.0 / spec.alpha
    n_scan = 2048
    peak = 0.0
    r_peak = 0.0
    for i in range(n_scan + 1):
        r = scan_hi * i / n_scan
        v = u2(r)
        if v > peak:
            peak, r_peak = v, r
    if peak == 0.0:
        raise RegimeError("wavefunction vanished on the whole scan grid")
    r_cut = r_peak + math.log(1e18) / (2.0 * state.eps * spec.alpha) \
        + 5.0 / spec.alpha

    tol = min(1e-12, 1e-12 / peak)
    val = integrate(lambda r: u2(r) / peak, 0.0, r_cut, tol)
    integral = val * peak
    if not integral > 0.0:
        raise RegimeError(f"norm integral non-positive: {integral:.6g}")
    return 1.0 / math.sqrt(integral)


def normalize_state(state: BoundState, spec: PotentialSpec,
                    route: str = "auto") -> BoundState:
    """Return the state with norm_constant attached.

    route: "auto" picks the q = 1 single-sum when exact, else the general
    double sum; "general", "q1" and "quadrature" force a route.
    """
    if route == "auto":
        route = "q1" if spec.q == 1.0 else "general"
    if route == "q1":
        c = norm_q1(state, spec)
    elif route == "general":
        c = norm_general_q(state, spec)
    elif route == "quadrature":
        qn = QuantumNumbers(dim=state.k, ell=0, n=state.n)
        c = norm_quadrature(state, spec, qn)
    else:
        raise DomainError(f"unknown route {route!r}")
    return state.with_norm(c)
