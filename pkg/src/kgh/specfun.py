"""Scalar special functions used by the solver.

Everything here is pure and deterministic: log-gamma (Lanczos), the Beta
function, Pochhammer symbols carried in signed-log form, terminating
hypergeometric sums, Jacobi polynomials, and the incomplete Beta function
B_q(x, y) evaluated by two convergent series plus a forward recurrence
ladder in its first argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError, UnsupportedError

__all__ = [
    "SignedLogValue",
    "log_gamma",
    "beta",
    "pochhammer",
    "hyp2f1_terminating",
    "hyp3f2_unit_terminating",
    "jacobi_p",
    "inc_beta",
    "inc_beta_shift",
    "inc_beta_series_signed",
]

# Lanczos g=7, 9-term coefficient set (Godfrey).  Gives ~1e-15 relative
# accuracy on Gamma over the range used here.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_LOG_SQRT_2PI = 0.9189385332046727417803297364056176398614

# Series controls: stop when a term's relative contribution drops below
# _SERIES_EPS, give up past _SERIES_CAP terms.
_SERIES_EPS = 1e-16
_SERIES_CAP = 100_000


class _Kahan:
    """Compensated accumulator for cancellation-prone sums."""

    __slots__ = ("total", "_c")

    def __init__(self, start: float = 0.0):
        self.total = start
        self._c = 0.0

    def add(self, x: float) -> None:
        y = x - self._c
        t = self.total + y
        self._c = (t - self.total) - y
        self.total = t


@dataclass(frozen=True)
class SignedLogValue:
    """A real number stored as sign * exp(log_magnitude).

    sign == 0 represents an exact zero (log_magnitude is then -inf).
    """

    log_magnitude: float
    sign: int

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise DomainError(f"sign must be -1, 0 or +1, got {self.sign}")
        if self.sign == 0 and self.log_magnitude != -math.inf:
            object.__setattr__(self, "log_magnitude", -math.inf)

    @staticmethod
    def of(x: float) -> "SignedLogValue":
        if x == 0.0:
            return SignedLogValue(-math.inf, 0)
        return SignedLogValue(math.log(abs(x)), 1 if x > 0 else -1)

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    def __mul__(self, other: "SignedLogValue") -> "SignedLogValue":
        if self.sign == 0 or other.sign == 0:
            return SignedLogValue(-math.inf, 0)
        return SignedLogValue(self.log_magnitude + other.log_magnitude,
                              self.sign * other.sign)


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0 by the Lanczos approximation."""
    if not x > 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    if x == 1.0 or x == 2.0:
        return 0.0
    if x < 0.5:
        # shift into the stable range: Gamma(x) = Gamma(x+1)/x
        return log_gamma(x + 1.0) - math.log(x)
    xm1 = x - 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (xm1 + i)
    t = xm1 + _LANCZOS_G + 0.5
    return _LOG_SQRT_2PI + (xm1 + 0.5) * math.log(t) - t + math.log(acc)


def beta(x: float, y: float) -> float:
    """Complete Beta function B(x, y) for x, y > 0."""
    if not (x > 0.0 and y > 0.0):
        raise DomainError(f"beta requires positive arguments, got ({x}, {y})")
    return math.exp(log_gamma(x) + log_gamma(y) - log_gamma(x + y))


def pochhammer(a: float, n: int) -> SignedLogValue:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1) in signed-log form.

    Exact zero when a is a non-positive integer with -a < n.
    """
    if n < 0:
        raise DomainError(f"pochhammer requires n >= 0, got {n}")
    log_mag = 0.0
    sign = 1
    for i in range(n):
        f = a + i
        if f == 0.0:
            return SignedLogValue(-math.inf, 0)
        log_mag += math.log(abs(f))
        if f < 0.0:
            sign = -sign
    return SignedLogValue(log_mag, sign)


def _check_terminating_denominator(c: float, n: int, what: str) -> None:
    # (c)_k vanishes for some k <= n iff c is an integer in [-(n-1), 0]
    if n >= 1 and c <= 0.0 and c == math.floor(c) and c >= -(n - 1):
        raise DomainError(
            f"{what}: denominator parameter {c} produces a zero Pochhammer "
            f"factor within {n + 1} terms")


def hyp2f1_terminating(n: int, b: float, c: float, z: float) -> float:
    """2F1(-n, b; c; z) as its exact finite sum of n + 1 terms."""
    if n < 0:
        raise DomainError(f"hyp2f1_terminating requires n >= 0, got {n}")
    _check_terminating_denominator(c, n, "hyp2f1_terminating")
    acc = _Kahan(1.0)
    t = 1.0
    for k in range(n):
        t *= (-n + k) * (b + k) * z / ((c + k) * (k + 1.0))
        acc.add(t)
    return acc.total


def hyp3f2_unit_terminating(n: int, a2: float, a3: float,
                            c1: float, c2: float) -> float:
    """3F2(-n, a2, a3; c1, c2; 1) as its exact finite sum of n + 1 terms."""
    if n < 0:
        raise DomainError(f"hyp3f2_unit_terminating requires n >= 0, got {n}")
    _check_terminating_denominator(c1, n, "hyp3f2_unit_terminating")
    _check_terminating_denominator(c2, n, "hyp3f2_unit_terminating")
    acc = _Kahan(1.0)
    t = 1.0
    for k in range(n):
        t *= (-n + k) * (a2 + k) * (a3 + k) / ((c1 + k) * (c2 + k) * (k + 1.0))
        acc.add(t)
    return acc.total


def jacobi_p(n: int, a: float, b: float, x: float) -> float:
    """Jacobi polynomial P_n^(a,b)(x), a, b > -1, by the three-term recurrence."""
    if n < 0:
        raise DomainError(f"jacobi_p requires n >= 0, got {n}")
    if not (a > -1.0 and b > -1.0):
        raise DomainError(f"jacobi_p requires a, b > -1, got ({a}, {b})")
    if n == 0:
        return 1.0
    p_prev = 1.0
    p = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0
    for m in range(2, n + 1):
        s = 2.0 * m + a + b
        # denominators are strictly positive for a, b > -1 and m >= 2
        c1 = 2.0 * m * (m + a + b) * (s - 2.0)
        c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b)
        c3 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * s
        p, p_prev = (c2 * p - c3 * p_prev) / c1, p
    return p


def _geometric_2f1(one_minus_p: float, one_plus_q: float, w: float,
                   what: str) -> float:
    """2F1(1, one_minus_p; one_plus_q; w) for |w| < 1 by direct summation.

    This is the convergent series behind both incomplete-Beta forms; the
    term ratio tends to w so convergence is geometric.
    """
    acc = _Kahan(1.0)
    t = 1.0
    for k in range(_SERIES_CAP):
        t *= (one_minus_p + k) / (one_plus_q + k) * w
        if t == 0.0:
            return acc.total
        acc.add(t)
        if abs(t) < _SERIES_EPS * abs(acc.total):
            return acc.total
    raise ConvergenceError(
        f"{what}: series did not converge within {_SERIES_CAP} terms (w={w})")


def _series_lower(qq: float, a: float, b: float) -> float:
    """B_qq(a, b) for qq in (0, 1/2] by the direct convergent series
    qq^a (1-qq)^(b-1)/a * 2F1(1, 1-b; 1+a; qq/(qq-1))."""
    w = qq / (qq - 1.0)
    f = _geometric_2f1(1.0 - b, 1.0 + a, w, "inc_beta")
    return math.exp(a * math.log(qq) + (b - 1.0) * math.log1p(-qq)) / a * f


_PROMOTE_W = 0.9
_PROMOTE_STEPS = 30


def _series_lower_promoted(qq: float, a: float, b: float) -> float:
    """As _series_lower, but robust near qq = 1/2 where the series argument
    approaches -1 and raw convergence is only conditional for small a + b.

    The series is evaluated at the promoted argument a + K, where the term
    decay ~ k^-(a+K+b) makes it immediate, and the recurrence ladder is run
    downward (its stable direction) back to a.
    """
    if abs(qq / (qq - 1.0)) <= _PROMOTE_W:
        return _series_lower(qq, a, b)
    k = _PROMOTE_STEPS
    val = _series_lower(qq, a + k, b)
    log_q = math.log(qq)
    log_1mq = math.log1p(-qq)
    for j in range(k - 1, -1, -1):
        aa = a + j
        val = ((aa + b) * val + math.exp(aa * log_q + b * log_1mq)) / aa
    return val


def inc_beta(q: float, x: float, y: float) -> float:
    """Incomplete Beta function B_q(x, y) = int_0^q t^(x-1) (1-t)^(y-1) dt.

    q in (0, 1/2) uses the series with argument q/(q-1); q in [1/2, 1) the
    complement form B(x, y) minus the same series evaluated at (1-q, y, x),
    whose argument is (q-1)/q; q = 1 is the complete Beta.  1 - q is exact
    for q >= 1/2, so the complement loses nothing to rounding.
    """
    if not (x > 0.0 and y > 0.0):
        raise DomainError(f"inc_beta requires x, y > 0, got ({x}, {y})")
    if not 0.0 < q <= 1.0:
        raise DomainError(f"inc_beta requires q in (0, 1], got {q}")
    if q == 1.0:
        return beta(x, y)
    if q < 0.5:
        return _series_lower_promoted(q, x, y)
    b_full = beta(x, y)
    val = b_full - _series_lower_promoted(1.0 - q, y, x)
    if val < 1e-5 * b_full:
        # the complement cancels more than five digits (B_q << B happens
        # for q near 1/2 with x >> y); re-evaluate with the transformed
        # series q^x (1-q)^y / x * 2F1(1, x+y; 1+x; q), whose terms are
        # all positive
        f = _geometric_2f1(x + y, 1.0 + x, q, "inc_beta")
        val = math.exp(x * math.log(q) + y * math.log1p(-q)) / x * f
    return val


def _ladder_digits_lost(q: float, m: int) -> float:
    # each forward step divides the value by ~q while propagating the
    # base's absolute error unchanged, so ~log10(1/q) digits go per step
    if m == 0 or q == 1.0:
        return 0.0
    return m * math.log10(1.0 / q)


def inc_beta_shift(q: float, x: float, y: float, m: int, base: float) -> float:
    """B_q(x + m, y) by m forward applications of

        B_q(x+1, y) = x/(x+y) * B_q(x, y) - q^x (1-q)^y / (x+y)

    starting from base = B_q(x, y).  The forward ladder amplifies the
    base's relative error by roughly q^(-m); when that would cost more
    than ~4 digits the ladder is re-anchored and carried in extended
    precision, which preserves the recurrence while meeting the 1e-10
    agreement contract for small q.
    """
    if not (x > 0.0 and y > 0.0):
        raise DomainError(f"inc_beta_shift requires x, y > 0, got ({x}, {y})")
    if not 0.0 < q <= 1.0:
        raise DomainError(f"inc_beta_shift requires q in (0, 1], got {q}")
    if m < 0:
        raise DomainError(f"inc_beta_shift requires m >= 0, got {m}")
    if m == 0:
        return base

    lost = _ladder_digits_lost(q, m)
    if lost <= 4.0:
        b = base
        xx = x
        log_q = math.log(q)
        log_1mq = math.log1p(-q) if q < 1.0 else None
        for _ in range(m):
            if log_1mq is None:
                t = 0.0
            else:
                t = math.exp(xx * log_q + y * log_1mq)
            b = xx / (xx + y) * b - t / (xx + y)
            xx += 1.0
        return b
    return _ladder_extended(q, x, y, m)


def _ladder_extended(q: float, x: float, y: float, m: int) -> float:
    """Eq-for-eq the same forward ladder, run in mpmath with enough digits
    to absorb the q^(-m) error amplification."""
    import mpmath

    digits = 25 + int(math.ceil(_ladder_digits_lost(q, m)))
    with mpmath.workdps(digits):
        qm, xm, ym = mpmath.mpf(q), mpmath.mpf(x), mpmath.mpf(y)
        b = mpmath.betainc(xm, ym, 0, qm)
        for i in range(m):
            xx = xm + i
            t = mpmath.e**(xx * mpmath.log(qm) + ym * mpmath.log(1 - qm))
            b = xx / (xx + ym) * b - t / (xx + ym)
        return float(b)


def inc_beta_series_signed(q: float, x: float, y: float) -> float:
    """The q < 0 continuation of the B_q(x, y) series.

    Real only when x is a positive integer (q^x is then real); any other
    x makes q^x complex and is reported as unsupported.
    """
    if q >= 0.0:
        raise DomainError(
            f"inc_beta_series_signed handles q < 0 only, got {q}; "
            "use inc_beta for q in (0, 1]")
    if not (x > 0.0 and y > 0.0):
        raise DomainError(f"requires x, y > 0, got ({x}, {y})")
    if x != math.floor(x):
        raise UnsupportedError(
            f"B_q with q={q} < 0 and non-integer x={x} is complex-valued; "
            "not supported")
    w = q / (q - 1.0)  # in (0, 1) for q < 0
    f = _geometric_2f1(1.0 - y, 1.0 + x, w, "inc_beta_series_signed")
    sign = -1.0 if int(x) % 2 else 1.0
    mag = math.exp(x * math.log(-q) + (y - 1.0) * math.log1p(-q))
    return sign * mag / x * f
