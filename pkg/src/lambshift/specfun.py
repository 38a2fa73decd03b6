"""Terminating hypergeometric sums, Jacobi polynomials and gamma ratios.

These are the scalar building blocks of every kernel matrix element.  The
parameter ranges are narrow (nonpositive integer series indices, integer
Jacobi parameters) which allows exact finite summation instead of generic
special-function machinery.
"""

from __future__ import annotations

import math
from fractions import Fraction

# Alternating terminating series lose roughly condition * n * eps relative
# accuracy to per-term rounding, so anything noticeably cancellation-prone
# is redone in exact rational arithmetic (cheap: <= |a|+1 small rationals).
CONDITION_LIMIT = 4.0


def neumaier_sum(values) -> float:
    """Compensated (Neumaier) summation of an iterable of floats."""
    total = 0.0
    comp = 0.0
    for v in values:
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


class _NeumaierAcc:
    """Running compensated sum; also tracks the sum of magnitudes."""

    __slots__ = ("total", "comp", "abs_total")

    def __init__(self) -> None:
        self.total = 0.0
        self.comp = 0.0
        self.abs_total = 0.0

    def add(self, v: float) -> None:
        t = self.total + v
        if abs(self.total) >= abs(v):
            self.comp += (self.total - t) + v
        else:
            self.comp += (v - t) + self.total
        self.total = t
        self.abs_total += abs(v)

    @property
    def value(self) -> float:
        return self.total + self.comp


def _hyp2f1_exact(a: int, b: int, c: int, z: float) -> float:
    """Terminating 2F1 with exact rational arithmetic (z taken bit-exact)."""
    zq = Fraction(z)
    term = Fraction(1)
    total = Fraction(1)
    for k in range(-a):
        term *= Fraction((a + k) * (b + k), (c + k) * (k + 1)) * zq
        total += term
    return float(total)


def hyp2f1_terminating(a: int, b: int, c: int, z):
    """Gauss series 2F1(a, b; c; z) for nonpositive integer a.

    The sum terminates after |a|+1 terms and is accumulated lowest order
    first with compensated summation.  For real z, severe alternating-sign
    cancellation (term sum exceeding the result by more than
    CONDITION_LIMIT) triggers an exact rational re-evaluation.
    """
    if a != int(a) or a > 0:
        raise ValueError(f"series does not terminate: a={a!r} must be a nonpositive integer")
    a = int(a)
    if c != int(c) or c < 1:
        raise ValueError(f"require positive integer c, got {c!r}")
    c = int(c)
    if a == 0 or z == 0:
        return 1.0

    if isinstance(z, complex):
        term = complex(1.0)
        re = _NeumaierAcc()
        im = _NeumaierAcc()
        re.add(1.0)
        im.add(0.0)
        for k in range(-a):
            term *= (a + k) * (b + k) * z / ((c + k) * (k + 1))
            re.add(term.real)
            im.add(term.imag)
        return complex(re.value, im.value)

    acc = _NeumaierAcc()
    term = 1.0
    acc.add(term)
    for k in range(-a):
        term *= (a + k) * (b + k) * z / ((c + k) * (k + 1))
        acc.add(term)
    result = acc.value
    scale = max(abs(result), 5e-324)
    if acc.abs_total > CONDITION_LIMIT * scale or not math.isfinite(acc.abs_total):
        if b == int(b):
            return _hyp2f1_exact(a, int(b), c, z)
    return result


def hyp2f1_terminating_dz(a: int, b: int, c: int, z):
    """d/dz of the terminating series, itself a terminating 2F1."""
    if a == 0:
        return 0.0
    return a * b / c * hyp2f1_terminating(a + 1, b + 1, c + 1, z)


def _jacobi_recurrence(n: int, alpha: float, beta: float, w):
    """Standard three-term recurrence in the degree.

    Valid whenever none of the leading coefficients 2k(k+alpha+beta)
    (2k+alpha+beta-2) for 2 <= k <= n vanish.
    """
    if n == 0:
        return _as_float_like(w, 1.0)
    p_prev = _as_float_like(w, 1.0)
    p = (alpha - beta) / 2.0 + (alpha + beta + 2.0) * w / 2.0
    for k in range(2, n + 1):
        s = 2.0 * k + alpha + beta
        lead = 2.0 * k * (k + alpha + beta) * (s - 2.0)
        if lead == 0.0:
            raise ValueError(
                f"degenerate Jacobi recurrence at degree {k} for (alpha, beta)=({alpha}, {beta})"
            )
        mid = (s - 1.0) * ((s * (s - 2.0)) * w + alpha * alpha - beta * beta)
        last = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * s
        p, p_prev = (mid * p - last * p_prev) / lead, p
    return p


def _as_float_like(w, value: float):
    """1.0 broadcast to the shape of w (scalar or numpy array)."""
    try:
        return value + 0.0 * w
    except TypeError:
        return value


def jacobi_p(n: int, alpha: int, beta: int, w):
    """Jacobi polynomial P_n^{(alpha, beta)}(w) by degree recurrence.

    The kernel uses beta = -1-2L, a negative integer for which the plain
    recurrence passes through a vanishing leading coefficient at degree
    -beta.  For alpha = 0 and n >= -beta the polynomial factors as

        P_n^{(0, -m)}(w) = ((w+1)/2)^m  P_{n-m}^{(0, m)}(w),   m = -beta,

    which reduces the evaluation to a nondegenerate recurrence.
    """
    if n < 0 or n != int(n):
        raise ValueError(f"degree must be a nonnegative integer, got {n!r}")
    n = int(n)
    if beta == int(beta) and beta <= -1 and n >= -int(beta):
        m = -int(beta)
        if alpha != 0:
            raise ValueError(
                "negative integer beta with degree >= -beta is supported only for alpha = 0"
            )
        return ((w + 1.0) / 2.0) ** m * _jacobi_recurrence(n - m, 0.0, float(m), w)
    return _jacobi_recurrence(n, float(alpha), float(beta), w)


def jacobi_p_dw(n: int, alpha: int, beta: int, w):
    """Derivative dP_n^{(alpha,beta)}/dw = (n+alpha+beta+1)/2 P_{n-1}^{(alpha+1,beta+1)}."""
    if n == 0:
        return _as_float_like(w, 0.0)
    return (n + alpha + beta + 1) / 2.0 * jacobi_p(n - 1, alpha + 1, beta + 1, w)


def ln_gamma_ratio(num: int, den: int) -> float:
    """ln(Gamma(num)/Gamma(den)) for positive integers, by summed logs."""
    if num < 1 or den < 1 or num != int(num) or den != int(den):
        raise ValueError(f"require positive integer arguments, got ({num!r}, {den!r})")
    num, den = int(num), int(den)
    if num == den:
        return 0.0
    lo, hi = min(num, den), max(num, den)
    total = neumaier_sum(math.log(k) for k in range(lo, hi))
    return total if num > den else -total
