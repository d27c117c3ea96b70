"""Arbitrary-precision evaluation of the generators at CM points from the
stored q-expansions, with explicit tail control.

The coefficients of a pole-order-two modular function grow subexponentially
(exp(c sqrt(n))), so the partial sums settle geometrically once n is past the
crossover; the stopping rule watches a window of consecutive negligible terms
and converts the window maximum into a conservative geometric tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
from mpmath import mp


class ConvergenceError(ArithmeticError):
    def __init__(self, msg, achieved=None):
        super().__init__(msg)
        self.achieved = achieved


@dataclass(frozen=True)
class PrecisionPolicy:
    digits: int = 30
    guard: int = 15
    max_terms: int = None

    def __post_init__(self):
        if self.digits < 10:
            raise ValueError("digits must be at least 10")

    @property
    def working_dps(self):
        return self.digits + self.guard


@dataclass(frozen=True)
class EvalResult:
    value: object          # mpmath complex
    err: object            # mpmath real upper bound
    terms_used: int

    @property
    def real(self):
        return self.value.real

    def __repr__(self):
        return (f"EvalResult({mpmath.nstr(self.value, 20)} +- "
                f"{mpmath.nstr(self.err, 3)}, terms={self.terms_used})")


_WINDOW = 12
_SAFETY = 1000


def _sum_at(coeff, lo, tau_point, order, policy):
    """Sum coeff(n) q^n from n = lo with the windowed stopping rule."""
    max_terms = policy.max_terms if policy.max_terms is not None else order + 1
    max_n = min(order, lo + max_terms - 1)
    with mp.workdps(policy.working_dps):
        tau = tau_point.tau(mp)
        q = mpmath.exp(2j * mpmath.pi * tau)
        absq = abs(q)
        if absq >= 1:
            raise ConvergenceError("CM point is not in the upper half plane")
        thresh_scale = mpmath.mpf(10) ** (-policy.working_dps)
        total = mpmath.mpc(0)
        qpow = q ** lo
        small_run = 0
        window_max = mpmath.mpf(0)
        n = lo
        stopped = False
        while n <= max_n:
            c = coeff(n)
            term = c * qpow if c else mpmath.mpc(0)
            total += term
            mag = abs(term)
            window_max = max(window_max, mag)
            if mag < thresh_scale * max(1, abs(total)):
                small_run += 1
                if n >= 10 and small_run >= _WINDOW:
                    stopped = True
                    n += 1
                    break
            else:
                small_run = 0
                window_max = mag
            qpow *= q
            n += 1
        err = window_max * absq / (1 - absq) * _SAFETY
        terms = n - lo
        if not stopped:
            raise ConvergenceError(
                f"series did not settle within {terms} terms (tail ~ {mpmath.nstr(err, 3)})",
                achieved=err)
        if err > mpmath.mpf(10) ** (-policy.digits):
            raise ConvergenceError(
                f"tail bound {mpmath.nstr(err, 3)} above the 1e-{policy.digits} target",
                achieved=err)
    return EvalResult(total, err, terms)


def eval_x(curve, tau_point, policy=PrecisionPolicy()):
    """x_N at a CM point, summed from the stored expansion."""
    return _sum_at(curve.x_coeff, -2, tau_point, curve.order, policy)


def eval_y(curve, tau_point, policy=PrecisionPolicy()):
    """y_N at a CM point."""
    return _sum_at(curve.y_coeff, -3, tau_point, curve.order, policy)


def _dps_for(err):
    """Working digits fine enough not to drown an error bound of size err."""
    if err is None:
        return mp.dps
    if err <= 0:
        return mp.dps + 30
    return max(15, int(-mpmath.mag(err) * 0.30103) + 12)


def y_from_pq(P, Q, x_val):
    """y = -P(x)/Q(x) with first-order error propagation; rejects a
    denominator indistinguishable from zero."""
    with mp.workdps(max(mp.dps, _dps_for(x_val.err))):
        x = x_val.value
        ex = x_val.err
        pv, qv = P(x), Q(x)
        dq = Q.derivative()(x)
        if abs(qv) <= (abs(dq) * ex + mpmath.mpf(10) ** (-mp.dps)) * 4:
            raise ZeroDivisionError("denominator Q(x) is within error of zero")
        val = -pv / qv
        dp = P.derivative()(x)
        deriv = (dp * qv - pv * dq) / (qv * qv)
        err = abs(deriv) * ex * 2 + abs(val) * mpmath.mpf(10) ** (5 - mp.dps)
    return EvalResult(val, err, x_val.terms_used)


@dataclass(frozen=True)
class CubicResidual:
    residual: object
    y_disc_nonneg: bool

    def __float__(self):
        return float(self.residual)


def cubic_residual(x, y, curve):
    """|y^2 - x^3 - A xy - B x^2 - C y - D x - E| for evaluated generators,
    plus the sign check of the quadratic-in-y discriminant at real input."""
    xv = getattr(x, "value", x)
    yv = getattr(y, "value", y)
    dps = max(mp.dps, _dps_for(getattr(x, "err", None)), _dps_for(getattr(y, "err", None)))
    with mp.workdps(dps):
        r = (yv * yv - xv ** 3 - curve.A * xv * yv - curve.B * xv * xv
             - curve.C * yv - curve.D * xv - curve.E)
        disc = (curve.A * xv + curve.C) ** 2 + 4 * (xv ** 3 + curve.B * xv * xv
                                                    + curve.D * xv + curve.E)
        tol = mpmath.mpf(10) ** (8 - mp.dps)
        nonneg = abs(mpmath.im(disc)) < tol and mpmath.re(disc) > -tol
        return CubicResidual(abs(r), bool(nonneg))


def estimate_terms(N, im_tau, digits):
    """Series length so that exp(c sqrt(2n/N)) |q|^n dips below 10^-digits,
    with the stopping window and safety factor absorbed into the target."""
    alpha = 2 * math.pi * float(im_tau)
    beta = 4 * math.pi * math.sqrt(2.0 / N)
    gamma = math.log(10) * (digits + 18) + math.log(_SAFETY) + 8
    t = (beta + math.sqrt(beta * beta + 4 * alpha * gamma)) / (2 * alpha)
    return int(t * t) + _WINDOW + 40
