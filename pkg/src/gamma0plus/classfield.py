"""Ring-class-field minimal polynomials of x_N at CM points, and the listing
of algebraic-integer points they induce on the curve.

For prime level N and fundamental discriminant d_K < 0: enumerate the form
classes of discriminant N^2 d_K, lower each through the congruence map to a
form of discriminant d_K, evaluate x_N at the resulting CM points, expand the
monic product of (X - x_j) with tracked error bounds, and round to integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
from mpmath import mp

from . import quadforms
from .cmeval import ConvergenceError, EvalResult, PrecisionPolicy, cubic_residual, \
    estimate_terms, eval_x, eval_y
from .curvedata import default_registry

_MAX_ESCALATIONS = 4
_SLACK_LIMIT = 0.25


class ClassFieldError(ValueError):
    pass


class PrecisionExhausted(ArithmeticError):
    def __init__(self, msg, slack):
        super().__init__(msg)
        self.slack = slack


def _is_prime(n):
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def is_fundamental_discriminant(d):
    if d >= 0:
        return False
    if d % 4 == 1:
        return _squarefree(-d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(-m)
    return False


def _squarefree(n):
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class MinPolyJob:
    N: int
    d_K: int
    policy: PrecisionPolicy = None
    force_composite: bool = False

    def __post_init__(self):
        if not self.force_composite and not _is_prime(self.N):
            raise ClassFieldError(
                f"N = {self.N} is composite; the minimal-polynomial statement "
                f"holds for prime level (pass force_composite to compute anyway)")
        if not is_fundamental_discriminant(self.d_K):
            raise ClassFieldError(f"d_K = {self.d_K} is not a fundamental discriminant < 0")


@dataclass(frozen=True)
class MinPolyResult:
    poly: object                 # monic IntPoly of degree h(N^2 d_K)
    roots: tuple                 # (source form, lowered form, CMPoint, EvalResult)
    slack: float                 # max distance of a raw coefficient from its integer
    digits_used: int
    escalations: int = field(default=0, compare=False)


def _class_points(N, d_K):
    """(source form, lowered form, CM point) for every class of disc N^2 d_K."""
    out = []
    for Qf in quadforms.reduced_forms(N * N * d_K):
        low = quadforms.phi_map(Qf, N, d_K)
        out.append((Qf, low, quadforms.cm_root(low)))
    return out


def _auto_digits(points, d_K, h):
    """Coefficient-size estimate: product of (1 + |x_j|) with |x_j| taken from
    the pole term |q_j|^-2, plus fixed headroom; escalation covers the rest."""
    logsum = 0.0
    for _, low, _pt in points:
        log_xj = 2 * math.pi * math.sqrt(-d_K) / low.a / math.log(10)
        logsum += math.log10(1 + 10 ** min(log_xj, 300))
    return 25 + h + math.ceil(logsum)


def minpoly(job, registry=None):
    """Run the six-step construction; escalate precision until every rounded
    coefficient sits within the slack limit of an integer."""
    reg = registry or default_registry()
    N, d_K = job.N, job.d_K
    points = _class_points(N, d_K)
    h = len(points)
    digits = job.policy.digits if job.policy else _auto_digits(points, d_K, h)
    guard = job.policy.guard if job.policy else 15
    last_slack = None
    for attempt in range(_MAX_ESCALATIONS + 1):
        im_min = min(math.sqrt(-d_K) / (2 * low.a) for _, low, _ in points)
        need = max(estimate_terms(N, im_min, digits + guard), 64)
        curve = reg.get(N, min_order=need)
        policy = PrecisionPolicy(digits=digits, guard=guard)
        try:
            evals = [eval_x(curve, pt, policy) for _, _, pt in points]
        except ConvergenceError:
            digits *= 2
            continue
        poly_c, poly_e = _expand_roots(evals, policy)
        ints, slack = _round_coeffs(poly_c, poly_e)
        last_slack = slack
        if slack < _SLACK_LIMIT:
            from .exactalg import IntPoly
            out = IntPoly(ints[::-1])
            assert out.lead == 1 and out.degree == h
            roots = tuple((src, low, pt, ev)
                          for (src, low, pt), ev in zip(points, evals))
            return MinPolyResult(out, roots, float(slack), digits, attempt)
        digits *= 2
    raise PrecisionExhausted(
        f"slack {last_slack} still above {_SLACK_LIMIT} after "
        f"{_MAX_ESCALATIONS} escalations", float(last_slack))


def _expand_roots(evals, policy):
    """Coefficients of prod (X - x_j), descending, with error upper bounds."""
    with mp.workdps(policy.working_dps):
        coeffs = [mpmath.mpc(1)]
        errs = [mpmath.mpf(0)]
        ulp = mpmath.mpf(10) ** (8 - policy.working_dps)
        for ev in evals:
            x, ex = ev.value, ev.err
            ax = abs(x)
            nc = [mpmath.mpc(1)]
            ne = [mpmath.mpf(0)]
            for k in range(1, len(coeffs) + 1):
                prev = coeffs[k - 1]
                cur = coeffs[k] if k < len(coeffs) else None
                v = -x * prev if cur is None else cur - x * prev
                e = ax * errs[k - 1] + ex * abs(prev) + ex * errs[k - 1]
                if cur is not None:
                    e += errs[k]
                nc.append(v)
                ne.append(e + abs(v) * ulp + ulp)
            coeffs, errs = nc, ne
        return coeffs, errs


def _round_coeffs(coeffs, errs):
    ints = []
    slack = mpmath.mpf(0)
    for c, e in zip(coeffs, errs):
        n = int(mpmath.nint(mpmath.re(c)))
        slack = max(slack, abs(mpmath.re(c) - n), abs(mpmath.im(c)), e)
        ints.append(n)
    return ints, slack


def heegner_points(N, d_K, policy=None, registry=None, force_composite=False):
    """One algebraic-integer point (x, y) on the curve per form class of
    discriminant N^2 d_K, with cubic residual and pairwise-distinctness checks."""
    job = MinPolyJob(N, d_K, policy, force_composite)
    reg = registry or default_registry()
    points = _class_points(N, d_K)
    h = len(points)
    digits = policy.digits if policy else _auto_digits(points, d_K, h)
    guard = policy.guard if policy else 15
    im_min = min(math.sqrt(-d_K) / (2 * low.a) for _, low, _ in points)
    curve = reg.get(N, min_order=max(estimate_terms(N, im_min, digits + guard), 64))
    pol = PrecisionPolicy(digits=digits, guard=guard)
    out = []
    with mp.workdps(pol.working_dps):
        res_tol = mpmath.mpf(10) ** (-(digits // 2))
        for _, low, pt in points:
            ex = eval_x(curve, pt, pol)
            ey = eval_y(curve, pt, pol)
            res = cubic_residual(ex, ey, curve)
            if res.residual > res_tol:
                raise ClassFieldError(
                    f"point for {low} violates the cubic: residual "
                    f"{mpmath.nstr(res.residual, 3)}")
            out.append((ex, ey))
        for i in range(len(out)):
            for j in range(i + 1, len(out)):
                gap = abs(out[i][0].value - out[j][0].value)
                if gap <= (out[i][0].err + out[j][0].err) * 10:
                    raise ClassFieldError(f"x-values of classes {i} and {j} collide")
    assert len(out) == h
    return out
