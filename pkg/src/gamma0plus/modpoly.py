"""Modular polynomials for the canonical generators: the degree-psi(m)
polynomial prod(X - x_N o omega) over the upper-triangular matrices of
determinant m, its reduction to the two-generator ring, and extraction of
the pair (P, Q) with Phi(x_N) = P(x_N) + y_N Q(x_N).
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactalg import (CycInt, IntPoly, LossyReindexError, NotRationalError,
                       QSeries, YLinearPoly, ylinear_mul)

DEFAULT_GUARD = 16


class PipelineError(ValueError):
    """Integrity failure in the product/reduction pipeline."""


class InsufficientOrderError(ValueError):
    def __init__(self, needed, have):
        super().__init__(f"curve record order {have} insufficient, need {needed}")
        self.needed = needed
        self.have = have


@dataclass(frozen=True)
class OmegaMatrix:
    """Upper-triangular [[a, b], [0, d]] with ad = m, gcd(a, b, d) = 1, 0 <= b < d."""

    a: int
    b: int
    d: int

    @property
    def det(self):
        return self.a * self.d


def _gcd(*xs):
    import math
    g = 0
    for x in xs:
        g = math.gcd(g, x)
    return g


def omega_set(m):
    """All matrices of the determinant-m coset family, ordered by (a, b)."""
    if m < 1:
        raise ValueError("m must be positive")
    out = []
    for a in range(1, m + 1):
        if m % a:
            continue
        d = m // a
        for b in range(d):
            if _gcd(a, b, d) == 1:
                out.append(OmegaMatrix(a, b, d))
    return out


def psi(m):
    return len(omega_set(m))


def sigma1_plus(m):
    """sum over d | m of max(d, m/d)."""
    if m < 1:
        raise ValueError("m must be positive")
    return sum(max(d, m // d) for d in range(1, m + 1) if m % d == 0)


def omega_pullback(curve, omega, trunc):
    """The series x_N o omega = sum c_n zeta_d^(bn) q^(an/d), trusted modulo
    q^trunc, as a series in q^(1/d) over the d-th cyclotomic integers
    (plain integers when d = 1 or b = 0)."""
    a, b, d = omega.a, omega.b, omega.d
    n_hi = (trunc * d - 1) // a            # largest n with n*a/d < trunc
    if n_hi > curve.order:
        raise InsufficientOrderError(n_hi, curve.order)
    lo_num = -2 * a
    t_num = trunc * d
    coeffs = [0] * (t_num - lo_num)
    use_cyc = d > 1 and b != 0
    for n in range(-2, n_hi + 1):
        c = curve.x_coeff(n)
        if c:
            if use_cyc:
                coeffs[n * a - lo_num] = c * CycInt.zeta(d, b * n)
            else:
                coeffs[n * a - lo_num] = c
    return QSeries(d, lo_num, coeffs, t_num)


@dataclass(frozen=True)
class ModularPolynomial:
    """Monic polynomial in X of degree psi(m) whose coefficients are
    y-linear integer polynomials in the two generators."""

    N: int
    m: int
    coeffs: tuple  # YLinearPoly for X^0 .. X^psi(m); lead is the constant 1

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __getitem__(self, j):
        return self.coeffs[j]


def _mul_in_factor(poly, s):
    """(X - s) * (X^k + sum poly[j] X^j): lead stays implicit."""
    k = len(poly)
    out = []
    for j in range(k + 1):
        term = poly[j - 1] if 1 <= j <= k else None
        sub = s * poly[j] if j < k else s
        out.append(-sub if term is None else term - sub)
    return out


def _monic_mul(A, B):
    """Product of two monic coefficient lists (implicit leads)."""
    da, db = len(A), len(B)
    out = []
    for k in range(da + db):
        acc = None
        for i in range(max(0, k - db + 1), min(da, k + 1)):
            t = A[i] * B[k - i]
            acc = t if acc is None else acc + t
        if 0 <= k - db < da:
            acc = A[k - db] if acc is None else acc + A[k - db]
        if 0 <= k - da < db:
            acc = B[k - da] if acc is None else acc + B[k - da]
        assert acc is not None
        out.append(acc)
    return out


def phi_polynomial(curve, m, guard=DEFAULT_GUARD):
    """Construct the modular polynomial for order m at the curve's level.

    Blocks of fixed (a, d) are multiplied first over b, whose coefficients
    must come out rational (Galois invariance over the cyclotomic ring) with
    exponents landing on integers (invariance under the unit translation);
    block products are then multiplied together over the integers and each
    X-coefficient is reduced to a y-linear polynomial in the generators, with
    an identically-zero remainder through the guard window.
    """
    import math
    N = curve.N
    if m <= 1:
        raise PipelineError("m must exceed 1")
    if math.gcd(m, N) != 1:
        raise PipelineError(f"m = {m} must be coprime to the level {N}")
    s1p = sigma1_plus(m)
    t_q = 2 * s1p + guard + 1
    blocks = {}
    for w in omega_set(m):
        blocks.setdefault((w.a, w.d), []).append(w)
    int_blocks = []
    for (a, d), ws in sorted(blocks.items()):
        poly = []
        for w in ws:
            poly = _mul_in_factor(poly, omega_pullback(curve, w, t_q))
        ints = []
        for j, coef in enumerate(poly):
            try:
                ci = coef.to_int_coeffs()
            except NotRationalError as e:
                raise PipelineError(
                    f"block (a={a}, d={d}) X^{j}: non-rational coefficient ({e})") from e
            try:
                ints.append(ci.reindex(1))
            except LossyReindexError as e:
                raise PipelineError(
                    f"block (a={a}, d={d}) X^{j}: fractional exponent survives ({e})") from e
        int_blocks.append(ints)
    full = int_blocks[0]
    for blk in int_blocks[1:]:
        full = _monic_mul(full, blk)
    assert len(full) == psi(m)
    reduced = tuple(reduce_to_xy(c, curve) for c in full)
    return ModularPolynomial(N, m, reduced + (YLinearPoly(IntPoly([1])),))


def reduce_to_xy(f, curve, guard=0):
    """Express an integer q-series as P(x) + y Q(x) by greedy pole cancellation.

    At pole order k >= 2 subtract c * x^a y^b with 2a + 3b = k and b in {0,1};
    k = 1 cannot occur for a function on this group (the single cusp has a
    Weierstrass gap there); the constant handles k = 0.  The remaining series
    must vanish identically through its trusted window.
    """
    if f.s != 1:
        f = f.reindex(1)
    v = f.valuation()
    if v is None:
        return YLinearPoly(IntPoly())
    pole = max(0, -v)
    t_need = f.trunc + pole + 4
    if t_need - 1 > curve.order:
        raise InsufficientOrderError(t_need - 1, curve.order)
    xs = curve.x_series(t_need)
    ys = curve.y_series(t_need)
    # power ladder large enough for x^(pole//2) and x^((pole-3)//2) * y
    xpow = [None, xs]
    for _ in range(max(0, pole // 2 - 1)):
        xpow.append(xpow[-1] * xs)

    def monomial(a, b):
        s = None
        if a:
            s = xpow[a]
        if b:
            s = ys if s is None else s * ys
        return s

    P = IntPoly()
    Q = IntPoly()
    cur = f
    while True:
        v = cur.valuation()
        if v is None or v > 0:
            break
        c = cur.coeff(v)
        if v == 0:
            P = P + IntPoly([c])
            cur = cur - QSeries.constant(c, cur.trunc)
            continue
        k = -v
        if k == 1:
            raise PipelineError("pole order 1: input is not a function on the group")
        if k % 2 == 0:
            a, b = k // 2, 0
        else:
            a, b = (k - 3) // 2, 1
        if b:
            Q = Q + IntPoly.x_power(a, c)
        else:
            P = P + IntPoly.x_power(a, c)
        cur = cur - c * monomial(a, b)
    if v is not None:
        for k in range(max(1, cur.lo), cur.trunc):
            if cur.coeff(k):
                raise PipelineError(f"nonvanishing remainder at q^{k} after reduction")
    return YLinearPoly(P, Q)


def pq_extract(curve, m, guard=DEFAULT_GUARD):
    """The pair (P, Q) with Phi(x_N(z)) = P(x_N(z)) + y_N(z) Q(x_N(z)).

    Defined for non-square m coprime to the level; degree and lead checks
    follow the pole orders of the generators."""
    import math
    r = math.isqrt(m)
    if r * r == m:
        raise PipelineError(f"m = {m} is a perfect square; the y-linear form does not apply")
    phi = phi_polynomial(curve, m, guard)
    xgen = YLinearPoly(IntPoly([0, 1]))
    acc = phi.coeffs[-1]
    for j in range(phi.degree - 1, -1, -1):
        acc = ylinear_mul(acc, xgen, curve) + phi.coeffs[j]
    P, Q = acc.p, acc.q
    s1p = sigma1_plus(m)
    if P.degree != s1p or abs(P.lead) != 1:
        raise PipelineError(f"P degree/lead check failed: deg {P.degree}, lead {P.lead}")
    if Q.degree > s1p - 2:
        raise PipelineError(f"Q degree check failed: deg {Q.degree}")
    return P, Q
