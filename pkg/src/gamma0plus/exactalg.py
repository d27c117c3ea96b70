"""Exact arithmetic substrate: integer polynomials, cyclotomic integers,
truncated fractional-power Laurent series, and y-linear polynomials.

Everything here is immutable after construction and all operations are pure,
so values can be shared freely across threads.
"""

from __future__ import annotations

import math
from fractions import Fraction


class RingError(ValueError):
    """Coefficient rings of two operands cannot be combined."""


class LossyReindexError(ValueError):
    """Reindexing a series would drop a nonzero coefficient."""


class NotRationalError(ValueError):
    """A cyclotomic integer expected to be rational has a nonzero component."""

    def __init__(self, index, value):
        super().__init__(f"non-rational cyclotomic element: component {index} = {value}")
        self.index = index
        self.value = value


# ---------------------------------------------------------------------------
# Integer polynomials
# ---------------------------------------------------------------------------

class IntPoly:
    """Dense univariate polynomial over Z, coefficients ascending by degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, *a):
        raise AttributeError("IntPoly is immutable")

    @classmethod
    def x_power(cls, k, coeff=1):
        return cls([0] * k + [coeff])

    @property
    def degree(self):
        """Degree, with deg 0 = -1 by convention."""
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPoly([other])
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __neg__(self):
        return IntPoly([-c for c in self.coeffs])

    def __add__(self, other):
        if isinstance(other, int):
            other = IntPoly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, IntPoly) else IntPoly([-other]))

    def __rsub__(self, other):
        return IntPoly([other]) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly([other * c for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        r = IntPoly([1])
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def shift(self, k):
        """Multiply by x^k (k >= 0)."""
        if not self.coeffs:
            return self
        return IntPoly((0,) * k + self.coeffs)

    def derivative(self):
        return IntPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def content(self):
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    def primitive(self):
        """Primitive part with positive lead coefficient."""
        g = self.content()
        if g == 0:
            return self
        if self.lead < 0:
            g = -g
        return IntPoly([c // g for c in self.coeffs])

    def divexact(self, d):
        """Divide every coefficient by the integer d; d must divide exactly."""
        out = []
        for c in self.coeffs:
            q, r = divmod(c, d)
            if r:
                raise ValueError(f"coefficient {c} not divisible by {d}")
            out.append(q)
        return IntPoly(out)

    def __call__(self, v):
        """Evaluate by Horner; works for int, Fraction, mpmath types."""
        r = 0
        for c in reversed(self.coeffs):
            r = r * v + c
        return r

    def max_norm(self):
        return max((abs(c) for c in self.coeffs), default=0)

    def pretty(self, var="x"):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                t = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else str(abs(c)) + "*"
                t = f"{mag}{var}" + (f"^{i}" if i > 1 else "")
            parts.append(("- " if c < 0 else "+ " if parts else "") + t)
        s = " ".join(parts)
        return "-" + s[2:] if s.startswith("- ") else s

    def __repr__(self):
        return f"IntPoly({self.pretty()})"


def poly_divmod(f, g):
    """Division with remainder over Q; returns (quotient, remainder) as
    Fraction-coefficient lists.  Used for exact checks, not kept exact-Z."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in f.coeffs]
    q = [Fraction(0)] * max(0, len(r) - len(g.coeffs) + 1)
    gl = Fraction(g.lead)
    while len(r) >= len(g.coeffs):
        c = r[-1] / gl
        k = len(r) - len(g.coeffs)
        q[k] = c
        for i, b in enumerate(g.coeffs):
            r[k + i] -= c * b
        while r and r[-1] == 0:
            r.pop()
        if not r:
            break
    return q, r


def poly_divexact(f, g):
    """Exact polynomial quotient f/g over Z; raises if not divisible."""
    q, r = poly_divmod(f, g)
    if r:
        raise ValueError("polynomials do not divide exactly")
    if any(c.denominator != 1 for c in q):
        raise ValueError("quotient is not integral")
    return IntPoly([int(c) for c in q])


# ---------------------------------------------------------------------------
# Cyclotomic integers
# ---------------------------------------------------------------------------

def _euler_phi(d):
    n, r, p = d, d, 2
    while p * p <= n:
        if n % p == 0:
            r -= r // p
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        r -= r // n
    return r


def cyclotomic_poly(d):
    """Coefficients of the d-th cyclotomic polynomial, by iterated exact
    division of t^d - 1 by the lower-order cyclotomic polynomials."""
    f = IntPoly([-1] + [0] * (d - 1) + [1])
    for e in range(1, d):
        if d % e == 0:
            f = poly_divexact(f, IntPoly(cyclotomic_poly(e)))
    return list(f.coeffs)


class _CycRing:
    """Cached arithmetic tables for Z[zeta_d] modulo the d-th cyclotomic polynomial."""

    _cache = {}

    def __new__(cls, d):
        if d in cls._cache:
            return cls._cache[d]
        self = super().__new__(cls)
        self.d = d
        self.mod = cyclotomic_poly(d)
        self.phi = len(self.mod) - 1
        # rows[j] = t^(phi + j) reduced mod Phi_d; products need exponents up
        # to 2 phi - 2, the zeta table up to d - 1
        top_exp = max(2 * self.phi - 2, d - 1)
        rows = []
        cur = [-c for c in self.mod[:-1]]  # t^phi
        rows.append(tuple(cur))
        for _ in range(top_exp - self.phi):
            cur = [0] + cur
            top = cur.pop()
            if top:
                cur = [c - top * m for c, m in zip(cur, self.mod[:-1])]
            rows.append(tuple(cur))
        self.high_rows = rows
        # powers t^e mod Phi_d for 0 <= e < d (zeta exponent table)
        pw = []
        for e in range(d):
            v = [0] * self.phi
            if e < self.phi:
                v[e] = 1
            else:
                v = list(rows[e - self.phi])
            pw.append(tuple(v))
        self.zeta_pow = pw
        cls._cache[d] = self
        return self

    def reduce(self, raw):
        """Reduce a coefficient list of length <= 2*phi-1 mod Phi_d."""
        out = list(raw[:self.phi]) + [0] * max(0, self.phi - len(raw))
        for j, c in enumerate(raw[self.phi:]):
            if c:
                row = self.high_rows[j]
                for i in range(self.phi):
                    if row[i]:
                        out[i] += c * row[i]
        return out


class CycInt:
    """Element of Z[zeta_d], stored modulo the d-th cyclotomic polynomial.

    Rationality is therefore a direct component test: an element is a
    rational integer iff every component beyond the constant one vanishes.
    """

    __slots__ = ("d", "comps")

    def __init__(self, d, comps):
        ring = _CycRing(d)
        comps = tuple(comps)
        assert len(comps) == ring.phi, (d, len(comps))
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "comps", comps)

    def __setattr__(self, *a):
        raise AttributeError("CycInt is immutable")

    @classmethod
    def from_int(cls, d, n):
        ring = _CycRing(d)
        return cls(d, (n,) + (0,) * (ring.phi - 1))

    @classmethod
    def zeta(cls, d, e=1):
        """zeta_d^e as an element of Z[zeta_d]."""
        return cls(d, _CycRing(d).zeta_pow[e % d])

    def _coerce(self, other):
        if isinstance(other, int):
            return self, CycInt.from_int(self.d, other)
        if not isinstance(other, CycInt):
            return NotImplemented, None
        if other.d == self.d:
            return self, other
        if self.d % other.d == 0:
            return self, other.lift_to(self.d)
        if other.d % self.d == 0:
            return self.lift_to(other.d), other
        raise RingError(f"incompatible cyclotomic orders {self.d} and {other.d}")

    def lift_to(self, d2):
        """Embed Z[zeta_d] into Z[zeta_d2] via zeta_d = zeta_d2^(d2/d)."""
        if d2 == self.d:
            return self
        if d2 % self.d != 0:
            raise RingError(f"order {self.d} does not embed in {d2}")
        k = d2 // self.d
        ring2 = _CycRing(d2)
        raw = [0] * ((ring2.phi - 1) * 2 + 1)
        for i, c in enumerate(self.comps):
            if c:
                row = ring2.zeta_pow[(i * k) % d2]
                for j in range(ring2.phi):
                    if row[j]:
                        raw[j] += c * row[j]
        return CycInt(d2, ring2.reduce(raw))

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return CycInt(a.d, tuple(x + y for x, y in zip(a.comps, b.comps)))

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.d, tuple(-x for x in self.comps))

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return CycInt(a.d, tuple(x - y for x, y in zip(a.comps, b.comps)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(self.d, tuple(other * x for x in self.comps))
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        ring = _CycRing(a.d)
        n = ring.phi
        raw = [0] * (2 * n - 1)
        ac, bc = a.comps, b.comps
        for i in range(n):
            ai = ac[i]
            if ai:
                for j in range(n):
                    if bc[j]:
                        raw[i + j] += ai * bc[j]
        return CycInt(a.d, ring.reduce(raw))

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_rational() and self.comps[0] == other
        if not isinstance(other, CycInt):
            return NotImplemented
        a, b = self._coerce(other)
        return a.comps == b.comps

    def __hash__(self):
        if self.is_rational():
            return hash(self.comps[0])
        return hash((self.d, self.comps))

    def __bool__(self):
        return any(self.comps)

    def is_rational(self):
        return not any(self.comps[1:])

    def __repr__(self):
        return f"CycInt(d={self.d}, {list(self.comps)})"


def cyc_to_int(c):
    """Extract the rational integer from a CycInt; reject non-rational input
    with the offending component index (that signals a pipeline bug)."""
    if isinstance(c, int):
        return c
    for i, v in enumerate(c.comps[1:], start=1):
        if v:
            raise NotRationalError(i, v)
    return c.comps[0]


# ---------------------------------------------------------------------------
# Truncated Laurent series in q^(1/s)
# ---------------------------------------------------------------------------

def _ring_of(c):
    return c.d if isinstance(c, CycInt) else None


class QSeries:
    """Truncated Laurent series sum c_k q^(k/s), k = lo .. trunc-1.

    `trunc` is exclusive: the series is known modulo q^(trunc/s).  The stored
    window always spans [lo, trunc) densely.  Coefficients are ints, or
    CycInt of a common order (mixed input is embedded on construction).
    """

    __slots__ = ("s", "lo", "coeffs", "trunc")

    def __init__(self, s, lo, coeffs, trunc):
        coeffs = list(coeffs)
        if trunc <= lo:
            raise ValueError(f"empty window: trunc {trunc} <= lo {lo}")
        if len(coeffs) != trunc - lo:
            raise ValueError("coefficient count does not match window")
        # normalize ring: find a common order (must be divisibility-compatible)
        orders = {_ring_of(c) for c in coeffs} - {None}
        if orders:
            top = None
            for o in orders:
                if top is None:
                    top = o
                elif top % o == 0:
                    pass
                elif o % top == 0:
                    top = o
                else:
                    raise RingError(f"incompatible cyclotomic orders {top} and {o}")
            coeffs = [c.lift_to(top) if isinstance(c, CycInt) else CycInt.from_int(top, c)
                      for c in coeffs]
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, *a):
        raise AttributeError("QSeries is immutable")

    @property
    def ring_order(self):
        for c in self.coeffs:
            if isinstance(c, CycInt):
                return c.d
        return None

    @classmethod
    def from_coeff_map(cls, s, coeff_map, trunc):
        if not coeff_map:
            return cls(s, trunc - 1, [0], trunc)
        lo = min(coeff_map)
        return cls(s, lo, [coeff_map.get(k, 0) for k in range(lo, trunc)], trunc)

    @classmethod
    def constant(cls, c, trunc, s=1):
        """The exact constant c carried on the window [0, trunc)."""
        return cls(s, 0, [c] + [0] * (trunc - 1), trunc)

    def coeff(self, k):
        """Coefficient of q^(k/s); 0 below the window, error at/above trunc."""
        if k >= self.trunc:
            raise IndexError(f"exponent {k}/{self.s} is beyond the trusted window")
        if k < self.lo:
            return 0
        return self.coeffs[k - self.lo]

    def valuation(self):
        """Smallest exponent numerator with a nonzero coefficient (None if 0)."""
        for k in range(self.lo, self.trunc):
            if self.coeffs[k - self.lo]:
                return k
        return None

    def is_zero(self):
        return self.valuation() is None

    def _common(self, other):
        s = self.s * other.s // math.gcd(self.s, other.s)
        return self.reindex(s), other.reindex(s)

    def __add__(self, other):
        a, b = self._common(other)
        lo = min(a.lo, b.lo)
        trunc = min(a.trunc, b.trunc)
        return QSeries(a.s, lo, [a.coeff(k) + b.coeff(k) for k in range(lo, trunc)], trunc)

    def __sub__(self, other):
        a, b = self._common(other)
        lo = min(a.lo, b.lo)
        trunc = min(a.trunc, b.trunc)
        return QSeries(a.s, lo, [a.coeff(k) - b.coeff(k) for k in range(lo, trunc)], trunc)

    def __neg__(self):
        return QSeries(self.s, self.lo, [-c for c in self.coeffs], self.trunc)

    def __mul__(self, other):
        if isinstance(other, (int, CycInt)):
            return QSeries(self.s, self.lo, [other * c for c in self.coeffs], self.trunc)
        a, b = self._common(other)
        # sound window: error of a is O(q^(Ta/s)) and multiplies b's lead
        lo = a.lo + b.lo
        trunc = min(a.trunc + b.lo, b.trunc + a.lo)
        out = [0] * (trunc - lo)
        for i, ca in enumerate(a.coeffs):
            if ca:
                ka = a.lo + i
                jmax = min(len(b.coeffs), trunc - ka - b.lo)
                for j in range(jmax):
                    cb = b.coeffs[j]
                    if cb:
                        out[ka + b.lo + j - lo] += ca * cb
        return QSeries(a.s, lo, out, trunc)

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by q^(k/s)."""
        return QSeries(self.s, self.lo + k, self.coeffs, self.trunc + k)

    def reindex(self, s_new):
        """Re-express in q^(1/s_new); exact, rejects lossy down-conversion."""
        if s_new == self.s:
            return self
        if s_new % self.s == 0:
            f = s_new // self.s
            lo = self.lo * f
            trunc = self.trunc * f
            out = [0] * (trunc - lo)
            for i, c in enumerate(self.coeffs):
                out[i * f] = c
            return QSeries(s_new, lo, out, trunc)
        # lossy direction: representable exponents k have k*s_new % s == 0
        for k in range(self.lo, self.trunc):
            if self.coeffs[k - self.lo] and (k * s_new) % self.s:
                raise LossyReindexError(
                    f"nonzero coefficient at q^{k}/{self.s} unrepresentable in s={s_new}")
        lo = math.ceil(self.lo * s_new / self.s)
        trunc = math.ceil(self.trunc * s_new / self.s)
        out = [0] * (trunc - lo)
        for k in range(self.lo, self.trunc):
            c = self.coeffs[k - self.lo]
            if c:
                out[k * s_new // self.s - lo] = c
        return QSeries(s_new, lo, out, trunc)

    def to_int_coeffs(self):
        """Assert every coefficient rational and return an integer-coefficient copy."""
        return QSeries(self.s, self.lo, [cyc_to_int(c) for c in self.coeffs], self.trunc)

    def __repr__(self):
        terms = []
        for k in range(self.lo, min(self.trunc, self.lo + 8)):
            c = self.coeff(k)
            if c:
                terms.append(f"{c}*q^({k}/{self.s})" if self.s > 1 else f"{c}*q^{k}")
        body = " + ".join(terms) or "0"
        return f"QSeries({body} + O(q^({self.trunc}/{self.s})))"


def series_arith(a, b, op):
    """Exact series arithmetic: op in {'add','sub','mul'}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def series_reindex(a, s_new):
    return a.reindex(s_new)


# ---------------------------------------------------------------------------
# y-linear polynomials P(x) + y*Q(x)
# ---------------------------------------------------------------------------

class YLinearPoly:
    """Pair (p, q) denoting p(x) + y*q(x); products are reduced through the
    curve's cubic so the y-degree never exceeds one."""

    __slots__ = ("p", "q")

    def __init__(self, p, q=IntPoly()):
        if not isinstance(p, IntPoly):
            p = IntPoly(p)
        if not isinstance(q, IntPoly):
            q = IntPoly(q)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def __setattr__(self, *a):
        raise AttributeError("YLinearPoly is immutable")

    def __eq__(self, other):
        return isinstance(other, YLinearPoly) and self.p == other.p and self.q == other.q

    def __hash__(self):
        return hash((self.p, self.q))

    def __add__(self, other):
        return YLinearPoly(self.p + other.p, self.q + other.q)

    def __sub__(self, other):
        return YLinearPoly(self.p - other.p, self.q - other.q)

    def __neg__(self):
        return YLinearPoly(-self.p, -self.q)

    def scale(self, c):
        return YLinearPoly(self.p * c, self.q * c)

    def mul(self, other, curve):
        return ylinear_mul(self, other, curve)

    def __repr__(self):
        return f"YLinearPoly(({self.p.pretty()}) + y*({self.q.pretty()}))"


def ylinear_mul(a, b, curve):
    """Product of two y-linear polynomials with y^2 rewritten through the
    curve equation y^2 = x^3 + A xy + B x^2 + C y + D x + E."""
    pp = a.p * b.p
    qq = a.q * b.q
    cross = a.p * b.q + a.q * b.p
    if not qq:
        return YLinearPoly(pp, cross)
    cubic = IntPoly([curve.E, curve.D, curve.B, 1])          # x^3 + B x^2 + D x + E
    ylin = IntPoly([curve.C, curve.A])                       # A x + C
    return YLinearPoly(pp + cubic * qq, cross + ylin * qq)
