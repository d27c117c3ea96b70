"""Binary quadratic forms: Gauss reduction, enumeration of reduced forms,
class numbers, CM roots, fixed points of elliptic transformations, and the
form-lowering map from discriminant N^2 d_K to d_K.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


class FormError(ValueError):
    pass


@dataclass(frozen=True)
class QuadForm:
    """[a, b, c] meaning a x^2 + b xy + c y^2, positive definite (a > 0)."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0:
            raise FormError(f"form {self} is not positive definite (a <= 0)")
        if self.disc >= 0:
            raise FormError(f"form {self} has non-negative discriminant")

    @property
    def disc(self):
        return self.b * self.b - 4 * self.a * self.c

    def content(self):
        return math.gcd(math.gcd(self.a, self.b), self.c)

    def is_primitive(self):
        return self.content() == 1

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def transform(self, g):
        """Substitute (x, y) -> g*(x', y'): the form gamma^T Q gamma.
        Only unimodular integer matrices are meaningful here."""
        p, q, r, s = g.p, g.q, g.r, g.s
        if g.det != 1 or any(v.denominator != 1 for v in (p, q, r, s)):
            raise FormError("transform requires an integer matrix of determinant 1")
        a2 = self(p, r)
        c2 = self(q, s)
        b2 = 2 * self.a * p * q + self.b * (p * s + q * r) + 2 * self.c * r * s
        out = QuadForm(int(a2), int(b2), int(c2))
        assert out.disc == self.disc
        return out

    def is_reduced(self):
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True


@dataclass(frozen=True)
class CMPoint:
    """tau = (-b + i sqrt(|D|)) / (2a) in the upper half plane."""

    a: int
    b: int
    D: int

    def __post_init__(self):
        if self.a <= 0 or self.D >= 0:
            raise FormError(f"invalid CM point data {self}")
        if (self.b * self.b - self.D) % (4 * self.a) != 0:
            raise FormError(f"CM point {self} is inconsistent: 4a must divide b^2-D")

    @property
    def form(self):
        return QuadForm(self.a, self.b, (self.b * self.b - self.D) // (4 * self.a))

    def imag_part(self):
        """Exact value of Im(tau) as a float-free pair: sqrt(|D|)/(2a)."""
        return (-self.D, 2 * self.a)

    def tau(self, ctx):
        """Evaluate tau with an mpmath context at its current precision."""
        return (-self.b + 1j * ctx.sqrt(-self.D)) / (2 * self.a)


@dataclass(frozen=True)
class Matrix2:
    """2x2 rational matrix [[p, q], [r, s]] with positive determinant.

    Transformations involving the Fricke matrix are stored scaled by sqrt(N),
    which leaves the Moebius action unchanged and keeps entries rational.
    """

    p: Fraction
    q: Fraction
    r: Fraction
    s: Fraction

    def __post_init__(self):
        if self.det <= 0:
            raise FormError("matrix must have positive determinant")

    @property
    def det(self):
        return self.p * self.s - self.q * self.r

    @property
    def trace(self):
        return self.p + self.s

    def __matmul__(self, other):
        return Matrix2(self.p * other.p + self.q * other.r,
                       self.p * other.q + self.q * other.s,
                       self.r * other.p + self.s * other.r,
                       self.r * other.q + self.s * other.s)

    @classmethod
    def of(cls, p, q, r, s):
        return cls(Fraction(p), Fraction(q), Fraction(r), Fraction(s))


def identity_matrix():
    return Matrix2.of(1, 0, 0, 1)


def fricke_times_omega(N, m, side="right"):
    """The composition gamma_N * diag(m,1) (side="left") or gamma_N * diag(1,m)
    (side="right"), scaled by sqrt(N) to keep entries integral."""
    if side == "right":
        return Matrix2.of(0, -m, N, 0)
    return Matrix2.of(0, -1, N * m, 0)


def reduce(Q):
    """Gauss-reduced representative of the class of Q."""
    a, b, c = Q.a, Q.b, Q.c
    while True:
        if a > c:
            a, b, c = c, -b, a
            continue
        if b > a or b <= -a:
            # normalize b into (-a, a]
            r = (a - b) // (2 * a)
            b2 = b + 2 * r * a
            c = a * r * r + b * r + c
            b = b2
            continue
        break
    if (abs(b) == a or a == c) and b < 0:
        b = -b
    out = QuadForm(a, b, c)
    assert out.disc == Q.disc and out.is_reduced()
    return out


def reduced_forms(D):
    """All primitive reduced forms of discriminant D < 0, ordered by (a, b)."""
    if D >= 0 or D % 4 not in (0, 1):
        raise FormError(f"invalid negative discriminant {D}")
    out = []
    amax = math.isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            f = QuadForm(a, b, c)
            if f.is_primitive():
                out.append(f)
    out.sort(key=lambda f: (f.a, f.b))
    return out


def class_number(D):
    return len(reduced_forms(D))


def _extend_to_unimodular(x, y):
    """A matrix [[x, q], [y, s]] with determinant 1 (gcd(x, y) must be 1)."""
    g, u, v = _xgcd(x, y)
    assert g == 1
    # x*u + y*v = 1  ->  det [[x, -v], [y, u]] = x*u + y*v = 1
    return Matrix2.of(x, -v, y, u)


def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
        old_t, t = t, old_t - qt * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def coprime_rep(Q, M):
    """An equivalent form [a', b', c'] with gcd(a', M) = 1 and the unimodular
    transform that produces it.

    Primitive forms represent integers coprime to any fixed M (they represent
    infinitely many primes), so a deterministic search over coprime pairs
    (x, y) ordered by max(|x|, |y|) terminates quickly; the bound 10*M is a
    loud failure guard, not an expected path.
    """
    if not Q.is_primitive():
        raise FormError(f"coprime_rep requires a primitive form, got {Q}")
    bound = 10 * M
    if math.gcd(Q.a, M) == 1:
        return Q, identity_matrix()
    for radius in range(1, bound + 1):
        # pairs with max(|x|, |y|) == radius
        for x, y in _ring_pairs(radius):
            if math.gcd(x, y) != 1:
                continue
            if math.gcd(Q(x, y), M) == 1:
                g = _extend_to_unimodular(x, y)
                out = Q.transform(g)
                assert math.gcd(out.a, M) == 1
                return out, g
    raise FormError(f"no coprime representative found within radius {bound}")


def _ring_pairs(r):
    for x in range(-r, r + 1):
        if abs(x) == r:
            for y in range(-r, r + 1):
                yield x, y
        else:
            yield x, r
            yield x, -r


def _crt(r1, m1, r2, m2):
    g, u, v = _xgcd(m1, m2)
    assert (r2 - r1) % g == 0
    l = m1 // g * m2
    return (r1 + (r2 - r1) // g * u % (m2 // g) * m1) % l, l


def phi_map(Q, N, d_K):
    """Lower a form of discriminant N^2 d_K to one of discriminant d_K.

    Steps: replace Q by an equivalent form with gcd(a', 2N) = 1; shift b by a
    CRT-chosen multiple of 2a' so the middle and last coefficients pick up the
    required powers of N; divide them out.
    """
    if Q.disc != N * N * d_K:
        raise FormError(f"form {Q} does not have discriminant N^2 d_K = {N * N * d_K}")
    Qp, _ = coprime_rep(Q, 2 * N)
    a, b, c = Qp.a, Qp.b, Qp.c
    l = 1 if N % 2 == 0 else 0
    Np = N >> l
    # b + 2 a k == 0 (mod N'), and mod 2^(l+2): 0 if N^2 d_K even, N if odd
    target2 = 0 if (N * N * d_K) % 4 == 0 else N % (1 << (l + 2))
    inv = pow((2 * a) % Np, -1, Np) if Np > 1 else 0
    k1 = (-b) * inv % Np if Np > 1 else 0
    # mod 2^(l+2): 2 a k == target2 - b; both sides even, divide by 2
    m2 = 1 << (l + 2)
    diff = (target2 - b) % m2
    if diff % 2:
        raise FormError(f"congruence b' + 2a'k = {target2} mod {m2} unsolvable for {Qp}")
    k2 = (diff // 2) * pow(a % (m2 // 2), -1, m2 // 2) % (m2 // 2) if m2 > 2 else 0
    k, _mod = _crt(k1, Np, k2, m2 // 2)
    b1 = b + 2 * a * k
    c1 = a * k * k + b * k + c
    if b1 % N or c1 % (N * N):
        raise FormError(f"phi map divisibility failed for {Q}: got [{a}, {b1}, {c1}]")
    out = QuadForm(a, b1 // N, c1 // (N * N))
    assert out.disc == d_K
    return out


def cm_root(Q):
    """The upper-half-plane root of Q(tau, 1) = 0."""
    return CMPoint(Q.a, Q.b, Q.disc)


def fixed_point(rho):
    """Fixed point in H of an elliptic Moebius transformation."""
    if rho.trace * rho.trace >= 4 * rho.det:
        raise FormError(f"matrix {rho} is not elliptic")
    if rho.r == 0:
        raise FormError("lower-left entry must be nonzero")
    # r z^2 + (s - p) z - q = 0; clear denominators to integers
    r, smp, mq = rho.r, rho.s - rho.p, -rho.q
    den = math.lcm(r.denominator, smp.denominator, mq.denominator)
    a, b, c = int(r * den), int(smp * den), int(mq * den)
    if a < 0:
        a, b, c = -a, -b, -c
    g = math.gcd(math.gcd(a, b), c)
    a, b, c = a // g, b // g, c // g
    return CMPoint(a, b, b * b - 4 * a * c)


def tau0_for(d_K):
    """The base CM point attached to a fundamental-type discriminant: the root
    of z^2 + z + (1-d_K)/4 for d_K = 1 mod 4, of z^2 - d_K/4 for d_K = 0 mod 4."""
    if d_K >= 0:
        raise FormError(f"discriminant must be negative, got {d_K}")
    if d_K % 4 == 1:
        return CMPoint(1, 1, d_K)
    if d_K % 4 == 0:
        return CMPoint(1, 0, d_K)
    raise FormError(f"{d_K} is not 0 or 1 mod 4")
