"""Independent oracles used by the tests.

Everything here recomputes expected values through a different route than the
library code it checks: schoolbook convolutions, orbit-graph partitions of
quadratic forms, symmetric-function (Newton) identities for the modular
polynomial, finite-field enumerations, and numeric Galois embeddings.
"""

import math
from fractions import Fraction


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------

def conv_coefficient(a_map, b_map, k):
    """Coefficient of q^k in the product of two exponent->coeff dicts."""
    total = 0
    for i, ca in a_map.items():
        cb = b_map.get(k - i)
        if cb:
            total += ca * cb
    return total


# ---------------------------------------------------------------------------
# quadratic forms
# ---------------------------------------------------------------------------

def _neighbors(f):
    a, b, c = f
    yield (c, -b, a)
    yield (a, b + 2 * a, a + b + c)
    yield (a, b - 2 * a, a - b + c)


def orbit_class_count(D, bound=None):
    """Number of classes of primitive forms of discriminant D, by building
    the orbit graph under the two standard moves and counting components."""
    K = bound or -D
    forms = set()
    for a in range(1, K + 1):
        for b in range(-2 * K, 2 * K + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if 1 <= c <= K and math.gcd(math.gcd(a, b), c) == 1:
                forms.add((a, b, c))
    seen = set()
    comps = 0
    for f in sorted(forms):
        if f in seen:
            continue
        comps += 1
        stack = [f]
        seen.add(f)
        while stack:
            g = stack.pop()
            for h in _neighbors(g):
                if h in forms and h not in seen:
                    seen.add(h)
                    stack.append(h)
    return comps


def orbit_reduced_search(f, steps=60):
    """A reduced form equivalent to f, found by blind breadth-first search
    over the two moves (no reduction algorithm involved)."""
    from gamma0plus.quadforms import QuadForm
    start = (f.a, f.b, f.c)
    frontier = [start]
    seen = {start}
    for _ in range(steps):
        nxt = []
        for g in frontier:
            q = QuadForm(*g)
            if q.is_reduced():
                return q
            for h in _neighbors(g):
                if h[0] > 0 and h not in seen and max(map(abs, h)) <= 4 * max(map(abs, start)):
                    seen.add(h)
                    nxt.append(h)
        frontier = sorted(nxt)
    raise AssertionError("no reduced form found by blind search")


# ---------------------------------------------------------------------------
# cyclotomic trace via numeric embeddings
# ---------------------------------------------------------------------------

def numeric_trace(c, dps=40):
    """Trace of a cyclotomic integer summed over the numeric embeddings."""
    import mpmath
    with mpmath.mp.workdps(dps):
        total = mpmath.mpc(0)
        for r in range(1, c.d + 1):
            if math.gcd(r, c.d) != 1:
                continue
            z = mpmath.exp(2j * mpmath.pi * r / c.d)
            total += sum(v * z ** i for i, v in enumerate(c.comps))
        assert abs(total.imag) < 1e-20
        return int(mpmath.nint(total.real))


def galois_conjugate(c, r):
    """sigma_r(c) for gcd(r, d) = 1, mapping each root of unity to its r-th power."""
    from gamma0plus.exactalg import CycInt
    out = CycInt.from_int(c.d, 0)
    for i, v in enumerate(c.comps):
        if v:
            out = out + v * CycInt.zeta(c.d, i * r)
    return out


# ---------------------------------------------------------------------------
# modular polynomial coefficients through power sums (Newton identities)
# ---------------------------------------------------------------------------

def _unit_sum(d, g, M):
    """sum of zeta_d^(bM) over b mod d with gcd(b, g) = 1 (g divides d)."""
    total = 0
    for e in _divisors(g):
        mu = _moebius(e)
        if mu:
            total += mu * (d // e) * (1 if M % (d // e) == 0 else 0)
    return total


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def _moebius(n):
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    if n > 1:
        out = -out
    return out


def phi_coefficient_series(curve, m, guard=16):
    """Integer q-series (exponent->coeff dicts) of the X^j coefficients of the
    modular polynomial, computed via power sums over the coset family and the
    Newton identities; fully independent of cyclotomic products.

    All arithmetic is exact on dicts; truncation happens only at the end, at
    a bound where every retained coefficient is provably complete."""
    from gamma0plus.modpoly import omega_set, psi, sigma1_plus
    s1p = sigma1_plus(m)
    degree = psi(m)
    t_q = 2 * s1p + guard + 1
    # each Newton level can reach 2*s1p below its inputs, so the starting
    # window must leave that much headroom per level
    e_need = t_q + 2 * s1p * (degree + 1) + 2 * degree + 4
    blocks = {}
    for w in omega_set(m):
        blocks.setdefault((w.a, w.d), 0)
        blocks[w.a, w.d] += 1
    power_sums = [None] + [dict() for _ in range(degree)]
    for (a, d), _count in blocks.items():
        g = math.gcd(a, d)
        # base series in v = q^(a/d); exact through v-exponent n_hi
        n_hi = (e_need * d) // a + 2
        assert n_hi <= curve.order, "curve record too short for the oracle"
        base = {n: curve.x_coeff(n) for n in range(-2, n_hi + 1) if curve.x_coeff(n)}
        powv = dict(base)
        for k in range(1, degree + 1):
            if k > 1:
                nxt = {}
                for i, ci in powv.items():
                    for j, cj in base.items():
                        if j <= n_hi - 2 * (k - 1):  # keep the power complete
                            nxt[i + j] = nxt.get(i + j, 0) + ci * cj
                powv = nxt
            for M, cM in powv.items():
                u = _unit_sum(d, g, M)
                if u and cM:
                    e = Fraction(M * a, d)
                    if e <= e_need:
                        ps = power_sums[k]
                        ps[e] = ps.get(e, 0) + u * cM
    # Newton: k e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i, with the validity
    # window shrinking by 2*s1p per level
    windows = [Fraction(e_need - 2 * s1p * k) for k in range(degree + 1)]
    elem = [dict() for _ in range(degree + 1)]
    elem[0] = {Fraction(0): 1}
    for k in range(1, degree + 1):
        acc = {}
        for i in range(1, k + 1):
            sign = 1 if i % 2 == 1 else -1
            for e1, c1 in elem[k - i].items():
                for e2, c2 in power_sums[i].items():
                    e = e1 + e2
                    if e < windows[k]:
                        acc[e] = acc.get(e, 0) + sign * c1 * c2
        ek = {}
        for e, c in acc.items():
            q, r = divmod(c, k)
            assert r == 0, f"Newton identity division failed at q^{e}"
            if q:
                ek[e] = q
        elem[k] = ek
    out = []
    for j in range(degree):
        k = degree - j
        sign = 1 if k % 2 == 0 else -1
        ser = {}
        for e, c in elem[k].items():
            assert e.denominator == 1, f"fractional exponent {e} survives"
            if c:
                ser[int(e)] = sign * c
        out.append(ser)
    return out, int(windows[degree])


# ---------------------------------------------------------------------------
# finite fields
# ---------------------------------------------------------------------------

def gf4_point_count(curve):
    """Projective point count over the field with 4 elements; elements are
    pairs (u, v) = u + v*w with w^2 = w + 1."""
    els = [(u, v) for u in range(2) for v in range(2)]

    def add(x, y):
        return ((x[0] ^ y[0]), (x[1] ^ y[1]))

    def mul(x, y):
        # (a + bw)(c + dw) = ac + (ad + bc)w + bd w^2, w^2 = w + 1
        a, b = x
        c, d = y
        lo = (a * c) ^ (b * d)
        hi = (a * d) ^ (b * c) ^ (b * d)
        return (lo & 1, hi & 1)

    def scale(n, x):
        return x if n % 2 else (0, 0)

    a1, a2, a3, a4, a6 = -curve.A, curve.B, -curve.C, curve.D, curve.E
    count = 1  # infinity
    for x in els:
        x2 = mul(x, x)
        x3 = mul(x2, x)
        rhs = add(add(x3, scale(a2, x2)), add(scale(a4, x), scale(a6, (1, 0))))
        for y in els:
            lhs = add(mul(y, y), add(scale(a1, mul(x, y)), scale(a3, y)))
            if lhs == rhs:
                count += 1
    return count
