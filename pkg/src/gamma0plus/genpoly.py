"""Generating polynomials for CM values of x_N, factorization over Z, and
selection of the irreducible factor matching a numerically evaluated root.

The factorization is the classical dense pipeline: content/primitive split,
squarefree decomposition, factorization modulo a good small prime, Hensel
lifting above the coefficient bound, and subset recombination with early
trial division.  Degrees here stay small (<= 64), so no LLL-style
recombination is needed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import mpmath

from .exactalg import IntPoly, poly_divexact


class FactorError(ValueError):
    pass


class SelectionError(ValueError):
    pass


def generating_polynomial(P, Q, curve):
    """The monic integer polynomial P^2 - Q^2 x^3 + A PQ x - B Q^2 x^2 + C PQ
    - D Q^2 x - E Q^2 vanishing at x_N of the associated fixed points."""
    PQ = P * Q
    Q2 = Q * Q
    R = (P * P - Q2.shift(3) + curve.A * PQ.shift(1) - curve.B * Q2.shift(2)
         + curve.C * PQ - curve.D * Q2.shift(1) - curve.E * Q2)
    if R.lead != 1:
        raise FactorError(f"generating polynomial is not monic (lead {R.lead})")
    return R


# ---------------------------------------------------------------------------
# Exact polynomial helpers over Z
# ---------------------------------------------------------------------------

def _pseudo_rem(f, g):
    """lc(g)^(deg f - deg g + 1) * f mod g, computed over Z."""
    r = list(f.coeffs)
    dg = g.degree
    lg = g.lead
    while len(r) - 1 >= dg:
        if r[-1] == 0:
            r.pop()
            continue
        c = r[-1]
        k = len(r) - 1 - dg
        r = [lg * v for v in r]
        for i, b in enumerate(g.coeffs):
            r[k + i] -= c * b
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return IntPoly(r)


def poly_gcd(f, g):
    """Primitive gcd over Z with positive lead coefficient."""
    if not f:
        return g.primitive()
    if not g:
        return f.primitive()
    a, b = f.primitive(), g.primitive()
    if a.degree < b.degree:
        a, b = b, a
    while b:
        r = _pseudo_rem(a, b).primitive()
        a, b = b, r
    return a.primitive()


def squarefree_decomposition(f):
    """Yun's algorithm: [(part, multiplicity)] with f primitive."""
    parts = []
    g = poly_gcd(f, f.derivative())
    if g.degree <= 0:
        return [(f, 1)]
    w = poly_divexact(f, g)
    y = poly_divexact(f.derivative(), g)
    k = 1
    z = y - w.derivative()
    while True:
        if not z:
            if w.degree > 0:
                parts.append((w, k))
            break
        h = poly_gcd(w, z)
        if h.degree > 0:
            parts.append((h, k))
            w = poly_divexact(w, h)
            y = poly_divexact(z, h)
        else:
            y = z
        k += 1
        z = y - w.derivative()
    return parts


# ---------------------------------------------------------------------------
# GF(p)[x] helpers (dense ascending lists, coefficients in [0, p))
# ---------------------------------------------------------------------------

def _gf_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a

def _gf_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = (out[i + j] + x * y) % p
    return _gf_trim(out)

def _gf_divmod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * inv % p
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[k + i] = (a[k + i] - c * y) % p
        a.pop()
    return _gf_trim(q), _gf_trim(a)

def _gf_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _gf_divmod(a, b, p)[1]
    return _gf_monic(a, p)

def _gf_monic(a, p):
    if not a or a[-1] == 1:
        return a
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]

def _gf_pow_mod(a, e, mod, p):
    r = [1]
    a = _gf_divmod(a, mod, p)[1]
    while e:
        if e & 1:
            r = _gf_divmod(_gf_mul(r, a, p), mod, p)[1]
        a = _gf_divmod(_gf_mul(a, a, p), mod, p)[1]
        e >>= 1
    return r

def _gf_xgcd(a, b, p):
    """(g, s) with s*a = g mod b, g = gcd(a, b) monic (partial Bezout)."""
    r0, r1 = list(a), list(b)
    s0, s1 = [1], []
    while r1:
        q, r = _gf_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _gf_sub(s0, _gf_mul(q, s1, p), p)
    inv = pow(r0[-1], -1, p)
    return [x * inv % p for x in r0], [x * inv % p for x in s0]

def _gf_sub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _gf_trim(out)


def _gf_factor_squarefree(f, p):
    """Distinct-degree then equal-degree (Cantor-Zassenhaus) factorization of
    a monic squarefree polynomial mod odd p; deterministic via seeded RNG."""
    rng = random.Random("gf-factor:%d:%s" % (p, ",".join(map(str, f))))
    out = []
    x = [0, 1]
    h = x
    v = list(f)
    d = 0
    while len(v) - 1 > 0:
        d += 1
        if 2 * d > len(v) - 1:
            out.append(v)
            break
        h = _gf_pow_mod(h, p, v, p)
        g = _gf_gcd(_gf_sub(h, x, p), v, p)
        if len(g) > 1:
            out.extend(_gf_edf(g, d, p, rng))
            v, _ = _gf_divmod(v, g, p)
            h = _gf_divmod(h, v, p)[1] if len(v) > 1 else h
    return out


def _gf_edf(f, d, p, rng):
    """Split a product of degree-d irreducibles (equal-degree factorization)."""
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        r = [rng.randrange(p) for _ in range(n)]
        r = _gf_trim(r)
        if len(r) <= 1:
            continue
        g = _gf_gcd(r, f, p)
        if 1 < len(g) < len(f):
            break
        t = _gf_pow_mod(r, (p ** d - 1) // 2, f, p)
        g = _gf_gcd(_gf_sub(t, [1], p), f, p)
        if 1 < len(g) < len(f):
            break
    return _gf_edf(g, d, p, rng) + _gf_edf(_gf_divmod(f, g, p)[0], d, p, rng)


# ---------------------------------------------------------------------------
# Hensel lifting and recombination
# ---------------------------------------------------------------------------

def _bezout_certificates(gs, p):
    """sigma_i (deg < deg g_i) with sum sigma_i * prod_{j != i} g_j = 1 mod p."""
    sigmas = []
    for i, gi in enumerate(gs):
        rest = [1]
        for j, gj in enumerate(gs):
            if j != i:
                rest = _gf_divmod(_gf_mul(rest, gj, p), gi, p)[1]
        g, s = _gf_xgcd(rest, gi, p)
        if len(g) != 1:
            raise FactorError("modular factors are not pairwise coprime")
        sigmas.append(_gf_divmod(s, gi, p)[1])
    return sigmas


def _hensel_lift(f, gs, p, bound):
    """Lift monic factors gs of f/lc mod p to factors mod p^k > bound,
    linearly one power at a time; returns (lifted factors, p^k)."""
    lc = f.lead
    sigmas = _bezout_certificates(gs, p)
    G = [list(g) for g in gs]
    pk = p
    linv = pow(lc % p, -1, p)
    while pk <= bound:
        pk1 = pk * p
        prod = [lc]
        for g in G:
            prod = _poly_mul_mod(prod, g, pk1)
        e = _poly_sub_mod(list(f.coeffs), prod, pk1)
        if any(c % pk for c in e):
            raise FactorError("lift invariant broken")
        E = [(c // pk) % p for c in e]
        for i, g in enumerate(G):
            delta = _gf_divmod(_gf_mul(_gf_mul(E, [linv], p), sigmas[i], p), gs[i], p)[1]
            for k, c in enumerate(delta):
                g[k] = (g[k] + pk * c) % pk1
        pk = pk1
    return G, pk


def _poly_mul_mod(a, b, m):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = (out[i + j] + x * y) % m
    return out

def _poly_sub_mod(a, b, m):
    n = max(len(a), len(b))
    return [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % m for i in range(n)]


def _symmetric(c, m):
    c %= m
    return c - m if c > m // 2 else c


def _mignotte_bound(f):
    n = f.degree
    norm2 = math.isqrt(sum(c * c for c in f.coeffs)) + 1
    return (1 << n) * norm2 * abs(f.lead)


def _choose_prime(f):
    """Smallest odd prime with unit lead and squarefree reduction."""
    p = 3
    while True:
        if _is_prime(p) and f.lead % p:
            fp = _gf_monic([c % p for c in f.coeffs], p)
            dfp = _gf_trim([i * c % p for i, c in enumerate(fp)][1:])
            if dfp and len(_gf_gcd(fp, dfp, p)) == 1:
                return p
        p += 2


def _is_prime(n):
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def _factor_squarefree_primitive(f):
    """Irreducible factors of a primitive squarefree polynomial, positive lead."""
    if f.degree == 1:
        return [f]
    p = _choose_prime(f)
    fp = _gf_monic([c % p for c in f.coeffs], p)
    modular = _gf_factor_squarefree(fp, p)
    if len(modular) == 1:
        return [f]
    modular.sort()
    bound = 2 * _mignotte_bound(f) + 1
    lifted, pk = _hensel_lift(f, modular, p, bound)
    # subset recombination, smallest cardinality first, lexicographic within
    remaining = list(range(len(lifted)))
    out = []
    rest = f
    s = 1
    while 2 * s <= len(remaining):
        found = False
        for combo in _combinations(remaining, s):
            cand = [rest.lead]
            for i in combo:
                cand = _poly_mul_mod(cand, lifted[i], pk)
            g = IntPoly([_symmetric(c, pk) for c in cand]).primitive()
            q = _trial_div(rest, g)
            if q is not None:
                out.append(g)
                rest = q
                remaining = [i for i in remaining if i not in combo]
                found = True
                break
        if not found:
            s += 1
    if rest.degree > 0:
        out.append(rest.primitive())
    return out


def _combinations(pool, s):
    import itertools
    return itertools.combinations(pool, s)


def _trial_div(f, g):
    """Exact quotient f/g over Z, or None."""
    if g.degree <= 0 or g.degree > f.degree:
        return None
    if f.coeffs[0] and g.coeffs[0] and f.coeffs[0] % g.coeffs[0]:
        return None
    if f.lead % g.lead:
        return None
    try:
        return poly_divexact(f, g)
    except ValueError:
        return None


@dataclass(frozen=True)
class FactoredPoly:
    """content * prod(factor^multiplicity), factors irreducible primitive
    with positive lead, sorted by (degree, coefficients)."""

    content: int
    factors: tuple  # ((IntPoly, int), ...)

    def expand(self):
        out = IntPoly([self.content])
        for g, e in self.factors:
            out = out * g ** e
        return out

    def __iter__(self):
        return iter(self.factors)


def factor_over_z(f):
    """Complete factorization over Z."""
    if not f:
        raise FactorError("cannot factor the zero polynomial")
    content = f.content()
    if f.lead < 0:
        content = -content
    prim = f.divexact(content)
    factors = []
    for part, mult in squarefree_decomposition(prim):
        for g in _factor_squarefree_primitive(part):
            factors.append((g, mult))
    factors.sort(key=lambda ge: (ge[0].degree, ge[0].coeffs))
    fp = FactoredPoly(content, tuple(factors))
    assert fp.expand() == f, "factorization does not re-multiply to the input"
    return fp


def select_factor_by_root(fp, value, tol=mpmath.mpf("1e-20")):
    """The unique irreducible factor vanishing at the given high-precision
    value, measured relative to the factor's coefficient scale; zero or
    several matches mean the evaluation precision is too low."""
    v = getattr(value, "value", value)
    matches = []
    residuals = []
    for g, _ in fp.factors:
        scale = mpmath.mpf(g.max_norm()) * max(1, abs(v)) ** g.degree
        r = abs(g(v)) / scale
        residuals.append((g, r))
        if r < tol:
            matches.append(g)
    if len(matches) != 1:
        detail = ", ".join(f"deg {g.degree}: {mpmath.nstr(r, 3)}" for g, r in residuals)
        raise SelectionError(
            f"{len(matches)} factors match at tolerance {mpmath.nstr(tol, 3)} ({detail})")
    return matches[0]
