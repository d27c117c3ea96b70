import random

import pytest

from gamma0plus import fixtures
from gamma0plus.exactalg import CycInt, IntPoly, QSeries, YLinearPoly, cyc_to_int
from gamma0plus.modpoly import (InsufficientOrderError, OmegaMatrix,
                                PipelineError, omega_pullback, omega_set,
                                phi_polynomial, pq_extract, psi, reduce_to_xy,
                                sigma1_plus, _mul_in_factor)

import oracles


class TestOmegaSet:
    def test_m2(self):
        assert set((w.a, w.b, w.d) for w in omega_set(2)) == {(2, 0, 1), (1, 0, 2), (1, 1, 2)}
        assert psi(2) == 3

    def test_m1_identity(self):
        assert omega_set(1) == [OmegaMatrix(1, 0, 1)]

    def test_m4_brute(self):
        brute = [(a, b, d) for a in range(1, 5) for d in range(1, 5) for b in range(d)
                 if a * d == 4 and _gcd3(a, b, d) == 1]
        assert psi(4) == 6 == len(brute)
        assert [(w.a, w.b, w.d) for w in omega_set(4)] == sorted(brute)

    def test_membership_conditions(self):
        for m in (6, 12, 18):
            for w in omega_set(m):
                assert w.a * w.d == m and 0 <= w.b < w.d and _gcd3(w.a, w.b, w.d) == 1


class TestSigma1Plus:
    @pytest.mark.parametrize("m,val", [(2, 4), (1, 1), (6, 18), (3, 6), (5, 10), (7, 14)])
    def test_values(self, m, val):
        assert sigma1_plus(m) == val


class TestPullback:
    def test_identity_matrix(self, curve37):
        s = omega_pullback(curve37, OmegaMatrix(1, 0, 1), 20)
        xs = curve37.x_series(20)
        assert s.s == 1 and s.coeffs == xs.coeffs

    def test_q_to_qm(self, curve37):
        s = omega_pullback(curve37, OmegaMatrix(3, 0, 1), 30)
        assert s.ring_order is None
        for n in range(-2, 10):
            assert s.coeff(3 * n) == curve37.x_coeff(n)

    def test_zeta_weighting(self, curve37):
        s = omega_pullback(curve37, OmegaMatrix(1, 1, 2), 10)
        c1 = curve37.x_coeff(-1)
        assert c1 == 2
        assert s.coeff(-1) == CycInt.from_int(2, -c1)  # zeta_2^(-1) = -1
        assert s.coeff(-2) == CycInt.from_int(2, curve37.x_coeff(-2))

    def test_insufficient_order(self, curve141):
        with pytest.raises(InsufficientOrderError):
            omega_pullback(curve141, OmegaMatrix(1, 0, 2), curve141.order + 10)


class TestPhiPolynomial:
    def test_monic_and_degree(self, curve37):
        phi = phi_polynomial(curve37, 2)
        assert phi.degree == psi(2) == 3
        assert phi.coeffs[-1] == YLinearPoly(IntPoly([1]))

    def test_galois_rationality_inner_block(self, curve37):
        # the (a, d) = (1, 2) block product has rational coefficients
        t_q = 2 * sigma1_plus(2) + 17
        poly = []
        for b in (0, 1):
            poly = _mul_in_factor(poly, omega_pullback(curve37, OmegaMatrix(1, b, 2), t_q))
        for coef in poly:
            for c in coef.coeffs:
                cyc_to_int(c)  # raises on any non-rational coefficient

    def test_sub_leading_coefficient_is_minus_sum(self, curve37):
        # X^(psi-1) coefficient re-expanded equals -sum of the pullbacks
        phi = phi_polynomial(curve37, 2)
        e1 = phi.coeffs[psi(2) - 1]
        t_q = 8
        xs = curve37.x_series(t_q)
        ys = curve37.y_series(t_q)
        re_exp = _expand_ylinear(e1, xs, ys)
        total = None
        for w in omega_set(2):
            s = omega_pullback(curve37, w, t_q).reindex(2)
            total = s if total is None else total + s
        total = total.to_int_coeffs().reindex(1)
        lo = max(re_exp.lo, total.lo)
        hi = min(re_exp.trunc, total.trunc)
        assert hi - lo >= 8
        for k in range(lo, hi):
            assert re_exp.coeff(k) == -total.coeff(k)

    @pytest.mark.parametrize("N,m", [(37, 2), (141, 2), (155, 3), (37, 3)])
    def test_powersum_oracle_agreement(self, registry, N, m):
        curve = registry.get(N)
        phi = phi_polynomial(curve, m)
        series, t_q = oracles.phi_coefficient_series(curve, m)
        xs = curve.x_series(t_q)
        ys = curve.y_series(t_q)
        for j in range(phi.degree):
            re_exp = _expand_ylinear(phi.coeffs[j], xs, ys)
            want = series[j]
            for k in range(re_exp.lo, min(re_exp.trunc, t_q - 2 * sigma1_plus(m))):
                assert re_exp.coeff(k) == want.get(k, 0), (N, m, j, k)

    def test_square_m_allowed(self, curve37):
        phi = phi_polynomial(curve37, 4)
        assert phi.degree == 6

    def test_non_coprime_rejected(self, curve141):
        with pytest.raises(PipelineError):
            phi_polynomial(curve141, 3)


class TestReduceToXY:
    def test_x_series_reduces_to_x(self, curve37):
        out = reduce_to_xy(curve37.x_series(30), curve37)
        assert out == YLinearPoly(IntPoly([0, 1]), IntPoly())

    def test_y_series_reduces_to_y(self, curve37):
        out = reduce_to_xy(curve37.y_series(30), curve37)
        assert out == YLinearPoly(IntPoly(), IntPoly([1]))

    def test_x2y_round_trip(self, curve37):
        xs = curve37.x_series(40)
        ys = curve37.y_series(40)
        f = xs * xs * ys
        out = reduce_to_xy(f, curve37)
        re_exp = _expand_ylinear(out, curve37.x_series(40), curve37.y_series(40))
        for k in range(f.lo, min(f.trunc, re_exp.trunc)):
            assert f.coeff(k) == re_exp.coeff(k)

    def test_random_monomials_round_trip(self, registry):
        curve = registry.get(79)
        rng = random.Random(79)
        xs = curve.x_series(60)
        ys = curve.y_series(60)
        for _ in range(12):
            a = rng.randrange(0, 7)
            b = rng.randrange(0, 2)
            f = QSeries.constant(rng.randrange(1, 5), 40)
            for _i in range(a):
                f = f * xs
            if b:
                f = f * ys
            out = reduce_to_xy(f, curve)
            expect_p = IntPoly.x_power(a, f.coeff(f.valuation())) if not b else IntPoly()
            if not b:
                assert out == YLinearPoly(expect_p, IntPoly())
            else:
                assert out == YLinearPoly(IntPoly(), IntPoly.x_power(a, f.coeff(f.valuation())))

    def test_pole_order_one_rejected(self, curve37):
        f = QSeries(1, -1, [1] + [0] * 20, 20)
        with pytest.raises(PipelineError, match="pole order 1"):
            reduce_to_xy(f, curve37)

    def test_pole_residual_after_x_is_order_one(self, curve37):
        # q^-2 whose q^-1 coefficient disagrees with x leaves a pole of order 1
        f = QSeries(1, -2, [1, 7] + [3] * 20, 20)
        with pytest.raises(PipelineError, match="pole order 1"):
            reduce_to_xy(f, curve37)

    def test_unreducible_remainder_rejected(self, curve37):
        # agree with x through the pole, then diverge in the tail
        coeffs = [curve37.x_coeff(n) for n in range(-2, 6)]
        coeffs[-1] += 1
        f = QSeries(1, -2, coeffs, 6)
        with pytest.raises(PipelineError, match="remainder"):
            reduce_to_xy(f, curve37)

    def test_zero_series(self, curve37):
        out = reduce_to_xy(QSeries(1, 0, [0] * 10, 10), curve37)
        assert out == YLinearPoly(IntPoly(), IntPoly())


class TestPQExtract:
    @pytest.mark.parametrize("N,m", [(37, 2), (131, 2), (37, 3)])
    def test_appendix_pairs(self, registry, N, m):
        curve = registry.get(N)
        assert pq_extract(curve, m) == fixtures.appendix_pq(m, N)

    def test_perfect_square_refused(self, curve37):
        with pytest.raises(PipelineError, match="square"):
            pq_extract(curve37, 4)

    def test_lead_behavior(self, registry):
        # Phi(x_N(z)) ~ +-q^(-2 sigma1+(m)); reconstruct the series and check
        for N, m in ((37, 2), (141, 2), (79, 3)):
            curve = registry.get(N)
            P, Q = pq_extract(curve, m)
            s1p = sigma1_plus(m)
            t = 2 * s1p + 6  # Horner eats 2 exponents of window per multiply
            xs = curve.x_series(t)
            ys = curve.y_series(t)
            series = _expand_ylinear(YLinearPoly(P, Q), xs, ys)
            v = series.valuation()
            assert v == -2 * s1p, (N, m)
            assert series.coeff(v) in (1, -1)


def _expand_ylinear(yl, xs, ys):
    """Re-expand P(x) + y Q(x) as a q-series."""
    out = None
    for poly, mul in ((yl.p, None), (yl.q, ys)):
        if not poly:
            continue
        acc = QSeries.constant(poly.coeffs[-1], xs.trunc)
        for c in reversed(poly.coeffs[:-1]):
            acc = acc * xs
            if c:
                acc = acc + QSeries.constant(c, acc.trunc)
        if mul is not None:
            acc = acc * mul
        out = acc if out is None else out + acc
    if out is None:
        out = QSeries(1, 0, [0], xs.trunc)
    return out


def _gcd3(a, b, c):
    import math
    return math.gcd(math.gcd(a, b), c)
