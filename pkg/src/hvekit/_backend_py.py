"""Reference pairing backend in pure python (gmpy2 big integers).

This backend favors clarity over speed; the optional compiled backend in
``hvekit._native`` implements the same operations over fixed-size limb
arithmetic and is preferred automatically when importable.  Both backends
speak the same boundary representation:

* G1 point: ``None`` (infinity) or affine ``(x, y)`` ints
* G2 point: ``None`` or affine ``((x0, x1), (y0, y1))`` ints (twist coords)
* GT element: reduced Fp12 coefficient tuple, see ``hvekit._tower``
* scalars: ints

The Miller loop uses affine coordinates and full Fp12 multiplications for
the line evaluations; final exponentiation uses the standard per-family
hard-part chains, each verified at init time against the plain integer
exponent and silently replaced by a generic (slower) exponentiation if the
check fails.
"""

from gmpy2 import invert, mpz

from ._curvedef import CurveParams
from ._tower import Tower


class _Fp:
    """Field callables for the base field (plain ints)."""

    def __init__(self, p):
        self.p = mpz(p)
        self.zero = mpz(0)
        self.one = mpz(1)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def sqr(self, a):
        return (a * a) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        return invert(a, self.p)

    def is_zero(self, a):
        return a == 0


class _Fp2:
    """Field callables over the quadratic extension, delegating to Tower."""

    def __init__(self, tower):
        self._t = tower
        self.zero = tower.fp2_zero
        self.one = tower.fp2_one
        self.add = tower.fp2_add
        self.sub = tower.fp2_sub
        self.mul = tower.fp2_mul
        self.sqr = tower.fp2_sqr
        self.neg = tower.fp2_neg
        self.inv = tower.fp2_inv
        self.is_zero = tower.fp2_eq_zero


class _AffineCurve:
    """Short Weierstrass y^2 = x^3 + b over a generic field.

    Points are None (infinity) or affine (x, y) pairs of field elements.
    Scalar multiplication runs in jacobian coordinates internally.
    """

    def __init__(self, ops, b):
        self.f = ops
        self.b = b

    def on_curve(self, P):
        if P is None:
            return True
        f = self.f
        x, y = P
        return f.is_zero(f.sub(f.sqr(y), f.add(f.mul(f.sqr(x), x), self.b)))

    def neg(self, P):
        if P is None:
            return None
        return (P[0], self.f.neg(P[1]))

    def add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        f = self.f
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if f.is_zero(f.add(y1, y2)):
                return None
            lam = self._tangent_slope(P)
        else:
            lam = f.mul(f.sub(y2, y1), f.inv(f.sub(x2, x1)))
        x3 = f.sub(f.sub(f.sqr(lam), x1), x2)
        y3 = f.sub(f.mul(lam, f.sub(x1, x3)), y1)
        return (x3, y3)

    def _tangent_slope(self, P):
        f = self.f
        x, y = P
        x2 = f.sqr(x)
        num = f.add(f.add(x2, x2), x2)
        return f.mul(num, f.inv(f.add(y, y)))

    def chord_slope(self, P, Q):
        f = self.f
        return f.mul(f.sub(Q[1], P[1]), f.inv(f.sub(Q[0], P[0])))

    # -- jacobian scalar multiplication ---------------------------------

    def _jac_dbl(self, P):
        f = self.f
        X, Y, Z = P
        if f.is_zero(Z):
            return P
        A = f.sqr(X)
        B = f.sqr(Y)
        C = f.sqr(B)
        D = f.sub(f.sqr(f.add(X, B)), f.add(A, C))
        D = f.add(D, D)
        E = f.add(f.add(A, A), A)
        X3 = f.sub(f.sqr(E), f.add(D, D))
        C8 = f.add(C, C)
        C8 = f.add(C8, C8)
        C8 = f.add(C8, C8)
        Y3 = f.sub(f.mul(E, f.sub(D, X3)), C8)
        Z3 = f.mul(f.add(Y, Y), Z)
        return (X3, Y3, Z3)

    def _jac_add_affine(self, P, Q):
        # P jacobian, Q affine (never infinity)
        f = self.f
        X1, Y1, Z1 = P
        if f.is_zero(Z1):
            return (Q[0], Q[1], f.one)
        x2, y2 = Q
        Z1Z1 = f.sqr(Z1)
        U2 = f.mul(x2, Z1Z1)
        S2 = f.mul(f.mul(y2, Z1), Z1Z1)
        if U2 == X1 and S2 == Y1:
            return self._jac_dbl(P)
        H = f.sub(U2, X1)
        HH = f.sqr(H)
        I = f.add(HH, HH)
        I = f.add(I, I)
        J = f.mul(H, I)
        rr = f.sub(S2, Y1)
        rr = f.add(rr, rr)
        V = f.mul(X1, I)
        X3 = f.sub(f.sub(f.sqr(rr), J), f.add(V, V))
        Y1J = f.mul(Y1, J)
        Y3 = f.sub(f.mul(rr, f.sub(V, X3)), f.add(Y1J, Y1J))
        Z3 = f.mul(f.add(Z1, H), f.add(Z1, H))
        Z3 = f.sub(f.sub(Z3, Z1Z1), HH)
        return (X3, Y3, Z3)

    def _jac_to_affine(self, P):
        f = self.f
        X, Y, Z = P
        if f.is_zero(Z):
            return None
        zi = f.inv(Z)
        zi2 = f.sqr(zi)
        return (f.mul(X, zi2), f.mul(Y, f.mul(zi, zi2)))

    def mul(self, P, k):
        if P is None or k == 0:
            return None
        if k < 0:
            P = self.neg(P)
            k = -k
        f = self.f
        R = (f.one, f.one, f.zero)  # infinity sentinel (Z = 0)
        for bit in bin(int(k))[2:]:
            R = self._jac_dbl(R)
            if bit == "1":
                R = self._jac_add_affine(R, P)
        return self._jac_to_affine(R)


class PyBackend:
    """Pure-python pairing engine for one registered curve."""

    name = "python"

    def __init__(self, params: CurveParams):
        self.params = params
        self.p = mpz(params.p)
        self.r = mpz(params.r)
        self.tw = Tower(params.p, params.xi)
        tw = self.tw
        self.g1_curve = _AffineCurve(_Fp(params.p), mpz(params.b))
        self.g2_curve = _AffineCurve(_Fp2(tw), (mpz(params.b2[0]), mpz(params.b2[1])))
        p = int(self.p)
        # untwist-Frobenius constants for the BN loop tail
        self._w2_p1 = tw.fp2_pow(tw.xi, (p - 1) // 3)
        self._w3_p1 = tw.fp2_pow(tw.xi, (p - 1) // 2)
        self._w2_p2 = tw.fp2_pow(tw.xi, (p * p - 1) // 3)
        self._w3_p2 = tw.fp2_pow(tw.xi, (p * p - 1) // 2)
        self.hard_exp = (p**4 - p * p + 1) // params.r
        self._init_self_checks()

    # -- group ops --------------------------------------------------------

    def g1_add(self, P, Q):
        return self.g1_curve.add(P, Q)

    def g1_neg(self, P):
        return self.g1_curve.neg(P)

    def g1_mul(self, P, k):
        return self.g1_curve.mul(P, int(k) % int(self.r))

    def g1_on_curve(self, P):
        return self.g1_curve.on_curve(P)

    def g1_in_subgroup(self, P):
        if not self.g1_on_curve(P):
            return False
        if self.params.g1_cofactor == 1:
            return True
        return self.g1_curve.mul(P, int(self.r)) is None

    def g2_add(self, P, Q):
        return self.g2_curve.add(P, Q)

    def g2_neg(self, P):
        return self.g2_curve.neg(P)

    def g2_mul(self, P, k):
        return self.g2_curve.mul(P, int(k) % int(self.r))

    def g2_on_curve(self, P):
        return self.g2_curve.on_curve(P)

    def g2_in_subgroup(self, P):
        return self.g2_on_curve(P) and self.g2_curve.mul(P, int(self.r)) is None

    # -- pairing ----------------------------------------------------------

    def _line_dbl(self, T, P):
        """Tangent line at twist point T evaluated at G1 point P; returns
        (sparse fp12 line value, 2T)."""
        lam = self.g2_curve._tangent_slope(T)
        T2 = self.g2_curve.add(T, T)
        return self._line_fp12(lam, T, P), T2

    def _line_add(self, T, Q, P):
        if T[0] == Q[0] and T[1] == Q[1]:
            return self._line_dbl(T, P)
        lam = self.g2_curve.chord_slope(T, Q)
        TQ = self.g2_curve.add(T, Q)
        return self._line_fp12(lam, T, P), TQ

    def _line_fp12(self, lam, T, P):
        tw = self.tw
        xP, yP = P
        c_xt = tw.fp2_sub(tw.fp2_mul(lam, T[0]), T[1])  # lam*xt - yt
        c_xp = tw.fp2_neg(tw.fp2_mul_scalar(lam, xP))  # -lam*xP
        if self.params.twist == "D":
            d0 = ((yP % tw.p, mpz(0)), tw.fp2_zero, tw.fp2_zero)
            d1 = (c_xp, c_xt, tw.fp2_zero)
        else:
            d0 = (tw.fp2_mul_scalar(tw.xi, yP), tw.fp2_zero, tw.fp2_zero)
            d1 = (tw.fp2_zero, c_xt, c_xp)
        return (d0, d1)

    def _twist_frobenius(self, Q, power):
        tw = self.tw
        x, y = Q
        if power == 1:
            return (tw.fp2_mul(tw.fp2_conj(x), self._w2_p1), tw.fp2_mul(tw.fp2_conj(y), self._w3_p1))
        return (tw.fp2_mul(x, self._w2_p2), tw.fp2_mul(y, self._w3_p2))

    def _miller(self, pairs):
        """Product of Miller functions over (P, Q) pairs (shared squarings)."""
        tw = self.tw
        params = self.params
        f = tw.fp12_one
        state = [[Q, Q] for (_, Q) in pairs]  # [Q, T]
        for d in params.ate_digits[1:]:
            f = tw.fp12_sqr(f)
            for idx, (P, _) in enumerate(pairs):
                Q, T = state[idx]
                line, T = self._line_dbl(T, P)
                f = tw.fp12_mul(f, line)
                if d == 1:
                    line, T = self._line_add(T, Q, P)
                    f = tw.fp12_mul(f, line)
                elif d == -1:
                    line, T = self._line_add(T, self.g2_curve.neg(Q), P)
                    f = tw.fp12_mul(f, line)
                state[idx][1] = T
        if params.family == "bls12":
            if params.u < 0:
                f = tw.fp12_conj(f)
            return f
        # BN tail: two extra line evaluations with untwist-Frobenius images
        for idx, (P, _) in enumerate(pairs):
            Q, T = state[idx]
            Q1 = self._twist_frobenius(Q, 1)
            Q2 = self.g2_curve.neg(self._twist_frobenius(Q, 2))
            line, T = self._line_add(T, Q1, P)
            f = tw.fp12_mul(f, line)
            line, T = self._line_add(T, Q2, P)
            f = tw.fp12_mul(f, line)
        return f

    def final_exp(self, f):
        tw = self.tw
        f1 = tw.fp12_mul(tw.fp12_conj(f), tw.fp12_inv(f))
        f2 = tw.fp12_mul(tw.fp12_frobenius(f1, 2), f1)
        return self._hard(f2)

    def multi_pairing(self, pairs):
        """Product of e(P_i, Q_i); pairs with an infinity member contribute 1."""
        live = [(P, Q) for (P, Q) in pairs if P is not None and Q is not None]
        if not live:
            return self.tw.fp12_one
        return self.final_exp(self._miller(live))

    # -- GT ----------------------------------------------------------------

    def gt_one(self):
        return self.tw.fp12_one

    def gt_mul(self, a, b):
        return self.tw.fp12_mul(a, b)

    def gt_inv(self, a):
        # valid for r-order elements (cyclotomic subgroup): inverse == conjugate
        return self.tw.fp12_conj(a)

    def gt_pow(self, a, k):
        tw = self.tw
        k = int(k) % int(self.r)
        return self._cyc_pow(a, k)

    def gt_is_valid(self, a):
        """True iff a is an element of the r-order subgroup of Fp12*."""
        tw = self.tw
        if a == tw.fp12_zero:
            return False
        # cyclotomic membership: a^(p^4) * a == a^(p^2), i.e. a^(p^4-p^2+1) = 1
        ap2 = tw.fp12_frobenius(a, 2)
        ap4 = tw.fp12_frobenius(ap2, 2)
        if tw.fp12_mul(ap4, a) != ap2:
            return False
        return self._cyc_pow(a, int(self.r)) == tw.fp12_one

    # -- internals ----------------------------------------------------------

    def _cyc_pow(self, a, k):
        tw = self.tw
        if k == 0:
            return tw.fp12_one
        if k < 0:
            a = tw.fp12_conj(a)
            k = -k
        sqr = self._cyc_sqr
        r = a
        for bit in bin(int(k))[3:]:
            r = sqr(r)
            if bit == "1":
                r = tw.fp12_mul(r, a)
        return r

    def _init_self_checks(self):
        tw = self.tw
        # deterministic cyclotomic test element
        probe = ((tw.fp2_one, (mpz(2), mpz(3)), (mpz(4), mpz(5))), ((mpz(6), mpz(7)), (mpz(8), mpz(9)), (mpz(10), mpz(11))))
        f1 = tw.fp12_mul(tw.fp12_conj(probe), tw.fp12_inv(probe))
        f2 = tw.fp12_mul(tw.fp12_frobenius(f1, 2), f1)
        # Granger-Scott squaring must agree with plain squaring in-subgroup
        if tw.fp12_cyc_sqr(f2) == tw.fp12_sqr(f2):
            self._cyc_sqr = tw.fp12_cyc_sqr
        else:  # pragma: no cover - safety net
            self._cyc_sqr = tw.fp12_sqr
        chain = self._hard_bn if self.params.family == "bn" else self._hard_bls
        if chain(f2) == self._cyc_pow(f2, self.hard_exp):
            self._hard = chain
        else:  # pragma: no cover - safety net
            self._hard = lambda f: self._cyc_pow(f, self.hard_exp)

    def _hard_bn(self, f):
        tw = self.tw
        u = self.params.u
        mul, conj, frob = tw.fp12_mul, tw.fp12_conj, tw.fp12_frobenius
        fx = self._cyc_pow(f, u)
        fx2 = self._cyc_pow(fx, u)
        fx3 = self._cyc_pow(fx2, u)
        y0 = mul(mul(frob(f, 1), frob(f, 2)), frob(f, 3))
        y1 = conj(f)
        y2 = frob(fx2, 2)
        y3 = conj(frob(fx, 1))
        y4 = conj(mul(fx, frob(fx2, 1)))
        y5 = conj(fx2)
        y6 = conj(mul(fx3, frob(fx3, 1)))
        t0 = mul(mul(self._cyc_sqr(y6), y4), y5)
        t1 = mul(mul(y3, y5), t0)
        t0 = mul(t0, y2)
        t1 = self._cyc_sqr(mul(self._cyc_sqr(t1), t0))
        t0 = mul(t1, y1)
        t1 = mul(t1, y0)
        t0 = self._cyc_sqr(t0)
        return mul(t1, t0)

    def _hard_bls(self, f):
        # exponent (u-1)^2/3 * (u + p) * (u^2 + p^2 - 1) + 1
        tw = self.tw
        u = self.params.u
        mul, conj, frob = tw.fp12_mul, tw.fp12_conj, tw.fp12_frobenius
        g = self._cyc_pow(f, (u - 1) ** 2 // 3)
        g = mul(self._cyc_pow(g, u), frob(g, 1))
        g = mul(mul(self._cyc_pow(self._cyc_pow(g, u), u), frob(g, 2)), conj(g))
        return mul(g, f)
