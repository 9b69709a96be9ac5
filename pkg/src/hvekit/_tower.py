"""Extension-field tower Fp2 -> Fp6 -> Fp12 used by the pairing backends.

Representation conventions (shared with the native backend and the wire
format):

* Fp  : python int in [0, p)
* Fp2 : (a, b) meaning a + b*i with i^2 = -1
* Fp6 : (c0, c1, c2) over Fp2 with v^3 = xi
* Fp12: (d0, d1) over Fp6 with w^2 = v

Both supported curves use a nonresidue of the shape xi = xi_c + i, which
keeps mul_by_xi cheap.
"""

from gmpy2 import invert, mpz


class Tower:
    """Field tower arithmetic for one curve's base prime and nonresidue."""

    def __init__(self, p: int, xi: tuple[int, int]):
        self.p = mpz(p)
        self.xi = (mpz(xi[0]), mpz(xi[1]))
        if self.xi[1] != 1:
            raise ValueError("tower assumes nonresidue of the form c + i")
        self.xi_c = self.xi[0]
        self.fp2_zero = (mpz(0), mpz(0))
        self.fp2_one = (mpz(1), mpz(0))
        self.fp6_zero = (self.fp2_zero,) * 3
        self.fp6_one = (self.fp2_one, self.fp2_zero, self.fp2_zero)
        self.fp12_zero = (self.fp6_zero, self.fp6_zero)
        self.fp12_one = (self.fp6_one, self.fp6_zero)
        self._init_frobenius()

    # -- Fp2 ------------------------------------------------------------

    def fp2_add(self, x, y):
        p = self.p
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p)

    def fp2_sub(self, x, y):
        p = self.p
        return ((x[0] - y[0]) % p, (x[1] - y[1]) % p)

    def fp2_neg(self, x):
        p = self.p
        return ((-x[0]) % p, (-x[1]) % p)

    def fp2_mul(self, x, y):
        p = self.p
        a0, a1 = x
        b0, b1 = y
        t0 = a0 * b0
        t1 = a1 * b1
        t2 = (a0 + a1) * (b0 + b1)
        return ((t0 - t1) % p, (t2 - t0 - t1) % p)

    def fp2_sqr(self, x):
        p = self.p
        a0, a1 = x
        return ((a0 + a1) * (a0 - a1) % p, (a0 * a1 * 2) % p)

    def fp2_mul_scalar(self, x, c):
        p = self.p
        return (x[0] * c % p, x[1] * c % p)

    def fp2_mul_xi(self, x):
        # (c + i) * (a0 + a1 i) = (c*a0 - a1) + (a0 + c*a1) i
        p = self.p
        a0, a1 = x
        c = self.xi_c
        return ((c * a0 - a1) % p, (a0 + c * a1) % p)

    def fp2_inv(self, x):
        p = self.p
        a0, a1 = x
        norm = (a0 * a0 + a1 * a1) % p
        inv = invert(norm, p)
        return (a0 * inv % p, (-a1) * inv % p)

    def fp2_conj(self, x):
        return (x[0], (-x[1]) % self.p)

    def fp2_eq_zero(self, x):
        return x[0] == 0 and x[1] == 0

    def fp2_pow(self, x, e):
        r = self.fp2_one
        for bit in bin(int(e))[2:]:
            r = self.fp2_sqr(r)
            if bit == "1":
                r = self.fp2_mul(r, x)
        return r

    # -- Fp6 ------------------------------------------------------------

    def fp6_add(self, x, y):
        a = self.fp2_add
        return (a(x[0], y[0]), a(x[1], y[1]), a(x[2], y[2]))

    def fp6_sub(self, x, y):
        s = self.fp2_sub
        return (s(x[0], y[0]), s(x[1], y[1]), s(x[2], y[2]))

    def fp6_neg(self, x):
        n = self.fp2_neg
        return (n(x[0]), n(x[1]), n(x[2]))

    def fp6_mul(self, x, y):
        mul, add, sub = self.fp2_mul, self.fp2_add, self.fp2_sub
        a0, a1, a2 = x
        b0, b1, b2 = y
        t0 = mul(a0, b0)
        t1 = mul(a1, b1)
        t2 = mul(a2, b2)
        r0 = self.fp2_add(t0, self.fp2_mul_xi(sub(sub(mul(add(a1, a2), add(b1, b2)), t1), t2)))
        r1 = add(sub(sub(mul(add(a0, a1), add(b0, b1)), t0), t1), self.fp2_mul_xi(t2))
        r2 = add(sub(sub(mul(add(a0, a2), add(b0, b2)), t0), t2), t1)
        return (r0, r1, r2)

    def fp6_sqr(self, x):
        return self.fp6_mul(x, x)

    def fp6_mul_by_v(self, x):
        return (self.fp2_mul_xi(x[2]), x[0], x[1])

    def fp6_mul_fp2(self, x, c):
        mul = self.fp2_mul
        return (mul(x[0], c), mul(x[1], c), mul(x[2], c))

    def fp6_inv(self, x):
        mul, sub, sqr = self.fp2_mul, self.fp2_sub, self.fp2_sqr
        a0, a1, a2 = x
        c0 = sub(sqr(a0), self.fp2_mul_xi(mul(a1, a2)))
        c1 = sub(self.fp2_mul_xi(sqr(a2)), mul(a0, a1))
        c2 = sub(sqr(a1), mul(a0, a2))
        f = self.fp2_add(mul(a0, c0), self.fp2_mul_xi(self.fp2_add(mul(a2, c1), mul(a1, c2))))
        inv = self.fp2_inv(f)
        return (mul(c0, inv), mul(c1, inv), mul(c2, inv))

    # -- Fp12 -----------------------------------------------------------

    def fp12_add(self, x, y):
        return (self.fp6_add(x[0], y[0]), self.fp6_add(x[1], y[1]))

    def fp12_mul(self, x, y):
        a0, a1 = x
        b0, b1 = y
        t0 = self.fp6_mul(a0, b0)
        t1 = self.fp6_mul(a1, b1)
        r0 = self.fp6_add(t0, self.fp6_mul_by_v(t1))
        r1 = self.fp6_sub(self.fp6_sub(self.fp6_mul(self.fp6_add(a0, a1), self.fp6_add(b0, b1)), t0), t1)
        return (r0, r1)

    def fp12_sqr(self, x):
        a0, a1 = x
        t = self.fp6_mul(a0, a1)
        vt = self.fp6_mul_by_v(t)
        r0 = self.fp6_sub(self.fp6_sub(self.fp6_mul(self.fp6_add(a0, a1), self.fp6_add(a0, self.fp6_mul_by_v(a1))), t), vt)
        r1 = self.fp6_add(t, t)
        return (r0, r1)

    def fp12_conj(self, x):
        return (x[0], self.fp6_neg(x[1]))

    def fp12_inv(self, x):
        a0, a1 = x
        t = self.fp6_sub(self.fp6_sqr(a0), self.fp6_mul_by_v(self.fp6_sqr(a1)))
        inv = self.fp6_inv(t)
        return (self.fp6_mul(a0, inv), self.fp6_neg(self.fp6_mul(a1, inv)))

    def fp12_eq(self, x, y):
        return x == y

    # -- Frobenius -------------------------------------------------------

    def _init_frobenius(self):
        p = int(self.p)
        # gamma_1[j] = xi^(j*(p-1)/6) for j = 1..5, elements of Fp2
        self.gamma1 = [self.fp2_pow(self.xi, j * (p - 1) // 6) for j in range(6)]
        # gamma_2[j] = gamma_1[j] * conj(gamma_1[j]) = norm-powers, in Fp
        self.gamma2 = [self.fp2_mul(self.gamma1[j], self.fp2_conj(self.gamma1[j])) for j in range(6)]
        self.gamma3 = [self.fp2_mul(self.gamma1[j], self.gamma2[j]) for j in range(6)]

    def fp12_frobenius(self, x, power=1):
        """x^(p^power) for power in {1,2,3}."""
        if power == 1:
            gammas = self.gamma1
            conj = True
        elif power == 2:
            gammas = self.gamma2
            conj = False
        elif power == 3:
            gammas = self.gamma3
            conj = True
        else:
            raise ValueError("unsupported frobenius power")
        (c0, c1, c2), (c3, c4, c5) = x
        if conj:
            fc = self.fp2_conj
            c0, c1, c2, c3, c4, c5 = fc(c0), fc(c1), fc(c2), fc(c3), fc(c4), fc(c5)
        mul = self.fp2_mul
        return (
            (c0, mul(c1, gammas[2]), mul(c2, gammas[4])),
            (mul(c3, gammas[1]), mul(c4, gammas[3]), mul(c5, gammas[5])),
        )

    # -- Cyclotomic subgroup helpers --------------------------------------

    def _fp4_sqr(self, a, b):
        # squaring in Fp4 = Fp2[s]/(s^2 - xi); returns (re, im)
        t0 = self.fp2_sqr(a)
        t1 = self.fp2_sqr(b)
        re = self.fp2_add(self.fp2_mul_xi(t1), t0)
        im = self.fp2_sub(self.fp2_sub(self.fp2_sqr(self.fp2_add(a, b)), t0), t1)
        return re, im

    def fp12_cyc_sqr(self, x):
        """Granger-Scott squaring; valid only in the cyclotomic subgroup."""
        add, sub = self.fp2_add, self.fp2_sub
        (z0, z4, z3), (z2, z1, z5) = x
        t0, t1 = self._fp4_sqr(z0, z1)
        z0 = add(add(sub(t0, z0), sub(t0, z0)), t0)
        z1 = add(add(add(t1, z1), add(t1, z1)), t1)
        t0, t1 = self._fp4_sqr(z2, z3)
        t2, t3 = self._fp4_sqr(z4, z5)
        z4 = add(add(sub(t0, z4), sub(t0, z4)), t0)
        z5 = add(add(add(t1, z5), add(t1, z5)), t1)
        t0 = self.fp2_mul_xi(t3)
        z2 = add(add(add(t0, z2), add(t0, z2)), t0)
        z3 = add(add(sub(t2, z3), sub(t2, z3)), t2)
        return ((z0, z4, z3), (z2, z1, z5))

    def fp12_cyc_pow(self, x, e):
        """x^e for x in the cyclotomic subgroup; e may be negative."""
        if e < 0:
            x = self.fp12_conj(x)
            e = -e
        r = self.fp12_one
        started = False
        for bit in bin(int(e))[2:]:
            if started:
                r = self.fp12_cyc_sqr(r)
            if bit == "1":
                r = self.fp12_mul(r, x) if started else x
                started = True
        return r if started else self.fp12_one
