from math import gcd

import pytest

from flatgenus.arith import (
    PrimeRatioPair,
    build_context,
    compute_v,
    cyclotomic_poly,
    euler_phi,
    is_prime,
    mult_order,
    poly_mul,
    prime_ratio_pairs,
)
from flatgenus.errors import NotCoprime, NotSquarefree, OutOfRange


def brute_phi(n):
    return sum(1 for a in range(1, n + 1) if gcd(a, n) == 1)


def brute_order(a, m):
    e, x = 1, a % m
    while x != 1:
        x = x * a % m
        e += 1
    return e


class TestContext:
    def test_105(self):
        ctx = build_context(105)
        assert ctx.primes == (3, 5, 7)
        assert len(ctx.divisors) == 8

    def test_30_parity_classes(self):
        ctx = build_context(30)
        assert ctx.d0 == (1, 6, 10, 15)
        assert ctx.d1 == (2, 3, 5, 30)

    def test_not_squarefree(self):
        with pytest.raises(NotSquarefree):
            build_context(12)

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            build_context(1)
        with pytest.raises(OutOfRange):
            build_context(0)

    def test_parity_halves(self):
        # |d0| = |d1| = 2^(k-1) for every square-free delta
        for delta in range(2, 301):
            try:
                ctx = build_context(delta)
            except NotSquarefree:
                continue
            k = len(ctx.primes)
            assert len(ctx.d0) == len(ctx.d1) == 2 ** (k - 1)
            assert 1 in ctx.d0
            assert set(ctx.d0) | set(ctx.d1) == set(ctx.divisors)
            assert not set(ctx.d0) & set(ctx.d1)


class TestPhiAndOrder:
    def test_phi_values(self):
        assert euler_phi(1) == 1
        assert euler_phi(46) == 22
        assert euler_phi(105) == 48 == brute_phi(105)

    def test_order_values(self):
        assert mult_order(1, 7) == 1
        assert mult_order(2, 23) == 11 == brute_order(2, 23)
        assert mult_order(5, 3) == 2 == brute_order(5, 3)

    def test_order_not_coprime(self):
        with pytest.raises(NotCoprime):
            mult_order(6, 9)


class TestV:
    def test_prime_over_one(self):
        # L(p, 1) is a single field F_p
        assert compute_v(PrimeRatioPair(5, 1, 5)) == 1

    def test_m3_p5(self):
        # Phi_3 = x^2 + x + 1 stays irreducible mod 5: no roots, one factor
        assert all((x * x + x + 1) % 5 for x in range(5))
        assert compute_v(PrimeRatioPair(3, 15, 5)) == 1

    def test_m11_p23(self):
        # Phi_11 splits into 10 linear factors mod 23 (23 = 1 mod 11)
        roots = [x for x in range(23) if sum(pow(x, k, 23) for k in range(11)) % 23 == 0]
        assert len(roots) == 10
        assert compute_v(PrimeRatioPair(11, 253, 23)) == 10

    def test_v_divides_phi(self):
        for delta in (6, 30, 105, 210):
            for pair in prime_ratio_pairs(build_context(delta)):
                m = pair.smaller
                assert euler_phi(m) % compute_v(pair) == 0

    def test_pair_orientation(self):
        ctx = build_context(6)
        pairs = {(p.s, p.t): p.p for p in prime_ratio_pairs(ctx)}
        assert pairs == {(2, 1): 2, (3, 1): 3, (2, 6): 3, (3, 6): 2}


class TestCyclotomic:
    def test_small_cases(self):
        assert cyclotomic_poly(1) == (-1, 1)
        assert cyclotomic_poly(6) == (1, -1, 1)

    def test_phi15(self):
        phi15 = cyclotomic_poly(15)
        assert len(phi15) - 1 == 8
        assert sum(phi15) == 1  # value at x = 1

    def test_product_identity(self):
        # prod over d | n of Phi_d = x^n - 1, exactly, for all n <= 300
        for n in range(1, 301):
            prod = (1,)
            for d in range(1, n + 1):
                if n % d == 0:
                    prod = poly_mul(prod, cyclotomic_poly(d))
            expected = tuple([-1] + [0] * (n - 1) + [1])
            assert prod == expected, n

    def test_value_at_one(self):
        # Phi_d(1) = q for prime powers q^k, else 1 (d >= 2)
        for d in range(2, 301):
            value = sum(cyclotomic_poly(d))
            fac = [p for p in range(2, d + 1) if d % p == 0 and is_prime(p)]
            if len(fac) == 1:
                assert value == fac[0]
            else:
                assert value == 1
