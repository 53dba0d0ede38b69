"""Exact number theory for square-free holonomy orders.

Everything here is deliberately small-scale: holonomy orders are bounded
(<= 10**6 supported, <= 210 in practice), so trial division and direct
exponentiation loops are the right tools.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, prod

from .errors import NotCoprime, NotSquarefree, OutOfRange

MAX_DELTA = 10**6


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division, as {prime: exponent}."""
    if n < 1:
        raise OutOfRange(f"cannot factor {n}")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def divisors(n: int) -> list[int]:
    """All positive divisors of n, sorted ascending."""
    ds = [1]
    for p, a in factorize(n).items():
        ds = [d * p**e for d in ds for e in range(a + 1)]
    return sorted(ds)


def euler_phi(d: int) -> int:
    """Euler's totient, phi(d) = prod p^(a-1) (p-1)."""
    if d < 1:
        raise OutOfRange(f"phi({d}) undefined")
    return prod(p ** (a - 1) * (p - 1) for p, a in factorize(d).items())


def mult_order(a: int, m: int) -> int:
    """Least e >= 1 with a**e = 1 mod m."""
    if m <= 1:
        raise OutOfRange(f"modulus {m} must exceed 1")
    if gcd(a, m) != 1:
        raise NotCoprime(f"{a} is not a unit mod {m}")
    a %= m
    e, x = 1, a
    while x != 1:
        x = x * a % m
        e += 1
    return e


@dataclass(frozen=True)
class SquarefreeContext:
    """A square-free holonomy order with its divisor lattice.

    divisors splits into d0 (even number of prime factors, contains 1)
    and d1 (odd number of prime factors).
    """

    delta: int
    primes: tuple[int, ...]
    divisors: tuple[int, ...]
    d0: tuple[int, ...]
    d1: tuple[int, ...]


def build_context(delta: int) -> SquarefreeContext:
    if delta <= 1:
        raise OutOfRange(f"holonomy order must exceed 1, got {delta}")
    if delta > MAX_DELTA:
        raise OutOfRange(f"holonomy order {delta} exceeds supported bound {MAX_DELTA}")
    fac = factorize(delta)
    if any(a > 1 for a in fac.values()):
        raise NotSquarefree(f"{delta} is divisible by a square")
    primes = tuple(sorted(fac))
    divs = tuple(divisors(delta))
    d0 = tuple(d for d in divs if len(factorize(d)) % 2 == 0)
    d1 = tuple(d for d in divs if len(factorize(d)) % 2 == 1)
    return SquarefreeContext(delta, primes, divs, d0, d1)


@dataclass(frozen=True)
class PrimeRatioPair:
    """A divisor pair (s, t) with s in d1, t in d0 and max/min equal to a prime.

    The quotient may go either way; ``larger`` records which side it is.
    """

    s: int
    t: int
    p: int

    @property
    def larger(self) -> int:
        return max(self.s, self.t)

    @property
    def smaller(self) -> int:
        return min(self.s, self.t)


def prime_ratio_pairs(ctx: SquarefreeContext) -> list[PrimeRatioPair]:
    """All pairs s in d1, t in d0 whose ratio (either way) is prime."""
    pairs = []
    for s in ctx.d1:
        for t in ctx.d0:
            lo, hi = min(s, t), max(s, t)
            if hi % lo == 0 and is_prime(hi // lo):
                pairs.append(PrimeRatioPair(s, t, hi // lo))
    return pairs


def compute_v(pair: PrimeRatioPair) -> int:
    """Number of field factors of the extension-coefficient ring at (s, t).

    v = phi(m) / ord(p mod m) with m = min(s, t); by convention v = 1 when
    m = 1 (a single field F_p).
    """
    m = pair.smaller
    if m == 1:
        return 1
    return euler_phi(m) // mult_order(pair.p, m)


# ----- integer polynomials (coefficient tuples, low degree first) -----

def poly_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return tuple(out)


def poly_divmod(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Division with remainder by a monic divisor, exact over the integers."""
    assert b[-1] == 1, "divisor must be monic"
    rem = list(a)
    qdeg = len(a) - len(b)
    if qdeg < 0:
        return (0,), tuple(rem)
    quo = [0] * (qdeg + 1)
    for k in range(qdeg, -1, -1):
        c = rem[k + len(b) - 1]
        quo[k] = c
        if c:
            for j, bj in enumerate(b):
                rem[k + j] -= c * bj
    while len(rem) > 1 and rem[-1] == 0:
        rem.pop()
    return tuple(quo), tuple(rem)


def poly_eval(a: tuple[int, ...], x: int) -> int:
    out = 0
    for c in reversed(a):
        out = out * x + c
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(d: int) -> tuple[int, ...]:
    """Coefficients of the d-th cyclotomic polynomial, constant term first."""
    if d < 1:
        raise OutOfRange(f"cyclotomic index {d} must be positive")
    if d == 1:
        return (-1, 1)
    numerator = tuple([-1] + [0] * (d - 1) + [1])  # x^d - 1
    for e in divisors(d)[:-1]:
        quo, rem = poly_divmod(numerator, cyclotomic_poly(e))
        assert rem == (0,), "cyclotomic division must be exact"
        numerator = quo
    return numerator
