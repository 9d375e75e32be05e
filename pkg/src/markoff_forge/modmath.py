"""Integer and modular arithmetic helpers: factorization, square roots,
multiplicative orders, and orders of companion-matrix eigenvalues.

Everything here is exact integer arithmetic.  Factorization is trial
division backed by a Brent-cycle splitter, which is plenty for the
64-bit inputs the rest of the package feeds it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

_TRIAL_BOUND = 10**6

# Strong-pseudoprime bases proven sufficient for every n < 3.317e24
# (first thirteen primes).
_MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin primality check.

    Deterministic below 3.317e24 via a fixed base set; above that, 64
    pseudo-random rounds seeded by n so repeated runs agree.
    """
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    if n < _MR_DETERMINISTIC_LIMIT:
        bases = _MR_BASES
    else:
        rng = random.Random(n)
        bases = tuple(rng.randrange(2, n - 1) for _ in range(64))
    for a in bases:
        a %= n
        if a in (0, 1, n - 1):
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_splitter(n: int) -> int:
    """Return a nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n as a list of (prime, exponent), primes ascending.

    Accepts 1 <= n <= 2**63.  factorize(1) == [].
    """
    if not 1 <= n <= 2**63:
        raise ValueError(f"factorize expects 1 <= n <= 2**63, got {n}")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    # trial division with a 2,4-wheel
    p, step = 7, 4
    while p <= _TRIAL_BOUND and p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += step
        step = 6 - step
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _brent_splitter(m)
        stack.append(d)
        stack.append(m // d)
    return sorted(out.items())


def primes_upto(n: int) -> list[int]:
    """All primes <= n by a plain sieve."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i in range(n + 1) if sieve[i]]


@dataclass(frozen=True)
class Modulus:
    """A modulus together with its factorization."""

    q: int
    factors: tuple[tuple[int, int], ...]
    is_prime: bool

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("modulus must be >= 2")


def modulus(q: int) -> Modulus:
    fac = tuple(factorize(q))
    return Modulus(q=q, factors=fac, is_prime=len(fac) == 1 and fac[0][1] == 1)


@dataclass(frozen=True)
class OrderContext:
    """Cached factorizations of p-1 and p+1 for order computations mod p."""

    p: int
    factors_pm1: tuple[tuple[int, int], ...] = field(default=())
    factors_pp1: tuple[tuple[int, int], ...] = field(default=())


def order_context(p: int) -> OrderContext:
    return OrderContext(p=p, factors_pm1=tuple(factorize(p - 1)), factors_pp1=tuple(factorize(p + 1)))


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for odd prime p, in {-1, 0, 1}."""
    a %= p
    if a == 0:
        return 0
    s = pow(a, (p - 1) // 2, p)
    return 1 if s == 1 else -1


def sqrt_mod(a: int, p: int) -> set[int]:
    """Square roots of a modulo an odd prime p.

    Returns the full root set: two elements for a nonzero residue, {0}
    for a == 0, and the empty set for a non-residue (Tonelli-Shanks,
    with a deterministic search for the needed non-residue).
    """
    if p % 2 == 0 or not is_probable_prime(p):
        raise ValueError(f"sqrt_mod needs an odd prime modulus, got {p}")
    a %= p
    if a == 0:
        return {0}
    if legendre(a, p) == -1:
        return set()
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return {r, p - r}
    # p = 1 mod 4: Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t = t * c % p
        r = r * b % p
    return {r, p - r}


def mult_order(x: int, p: int, ctx: OrderContext | None = None) -> int:
    """Least n >= 1 with x**n == 1 mod p (p prime, x nonzero mod p)."""
    x %= p
    if x == 0:
        raise ValueError("mult_order of 0 is undefined")
    if ctx is None:
        ctx = order_context(p)
    order = p - 1
    for prime, exp in ctx.factors_pm1:
        for _ in range(exp):
            if order % prime == 0 and pow(x, order // prime, p) == 1:
                order //= prime
            else:
                break
    return order


def _ext_mul(u: tuple[int, int], v: tuple[int, int], d: int, p: int) -> tuple[int, int]:
    # (a + b*w)(c + e*w) with w*w = d
    a, b = u
    c, e = v
    return ((a * c + b * e % p * d) % p, (a * e + b * c) % p)


def _ext_pow(u: tuple[int, int], n: int, d: int, p: int) -> tuple[int, int]:
    res = (1, 0)
    while n:
        if n & 1:
            res = _ext_mul(res, u, d, p)
        u = _ext_mul(u, u, d, p)
        n >>= 1
    return res


def eigen_order(s: int, p: int, ctx: OrderContext | None = None) -> tuple[str, int]:
    """Order data for the companion matrix [[0, 1], [-1, s]] modulo p.

    Returns (kind, order) where kind classifies the discriminant s*s - 4:
    "split" (nonzero square: order of an eigenvalue in F_p, divides p-1),
    "nonsplit" (non-square: order computed in the quadratic extension,
    divides p+1), or "parabolic" (s = +-2 mod p: matrix order p for
    s = 2, 2p for s = -2).  The value is always the exact multiplicative
    order of the matrix itself.  Requires odd prime p >= 5.
    """
    if p < 5 or p % 2 == 0 or not is_probable_prime(p):
        raise ValueError(f"eigen_order needs an odd prime p >= 5, got {p}")
    s %= p
    if ctx is None:
        ctx = order_context(p)
    d = (s * s - 4) % p
    if d == 0:
        return ("parabolic", p if s == 2 else 2 * p)
    if legendre(d, p) == 1:
        r = min(sqrt_mod(d, p))
        t = (s + r) * pow(2, -1, p) % p
        return ("split", mult_order(t, p, ctx))
    inv2 = pow(2, -1, p)
    t = (s * inv2 % p, inv2)
    order = p + 1
    for prime, exp in ctx.factors_pp1:
        for _ in range(exp):
            if order % prime == 0 and _ext_pow(t, order // prime, d, p) == (1, 0):
                order //= prime
            else:
                break
    return ("nonsplit", order)
