"""Exact integer-polynomial arithmetic for root-of-unity identities.

Polynomials are coefficient lists over Python ints, lowest degree first,
so everything here is exact and overflow-free.  Two consumers: the
root-of-unity equation search (zero tests in Z[x] modulo a cyclotomic
polynomial) and minimal polynomials of 2*cos(2*pi*k/n).
"""

from __future__ import annotations

from functools import lru_cache

from .modmath import factorize

__all__ = [
    "cyclotomic",
    "cos_minimal_poly",
    "poly_eval",
    "poly_mul",
    "poly_divexact",
    "unity_cofactor",
    "vanishes_at_primitive_root",
]


def poly_mul(a: list[int], b: list[int]) -> list[int]:
    """Product of two coefficient lists (dense convolution)."""
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Exact quotient num / den for a monic divisor.

    Raises ArithmeticError when the division leaves a remainder; all
    callers divide products of cyclotomic factors, so a remainder means
    a bug, not bad data.
    """
    if den[-1] != 1:
        raise ArithmeticError("divisor must be monic")
    rem = list(num)
    dd = len(den) - 1
    q = [0] * (len(num) - dd)
    for i in range(len(q) - 1, -1, -1):
        c = rem[i + dd]
        if c:
            q[i] = c
            for j, dj in enumerate(den):
                rem[i + j] -= c * dj
    if any(rem):
        raise ArithmeticError("division not exact")
    return q


def poly_eval(coeffs, x):
    """Horner evaluation; works for ints, floats, or Fractions."""
    acc = 0 * x
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _divisors(n: int) -> list[int]:
    divs = [1]
    for prime, exp in factorize(n):
        divs = [d * prime**e for d in divs for e in range(exp + 1)]
    return sorted(divs)


def _radical(n: int) -> int:
    r = 1
    for prime, _ in factorize(n):
        r *= prime
    return r


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, constant first.

    For non-squarefree n the computation collapses through the radical:
    the order-n polynomial equals the radical's polynomial evaluated at
    x^(n/rad).  Squarefree orders fall back to dividing x^n - 1 by the
    polynomials of the proper divisors.
    """
    if n < 1:
        raise ValueError(f"order must be positive, got {n}")
    if n == 1:
        return (-1, 1)
    r = _radical(n)
    if r != n:
        inner = cyclotomic(r)
        s = n // r
        out = [0] * ((len(inner) - 1) * s + 1)
        for i, c in enumerate(inner):
            out[i * s] = c
        return tuple(out)
    if n % 2 == 0 and n > 2:
        # phi_{2m}(x) = phi_m(-x) for odd m > 1
        inner = cyclotomic(n // 2)
        return tuple(c if i % 2 == 0 else -c for i, c in enumerate(inner))
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        poly = poly_divexact(poly, list(cyclotomic(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def unity_cofactor(n: int) -> tuple[int, ...]:
    """(x^n - 1) / cyclotomic(n): the product over proper divisors."""
    factors = sorted((list(cyclotomic(d)) for d in _divisors(n)[:-1]), key=len)
    out = [1]
    for f in factors:
        out = poly_mul(out, f)
    return tuple(out)


def vanishes_at_primitive_root(terms, n: int) -> bool:
    """Decide whether sum(c * zeta^e) == 0 for a primitive n-th root zeta.

    ``terms`` maps exponents (any ints) to integer coefficients.  The
    sum vanishes iff cyclotomic(n) divides the degree-<n representative
    F, iff F * ((x^n-1)/cyclotomic(n)) is zero mod x^n - 1.  Since the
    order-n polynomial is the radical's polynomial in x^(n/rad), the
    cofactor is the radical's cofactor in x^(n/rad) too, which keeps the
    convolution sparse for highly composite n.
    """
    if n < 1:
        raise ValueError(f"order must be positive, got {n}")
    agg: dict[int, int] = {}
    items = terms.items() if hasattr(terms, "items") else terms
    for e, c in items:
        e %= n
        agg[e] = agg.get(e, 0) + c
    agg = {e: c for e, c in agg.items() if c}
    if not agg:
        return True
    r = _radical(n)
    s = n // r
    psi = unity_cofactor(r)
    acc = [0] * n
    for e, c in agg.items():
        for d, w in enumerate(psi):
            if w:
                acc[(e + s * d) % n] += c * w
    return not any(acc)


def cos_minimal_poly(n: int) -> tuple[int, ...]:
    """Minimal polynomial over Q of 2*cos(2*pi/n), integer coefficients.

    For n >= 3 the n-th cyclotomic polynomial is palindromic of even
    degree 2m and factors as x^m * G(x + 1/x); G is returned via the
    basis x^j + x^-j = D_j(x + 1/x) with D_0 = 2, D_1 = y,
    D_j = y*D_{j-1} - D_{j-2}.  Degree phi(n)/2, and every 2*cos(2*pi*k/n)
    with gcd(k, n) = 1 is a root.
    """
    if n == 1:
        return (-2, 1)
    if n == 2:
        return (2, 1)
    phi = cyclotomic(n)
    m = (len(phi) - 1) // 2
    if len(phi) != 2 * m + 1 or phi != phi[::-1]:
        raise ArithmeticError(f"cyclotomic({n}) is not palindromic")
    out = [0] * (m + 1)
    out[0] = phi[m]
    d_prev = [2]
    d_cur = [0, 1]
    for j in range(1, m + 1):
        for i, c in enumerate(d_cur):
            out[i] += phi[m + j] * c
        # D_{j+1} = y * D_j - D_{j-1}
        d_next = [0] + d_cur
        for i, c in enumerate(d_prev):
            d_next[i] -= c
        d_prev, d_cur = d_cur, d_next
    return tuple(out)
