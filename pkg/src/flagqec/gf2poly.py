"""Polynomials over GF(2), encoded as Python integers.

A polynomial sum_i c_i x^i with c_i in {0,1} is stored as the integer
sum_i c_i 2^i, so x^3 + x + 1 is 0b1011 = 11.  Because coefficients are
bits, the encoding doubles as evaluation at x = 2, which the coupling
order construction uses directly.
"""

from __future__ import annotations

import re


def degree(a: int) -> int:
    """Degree of the polynomial; -1 for the zero polynomial."""
    return a.bit_length() - 1


def mul(a: int, b: int) -> int:
    """Carry-less product of two polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def mod(a: int, m: int) -> int:
    """Remainder of a divided by m."""
    if m == 0:
        raise ZeroDivisionError("polynomial modulus is zero")
    dm = degree(m)
    while degree(a) >= dm:
        a ^= m << (degree(a) - dm)
    return a


def mulmod(a: int, b: int, m: int) -> int:
    return mod(mul(a, b), m)


def x_order(p: int) -> int | None:
    """Multiplicative order of x modulo p, or None when x is not a unit.

    Walks x, x^2, x^3, ... mod p until the walk returns to 1, giving up
    after 2^deg(p) - 1 steps (the longest possible period).
    """
    limit = (1 << degree(p)) - 1
    t = mod(2, p)
    for k in range(1, limit + 1):
        if t == 1:
            return k
        t = mod(t << 1, p)
    return None


def is_primitive(p: int) -> bool:
    """True when x generates the full multiplicative group mod p.

    Equivalent to p being irreducible with a primitive root x, without
    needing a separate irreducibility pass: reducible moduli make the
    unit group too small, so the order test fails on them too.
    """
    if degree(p) < 1:
        raise ValueError(f"need degree >= 1, got {poly_text(p) if p else '0'}")
    return x_order(p) == (1 << degree(p)) - 1


def primitive_polys(deg: int) -> list[int]:
    """All primitive polynomials of the given degree, ascending."""
    if deg < 1:
        raise ValueError(f"need degree >= 1, got {deg}")
    lo = 1 << deg
    # an even constant term makes x a zero divisor, skip those outright
    return [p for p in range(lo | 1, lo << 1, 2) if is_primitive(p)]


_TERM_RE = re.compile(r"^(?:x(?:\^(\d+))?|1)$")


def parse_poly(text: str) -> int:
    """Parse "x^4+x+1" (or a bare coefficient-mask integer) to the encoding."""
    text = text.strip()
    if re.fullmatch(r"\d+", text):
        return int(text)
    out = 0
    for term in text.replace(" ", "").split("+"):
        m = _TERM_RE.match(term)
        if not m:
            raise ValueError(f"bad polynomial term {term!r} in {text!r}")
        if term == "1":
            exp = 0
        elif m.group(1) is None:
            exp = 1
        else:
            exp = int(m.group(1))
        out ^= 1 << exp
    return out


def poly_text(p: int) -> str:
    """Render the encoding back to "x^4 + x + 1" form."""
    if p == 0:
        return "0"
    terms = []
    for e in range(degree(p), -1, -1):
        if p >> e & 1:
            terms.append("1" if e == 0 else "x" if e == 1 else f"x^{e}")
    return " + ".join(terms)
