"""Text formats for rings, ring elements and sparse series.

Ring grammar (whitespace ignored)::

    ring  := base [ "[" names "]" "/" "(" rel ")" ]
    base  := "F" P | "F_" P | "Fp(" P ")" | "GF(" P ")" | "Z/" N | "Z/" P "^" n | "Q"
    rel   := polynomial in the single variable  |  "deg" D  |  "deg(" D ")"

Examples: ``F5``, ``Fp(5)[u]/(u^4)``, ``Z/125[X]/(X^2+5*X+5)``,
``F3[x,y]/(deg 3)`` (all monomials of total degree >= 3 vanish).

Expressions use integers, names, ``+ - * / ^`` and parentheses. A series
literal is an expression in ``T`` (negative exponents allowed on ``T``)
whose coefficients are expressions in the ring variables, e.g.
``"1*T^-3 + 2*T^-1"``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import InvalidInput, RingError
from .rings import (
    ArtinLocal,
    Ring,
    RingDescriptor,
    RingElement,
    integers_mod,
    is_prime,
    mk_ring,
    prime_field,
    rationals,
)

__all__ = ["parse_ring", "parse_ring_descriptor", "parse_element", "parse_series_terms"]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, object]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        elif op is not None:
            if op not in "+-*/^()":
                raise InvalidInput(f"unexpected character {op!r} in {text!r}")
            out.append(("op", op))
        pos = m.end()
    return out


class _Parser:
    """Recursive descent over an algebra supplied as callbacks.

    ``atom_name(name)`` and ``atom_int(n)`` build leaves; values must support
    ``+ - *``; ``power(value, exponent)`` and ``divide(a, b)`` are hooks.
    """

    def __init__(self, tokens, atom_name, atom_int, power, divide):
        self.toks = tokens
        self.i = 0
        self.atom_name = atom_name
        self.atom_int = atom_int
        self.power = power
        self.divide = divide

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise InvalidInput(f"parse error near token {tok[1]!r}")
        self.i += 1
        return tok

    def parse(self):
        v = self.expr()
        if self.i != len(self.toks):
            raise InvalidInput(f"trailing input near {self.peek()[1]!r}")
        return v

    def expr(self):
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        v = self.term()
        if sign < 0:
            v = -v
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self):
        v = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.factor()
            v = v * rhs if op == "*" else self.divide(v, rhs)
        return v

    def factor(self):
        base = self.primary()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            exp = self.take("num")[1] * sign
            return self.power(base, exp)
        return base

    def primary(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return self.atom_int(val)
        if kind == "name":
            self.take()
            return self.atom_name(val)
        if (kind, val) == ("op", "("):
            self.take()
            v = self.expr()
            self.take("op", ")")
            return v
        if (kind, val) == ("op", "-"):
            self.take()
            return -self.factor()
        raise InvalidInput(f"parse error near {val!r}")


# ---------------------------------------------------------------------------
# rings

_BASE = re.compile(
    r"^(?:F_?(\d+)|Fp\((\d+)\)|GF\((\d+)\)|Z/(\d+)(?:\^(\d+))?|Zmod\((\d+)(?:\^(\d+))?\)|Q)"
)


def _prime_power(n: int) -> tuple[int, int]:
    for p in range(2, n + 1):
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            if n != 1 or not is_prime(p):
                break
            return p, k
    raise RingError("modulus must be a prime power")


def parse_ring_descriptor(text: str) -> RingDescriptor:
    s = re.sub(r"\s+", "", text)
    m = _BASE.match(s)
    if not m:
        raise RingError(f"cannot parse ring {text!r}")
    g = m.groups()
    if s.startswith("Q"):
        base = rationals().descriptor
    else:
        p_field = g[0] or g[1] or g[2]
        if p_field:
            p = int(p_field)
            if not is_prime(p):
                raise RingError(f"{p} is not prime")
            base = RingDescriptor("prime_field", p, 1)
        else:
            num, exp = (g[3], g[4]) if g[3] else (g[5], g[6])
            if exp:
                p, n = int(num), int(exp)
                if not is_prime(p):
                    raise RingError(f"{p} is not prime")
            else:
                p, n = _prime_power(int(num))
            base = integers_mod(p, n).descriptor
    rest = s[m.end():]
    if not rest:
        return base
    if base.kind == "rationals":
        raise RingError("Q admits no Artin quotient")
    rm = re.match(r"^\[([A-Za-z_][A-Za-z_0-9]*(?:,[A-Za-z_][A-Za-z_0-9]*)*)\]/\((.*)\)$", rest)
    if not rm:
        rm = re.match(r"^\[([A-Za-z_][A-Za-z_0-9]*(?:,[A-Za-z_][A-Za-z_0-9]*)*)\]/(deg\(\d+\))$", rest)
    if not rm:
        raise RingError(f"cannot parse ring {text!r}")
    variables = tuple(rm.group(1).split(","))
    rel = rm.group(2)
    dm = re.match(r"^deg\(?(\d+)\)?$", rel)
    base_ring = mk_ring(base)
    if dm:
        d = int(dm.group(1))
        desc = RingDescriptor("artin_local", base.p, base.n, base, variables, None, d)
    else:
        if len(variables) != 1:
            raise RingError("a modulus presentation takes exactly one variable")
        coeffs = _parse_int_poly(rel, variables[0])
        desc = RingDescriptor(
            "artin_local", base.p, base.n, base, variables, tuple(c % base_ring.modulus for c in coeffs)
        )
    return mk_ring(desc).descriptor


def parse_ring(text: str) -> Ring:
    return mk_ring(parse_ring_descriptor(text))


def _parse_int_poly(text: str, var: str) -> list[int]:
    """Integer polynomial in one variable as a coefficient list (low to high)."""

    def add(a, b):
        n = max(len(a), len(b))
        return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]

    class P(list):
        def __add__(self, o):
            return P(add(self, o))

        def __sub__(self, o):
            return P(add(self, [-c for c in o]))

        def __neg__(self):
            return P([-c for c in self])

        def __mul__(self, o):
            out = [0] * (len(self) + len(o) - 1)
            for i, a in enumerate(self):
                for j, b in enumerate(o):
                    out[i + j] += a * b
            return P(out)

    def name(n):
        if n != var:
            raise RingError(f"unknown symbol {n!r} in modulus")
        return P([0, 1])

    def power(b, e):
        if e < 0:
            raise RingError("negative exponent in modulus")
        r = P([1])
        for _ in range(e):
            r = r * b
        return r

    def divide(a, b):
        raise RingError("division not allowed in a modulus")

    poly = _Parser(_tokenize(text), name, lambda n: P([n]), power, divide).parse()
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return list(poly)


# ---------------------------------------------------------------------------
# elements and series


def parse_element(ring: Ring, text: str) -> RingElement:
    def name(n):
        if isinstance(ring, ArtinLocal):
            return ring.gen(n)
        raise RingError(f"unknown symbol {n!r} for {ring}")

    def power(b, e):
        return b ** e

    def divide(a, b):
        return a / b

    return _Parser(_tokenize(str(text)), name, lambda n: ring(n), power, divide).parse()


class _Laurent(dict):
    """Sparse Laurent polynomial in T with ring coefficients, used while parsing."""

    ring: Ring

    @classmethod
    def make(cls, ring, terms):
        obj = cls()
        obj.ring = ring
        for e, c in terms.items():
            if not c.is_zero():
                obj[e] = c
        return obj

    def __add__(self, o):
        out = dict(self)
        for e, c in o.items():
            out[e] = out[e] + c if e in out else c
        return _Laurent.make(self.ring, out)

    def __neg__(self):
        return _Laurent.make(self.ring, {e: -c for e, c in self.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        out = {}
        for e1, c1 in self.items():
            for e2, c2 in o.items():
                e = e1 + e2
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return _Laurent.make(self.ring, out)


def parse_series_terms(ring: Ring, text: str, var: str = "T") -> dict[int, RingElement]:
    """Parse a sparse series literal into {exponent: coefficient}."""

    def name(n):
        if n == var:
            return _Laurent.make(ring, {1: ring.one()})
        if isinstance(ring, ArtinLocal) and n in ring.variables:
            return _Laurent.make(ring, {0: ring.gen(n)})
        raise InvalidInput(f"unknown symbol {n!r} in series literal")

    def power(b, e):
        if e < 0:
            if len(b) != 1:
                raise InvalidInput("negative powers only of monomials")
            (k, c), = b.items()
            return _Laurent.make(ring, {k * e: c ** e})
        r = _Laurent.make(ring, {0: ring.one()})
        for _ in range(e):
            r = r * b
        return r

    def divide(a, b):
        if len(b) != 1:
            raise InvalidInput("division only by monomials")
        (k, c), = b.items()
        inv = c.inverse()
        return _Laurent.make(ring, {e - k: v * inv for e, v in a.items()})

    def integer(n):
        return _Laurent.make(ring, {0: ring(n)})

    result = _Parser(_tokenize(text), name, integer, power, divide).parse()
    return dict(result)


def format_fraction(x: Fraction) -> str:
    return str(Fraction(x))
