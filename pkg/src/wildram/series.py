"""Truncated power series and Laurent series with a finite polar tail.

A :class:`TruncatedSeries` is ``sum c_e T^e`` for ``low <= e < prec``, known
modulo ``T^prec``. Coefficients live in a numpy array of shape
``(prec - low, ring.dim)`` holding coordinate vectors.

Precision rules (never silently extended):

* ``a + b``: ``min(a.prec, b.prec)``
* ``a * b``: ``min(a.prec + v(b), b.prec + v(a))``
* ``1 / b``: ``b.prec - 2 v(b)`` (relative precision is kept)
* ``f o g``: ``min(g.prec, (f.prec - e + 1) * v(g - g(0)))`` with ``e`` the
  nilpotency index of ``g(0)`` (``e = 1`` when ``g(0) = 0``)
* ``f'``: ``f.prec - 1``
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

import numpy as np

from .errors import SeriesError
from .rings import RationalField, Ring, RingElement

__all__ = [
    "TruncatedSeries",
    "series_arith",
    "compose",
    "reversion",
    "mth_root_unit",
    "derivative",
    "ring_mth_root",
]


class TruncatedSeries:
    __slots__ = ("ring", "low", "prec", "_c")

    def __init__(self, ring: Ring, coeffs: np.ndarray, low: int, prec: int):
        if prec < low:
            raise SeriesError("prec must be at least low")
        coeffs = np.asarray(coeffs)
        if coeffs.shape != (prec - low, ring.dim):
            raise SeriesError(f"coefficient array has shape {coeffs.shape}")
        self.ring = ring
        self.low = low
        self.prec = prec
        self._c = coeffs

    # -- constructors ------------------------------------------------------
    @classmethod
    def zeros(cls, ring: Ring, prec: int, low: int = 0) -> "TruncatedSeries":
        return cls(ring, _zeros(ring, prec - low), low, prec)

    @classmethod
    def from_terms(cls, ring: Ring, terms: Mapping[int, object], prec: int, low: int | None = None):
        """Series from ``{exponent: coefficient}``; terms at or above prec are dropped."""
        exps = [e for e in terms]
        if low is None:
            low = min([0] + exps)
        s = cls.zeros(ring, prec, low)
        for e, c in terms.items():
            if e < low:
                raise SeriesError("term below the declared low exponent")
            if e < prec:
                s._c[e - low] = _vec(ring, c)
        return s

    @classmethod
    def from_list(cls, ring: Ring, coeffs, prec: int | None = None, low: int = 0):
        coeffs = list(coeffs)
        if prec is None:
            prec = low + len(coeffs)
        return cls.from_terms(ring, {low + i: c for i, c in enumerate(coeffs)}, prec, low)

    @classmethod
    def variable(cls, ring: Ring, prec: int) -> "TruncatedSeries":
        return cls.from_terms(ring, {1: 1}, prec)

    @classmethod
    def constant(cls, ring: Ring, c, prec: int) -> "TruncatedSeries":
        return cls.from_terms(ring, {0: c}, prec)

    @classmethod
    def parse(cls, ring: Ring, text: str, prec: int, var: str = "T") -> "TruncatedSeries":
        from .parsing import parse_series_terms

        return cls.from_terms(ring, parse_series_terms(ring, text, var), prec)

    # -- access --------------------------------------------------------------
    def coefficient(self, e: int) -> RingElement:
        if e >= self.prec:
            raise SeriesError(f"coefficient of T^{e} is beyond precision {self.prec}")
        if e < self.low:
            return self.ring.zero()
        return self.ring.element(self._c[e - self.low])

    def __getitem__(self, e: int) -> RingElement:
        return self.coefficient(e)

    def coefficients(self) -> list[RingElement]:
        return [self.ring.element(row) for row in self._c]

    def array(self) -> np.ndarray:
        return self._c.copy()

    def terms(self) -> dict[int, RingElement]:
        return {
            self.low + i: self.ring.element(row)
            for i, row in enumerate(self._c)
            if row.any()
        }

    def valuation(self) -> int | None:
        """Least exponent with a nonzero coefficient, or None if zero to precision."""
        nz = np.nonzero(self._c.any(axis=1))[0] if self._c.size else []
        if len(nz) == 0:
            return None
        return self.low + int(nz[0])

    def is_zero(self) -> bool:
        return self.valuation() is None

    def truncate(self, prec: int) -> "TruncatedSeries":
        if prec >= self.prec:
            return self
        if prec <= self.low:
            return TruncatedSeries(self.ring, _zeros(self.ring, 0), prec, prec)
        return TruncatedSeries(self.ring, self._c[: prec - self.low].copy(), self.low, prec)

    def with_low(self, low: int) -> "TruncatedSeries":
        """Same series with the array re-based at ``low`` (dropping only zero terms)."""
        if low == self.low:
            return self
        if low < self.low:
            pad = _zeros(self.ring, self.low - low)
            return TruncatedSeries(self.ring, np.concatenate([pad, self._c]), low, self.prec)
        v = self.valuation()
        if v is not None and v < low:
            raise SeriesError("cannot drop nonzero terms")
        low = min(low, self.prec)
        return TruncatedSeries(self.ring, self._c[low - self.low :].copy(), low, self.prec)

    def normalized(self) -> "TruncatedSeries":
        """Drop leading zero coefficients below exponent 0."""
        v = self.valuation()
        target = 0 if v is None else min(v, 0)
        if target > self.low:
            return self.with_low(min(target, self.prec))
        return self

    # -- comparison ----------------------------------------------------------
    def agrees_with(self, other: "TruncatedSeries", upto: int | None = None) -> bool:
        """Equality on the shared window (below ``upto`` if given)."""
        top = min(self.prec, other.prec)
        if upto is not None:
            top = min(top, upto)
        low = min(self.low, other.low)
        return _window(self, low, top).tolist() == _window(other, low, top).tolist()

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.ring is other.ring
            and self.prec == other.prec
            and self.agrees_with(other)
        )

    def __hash__(self):
        s = self.normalized()
        return hash((self.ring.descriptor, s.low, s.prec, s._c.tobytes()))

    # -- arithmetic ------------------------------------------------------------
    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            if other.ring is not self.ring:
                raise SeriesError("series over different rings")
            return other
        c = self.ring(other)
        return TruncatedSeries.constant(self.ring, c, max(self.prec, 1))

    def __add__(self, other):
        o = self._coerce(other)
        low = min(self.low, o.low)
        top = min(self.prec, o.prec)
        c = self.ring.reduce_array(_window(self, low, top) + _window(o, low, top))
        return TruncatedSeries(self.ring, c, low, top)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.ring, self.ring.reduce_array(-self._c), self.low, self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RingElement)) and not isinstance(other, bool):
            return self.scale(self.ring(other))
        return _mul(self, self._coerce(other))

    def __rmul__(self, other):
        return self.__mul__(other)

    def scale(self, c: RingElement) -> "TruncatedSeries":
        c = self.ring(c)
        if self.ring.dim == 1:
            out = self.ring.reduce_array(self._c * c.vec[0])
            if isinstance(self.ring, RationalField):
                out = self._c * c.vec[0]
        else:
            other = TruncatedSeries.constant(self.ring, c, 1)
            out = self.ring.series_mul(self._c, other._c, self._c.shape[0])
        return TruncatedSeries(self.ring, out, self.low, self.prec)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, RingElement)):
            return self.scale(self.ring(other).inverse())
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        v = self.valuation()
        if e == 0:
            # the constant 1 is exact; keep the operand's relative precision
            rel = self.prec - (v if v is not None else self.prec)
            return TruncatedSeries.constant(self.ring, 1, max(rel, 1))
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inverse(self) -> "TruncatedSeries":
        v = self.valuation()
        if v is None:
            raise SeriesError("cannot invert a series that is zero to precision")
        lead = self.coefficient(v)
        if not lead.is_unit():
            raise SeriesError(f"leading coefficient {lead} is not a unit")
        rel = self.prec - v
        unit = TruncatedSeries(self.ring, self._c[v - self.low :].copy(), 0, rel)
        inv = _unit_inverse(unit)
        return TruncatedSeries(self.ring, inv._c, -v, rel - v)

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by T^k."""
        return TruncatedSeries(self.ring, self._c.copy(), self.low + k, self.prec + k)

    def derivative(self) -> "TruncatedSeries":
        return derivative(self)

    def __call__(self, g: "TruncatedSeries") -> "TruncatedSeries":
        return compose(self, g)

    def __str__(self):
        parts = []
        for e, c in sorted(self.terms().items()):
            mono = "" if e == 0 else ("T" if e == 1 else f"T^{e}")
            cs = str(c)
            if " + " in cs and mono:
                cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        parts.append(f"O(T^{self.prec})")
        return " + ".join(parts)

    def __repr__(self):
        return f"TruncatedSeries({self}, {self.ring})"

    def to_literal(self) -> str:
        """Sparse literal without the O-term (parseable by :meth:`parse`)."""
        s = str(self)
        s = s.rsplit(" + O(", 1)[0] if " + O(" in s else ("0" if s.startswith("O(") else s)
        return s


# ---------------------------------------------------------------------------
# helpers


def _zeros(ring: Ring, n: int) -> np.ndarray:
    if isinstance(ring, RationalField):
        return np.array([Fraction(0)] * (n * ring.dim), dtype=object).reshape(n, ring.dim)
    return np.zeros((n, ring.dim), dtype=ring.dtype)


def _vec(ring: Ring, c) -> tuple:
    return ring(c).vec


def _window(s: TruncatedSeries, low: int, top: int) -> np.ndarray:
    """Coefficients of exponents ``low..top-1`` (zero-padded below s.low)."""
    out = _zeros(s.ring, max(top - low, 0))
    a = max(low, s.low)
    b = min(top, s.prec)
    if b > a:
        out[a - low : b - low] = s._c[a - s.low : b - s.low]
    return out


def _mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    ring = a.ring
    va, vb = a.valuation(), b.valuation()
    if va is None or vb is None:
        va_ = a.prec if va is None else va
        vb_ = b.prec if vb is None else vb
        prec = min(a.prec + vb_, b.prec + va_)
        low = min(prec, a.low + b.low)
        return TruncatedSeries.zeros(ring, prec, low)
    prec = min(a.prec + vb, b.prec + va)
    A = a._c[va - a.low : a.prec - a.low]
    B = b._c[vb - b.low : b.prec - b.low]
    n = prec - va - vb
    A = A[:n]
    B = B[:n]
    out = ring.series_mul(A, B, n)
    return TruncatedSeries(ring, out, va + vb, prec)


def _unit_inverse(u: TruncatedSeries) -> TruncatedSeries:
    """Inverse of a power series with unit constant term, by Newton iteration."""
    ring = u.ring
    n = u.prec
    c0 = u.coefficient(0).inverse()
    y = TruncatedSeries.constant(ring, c0, 1)
    # first make y exact in the coefficient ring at T-precision 1 (c0 exact already)
    k = 1
    while k < n:
        k = min(2 * k, n)
        uk = u.truncate(k)
        yk = TruncatedSeries(ring, _window(y, 0, k), 0, k)
        y = yk * (2 - uk * yk)
        y = y.truncate(k)
    # one final pass to certify: u*y = 1
    check = (u * y).truncate(n)
    one = TruncatedSeries.constant(ring, 1, n)
    guard = 0
    while not check.agrees_with(one):
        y = (y * (2 - u * y)).truncate(n)
        check = (u * y).truncate(n)
        guard += 1
        if guard > 64:
            raise SeriesError("series inverse failed to converge")  # pragma: no cover
    return TruncatedSeries(ring, _window(y, 0, n), 0, n)


def series_arith(a: TruncatedSeries, b: TruncatedSeries, op: str) -> TruncatedSeries:
    """Functional form of ``a + b``, ``a * b`` and ``a / b``."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise SeriesError(f"unknown operation {op!r}")


def derivative(f: TruncatedSeries) -> TruncatedSeries:
    ring = f.ring
    exps = np.arange(f.low, f.prec, dtype=object if ring.dtype is object else np.int64)
    c = ring.reduce_array(f._c * exps.reshape(-1, 1))
    out = TruncatedSeries(ring, c, f.low - 1, f.prec - 1)
    return out.with_low(0) if f.low == 0 else out


def _nilpotency(c: RingElement) -> int:
    if c.is_zero():
        return 1
    if isinstance(c.ring, RationalField):
        raise SeriesError("constant term must vanish over Q")
    e = c.nilpotency_index()
    if e is None:
        raise SeriesError(f"constant term {c} is a unit; composition leaves the ring")
    return e


def compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """``f(g(T))`` for g with nilpotent constant term.

    Laurent f is allowed when g(0) = 0 and g has a unit linear coefficient.
    """
    if f.ring is not g.ring:
        raise SeriesError("series over different rings")
    ring = f.ring
    if g.low < 0 and g.valuation() is not None and g.valuation() < 0:
        raise SeriesError("inner series must be a power series")
    g = g.with_low(0) if g.low < 0 else g
    c0 = g.coefficient(0) if g.prec > 0 else ring.zero()
    e = _nilpotency(c0)
    h = g - TruncatedSeries.constant(ring, c0, g.prec)
    vh = h.valuation()
    if vh is None:
        # g is a constant to precision: f(c0) is then only known mod T^(vh bound)
        vh = g.prec
    fl = f.normalized()
    if fl.low < 0:
        if not c0.is_zero():
            raise SeriesError("Laurent composition needs g(0) = 0")
        lead = g.coefficient(vh) if vh < g.prec else ring.zero()
        if not lead.is_unit():
            raise SeriesError("Laurent composition needs a unit leading coefficient")
        k = -fl.low
        tail = fl.shift(k)  # power series
        body = compose(tail, g)
        return body * (g ** (-k))
    prec = min(g.prec, (f.prec - e + 1) * vh) if f.prec - e + 1 > 0 else min(g.prec, 0)
    if prec <= 0:
        return TruncatedSeries.zeros(ring, max(prec, 0))
    # terms f_i with (i - e + 1) * vh >= prec contribute nothing
    n_terms = min(f.prec, prec // vh + e) if vh > 0 else f.prec
    coeffs = _window(fl, 0, n_terms)
    gp = g.truncate(prec)
    acc = TruncatedSeries.zeros(ring, prec)
    for i in range(n_terms - 1, -1, -1):
        acc = (acc * gp).truncate(prec)
        if coeffs[i].any():
            const = TruncatedSeries(ring, coeffs[i].reshape(1, -1), 0, 1)
            acc = acc + TruncatedSeries(ring, _window(const, 0, prec), 0, prec)
    return TruncatedSeries(ring, _window(acc, 0, prec), 0, prec)


def reversion(f: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse g with f(g) = g(f) = T, by Newton iteration."""
    ring = f.ring
    f = f.with_low(0) if f.low < 0 else f
    if f.prec < 2:
        raise SeriesError("need at least the linear coefficient")
    c0 = f.coefficient(0)
    e = _nilpotency(c0)
    f1 = f.coefficient(1)
    if not f1.is_unit():
        raise SeriesError(f"linear coefficient {f1} is not a unit")
    target = f.prec - e + 1
    T = TruncatedSeries.variable(ring, target)
    fp = derivative(f)
    g = (T - c0) * f1.inverse()
    g = g.truncate(target)
    for _ in range(4 * (target.bit_length() + 2) + 4 * e):
        r = compose(f, g)
        if r.agrees_with(T) and r.prec >= target:
            break
        err = (r - T).truncate(target)
        d = compose(fp, g)
        g = (g - err / d).truncate(target)
    else:
        raise SeriesError("reversion failed to converge")
    if g.prec < target:
        raise SeriesError("reversion lost precision")  # pragma: no cover
    return TruncatedSeries(ring, _window(g, 0, target), 0, target)


def ring_mth_root(c: RingElement, m: int) -> RingElement:
    """An m-th root of a unit c; the residue root is the least one in [1, p)."""
    ring = c.ring
    if isinstance(ring, RationalField):
        x = c.to_fraction()
        num = _int_root(x.numerator, m)
        den = _int_root(x.denominator, m)
        if num is None or den is None:
            raise SeriesError(f"{x} is not an m-th power in Q")
        return ring(Fraction(num, den))
    if m % ring.p == 0:
        raise SeriesError("m is divisible by the characteristic")
    if not c.is_unit():
        raise SeriesError(f"{c} is not a unit")
    r0 = None
    res = c.residue()
    for r in range(1, ring.p):
        if pow(r, m, ring.p) == res:
            r0 = r
            break
    if r0 is None:
        raise SeriesError(f"{c} has no m-th root (residue not an m-th power)")
    r = ring(r0)
    for _ in range(8 * ring.dim * 8 + 16):
        rm = r ** m
        if rm == c:
            return r
        r = r - (rm - c) / (ring(m) * r ** (m - 1))
    raise SeriesError("ring root did not converge")  # pragma: no cover


def _int_root(n: int, m: int) -> int | None:
    sign = -1 if n < 0 else 1
    if sign < 0 and m % 2 == 0:
        return None
    a = abs(n)
    r = int(round(a ** (1.0 / m))) if a else 0
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** m == a:
            return sign * cand
    return None


def mth_root_unit(s: TruncatedSeries, m: int) -> TruncatedSeries:
    """r with r^m = s, for s with unit constant term (Newton, T-adic doubling)."""
    ring = s.ring
    if m < 1:
        raise SeriesError("m must be positive")
    if ring.p is not None and m % ring.p == 0:
        raise SeriesError("m is divisible by the characteristic")
    s = s.normalized()
    if s.low < 0 or s.prec <= 0:
        raise SeriesError("need a power series with known constant term")
    c = s.coefficient(0)
    if not c.is_unit():
        raise SeriesError("constant term is not a unit")
    if m == 1:
        return s
    r = TruncatedSeries.constant(ring, ring_mth_root(c, m), 1)
    n = s.prec
    inv_m = ring(m).inverse()
    k = 1
    while True:
        k = min(2 * k, n)
        rk = TruncatedSeries(ring, _window(r, 0, k), 0, k)
        sk = s.truncate(k)
        r = (rk - (rk ** m - sk) * inv_m / rk ** (m - 1)).truncate(k)
        if k == n:
            break
    for _ in range(32):
        if (r ** m).agrees_with(s):
            return TruncatedSeries(ring, _window(r, 0, n), 0, n)
        r = (r - (r ** m - s) * inv_m / r ** (m - 1)).truncate(n)
    raise SeriesError("m-th root failed to converge")  # pragma: no cover
