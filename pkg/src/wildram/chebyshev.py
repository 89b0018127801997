"""Chebyshev polynomials and the conductor-one versal ring.

For 2X = Z + 1/Z the polynomials T_p and S_{p-1} satisfy
``2 T_p(X) = Z^p + Z^-p`` and ``(Z - 1/Z) S_{p-1}(X) = Z^p - Z^-p``. Their
gcd phi, shifted to psi(X) = phi(X/2 + 1), cuts out the parameter space
of order-p Moebius lifts ``(T + a)/(1 + T + a)``.

All polynomial work is exact over Q; p-integrality is audited by looking
at denominators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import InvalidInput, VerificationError
from .rings import (
    ModularRing,
    RationalField,
    Ring,
    RingElement,
    artin_local,
    integers_mod,
    is_prime,
    p_valuation,
)
from .series import TruncatedSeries, compose

__all__ = [
    "IntPolynomial",
    "MobiusMatrix",
    "BezoutCertificate",
    "MobiusVerdict",
    "cheb_polys",
    "psi_poly",
    "mobius_order_test",
    "versal_m1_check",
]


class IntPolynomial:
    """Univariate polynomial with exact rational coefficients (low degree first)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def x(cls) -> "IntPolynomial":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "IntPolynomial":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def _lift(self, other) -> "IntPolynomial":
        return other if isinstance(other, IntPolynomial) else IntPolynomial([other])

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return IntPolynomial([self[i] + o[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        if not self.coeffs or not o.coeffs:
            return IntPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        r = IntPolynomial([1])
        for _ in range(e):
            r = r * self
        return r

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = IntPolynomial([other])
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def divmod(self, other: "IntPolynomial") -> tuple["IntPolynomial", "IntPolynomial"]:
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        q = [Fraction(0)] * max(len(r) - other.degree, 1)
        lead = other.coeffs[-1]
        for k in range(len(r) - 1, other.degree - 1, -1):
            c = r[k] / lead
            if c:
                q[k - other.degree] = c
                for i, b in enumerate(other.coeffs):
                    r[k - other.degree + i] -= c * b
        return IntPolynomial(q), IntPolynomial(r[: other.degree] if other.degree > 0 else [])

    def compose(self, inner: "IntPolynomial") -> "IntPolynomial":
        acc = IntPolynomial()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def __call__(self, x):
        """Evaluate at a Fraction, int or RingElement (denominators must be units)."""
        if isinstance(x, RingElement):
            acc = x.ring.zero()
            for c in reversed(self.coeffs):
                acc = acc * x + x.ring(c)
            return acc
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def denominators(self) -> set[int]:
        return {c.denominator for c in self.coeffs}

    def is_p_integral(self, p: int) -> bool:
        return all(d % p for d in self.denominators())

    def valuations(self, p: int) -> list:
        return [p_valuation(c, p) for c in self.coeffs]

    def reduce_mod(self, p: int) -> list[int]:
        """Coefficients in F_p (requires p-integrality)."""
        if not self.is_p_integral(p):
            raise InvalidInput("polynomial is not p-integral")
        out = [(c.numerator * pow(c.denominator, -1, p)) % p for c in self.coeffs]
        while out and out[-1] == 0:
            out.pop()
        return out

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise InvalidInput("polynomial has non-integer coefficients")
        return [int(c) for c in self.coeffs]

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            sign = "-" if c < 0 else "+"
            a = abs(c)
            body = str(a) if not mono else (mono if a == 1 else f"{a}*{mono}")
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"IntPolynomial({self})"


def _check_odd_prime(p: int) -> None:
    if not is_prime(p) or p == 2:
        raise InvalidInput(f"need an odd prime, got {p}")


def cheb_polys(p: int) -> tuple[IntPolynomial, IntPolynomial]:
    """(T_p, S_{p-1}) from the binomial sums, checked against the Laurent identities."""
    _check_odd_prime(p)
    X2 = IntPolynomial([0, 2])
    Tp = IntPolynomial()
    for l in range(p // 2 + 1):
        Tp = Tp + X2 ** (p - 2 * l) * (Fraction(comb(p - l, l) * p, p - l) * (-1) ** l / 2)
    S = IntPolynomial()
    for l in range((p - 1) // 2 + 1):
        S = S + X2 ** (p - 1 - 2 * l) * (comb(p - 1 - l, l) * (-1) ** l)
    if not laurent_identities_hold(p, Tp, S):
        raise VerificationError("Chebyshev defining identities fail")
    return Tp, S


# Laurent polynomials in Z as {exponent: Fraction}


def _lmul(a: dict, b: dict) -> dict:
    out: dict[int, Fraction] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _ladd(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def _leval(poly: IntPolynomial, x: dict) -> dict:
    acc: dict = {}
    for c in reversed(poly.coeffs):
        acc = _ladd(_lmul(acc, x), {0: c} if c else {})
    return acc


def laurent_identities_hold(p: int, Tp: IntPolynomial, S: IntPolynomial) -> bool:
    """Substitute X = (Z + 1/Z)/2 and compare both defining identities exactly."""
    x = {1: Fraction(1, 2), -1: Fraction(1, 2)}
    lhs1 = {e: 2 * c for e, c in _leval(Tp, x).items()}
    rhs1 = {p: Fraction(1), -p: Fraction(1)}
    lhs2 = _lmul({1: Fraction(1), -1: Fraction(-1)}, _leval(S, x))
    rhs2 = {p: Fraction(1), -p: Fraction(-1)}
    return lhs1 == rhs1 and lhs2 == rhs2


@dataclass(frozen=True)
class BezoutCertificate:
    p: int
    Tp: IntPolynomial
    S: IntPolynomial
    phi: IntPolynomial
    psi: IntPolynomial
    U: IntPolynomial
    V: IntPolynomial
    identity_holds: bool
    denominators_powers_of_two: bool
    psi_is_shifted_phi: bool
    psi_divides_both: bool
    psi_mod_p: list[int]
    psi_mod_p_unit: int | None  # c with psi = c X^((p-1)/2) mod p, else None

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "T_p": str(self.Tp),
            "S_p_minus_1": str(self.S),
            "phi": str(self.phi),
            "psi": str(self.psi),
            "U": str(self.U),
            "V": str(self.V),
            "bezout_identity": self.identity_holds,
            "denominators_powers_of_two": self.denominators_powers_of_two,
            "psi_is_shifted_phi": self.psi_is_shifted_phi,
            "psi_divides_both": self.psi_divides_both,
            "psi_mod_p": self.psi_mod_p,
            "psi_mod_p_unit": self.psi_mod_p_unit,
        }


def _power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def psi_poly(p: int) -> BezoutCertificate:
    """psi with the Bezout certificate U (T_p - 1) + V S_{p-1} = phi."""
    _check_odd_prime(p)
    Tp, S = cheb_polys(p)
    h = (p - 1) // 2
    two_x1 = IntPolynomial([2, 2])  # 2(X + 1)
    phi = IntPolynomial()
    for l in range(h + 1):
        phi = phi + two_x1 ** (h - l) * (comb(p - 1 - l, l) * (-1) ** l)
    x4 = IntPolynomial([4, 1])
    psi = IntPolynomial()
    for l in range(h + 1):
        psi = psi + x4 ** (h - l) * (comb(p - 1 - l, l) * (-1) ** l)
    U = phi * Fraction(-1, 2)
    V = IntPolynomial()
    for l in range(p // 2 + 1):
        V = V + two_x1 ** ((p + 1) // 2 - l) * (Fraction(comb(p - l, l) * p, p - l) * (-1) ** l)
    V = V * Fraction(1, 4)
    identity = U * (Tp - 1) + V * S == phi
    dens = all(_power_of_two(d) for d in U.denominators() | V.denominators())
    shift = IntPolynomial([1, Fraction(1, 2)])  # X/2 + 1
    shifted = phi.compose(shift)
    A = (Tp - 1).compose(shift)
    B = S.compose(shift)
    divides = not A.divmod(psi)[1].coeffs and not B.divmod(psi)[1].coeffs
    red = psi.reduce_mod(p)
    unit = None
    if red and all(c == 0 for c in red[:-1]) and len(red) - 1 == h:
        unit = red[-1]
    cert = BezoutCertificate(
        p, Tp, S, phi, psi, U, V, identity, dens, shifted == psi, divides, red, unit
    )
    if not identity:
        raise VerificationError(f"Bezout identity fails for p={p}")
    return cert


# ---------------------------------------------------------------------------
# Moebius matrices


@dataclass(frozen=True)
class MobiusMatrix:
    a: RingElement
    b: RingElement
    c: RingElement
    d: RingElement

    @classmethod
    def family(cls, a: RingElement) -> "MobiusMatrix":
        one = a.ring.one()
        return cls(one, a, one, one + a)

    @property
    def det(self) -> RingElement:
        return self.a * self.d - self.b * self.c

    def __mul__(self, o: "MobiusMatrix") -> "MobiusMatrix":
        return MobiusMatrix(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __pow__(self, e: int) -> "MobiusMatrix":
        one, zero = self.a.ring.one(), self.a.ring.zero()
        r = MobiusMatrix(one, zero, zero, one)
        for _ in range(e):
            r = r * self
        return r

    def is_identity(self) -> bool:
        return self.a == 1 and self.d == 1 and self.b.is_zero() and self.c.is_zero()

    def entries(self) -> list[list[str]]:
        return [[str(self.a), str(self.b)], [str(self.c), str(self.d)]]


@dataclass(frozen=True)
class MobiusVerdict:
    matrix: bool
    chebyshev: bool
    series: bool | None
    power: MobiusMatrix

    @property
    def is_identity_power(self) -> bool:
        return self.matrix

    def to_dict(self) -> dict:
        return {
            "matrix_power_is_identity": self.matrix,
            "chebyshev_conditions": self.chebyshev,
            "series_composition": self.series,
            "power": self.power.entries(),
        }


def mobius_order_test(ring: Ring, a, p: int | None = None, prec: int | None = None) -> MobiusVerdict:
    """Three independent tests of M_a^p = Id (matrix, Chebyshev, composition).

    The composition route needs a nilpotent and is skipped (None) otherwise.
    """
    if p is None:
        p = ring.p
    if p is None:
        raise InvalidInput("give p when working over Q")
    _check_odd_prime(p)
    a = ring(a)
    two = ring(2)
    if not two.is_unit():
        raise InvalidInput("2 must be a unit")
    Mp = MobiusMatrix.family(a) ** p
    by_matrix = Mp.is_identity()
    Tp, S = cheb_polys(p)
    x = a / two + 1
    by_cheb = (Tp(x) - 1).is_zero() and S(x).is_zero()
    series = None
    if a.is_nilpotent():
        # each composition costs about nilpotency_index - 1 digits of precision
        prec = prec or p * a.nilpotency_index() + 16
        T = TruncatedSeries.variable(ring, prec)
        s = (T + a) / (T + (1 + a))
        cur = T
        for _ in range(p):
            cur = compose(cur, s)
        series = cur.agrees_with(T)
    if by_matrix != by_cheb or (series is not None and series != by_matrix):
        raise VerificationError(
            f"order tests disagree: matrix={by_matrix} chebyshev={by_cheb} series={series}"
        )
    return MobiusVerdict(by_matrix, by_cheb, series, Mp)


def versal_m1_check(p: int, n: int = 3, prec: int | None = None) -> dict:
    """sigma_X has order p over Z/p^n[X]/(psi), and psi is Eisenstein."""
    _check_odd_prime(p)
    if p == 3:
        raise InvalidInput("p = 3 with conductor 1 is rigid; no versal parameter")
    cert = psi_poly(p)
    psi = cert.psi
    coeffs = psi.int_coeffs()
    eisenstein = (
        coeffs[-1] == 1
        and all(c % p == 0 for c in coeffs[:-1])
        and coeffs[0] % (p * p) != 0
    )
    ring = artin_local(integers_mod(p, n), "X", modulus=coeffs)
    X = ring.gen("X")
    prec = prec or p * X.nilpotency_index() + 16
    T = TruncatedSeries.variable(ring, prec)
    s = (T + X) / (T + (1 + X))
    cur = T
    for _ in range(p):
        cur = compose(cur, s)
    order_ok = cur.agrees_with(T) and cur.prec >= 2
    partial = T
    proper = True
    for _ in range(1, p):
        partial = compose(partial, s)
        if partial.agrees_with(T):
            proper = False
    verdict = mobius_order_test(ring, X, p, prec=prec)
    report = {
        "p": p,
        "n": n,
        "ring": str(ring),
        "psi": str(psi),
        "degree": psi.degree,
        "eisenstein": eisenstein,
        "order_p": order_ok,
        "no_smaller_order": proper,
        "matrix_power_identity": verdict.matrix,
        "series_precision": cur.prec,
    }
    if not (order_ok and proper and eisenstein and verdict.matrix):
        raise VerificationError(f"versal check failed: {report}")
    return report
