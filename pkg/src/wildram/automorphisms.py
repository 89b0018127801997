"""Continuous automorphisms of A[[T]] and ramification of the groups they generate.

An automorphism is stored as the image ``s(T)`` of the variable, with
``s(0)`` nilpotent and ``s'(0)`` a unit. Orders are certified modulo
``T^prec``; when the automorphism carries a ``rebuild`` callable the order
is recomputed at twice the precision and both answers must agree.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

from .errors import InvalidInput, PrecisionError, SeriesError, VerificationError
from .rings import ArtinLocal, ModularRing, Ring, RingElement, prime_field
from .series import TruncatedSeries, compose, derivative, mth_root_unit, reversion

__all__ = [
    "SeriesAutomorphism",
    "RamificationData",
    "aut_power",
    "aut_order",
    "conductor",
    "ramification_data",
    "norm_series",
    "standard_sigma",
    "default_order_prec",
    "power_images",
]


def default_order_prec(p: int, m: int) -> int:
    beta = (m + 1) * (p - 1)
    return max(2 * beta + 2 * p, 64)


@dataclass(frozen=True)
class SeriesAutomorphism:
    image: TruncatedSeries
    rebuild: Callable[[int], "SeriesAutomorphism"] | None = field(default=None, compare=False, repr=False)
    label: str = ""

    def __post_init__(self):
        s = self.image
        if s.prec < 2:
            raise InvalidInput("an automorphism needs precision at least 2")
        if s.valuation() is not None and s.valuation() < 0:
            raise InvalidInput("image of T must be a power series")
        c0 = s.coefficient(0)
        if not c0.is_nilpotent():
            raise InvalidInput("image of T must have nilpotent constant term")
        if not s.coefficient(1).is_unit():
            raise InvalidInput("image of T must have a unit linear coefficient")

    @property
    def ring(self) -> Ring:
        return self.image.ring

    @property
    def prec(self) -> int:
        return self.image.prec

    def __call__(self, f: TruncatedSeries) -> TruncatedSeries:
        """The action on series: f(T) -> f(s(T))."""
        return compose(f, self.image)

    def at_precision(self, prec: int) -> "SeriesAutomorphism":
        if prec <= self.prec:
            return SeriesAutomorphism(self.image.truncate(prec), self.rebuild, self.label)
        if self.rebuild is None:
            raise PrecisionError(f"automorphism known only to T^{self.prec}, need T^{prec}")
        return self.rebuild(prec)

    def to_dict(self) -> dict:
        return {"ring": str(self.ring), "image_of_T": self.image.to_literal(), "prec": self.prec}


@dataclass(frozen=True)
class RamificationData:
    order: int
    breaks: dict[int, int]  # j -> i(sigma^j)
    filtration: list[int]  # |G_i| for i = 0, 1, ...
    conductor: int | None
    beta: int

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "breaks": {str(j): i for j, i in sorted(self.breaks.items())},
            "filtration": self.filtration,
            "conductor": self.conductor,
            "beta": self.beta,
        }


def power_images(sigma: SeriesAutomorphism, count: int) -> list[TruncatedSeries]:
    """[T, s, s o s, ...] with ``count`` entries."""
    T = TruncatedSeries.variable(sigma.ring, sigma.prec)
    out = [T]
    cur = T
    for _ in range(count - 1):
        cur = compose(cur, sigma.image)
        out.append(cur)
    return out


def aut_power(sigma: SeriesAutomorphism, e: int) -> SeriesAutomorphism:
    img = sigma.image
    if e < 0:
        img = reversion(img)
        e = -e
    T = TruncatedSeries.variable(sigma.ring, img.prec)
    cur = T
    for _ in range(e):
        cur = compose(cur, img)
    return SeriesAutomorphism(cur, None, f"{sigma.label}^{e}" if sigma.label else "")


def _is_identity(s: TruncatedSeries) -> bool:
    T = TruncatedSeries.variable(s.ring, s.prec)
    return s.agrees_with(T)


def _order_at(sigma: SeriesAutomorphism, cap: int) -> int | None:
    cur = sigma.image
    for e in range(1, cap + 1):
        if _is_identity(cur):
            return e
        cur = compose(cur, sigma.image)
    return None


def aut_order(sigma: SeriesAutomorphism, cap: int, certify: bool = True) -> int | None:
    """Least e <= cap with sigma^e = Id mod T^prec (None when there is none).

    With ``certify`` and a rebuild callable, the answer is recomputed at
    double precision and a disagreement raises PrecisionError.
    """
    order = _order_at(sigma, cap)
    if certify and sigma.rebuild is not None:
        again = _order_at(sigma.at_precision(2 * sigma.prec), cap)
        if again != order:
            raise PrecisionError(
                f"order {order} at T^{sigma.prec} but {again} at T^{2 * sigma.prec}"
            )
    return order


def conductor(sigma: SeriesAutomorphism) -> int:
    T = TruncatedSeries.variable(sigma.ring, sigma.prec)
    v = (sigma.image - T).valuation()
    if v is None:
        raise InvalidInput("the identity has no conductor")
    m = v - 1
    p = sigma.ring.p
    if p is not None and m % p == 0:
        warnings.warn(f"conductor {m} is divisible by p={p}", stacklevel=2)
    return m


def _is_p_power(n: int, p: int) -> bool:
    while n > 1 and n % p == 0:
        n //= p
    return n == 1


def ramification_data(sigma: SeriesAutomorphism, cap: int | None = None) -> RamificationData:
    ring = sigma.ring
    p = ring.p
    if not isinstance(ring, ModularRing) or ring.n != 1:
        raise InvalidInput("ramification data needs an automorphism over F_p")
    cap = cap or p ** 3
    d = aut_order(sigma, cap)
    if d is None or not _is_p_power(d, p):
        raise InvalidInput(f"order {d} is not a power of {p} within precision")
    imgs = power_images(sigma, d)
    T = imgs[0]
    breaks = {}
    for j in range(1, d):
        v = (imgs[j] - T).valuation()
        if v is None:
            raise PrecisionError("a nontrivial power agrees with Id to precision")
        breaks[j] = v
    top = max(breaks.values(), default=0)
    filtration = [1 + sum(1 for i in breaks.values() if i >= k + 1) for k in range(top)]
    beta = sum(breaks.values())
    if beta != sum(g - 1 for g in filtration):
        raise VerificationError("different exponent disagrees between the two sums")
    m = None
    if d == p:
        m = breaks[1] - 1
        if beta != (m + 1) * (p - 1):
            raise VerificationError(f"beta={beta} but (m+1)(p-1)={(m + 1) * (p - 1)}")
    return RamificationData(d, breaks, filtration, m, beta)


def norm_series(sigma: SeriesAutomorphism, order: int | None = None) -> TruncatedSeries:
    """Y = product of the conjugates sigma^i(T), i < order."""
    if order is None:
        order = aut_order(sigma, sigma.ring.p ** 3 if sigma.ring.p else 64)
        if order is None:
            raise InvalidInput("order not established within precision")
    imgs = power_images(sigma, order)
    Y = imgs[0]
    for s in imgs[1:]:
        Y = Y * s
    if Y.valuation() != order and order > 0:
        raise VerificationError("norm series has the wrong valuation")
    if not compose(Y, sigma.image).agrees_with(Y):
        raise VerificationError("norm series is not invariant")
    return Y


def _build_sigma(p: int, m: int, ring: Ring, a: RingElement, prec: int) -> TruncatedSeries:
    T = TruncatedSeries.variable(ring, prec)
    if m == 1:
        return (T + a) / (T + (1 + a))
    # T * (a + T^m)^(-1/m)
    denom = mth_root_unit(T ** m + a, m)
    return T * denom.inverse()


def standard_sigma(
    p: int, m: int, ring: Ring | None = None, a: RingElement | int | str | None = None, prec: int | None = None
) -> SeriesAutomorphism:
    """The order-p model family used throughout.

    m = 1: ``(T + a)/(1 + T + a)`` with a in the maximal ideal.
    m > 1: ``T (a + T^m)^(-1/m)``, i.e. ``sigma(T)^(-m) = a T^(-m) + 1``,
    with a in 1 + maximal ideal. At a = 1 this is ``T/(1 + T^m)^(1/m)``.
    """
    if ring is None:
        ring = prime_field(p)
    if ring.p != p:
        raise InvalidInput("ring characteristic does not match p")
    if m < 1 or math.gcd(m, p) != 1:
        raise InvalidInput(f"need gcd(m, p) = 1, got m={m}, p={p}")
    if a is None:
        a = 0 if m == 1 else 1
    a = ring(a)
    if m == 1 and not a.is_nilpotent():
        raise InvalidInput("for m = 1 the parameter must lie in the maximal ideal")
    if m > 1 and not (a - 1).is_nilpotent():
        raise InvalidInput("for m > 1 the parameter must lie in 1 + maximal ideal")
    prec = prec or default_order_prec(p, m)

    def rebuild(n: int) -> SeriesAutomorphism:
        return SeriesAutomorphism(_build_sigma(p, m, ring, a, n), rebuild, label)

    label = f"sigma[p={p},m={m},a={a}]"
    return rebuild(prec)
