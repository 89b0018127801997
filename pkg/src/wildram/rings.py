"""Exact coefficient rings.

Supported presentations:

* the prime field F_p and the truncated Witt ring Z/p^n,
* the rationals Q, with p-adic valuations on demand,
* finite-length local algebras over F_p or Z/p^n, given either by one monic
  univariate modulus whose lower coefficients are nilpotent (for example
  ``u^4`` or ``X^2+5X+5`` over Z/125), or by truncating a polynomial ring
  at a total degree.

Every element stores a canonical coordinate vector over a fixed basis, so
equality and hashing are representation equality. Rings are interned:
equal descriptors give the same ring object.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import RingError

__all__ = [
    "RingDescriptor",
    "Ring",
    "ModularRing",
    "RationalField",
    "ArtinLocal",
    "RingElement",
    "SurjectionWitness",
    "mk_ring",
    "prime_field",
    "integers_mod",
    "rationals",
    "artin_local",
    "small_extension",
    "is_prime",
    "p_valuation",
]


def is_prime(n: int) -> bool:
    if not isinstance(n, int) or n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def p_valuation(x, p: int) -> float | int:
    """Exact p-adic valuation of an integer or Fraction (``inf`` for zero)."""
    x = Fraction(x)
    if x == 0:
        return float("inf")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


@dataclass(frozen=True)
class RingDescriptor:
    """Hashable description of a ring.

    ``kind`` is one of ``prime_field``, ``integers_mod_pn``, ``rationals``,
    ``artin_local``. An Artin local ring has a ``base`` descriptor (one of
    the two modular kinds), ``variables`` and exactly one of ``modulus``
    (coefficients low to high, monic, one variable) or ``truncation``.
    """

    kind: str
    p: int | None = None
    n: int = 1
    base: "RingDescriptor | None" = None
    variables: tuple[str, ...] = ()
    modulus: tuple[int, ...] | None = None
    truncation: int | None = None

    def __str__(self) -> str:
        if self.kind == "prime_field":
            return f"F{self.p}"
        if self.kind == "integers_mod_pn":
            return f"Z/{self.p}^{self.n}"
        if self.kind == "rationals":
            return "Q"
        head = f"{self.base}[{','.join(self.variables)}]"
        if self.truncation is not None:
            return f"{head}/deg({self.truncation})"
        return f"{head}/({_poly_str(self.modulus, self.variables[0])})"


def _poly_str(coeffs: Sequence[int], var: str) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return "+".join(terms) if terms else "0"


class Ring:
    """Common interface. Concrete rings implement the ``_vec`` primitives."""

    descriptor: RingDescriptor
    p: int | None
    dim: int  # number of coordinates per element
    modulus: int | None  # coordinate modulus (None for Q)
    dtype: object

    # -- element construction ---------------------------------------------
    def __call__(self, x=0) -> "RingElement":
        if isinstance(x, RingElement):
            if x.ring is self:
                return x
            return self._coerce_element(x)
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, (int, np.integer)):
            return self._from_int(int(x))
        if isinstance(x, Fraction):
            return self._from_fraction(x)
        if isinstance(x, str):
            from .parsing import parse_element

            return parse_element(self, x)
        raise RingError(f"cannot coerce {x!r} into {self}")

    def zero(self) -> "RingElement":
        return self._from_int(0)

    def one(self) -> "RingElement":
        return self._from_int(1)

    def element(self, vec: Iterable) -> "RingElement":
        return RingElement(self, self._normalize(tuple(vec)))

    def _from_fraction(self, x: Fraction) -> "RingElement":
        num = self._from_int(x.numerator)
        den = self._from_int(x.denominator)
        if not den.is_unit():
            raise RingError(f"denominator of {x} is not invertible in {self}")
        return num * den.inverse()

    def _coerce_element(self, x: "RingElement") -> "RingElement":
        # base ring elements embed into Artin rings over them
        if isinstance(self, ArtinLocal) and x.ring is self.base:
            return self._from_int(int(x.vec[0]))
        raise RingError(f"cannot coerce element of {x.ring} into {self}")

    # -- structure --------------------------------------------------------
    def __str__(self) -> str:
        return str(self.descriptor)

    def __repr__(self) -> str:
        return f"<ring {self.descriptor}>"

    @property
    def characteristic(self) -> int:
        return 0 if self.modulus is None else self.modulus

    def is_finite(self) -> bool:
        return self.modulus is not None

    def size(self) -> int:
        return self.modulus ** self.dim

    def elements(self) -> Iterator["RingElement"]:
        if not self.is_finite():
            raise RingError("Q cannot be enumerated")
        for vec in itertools.product(range(self.modulus), repeat=self.dim):
            yield RingElement(self, vec)

    def basis(self) -> list["RingElement"]:
        out = []
        for i in range(self.dim):
            v = [0] * self.dim
            v[i] = 1
            out.append(RingElement(self, tuple(v)))
        return out

    def maximal_ideal_generators(self) -> list["RingElement"]:
        raise NotImplementedError

    def length(self) -> int:
        raise NotImplementedError

    # -- vector primitives (overridden) -----------------------------------
    def _normalize(self, vec: tuple) -> tuple:
        raise NotImplementedError

    def _from_int(self, n: int) -> "RingElement":
        raise NotImplementedError

    def _add(self, a: tuple, b: tuple) -> tuple:
        return self._normalize(tuple(x + y for x, y in zip(a, b)))

    def _neg(self, a: tuple) -> tuple:
        return self._normalize(tuple(-x for x in a))

    def _mul(self, a: tuple, b: tuple) -> tuple:
        raise NotImplementedError

    def _is_unit(self, a: tuple) -> bool:
        raise NotImplementedError

    def _inverse(self, a: tuple) -> tuple:
        raise NotImplementedError

    # -- series support: products of coefficient arrays of shape (n, dim) --
    def series_mul(self, A: np.ndarray, B: np.ndarray, n: int) -> np.ndarray:
        raise NotImplementedError

    def reduce_array(self, A: np.ndarray) -> np.ndarray:
        if self.modulus is None:
            return A
        return A % self.modulus


class ModularRing(Ring):
    """Z/p^n; the prime field when n = 1."""

    def __init__(self, descriptor: RingDescriptor):
        self.descriptor = descriptor
        self.p = descriptor.p
        self.n = descriptor.n
        self.modulus = self.p ** self.n
        self.dim = 1
        self.dtype = np.int64 if self.modulus < 2**20 else object

    def _normalize(self, vec):
        return (int(vec[0]) % self.modulus,)

    def _from_int(self, n):
        return RingElement(self, (n % self.modulus,))

    def _mul(self, a, b):
        return ((a[0] * b[0]) % self.modulus,)

    def _is_unit(self, a):
        return a[0] % self.p != 0

    def _inverse(self, a):
        return (pow(a[0], -1, self.modulus),)

    def maximal_ideal_generators(self):
        return [self._from_int(self.p)] if self.n > 1 else []

    def length(self):
        return self.n

    def monomials(self):
        return [()]

    def series_mul(self, A, B, n):
        out = _convolve(A[:, 0], B[:, 0], self.modulus)[:n]
        res = np.zeros((n, 1), dtype=self.dtype)
        res[: len(out), 0] = out
        return res % self.modulus


class RationalField(Ring):
    """Q with exact Fraction coordinates."""

    def __init__(self, descriptor: RingDescriptor):
        self.descriptor = descriptor
        self.p = None
        self.modulus = None
        self.dim = 1
        self.dtype = object

    def _normalize(self, vec):
        return (Fraction(vec[0]),)

    def _from_int(self, n):
        return RingElement(self, (Fraction(n),))

    def _from_fraction(self, x):
        return RingElement(self, (x,))

    def _mul(self, a, b):
        return (a[0] * b[0],)

    def _is_unit(self, a):
        return a[0] != 0

    def _inverse(self, a):
        return (1 / a[0],)

    def maximal_ideal_generators(self):
        return []

    def series_mul(self, A, B, n):
        out = np.convolve(A[:, 0].astype(object), B[:, 0].astype(object))[:n]
        res = np.array([Fraction(0)] * n, dtype=object).reshape(n, 1)
        res[: len(out), 0] = out
        return res


class ArtinLocal(Ring):
    """Finite-length local algebra over F_p or Z/p^n.

    Coordinates are taken over the monomial basis below the relations, in
    graded-lexicographic order, constant monomial first.
    """

    def __init__(self, descriptor: RingDescriptor):
        self.descriptor = descriptor
        self.base = mk_ring(descriptor.base)
        self.p = self.base.p
        self.modulus = self.base.modulus
        self.variables = descriptor.variables
        self.dtype = self.base.dtype
        if descriptor.truncation is not None:
            d = descriptor.truncation
            nv = len(self.variables)
            monos = [
                e
                for total in range(d)
                for e in sorted(_compositions(total, nv), reverse=True)
            ]
            self._monos = monos
            index = {e: i for i, e in enumerate(monos)}
            terms = []
            for i, a in enumerate(monos):
                for j, b in enumerate(monos):
                    c = tuple(x + y for x, y in zip(a, b))
                    if c in index:
                        terms.append((i, j, index[c], 1))
            self._univariate = None
        else:
            f = [int(c) % self.modulus for c in descriptor.modulus]
            deg = len(f) - 1
            self._monos = [(i,) for i in range(deg)]
            # reduction table: rows are u^k for k < 2 deg - 1
            red = np.zeros((max(2 * deg - 1, 1), deg), dtype=object)
            for k in range(deg):
                red[k, k] = 1
            for k in range(deg, 2 * deg - 1):
                prev = red[k - 1]
                shifted = np.zeros(deg, dtype=object)
                shifted[1:] = prev[:-1]
                top = prev[-1]
                for i in range(deg):
                    shifted[i] -= top * f[i]
                red[k] = shifted % self.modulus
            self._univariate = red.astype(self.dtype)
            if deg >= 2:
                self._u_vec = tuple(int(c) for c in red[1])
            else:
                self._u_vec = ((-f[0]) % self.modulus,)
            terms = []
            for i in range(deg):
                for j in range(deg):
                    row = red[i + j]
                    for k in range(deg):
                        if row[k] % self.modulus:
                            terms.append((i, j, k, int(row[k])))
        self.dim = len(self._monos)
        self._terms = terms
        self._index = {e: i for i, e in enumerate(self._monos)}

    # coordinates
    def monomials(self) -> list[tuple[int, ...]]:
        return list(self._monos)

    def gen(self, name: str) -> "RingElement":
        if name not in self.variables:
            raise RingError(f"{name!r} is not a variable of {self}")
        k = self.variables.index(name)
        e = tuple(1 if i == k else 0 for i in range(len(self.variables)))
        return self.monomial(e)

    def gens(self) -> list["RingElement"]:
        return [self.gen(v) for v in self.variables]

    def monomial(self, exps: tuple[int, ...]) -> "RingElement":
        if exps in self._index:
            v = [0] * self.dim
            v[self._index[exps]] = 1
            return RingElement(self, tuple(v))
        if self._univariate is None:
            return self.zero()
        x = self.one()
        for _ in range(exps[0]):
            x = RingElement(self, self._mul(x.vec, self._u_vec))
        return x

    def _normalize(self, vec):
        return tuple(int(c) % self.modulus for c in vec)

    def _from_int(self, n):
        v = [0] * self.dim
        v[0] = n % self.modulus
        return RingElement(self, tuple(v))

    def _mul(self, a, b):
        out = [0] * self.dim
        for i, j, k, c in self._terms:
            x, y = a[i], b[j]
            if x and y:
                out[k] += x * y * c
        m = self.modulus
        return tuple(v % m for v in out)

    def _is_unit(self, a):
        return a[0] % self.p != 0

    def _inverse(self, a):
        m = self.modulus
        c = pow(a[0], -1, m)
        x = tuple((c * v) % m for v in a)  # x = 1 + nilpotent
        one = self._from_int(1).vec
        two = self._from_int(2).vec
        y = one
        for _ in range(4 * self.dim * self.descriptor.base.n + 8):
            xy = self._mul(x, y)
            if xy == one:
                return tuple((c * v) % m for v in y)
            y = self._mul(y, self._add(two, self._neg(xy)))
        raise RingError("unit inverse failed to converge")  # pragma: no cover

    def maximal_ideal_generators(self):
        gens = self.gens()
        if self.base.n > 1:
            gens = [self._from_int(self.p)] + gens
        return gens

    def length(self):
        return self.dim * self.base.n

    def series_mul(self, A, B, n):
        L = self.dim
        m = self.modulus
        if self._univariate is not None:
            w = 2 * L - 1
            na, nb = A.shape[0], B.shape[0]
            pa = np.zeros((na, w), dtype=A.dtype)
            pa[:, :L] = A
            pb = np.zeros((nb, w), dtype=B.dtype)
            pb[:, :L] = B
            conv = _convolve(pa.ravel(), pb.ravel(), m)
            need = n * w
            flat = np.zeros(need, dtype=conv.dtype)
            k = min(need, len(conv))
            flat[:k] = conv[:k]
            flat %= m
            blocks = flat.reshape(n, w)
            return _matmul_mod(blocks, self._univariate, m)
        res = np.zeros((n, L), dtype=self.dtype)
        for i, j, k, c in self._terms:
            a = A[:, i]
            b = B[:, j]
            if not a.any() or not b.any():
                continue
            conv = _convolve(a, b, m)[:n]
            res[: len(conv), k] += (c * conv) % m
            res[: len(conv), k] %= m
        return res


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _convolve(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    """Convolution reduced mod m, switching to Python ints when int64 could overflow."""
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.int64)
    if a.dtype != object and b.dtype != object and (m - 1) ** 2 * min(len(a), len(b)) < 2**62:
        return np.convolve(a, b) % m
    out = np.convolve(a.astype(object), b.astype(object)) % m
    return out if m >= 2**20 else out.astype(np.int64)


def _matmul_mod(A: np.ndarray, B: np.ndarray, m: int) -> np.ndarray:
    if A.dtype != object and B.dtype != object and (m - 1) ** 2 * A.shape[1] < 2**62:
        return (A @ B) % m
    out = (A.astype(object) @ B.astype(object)) % m
    return out if m >= 2**20 else out.astype(np.int64)


class RingElement:
    """Immutable element: a ring plus a canonical coordinate tuple."""

    __slots__ = ("ring", "vec")

    def __init__(self, ring: Ring, vec: tuple):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "vec", vec)

    def __setattr__(self, name, value):
        raise AttributeError("RingElement is immutable")

    def _other(self, other) -> "RingElement | None":
        if isinstance(other, RingElement):
            if other.ring is self.ring:
                return other
            try:
                return self.ring(other)
            except RingError:
                return None
        if isinstance(other, (int, Fraction, np.integer)):
            return self.ring(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return RingElement(self.ring, self.ring._add(self.vec, o.vec))

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, self.ring._neg(self.vec))

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return RingElement(self.ring, self.ring._mul(self.vec, o.vec))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.ring is other.ring and self.vec == other.vec
        o = self._other(other)
        return o is not None and o.vec == self.vec

    def __hash__(self):
        return hash((self.ring.descriptor, self.vec))

    def __bool__(self):
        return any(self.vec)

    def is_zero(self) -> bool:
        return not any(self.vec)

    def is_unit(self) -> bool:
        return self.ring._is_unit(self.vec)

    def inverse(self) -> "RingElement":
        if not self.is_unit():
            raise RingError(f"{self} is not a unit in {self.ring}")
        return RingElement(self.ring, self.ring._inverse(self.vec))

    def is_nilpotent(self) -> bool:
        if isinstance(self.ring, RationalField):
            return self.is_zero()
        return not self.is_unit()

    def nilpotency_index(self) -> int | None:
        """Least e >= 1 with x^e = 0; None for units (and nonzero rationals)."""
        if isinstance(self.ring, RationalField):
            raise RingError("nilpotency index is not defined over Q")
        if self.is_unit():
            return None
        x = self
        e = 1
        while not x.is_zero():
            x = x * self
            e += 1
        return e

    def residue(self) -> int:
        """Image in the residue field F_p."""
        if isinstance(self.ring, RationalField):
            raise RingError("Q has no residue field")
        return int(self.vec[0]) % self.ring.p

    def valuation(self, p: int):
        """p-adic valuation (rationals only)."""
        if not isinstance(self.ring, RationalField):
            raise RingError("p-valuation is only available over Q")
        return p_valuation(self.vec[0], p)

    def to_fraction(self) -> Fraction:
        if isinstance(self.ring, RationalField):
            return self.vec[0]
        if self.ring.dim == 1:
            return Fraction(self.vec[0])
        raise RingError("element has no scalar value")

    def __int__(self):
        if self.ring.dim != 1 or isinstance(self.ring, RationalField):
            raise TypeError("not a scalar residue")
        return int(self.vec[0])

    def __str__(self):
        ring = self.ring
        if isinstance(ring, RationalField):
            return str(self.vec[0])
        if isinstance(ring, ModularRing):
            return str(self.vec[0])
        terms = []
        for c, e in zip(self.vec, ring._monos):
            if c == 0:
                continue
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(ring.variables, e) if k
            )
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"

    def __repr__(self):
        return f"RingElement({self}, {self.ring})"


@functools.lru_cache(maxsize=None)
def mk_ring(descriptor: RingDescriptor) -> Ring:
    """Validate a descriptor and return the (interned) ring it describes."""
    kind = descriptor.kind
    if kind == "rationals":
        return RationalField(descriptor)
    if kind in ("prime_field", "integers_mod_pn"):
        if not is_prime(descriptor.p):
            raise RingError(f"{descriptor.p} is not prime")
        if descriptor.n < 1:
            raise RingError("exponent n must be at least 1")
        if kind == "prime_field" and descriptor.n != 1:
            raise RingError("a prime field has n = 1")
        return ModularRing(descriptor)
    if kind != "artin_local":
        raise RingError(f"unknown ring kind {kind!r}")
    base = descriptor.base
    if base is None or base.kind not in ("prime_field", "integers_mod_pn"):
        raise RingError("an Artin local ring needs F_p or Z/p^n as base")
    base_ring = mk_ring(base)
    if not descriptor.variables:
        raise RingError("an Artin local ring needs at least one variable")
    if len(set(descriptor.variables)) != len(descriptor.variables):
        raise RingError("repeated variable names")
    if (descriptor.modulus is None) == (descriptor.truncation is None):
        raise RingError("give exactly one of modulus or truncation degree")
    if descriptor.truncation is not None:
        if descriptor.truncation < 1:
            raise RingError("truncation degree must be at least 1")
    else:
        if len(descriptor.variables) != 1:
            raise RingError("a modulus presentation takes exactly one variable")
        f = [int(c) % base_ring.modulus for c in descriptor.modulus]
        while len(f) > 1 and f[-1] == 0:
            f.pop()
        if len(f) < 2:
            raise RingError("modulus must have positive degree")
        if f[-1] != 1:
            raise RingError("modulus must be monic")
        if any(c % base_ring.p for c in f[:-1]):
            raise RingError(
                "modulus must reduce to a power of the variable mod p (local ring)"
            )
        if tuple(f) != tuple(descriptor.modulus):
            return mk_ring(
                RingDescriptor("artin_local", base.p, base.n, base, descriptor.variables, tuple(f))
            )
    return ArtinLocal(descriptor)


def prime_field(p: int) -> ModularRing:
    return mk_ring(RingDescriptor("prime_field", p, 1))


def integers_mod(p: int, n: int) -> ModularRing:
    if n == 1:
        return prime_field(p)
    return mk_ring(RingDescriptor("integers_mod_pn", p, n))


def rationals() -> RationalField:
    return mk_ring(RingDescriptor("rationals"))


def artin_local(
    base: Ring,
    variables: Sequence[str] | str,
    modulus: Sequence[int] | None = None,
    truncation: int | None = None,
) -> ArtinLocal:
    """Build F_p[u]/(f) (``modulus`` low to high) or F_p[x,y,...]/(deg >= d)."""
    if isinstance(variables, str):
        variables = (variables,)
    if not isinstance(base, ModularRing):
        raise RingError("base must be F_p or Z/p^n")
    mod = None if modulus is None else tuple(int(c) for c in modulus)
    return mk_ring(
        RingDescriptor(
            "artin_local", base.p, base.n, base.descriptor, tuple(variables), mod, truncation
        )
    )


# ---------------------------------------------------------------------------
# small extensions


@dataclass(frozen=True)
class SurjectionWitness:
    """A verified small extension A' -> A with kernel generator t."""

    source: Ring
    target: Ring
    t: RingElement
    images: tuple[tuple[int, ...], ...]  # image vector of each source basis vector

    def reduce(self, x: RingElement) -> RingElement:
        x = self.source(x)
        out = [0] * self.target.dim
        for c, img in zip(x.vec, self.images):
            if c:
                for k, v in enumerate(img):
                    out[k] += int(c) * v
        return self.target.element(out)

    def lift(self, y: RingElement) -> RingElement:
        """A preimage of y, built coordinate by coordinate."""
        y = self.target(y)
        cols = _basis_preimages(self)
        out = [0] * self.source.dim
        for k, c in enumerate(y.vec):
            if c:
                i = cols[k]
                out[i] += int(c)
        x = self.source.element(out)
        if self.reduce(x) != y:
            raise RingError("lift failed")  # pragma: no cover
        return x

    def scalar(self, x: RingElement) -> int:
        """The c in F_p with x = c*t, for x in the kernel."""
        x = self.source(x)
        for c in range(self.source.p):
            if self.t * c == x:
                return c
        raise RingError(f"{x} is not in the kernel F_p*t")


def _basis_preimages(w: SurjectionWitness) -> dict[int, int]:
    found = {}
    for i, img in enumerate(w.images):
        nz = [k for k, v in enumerate(img) if v]
        if len(nz) == 1 and img[nz[0]] == 1 and nz[0] not in found:
            found[nz[0]] = i
    if len(found) != w.target.dim:
        raise RingError("reduction map is not coordinatewise; no canonical lift")
    return found


def _natural_images(source: Ring, target: Ring) -> tuple[tuple[int, ...], ...]:
    """Images of the source basis under the natural reduction map."""
    if source.modulus is None or target.modulus is None:
        raise RingError("small extensions need finite rings")
    if source.p != target.p or source.modulus % target.modulus:
        raise RingError("coefficient rings are incompatible")
    src_vars = getattr(source, "variables", ())
    tgt_vars = getattr(target, "variables", ())
    if not set(tgt_vars) <= set(src_vars):
        raise RingError("target has variables the source lacks")
    images = []
    for mono in source.monomials() if isinstance(source, ArtinLocal) else [()]:
        named = dict(zip(src_vars, mono))
        if any(named[v] for v in src_vars if v not in tgt_vars):
            images.append(tuple([0] * target.dim))
            continue
        if isinstance(target, ArtinLocal):
            img = target.monomial(tuple(named.get(v, 0) for v in tgt_vars))
        else:
            img = target.one()
        images.append(img.vec)
    return tuple(images)


def small_extension(A_prime: Ring, A: Ring, exhaustive_limit: int = 200_000) -> SurjectionWitness:
    """Verify that the natural map A' -> A is a small extension and find t.

    The map sends each variable to the variable of the same name (or to 0
    when A lacks it) and reduces coefficients. Checks: the map is a ring
    homomorphism on basis pairs, it is onto, its kernel is t*A' for one t,
    and t kills the maximal ideal of A'.
    """
    images = _natural_images(A_prime, A)
    w0 = SurjectionWitness(A_prime, A, A_prime.zero(), images)
    basis = A_prime.basis()
    for x in basis:
        for y in basis:
            if w0.reduce(x * y) != w0.reduce(x) * w0.reduce(y):
                raise RingError("natural map is not a ring homomorphism")
    if w0.reduce(A_prime.one()) != A.one():
        raise RingError("natural map does not preserve 1")
    # kernel as an additive group
    kernel_gens = []
    coordinatewise = True
    seen_targets = set()
    for i, img in enumerate(images):
        nz = [k for k, v in enumerate(img) if v]
        if not nz:
            v = [0] * A_prime.dim
            v[i] = 1
            kernel_gens.append(A_prime.element(v))
        elif len(nz) == 1 and img[nz[0]] == 1 and nz[0] not in seen_targets:
            seen_targets.add(nz[0])
            if A.modulus != A_prime.modulus:
                v = [0] * A_prime.dim
                v[i] = A.modulus
                kernel_gens.append(A_prime.element(v))
        else:
            coordinatewise = False
    if coordinatewise:
        if len(seen_targets) != A.dim:
            raise RingError("natural map is not onto")
        kernel_size = A_prime.size() // A.size()
    else:
        if A_prime.size() > exhaustive_limit:
            raise RingError("ring too large for an exhaustive kernel search")
        kernel = [x for x in A_prime.elements() if w0.reduce(x).is_zero()]
        if A_prime.size() // len(kernel) != A.size():
            raise RingError("natural map is not onto")
        kernel_gens = [x for x in kernel if not x.is_zero()]
        kernel_size = len(kernel)
    if kernel_size == 1:
        raise RingError("the map is an isomorphism; the kernel is zero")
    maxgens = A_prime.maximal_ideal_generators()
    for g in kernel_gens:
        for mgen in maxgens:
            if not (g * mgen).is_zero():
                raise RingError(
                    f"kernel element {g} times {mgen} is nonzero: not killed by the maximal ideal"
                )
    if kernel_size != A_prime.p:
        raise RingError("kernel is not principal")
    t = kernel_gens[0]
    return SurjectionWitness(A_prime, A, t, images)
