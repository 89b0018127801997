"""Artin-Schreier classes, Harbater dimensions and deformed Artin-Schreier covers.

Classes in k((t)) / (k[[t]] + P(k((t)))), with P(x) = x^p - x, are put
in polar normal form by peeling off p-divisible pole orders. The deformed
covers live in characteristic p: for m = pq - l the equation

    t^l = xi^p - xi * a(t)^(p-1),    a(t) = t^q + x_1 t^(q-1) + ...

is solved for t as a series in the uniformizer (xi when l = 1, eta with
eta^l = xi otherwise), and the automorphism xi -> xi + a(t) is transported
to that uniformizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .automorphisms import SeriesAutomorphism, aut_order, conductor
from .cohomology import PrecisionPolicy, ThetaElement, h1_context
from .errors import InvalidInput, PrecisionError, VerificationError
from .linalg import rank_mod_p
from .rings import ArtinLocal, ModularRing, Ring, RingElement, artin_local, is_prime, prime_field
from .series import TruncatedSeries, compose, derivative, mth_root_unit

__all__ = [
    "ASClass",
    "PolarPart",
    "PolarReduction",
    "polar_reduce",
    "harbater_dim",
    "genus_rh",
    "split_conductor",
    "DeformedASCover",
    "build_deformed_cover",
    "valid_directions",
    "direction_field",
    "deformation_direction_valuation",
    "independence_check",
]


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")


# ---------------------------------------------------------------------------
# polar parts


@dataclass(frozen=True)
class ASClass:
    """A finite Laurent tail over F_p, stored as {exponent: coefficient}."""

    p: int
    terms: Mapping[int, int]

    def __post_init__(self):
        _check_prime(self.p)
        clean = {int(e): int(c) % self.p for e, c in self.terms.items() if int(c) % self.p}
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def parse(cls, p: int, text: str, var: str = "T") -> "ASClass":
        from .parsing import parse_series_terms

        ring = prime_field(p)
        raw = parse_series_terms(ring, text, var)
        return cls(p, {e: int(c.vec[0]) for e, c in raw.items()})

    def poles(self) -> dict[int, int]:
        return {e: c for e, c in self.terms.items() if e < 0}

    def __str__(self):
        return _laurent_str(self.terms)


def _laurent_str(terms: Mapping[int, int]) -> str:
    if not terms:
        return "0"
    return " + ".join(f"{c}*T^{e}" for e, c in sorted(terms.items()))


@dataclass(frozen=True)
class PolarPart:
    """sum_j alpha_j t^-j with alpha_j = 0 for p | j; the zero class has m = 0."""

    p: int
    coefficients: tuple[int, ...]  # alpha_1, ..., alpha_m

    def __post_init__(self):
        c = self.coefficients
        if c and c[-1] % self.p == 0:
            raise InvalidInput("top polar coefficient must be nonzero")
        if any(c[j - 1] % self.p for j in range(self.p, len(c) + 1, self.p)):
            raise InvalidInput("polar coefficients at indices divisible by p must vanish")

    @property
    def m(self) -> int:
        return len(self.coefficients)

    def terms(self) -> dict[int, int]:
        return {-j: a for j, a in enumerate(self.coefficients, start=1) if a}

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "conductor": self.m,
            "coefficients": {str(j): a for j, a in enumerate(self.coefficients, start=1) if a},
            "polar_part": _laurent_str(self.terms()),
        }


@dataclass(frozen=True)
class PolarReduction:
    """c = polar + P(w) + integral, with every piece explicit."""

    source: ASClass
    polar: PolarPart
    w: dict[int, int]
    integral: dict[int, int]
    steps: list[tuple[int, int]]  # (l, beta): subtracted P(beta t^-l)

    def witness_holds(self) -> bool:
        p = self.polar.p
        total: dict[int, int] = dict(self.polar.terms())

        def add(e, c):
            total[e] = (total.get(e, 0) + c) % p

        for e, c in self.w.items():  # P(c t^e) = c^p t^(pe) - c t^e
            add(p * e, pow(c, p, p))
            add(e, -c)
        for e, c in self.integral.items():
            add(e, c)
        total = {e: c for e, c in total.items() if c}
        return total == dict(self.source.terms) and all(e >= 0 for e in self.integral)

    def to_dict(self) -> dict:
        d = self.polar.to_dict()
        d["input"] = str(self.source)
        d["witness_w"] = _laurent_str(self.w)
        d["integral_part"] = _laurent_str(self.integral)
        d["steps"] = [{"l": l, "beta": b} for l, b in self.steps]
        d["witness_holds"] = self.witness_holds()
        return d


def _frobenius_root(c: int, p: int) -> int:
    # x -> x^p is the identity on F_p
    return c % p


def polar_reduce(c: ASClass) -> PolarReduction:
    p = c.p
    cur = dict(c.poles())
    integral = {e: v for e, v in c.terms.items() if e >= 0}
    w: dict[int, int] = {}
    steps = []
    while True:
        divisible = [e for e, v in cur.items() if v and (-e) % p == 0]
        if not divisible:
            break
        j = -min(divisible)
        l = j // p
        beta = _frobenius_root(cur[-j], p)
        # subtract P(beta t^-l) = beta^p t^-j - beta t^-l
        cur[-j] = (cur[-j] - pow(beta, p, p)) % p
        cur[-l] = (cur.get(-l, 0) + beta) % p
        cur = {e: v for e, v in cur.items() if v}
        w[-l] = (w.get(-l, 0) + beta) % p
        steps.append((l, beta))
    m = max((-e for e in cur), default=0)
    coeffs = tuple(cur.get(-j, 0) for j in range(1, m + 1))
    red = PolarReduction(c, PolarPart(p, coeffs), {e: v for e, v in w.items() if v}, integral, steps)
    if not red.witness_holds():
        raise VerificationError("polar reduction witness fails")  # pragma: no cover
    return red


# ---------------------------------------------------------------------------
# calculators


def harbater_dim(p: int, conductors: list[int]) -> dict:
    """Dimension of the Harbater space with the given conductors, plus the census."""
    _check_prime(p)
    for m in conductors:
        if m < 1 or m % p == 0:
            raise InvalidInput(f"conductor {m} must be positive and prime to {p}")
    formula = sum(m - m // p for m in conductors)
    free = {str(i): [j for j in range(1, m + 1) if j % p] for i, m in enumerate(conductors)}
    r = len(conductors)
    r_prime = sum(len(v) - 1 for v in free.values())
    if r + r_prime != formula:
        raise VerificationError("census disagrees with the dimension formula")  # pragma: no cover
    return {
        "p": p,
        "conductors": list(conductors),
        "dimension": formula,
        "punctured_lines": r,
        "affine_lines": r_prime,
        "free_indices": free,
    }


def genus_rh(p: int, conductors: list[int], g_quotient: int = 0) -> dict:
    """Genus of a cyclic degree-p cover via 2g - 2 = p(2g' - 2) + sum (m_i + 1)(p - 1)."""
    _check_prime(p)
    if g_quotient < 0:
        raise InvalidInput("quotient genus must be non-negative")
    for m in conductors:
        if m < 1 or m % p == 0:
            raise InvalidInput(f"conductor {m} must be positive and prime to {p}")
    total = p * (2 * g_quotient - 2) + sum((m + 1) * (p - 1) for m in conductors)
    if total % 2 or total + 2 < 0:
        raise InvalidInput(f"Riemann-Hurwitz gives 2g - 2 = {total}; no such cover")
    g = (total + 2) // 2
    out = {"p": p, "conductors": list(conductors), "g_quotient": g_quotient, "genus": g}
    if g_quotient == 0 and len(conductors) == 1:
        N = conductors[0] + 1
        out["single_point_formula"] = (N - 2) * (p - 1) // 2
        if out["single_point_formula"] != g:
            raise VerificationError("single branch point formula disagrees")  # pragma: no cover
    return out


def split_conductor(p: int, m: int) -> tuple[int, int]:
    """(q, l) with m = pq - l and 1 <= l <= p - 1."""
    if m < 1 or m % p == 0:
        raise InvalidInput(f"need m >= 1 prime to {p}, got {m}")
    q = m // p + 1
    return q, p * q - m


# ---------------------------------------------------------------------------
# deformed covers


def valid_directions(p: int, m: int) -> list[int]:
    """Indices i for which x_i is a free parameter (q of them if l = 1, else q - 1)."""
    q, l = split_conductor(p, m)
    return list(range(1, q + 1 if l == 1 else q))


@dataclass(frozen=True)
class DeformedASCover:
    p: int
    m: int
    q: int
    l: int
    ring: Ring
    x: dict[int, RingElement]
    uniformizer: str  # "xi" or "eta"
    t: TruncatedSeries  # t as a series in the uniformizer
    sigma: SeriesAutomorphism
    order: int | None = None
    t_invariant: bool = False
    newton_steps: int = 0

    def a_poly(self) -> list[RingElement]:
        return _a_coeffs(self.q, self.ring, self.x)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "q": self.q,
            "l": self.l,
            "ring": str(self.ring),
            "x": {str(i): str(v) for i, v in sorted(self.x.items())},
            "uniformizer": self.uniformizer,
            "t": str(self.t),
            "sigma": str(self.sigma.image),
            "order": self.order,
            "t_invariant": self.t_invariant,
            "newton_steps": self.newton_steps,
            "prec": self.sigma.prec,
        }


def _a_coeffs(q: int, ring: Ring, x: Mapping[int, RingElement]) -> list[RingElement]:
    """Coefficients of a(t) from t^0 up to t^q."""
    c = [ring.zero()] * (q + 1)
    c[q] = ring.one()
    for i, v in x.items():
        c[q - i] = c[q - i] + v
    return c


def _horner(coeffs: list[RingElement], s: TruncatedSeries) -> TruncatedSeries:
    acc = TruncatedSeries.zeros(s.ring, s.prec)
    for c in reversed(coeffs):
        acc = acc * s + TruncatedSeries.constant(s.ring, c, s.prec)
    return acc


def _dpoly(coeffs: list[RingElement]) -> list[RingElement]:
    return [c * i for i, c in enumerate(coeffs)][1:] or [coeffs[0].ring.zero()]


def _newton(F, dF, start: TruncatedSeries, limit: int) -> tuple[TruncatedSeries, int]:
    cur = start
    for step in range(1, limit + 1):
        d = dF(cur)
        if not d.coefficient(0).is_unit():
            raise PrecisionError("implicit equation has a non-unit derivative")
        nxt = cur - F(cur) / d
        if nxt.agrees_with(cur):
            if not F(nxt).is_zero():
                raise VerificationError("Newton limit does not solve the equation")  # pragma: no cover
            return nxt, step
        cur = nxt
    raise PrecisionError("implicit solve did not converge")


def _solve(p: int, q: int, l: int, ring: Ring, x: Mapping[int, RingElement], prec: int):
    a = _a_coeffs(q, ring, x)
    da = _dpoly(a)
    U = TruncatedSeries.variable(ring, prec)
    one = TruncatedSeries.constant(ring, 1, prec)
    limit = 4 * prec + 8
    if l == 1:
        xi = U
        xip = U ** p

        def F(t):
            return t - xip + xi * _horner(a, t) ** (p - 1)

        def dF(t):
            return one + xi * (_horner(a, t) ** (p - 2)) * _horner(da, t) * (p - 1)

        t, steps = _newton(F, dF, xip, limit)
        image = xi + _horner(a, t)
        return t, image, steps
    # t = eta^p u, and a(t) = t b(t)
    b = a[1:]
    db = _dpoly(b)
    eta = U
    etap = eta ** p
    lift = eta ** ((p - l) * (p - 1))

    def G(u):
        t = etap * u
        return u ** l - one + lift * u ** (p - 1) * _horner(b, t) ** (p - 1)

    def dG(u):
        t = etap * u
        bt = _horner(b, t)
        inner = u ** (p - 2) * bt ** (p - 1) * (p - 1) + u ** (p - 1) * bt ** (p - 2) * _horner(db, t) * etap * (p - 1)
        return u ** (l - 1) * l + lift * inner

    u, steps = _newton(G, dG, one, limit)
    t = etap * u
    # sigma(eta) = eta (1 + a(t) eta^-l)^(1/l), and a(t) eta^-l = eta^(p-l) u b(t)
    image = eta * mth_root_unit(one + eta ** (p - l) * u * _horner(b, t), l)
    return t, image, steps


def build_deformed_cover(
    p: int,
    m: int,
    ring: Ring | None = None,
    x: Mapping[int, RingElement | int | str] | None = None,
    prec: int | None = None,
    check_order: bool = True,
) -> DeformedASCover:
    """Solve the deformed equation and build the automorphism of A[[xi]] or A[[eta]]."""
    _check_prime(p)
    q, l = split_conductor(p, m)
    ring = ring or prime_field(p)
    if ring.p != p or ring.characteristic != p:
        raise InvalidInput("the deformed covers are built in characteristic p")
    allowed = set(valid_directions(p, m))
    xs: dict[int, RingElement] = {}
    for i, v in (x or {}).items():
        i = int(i)
        if i not in allowed:
            raise InvalidInput(f"x_{i} is not a parameter for (p, m) = ({p}, {m}); allowed {sorted(allowed)}")
        v = ring(v)
        if not v.is_nilpotent():
            raise InvalidInput("deformation parameters must lie in the maximal ideal")
        if not v.is_zero():
            xs[i] = v
    prec = prec or max(4 * p * (q + 1), 24)

    def rebuild(n: int) -> SeriesAutomorphism:
        _, img, _ = _solve(p, q, l, ring, xs, n)
        return SeriesAutomorphism(img, rebuild, f"as[p={p},m={m}]")

    t, image, steps = _solve(p, q, l, ring, xs, prec)
    sigma = SeriesAutomorphism(image, rebuild, f"as[p={p},m={m}]")
    order = None
    invariant = compose(t, image).agrees_with(t)
    if check_order:
        order = aut_order(sigma, p)
        if order != p:
            raise VerificationError(f"deformed automorphism has order {order}, expected {p}")
        if not invariant:
            raise VerificationError("t is not invariant under the deformed automorphism")
    return DeformedASCover(p, m, q, l, ring, xs, "xi" if l == 1 else "eta", t, sigma, order, invariant, steps)


def _dual_numbers(p: int) -> ArtinLocal:
    return artin_local(prime_field(p), "e", modulus=[0, 0, 1])


def _split_dual(s: TruncatedSeries) -> tuple[TruncatedSeries, TruncatedSeries]:
    """(s_0, s_1) over F_p with s = s_0 + e s_1 over F_p[e]/(e^2)."""
    ring = s.ring
    if not isinstance(ring, ArtinLocal) or ring.monomials() != [(0,), (1,)]:
        raise InvalidInput("expected a series over F_p[e]/(e^2)")
    k = prime_field(ring.p)
    c = s.array()
    s0 = TruncatedSeries(k, c[:, :1].astype(np.int64), s.low, s.prec)
    s1 = TruncatedSeries(k, c[:, 1:].astype(np.int64), s.low, s.prec)
    return s0, s1


def deformation_direction_valuation(cover: DeformedASCover, j: int) -> dict:
    """v(phi_j) for sigma(eta) = sigma_0(eta) + e phi_j(eta), checked against p(q-j) - (l-1)."""
    ring = cover.ring
    dual = isinstance(ring, ArtinLocal) and ring.monomials() == [(0,), (1,)]
    if not dual or set(cover.x) != {j} or cover.x[j] != ring.gen(ring.variables[0]):
        raise InvalidInput("cover must be built over F_p[e]/(e^2) with x_j = e and all other x_i = 0")
    s0, phi = _split_dual(cover.sigma.image)
    v = phi.valuation()
    if v is None:
        raise PrecisionError("phi_j vanishes to precision")
    expected = cover.p * (cover.q - j) - (cover.l - 1)
    return {
        "p": cover.p,
        "m": cover.m,
        "q": cover.q,
        "l": cover.l,
        "j": j,
        "valuation": v,
        "expected": expected,
        "matches": v == expected,
        "j_range_inferred": cover.l == 1,
    }


def direction_field(p: int, m: int, j: int, prec: int) -> tuple[SeriesAutomorphism, TruncatedSeries]:
    """(sigma_0 over F_p, phi_j over F_p) from the first-order deformation x_j = e."""
    ring = _dual_numbers(p)
    e = ring.gen("e")
    cover = build_deformed_cover(p, m, ring, {j: e}, prec=prec, check_order=False)
    s0, phi = _split_dual(cover.sigma.image)

    def rebuild(n: int) -> SeriesAutomorphism:
        base = build_deformed_cover(p, m, prime_field(p), None, prec=n, check_order=False)
        return SeriesAutomorphism(base.sigma.image, rebuild, base.sigma.label)

    return SeriesAutomorphism(s0, rebuild, f"as0[p={p},m={m}]"), phi


def independence_check(
    p: int, m: int, directions: list[int] | None = None, policy: PrecisionPolicy | None = None
) -> dict:
    """Rank of the H^1 classes of phi_j d/du, u the uniformizer, h = phi_j / sigma_0'."""
    dirs = valid_directions(p, m) if directions is None else list(directions)
    for j in dirs:
        if j not in valid_directions(p, m):
            raise InvalidInput(f"direction {j} is not valid for (p, m) = ({p}, {m})")
    base = build_deformed_cover(p, m, prime_field(p), None, check_order=False)
    ctx = h1_context(base.sigma, policy)
    need = ctx.required_theta_precision() + 2
    sigma0 = base.sigma.at_precision(max(need, base.sigma.prec))
    vectors = []
    cocycles = []
    for j in dirs:
        s0, phi = direction_field(p, m, j, max(need, base.sigma.prec))
        if not s0.image.agrees_with(sigma0.image):
            raise VerificationError("reduction of the deformation is not sigma_0")  # pragma: no cover
        h = ThetaElement(phi / derivative(s0.image))
        cocycles.append(ctx.is_cocycle(h))
        vectors.append(ctx.class_vector(h))
    rank = rank_mod_p(np.array(vectors), p) if vectors else 0
    return {
        "p": p,
        "m": m,
        "directions": dirs,
        "dim_h1": ctx.h1,
        "all_cocycles": all(cocycles),
        "class_vectors": [[int(c) for c in v] for v in vectors],
        "rank": rank,
        "independent": rank == len(dirs) and all(cocycles),
        "conductor": conductor(base.sigma),
    }
