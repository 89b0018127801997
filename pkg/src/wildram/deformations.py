"""Order-p deformation families, obstruction classes and dimension bookkeeping.

For m > 1 the family is sigma_a with sigma_a(T)^-m = a T^-m + 1, so that
sigma_a^p(T)^-m = a^p T^-m + (1 + a + ... + a^(p-1)). For m = 1 it is the
Moebius map attached to M_a = [[1, a], [1, 1 + a]].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .automorphisms import power_images, standard_sigma
from .chebyshev import MobiusMatrix, cheb_polys, mobius_order_test
from .cohomology import ThetaElement, h2_class_is_zero, h_dims_formula
from .errors import InvalidInput, PrecisionError, VerificationError
from dataclasses import replace

from .rings import Ring, RingElement, is_prime, mk_ring, prime_field, small_extension
from .series import TruncatedSeries

__all__ = [
    "OrderCheck",
    "ObstructionReport",
    "KrullReport",
    "DimensionReport",
    "order_condition_check",
    "obstruction_class",
    "nontriviality_inequality",
    "krull_dim_local",
    "global_dim_report",
]


def _validate(p: int, m: int) -> None:
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    if m < 1 or math.gcd(m, p) != 1:
        raise InvalidInput(f"need m >= 1 prime to p, got m={m}, p={p}")


def _geometric_sum(a: RingElement, p: int) -> RingElement:
    total, power = a.ring.zero(), a.ring.one()
    for _ in range(p):
        total = total + power
        power = power * a
    return total


def _p_fold(sigma_image: TruncatedSeries, p: int) -> TruncatedSeries:
    from .automorphisms import SeriesAutomorphism

    return power_images(SeriesAutomorphism(sigma_image), p + 1)[p]


# ---------------------------------------------------------------------------
# order condition


@dataclass(frozen=True)
class OrderCheck:
    p: int
    m: int
    ring: str
    a: str
    series_order_p: bool
    sum_vanishes: bool
    geometric_sum: str
    precision: int

    @property
    def agree(self) -> bool:
        return self.series_order_p == self.sum_vanishes

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "ring": self.ring,
            "a": self.a,
            "series_order_p": self.series_order_p,
            "sum_vanishes": self.sum_vanishes,
            "geometric_sum": self.geometric_sum,
            "agree": self.agree,
            "precision": self.precision,
        }


def order_condition_check(p: int, m: int, ring: Ring, a, prec: int | None = None) -> OrderCheck:
    """sigma_a^p = Id by composition versus 1 + a + ... + a^(p-1) = 0 by arithmetic."""
    _validate(p, m)
    if p == 2:
        raise InvalidInput("the order criterion is stated for odd p")
    if m == 1:
        raise InvalidInput("m = 1 uses the Moebius family; see obstruction_class")
    a = ring(a)
    prec = prec or 2 * (m + 1) + 2
    sigma = standard_sigma(p, m, ring, a, prec)
    verdicts = []
    for n in (prec, 2 * prec):
        s = sigma.at_precision(n)
        T = TruncatedSeries.variable(ring, n)
        verdicts.append(_p_fold(s.image, p).agrees_with(T))
    if verdicts[0] != verdicts[1]:
        raise PrecisionError(f"order verdict changes between T^{prec} and T^{2 * prec}")
    total = _geometric_sum(a, p)
    out = OrderCheck(p, m, str(ring), str(a), verdicts[0], total.is_zero(), str(total), prec)
    if not out.agree:
        raise VerificationError(f"order criterion disagrees: {out.to_dict()}")
    return out


# ---------------------------------------------------------------------------
# obstruction classes


def nontriviality_inequality(p: int, m: int) -> bool:
    """(m+1)p < p * floor(2(m+1)(p-1)/p): the leading defect field is nonzero in H^2."""
    beta = (m + 1) * (p - 1)
    return (m + 1) * p < p * ((2 * beta) // p)


@dataclass(frozen=True)
class ObstructionReport:
    p: int
    m: int
    source: str
    target: str
    kernel_generator: str
    a: str
    a_prime: str
    defect: str
    predicted: str
    defect_matches: bool
    kernel_scalar: int  # c with (leading defect coefficient) = c * t
    class_vanishes: bool
    inequality_holds: bool
    h2_leading_field_zero: bool
    criterion: str
    chebyshev: dict | None = None

    def to_dict(self) -> dict:
        d = {
            "p": self.p,
            "m": self.m,
            "source": self.source,
            "target": self.target,
            "kernel_generator": self.kernel_generator,
            "a": self.a,
            "a_prime": self.a_prime,
            "defect": self.defect,
            "predicted_defect": self.predicted,
            "defect_matches": self.defect_matches,
            "kernel_scalar": self.kernel_scalar,
            "class_vanishes": self.class_vanishes,
            "inequality_holds": self.inequality_holds,
            "h2_leading_field_zero": self.h2_leading_field_zero,
            "criterion": self.criterion,
        }
        if self.chebyshev is not None:
            d["chebyshev"] = self.chebyshev
        return d


@lru_cache(maxsize=None)
def _leading_field_h2_zero(p: int, m: int) -> bool:
    sigma0 = standard_sigma(p, m)
    k = sigma0.ring
    field_ = ThetaElement(TruncatedSeries.from_terms(k, {m + 1: 1}, 8 * (m + 2) * p))
    return h2_class_is_zero(sigma0, field_)


def default_quotient(source: Ring) -> Ring:
    """Socle quotient used when no target is given: Z/p^n -> Z/p^(n-1), u^n -> u^(n-1)."""
    d = getattr(source, "descriptor", None)
    if d is not None and d.kind == "integers_mod_pn" and d.n >= 2:
        return mk_ring(replace(d, n=d.n - 1, kind="integers_mod_pn" if d.n > 2 else "prime_field"))
    if d is not None and d.kind == "artin_local" and d.modulus is not None:
        deg = len(d.modulus) - 1
        if deg >= 2 and d.modulus == tuple([0] * deg + [1]):
            return mk_ring(replace(d, modulus=tuple([0] * (deg - 1) + [1])))
    raise InvalidInput(f"no default quotient for {source}; pass --target")


def obstruction_class(
    p: int, m: int, source: Ring, target: Ring, a_prime, prec: int | None = None
) -> ObstructionReport:
    """Obstruction to lifting sigma_a from the target to the source of a small extension."""
    _validate(p, m)
    if p == 2:
        raise InvalidInput("obstructions are computed for odd p")
    w = small_extension(source, target)
    a1 = source(a_prime)
    a0 = w.reduce(a1)
    prec = prec or 2 * (m + 1) + 2
    ineq = nontriviality_inequality(p, m)
    h2_zero = _leading_field_h2_zero(p, m)
    if h2_zero == ineq:
        raise VerificationError("H^2 test of the leading field disagrees with the inequality")
    T = TruncatedSeries.variable(source, prec)
    cheb = None
    if m > 1:
        if not (a0 - 1).is_nilpotent():
            raise InvalidInput("for m > 1 the parameter must lie in 1 + maximal ideal")
        if not _geometric_sum(a0, p).is_zero():
            raise InvalidInput("sigma_a does not have order p in the target ring")
        sigma = standard_sigma(p, m, source, a1, prec)
        defect = _p_fold(sigma.image, p) - T
        total = _geometric_sum(a1, p)
        coeff = -total / m
        predicted = TruncatedSeries.from_terms(source, {m + 1: coeff}, prec)
        vanishes = total.is_zero()
        criterion = "1 + a' + ... + a'^(p-1) = 0"
    else:
        if not a0.is_nilpotent():
            raise InvalidInput("for m = 1 the parameter must lie in the maximal ideal")
        if not (MobiusMatrix.family(a0) ** p).is_identity():
            raise InvalidInput("sigma_a does not have order p in the target ring")
        # a nilpotent constant term costs precision at every composition
        prec = max(prec, p * a1.nilpotency_index() + 8)
        T = TruncatedSeries.variable(source, prec)
        sigma = standard_sigma(p, 1, source, a1, prec)
        defect = _p_fold(sigma.image, p) - T
        Mp = MobiusMatrix.family(a1) ** p
        coeff = -Mp.c
        predicted = TruncatedSeries.from_terms(source, {2: coeff}, prec)
        verdict = mobius_order_test(source, a1, p)
        vanishes = Mp.c.is_zero()
        if vanishes != verdict.matrix or vanishes != verdict.chebyshev:
            raise VerificationError("c_p = 0, M^p = Id and the Chebyshev conditions disagree")
        cheb = verdict.to_dict()
        cheb["c_p_scalar"] = w.scalar(Mp.c)
        criterion = "c_p = 0 (M_a'^p = Id)"
    scalar = w.scalar(coeff)
    matches = defect.agrees_with(predicted)
    if not matches:
        raise VerificationError(f"defect {defect} differs from the predicted {predicted}")
    if vanishes != defect.is_zero():
        raise VerificationError("defect vanishing disagrees with the criterion")
    return ObstructionReport(
        p=p,
        m=m,
        source=str(source),
        target=str(target),
        kernel_generator=str(w.t),
        a=str(a0),
        a_prime=str(a1),
        defect=str(defect),
        predicted=str(predicted),
        defect_matches=matches,
        kernel_scalar=scalar,
        class_vanishes=vanishes or h2_zero,
        inequality_holds=ineq,
        h2_leading_field_zero=h2_zero,
        criterion=criterion,
        chebyshev=cheb,
    )


# ---------------------------------------------------------------------------
# dimensions


@dataclass(frozen=True)
class KrullReport:
    p: int
    m: int
    q: int
    l: int
    absolute: int
    relative: int
    chain_value: int | None
    chain_discrepancy: bool
    tangent_dim: int
    obstruction_dim: int
    rigid: bool
    complete_intersection: bool | None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "q": self.q,
            "l": self.l,
            "krull_absolute": self.absolute,
            "krull_relative": self.relative,
            "chain_value": self.chain_value,
            "chain_discrepancy": self.chain_discrepancy,
            "tangent_dim": self.tangent_dim,
            "obstruction_dim": self.obstruction_dim,
            "rigid": self.rigid,
            "complete_intersection": self.complete_intersection,
            "notes": list(self.notes),
        }


def krull_dim_local(p: int, m: int) -> KrullReport:
    """Krull dimension of the local versal ring of an order-p automorphism of conductor m.

    ``absolute`` counts the W(k) direction and ``relative`` does not.
    """
    _validate(p, m)
    beta = (m + 1) * (p - 1)
    h1, h2 = h_dims_formula(p, beta)
    q = m // p + 1
    l = p * q - m
    notes = []
    if p == 2:
        rel = (m + 1) // 2
        absolute = rel + 1
        if rel != h1:
            raise VerificationError("relative dimension differs from the tangent dimension at p = 2")
        notes.append("p = 2: power series ring over W(k), unobstructed")
        return KrullReport(p, m, q, l, absolute, rel, None, False, h1, h2, h1 == 0, True, notes)
    absolute = q + 1 if l == 1 else q
    chain = m + 2 - beta // p
    discrepancy = chain != absolute
    if discrepancy:
        notes.append(f"chain value m + 2 - floor(beta/p) = {chain} differs from {absolute}")
    ci: bool | None = None
    if m < p - 1 and (m, p) != (1, 3):
        ci = True
        notes.append("complete intersection of dimension 1")
    elif m == p - 1:
        notes.append("complete intersection property open for m = p - 1")
    rigid = h1 == 0
    if rigid:
        notes.append("rigid: zero tangent space")
    return KrullReport(p, m, q, l, absolute, absolute - 1, chain, discrepancy, h1, h2, rigid, ci, notes)


@dataclass(frozen=True)
class DimensionReport:
    p: int
    conductors: list[int]
    g_quotient: int
    local: list[dict]
    dim_h1_global_formula: int
    n_prime_formula: int
    n_prime_exact: int | None
    dim_h1_exact: int | None
    krull_local: list[int]
    krull_global: int
    moduli_value: int | None
    consistency_flags: list[str]

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "conductors": list(self.conductors),
            "g_quotient": self.g_quotient,
            "local": self.local,
            "dim_h1_global_formula": self.dim_h1_global_formula,
            "n_prime_formula": self.n_prime_formula,
            "n_prime_exact": self.n_prime_exact,
            "dim_h1_exact": self.dim_h1_exact,
            "krull_local": list(self.krull_local),
            "krull_global": self.krull_global,
            "moduli_value": self.moduli_value,
            "consistency_flags": list(self.consistency_flags),
            "consistent": not self.consistency_flags,
        }


def global_dim_report(p: int, conductors: list[int], g_quotient: int = 0) -> DimensionReport:
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    if g_quotient < 0:
        raise InvalidInput("quotient genus must be non-negative")
    if not conductors:
        raise InvalidInput("need at least one wild branch point")
    local = []
    for m in conductors:
        _validate(p, m)
        beta = (m + 1) * (p - 1)
        h1, h2 = h_dims_formula(p, beta)
        kr = krull_dim_local(p, m)
        local.append(
            {
                "m": m,
                "q": kr.q,
                "l": kr.l,
                "beta": beta,
                "dim_h1_local": h1,
                "dim_h2_local": h2,
                "paper_local_contribution": -(-2 * beta // p) - beta // p,
                "krull_local": kr.absolute,
            }
        )
    g = g_quotient
    sum_ceil = sum(-(-2 * d["beta"] // p) for d in local)
    sum_floor = sum(d["beta"] // p for d in local)
    paper_global = 3 * g - 3 + sum_ceil
    n_prime = 3 * g - 3 + sum_floor
    flags = []
    n_exact = dim_exact = None
    if g == 0:
        # on P^1 the bundle is O(2 - d) with d = sum floor(beta_i/p); h^1 = h^0(O(d - 4))
        n_exact = max(0, sum_floor - 3)
        dim_exact = sum(d["dim_h1_local"] for d in local) + n_exact
        if dim_exact != paper_global:
            flags.append("global_h1_formula_differs_from_exact")
    if n_prime < 0:
        flags.append("n_prime_formula_negative")
    if any(d["paper_local_contribution"] != d["dim_h1_local"] for d in local):
        flags.append("local_contribution_convention")
    krull_local = [d["krull_local"] for d in local]
    n_used = n_exact if n_exact is not None else n_prime
    krull_global = sum(k - 1 for k in krull_local) + 1 + n_used
    moduli = None
    if g == 0 and len(conductors) == 1:
        moduli = conductors[0] + 1 - 2
        if krull_global != moduli:
            flags.append("krull_global_differs_from_moduli_dimension")
        if krull_dim_local(p, conductors[0]).chain_discrepancy:
            flags.append("krull_chain_differs_from_stated_value")
    return DimensionReport(
        p=p,
        conductors=list(conductors),
        g_quotient=g,
        local=local,
        dim_h1_global_formula=paper_global,
        n_prime_formula=n_prime,
        n_prime_exact=n_exact,
        dim_h1_exact=dim_exact,
        krull_local=krull_local,
        krull_global=krull_global,
        moduli_value=moduli,
        consistency_flags=sorted(flags),
    )
