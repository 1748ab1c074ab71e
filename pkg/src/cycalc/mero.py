"""Meromorphic functions on an affine scheme: fractions a/b whose
denominator is a non-zerodivisor modulo the defining ideal, the divisor
map into cycles, and the sheaf-exactness checks for sections over a
distinguished cover.

Zero-divisor tests never enumerate associated primes; the quotient-ideal
criterion (I : b) = I decides global non-zerodivisors, and the same
criterion against the saturation of I at f decides non-zerodivisors on
the open set D(f).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (DomainError, EnvelopeError, IncompatibleRingsError,
                     InternalInvariantError)
from .polys import Poly, divmod_single
from .ideals import Ideal, ideal_intersect, ideal_quotient, ideal_saturate, ideal_sum
from .decompose import SchemeDesc, is_pure_dimensional
from .cycles import Cycle, DistinguishedCover, degree_check
from .lengths import fundamental_cycle_of, length_at_prime

NZD_SEARCH_BUDGET = 200
LOCALIZATION_POWER_CAP = 16


def is_nonzerodivisor(scheme: SchemeDesc, b: Poly) -> bool:
    """Global quotient-ideal criterion: b is a non-zerodivisor mod I
    exactly when (I : b) = I."""
    if b.ring != scheme.ring:
        raise IncompatibleRingsError("incompatible rings")
    colon = ideal_quotient(scheme.ideal, b)
    return colon.canonical_key() == scheme.ideal.canonical_key()


def _try_div(f: Poly, g: Poly) -> Poly | None:
    if g.is_zero():
        return None
    q, r = divmod_single(f, g)
    return q if r.is_zero() else None


class MeroFn:
    """A fraction num/den on a scheme.  The denominator is certified a
    non-zerodivisor at construction; ``invertible`` additionally certifies
    the numerator, making the fraction a unit of the total quotient ring."""

    __slots__ = ("scheme", "num", "den", "invertible")

    def __init__(self, scheme: SchemeDesc, num: Poly, den: Poly,
                 invertible: bool = True):
        if num.ring != scheme.ring or den.ring != scheme.ring:
            raise IncompatibleRingsError("incompatible rings")
        ideal = scheme.ideal
        num = ideal.normal_form(num)
        den = ideal.normal_form(den)
        if not is_nonzerodivisor(scheme, den):
            raise DomainError("denominator is a zero-divisor")
        if invertible and not is_nonzerodivisor(scheme, num):
            raise DomainError("numerator is a zero-divisor")
        if den.is_constant() and not den.is_zero():
            num = num.scale(scheme.ring.field.inv(den.constant_value()))
            den = scheme.ring.one()
        object.__setattr__(self, "scheme", scheme)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "invertible", invertible)

    def __setattr__(self, *a):
        raise AttributeError("MeroFn is immutable")

    def __eq__(self, other):
        """Equality in the total quotient ring: cross-multiplication mod I."""
        if not isinstance(other, MeroFn) or other.scheme != self.scheme:
            return NotImplemented
        cross = self.num * other.den - other.num * self.den
        return self.scheme.ideal.contains(cross)

    def __hash__(self):
        raise TypeError("MeroFn equality is modular; hashing unsupported")

    def is_one(self) -> bool:
        return self.scheme.ideal.contains(self.num - self.den)

    def __str__(self):
        from .polys import render_poly
        return f"({render_poly(self.num)})/({render_poly(self.den)})"

    def __repr__(self):
        return f"<mero {self}>"


def _cancelled(num: Poly, den: Poly, parts: tuple[Poly, ...]) -> tuple[Poly, Poly]:
    whole = _try_div(num, den)
    if whole is not None:
        return whole, num.ring.one()
    for c in parts:
        if c.is_constant():
            continue
        qn = _try_div(num, c)
        qd = _try_div(den, c)
        if qn is not None and qd is not None:
            num, den = qn, qd
    return num, den


def mero_arith(op: str, r: MeroFn, s: MeroFn | None = None) -> MeroFn:
    """mul, div or inverse in the total quotient ring, with cancellation
    of exact common factors before re-normalization."""
    if op == "inverse":
        if not r.invertible:
            raise DomainError("inverse of a non-invertible function")
        return MeroFn(r.scheme, r.den, r.num, True)
    if s is None:
        raise DomainError(f"mero op {op!r} needs two operands")
    if not isinstance(s, MeroFn) or s.scheme != r.scheme:
        raise IncompatibleRingsError("functions live on different schemes")
    if op == "div":
        if not (r.invertible and s.invertible):
            raise DomainError("division needs invertible functions")
        return mero_arith("mul", r, mero_arith("inverse", s))
    if op == "mul":
        num, den = _cancelled(r.num * s.num, r.den * s.den, (r.den, s.den))
        return MeroFn(r.scheme, num, den, r.invertible and s.invertible)
    raise DomainError(f"unknown mero op {op!r}")


def restrict_mero(scheme: SchemeDesc, r: MeroFn, prime: Ideal) -> MeroFn:
    """Restriction of an invertible function to an irreducible component,
    as a function on that component."""
    if r.scheme != scheme:
        raise IncompatibleRingsError("function does not live on this scheme")
    if not r.invertible:
        raise DomainError("restriction requires an invertible function")
    keys = {q.canonical_key() for q in scheme.components()}
    if prime.canonical_key() not in keys:
        raise DomainError("not a minimal prime")
    num = prime.normal_form(r.num)
    den = prime.normal_form(r.den)
    if num.is_zero() or den.is_zero():
        raise InternalInvariantError(
            "invertible function vanishes on a component")
    comp = SchemeDesc(scheme.ring, prime.canonical_gens())
    return MeroFn(comp, num, den, True)


def weil_divisor(scheme: SchemeDesc, r: MeroFn) -> Cycle:
    """div(r): zeros of the numerator minus zeros of the denominator,
    weighted by vanishing order, concentrated in codimension one."""
    if r.scheme != scheme:
        raise IncompatibleRingsError("function does not live on this scheme")
    if not r.invertible:
        raise DomainError("divisor requires an invertible function")
    pure, dim = is_pure_dimensional(scheme)
    if not pure:
        raise DomainError("impure scheme: divisor undefined here")
    if scheme.is_empty():
        return Cycle(scheme, [])
    ring = scheme.ring
    zeros = fundamental_cycle_of(scheme, Ideal(ring, [r.num]), certified_pure=True)
    poles = fundamental_cycle_of(scheme, Ideal(ring, [r.den]), certified_pure=True)
    div = zeros - poles
    if not degree_check(div, dim - 1):
        raise InternalInvariantError("divisor has a component off codimension one")
    return div


def support(scheme: SchemeDesc, r: MeroFn) -> tuple[tuple[Ideal, ...], Ideal]:
    """Exact codimension-one support of r together with an ambient
    superset: the union of the zero loci of numerator and denominator."""
    div = weil_divisor(scheme, r)
    exact = tuple(p for p, _ in div.entries())
    ring = scheme.ring
    za = ideal_sum(scheme.ideal, Ideal(ring, [r.num]))
    zb = ideal_sum(scheme.ideal, Ideal(ring, [r.den]))
    superset = ideal_intersect(za, zb)
    for p in scheme.components():
        if all(p.contains(g) for g in superset.gens):
            raise InternalInvariantError(
                "support contains a height-zero point")
    return exact, superset


def find_nzd_in_ideal(scheme: SchemeDesc, J: Ideal,
                      budget: int = NZD_SEARCH_BUDGET) -> Poly:
    """A non-zerodivisor mod I inside J, found by scanning generators and
    then two-generator combinations with small coefficients."""
    if J.ring != scheme.ring:
        raise IncompatibleRingsError("incompatible rings")
    colon = ideal_quotient(scheme.ideal, J)
    if colon.canonical_key() != scheme.ideal.canonical_key():
        raise DomainError("annihilator nonzero: no such element exists")
    field = scheme.ring.field
    gens = [g for g in J.gens if not g.is_zero()]
    seen = set()
    tested = 0

    def try_candidate(c: Poly):
        nonlocal tested
        if c.is_zero() or c in seen:
            return None
        seen.add(c)
        tested += 1
        if tested > budget:
            raise EnvelopeError("search budget exceeded")
        return c if is_nonzerodivisor(scheme, c) else None

    for g in gens:
        hit = try_candidate(g)
        if hit is not None:
            return hit
    ladder = []
    for k in range(1, 11):
        ladder.extend([k, -k])
    for c in ladder:
        scalar = field.normalize(c)
        if field.is_zero(scalar):
            continue
        for i in range(len(gens)):
            for j in range(len(gens)):
                if i == j:
                    continue
                hit = try_candidate(gens[i] + gens[j].scale(scalar))
                if hit is not None:
                    return hit
    raise EnvelopeError("search budget exceeded")


def _clearing_power(ideal: Ideal, f: Poly, h: Poly) -> int:
    """Least k with f^k * h in the ideal, capped."""
    work = h
    for k in range(LOCALIZATION_POWER_CAP + 1):
        if ideal.contains(work):
            return k
        work = work * f
    raise EnvelopeError("localization exponent budget exceeded")


@dataclass(frozen=True)
class ChartMatch:
    chart: int          # 1-based
    matches: bool
    power: int | None   # clearing exponent when matches


@dataclass(frozen=True)
class KxSheafReport:
    charts: tuple[ChartMatch, ...]
    separated: bool
    passed: bool


def kx_sheaf_check(scheme: SchemeDesc, cover: DistinguishedCover, r: MeroFn,
                   chart_fns: list[tuple[Poly, Poly]]) -> KxSheafReport:
    """Sheaf conditions for the total-quotient-ring sheaf over a
    distinguished cover.

    Verifies the global section r restricts to each supplied chart
    fraction (equality after clearing a bounded power of the chart
    element), and that a section restricting to 1 everywhere is 1.
    """
    if cover.scheme != scheme or r.scheme != scheme:
        raise IncompatibleRingsError("cover and function must share the scheme")
    fs = cover.elements
    if len(chart_fns) != len(fs):
        raise DomainError("local section count does not match the cover")
    ideal = scheme.ideal
    results = []
    all_one = True
    for i, (f, (c, d)) in enumerate(zip(fs, chart_fns)):
        if c.ring != scheme.ring or d.ring != scheme.ring:
            raise IncompatibleRingsError("incompatible rings")
        local = ideal_saturate(ideal, f)
        if ideal_quotient(local, d).canonical_key() != local.canonical_key():
            raise DomainError(f"denominator is a zero-divisor on chart {i + 1}")
        h = r.num * d - c * r.den
        matches = local.contains(h)
        power = _clearing_power(ideal, f, h) if matches else None
        results.append(ChartMatch(i + 1, matches, power))
        if not local.contains(r.num - r.den):
            all_one = False
    separated = r.is_one() if all_one else True
    passed = separated and all(m.matches for m in results)
    return KxSheafReport(tuple(results), separated, passed)


@dataclass(frozen=True)
class Prop32Report:
    """Divisor of r against the length-weighted sum of componentwise
    divisors, with the decomposition data."""

    lhs: Cycle
    rhs: Cycle
    terms: tuple[tuple[Ideal, MeroFn, int], ...]
    equal: bool


def check_prop32(scheme: SchemeDesc, r: MeroFn) -> Prop32Report:
    """div(r) on X equals the sum over components X_i of
    length(O_{X,X_i}) times div of the restriction of r to X_i."""
    lhs = weil_divisor(scheme, r)
    comps = scheme.components()
    rhs = Cycle(scheme, [])
    terms = []
    for p in comps:
        mult = length_at_prime(scheme.ideal, p, comps).value
        r_i = restrict_mero(scheme, r, p)
        d_i = weil_divisor(r_i.scheme, r_i)
        rhs = rhs + d_i.on_scheme(scheme).scale(mult)
        terms.append((p, r_i, mult))
    return Prop32Report(lhs, rhs, tuple(terms), lhs == rhs)
