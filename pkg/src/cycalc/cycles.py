"""Algebraic cycles on an affine scheme: integer formal sums of prime
ideals, graded by dimension.

Primes are stored by their canonical basis text, so arithmetic, printing
and equality are all deterministic.  Restriction to a distinguished open
D(f) drops the terms whose prime contains f; gluing runs the converse
direction and is where cover consistency gets checked.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, IncompatibleRingsError
from .ideals import Ideal, ideal_sum, krull_dimension, radical_member
from .polys import Poly
from .decompose import SchemeDesc, prime_sort_key


class Cycle:
    """An integer formal sum of prime closed subschemes."""

    __slots__ = ("scheme", "terms")

    def __init__(self, scheme: SchemeDesc, entries=()):
        terms: dict[tuple, tuple[Ideal, int]] = {}
        for prime, coeff in entries:
            if prime.ring != scheme.ring:
                raise IncompatibleRingsError("incompatible rings")
            if coeff == 0:
                continue
            key = prime.canonical_key()
            if key in terms:
                old_prime, old_coeff = terms[key]
                coeff = old_coeff + coeff
                prime = old_prime
            if coeff:
                terms[key] = (prime.canonical_gens(), coeff)
            else:
                terms.pop(key, None)
        object.__setattr__(self, "scheme", scheme)
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, *a):
        raise AttributeError("Cycle is immutable")

    def is_zero(self) -> bool:
        return not self.terms

    def entries(self) -> list[tuple[Ideal, int]]:
        """(prime, coefficient) pairs, dimension descending then basis text."""
        items = list(self.terms.values())
        items.sort(key=lambda pc: prime_sort_key(pc[0]))
        return items

    def coefficient(self, prime: Ideal) -> int:
        got = self.terms.get(prime.canonical_key())
        return got[1] if got else 0

    def dims(self) -> set[int]:
        return {krull_dimension(p) for p, _ in self.terms.values()}

    def __add__(self, other: "Cycle") -> "Cycle":
        self._check(other)
        return Cycle(self.scheme, list(self.terms.values()) + list(other.terms.values()))

    def __sub__(self, other: "Cycle") -> "Cycle":
        return self + other.scale(-1)

    def __neg__(self) -> "Cycle":
        return self.scale(-1)

    def scale(self, n: int) -> "Cycle":
        return Cycle(self.scheme, [(p, c * n) for p, c in self.terms.values()])

    def on_scheme(self, scheme: SchemeDesc) -> "Cycle":
        """The same formal sum re-read on another scheme in the same ring."""
        if scheme.ring != self.scheme.ring:
            raise IncompatibleRingsError("incompatible rings")
        return Cycle(scheme, list(self.terms.values()))

    def _check(self, other: "Cycle"):
        if not isinstance(other, Cycle) or other.scheme != self.scheme:
            raise IncompatibleRingsError("cycles live on different schemes")

    def __eq__(self, other):
        return (isinstance(other, Cycle) and self.scheme == other.scheme
                and {k: v[1] for k, v in self.terms.items()}
                == {k: v[1] for k, v in other.terms.items()})

    def __hash__(self):
        return hash((self.scheme, frozenset((k, v[1]) for k, v in self.terms.items())))

    def __str__(self) -> str:
        return render_cycle(self)

    def __repr__(self) -> str:
        return f"<cycle {render_cycle(self)}>"


def render_cycle(c: Cycle) -> str:
    """Canonical text like ``2*[x] + 1*[y]``; the zero cycle prints ``0``."""
    if c.is_zero():
        return "0"
    parts = []
    for prime, coeff in c.entries():
        basis = ", ".join(prime.canonical_key())
        parts.append(f"{coeff}*[{basis}]")
    return " + ".join(parts)


def cycle_arith(op: str, a: Cycle, b=None) -> Cycle:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "neg":
        return -a
    if op == "scale":
        return a.scale(b)
    raise DomainError(f"unknown cycle op {op!r}")


def degree_check(c: Cycle, n: int) -> bool:
    """True when every term has dimension exactly n."""
    return all(krull_dimension(p) == n for p, _ in c.terms.values())


def restrict_cycle(c: Cycle, f: Poly) -> Cycle:
    """Restriction to the distinguished open D(f): terms whose prime
    contains f become invisible and are dropped."""
    if f.ring != c.scheme.ring:
        raise IncompatibleRingsError("incompatible rings")
    if radical_member(f, c.scheme.ideal):
        raise DomainError("empty open set")
    kept = [(p, n) for p, n in c.terms.values() if not p.contains(f)]
    return Cycle(c.scheme, kept)


@dataclass(frozen=True)
class DistinguishedCover:
    """Finitely many distinguished opens D(f_i) that jointly cover the
    scheme; checked by the unit-ideal test."""

    scheme: SchemeDesc
    elements: tuple[Poly, ...]

    def __post_init__(self):
        if not self.elements:
            raise DomainError("a cover needs at least one element")
        for f in self.elements:
            if f.ring != self.scheme.ring:
                raise IncompatibleRingsError("incompatible rings")
        total = Ideal(self.scheme.ring, self.scheme.ideal.gens + self.elements)
        if not total.is_unit():
            raise DomainError("cover elements do not generate the unit ideal")


@dataclass(frozen=True)
class LocalCycleDatum:
    """Per-chart cycle data over a distinguished cover.  Chart i lists
    (prime, coefficient) pairs with f_i outside each prime."""

    cover: DistinguishedCover
    charts: tuple[tuple[tuple[Ideal, int], ...], ...]

    def __post_init__(self):
        if len(self.charts) != len(self.cover.elements):
            raise DomainError("chart count does not match the cover")
        ambient = self.cover.scheme.ideal
        for f, chart in zip(self.cover.elements, self.charts):
            for prime, _ in chart:
                if prime.contains(f):
                    raise DomainError(
                        "chart datum lists a component invisible on its own chart")
                for g in ambient.gens:
                    if not prime.contains(g):
                        raise DomainError(
                            "chart datum lists a prime not on the scheme")


def glue_cycles(datum: LocalCycleDatum) -> Cycle:
    """Glue chart data into one cycle, verifying agreement on every
    pairwise overlap D(f_i * f_j) term by term."""
    cover = datum.cover
    fs = cover.elements
    charts = [dict() for _ in fs]
    keep: dict[tuple, tuple[Ideal, int]] = {}
    for i, chart in enumerate(datum.charts):
        for prime, coeff in chart:
            charts[i][prime.canonical_key()] = (prime, coeff)
            keep.setdefault(prime.canonical_key(), (prime, coeff))
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            overlap_keys = set()
            for key, (prime, _) in charts[i].items():
                if not prime.contains(fs[j]):
                    overlap_keys.add(key)
            for key, (prime, _) in charts[j].items():
                if not prime.contains(fs[i]):
                    overlap_keys.add(key)
            for key in sorted(overlap_keys):
                a = charts[i].get(key, (None, 0))[1]
                b = charts[j].get(key, (None, 0))[1]
                if a != b:
                    prime = (charts[i].get(key) or charts[j].get(key))[0]
                    basis = ", ".join(prime.canonical_key())
                    raise DomainError(
                        f"inconsistent cover data: component [{basis}] has "
                        f"coefficients {a}≠{b} on charts {i + 1},{j + 1}")
    glued = Cycle(cover.scheme, list(keep.values()))
    for i, f in enumerate(fs):
        back = restrict_cycle(glued, f)
        expect = Cycle(cover.scheme, list(charts[i].values()))
        if back != expect:
            raise DomainError(
                f"glued cycle does not restrict back to chart {i + 1}")
    return glued


def separatedness_holds(c: Cycle, cover: DistinguishedCover) -> bool:
    """A cycle restricting to zero on every chart of a cover is zero."""
    if cover.scheme != c.scheme:
        raise IncompatibleRingsError("cycles live on different schemes")
    all_zero = all(restrict_cycle(c, f).is_zero() for f in cover.elements)
    if not all_zero:
        return True  # nothing to test
    return c.is_zero()
