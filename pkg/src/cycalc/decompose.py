"""Minimal primes of desk-scale ideals, and the scheme descriptions built
on them.

The decomposition is recursive splitting: monomial ideals go through the
combinatorial cover algorithm, factorable generators or eliminants split
the ideal, and zero-divisor witnesses split off saturations.  A branch
that stops splitting must pass a primality certificate or the whole
computation refuses with "decomposition escapes the supported envelope";
fixtures may then certify components themselves, which is recorded in the
provenance tag.

Certificates are deliberately conservative.  Every accepted leaf is
genuinely prime: linear substitutions reduce to a smaller ring, principal
ideals need a certified-irreducible generator, and zero-dimensional
ideals need the quotient to be visibly a field (vector space dimension 1,
or an irreducible single-variable eliminant of full degree).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import DomainError, EnvelopeError, IncompatibleRingsError
from .polys import Poly, PolyRing, exact_div, factor_univariate, poly_sqrt
from .ideals import (Ideal, ideal_eliminate, ideal_intersect, ideal_quotient,
                     ideal_saturate, krull_dimension, radical_member,
                     vector_space_dim)

SPLIT_BUDGET = 100
SPLIT_DEPTH_CAP = 40

COMPUTED = "Computed"
CERTIFIED = "CertifiedByFixture"

_ESCAPES = "decomposition escapes the supported envelope"


def prime_sort_key(p: Ideal):
    dim = krull_dimension(p)
    return (-(dim if dim is not None else -1), p.canonical_key())


@dataclass(frozen=True)
class ComponentSet:
    """Minimal primes of an ideal, canonically ordered, with provenance."""

    ambient: Ideal
    primes: tuple[Ideal, ...]
    provenance: str

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)


class SchemeDesc:
    """An affine scheme presented by an ideal in an ambient polynomial ring."""

    __slots__ = ("ring", "ideal", "name", "_components")

    def __init__(self, ring: PolyRing, ideal: Ideal, name: str = "",
                 components: ComponentSet | None = None):
        if ideal.ring != ring:
            raise IncompatibleRingsError("incompatible rings")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "ideal", ideal)
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_components", components)

    def __setattr__(self, *a):
        raise AttributeError("SchemeDesc is immutable")

    def is_empty(self) -> bool:
        return self.ideal.is_unit()

    def dim(self) -> int | None:
        return krull_dimension(self.ideal)

    def components(self) -> ComponentSet:
        got = self._components
        if got is None:
            got = minimal_primes(self.ideal)
            object.__setattr__(self, "_components", got)
        return got

    def __eq__(self, other):
        return (isinstance(other, SchemeDesc) and self.ring == other.ring
                and self.ideal == other.ideal)

    def __hash__(self):
        return hash((self.ring, self.ideal))

    def __repr__(self):
        label = self.name or "scheme"
        return f"<{label}: {self.ideal!r}>"


# -- irreducibility certificates ----------------------------------------------


def certified_irreducible(f: Poly) -> bool | None:
    """True/False when irreducibility over the coefficient field can be
    certified, None when the question escapes the envelope."""
    if f.is_zero() or f.is_constant():
        return False
    if f.total_degree() == 1:
        return True
    used = f.variables_used()
    if len(used) == 1:
        try:
            pairs = factor_univariate(f)
        except EnvelopeError:
            return None
        return len(pairs) == 1 and pairs[0][1] == 1
    field = f.ring.field
    for v in used:
        dv = f.degree_in(v)
        if dv not in (1, 2):
            continue
        coeffs = _coeffs_in(f, v)
        if dv == 1:
            a, b = coeffs[1], coeffs[0]
            if a.is_constant() or (b.is_constant() and not b.is_zero()):
                return True  # content-free linear in v
            continue
        if field.characteristic == 2:
            continue
        a, b, c = coeffs[2], coeffs[1], coeffs[0]
        if not a.is_constant():
            continue
        ring = f.ring
        disc = b * b - ring.const(4) * a * c
        root = poly_sqrt(disc)
        return root is None
    return None


def _coeffs_in(f: Poly, v: int) -> list[Poly]:
    """Coefficients of f as a polynomial in variable v."""
    ring = f.ring
    deg = f.degree_in(v)
    buckets: list[dict] = [dict() for _ in range(deg + 1)]
    for exp, c in f.terms.items():
        nexp = list(exp)
        e = nexp[v]
        nexp[v] = 0
        buckets[e][tuple(nexp)] = c
    return [Poly(ring, b) for b in buckets]


def _known_factors(g: Poly) -> list[Poly] | None:
    """Distinct nonunit factors of g when a certified factorization is in
    reach; None otherwise.  A single returned factor means g is a proper
    power of it."""
    if g.is_zero() or g.is_constant():
        return None
    used = g.variables_used()
    if len(used) == 1:
        try:
            pairs = factor_univariate(g)
        except EnvelopeError:
            return None
        if len(pairs) == 1 and pairs[0][1] == 1:
            return None
        return [f for f, _ in pairs]
    ring = g.ring
    # common variable factor
    for v in used:
        if all(exp[v] > 0 for exp in g.terms):
            vpoly = ring.var(ring.vars[v])
            rest = exact_div(g, vpoly)
            if rest.is_constant():
                return None  # monomial, handled elsewhere
            return [vpoly, rest]
    # quadratic in one variable with constant lead and square discriminant
    field = ring.field
    if field.characteristic != 2:
        for v in used:
            if g.degree_in(v) != 2:
                continue
            coeffs = _coeffs_in(g, v)
            a, b, c = coeffs[2], coeffs[1], coeffs[0]
            if not a.is_constant():
                continue
            disc = b * b - ring.const(4) * a * c
            root = poly_sqrt(disc)
            if root is None:
                continue  # irreducible along v; another view may still split
            two_a = field.mul(field.normalize(2), a.constant_value())
            vv = ring.var(ring.vars[v])
            inv = field.inv(two_a)
            r1 = (-b + root).scale(inv)
            r2 = (-b - root).scale(inv)
            f1, f2 = vv - r1, vv - r2
            return [f1] if f1 == f2 else [f1, f2]
    return None


# -- monomial ideals -----------------------------------------------------------


def _monomial_minimal_primes(gb: tuple[Poly, ...], ring: PolyRing) -> list[Ideal]:
    """Minimal covers of the generators' supports give the minimal primes."""
    supports = []
    for g in gb:
        exp = next(iter(g.terms))
        supports.append(frozenset(i for i, e in enumerate(exp) if e))
    n = ring.nvars
    covers: list[frozenset] = []
    for size in range(n + 1):
        for combo in combinations(range(n), size):
            s = frozenset(combo)
            if any(c <= s for c in covers):
                continue
            if all(sup & s for sup in supports):
                covers.append(s)
    out = []
    for s in covers:
        gens = [ring.var(ring.vars[i]) for i in sorted(s)]
        out.append(Ideal(ring, gens))
    return out


# -- leaf certificates ----------------------------------------------------------


def _substitution_reduce(gb: tuple[Poly, ...], ring: PolyRing):
    """Repeatedly solve generators linear in some variable with constant
    lead coefficient, substituting into the rest.  Returns the residual
    generators; the quotient ring is isomorphic through these steps."""
    gens = [g for g in gb]
    images = {v: ring.var(v) for v in ring.vars}
    changed = True
    while changed:
        changed = False
        for idx, g in enumerate(gens):
            for v in g.variables_used():
                if g.degree_in(v) != 1:
                    continue
                coeffs = _coeffs_in(g, v)
                lead = coeffs[1]
                if not lead.is_constant():
                    continue
                value = coeffs[0].scale(ring.field.neg(ring.field.inv(lead.constant_value())))
                name = ring.vars[v]
                sub = {w: (value if w == name else ring.var(w)) for w in ring.vars}
                gens = [h.substitute(sub, ring) for i, h in enumerate(gens) if i != idx]
                gens = [h for h in gens if not h.is_zero()]
                changed = True
                break
            if changed:
                break
    return gens


def _eliminant(ideal: Ideal, v: str) -> Poly | None:
    """Generator of the ideal's intersection with k[v], None when zero."""
    others = [w for w in ideal.ring.vars if w != v]
    elim = ideal_eliminate(ideal, others)
    gb = elim.groebner()
    if not gb:
        return None
    if len(gb) != 1:
        raise DomainError("univariate elimination did not yield a principal ideal")
    return gb[0]


def _leaf_is_prime(ideal: Ideal) -> bool:
    gb = ideal.groebner()
    if not gb:
        return True  # the zero ideal of a polynomial ring
    residual = _substitution_reduce(gb, ideal.ring)
    if not residual:
        return True
    if len(residual) == 1:
        if certified_irreducible(residual[0]):
            return True
    if len(gb) == 1:
        if certified_irreducible(gb[0]):
            return True
    dim = krull_dimension(ideal)
    if dim == 0:
        vdim = vector_space_dim(ideal)
        if vdim == 1:
            return True
        for v in ideal.ring.vars:
            e = _eliminant(ideal, v)
            if e is None:
                continue
            if e.total_degree() == vdim and certified_irreducible(e):
                return True
    return False


# -- the splitting recursion -----------------------------------------------------


def _split_candidates(ideal: Ideal) -> list[Poly]:
    """Zero-divisor witness candidates, in the documented search order:
    univariate factors of generators, single variables, pairwise
    differences of generators."""
    gb = ideal.groebner()
    out: list[Poly] = []
    for g in gb:
        if len(g.variables_used()) == 1:
            try:
                for f, _ in factor_univariate(g):
                    out.append(f)
            except EnvelopeError:
                pass
    out.extend(ideal.ring.gens())
    for i in range(len(gb)):
        for j in range(i + 1, len(gb)):
            out.append(gb[i] - gb[j])
    return out


def _decompose(ideal: Ideal, depth: int) -> list[Ideal]:
    if depth > SPLIT_DEPTH_CAP:
        raise EnvelopeError(_ESCAPES)
    gb = ideal.groebner()
    if len(gb) == 1 and gb[0].is_constant():
        return []  # unit ideal, empty locus
    if all(len(g.terms) == 1 for g in gb):
        return _monomial_minimal_primes(gb, ideal.ring)

    # factorable generator: I splits along V(g) = union of V(g_i)
    for g in gb:
        factors = _known_factors(g)
        if not factors:
            continue
        useful = [f for f in factors if not ideal.contains(f)]
        if len(factors) >= 2:
            out = []
            for f in factors:
                out.extend(_decompose(Ideal(ideal.ring, ideal.gens + (f,)), depth + 1))
            return out
        if useful:
            return _decompose(Ideal(ideal.ring, ideal.gens + (useful[0],)), depth + 1)

    # factorable eliminant
    for v in ideal.ring.vars:
        e = _eliminant(ideal, v)
        if e is None or e.is_constant():
            continue
        factors = _known_factors(e)
        if not factors:
            continue
        useful = [f for f in factors if not ideal.contains(f)]
        if len(factors) >= 2:
            out = []
            for f in factors:
                out.extend(_decompose(Ideal(ideal.ring, ideal.gens + (f,)), depth + 1))
            return out
        if useful:
            return _decompose(Ideal(ideal.ring, ideal.gens + (useful[0],)), depth + 1)

    # zero-divisor witness: V(I) = V(I : f^inf) union V(I + f)
    budget = SPLIT_BUDGET
    for f in _split_candidates(ideal):
        if budget <= 0:
            break
        budget -= 1
        if f.is_constant() or ideal.contains(f):
            continue
        colon = ideal_quotient(ideal, f)
        if colon.canonical_key() == ideal.canonical_key():
            continue
        if radical_member(f, ideal):
            continue
        sat = ideal_saturate(ideal, f)
        left = _decompose(sat, depth + 1)
        right = _decompose(Ideal(ideal.ring, ideal.gens + (f,)), depth + 1)
        return left + right

    if _leaf_is_prime(ideal):
        return [ideal.canonical_gens()]
    raise EnvelopeError(_ESCAPES)


def minimal_primes(ideal: Ideal) -> ComponentSet:
    """Minimal primes over the ideal, deduplicated, inclusion-filtered and
    canonically ordered (dimension descending, basis text ascending)."""
    if ideal.is_unit():
        raise DomainError("unit ideal has no components")
    found = _decompose(ideal, 0)
    unique: dict[tuple, Ideal] = {}
    for p in found:
        unique.setdefault(p.canonical_key(), p.canonical_gens())
    primes = list(unique.values())
    minimal = []
    for p in primes:
        contains_other = False
        for q in primes:
            if q is p or q.canonical_key() == p.canonical_key():
                continue
            if all(p.contains(g) for g in q.groebner()):
                contains_other = True  # q sits strictly inside p
                break
        if not contains_other:
            minimal.append(p)
    minimal.sort(key=prime_sort_key)
    return ComponentSet(ideal, tuple(minimal), COMPUTED)


def verify_components(ideal: Ideal, primes: list[Ideal]) -> tuple[bool, str]:
    """Checks a claimed component list: containment of the ideal in every
    prime, the intersection inside the radical, and pairwise
    incomparability.  Primality itself stays an assumption."""
    if not primes:
        return False, "empty component list"
    for p in primes:
        for g in ideal.gens:
            if not p.contains(g):
                return False, f"ideal not contained in [{', '.join(p.canonical_key())}]"
    inter = None
    for p in primes:
        inter = p if inter is None else ideal_intersect(inter, p)
    for g in inter.groebner():
        if not radical_member(g, ideal):
            return False, "intersection of claimed components exceeds the radical"
    for i, p in enumerate(primes):
        for j, q in enumerate(primes):
            if i == j:
                continue
            if all(q.contains(g) for g in p.groebner()):
                return False, "claimed components are comparable"
    return True, "ok"


def certified_components(ideal: Ideal, primes: list[Ideal]) -> ComponentSet:
    ok, reason = verify_components(ideal, primes)
    if not ok:
        raise DomainError(f"component certificate rejected: {reason}")
    ordered = sorted((p.canonical_gens() for p in primes), key=prime_sort_key)
    return ComponentSet(ideal, tuple(ordered), CERTIFIED)


def is_pure_dimensional(scheme: SchemeDesc) -> tuple[bool, int | None]:
    """Whether all components share the scheme's dimension."""
    if scheme.is_empty():
        return True, None
    dims = {krull_dimension(p) for p in scheme.components()}
    if len(dims) == 1:
        return True, dims.pop()
    return False, None


def rational_points(ideal: Ideal) -> list[tuple]:
    """All F_p-rational points of the vanishing locus by brute force."""
    field = ideal.ring.field
    if field.kind != "Fp":
        raise DomainError("point enumeration requires a finite field")
    p = field.characteristic
    n = ideal.ring.nvars
    if p ** n > 300000:
        raise EnvelopeError("point enumeration budget exceeded")
    gens = ideal.gens
    out = []
    point = [0] * n
    while True:
        if all(g.evaluate(tuple(point)) == 0 for g in gens):
            out.append(tuple(point))
        i = 0
        while i < n:
            point[i] += 1
            if point[i] < p:
                break
            point[i] = 0
            i += 1
        if i == n:
            break
    return out
