"""Multiplicities: the length of a local ring at a minimal prime, and the
fundamental cycle built from those lengths.

The length of (R/I) localized at a minimal prime P is computed without
fraction-field arithmetic.  First the P-primary part is isolated by
saturating I at a witness that vanishes on every other component but not
on V(P).  In dimension zero the length is then the ratio of two staircase
counts.  In positive dimension the variables of a maximal independent set
u modulo P are pushed into the ground field: a Groebner basis for a block
order in which the remaining variables dominate stays a Groebner basis
over k(u), so the staircase of the projected leading terms counts the
k(u)-dimension of the fiber, and the ratio of fiber dimensions for the
isolated part and for P itself is the length.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, IncompatibleRingsError, InternalInvariantError
from .polys import Poly, PolyRing
from .ideals import (Ideal, ideal_saturate, ideal_sum, independent_sets,
                     krull_dimension, staircase_count, transport,
                     vector_space_dim)
from .decompose import ComponentSet, SchemeDesc, is_pure_dimensional, minimal_primes
from .cycles import Cycle


@dataclass(frozen=True)
class LocalLength:
    """Length of a localization at a minimal prime, with the method used:
    ``ZeroDimStaircase`` for points, ``GenericFiber`` above dimension zero."""

    ideal: Ideal
    prime: Ideal
    value: int
    method: str


def _isolating_witness(prime: Ideal, others: list[Ideal]) -> Poly | None:
    """Product of one canonical generator per other component, each chosen
    outside the target prime.  None when there is nothing to separate."""
    if not others:
        return None
    f = prime.ring.one()
    for q in others:
        for g in q.canonical_gens().gens:
            if not prime.contains(g):
                f = f * g
                break
        else:
            raise InternalInvariantError(
                "minimal primes are not incomparable")
    return f


def _generic_fiber_dim(idl: Ideal, u: tuple[int, ...]) -> int:
    """k(u)-dimension of the fiber of V(idl) over the coordinate subspace
    of the independent variables u, via a block-order basis."""
    ring = idl.ring
    uset = set(u)
    nonu = [i for i in range(ring.nvars) if i not in uset]
    if not nonu:
        # idl meets k[u] trivially, so the extension is the whole field
        return 1
    perm = nonu + [i for i in range(ring.nvars) if i in uset]
    work = PolyRing([ring.vars[i] for i in perm], ring.field,
                    ("block", len(nonu)))
    fwd = {src: dst for dst, src in enumerate(perm)}
    lifted = Ideal(work, [transport(g, work, fwd) for g in idl.gens])
    nblock = len(nonu)
    projected = []
    for g in lifted.groebner():
        exp = g.leading()[0]
        head = exp[:nblock]
        if all(e == 0 for e in head):
            raise InternalInvariantError(
                "generic fiber extension is not proper")
        projected.append(head)
    try:
        return staircase_count(projected, nblock)
    except DomainError as exc:
        raise InternalInvariantError(
            "generic fiber is not zero-dimensional") from exc


def length_at_prime(ideal: Ideal, prime: Ideal,
                    all_primes: ComponentSet | None = None) -> LocalLength:
    """Length of (R/ideal) localized at one of its minimal primes."""
    if prime.ring != ideal.ring:
        raise IncompatibleRingsError("incompatible rings")
    comps = all_primes if all_primes is not None else minimal_primes(ideal)
    key = prime.canonical_key()
    if key not in {q.canonical_key() for q in comps}:
        raise DomainError("not a minimal prime")
    others = [q for q in comps if q.canonical_key() != key]
    witness = _isolating_witness(prime, others)
    isolated = ideal_saturate(ideal, witness) if witness is not None else ideal
    d = krull_dimension(prime)
    if d == 0:
        vq = vector_space_dim(isolated)
        vp = vector_space_dim(prime)
        method = "ZeroDimStaircase"
    else:
        u = independent_sets(prime, d)[0]
        vq = _generic_fiber_dim(isolated, u)
        vp = _generic_fiber_dim(prime, u)
        method = "GenericFiber"
    if vp <= 0 or vq % vp:
        raise InternalInvariantError("length not integral")
    return LocalLength(ideal, prime.canonical_gens(), vq // vp, method)


def fundamental_cycle(scheme: SchemeDesc) -> Cycle:
    """[X]: each component weighted by the length of the local ring at its
    generic point.  Defined for pure-dimensional schemes only."""
    return fundamental_cycle_of(scheme, scheme.ideal)


def fundamental_cycle_of(scheme: SchemeDesc, sub: Ideal,
                         certified_pure: bool = False) -> Cycle:
    """Fundamental cycle of the closed subscheme cut out by ``sub``,
    recorded as a cycle on the parent scheme.

    ``certified_pure`` marks calls whose purity is a consequence of an
    already-verified hypothesis; impurity is then an internal failure
    rather than bad input.
    """
    if sub.ring != scheme.ring:
        raise IncompatibleRingsError("incompatible rings")
    total = ideal_sum(scheme.ideal, sub)
    if total.is_unit():
        return Cycle(scheme, [])
    if total == scheme.ideal:
        # The subscheme is all of X; honor certified components.
        comps = scheme.components()
    else:
        comps = minimal_primes(total)
    sub_scheme = SchemeDesc(scheme.ring, total, components=comps)
    pure, _ = is_pure_dimensional(sub_scheme)
    if not pure:
        if certified_pure:
            raise InternalInvariantError(
                "certified-pure subscheme decomposed impure")
        raise DomainError("impure scheme: fundamental cycle undefined here")
    entries = []
    for p in comps:
        entries.append((p, length_at_prime(total, p, comps).value))
    return Cycle(scheme, entries)


def multiplicity(scheme: SchemeDesc, prime: Ideal) -> int:
    """Length of the scheme's local ring at one of its generic points."""
    return length_at_prime(scheme.ideal, prime, scheme.components()).value


def ord_at(scheme: SchemeDesc, prime: Ideal, a: Poly) -> int:
    """Order of vanishing of the function a along the codimension-one
    prime ``prime`` of the scheme."""
    if a.ring != scheme.ring or prime.ring != scheme.ring:
        raise IncompatibleRingsError("incompatible rings")
    if scheme.is_empty():
        raise DomainError("empty scheme has no codimension-one primes")
    dim_x = scheme.dim()
    dim_p = krull_dimension(prime)
    if dim_p is None or dim_p != dim_x - 1:
        raise DomainError("wrong codimension")
    for g in scheme.ideal.gens:
        if not prime.contains(g):
            raise DomainError("prime does not lie on the scheme")
    if not prime.contains(a):
        return 0
    if a.is_zero():
        raise DomainError("order of the zero function is undefined")
    total = ideal_sum(scheme.ideal, Ideal(scheme.ring, [a]))
    return length_at_prime(total, prime).value


def check_length_additivity(ideal: Ideal, prime: Ideal, a: Poly):
    """Length of R/(ideal + a) at ``prime`` against the weighted sum of
    vanishing orders over the components through ``prime``.

    Returns (lhs, contributions, rhs, equal) where contributions lists
    (component, multiplicity, order) triples.
    """
    ring = ideal.ring
    if a.ring != ring or prime.ring != ring:
        raise IncompatibleRingsError("incompatible rings")
    comps = minimal_primes(ideal)
    for q in comps:
        if q.contains(a):
            raise DomainError(
                "function vanishes on a component: additivity undefined")
    total = ideal_sum(ideal, Ideal(ring, [a]))
    lhs = length_at_prime(total, prime).value
    contributions = []
    rhs = 0
    for q in comps:
        if not all(prime.contains(g) for g in q.canonical_gens().gens):
            continue  # component misses the point
        mult = length_at_prime(ideal, q, comps).value
        slice_q = ideal_sum(q, Ideal(ring, [a]))
        order = length_at_prime(slice_q, prime).value
        contributions.append((q, mult, order))
        rhs += mult * order
    return lhs, contributions, rhs, lhs == rhs
