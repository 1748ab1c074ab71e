"""Flat maps between affine schemes sharing one ambient ring, pullback of
meromorphic functions and of cycles, and the commutation checks.

A map lists images for the target variables that matter; unlisted
variables go to zero, which is consistent exactly when the target ideal
already contains them.  Flatness itself is never certified in general:
each map carries a construction tag from a whitelist of shapes that are
flat by standard theory, and every pullback re-runs a necessary-condition
guard on preimage dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, IncompatibleRingsError
from .polys import Poly
from .ideals import Ideal, ideal_sum, krull_dimension, vector_space_dim
from .decompose import SchemeDesc, minimal_primes
from .cycles import Cycle
from .lengths import fundamental_cycle_of, length_at_prime
from .mero import MeroFn, check_prop32, is_nonzerodivisor, weil_divisor

FLATNESS_KINDS = ("OpenImmersion", "AffineSpaceProjection", "FreeWithBasis",
                  "ToAffineLine", "Declared")


@dataclass(frozen=True)
class Flatness:
    """Why the map is flat: a whitelist shape, or a fixture declaration."""

    kind: str
    basis: tuple[Poly, ...] = ()
    line_coord: str = ""

    def __post_init__(self):
        if self.kind not in FLATNESS_KINDS:
            raise DomainError(f"unknown flatness tag {self.kind!r}")
        if self.kind == "FreeWithBasis" and not self.basis:
            raise DomainError("free maps need an explicit basis")
        if self.kind == "ToAffineLine" and not self.line_coord:
            raise DomainError("maps to the line need the line coordinate")


class FlatMap:
    """A morphism source -> target of constant relative dimension."""

    __slots__ = ("source", "target", "images", "reldim", "flatness", "name")

    def __init__(self, source: SchemeDesc, target: SchemeDesc,
                 images: dict[str, Poly], reldim: int, flatness: Flatness,
                 name: str = ""):
        ring = source.ring
        if target.ring != ring:
            raise IncompatibleRingsError("maps need a shared ambient ring")
        for v, p in images.items():
            if v not in ring.vars:
                raise DomainError(f"unknown variable {v!r}")
            if p.ring != ring:
                raise IncompatibleRingsError("incompatible rings")
        for g in target.ideal.gens:
            if not source.ideal.contains(g.substitute(images, ring)):
                raise DomainError(
                    "map images do not carry the target ideal into the source ideal")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "images", dict(images))
        object.__setattr__(self, "reldim", reldim)
        object.__setattr__(self, "flatness", flatness)
        object.__setattr__(self, "name", name)

    def __setattr__(self, *a):
        raise AttributeError("FlatMap is immutable")

    def apply(self, p: Poly) -> Poly:
        """The ring map on a polynomial: substitute variable images."""
        if p.ring != self.source.ring:
            raise IncompatibleRingsError("incompatible rings")
        return p.substitute(self.images, self.source.ring)

    def preimage_ideal(self, prime: Ideal) -> Ideal:
        """Schematic preimage of a closed subscheme of the target."""
        ring = self.source.ring
        subbed = [self.apply(g) for g in prime.canonical_gens().gens]
        subbed = [h for h in subbed if not h.is_zero()]
        return ideal_sum(self.source.ideal, Ideal(ring, subbed))

    def __repr__(self):
        label = self.name or "map"
        return f"<{label}: reldim {self.reldim}, {self.flatness.kind}>"


def identity_map(scheme: SchemeDesc) -> FlatMap:
    ring = scheme.ring
    images = {v: ring.var(v) for v in ring.vars}
    return FlatMap(scheme, scheme, images, 0, Flatness("OpenImmersion"),
                   name="id")


def compose_maps(outer: FlatMap, inner: FlatMap) -> FlatMap:
    """outer after inner; tags stay on the whitelist only for immersions
    with immersions and projections with projections."""
    if inner.target != outer.source:
        raise DomainError("maps do not compose: inner target is not outer source")
    ring = inner.source.ring
    images = {v: p.substitute(inner.images, ring)
              for v, p in outer.images.items()}
    k1, k2 = inner.flatness.kind, outer.flatness.kind
    if k1 == k2 and k1 in ("OpenImmersion", "AffineSpaceProjection"):
        tag = Flatness(k1)
    else:
        tag = Flatness("Declared")
    return FlatMap(inner.source, outer.target, images,
                   inner.reldim + outer.reldim, tag,
                   name=f"{outer.name or 'g'}*{inner.name or 'f'}")


def pullback_mero(f: FlatMap, r: MeroFn) -> MeroFn:
    """f-sharp: substitute images into the fraction; the results must stay
    non-zerodivisors, which flatness guarantees in theory and the
    constructor re-verifies in practice."""
    if r.scheme != f.target:
        raise IncompatibleRingsError("function does not live on the target")
    num = f.apply(r.num)
    den = f.apply(r.den)
    try:
        return MeroFn(f.source, num, den, r.invertible)
    except DomainError as exc:
        raise DomainError(
            "pullback not a non-zerodivisor: declared map is not flat") from exc


def _guard_preimage(f: FlatMap, prime: Ideal, comps) -> None:
    expected = krull_dimension(prime) + f.reldim
    for q in comps:
        if krull_dimension(q) != expected:
            raise DomainError(
                "preimage dimension mismatch: map not flat of relative "
                f"dimension {f.reldim}")


def _free_rank_check(f: FlatMap, prime: Ideal, pre: Ideal) -> None:
    """Partial certification of a free map: over a closed point the fiber
    must be a free module of the declared rank."""
    if f.flatness.kind != "FreeWithBasis" or f.reldim != 0:
        return
    if krull_dimension(prime) != 0:
        return
    rank = len(f.flatness.basis)
    if vector_space_dim(pre) != rank * vector_space_dim(prime):
        raise DomainError("free basis rank check failed")


def pullback_cycle(f: FlatMap, alpha: Cycle) -> Cycle:
    """f-star: each prime is replaced by the fundamental cycle of its
    schematic preimage, weighted through."""
    if alpha.scheme != f.target:
        raise IncompatibleRingsError("cycle does not live on the target")
    coord = f.flatness.line_coord
    out = Cycle(f.source, [])
    for prime, coeff in alpha.entries():
        if coord and not prime.contains(f.source.ring.var(coord)):
            raise DomainError("outside certified-flat locus")
        pre = f.preimage_ideal(prime)
        if pre.is_unit():
            continue
        comps = minimal_primes(pre)
        _guard_preimage(f, prime, comps)
        _free_rank_check(f, prime, pre)
        fiber = Cycle(f.source,
                      [(q, length_at_prime(pre, q, comps).value) for q in comps])
        out = out + fiber.scale(coeff)
    return out


def to_affine_line(scheme: SchemeDesc, b: Poly, coord: str) -> FlatMap:
    """The map to the affine line given by a non-zerodivisor b, realized
    inside the shared ambient ring on the axis named ``coord``.

    Flatness is certified only near the zero locus of b, so cycle
    pullback through this map rejects terms away from the origin.
    """
    ring = scheme.ring
    if coord not in ring.vars:
        raise DomainError(f"unknown variable {coord!r}")
    if not is_nonzerodivisor(scheme, b):
        raise DomainError("denominator is a zero-divisor")
    others = [ring.var(v) for v in ring.vars if v != coord]
    line = SchemeDesc(ring, Ideal(ring, others), name=f"line_{coord}")
    dim = scheme.dim()
    if dim is None or dim < 1:
        raise DomainError("scheme must be positive-dimensional")
    return FlatMap(scheme, line, {coord: b}, dim - 1,
                   Flatness("ToAffineLine", line_coord=coord),
                   name=f"to_{coord}")


@dataclass(frozen=True)
class Eq5Report:
    """Both sides of the divisor-pullback commutation, with the optional
    factor-wise split into numerator and denominator parts."""

    lhs: Cycle
    rhs: Cycle
    equal: bool
    factors: tuple | None = None


def check_pullback_commutes(f: FlatMap, r: MeroFn,
                            factored: bool = False) -> Eq5Report:
    """Pullback of div(r) against div of the pulled-back function."""
    lhs = pullback_cycle(f, weil_divisor(f.target, r))
    rhs = weil_divisor(f.source, pullback_mero(f, r))
    factors = None
    if factored:
        parts = []
        for h in (r.num, r.den):
            zy = fundamental_cycle_of(f.target, Ideal(f.target.ring, [h]),
                                      certified_pure=True)
            lf = pullback_cycle(f, zy)
            rf = fundamental_cycle_of(f.source,
                                      Ideal(f.source.ring, [f.apply(h)]),
                                      certified_pure=True)
            parts.append((lf, rf, lf == rf))
        factors = tuple(parts)
    return Eq5Report(lhs, rhs, lhs == rhs, factors)


@dataclass(frozen=True)
class RatGenerator:
    """A generator of rational equivalence: a subvariety with an
    invertible function on it, and the divisor read in the ambient."""

    ambient: SchemeDesc
    subvariety: Ideal
    fn: MeroFn
    cycle: Cycle


def rat_generator(scheme: SchemeDesc, sub: Ideal, r: MeroFn) -> RatGenerator:
    """Package (V, r) with the cycle div(r) computed on V and re-read on
    the ambient scheme."""
    if sub.ring != scheme.ring:
        raise IncompatibleRingsError("incompatible rings")
    for g in scheme.ideal.gens:
        if not sub.contains(g):
            raise DomainError("subvariety does not lie on the scheme")
    sub_scheme = SchemeDesc(scheme.ring, sub.canonical_gens())
    if r.scheme != sub_scheme:
        raise IncompatibleRingsError("function does not live on the subvariety")
    div = weil_divisor(sub_scheme, r).on_scheme(scheme)
    return RatGenerator(scheme, sub_scheme.ideal, r, div)


@dataclass(frozen=True)
class Thm6Report:
    """Pullback of a rational-equivalence generator, its identification
    with a divisor on the preimage, and the component-wise witness."""

    lhs: Cycle
    preimage: SchemeDesc
    pulled_fn: MeroFn
    divisor: Cycle
    witness: tuple
    equal: bool
    witness_ok: bool


def check_thm6(f: FlatMap, gen: RatGenerator) -> Thm6Report:
    """The pulled-back generator cycle is itself a divisor on the
    schematic preimage, hence rationally equivalent to zero, with the
    witness decomposition listing one generator per component."""
    if gen.ambient != f.target:
        raise IncompatibleRingsError("generator does not live on the target")
    pre = f.preimage_ideal(gen.subvariety)
    comps = minimal_primes(pre)
    _guard_preimage(f, gen.subvariety, comps)
    w = SchemeDesc(f.source.ring, pre, components=comps)
    num = f.apply(gen.fn.num)
    den = f.apply(gen.fn.den)
    try:
        pulled = MeroFn(w, num, den, True)
    except DomainError as exc:
        raise DomainError(
            "pullback not a non-zerodivisor: declared map is not flat") from exc
    lhs = pullback_cycle(f, gen.cycle)
    div_w = weil_divisor(w, pulled).on_scheme(f.source)
    decomposition = check_prop32(w, pulled)
    witness_sum = decomposition.rhs.on_scheme(f.source)
    return Thm6Report(
        lhs=lhs,
        preimage=w,
        pulled_fn=pulled,
        divisor=div_w,
        witness=decomposition.terms,
        equal=lhs == div_w,
        witness_ok=decomposition.equal and witness_sum == lhs,
    )
