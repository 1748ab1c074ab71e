"""Ideals and Groebner bases.

Buchberger's algorithm with the normal selection strategy and both
classical skip criteria, always finishing with the unique reduced monic
basis sorted ascending by canonical text.  Determinism is load-bearing: the
canonical basis doubles as the ideal's identity for hashing, caching and
printing, and the CLI promises byte-identical output across runs.

The toolbox on top (sum, product, intersection, quotient, saturation,
elimination, dimension, staircase counting, radical membership) is exactly
what the decomposition and length machinery downstream needs.
"""

from __future__ import annotations

from typing import Iterable

from .errors import DomainError, EnvelopeError, IncompatibleRingsError
from .polys import Poly, PolyRing, exact_div, monomial_key, render_poly

SATURATION_CAP = 64


def _lcm_exp(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _reduce_full(f: Poly, basis: list[Poly], key) -> Poly:
    """Complete normal form of f modulo basis: leading and trailing terms."""
    ring = f.ring
    field = ring.field
    leads = [(g.leading(key)) for g in basis]
    result = ring.zero()
    work = f
    while not work.is_zero():
        wexp, wc = work.leading(key)
        hit = None
        for i, (gexp, gc) in enumerate(leads):
            if _divides(gexp, wexp):
                hit = (i, gexp, gc)
                break
        if hit is None:
            mono = Poly(ring, {wexp: wc})
            result = result + mono
            work = work - mono
        else:
            i, gexp, gc = hit
            shift = tuple(w - g for w, g in zip(wexp, gexp))
            work = work - basis[i].mul_term(shift, field.div(wc, gc))
    return result


def _spoly(f: Poly, g: Poly, key) -> Poly:
    fexp, fc = f.leading(key)
    gexp, gc = g.leading(key)
    lcm = _lcm_exp(fexp, gexp)
    field = f.ring.field
    left = f.mul_term(tuple(l - e for l, e in zip(lcm, fexp)), field.inv(fc))
    right = g.mul_term(tuple(l - e for l, e in zip(lcm, gexp)), field.inv(gc))
    return left - right


def buchberger(gens: Iterable[Poly], ring: PolyRing, order=None) -> list[Poly]:
    """The unique reduced monic Groebner basis of the given generators.

    Pair selection is by the order of the pair's lcm with generator-index
    tie break (normal strategy).  The coprime criterion is applied always;
    the chain criterion only against already-processed pairs, which keeps
    it trivially sound.
    """
    order = tuple(order or ring.order)
    key = ring.key if order == ring.order else monomial_key(order)

    basis = [g for g in gens if not g.is_zero()]
    for g in basis:
        if g.ring != ring:
            raise IncompatibleRingsError("incompatible rings")
    if not basis:
        return []

    leads = [g.leading(key)[0] for g in basis]
    pairs = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    done: set[tuple[int, int]] = set()

    def pair_rank(p):
        i, j = p
        return (key(_lcm_exp(leads[i], leads[j])), i, j)

    while pairs:
        i, j = min(pairs, key=pair_rank)
        pairs.discard((i, j))
        done.add((i, j))
        lcm = _lcm_exp(leads[i], leads[j])
        if tuple(a + b for a, b in zip(leads[i], leads[j])) == lcm:
            continue  # coprime leading monomials reduce to zero
        chained = False
        for k in range(len(basis)):
            if k in (i, j) or not _divides(leads[k], lcm):
                continue
            pik = (min(i, k), max(i, k))
            pjk = (min(j, k), max(j, k))
            if pik in done and pjk in done:
                chained = True
                break
        if chained:
            continue
        s = _reduce_full(_spoly(basis[i], basis[j], key), basis, key)
        if s.is_zero():
            continue
        basis.append(s.monic(key))
        leads.append(s.leading(key)[0])
        new = len(basis) - 1
        for k in range(new):
            pairs.add((k, new))

    # minimalize: drop members whose lead is divisible by another lead
    keep = []
    for i, g in enumerate(basis):
        gi = leads[i]
        if any(j != i and _divides(leads[j], gi)
               and (not _divides(gi, leads[j]) or j < i) for j in range(len(basis))):
            continue
        keep.append(g)
    # tail-reduce each survivor against the others
    reduced = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        r = _reduce_full(g, others, key) if others else g
        if not r.is_zero():
            reduced.append(r.monic(key))
    reduced.sort(key=lambda g: render_poly(g, key))
    return reduced


class Ideal:
    """An ideal presented by generators, with cached canonical bases."""

    __slots__ = ("ring", "gens", "_gb", "_key_cache")

    def __init__(self, ring: PolyRing, gens: Iterable[Poly]):
        gs = []
        for g in gens:
            if g.ring != ring:
                raise IncompatibleRingsError("incompatible rings")
            if not g.is_zero():
                gs.append(g)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "gens", tuple(gs))
        object.__setattr__(self, "_gb", {})
        object.__setattr__(self, "_key_cache", None)

    def __setattr__(self, *a):
        raise AttributeError("Ideal is immutable")

    def groebner(self, order=None) -> tuple[Poly, ...]:
        order = tuple(order or self.ring.order)
        got = self._gb.get(order)
        if got is None:
            got = tuple(buchberger(self.gens, self.ring, order))
            self._gb[order] = got
        return got

    def normal_form(self, f: Poly, order=None) -> Poly:
        order = tuple(order or self.ring.order)
        gb = self.groebner(order)
        if not gb:
            return f
        key = self.ring.key if order == self.ring.order else monomial_key(order)
        return _reduce_full(f, list(gb), key)

    def contains(self, f: Poly) -> bool:
        return self.normal_form(f).is_zero()

    def is_unit(self) -> bool:
        gb = self.groebner()
        return len(gb) == 1 and gb[0].is_constant()

    def is_zero_ideal(self) -> bool:
        return not self.groebner()

    def canonical_key(self) -> tuple[str, ...]:
        got = self._key_cache
        if got is None:
            got = tuple(render_poly(g) for g in self.groebner())
            object.__setattr__(self, "_key_cache", got)
        return got

    def canonical_gens(self) -> "Ideal":
        return Ideal(self.ring, self.groebner())

    def __eq__(self, other):
        return (isinstance(other, Ideal) and self.ring == other.ring
                and self.canonical_key() == other.canonical_key())

    def __hash__(self):
        return hash((self.ring, self.canonical_key()))

    def __repr__(self):
        return "Ideal[" + ", ".join(self.canonical_key()) + "]"


# -- ring plumbing for auxiliary variables ------------------------------------


def fresh_var_name(ring: PolyRing, stem: str = "_t") -> str:
    i = 0
    while f"{stem}{i}" in ring.vars:
        i += 1
    return f"{stem}{i}"


def transport(p: Poly, target: PolyRing, index_map: dict[int, int]) -> Poly:
    """Re-read a polynomial in another ring via source->target variable
    index mapping.  Exponents outside the map must be zero."""
    p.ring.field.check_same(target.field)
    out = {}
    for exp, c in p.terms.items():
        nexp = [0] * target.nvars
        for i, e in enumerate(exp):
            if e == 0:
                continue
            if i not in index_map:
                raise DomainError("transport drops a used variable")
            nexp[index_map[i]] = e
        out[tuple(nexp)] = c
    return Poly(target, out)


# -- the toolbox ---------------------------------------------------------------


def ideal_sum(a: Ideal, b: Ideal) -> Ideal:
    if a.ring != b.ring:
        raise IncompatibleRingsError("incompatible rings")
    return Ideal(a.ring, a.gens + b.gens)


def ideal_product(a: Ideal, b: Ideal) -> Ideal:
    if a.ring != b.ring:
        raise IncompatibleRingsError("incompatible rings")
    return Ideal(a.ring, [f * g for f in a.gens for g in b.gens])


def ideal_eliminate(a: Ideal, drop: Iterable[str]) -> Ideal:
    """Generators of a intersected with the subring omitting ``drop``.

    Computed from a Groebner basis for a block order that makes the
    dropped variables dominate; basis members free of them generate the
    elimination ideal.
    """
    drop_set = set(drop)
    for v in drop_set:
        if v not in a.ring.vars:
            raise DomainError(f"unknown variable {v!r}")
    if not drop_set:
        return a
    ring = a.ring
    first = [v for v in ring.vars if v in drop_set]
    rest = [v for v in ring.vars if v not in drop_set]
    work = PolyRing(first + rest, ring.field, ("block", len(first)))
    fwd = {ring.vars.index(v): i for i, v in enumerate(first + rest)}
    back = {work.vars.index(v): ring.vars.index(v) for v in rest}
    gb = buchberger([transport(g, work, fwd) for g in a.gens], work)
    kept = []
    nfirst = len(first)
    for g in gb:
        if all(all(e == 0 for e in exp[:nfirst]) for exp in g.terms):
            kept.append(transport(g, ring, back))
    return Ideal(ring, kept)


def ideal_intersect(a: Ideal, b: Ideal) -> Ideal:
    """Intersection via the auxiliary-variable construction
    (t*a + (1-t)*b) eliminated down to the original variables."""
    if a.ring != b.ring:
        raise IncompatibleRingsError("incompatible rings")
    ring = a.ring
    t = fresh_var_name(ring)
    work = PolyRing((t,) + ring.vars, ring.field, ("block", 1))
    fwd = {i: i + 1 for i in range(ring.nvars)}
    tv = work.var(t)
    one = work.one()
    gens = [tv * transport(g, work, fwd) for g in a.gens]
    gens += [(one - tv) * transport(g, work, fwd) for g in b.gens]
    gb = buchberger(gens, work)
    back = {i + 1: i for i in range(ring.nvars)}
    kept = [transport(g, ring, back) for g in gb
            if all(exp[0] == 0 for exp in g.terms)]
    return Ideal(ring, kept)


def ideal_quotient(a: Ideal, b) -> Ideal:
    """Colon ideal a : b for b a polynomial or an ideal."""
    ring = a.ring
    if isinstance(b, Poly):
        if b.is_zero():
            return Ideal(ring, [ring.one()])
        inter = ideal_intersect(a, Ideal(ring, [b]))
        return Ideal(ring, [exact_div(g, b) for g in inter.groebner()])
    if not b.gens:
        return Ideal(ring, [ring.one()])
    acc = None
    for g in b.gens:
        q = ideal_quotient(a, g)
        acc = q if acc is None else ideal_intersect(acc, q)
    return acc


def ideal_saturate(a: Ideal, b, cap: int = SATURATION_CAP) -> Ideal:
    """Stabilized iterated quotient a : b^infinity with a hard cap."""
    prev = a
    for _ in range(cap):
        nxt = ideal_quotient(prev, b)
        if nxt.canonical_key() == prev.canonical_key():
            return prev
        prev = nxt
    raise EnvelopeError("saturation budget exceeded")


def ideal_binop(op: str, a: Ideal, b) -> Ideal:
    if op == "sum":
        return ideal_sum(a, b)
    if op == "product":
        return ideal_product(a, b)
    if op == "intersect":
        return ideal_intersect(a, b)
    if op == "quotient":
        return ideal_quotient(a, b)
    if op == "saturate":
        return ideal_saturate(a, b)
    raise DomainError(f"unknown ideal op {op!r}")


def leading_term_exponents(a: Ideal) -> list[tuple]:
    return [g.leading()[0] for g in a.groebner()]


def krull_dimension(a: Ideal) -> int | None:
    """Dimension of the vanishing locus; None for the unit ideal.

    The combinatorial rule on the grevlex leading-term ideal: the largest
    variable subset touching no leading monomial's support.
    """
    if a.is_unit():
        return None
    lts = leading_term_exponents(a)
    n = a.ring.nvars
    supports = [frozenset(i for i, e in enumerate(exp) if e) for exp in lts]
    best = 0
    for mask in range(1 << n):
        s = {i for i in range(n) if mask >> i & 1}
        if len(s) <= best:
            continue
        if all(not sup <= s for sup in supports):
            best = len(s)
    return best


def independent_sets(a: Ideal, size: int) -> list[tuple[int, ...]]:
    """Variable index tuples of the given size independent modulo the
    leading terms, in lexicographic order."""
    from itertools import combinations

    lts = leading_term_exponents(a)
    supports = [frozenset(i for i, e in enumerate(exp) if e) for exp in lts]
    out = []
    for combo in combinations(range(a.ring.nvars), size):
        s = set(combo)
        if all(not sup <= s for sup in supports):
            out.append(combo)
    return out


def staircase_count(lt_exps: list[tuple], nvars: int) -> int:
    """Number of monomials under the staircase of the given leading terms;
    raises when the count is infinite."""
    for axis in range(nvars):
        if not any(all(e == 0 for i, e in enumerate(exp) if i != axis) and exp[axis] > 0
                   for exp in lt_exps):
            if not any(all(e == 0 for e in exp) for exp in lt_exps):
                raise DomainError("not zero-dimensional")
    seen = set()
    stack = [(0,) * nvars]
    count = 0
    while stack:
        mono = stack.pop()
        if mono in seen:
            continue
        seen.add(mono)
        if any(_divides(exp, mono) for exp in lt_exps):
            continue
        count += 1
        for i in range(nvars):
            child = list(mono)
            child[i] += 1
            stack.append(tuple(child))
    return count


def vector_space_dim(a: Ideal) -> int:
    """k-dimension of the quotient ring, finite only in dimension <= 0."""
    if a.is_unit():
        return 0
    dim = krull_dimension(a)
    if dim is not None and dim > 0:
        raise DomainError("not zero-dimensional")
    return staircase_count(leading_term_exponents(a), a.ring.nvars)


def radical_member(f: Poly, a: Ideal) -> bool:
    """f in the radical of a, by the unit-ideal test on a + (1 - z*f)."""
    if f.ring != a.ring:
        raise IncompatibleRingsError("incompatible rings")
    if f.is_zero():
        return True
    ring = a.ring
    z = fresh_var_name(ring, "_z")
    work = PolyRing((z,) + ring.vars, ring.field, ("block", 1))
    fwd = {i: i + 1 for i in range(ring.nvars)}
    gens = [transport(g, work, fwd) for g in a.gens]
    gens.append(work.one() - work.var(z) * transport(f, work, fwd))
    gb = buchberger(gens, work)
    return len(gb) == 1 and gb[0].is_constant()
