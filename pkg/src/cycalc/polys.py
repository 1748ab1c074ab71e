"""Sparse multivariate polynomials over an exact field.

Terms live in a dict mapping exponent tuples to nonzero coefficients.  A
ring fixes the variable names, the coefficient field and a global monomial
order; every printed form is canonical (terms descending in the ring
order), so equal polynomials print identically byte for byte.

Monomial orders
---------------
``("grevlex",)``   graded reverse lexicographic, the default.
``("lex",)``       lexicographic in declared variable order.
``("block", k)``   the first k variables dominate; grevlex inside each
                   block.  Used for elimination.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable

from .errors import DomainError, EnvelopeError, IncompatibleRingsError
from .fields import FieldSpec

Exponent = tuple  # tuple[int, ...]

FACTOR_DEGREE_BOUND = 12
_FP_TRIAL_BUDGET = 30000


def _grevlex_key(exp: Exponent):
    # larger key = larger monomial: graded, then the reversed-negated tail
    return (sum(exp), tuple(-e for e in reversed(exp)))


def monomial_key(order) -> Callable[[Exponent], tuple]:
    """Sort key realizing a monomial order; bigger key means bigger monomial."""
    name = order[0]
    if name == "grevlex":
        return _grevlex_key
    if name == "lex":
        return lambda exp: tuple(exp)
    if name == "block":
        k = order[1]
        return lambda exp: (_grevlex_key(exp[:k]), _grevlex_key(exp[k:]))
    raise DomainError(f"unknown monomial order {order!r}")


class PolyRing:
    """A polynomial ring with named variables, an exact field and an order."""

    __slots__ = ("vars", "field", "order", "_key", "_var_index", "_hash")

    def __init__(self, vars: Iterable[str], field: FieldSpec, order=("grevlex",)):
        vs = tuple(vars)
        if len(set(vs)) != len(vs):
            raise DomainError("duplicate variable names")
        for v in vs:
            if not v or not v.replace("_", "a").isidentifier():
                raise DomainError(f"bad variable name {v!r}")
        if order[0] == "block" and not (0 <= order[1] <= len(vs)):
            raise DomainError("block split point out of range")
        object.__setattr__(self, "vars", vs)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "order", tuple(order))
        object.__setattr__(self, "_key", monomial_key(order))
        object.__setattr__(self, "_var_index", {v: i for i, v in enumerate(vs)})
        object.__setattr__(self, "_hash", hash((vs, field, tuple(order))))

    def __setattr__(self, *a):  # rings are immutable
        raise AttributeError("PolyRing is immutable")

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.vars == other.vars
                and self.field == other.field and self.order == other.order)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"PolyRing({','.join(self.vars)}; {self.field}; {self.order[0]})"

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def key(self, exp: Exponent):
        return self._key(exp)

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(self.field.one)

    def const(self, c) -> "Poly":
        c = self.field.normalize(c)
        if self.field.is_zero(c):
            return Poly(self, {})
        return Poly(self, {(0,) * self.nvars: c})

    def var(self, name: str) -> "Poly":
        i = self._var_index.get(name)
        if i is None:
            raise DomainError(f"unknown variable {name!r}")
        exp = [0] * self.nvars
        exp[i] = 1
        return Poly(self, {tuple(exp): self.field.one})

    def gens(self) -> list["Poly"]:
        return [self.var(v) for v in self.vars]

    def with_order(self, order) -> "PolyRing":
        return PolyRing(self.vars, self.field, order)

    def parse(self, text: str) -> "Poly":
        return parse_poly(self, text)


class Poly:
    """An immutable sparse polynomial attached to a ring."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        clean = {}
        fz = ring.field.is_zero
        for exp, c in terms.items():
            if not fz(c):
                clean[exp] = c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    # -- structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exp) for exp in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise DomainError("polynomial is not constant")
        if self.is_zero():
            return self.ring.field.zero
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        if self.is_zero():
            return -1
        return max(sum(exp) for exp in self.terms)

    def degree_in(self, var_index: int) -> int:
        if self.is_zero():
            return -1
        return max(exp[var_index] for exp in self.terms)

    def variables_used(self) -> tuple[int, ...]:
        used = set()
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    used.add(i)
        return tuple(sorted(used))

    def leading(self, key=None):
        """(exponent, coefficient) of the leading term under the ring order
        or an explicit key."""
        if self.is_zero():
            raise DomainError("zero polynomial has no leading term")
        key = key or self.ring.key
        exp = max(self.terms, key=key)
        return exp, self.terms[exp]

    def coefficient_of(self, exp: Exponent):
        return self.terms.get(tuple(exp), self.ring.field.zero)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.ring != other.ring:
            raise IncompatibleRingsError("incompatible rings")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        f = self.ring.field
        out = dict(self.terms)
        for exp, c in other.terms.items():
            out[exp] = f.add(out.get(exp, f.zero), c)
        return Poly(self.ring, out)

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        f = self.ring.field
        out = dict(self.terms)
        for exp, c in other.terms.items():
            out[exp] = f.sub(out.get(exp, f.zero), c)
        return Poly(self.ring, out)

    def __neg__(self) -> "Poly":
        f = self.ring.field
        return Poly(self.ring, {e: f.neg(c) for e, c in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        f = self.ring.field
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                prod = f.mul(c1, c2)
                if exp in out:
                    out[exp] = f.add(out[exp], prod)
                else:
                    out[exp] = prod
        return Poly(self.ring, out)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise DomainError("negative polynomial power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Poly":
        f = self.ring.field
        c = f.normalize(c)
        if f.is_zero(c):
            return self.ring.zero()
        return Poly(self.ring, {e: f.mul(v, c) for e, v in self.terms.items()})

    def monic(self, key=None) -> "Poly":
        if self.is_zero():
            return self
        _, lc = self.leading(key)
        return self.scale(self.ring.field.inv(lc))

    def mul_term(self, exp: Exponent, coeff) -> "Poly":
        f = self.ring.field
        return Poly(self.ring, {
            tuple(a + b for a, b in zip(e, exp)): f.mul(c, coeff)
            for e, c in self.terms.items()})

    def derivative(self, var_index: int) -> "Poly":
        f = self.ring.field
        out: dict = {}
        for exp, c in self.terms.items():
            e = exp[var_index]
            if e == 0:
                continue
            nexp = list(exp)
            nexp[var_index] = e - 1
            nc = f.mul(c, f.normalize(e))
            if not f.is_zero(nc):
                out[tuple(nexp)] = f.add(out.get(tuple(nexp), f.zero), nc)
        return Poly(self.ring, out)

    def evaluate(self, point) -> object:
        """Evaluate at a tuple of field elements, one per variable."""
        f = self.ring.field
        acc = f.zero
        for exp, c in self.terms.items():
            v = c
            for i, e in enumerate(exp):
                for _ in range(e):
                    v = f.mul(v, point[i])
            acc = f.add(acc, v)
        return acc

    def substitute(self, images: dict, target: PolyRing) -> "Poly":
        """Map through var -> Poly images into a target ring over the same
        field.  Variables missing from ``images`` go to zero."""
        self.ring.field.check_same(target.field)
        f = target.field
        cache: dict[tuple[int, int], Poly] = {}

        def var_power(i: int, e: int) -> Poly:
            got = cache.get((i, e))
            if got is None:
                base = images.get(self.ring.vars[i])
                if base is None:
                    got = target.zero() if e else target.one()
                else:
                    got = base ** e
                cache[(i, e)] = got
            return got

        acc = target.zero()
        for exp, c in self.terms.items():
            part = target.const(c)
            for i, e in enumerate(exp):
                if e and not part.is_zero():
                    part = part * var_power(i, e)
            acc = acc + part
        return acc

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.ring == other.ring
                and self.terms == other.terms)

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.ring, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def sorted_terms(self, key=None) -> list:
        key = key or self.ring.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def __str__(self) -> str:
        return render_poly(self)

    def __repr__(self) -> str:
        return f"<{render_poly(self)}>"


def monomial_cmp(ring: PolyRing, a: Exponent, b: Exponent) -> int:
    """Three-way comparison of two exponent tuples in the ring's order."""
    if len(a) != ring.nvars or len(b) != ring.nvars:
        raise DomainError("exponent arity mismatch")
    ka, kb = ring.key(tuple(a)), ring.key(tuple(b))
    if ka < kb:
        return -1
    if ka > kb:
        return 1
    return 0


def poly_arith(op: str, a: Poly, b: Poly | None = None) -> Poly:
    """Name-dispatched arithmetic, mirror of the operator methods."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise DomainError(f"unknown poly op {op!r}")


# -- printing ---------------------------------------------------------------


def _monomial_str(ring: PolyRing, exp: Exponent) -> str:
    parts = []
    for v, e in zip(ring.vars, exp):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def render_poly(p: Poly, key=None) -> str:
    """Canonical text: terms descending in the ring order (or under the
    given monomial key).  Over F_p all coefficients print as
    representatives 0..p-1; over Q signs join terms."""
    if p.is_zero():
        return "0"
    ring = p.ring
    field = ring.field
    chunks: list[str] = []
    rational = field.kind == "Q"
    for i, (exp, c) in enumerate(p.sorted_terms(key)):
        mono = _monomial_str(ring, exp)
        if rational:
            neg = c < 0
            mag = -c if neg else c
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            if i == 0:
                chunks.append(("-" if neg else "") + body)
            else:
                chunks.append(("- " if neg else "+ ") + body)
        else:
            if mono and c == 1:
                body = mono
            elif mono:
                body = f"{field.coeff_str(c)}*{mono}"
            else:
                body = field.coeff_str(c)
            chunks.append(body if i == 0 else "+ " + body)
    return " ".join(chunks)


# -- parsing ----------------------------------------------------------------


def _tokenize(text: str) -> list[tuple[str, object]]:
    toks: list[tuple[str, object]] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("num", int(text[i:j])))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("name", text[i:j]))
            i = j
            continue
        if ch in "+-*/^()":
            toks.append((ch, ch))
            i += 1
            continue
        raise DomainError(f"unexpected character {ch!r} in polynomial")
    return toks


class _PolyParser:
    """Recursive descent over +, -, *, /, ^ and parentheses.  Division is
    only by nonzero constants, enough for coefficients like 1/2."""

    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos][0] if self.pos < len(self.toks) else None

    def take(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> Poly:
        p = self.expr()
        if self.pos != len(self.toks):
            raise DomainError("trailing input in polynomial")
        return p

    def expr(self) -> Poly:
        if self.peek() == "-":
            self.take()
            acc = -self.term()
        else:
            acc = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> Poly:
        acc = self.power()
        while self.peek() in ("*", "/"):
            op = self.take()[0]
            rhs = self.power()
            if op == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise DomainError("division only by nonzero constants")
                acc = acc.scale(self.ring.field.inv(rhs.constant_value()))
        return acc

    def power(self) -> Poly:
        base = self.atom()
        while self.peek() == "^":
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise DomainError("exponent must be an integer literal")
            base = base ** val
        return base

    def atom(self) -> Poly:
        kind, val = self.take() if self.pos < len(self.toks) else (None, None)
        if kind == "num":
            return self.ring.const(val)
        if kind == "name":
            return self.ring.var(val)
        if kind == "(":
            inner = self.expr()
            if self.peek() != ")":
                raise DomainError("unbalanced parenthesis in polynomial")
            self.take()
            return inner
        if kind == "-":
            return -self.atom()
        raise DomainError("malformed polynomial expression")


def parse_poly(ring: PolyRing, text: str) -> Poly:
    text = text.strip()
    if not text:
        raise DomainError("empty polynomial text")
    return _PolyParser(ring, text).parse()


# -- division ----------------------------------------------------------------


def divmod_single(f: Poly, g: Poly, key=None):
    """Division with remainder by one divisor under the (or a given) order."""
    if g.is_zero():
        raise DomainError("division by the zero polynomial")
    ring = f.ring
    key = key or ring.key
    field = ring.field
    gexp, gc = g.leading(key)
    q = ring.zero()
    r = ring.zero()
    work = f
    while not work.is_zero():
        wexp, wc = work.leading(key)
        if all(we >= ge for we, ge in zip(wexp, gexp)):
            shift = tuple(we - ge for we, ge in zip(wexp, gexp))
            coeff = field.div(wc, gc)
            qt = Poly(ring, {shift: coeff})
            q = q + qt
            work = work - g.mul_term(shift, coeff)
        else:
            lead = Poly(ring, {wexp: wc})
            r = r + lead
            work = work - lead
    return q, r


def exact_div(f: Poly, g: Poly) -> Poly:
    """Quotient f/g when g divides f exactly; raises otherwise."""
    q, r = divmod_single(f, g)
    if not r.is_zero():
        raise DomainError("inexact polynomial division")
    return q


def poly_sqrt(f: Poly) -> Poly | None:
    """An exact square root of f, or None if f is not a square.

    Newton-style completion from the leading term; in characteristic 2
    squaring is the Frobenius so the root is read off termwise.
    """
    if f.is_zero():
        return f.ring.zero()
    ring, field = f.ring, f.ring.field
    if field.characteristic == 2:
        out = {}
        for exp, c in f.terms.items():
            if any(e % 2 for e in exp):
                return None
            out[tuple(e // 2 for e in exp)] = c  # c^2 == c over F_2
        cand = Poly(ring, out)
        return cand if cand * cand == f else None
    lexp, lc = f.leading()
    if any(e % 2 for e in lexp):
        return None
    rc = field.sqrt(lc)
    if rc is None:
        return None
    s = Poly(ring, {tuple(e // 2 for e in lexp): rc})
    s_lead_exp, s_lead_c = s.leading()
    two_lc = field.mul(field.normalize(2), s_lead_c)
    prev_key = None
    while True:
        r = f - s * s
        if r.is_zero():
            return s
        rexp, rcoef = r.leading()
        rkey = ring.key(rexp)
        if prev_key is not None and rkey >= prev_key:
            return None  # no progress, cannot be a square
        prev_key = rkey
        if not all(re >= se for re, se in zip(rexp, s_lead_exp)):
            return None
        shift = tuple(re - se for re, se in zip(rexp, s_lead_exp))
        s = s + Poly(ring, {shift: field.div(rcoef, two_lc)})


# -- univariate helpers -------------------------------------------------------


def univariate_variable(f: Poly) -> int | None:
    """Index of the single variable f uses, None for constants; raises if
    more than one variable appears."""
    used = f.variables_used()
    if len(used) == 0:
        return None
    if len(used) == 1:
        return used[0]
    raise DomainError("not univariate")


def to_coeff_list(f: Poly, var_index: int) -> list:
    field = f.ring.field
    deg = f.degree_in(var_index)
    out = [field.zero] * (deg + 1)
    for exp, c in f.terms.items():
        out[exp[var_index]] = c
    return out


def from_coeff_list(ring: PolyRing, var_index: int, coeffs: list) -> Poly:
    field = ring.field
    terms = {}
    for e, c in enumerate(coeffs):
        if not field.is_zero(c):
            exp = [0] * ring.nvars
            exp[var_index] = e
            terms[tuple(exp)] = c
    return Poly(ring, terms)


def _clist_degree(c: list, field) -> int:
    d = len(c) - 1
    while d >= 0 and field.is_zero(c[d]):
        d -= 1
    return d


def _clist_trim(c: list, field) -> list:
    return c[: _clist_degree(c, field) + 1]


def _clist_monic(c: list, field) -> list:
    lc = c[-1]
    if lc == field.one:
        return list(c)
    inv = field.inv(lc)
    return [field.mul(x, inv) for x in c]


def _clist_divmod(a: list, b: list, field):
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    q = [field.zero] * max(len(a) - db, 0)
    while _clist_degree(a, field) >= db:
        da = _clist_degree(a, field)
        coeff = field.div(a[da], lb)
        q[da - db] = coeff
        for i, bc in enumerate(b):
            a[da - db + i] = field.sub(a[da - db + i], field.mul(coeff, bc))
    return _clist_trim(q, field) or [field.zero], _clist_trim(a, field) or [field.zero]


def _clist_gcd(a: list, b: list, field) -> list:
    a = _clist_trim(a, field) or [field.zero]
    b = _clist_trim(b, field) or [field.zero]
    while _clist_degree(b, field) >= 0:
        _, r = _clist_divmod(a, b, field)
        a, b = b, r
    if _clist_degree(a, field) < 0:
        return [field.one]
    return _clist_monic(a, field)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def _horner(c: list, x, field):
    val = field.zero
    for cc in reversed(c):
        val = field.add(field.mul(val, x), cc)
    return val


def _rational_root_candidates(c: list) -> list[Fraction]:
    """Candidate roots p/q of a Fraction coefficient list, c[0] != 0."""
    from math import gcd, lcm

    den = lcm(*[x.denominator for x in c])
    ints = [int(x * den) for x in c]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    ints = [v // g for v in ints]
    if abs(ints[0]) > 10**9 or abs(ints[-1]) > 10**9:
        raise EnvelopeError("factorization budget exceeded")
    cands = set()
    for num in _divisors(ints[0]):
        for den_ in _divisors(ints[-1]):
            cands.add(Fraction(num, den_))
            cands.add(Fraction(-num, den_))
    return sorted(cands)


def _factor_clist_q(coeffs: list, field, bound: int) -> dict:
    """Monic irreducible factors with multiplicity over Q, keyed by coeff
    tuple.  Rational roots, gcd-squarefree splitting, discriminants."""
    out: dict[tuple, int] = {}

    def add(fac: list, mult: int):
        key = tuple(_clist_monic(fac, field))
        out[key] = out.get(key, 0) + mult

    def run(c: list, mult: int):
        c = _clist_trim(c, field)
        if _clist_degree(c, field) <= 0:
            return
        k = 0
        while field.is_zero(c[0]) and _clist_degree(c, field) >= 1:
            c = c[1:]
            k += 1
        if k:
            add([field.zero, field.one], k * mult)
        if _clist_degree(c, field) <= 0:
            return
        c = _clist_monic(c, field)
        # roots of any quotient still divide the original coefficients
        for root in _rational_root_candidates(c):
            while _clist_degree(c, field) >= 1 and field.is_zero(_horner(c, root, field)):
                add([-root, field.one], mult)
                c, _ = _clist_divmod(c, [-root, field.one], field)
        deg = _clist_degree(c, field)
        if deg <= 0:
            return
        if deg == 1:
            add(c, mult)
            return
        # repeated factors split off via gcd with the derivative
        deriv = [field.mul(c[i], field.normalize(i)) for i in range(1, len(c))]
        g = _clist_gcd(c, deriv, field)
        if _clist_degree(g, field) >= 1:
            co, _ = _clist_divmod(c, g, field)
            run(g, mult)
            run(co, mult)
            return
        if deg > bound:
            raise EnvelopeError("factorization budget exceeded")
        if deg == 2:
            cc, b, a = c[0], c[1], c[2]
            disc = field.sub(field.mul(b, b),
                             field.mul(field.normalize(4), field.mul(a, cc)))
            root = field.sqrt(disc)
            if root is None:
                add(c, mult)
                return
            two_a = field.mul(field.normalize(2), a)
            r1 = field.div(field.add(field.neg(b), root), two_a)
            r2 = field.div(field.sub(field.neg(b), root), two_a)
            add([field.neg(r1), field.one], mult)
            add([field.neg(r2), field.one], mult)
            return
        if deg == 3:
            add(c, mult)  # a cubic with no rational root is irreducible
            return
        raise EnvelopeError("factorization budget exceeded")

    run(coeffs, 1)
    return out


def _factor_clist_fp(coeffs: list, field, bound: int) -> dict:
    """Monic irreducible factors over F_p by root scan then trial division
    in ascending degree, which certifies irreducibility at desk scale."""
    p = field.characteristic
    if p > 101:
        raise EnvelopeError("factorization budget exceeded")
    out: dict[tuple, int] = {}

    def add(fac: list, mult: int):
        key = tuple(fac)
        out[key] = out.get(key, 0) + mult

    c = _clist_monic(_clist_trim(coeffs, field), field)
    k = 0
    while field.is_zero(c[0]) and _clist_degree(c, field) >= 1:
        c = c[1:]
        k += 1
    if k:
        add([0, 1], k)
    # linear factors by scanning the field
    for r in range(p):
        while _clist_degree(c, field) >= 1:
            val = 0
            for cc in reversed(c):
                val = (val * r + cc) % p
            if val:
                break
            add([(-r) % p, 1], 1)
            c, _ = _clist_divmod(c, [(-r) % p, 1], field)
    deg = _clist_degree(c, field)
    if deg > bound:
        raise EnvelopeError("factorization budget exceeded")
    d = 2
    while _clist_degree(c, field) >= 2 * d:
        if p ** d > _FP_TRIAL_BUDGET:
            raise EnvelopeError("factorization budget exceeded")
        for tail in range(p ** d):
            cand = []
            t = tail
            for _ in range(d):
                cand.append(t % p)
                t //= p
            cand.append(1)
            if field.is_zero(cand[0]) and d > 1:
                continue  # divisible by x, already stripped
            while True:
                q, r = _clist_divmod(c, cand, field)
                if _clist_degree(r, field) >= 0:
                    break
                add(cand, 1)
                c = q
            if _clist_degree(c, field) < 2 * d:
                break
        d += 1
    if _clist_degree(c, field) >= 1:
        add(c, 1)  # no factor of degree <= deg/2 survives: irreducible
    return out


def factor_univariate(f: Poly, degree_bound: int = FACTOR_DEGREE_BOUND):
    """Factor a univariate polynomial into monic irreducibles.

    Returns a list of (factor, multiplicity) pairs, canonically ordered by
    (degree, text).  The envelope is deliberate: rational roots, gcd-based
    squarefree splitting and quadratic discriminants over Q; root scan plus
    trial division over F_p (p <= 101).  Anything it cannot certify raises
    "factorization budget exceeded" instead of guessing.
    """
    if f.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    vi = univariate_variable(f)
    if vi is None:
        return []
    field = f.ring.field
    coeffs = to_coeff_list(f, vi)
    if field.kind == "Q":
        raw = _factor_clist_q(coeffs, field, degree_bound)
    else:
        raw = _factor_clist_fp(coeffs, field, degree_bound)
    pairs = [(from_coeff_list(f.ring, vi, list(key)), m) for key, m in raw.items()]
    pairs.sort(key=lambda pm: (pm[0].total_degree(), render_poly(pm[0])))
    return pairs
