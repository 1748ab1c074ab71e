"""Line-oriented fixture files: fields, rings, ideals, schemes, functions,
maps, cycles, covers and expectations, one declaration per line.

Every referenced invariant is checked while parsing: non-zerodivisor
certificates for declared fractions, unit-ideal certificates for covers,
component certifications, map/ideal compatibility.  Errors carry the
1-based line number.

A fixture whose first directive is ``expectfail parse = <text>`` declares
that the rest of the file must fail to parse with a matching message;
such files (and any file containing ``expectfail`` lines) are negative
fixtures, and verification runs only their directives.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

from .errors import CycalcError, FixtureError
from .fields import FieldSpec
from .polys import Poly, PolyRing, parse_poly
from .ideals import Ideal
from .decompose import SchemeDesc, certified_components
from .cycles import Cycle, DistinguishedCover, LocalCycleDatum
from .mero import MeroFn
from .maps import FlatMap, Flatness, RatGenerator, rat_generator, to_affine_line


@dataclass(frozen=True)
class Expectation:
    kind: str       # "expect" | "expectfail"
    command: tuple[str, ...]
    value: str
    line: int


@dataclass(frozen=True)
class KxLocals:
    """Chart fractions for one (function, cover) sheaf check."""

    mero: str
    cover: str
    charts: tuple[tuple[Poly, Poly], ...]


@dataclass
class Fixture:
    name: str
    field: FieldSpec | None = None
    ring: PolyRing | None = None
    ideals: dict = dfield(default_factory=dict)
    schemes: dict = dfield(default_factory=dict)
    meros: dict = dfield(default_factory=dict)
    maps: dict = dfield(default_factory=dict)
    cycles: dict = dfield(default_factory=dict)
    covers: dict = dfield(default_factory=dict)
    datums: dict = dfield(default_factory=dict)
    kxlocals: dict = dfield(default_factory=dict)
    ratgens: dict = dfield(default_factory=dict)
    expects: list = dfield(default_factory=list)
    parse_expect: tuple[str, str | None, bool] | None = None
    # (expected substring, actual message or None, matched)

    def is_negative(self) -> bool:
        return (self.parse_expect is not None
                or any(e.kind == "expectfail" for e in self.expects))

    def scheme_of(self, name: str) -> SchemeDesc:
        got = self.schemes.get(name)
        if got is None:
            raise FixtureError(f"unknown scheme {name!r}")
        return got


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def _split_top(text: str, sep: str) -> list[str]:
    """Split on a single-character separator outside brackets/parens."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
            if depth < 0:
                raise FixtureError("unbalanced brackets")
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth:
        raise FixtureError("unbalanced brackets")
    parts.append(text[start:])
    return parts


def _bracket_list(text: str) -> list[str]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise FixtureError("expected a [ ... ] list")
    inner = text[1:-1].strip()
    if not inner:
        return []
    return [p.strip() for p in _split_top(inner, ",")]


def _fraction_parts(text: str) -> tuple[str, str]:
    """Split '(num)/(den)' into the two poly texts."""
    parts = _split_top(text.strip(), "/")
    if len(parts) != 2:
        raise FixtureError("expected a fraction (num)/(den)")
    out = []
    for p in parts:
        p = p.strip()
        if not (p.startswith("(") and p.endswith(")")):
            raise FixtureError("fraction parts must be parenthesized")
        out.append(p[1:-1].strip())
    return out[0], out[1]


class _Parser:
    def __init__(self, name: str):
        self.fx = Fixture(name)
        self.names: set[str] = set()
        self.lineno = 0

    def fail(self, msg: str):
        raise FixtureError(f"line {self.lineno}: {msg}")

    def need_ring(self) -> PolyRing:
        if self.fx.ring is None:
            self.fail("ring must be declared first")
        return self.fx.ring

    def poly(self, text: str) -> Poly:
        try:
            return parse_poly(self.need_ring(), text)
        except CycalcError as exc:
            self.fail(str(exc))

    def fresh_name(self, name: str) -> str:
        name = name.strip()
        if not name or not name.replace("_", "").isalnum():
            self.fail(f"bad entity name {name!r}")
        if name in self.names:
            self.fail(f"duplicate name {name!r}")
        self.names.add(name)
        return name

    def ideal_from_list(self, text: str) -> Ideal:
        gens = [self.poly(p) for p in _bracket_list(text)]
        gens = [g for g in gens if not g.is_zero()]
        return Ideal(self.need_ring(), gens)

    def lookup(self, table: dict, name: str, kind: str):
        got = table.get(name.strip())
        if got is None:
            self.fail(f"unknown {kind} {name.strip()!r}")
        return got

    # -- one handler per keyword ------------------------------------------

    def do_field(self, rest: str):
        if self.fx.field is not None:
            self.fail("field already declared")
        words = rest.split()
        if words == ["Q"]:
            self.fx.field = FieldSpec.rationals()
        elif len(words) == 2 and words[0] == "Fp":
            try:
                self.fx.field = FieldSpec.prime_field(int(words[1]))
            except (ValueError, CycalcError) as exc:
                self.fail(f"bad prime field: {exc}")
        else:
            self.fail("field must be 'Q' or 'Fp <p>'")

    def do_ring(self, rest: str):
        if self.fx.field is None:
            self.fail("field must be declared before the ring")
        if self.fx.ring is not None:
            self.fail("ring already declared")
        names = [v.strip() for v in rest.split(",")]
        try:
            self.fx.ring = PolyRing(names, self.fx.field)
        except CycalcError as exc:
            self.fail(str(exc))

    def do_ideal(self, name: str, rest: str):
        self.fx.ideals[self.fresh_name(name)] = self.ideal_from_list(rest)

    def do_scheme(self, name: str, rest: str):
        name = self.fresh_name(name)
        ideal = self.lookup(self.fx.ideals, rest, "ideal")
        self.fx.schemes[name] = SchemeDesc(self.need_ring(), ideal, name=name)

    def do_components(self, name: str, rest: str):
        scheme = self.lookup(self.fx.schemes, name, "scheme")
        primes = [self.ideal_from_list(part)
                  for part in _bracket_list(rest)]
        try:
            comps = certified_components(scheme.ideal, primes)
        except CycalcError as exc:
            self.fail(str(exc))
        self.fx.schemes[name.strip()] = SchemeDesc(
            self.need_ring(), scheme.ideal, name=name.strip(), components=comps)

    def do_mero(self, head: str, rest: str):
        name, scheme_name = self._name_on(head, "on")
        scheme = self.lookup(self.fx.schemes, scheme_name, "scheme")
        num_text, den_text = _fraction_parts(rest)
        try:
            fn = MeroFn(scheme, self.poly(num_text), self.poly(den_text), True)
        except CycalcError as exc:
            self.fail(str(exc))
        self.fx.meros[self.fresh_name(name)] = fn

    def do_cycle(self, head: str, rest: str):
        name, scheme_name = self._name_on(head, "on")
        scheme = self.lookup(self.fx.schemes, scheme_name, "scheme")
        try:
            cyc = self.parse_cycle_body(scheme, rest)
        except CycalcError as exc:
            self.fail(str(exc))
        self.fx.cycles[self.fresh_name(name)] = cyc

    def do_cover(self, head: str, rest: str):
        name, scheme_name = self._name_on(head, "of")
        scheme = self.lookup(self.fx.schemes, scheme_name, "scheme")
        elems = tuple(self.poly(p) for p in _bracket_list(rest))
        try:
            cov = DistinguishedCover(scheme, elems)
        except CycalcError as exc:
            self.fail(str(exc))
        self.fx.covers[self.fresh_name(name)] = cov

    def do_datum(self, head: str, rest: str):
        name, cover_name = self._name_on(head, "over")
        cover = self.lookup(self.fx.covers, cover_name, "cover")
        if not (rest.strip().startswith("[") and rest.strip().endswith("]")):
            self.fail("expected a [ body ; body ; ... ] chart list")
        bodies = _split_top(rest.strip()[1:-1], ";")
        charts = []
        for body in bodies:
            cyc = self.parse_cycle_body(cover.scheme, body.strip())
            charts.append(tuple(cyc.terms.values()))
        try:
            datum = LocalCycleDatum(cover, tuple(charts))
        except CycalcError as exc:
            self.fail(str(exc))
        self.fx.datums[self.fresh_name(name)] = datum

    def do_locals(self, head: str, rest: str):
        words = head.split()
        if len(words) != 5 or words[1] != "for" or words[3] != "over":
            self.fail("expected 'locals N for <mero> over <cover> = [...]'")
        name, mero_name, cover_name = words[0], words[2], words[4]
        mero = self.lookup(self.fx.meros, mero_name, "mero")
        cover = self.lookup(self.fx.covers, cover_name, "cover")
        if mero.scheme != cover.scheme:
            self.fail("function and cover live on different schemes")
        if not (rest.strip().startswith("[") and rest.strip().endswith("]")):
            self.fail("expected a [ (p)/(p) ; ... ] chart list")
        charts = []
        for part in _split_top(rest.strip()[1:-1], ";"):
            n, d = _fraction_parts(part.strip())
            charts.append((self.poly(n), self.poly(d)))
        if len(charts) != len(cover.elements):
            self.fail("chart count does not match the cover")
        self.fx.kxlocals[self.fresh_name(name)] = KxLocals(
            mero_name, cover_name, tuple(charts))

    def do_ratgen(self, head: str, rest: str):
        name, scheme_name = self._name_on(head, "on")
        scheme = self.lookup(self.fx.schemes, scheme_name, "scheme")
        body = rest.strip()
        if not (body.startswith("(") and body.endswith(")")):
            self.fail("expected 'ratgen N on S = ( [gens], (p)/(p) )'")
        parts = _split_top(body[1:-1], ",")
        if len(parts) != 2:
            self.fail("expected a subvariety list and a fraction")
        sub = self.ideal_from_list(parts[0])
        num_text, den_text = _fraction_parts(parts[1].strip())
        try:
            sub_scheme = SchemeDesc(self.need_ring(), sub.canonical_gens())
            fn = MeroFn(sub_scheme, self.poly(num_text), self.poly(den_text), True)
            gen = rat_generator(scheme, sub, fn)
        except CycalcError as exc:
            self.fail(str(exc))
        self.fx.ratgens[self.fresh_name(name)] = gen

    def do_map(self, rest: str):
        segments = [s.strip() for s in rest.split(";")]
        if len(segments) != 4:
            self.fail("expected 'map N : S -> T ; images ; reldim d ; flat = tag'")
        head, image_seg, reldim_seg, flat_seg = segments
        if ":" not in head:
            self.fail("expected 'map N : S -> T'")
        name, arrow = (p.strip() for p in head.split(":", 1))
        if "->" not in arrow:
            self.fail("expected 'S -> T'")
        src_name, dst_name = (p.strip() for p in arrow.split("->", 1))
        source = self.lookup(self.fx.schemes, src_name, "scheme")
        target = self.lookup(self.fx.schemes, dst_name, "scheme")
        images = {}
        for item in _split_top(image_seg, ","):
            if "|->" not in item:
                self.fail("expected 'v |-> p' image entries")
            v, p = (s.strip() for s in item.split("|->", 1))
            if v in images:
                self.fail(f"duplicate image for {v!r}")
            images[v] = self.poly(p)
        words = reldim_seg.split()
        if len(words) != 2 or words[0] != "reldim":
            self.fail("expected 'reldim d'")
        try:
            reldim = int(words[1])
        except ValueError:
            self.fail("relative dimension must be an integer")
        if not flat_seg.startswith("flat"):
            self.fail("expected 'flat = <tag>'")
        tag_text = flat_seg.split("=", 1)[1].strip() if "=" in flat_seg else ""
        try:
            fmap = self._build_map(name, source, target, images, reldim, tag_text)
        except CycalcError as exc:
            self.fail(str(exc))
        self.fx.maps[self.fresh_name(name)] = fmap

    def _build_map(self, name, source, target, images, reldim, tag_text):
        if tag_text == "immersion":
            tag = Flatness("OpenImmersion")
        elif tag_text == "projection":
            tag = Flatness("AffineSpaceProjection")
        elif tag_text == "declared":
            tag = Flatness("Declared")
        elif tag_text.startswith("free basis"):
            basis = tuple(self.poly(p)
                          for p in _bracket_list(tag_text[len("free basis"):]))
            tag = Flatness("FreeWithBasis", basis=basis)
        elif tag_text.startswith("toline"):
            coord = tag_text[len("toline"):].strip()
            if list(images) != [coord]:
                raise FixtureError(
                    "a toline map takes exactly one image, for the line coordinate")
            built = to_affine_line(source, images[coord], coord)
            if built.target.ideal != target.ideal:
                raise FixtureError("declared target is not the affine line")
            if built.reldim != reldim:
                raise FixtureError(
                    f"toline relative dimension must be {built.reldim}")
            return FlatMap(source, target, images, reldim,
                           built.flatness, name=name)
        else:
            raise FixtureError(f"unknown flatness tag {tag_text!r}")
        return FlatMap(source, target, images, reldim, tag, name=name)

    def do_expect(self, kind: str, rest: str):
        if "=" not in rest:
            self.fail("expected '<command> = <text>'")
        cmd_text, value = rest.split("=", 1)
        command = tuple(cmd_text.split())
        if not command:
            self.fail("empty expectation command")
        self.fx.expects.append(
            Expectation(kind, command, value.strip(), self.lineno))

    # -- shared fragments --------------------------------------------------

    def _name_on(self, head: str, keyword: str) -> tuple[str, str]:
        words = head.split()
        if len(words) != 3 or words[1] != keyword:
            self.fail(f"expected 'N {keyword} <name>'")
        return words[0], words[2]

    def parse_cycle_body(self, scheme: SchemeDesc, body: str) -> Cycle:
        body = body.strip()
        if body == "0":
            return Cycle(scheme, [])
        entries = []
        for term in _split_top(body, "+"):
            term = term.strip()
            if "*" not in term:
                self.fail("cycle terms look like c*[g, ...]")
            coeff_text, bracket = term.split("*", 1)
            try:
                coeff = int(coeff_text.strip())
            except ValueError:
                self.fail(f"bad cycle coefficient {coeff_text.strip()!r}")
            prime = self.ideal_from_list(bracket.strip())
            for g in scheme.ideal.gens:
                if not prime.contains(g):
                    self.fail("cycle component does not lie on the scheme")
            entries.append((prime, coeff))
        return Cycle(scheme, entries)

    # -- the line loop ------------------------------------------------------

    def feed(self, line: str):
        text = _strip_comment(line).strip()
        if not text:
            return
        if "=" in text and text.split("=", 1)[0].strip() in ("field", "ring"):
            keyword, rest = (p.strip() for p in text.split("=", 1))
            getattr(self, f"do_{keyword}")(rest)
            return
        words = text.split(None, 1)
        keyword = words[0]
        rest = words[1] if len(words) > 1 else ""
        if keyword == "map":
            self.do_map(rest)
            return
        if keyword in ("expect", "expectfail"):
            self.do_expect(keyword, rest)
            return
        if keyword in ("ideal", "scheme", "components", "mero", "cycle",
                       "cover", "datum", "locals", "ratgen"):
            if "=" not in rest:
                self.fail(f"expected '{keyword} ... = ...'")
            head, body = (p.strip() for p in rest.split("=", 1))
            if keyword == "ideal":
                self.do_ideal(head, body)
            elif keyword == "scheme":
                self.do_scheme(head, body)
            elif keyword == "components":
                self.do_components(head, body)
            elif keyword == "mero":
                self.do_mero(head, body)
            elif keyword == "cycle":
                self.do_cycle(head, body)
            elif keyword == "cover":
                self.do_cover(head, body)
            elif keyword == "datum":
                self.do_datum(head, body)
            elif keyword == "locals":
                self.do_locals(head, body)
            elif keyword == "ratgen":
                self.do_ratgen(head, body)
            return
        self.fail(f"unknown declaration {keyword!r}")


def parse_fixture(text: str, name: str = "fixture") -> Fixture:
    """Parse a fixture file; all declared invariants are verified."""
    lines = text.splitlines()
    expect_parse = None
    body_start = 0
    for i, raw in enumerate(lines):
        stripped = _strip_comment(raw).strip()
        if not stripped:
            continue
        if stripped.startswith("expectfail parse"):
            if "=" not in stripped:
                raise FixtureError(f"line {i + 1}: expected 'expectfail parse = <text>'")
            expect_parse = stripped.split("=", 1)[1].strip()
            body_start = i + 1
        break
    if expect_parse is not None:
        stub = Fixture(name)
        try:
            _parse_lines(lines, name, start=body_start)
        except FixtureError as exc:
            matched = expect_parse in str(exc)
            stub.parse_expect = (expect_parse, str(exc), matched)
            return stub
        stub.parse_expect = (expect_parse, None, False)
        return stub
    return _parse_lines(lines, name)


def _parse_lines(lines: list[str], name: str, start: int = 0) -> Fixture:
    parser = _Parser(name)
    for i in range(start, len(lines)):
        parser.lineno = i + 1
        try:
            parser.feed(lines[i])
        except FixtureError:
            raise
        except CycalcError as exc:
            raise FixtureError(f"line {i + 1}: {exc}") from exc
    if parser.fx.ring is None and (parser.fx.ideals or parser.fx.schemes):
        raise FixtureError("fixture declares entities without a ring")
    return parser.fx


def load_fixture(path) -> Fixture:
    import os

    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_fixture(text, name=os.path.splitext(os.path.basename(path))[0])
