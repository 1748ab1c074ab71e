"""Flat maps: construction guards, pullbacks, and the commutation checks.

All schemes share one ambient ring, so a morphism is a substitution
dictionary; variables without an image are sent to zero.
"""

import pytest

from cycalc import (Cycle, DomainError, FieldSpec, FlatMap, Flatness, Ideal,
                    IncompatibleRingsError, MeroFn, PolyRing, SchemeDesc,
                    check_pullback_commutes, check_thm6, compose_maps,
                    identity_map, parse_poly, pullback_cycle, pullback_mero,
                    rat_generator, render_cycle, to_affine_line, weil_divisor)

RING = PolyRing(("t", "x", "z"), FieldSpec.rationals())


def mk(*texts):
    return Ideal(RING, [parse_poly(RING, t) for t in texts])


def pp(text):
    return parse_poly(RING, text)


TLINE = SchemeDesc(RING, mk("x", "z"))
XLINE = SchemeDesc(RING, mk("t", "z"))
PLANE = SchemeDesc(RING, mk("z"))
CHART = SchemeDesc(RING, mk("t", "x*z - 1"))
POINT = SchemeDesc(RING, mk("t", "x", "z"))


def sq_map(basis=("1", "x")):
    """x |-> x^2 viewed as a degree-two cover of the t-axis by the x-axis."""
    return FlatMap(XLINE, TLINE, {"t": pp("x^2")}, 0,
                   Flatness("FreeWithBasis", basis=tuple(pp(b) for b in basis)),
                   name="sq")


def proj_map():
    return FlatMap(PLANE, TLINE, {"t": pp("t")}, 1,
                   Flatness("AffineSpaceProjection"), name="proj")


def imm_map():
    return FlatMap(CHART, XLINE, {"x": pp("x")}, 0,
                   Flatness("OpenImmersion"), name="imm")


def tfn(num, den="1"):
    return MeroFn(TLINE, pp(num), pp(den))


class TestFlatnessTag:
    def test_unknown_kind_rejected(self):
        with pytest.raises(DomainError, match="unknown flatness tag"):
            Flatness("Smooth")

    def test_free_needs_a_basis(self):
        with pytest.raises(DomainError, match="need an explicit basis"):
            Flatness("FreeWithBasis")

    def test_line_needs_a_coordinate(self):
        with pytest.raises(DomainError, match="line coordinate"):
            Flatness("ToAffineLine")


class TestFlatMapConstruction:
    def test_apply_substitutes_images(self):
        assert sq_map().apply(pp("t^2 + t - 1")) == pp("x^4 + x^2 - 1")

    def test_unlisted_variables_go_to_zero(self):
        assert proj_map().apply(pp("t + x + z")) == pp("t")

    def test_target_ideal_must_map_into_source_ideal(self):
        with pytest.raises(DomainError, match="do not carry the target ideal"):
            FlatMap(PLANE, TLINE, {"t": pp("t"), "x": pp("x")}, 1,
                    Flatness("Declared"))

    def test_unknown_image_variable_rejected(self):
        with pytest.raises(DomainError, match="unknown variable"):
            FlatMap(XLINE, TLINE, {"w": pp("x")}, 0, Flatness("Declared"))

    def test_ring_mismatch_rejected(self):
        other = PolyRing(("t", "x", "z"), FieldSpec.prime_field(5))
        tline5 = SchemeDesc(other, Ideal(other, [parse_poly(other, "x"),
                                                 parse_poly(other, "z")]))
        with pytest.raises(IncompatibleRingsError):
            FlatMap(XLINE, tline5, {}, 0, Flatness("Declared"))

    def test_immutable(self):
        with pytest.raises(AttributeError):
            sq_map().reldim = 3

    def test_preimage_ideal(self):
        pre = sq_map().preimage_ideal(mk("t - 1", "x", "z"))
        assert pre == mk("t", "z", "x^2 - 1")


class TestIdentityAndComposition:
    def test_identity_fixes_functions_and_cycles(self):
        ident = identity_map(TLINE)
        r = tfn("t - 1", "t + 1")
        assert pullback_mero(ident, r) == r
        c = Cycle(TLINE, [(mk("t", "x", "z"), 2), (mk("t - 2", "x", "z"), -1)])
        assert pullback_cycle(ident, c) == c

    def test_composition_chains_substitutions(self):
        comp = compose_maps(sq_map(), imm_map())
        assert comp.source == CHART and comp.target == TLINE
        assert comp.apply(pp("t")) == pp("x^2")
        assert comp.reldim == 0

    def test_reldim_adds(self):
        collapse = FlatMap(TLINE, POINT, {}, 1,
                           Flatness("AffineSpaceProjection"), name="pt")
        assert compose_maps(collapse, proj_map()).reldim == 2

    def test_whitelisted_tags_survive_composition(self):
        ii = compose_maps(identity_map(TLINE), identity_map(TLINE))
        assert ii.flatness.kind == "OpenImmersion"
        collapse = FlatMap(TLINE, POINT, {}, 1,
                           Flatness("AffineSpaceProjection"))
        pp_comp = compose_maps(collapse, proj_map())
        assert pp_comp.flatness.kind == "AffineSpaceProjection"

    def test_mixed_tags_degrade_to_declared(self):
        comp = compose_maps(sq_map(), imm_map())
        assert comp.flatness.kind == "Declared"

    def test_non_matching_endpoints_rejected(self):
        with pytest.raises(DomainError, match="do not compose"):
            compose_maps(imm_map(), sq_map())


class TestPullbackMero:
    def test_substitution_into_fractions(self):
        got = pullback_mero(sq_map(), tfn("t - 1", "t + 1"))
        assert got == MeroFn(XLINE, pp("x^2 - 1"), pp("x^2 + 1"))

    def test_wrong_home_rejected(self):
        r = MeroFn(XLINE, pp("x - 1"), pp("x + 1"))
        with pytest.raises(IncompatibleRingsError):
            pullback_mero(sq_map(), r)

    def test_invertibility_is_preserved(self):
        r = MeroFn(TLINE, pp("t"), RING.one(), invertible=False)
        assert not pullback_mero(sq_map(), r).invertible

    def test_unflat_declaration_is_caught(self):
        # t |-> x sends the non-zerodivisor t to a zero-divisor on the
        # union V(x*z, t - x), unmasking the false flatness declaration.
        union = SchemeDesc(RING, mk("x*z", "t - x"))
        bad = FlatMap(union, TLINE, {"t": pp("x")}, 1, Flatness("Declared"))
        with pytest.raises(DomainError, match="declared map is not flat"):
            pullback_mero(bad, tfn("t"))


class TestPullbackCycle:
    ZT = [(("t", "x", "z"), 1), (("t - 2", "x", "z"), -1)]

    def cycle_on(self, scheme, entries):
        return Cycle(scheme, [(mk(*gens), c) for gens, c in entries])

    def test_degree_two_cover_doubles_the_origin(self):
        got = pullback_cycle(sq_map(), self.cycle_on(TLINE, self.ZT))
        assert render_cycle(got) == "2*[t, x, z] + -1*[t, x^2 - 2, z]"

    def test_projection_lifts_points_to_lines(self):
        got = pullback_cycle(proj_map(), self.cycle_on(TLINE, self.ZT))
        assert render_cycle(got) == "1*[t, z] + -1*[t - 2, z]"

    def test_points_outside_an_open_chart_vanish(self):
        origin = self.cycle_on(XLINE, [(("t", "x", "z"), 1)])
        assert pullback_cycle(imm_map(), origin).is_zero()

    def test_split_fiber(self):
        c = self.cycle_on(TLINE, [(("t - 1", "x", "z"), 1)])
        got = pullback_cycle(sq_map(), c)
        assert render_cycle(got) == "1*[t, x + 1, z] + 1*[t, x - 1, z]"

    def test_wrong_home_rejected(self):
        with pytest.raises(IncompatibleRingsError):
            pullback_cycle(sq_map(), self.cycle_on(XLINE, [(("t", "x", "z"), 1)]))

    def test_dimension_guard_fires_on_false_declaration(self):
        ring2 = PolyRing(("t", "x"), FieldSpec.rationals())
        whole = SchemeDesc(ring2, Ideal(ring2, []))
        tline2 = SchemeDesc(ring2, Ideal(ring2, [parse_poly(ring2, "x")]))
        bad = FlatMap(whole, tline2, {"t": parse_poly(ring2, "t")}, 0,
                      Flatness("Declared"))
        pt = Cycle(tline2, [(Ideal(ring2, [parse_poly(ring2, "t"),
                                           parse_poly(ring2, "x")]), 1)])
        with pytest.raises(DomainError, match="preimage dimension mismatch"):
            pullback_cycle(bad, pt)

    def test_free_rank_guard_fires_on_wrong_basis(self):
        origin = self.cycle_on(TLINE, [(("t", "x", "z"), 1)])
        with pytest.raises(DomainError, match="free basis rank check failed"):
            pullback_cycle(sq_map(basis=("1",)), origin)


class TestToAffineLine:
    RING_XYT = PolyRing(("x", "y", "t"), FieldSpec.rationals())

    def setup_method(self):
        r = self.RING_XYT
        self.two_planes = SchemeDesc(
            r, Ideal(r, [parse_poly(r, "x*y")]))
        self.b = parse_poly(r, "x + y")

    def test_shape(self):
        f = to_affine_line(self.two_planes, self.b, "t")
        assert f.target.ideal == Ideal(
            self.RING_XYT, [parse_poly(self.RING_XYT, "x"),
                            parse_poly(self.RING_XYT, "y")])
        assert f.reldim == 1
        assert f.flatness.kind == "ToAffineLine"
        assert f.apply(parse_poly(self.RING_XYT, "t")) == self.b

    def test_pullback_of_the_origin(self):
        f = to_affine_line(self.two_planes, self.b, "t")
        r = self.RING_XYT
        origin = Cycle(f.target, [(Ideal(r, [parse_poly(r, v)
                                             for v in ("x", "y", "t")]), 2)])
        assert render_cycle(pullback_cycle(f, origin)) == "4*[x, y]"

    def test_terms_off_the_certified_locus_are_rejected(self):
        f = to_affine_line(self.two_planes, self.b, "t")
        r = self.RING_XYT
        away = Cycle(f.target, [(Ideal(r, [parse_poly(r, s)
                                           for s in ("x", "y", "t - 1")]), 1)])
        with pytest.raises(DomainError, match="outside certified-flat locus"):
            pullback_cycle(f, away)

    def test_mero_pullback_has_no_locus_restriction(self):
        f = to_affine_line(self.two_planes, self.b, "t")
        r = self.RING_XYT
        line_fn = MeroFn(f.target, parse_poly(r, "t - 1"), r.one())
        assert pullback_mero(f, line_fn) == MeroFn(
            self.two_planes, parse_poly(r, "x + y - 1"), r.one())

    def test_zero_divisor_b_rejected(self):
        with pytest.raises(DomainError, match="zero-divisor"):
            to_affine_line(self.two_planes, parse_poly(self.RING_XYT, "x"), "t")

    def test_unknown_coordinate_rejected(self):
        with pytest.raises(DomainError, match="unknown variable"):
            to_affine_line(self.two_planes, self.b, "w")

    def test_zero_dimensional_source_rejected(self):
        r = self.RING_XYT
        pt = SchemeDesc(r, Ideal(r, [parse_poly(r, v)
                                     for v in ("x", "y", "t")]))
        with pytest.raises(DomainError, match="positive-dimensional"):
            to_affine_line(pt, parse_poly(r, "2"), "t")


class TestPullbackCommutes:
    CASES = [
        ("sq", ("t - 1", "t + 1")),
        ("sq", ("t", "t - 2")),
        ("proj", ("t", "t - 2")),
        ("proj", ("t^2 - 1", "1")),
        ("imm", None),
    ]

    def build(self, which):
        if which == "sq":
            return sq_map(), None
        if which == "proj":
            return proj_map(), None
        return imm_map(), MeroFn(XLINE, pp("x - 1"), pp("x + 1"))

    @pytest.mark.parametrize("which, parts", CASES)
    def test_divisor_pullback_commutes(self, which, parts):
        f, r = self.build(which)
        if r is None:
            r = tfn(*parts)
        rep = check_pullback_commutes(f, r)
        assert rep.equal
        assert rep.lhs == rep.rhs
        assert rep.factors is None

    def test_factored_form_splits_zeros_and_poles(self):
        rep = check_pullback_commutes(sq_map(), tfn("t - 1", "t + 1"),
                                      factored=True)
        assert rep.equal
        assert len(rep.factors) == 2
        for lf, rf, ok in rep.factors:
            assert ok and lf == rf

    def test_identity_case_is_trivial(self):
        rep = check_pullback_commutes(identity_map(TLINE), tfn("t", "t - 2"))
        assert rep.equal
        assert render_cycle(rep.lhs) == "1*[t, x, z] + -1*[t - 2, x, z]"


class TestRatGenerator:
    def test_whole_scheme_generator(self):
        sub = mk("x", "z")
        r = MeroFn(SchemeDesc(RING, sub.canonical_gens()), pp("t"), pp("t - 1"))
        gen = rat_generator(TLINE, sub, r)
        assert render_cycle(gen.cycle) == "1*[t, x, z] + -1*[t - 1, x, z]"
        assert gen.ambient == TLINE

    def test_proper_subvariety_generator(self):
        sub = mk("x - t", "z")
        r = MeroFn(SchemeDesc(RING, sub.canonical_gens()), pp("t"), pp("t - 1"))
        gen = rat_generator(PLANE, sub, r)
        assert render_cycle(gen.cycle) == (
            "1*[t, x, z] + -1*[t - 1, x - 1, z]")

    def test_subvariety_must_lie_on_the_scheme(self):
        sub = mk("t", "z")
        r = MeroFn(SchemeDesc(RING, sub.canonical_gens()), pp("x"), pp("x - 1"))
        with pytest.raises(DomainError, match="does not lie on the scheme"):
            rat_generator(TLINE, sub, r)

    def test_function_must_live_on_the_subvariety(self):
        on_xline = MeroFn(XLINE, pp("x"), pp("x - 1"))
        with pytest.raises(IncompatibleRingsError):
            rat_generator(TLINE, mk("x", "z"), on_xline)


class TestCheckThm6:
    def gen_t(self):
        sub = mk("x", "z")
        r = MeroFn(SchemeDesc(RING, sub.canonical_gens()), pp("t"), pp("t - 1"))
        return rat_generator(TLINE, sub, r)

    def test_degree_two_cover_flagship(self):
        rep = check_thm6(sq_map(), self.gen_t())
        assert rep.equal and rep.witness_ok
        assert render_cycle(rep.lhs) == (
            "2*[t, x, z] + -1*[t, x + 1, z] + -1*[t, x - 1, z]")
        assert rep.lhs == rep.divisor
        assert rep.preimage.ideal == mk("t", "z")
        assert rep.pulled_fn == MeroFn(XLINE, pp("x^2"), pp("x^2 - 1"))

    def test_identity_is_trivial_witness(self):
        rep = check_thm6(identity_map(TLINE), self.gen_t())
        assert rep.equal and rep.witness_ok
        assert rep.lhs == self.gen_t().cycle

    def test_projection_lifts_the_generator(self):
        rep = check_thm6(proj_map(), self.gen_t())
        assert rep.equal and rep.witness_ok
        assert render_cycle(rep.lhs) == "1*[t, z] + -1*[t - 1, z]"

    def test_witness_has_one_term_per_component(self):
        rep = check_thm6(sq_map(), self.gen_t())
        assert len(rep.witness) == 1
        prime, local_fn, mult = rep.witness[0]
        assert mult == 1
        assert prime == mk("t", "z")

    def test_wrong_target_rejected(self):
        with pytest.raises(IncompatibleRingsError):
            check_thm6(imm_map(), self.gen_t())
