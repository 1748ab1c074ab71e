"""The verification harness: run every applicable identity check over the
entity combinations a fixture declares, plus the fixture's own expect
lines, and collect a canonically ordered report.

Check failures are verdicts, never exceptions; domain refusals inside a
check become failing records.  Budget and internal-invariant errors still
propagate, since they signal an input outside the supported envelope or a
bug rather than a falsified identity.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass

from .errors import CycalcError, DomainError, EnvelopeError, FixtureError
from .polys import Poly, monomial_key, render_poly
from .ideals import Ideal, buchberger, ideal_sum
from .decompose import minimal_primes
from .cycles import (Cycle, LocalCycleDatum, glue_cycles, render_cycle,
                     restrict_cycle, separatedness_holds)
from .lengths import (check_length_additivity, fundamental_cycle,
                      fundamental_cycle_of, length_at_prime, ord_at)
from .mero import check_prop32, kx_sheaf_check, weil_divisor
from .maps import (check_pullback_commutes, check_thm6, compose_maps,
                   identity_map, pullback_cycle, pullback_mero)
from .fixtures import Fixture

CHECK_IDS = ("prop31", "eq4", "prop32", "eq5", "eq7", "glue", "separated",
             "kx", "thm6", "functoriality")
DEFAULT_SWEEPS = 20


@dataclass
class CheckRecord:
    check: str
    inputs: str
    lhs: str
    rhs: str
    verdict: bool
    ms: float


@dataclass
class VerifyReport:
    fixture: str
    records: list

    def counts(self) -> tuple[int, int]:
        passed = sum(1 for r in self.records if r.verdict)
        return passed, len(self.records) - passed

    def all_pass(self) -> bool:
        return all(r.verdict for r in self.records)

    def render_text(self, stable: bool = False) -> str:
        lines = [f"fixture: {self.fixture}"]
        for r in self.records:
            mark = "pass" if r.verdict else "FAIL"
            line = f"[{mark}] {r.check} {r.inputs} | lhs={r.lhs} | rhs={r.rhs}"
            if not stable:
                line += f" ({r.ms:.1f} ms)"
            lines.append(line)
        passed, failed = self.counts()
        lines.append(f"summary: {len(self.records)} checks, "
                     f"{passed} pass, {failed} fail")
        return "\n".join(lines) + "\n"

    def to_json_dict(self, stable: bool = False) -> dict:
        checks = []
        for r in self.records:
            item = {"check": r.check, "inputs": r.inputs, "lhs": r.lhs,
                    "rhs": r.rhs, "verdict": "pass" if r.verdict else "fail"}
            if not stable:
                item["ms"] = round(r.ms, 3)
            checks.append(item)
        passed, failed = self.counts()
        return {"fixture": self.fixture, "checks": checks,
                "summary": {"total": len(self.records),
                            "pass": passed, "fail": failed}}

    def render_json(self, stable: bool = False) -> str:
        return json.dumps(self.to_json_dict(stable), indent=2,
                          sort_keys=True) + "\n"


def _ptext(p: Ideal) -> str:
    return "[" + ", ".join(p.canonical_key()) + "]"


def parse_order(text: str):
    if text == "grevlex":
        return ("grevlex",)
    if text == "lex":
        return ("lex",)
    if text.startswith("block:"):
        try:
            return ("block", int(text.split(":", 1)[1]))
        except ValueError:
            pass
    raise DomainError(f"unknown order {text!r}")


def eval_command(fx: Fixture, argv, order=None, trace: bool = False) -> str:
    """One fixture-level query; the same surface backs the CLI and the
    expect lines."""
    if not argv:
        raise DomainError("empty command")
    cmd, args = argv[0], list(argv[1:])

    def resolve_ideal(name: str) -> Ideal:
        if name in fx.ideals:
            return fx.ideals[name]
        if name in fx.schemes:
            return fx.schemes[name].ideal
        raise FixtureError(f"unknown ideal {name!r}")

    if cmd == "gb":
        if len(args) != 1:
            raise DomainError("usage: gb <ideal>")
        ideal = resolve_ideal(args[0])
        if order is None or tuple(order) == fx.ring.order:
            texts = list(ideal.canonical_key())
        else:
            basis = buchberger(ideal.gens, fx.ring, tuple(order))
            key = monomial_key(tuple(order))
            texts = [render_poly(g, key) for g in basis]
        return "\n".join(texts)
    if cmd == "components":
        if len(args) != 1:
            raise DomainError("usage: components <scheme>")
        comps = fx.scheme_of(args[0]).components()
        body = "[" + ", ".join(_ptext(p) for p in comps) + "]"
        return f"{body} ({comps.provenance})"
    if cmd == "fund":
        if len(args) != 1:
            raise DomainError("usage: fund <scheme>")
        return render_cycle(fundamental_cycle(fx.scheme_of(args[0])))
    if cmd == "length":
        if len(args) != 2:
            raise DomainError("usage: length <scheme> <prime-ideal>")
        scheme = fx.scheme_of(args[0])
        prime = resolve_ideal(args[1])
        got = length_at_prime(scheme.ideal, prime, scheme.components())
        return f"{got.value} ({got.method})"
    if cmd == "div":
        if len(args) != 2:
            raise DomainError("usage: div <scheme> <mero>")
        scheme = fx.scheme_of(args[0])
        fn = fx.meros.get(args[1])
        if fn is None:
            raise FixtureError(f"unknown mero {args[1]!r}")
        if fn.scheme != scheme:
            raise DomainError("function does not live on that scheme")
        div = weil_divisor(scheme, fn)
        text = render_cycle(div)
        if trace:
            parts = []
            for p, c in div.entries():
                parts.append(f"  ord {_ptext(p)} = {c}")
            text = "\n".join([text] + parts)
        return text
    if cmd == "glue":
        if len(args) != 1:
            raise DomainError("usage: glue <datum>")
        datum = fx.datums.get(args[0])
        if datum is None:
            raise FixtureError(f"unknown datum {args[0]!r}")
        return render_cycle(glue_cycles(datum))
    if cmd == "pullback":
        if len(args) != 2:
            raise DomainError("usage: pullback <map> <cycle>")
        fmap = fx.maps.get(args[0])
        if fmap is None:
            raise FixtureError(f"unknown map {args[0]!r}")
        cyc = fx.cycles.get(args[1])
        if cyc is None:
            raise FixtureError(f"unknown cycle {args[1]!r}")
        return render_cycle(pullback_cycle(fmap, cyc))
    raise DomainError(f"unknown command {cmd!r}")


class _Runner:
    def __init__(self, fx: Fixture, seed: int, sweeps: int):
        self.fx = fx
        self.seed = seed
        self.sweeps = sweeps
        self.records: list[CheckRecord] = []

    def run(self, check: str, inputs: str, thunk):
        t0 = time.perf_counter()
        try:
            lhs, rhs, ok = thunk()
        except (DomainError, EnvelopeError) as exc:
            # A check that asks for something undefined or beyond the
            # decomposition envelope fails; it must not abort the report.
            lhs, rhs, ok = f"error: {exc}", "", False
        ms = (time.perf_counter() - t0) * 1000.0
        self.records.append(CheckRecord(check, inputs, str(lhs), str(rhs), ok, ms))

    # -- per-scheme witness plumbing ---------------------------------------

    def schemes(self):
        return list(self.fx.schemes.items())

    def nzd_witnesses(self, scheme):
        out, seen = [], set()
        for fn in self.fx.meros.values():
            if fn.scheme != scheme:
                continue
            for p in (fn.num, fn.den):
                if p.is_constant():
                    continue
                text = render_poly(p)
                if text in seen:
                    continue
                seen.add(text)
                out.append(p)
        return out

    def meros_on(self, scheme):
        return [(n, fn) for n, fn in self.fx.meros.items()
                if fn.scheme == scheme]

    def cycles_on(self, scheme):
        return [(n, c) for n, c in self.fx.cycles.items()
                if c.scheme == scheme]

    # -- the identity checks -------------------------------------------------

    def check_prop31(self):
        for sname, scheme in self.schemes():
            if scheme.is_empty():
                continue
            for s in self.nzd_witnesses(scheme):
                def thunk(scheme=scheme, s=s):
                    total = ideal_sum(scheme.ideal,
                                      Ideal(scheme.ring, [s]))
                    if total.is_unit():
                        ord_sum = Cycle(scheme, [])
                    else:
                        comps = minimal_primes(total)
                        ord_sum = Cycle(scheme, [(p, ord_at(scheme, p, s))
                                                 for p in comps])
                    fund = fundamental_cycle_of(scheme, Ideal(scheme.ring, [s]))
                    return (render_cycle(ord_sum), render_cycle(fund),
                            ord_sum == fund)
                self.run("prop31", f"scheme={sname} s={render_poly(s)}", thunk)

    def check_eq4(self):
        for sname, scheme in self.schemes():
            if scheme.is_empty():
                continue
            for s in self.nzd_witnesses(scheme):
                total = ideal_sum(scheme.ideal, Ideal(scheme.ring, [s]))
                if total.is_unit():
                    continue
                for prime in minimal_primes(total):
                    def thunk(scheme=scheme, s=s, prime=prime):
                        lhs, _, rhs, ok = check_length_additivity(
                            scheme.ideal, prime, s)
                        return lhs, rhs, ok
                    self.run("eq4",
                             f"scheme={sname} prime={_ptext(prime)} "
                             f"a={render_poly(s)}", thunk)

    def check_prop32(self):
        for sname, scheme in self.schemes():
            if scheme.is_empty():
                continue
            for mname, fn in self.meros_on(scheme):
                def thunk(scheme=scheme, fn=fn):
                    rep = check_prop32(scheme, fn)
                    return (render_cycle(rep.lhs), render_cycle(rep.rhs),
                            rep.equal)
                self.run("prop32", f"scheme={sname} r={mname}", thunk)

    def check_eq5(self):
        for fname, fmap in self.fx.maps.items():
            for mname, fn in self.meros_on(fmap.target):
                def thunk(fmap=fmap, fn=fn):
                    rep = check_pullback_commutes(fmap, fn)
                    return (render_cycle(rep.lhs), render_cycle(rep.rhs),
                            rep.equal)
                self.run("eq5", f"map={fname} r={mname}", thunk)

    def check_eq7(self):
        for fname, fmap in self.fx.maps.items():
            for mname, fn in self.meros_on(fmap.target):
                def thunk(fmap=fmap, fn=fn):
                    rep = check_pullback_commutes(fmap, fn, factored=True)
                    lhs_parts, rhs_parts, ok = [], [], True
                    for label, (lf, rf, eq) in zip(("num", "den"), rep.factors):
                        lhs_parts.append(f"{label}:{render_cycle(lf)}")
                        rhs_parts.append(f"{label}:{render_cycle(rf)}")
                        ok = ok and eq
                    return " ".join(lhs_parts), " ".join(rhs_parts), ok
                self.run("eq7", f"map={fname} r={mname}", thunk)

    def check_glue(self):
        for dname, datum in self.fx.datums.items():
            def thunk(datum=datum):
                glued = glue_cycles(datum)
                return render_cycle(glued), "consistent", True
            self.run("glue", f"datum={dname}", thunk)
        for cname, cover in self.fx.covers.items():
            for yname, cyc in self.cycles_on(cover.scheme):
                def thunk(cover=cover, cyc=cyc):
                    datum = LocalCycleDatum(cover, tuple(
                        tuple(restrict_cycle(cyc, f).terms.values())
                        for f in cover.elements))
                    glued = glue_cycles(datum)
                    return (render_cycle(glued), render_cycle(cyc),
                            glued == cyc)
                self.run("glue", f"cover={cname} cycle={yname}", thunk)
            self.sweep_glue(cname, cover)

    def pool_for(self, scheme):
        pool, seen = [], set()
        for _, cyc in self.cycles_on(scheme):
            for p, _ in cyc.entries():
                if p.canonical_key() not in seen:
                    seen.add(p.canonical_key())
                    pool.append(p)
        for p in scheme.components():
            if p.canonical_key() not in seen:
                seen.add(p.canonical_key())
                pool.append(p)
        return pool

    def sweep_glue(self, cname, cover):
        pool = self.pool_for(cover.scheme)
        if not pool:
            return

        def thunk(cover=cover, pool=pool, cname=cname):
            rng = random.Random(f"{self.seed}:{self.fx.name}:{cname}")
            good = 0
            for _ in range(self.sweeps):
                cyc = Cycle(cover.scheme,
                            [(p, rng.randint(-3, 3)) for p in pool])
                datum = LocalCycleDatum(cover, tuple(
                    tuple(restrict_cycle(cyc, f).terms.values())
                    for f in cover.elements))
                if glue_cycles(datum) == cyc:
                    good += 1
            return f"{good} round trips", f"{self.sweeps} round trips", \
                good == self.sweeps
        self.run("glue", f"cover={cname} seed={self.seed} "
                         f"sweeps={self.sweeps}", thunk)

    def check_separated(self):
        for cname, cover in self.fx.covers.items():
            def zthunk(cover=cover):
                zero = Cycle(cover.scheme, [])
                ok = separatedness_holds(zero, cover)
                return "0", "0", ok
            self.run("separated", f"cover={cname} cycle=0", zthunk)
            for yname, cyc in self.cycles_on(cover.scheme):
                def thunk(cover=cover, cyc=cyc):
                    ok = separatedness_holds(cyc, cover)
                    return ("zero on all charts implies zero", "holds", ok)
                self.run("separated", f"cover={cname} cycle={yname}", thunk)

    def check_kx(self):
        for lname, loc in self.fx.kxlocals.items():
            fn = self.fx.meros[loc.mero]
            cover = self.fx.covers[loc.cover]

            def thunk(fn=fn, cover=cover, loc=loc):
                rep = kx_sheaf_check(fn.scheme, cover, fn, list(loc.charts))
                lhs = " ".join(
                    f"{m.chart}:{'ok' if m.matches else 'mismatch'}"
                    + (f"(k={m.power})" if m.power is not None else "")
                    for m in rep.charts)
                rhs = "all charts match; separated"
                return lhs, rhs, rep.passed
            self.run("kx", f"locals={lname} r={loc.mero} cover={loc.cover}",
                     thunk)

    def check_thm6(self):
        for fname, fmap in self.fx.maps.items():
            for gname, gen in self.fx.ratgens.items():
                if gen.ambient != fmap.target:
                    continue

                def thunk(fmap=fmap, gen=gen):
                    rep = check_thm6(fmap, gen)
                    rhs = (f"{render_cycle(rep.divisor)} "
                           f"(witness: {len(rep.witness)} generators)")
                    return (render_cycle(rep.lhs), rhs,
                            rep.equal and rep.witness_ok)
                self.run("thm6", f"map={fname} gen={gname}", thunk)

    def check_functoriality(self):
        for sname, scheme in self.schemes():
            cycles = self.cycles_on(scheme)
            meros = self.meros_on(scheme)
            if not cycles and not meros:
                continue

            def thunk(scheme=scheme, cycles=cycles, meros=meros):
                ident = identity_map(scheme)
                ok = True
                for _, c in cycles:
                    ok = ok and pullback_cycle(ident, c) == c
                for _, m in meros:
                    ok = ok and pullback_mero(ident, m) == m
                n = len(cycles) + len(meros)
                return f"{n} identity pullbacks", "fixed points", ok
            self.run("functoriality", f"identity on {sname}", thunk)
        for iname, inner in self.fx.maps.items():
            for oname, outer in self.fx.maps.items():
                if inner.target != outer.source:
                    continue
                cycles = self.cycles_on(outer.target)
                meros = self.meros_on(outer.target)
                if not cycles and not meros:
                    continue

                def thunk(inner=inner, outer=outer, cycles=cycles,
                          meros=meros):
                    comp = compose_maps(outer, inner)
                    ok = True
                    for _, c in cycles:
                        direct = pullback_cycle(comp, c)
                        staged = pullback_cycle(inner, pullback_cycle(outer, c))
                        ok = ok and direct == staged
                    for _, m in meros:
                        direct = pullback_mero(comp, m)
                        staged = pullback_mero(inner, pullback_mero(outer, m))
                        ok = ok and direct == staged
                    n = len(cycles) + len(meros)
                    return (f"{n} composed pullbacks", "staged pullbacks", ok)
                self.run("functoriality", f"compose {oname} after {iname}",
                         thunk)

    # -- expectations ---------------------------------------------------------

    def run_expects(self):
        for e in self.fx.expects:
            label = " ".join(e.command)
            if e.kind == "expect":
                def thunk(e=e):
                    out = eval_command(self.fx, e.command)
                    return out, e.value, out == e.value
                self.run("expect", label, thunk)
            else:
                def thunk(e=e):
                    try:
                        out = eval_command(self.fx, e.command)
                    except CycalcError as exc:
                        return str(exc), e.value, e.value in str(exc)
                    return f"succeeded: {out}", f"error containing {e.value!r}", False
                self.run("expectfail", label, thunk)


def run_checks(fx: Fixture, selector="all", seed: int = 0,
               sweeps: int = DEFAULT_SWEEPS) -> VerifyReport:
    """Execute the selected identity checks over every matching entity
    combination, then the fixture's expectations."""
    if fx.parse_expect is not None:
        expected, actual, matched = fx.parse_expect
        rec = CheckRecord(
            "expectfail", "parse",
            actual if actual is not None else "parse succeeded",
            f"error containing {expected!r}", matched, 0.0)
        return VerifyReport(fx.name, [rec])
    if selector == "all":
        wanted = set(CHECK_IDS) | {"expect"}
    else:
        wanted = set(selector)
        unknown = wanted - set(CHECK_IDS) - {"expect"}
        if unknown:
            raise DomainError(f"unknown check ids: {sorted(unknown)}")
    runner = _Runner(fx, seed, sweeps)
    if not fx.is_negative():
        if "prop31" in wanted:
            runner.check_prop31()
        if "eq4" in wanted:
            runner.check_eq4()
        if "prop32" in wanted:
            runner.check_prop32()
        if "eq5" in wanted:
            runner.check_eq5()
        if "eq7" in wanted:
            runner.check_eq7()
        if "glue" in wanted:
            runner.check_glue()
        if "separated" in wanted:
            runner.check_separated()
        if "kx" in wanted:
            runner.check_kx()
        if "thm6" in wanted:
            runner.check_thm6()
        if "functoriality" in wanted:
            runner.check_functoriality()
    if "expect" in wanted or fx.is_negative():
        runner.run_expects()
    return VerifyReport(fx.name, runner.records)
