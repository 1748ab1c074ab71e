"""Exact computation with algebraic cycles on affine schemes: canonical
Groebner bases, primary decomposition into certified components, local
lengths, divisors of invertible fractions, distinguished-cover gluing and
flat pullback, over the rationals and prime fields.
"""

from .errors import (CycalcError, DomainError, EnvelopeError, FixtureError,
                     IncompatibleRingsError, InternalInvariantError)
from .fields import FieldSpec
from .polys import Poly, PolyRing, monomial_key, parse_poly, render_poly
from .ideals import (Ideal, buchberger, ideal_eliminate, ideal_intersect,
                     ideal_product, ideal_quotient, ideal_saturate,
                     ideal_sum, krull_dimension, radical_member)
from .decompose import (ComponentSet, SchemeDesc, certified_components,
                        is_pure_dimensional, minimal_primes, rational_points)
from .cycles import (Cycle, DistinguishedCover, LocalCycleDatum, cycle_arith,
                     glue_cycles, render_cycle, restrict_cycle,
                     separatedness_holds)
from .lengths import (LocalLength, check_length_additivity, fundamental_cycle,
                      length_at_prime, multiplicity, ord_at)
from .mero import (MeroFn, check_prop32, find_nzd_in_ideal, is_nonzerodivisor,
                   kx_sheaf_check, mero_arith, restrict_mero, weil_divisor)
from .maps import (FlatMap, Flatness, check_pullback_commutes, check_thm6,
                   compose_maps, identity_map, pullback_cycle, pullback_mero,
                   rat_generator, to_affine_line)
from .fixtures import Fixture, load_fixture, parse_fixture
from .checks import CheckRecord, VerifyReport, eval_command, run_checks

__version__ = "0.1.0"

__all__ = [
    "CycalcError", "DomainError", "EnvelopeError", "FixtureError",
    "IncompatibleRingsError", "InternalInvariantError",
    "FieldSpec", "Poly", "PolyRing", "monomial_key", "parse_poly", "render_poly",
    "Ideal", "buchberger", "ideal_eliminate", "ideal_intersect",
    "ideal_product", "ideal_quotient", "ideal_saturate", "ideal_sum",
    "krull_dimension", "radical_member",
    "ComponentSet", "SchemeDesc", "certified_components",
    "is_pure_dimensional", "minimal_primes", "rational_points",
    "Cycle", "DistinguishedCover", "LocalCycleDatum", "cycle_arith",
    "glue_cycles", "render_cycle", "restrict_cycle", "separatedness_holds",
    "LocalLength", "check_length_additivity", "fundamental_cycle",
    "length_at_prime", "multiplicity", "ord_at",
    "MeroFn", "check_prop32", "find_nzd_in_ideal", "is_nonzerodivisor",
    "kx_sheaf_check", "mero_arith", "restrict_mero", "weil_divisor",
    "FlatMap", "Flatness", "check_pullback_commutes", "check_thm6",
    "compose_maps", "identity_map", "pullback_cycle", "pullback_mero",
    "rat_generator", "to_affine_line",
    "Fixture", "load_fixture", "parse_fixture",
    "CheckRecord", "VerifyReport", "eval_command", "run_checks",
    "__version__",
]
