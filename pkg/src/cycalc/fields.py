"""Exact coefficient fields: the rationals and prime fields F_p.

Field elements are plain Python values, ``fractions.Fraction`` over Q and
``int`` in ``0..p-1`` over F_p; a :class:`FieldSpec` carries the arithmetic.
No floats appear anywhere, every operation is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import DomainError, IncompatibleRingsError

MAX_CHARACTERISTIC = 2**31


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """An exact coefficient field, either Q or F_p for a prime p < 2^31."""

    kind: str  # "Q" or "Fp"
    characteristic: int  # 0 for Q, p for F_p

    @staticmethod
    def rationals() -> "FieldSpec":
        return FieldSpec("Q", 0)

    @staticmethod
    def prime_field(p: int) -> "FieldSpec":
        if p >= MAX_CHARACTERISTIC:
            raise DomainError(f"characteristic {p} too large (must be < 2^31)")
        if not _is_prime(p):
            raise DomainError(f"characteristic {p} is not prime")
        return FieldSpec("Fp", p)

    # -- element construction ------------------------------------------

    def normalize(self, value):
        """Coerce an int or Fraction into canonical element form."""
        if self.kind == "Q":
            if isinstance(value, Fraction):
                return value
            if isinstance(value, int):
                return Fraction(value)
            raise DomainError(f"cannot coerce {value!r} into Q")
        if isinstance(value, Fraction):
            if value.denominator == 1:
                return value.numerator % self.characteristic
            return self.div(value.numerator % self.characteristic,
                            value.denominator % self.characteristic)
        if isinstance(value, int):
            return value % self.characteristic
        raise DomainError(f"cannot coerce {value!r} into F_{self.characteristic}")

    @property
    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    # -- arithmetic ----------------------------------------------------

    def add(self, a, b):
        if self.kind == "Q":
            return a + b
        return (a + b) % self.characteristic

    def sub(self, a, b):
        if self.kind == "Q":
            return a - b
        return (a - b) % self.characteristic

    def mul(self, a, b):
        if self.kind == "Q":
            return a * b
        return (a * b) % self.characteristic

    def neg(self, a):
        if self.kind == "Q":
            return -a
        return (-a) % self.characteristic

    def inv(self, a):
        if self.is_zero(a):
            raise DomainError("division by zero in coefficient field")
        if self.kind == "Q":
            return 1 / a
        return pow(a, -1, self.characteristic)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == 0

    def sqrt(self, a):
        """Square root if one exists, else None.  Used by irreducibility
        certificates only, so F_p falls back to a scan for small p."""
        if self.kind == "Q":
            if a < 0:
                return None
            n, d = a.numerator, a.denominator
            rn, rd = isqrt(n), isqrt(d)
            if rn * rn == n and rd * rd == d:
                return Fraction(rn, rd)
            return None
        p = self.characteristic
        a %= p
        if a == 0:
            return 0
        if p > 10**6:
            return None  # outside the certification envelope
        if p % 4 == 3:
            r = pow(a, (p + 1) // 4, p)
            return r if (r * r) % p == a else None
        for r in range(p):
            if (r * r) % p == a:
                return r
        return None

    def check_same(self, other: "FieldSpec") -> None:
        if self != other:
            raise IncompatibleRingsError("incompatible coefficient fields")

    # -- printing ------------------------------------------------------

    def coeff_str(self, a) -> str:
        """Canonical text for a coefficient (F_p uses representatives 0..p-1)."""
        if self.kind == "Q":
            return str(a)
        return str(a % self.characteristic)

    def __str__(self) -> str:
        return "Q" if self.kind == "Q" else f"F{self.characteristic}"
