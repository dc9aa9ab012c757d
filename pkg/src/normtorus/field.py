"""Arithmetic of an imaginary quadratic field K = Q(sqrt(d))."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import gcd, isqrt

from normtorus._arith import is_prime, is_squarefree

MAX_ABS_DISC = 10**6


class Splitting(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


@dataclass(frozen=True)
class FieldContext:
    d: int
    disc: int
    h: int
    w: int

    @property
    def is_gaussian(self) -> bool:
        return self.d == -1

    @property
    def is_eisenstein(self) -> bool:
        return self.d == -3

    @property
    def abs_disc(self) -> int:
        return -self.disc

    @property
    def unit_classes(self) -> int:
        """Order of the unit group modulo {+1, -1}: 2 for Q(i), 3 for Q(zeta_3), else 1."""
        return self.w // 2

    @property
    def omega_minpoly(self) -> tuple[int, int]:
        """(t, n) with omega^2 = t*omega - n for the Z-basis (1, omega) of the integers."""
        if self.d % 4 == 1:
            return 1, (1 - self.d) // 4
        return 0, -self.d


def new_field(d: int) -> FieldContext:
    """Build the context for Q(sqrt(d)), d < 0 squarefree.

    The class number comes from reduced-form enumeration, never a table.
    """
    if d >= 0:
        raise ValueError(f"d must be negative, got {d}")
    if not is_squarefree(d):
        raise ValueError(f"d must be squarefree, got {d}")
    disc = d if d % 4 == 1 else 4 * d
    if -disc > MAX_ABS_DISC:
        raise ValueError(f"|disc| = {-disc} exceeds {MAX_ABS_DISC}")
    w = {-1: 4, -3: 6}.get(d, 2)
    return FieldContext(d=d, disc=disc, h=count_reduced_forms(disc), w=w)


def is_fundamental_discriminant(disc: int) -> bool:
    if disc in (0, 1):
        return False
    if disc % 4 == 1:
        return is_squarefree(disc)
    if disc % 4 == 0:
        m = disc // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a / n) for n >= 1."""
    if n < 1:
        raise ValueError("n must be positive")
    result = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a / n) for odd n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def splitting_type(fc: FieldContext, p: int) -> Splitting:
    if fc.disc % p == 0:
        return Splitting.RAMIFIED
    return Splitting.SPLIT if kronecker(fc.disc, p) == 1 else Splitting.INERT


def count_reduced_forms(disc: int) -> int:
    """Number of reduced primitive forms (a, b, c) with b^2 - 4ac = disc < 0."""
    if disc >= 0 or not is_fundamental_discriminant(disc):
        raise ValueError(f"{disc} is not a negative fundamental discriminant")
    count = 0
    for a in range(1, isqrt(-disc // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b - disc) % 2:
                continue
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, abs(b)), c) == 1:
                count += 1
    return count


def field_from_label(x: int) -> FieldContext:
    """Field from a squarefree d or a fundamental discriminant.

    The two readings never disagree: a squarefree x that is also a
    fundamental discriminant has x = 1 mod 4 and names the same field.
    """
    if x < 0 and is_squarefree(x):
        return new_field(x)
    if x < 0 and is_fundamental_discriminant(x):
        return new_field(x // 4)
    raise ValueError(f"{x} is neither a negative squarefree integer nor a negative fundamental discriminant")


__all__ = [
    "FieldContext",
    "Splitting",
    "new_field",
    "field_from_label",
    "kronecker",
    "splitting_type",
    "count_reduced_forms",
    "is_fundamental_discriminant",
    "is_prime",
]
