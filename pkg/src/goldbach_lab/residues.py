"""Arithmetic over Z_m for squarefree m: units, residue-class filters, CRT
splitting, and exact triple sumsets.

Residue sets are stored as bit masks over {0, ..., m-1}, which keeps sumset
computation cheap enough for the exhaustive subset enumerations downstream
(moduli up to a few hundred; sumsets via per-element bit rotations).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional


class NotSquarefree(ValueError):
    """Raised when a modulus has a repeated prime factor."""


class FilterRequiresThree(ValueError):
    """Raised when a mod-3 class filter is requested but 3 does not divide m."""


class NotCoprimeSplit(ValueError):
    """Raised when a requested CRT split m = m1 * m2 is not a coprime split."""


class ModulusMismatch(ValueError):
    """Raised when residue sets over different moduli are combined."""


class EmptySet(ValueError):
    """Raised when an operation requires nonempty residue sets."""


class CompositeModulus(ValueError):
    """Raised when a prime modulus is required."""


@dataclass(frozen=True)
class SquarefreeModulus:
    """A squarefree modulus with its prime factorization.

    `primes` is the ascending tuple of distinct prime factors; their product
    must equal `m`.  Even m is allowed (the sieve-level primorial W is even);
    oddness is enforced by the consumers that need it.
    """

    m: int
    primes: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"modulus must be positive, got {self.m}")
        prod = 1
        for p in self.primes:
            prod *= p
        if prod != self.m:
            raise ValueError(f"prime product {prod} != modulus {self.m}")
        if len(set(self.primes)) != len(self.primes):
            raise NotSquarefree(f"repeated prime factor in {self.primes}")
        if tuple(sorted(self.primes)) != self.primes:
            raise ValueError("primes must be ascending")

    @property
    def totient(self) -> int:
        phi = 1
        for p in self.primes:
            phi *= p - 1
        return phi

    @property
    def is_odd(self) -> bool:
        return self.m % 2 == 1

    def is_unit(self, x: int) -> bool:
        return math.gcd(x % self.m, self.m) == 1


def factorize_squarefree(m: int) -> SquarefreeModulus:
    """Factor m by trial division, rejecting non-squarefree inputs.

    Raises NotSquarefree if p^2 | m for some prime p.
    """
    if m < 1:
        raise ValueError(f"modulus must be positive, got {m}")
    primes = []
    rest = m
    d = 2
    while d * d <= rest:
        if rest % d == 0:
            rest //= d
            if rest % d == 0:
                raise NotSquarefree(f"{d}^2 divides {m}")
            primes.append(d)
        d += 1 if d == 2 else 2
    if rest > 1:
        primes.append(rest)
    return SquarefreeModulus(m=m, primes=tuple(primes))


@dataclass(frozen=True)
class ResidueSet:
    """A subset of Z_m stored as a bit mask (bit x set iff x is a member)."""

    modulus: SquarefreeModulus
    mask: int

    def __post_init__(self) -> None:
        if self.mask < 0 or self.mask >> self.modulus.m:
            raise ValueError("mask has bits outside [0, m)")

    @classmethod
    def from_members(cls, modulus: SquarefreeModulus,
                     members: Iterable[int]) -> "ResidueSet":
        mask = 0
        for x in members:
            mask |= 1 << (x % modulus.m)
        return cls(modulus=modulus, mask=mask)

    def members(self) -> list[int]:
        m = self.modulus.m
        return [x for x in range(m) if (self.mask >> x) & 1]

    def __contains__(self, x: int) -> bool:
        return bool((self.mask >> (x % self.modulus.m)) & 1)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def issubset(self, other: "ResidueSet") -> bool:
        self._require_same_modulus(other)
        return self.mask & ~other.mask == 0

    def _require_same_modulus(self, other: "ResidueSet") -> None:
        if self.modulus.m != other.modulus.m:
            raise ModulusMismatch(
                f"moduli differ: {self.modulus.m} vs {other.modulus.m}")


def _rotate_mask(mask: int, shift: int, m: int, full: int) -> int:
    """Cyclic left rotation of an m-bit mask, i.e. add `shift` to every member."""
    shift %= m
    return ((mask << shift) | (mask >> (m - shift))) & full if shift else mask


def unit_class_set(mod: SquarefreeModulus,
                   class_mod3: Optional[int] = None) -> ResidueSet:
    """Units of Z_m, optionally intersected with a residue class mod 3.

    class_mod3=None returns all of Z_m^*; class_mod3 in {0, 1} intersects
    with {x : x = class_mod3 (mod 3)}.  Class filters require 3 | m.
    """
    if class_mod3 is not None:
        if class_mod3 not in (0, 1):
            raise ValueError(f"class_mod3 must be None, 0 or 1, got {class_mod3}")
        if mod.m % 3 != 0:
            raise FilterRequiresThree(f"mod-3 filter requested but 3 does not divide {mod.m}")
    members = []
    for x in range(mod.m):
        if math.gcd(x, mod.m) != 1:
            continue
        if class_mod3 is not None and x % 3 != class_mod3:
            continue
        members.append(x)
    return ResidueSet.from_members(mod, members)


def residue_class_set(mod: SquarefreeModulus, class_mod3: int) -> ResidueSet:
    """All residues of Z_m in a fixed class mod 3 (units and non-units).

    This is the target class {x : x = 0 (mod 3)} used by the local theorem;
    unit_class_set intersects with Z_m^* instead.
    """
    if mod.m % 3 != 0:
        raise FilterRequiresThree(f"3 does not divide {mod.m}")
    return ResidueSet.from_members(
        mod, (x for x in range(mod.m) if x % 3 == class_mod3))


def crt_split(mod: SquarefreeModulus, m1: int, m2: int) -> "CrtSplit":
    """Bidirectional index map Z_m <-> Z_m1 x Z_m2 for a coprime split."""
    if m1 * m2 != mod.m or math.gcd(m1, m2) != 1:
        raise NotCoprimeSplit(f"{m1} * {m2} is not a coprime split of {mod.m}")
    return CrtSplit(modulus=mod, m1=m1, m2=m2)


@dataclass(frozen=True)
class CrtSplit:
    """Ring isomorphism Z_m = Z_m1 x Z_m2 on canonical representatives."""

    modulus: SquarefreeModulus
    m1: int
    m2: int
    _e1: int = field(init=False, repr=False)
    _e2: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        # Idempotents: e1 = 1 (mod m1), 0 (mod m2) and vice versa.
        inv = pow(self.m2, -1, self.m1)
        e1 = (self.m2 * inv) % self.modulus.m
        object.__setattr__(self, "_e1", e1)
        object.__setattr__(self, "_e2", (1 - e1) % self.modulus.m)

    def split(self, x: int) -> tuple[int, int]:
        x %= self.modulus.m
        return x % self.m1, x % self.m2

    def combine(self, x1: int, x2: int) -> int:
        return (x1 * self._e1 + x2 * self._e2) % self.modulus.m


def sumset(a: ResidueSet, b: ResidueSet) -> ResidueSet:
    """Pairwise sumset {x + y mod m : x in A, y in B}."""
    a._require_same_modulus(b)
    m = a.modulus.m
    full = (1 << m) - 1
    out = 0
    mask_b = b.mask
    rest = a.mask
    while rest:
        low = rest & -rest
        shift = low.bit_length() - 1
        out |= _rotate_mask(mask_b, shift, m, full)
        rest ^= low
    return ResidueSet(modulus=a.modulus, mask=out)


def triple_sumset(a: ResidueSet, b: ResidueSet, c: ResidueSet) -> ResidueSet:
    """{x + y + z mod m : x in A, y in B, z in C} via two pairwise passes."""
    a._require_same_modulus(b)
    a._require_same_modulus(c)
    if not (a.mask and b.mask and c.mask):
        return ResidueSet(modulus=a.modulus, mask=0)
    return sumset(sumset(a, b), c)


def triple_sumset_naive(a: ResidueSet, b: ResidueSet, c: ResidueSet) -> ResidueSet:
    """Triple loop over all member combinations; oracle for triple_sumset."""
    a._require_same_modulus(b)
    a._require_same_modulus(c)
    m = a.modulus.m
    out = set()
    for x in a.members():
        for y in b.members():
            for z in c.members():
                out.add((x + y + z) % m)
    return ResidueSet.from_members(a.modulus, out)


@dataclass(frozen=True)
class CauchyDavenportRecord:
    bound: int
    actual: int
    holds: bool


def cauchy_davenport_check(a: ResidueSet, b: ResidueSet,
                           c: ResidueSet) -> CauchyDavenportRecord:
    """Check |A+B+C| >= min(p, |A|+|B|+|C|-2) over a prime modulus."""
    if len(a.modulus.primes) != 1:
        raise CompositeModulus(f"{a.modulus.m} is not prime")
    if not (a.mask and b.mask and c.mask):
        raise EmptySet("all three sets must be nonempty")
    p = a.modulus.m
    bound = min(p, len(a) + len(b) + len(c) - 2)
    actual = len(triple_sumset(a, b, c))
    return CauchyDavenportRecord(bound=bound, actual=actual, holds=actual >= bound)
