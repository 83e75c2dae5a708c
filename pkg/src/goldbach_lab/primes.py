"""Sieving, density-controlled subsets of the primes 1 mod 3, and
representation counting for triple sums.

Counting over the integers uses a zero-padded FFT convolution (no
wraparound) whose output is rounded to exact integer counts after a
measured-deviation check; the direct method recomputes counts from an
explicit pair-sum table with no transforms, serving as the independent
oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

DEFAULT_MAX_SIEVE = 200_000_000


class LimitTooLarge(ValueError):
    pass


class InvalidRule(ValueError):
    pass


class TargetOutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to `limit` with an O(1) primality lookup."""

    limit: int
    primes: np.ndarray = field(repr=False)
    is_prime: np.ndarray = field(repr=False)  # bool, indexed 0..limit

    def __len__(self) -> int:
        return int(self.primes.size)

    def residues(self, modulus: int) -> np.ndarray:
        """Per-prime residue classes mod `modulus` (the class index)."""
        return self.primes % modulus

    def primes_in_class(self, modulus: int, residue: int) -> np.ndarray:
        return self.primes[self.primes % modulus == residue]


def sieve_primes(limit: int, max_limit: int = DEFAULT_MAX_SIEVE) -> PrimeTable:
    """Sieve of Eratosthenes up to `limit` (inclusive)."""
    if limit > max_limit:
        raise LimitTooLarge(f"limit {limit} exceeds budget {max_limit}")
    n = max(limit, 1)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p::p] = False
    primes = np.flatnonzero(flags).astype(np.int64)
    return PrimeTable(limit=limit, primes=primes, is_prime=flags)


def trial_division_primes(limit: int) -> list[int]:
    """Independent oracle: primes up to limit by trial division."""
    out = []
    for n in range(2, limit + 1):
        d = 2
        is_p = True
        while d * d <= n:
            if n % d == 0:
                is_p = False
                break
            d += 1
        if is_p:
            out.append(n)
    return out


# ---------------------------------------------------------------------------
# Subset rules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AllPrimesRule:
    kind: str = "all"


@dataclass(frozen=True)
class ResiduePatternRule:
    modulus: int
    classes: tuple[int, ...]
    kind: str = "pattern"


@dataclass(frozen=True)
class BernoulliRule:
    p: float
    seed: int
    kind: str = "bernoulli"


@dataclass(frozen=True)
class ExplicitRule:
    members: tuple[int, ...]
    kind: str = "explicit"


SubsetRule = Union[AllPrimesRule, ResiduePatternRule, BernoulliRule, ExplicitRule]


class DensitySubset:
    """A subset of the primes 1 mod 3 up to the table limit, with its
    measured relative density |A| / |P_{1,3} cap [1, limit]|."""

    def __init__(self, table: PrimeTable, rule: SubsetRule,
                 members: np.ndarray):
        self.table = table
        self.rule = rule
        self.members = members
        mask = np.zeros(table.limit + 1, dtype=bool)
        mask[members] = True
        self.member_mask = mask
        self._conv3: Optional[np.ndarray] = None

    @property
    def limit(self) -> int:
        return self.table.limit

    @property
    def base_class_count(self) -> int:
        return int((self.table.primes % 3 == 1).sum())

    @property
    def measured_density(self) -> Fraction:
        return Fraction(int(self.members.size), max(self.base_class_count, 1))

    def __len__(self) -> int:
        return int(self.members.size)


def build_subset(table: PrimeTable, rule: SubsetRule) -> DensitySubset:
    """Materialize a subset of P_{1,3} according to the rule."""
    base = table.primes[table.primes % 3 == 1]
    if isinstance(rule, AllPrimesRule):
        members = base
    elif isinstance(rule, ResiduePatternRule):
        q = rule.modulus
        if q % 3 != 0:
            raise InvalidRule(f"pattern modulus {q} must be divisible by 3")
        if not rule.classes:
            raise InvalidRule("pattern needs at least one class")
        for c in rule.classes:
            if not (0 < c < q) or math.gcd(c, q) != 1 or c % 3 != 1:
                raise InvalidRule(
                    f"class {c} mod {q} is not a reduced class 1 mod 3")
        sel = np.isin(base % q, np.array(rule.classes, dtype=np.int64))
        members = base[sel]
    elif isinstance(rule, BernoulliRule):
        if not (0 < rule.p <= 1):
            raise InvalidRule(f"inclusion probability {rule.p} outside (0, 1]")
        rng = np.random.default_rng(rule.seed)
        members = base[rng.random(base.size) < rule.p]
    elif isinstance(rule, ExplicitRule):
        members = np.array(sorted(set(rule.members)), dtype=np.int64)
        if members.size:
            if members.max() > table.limit:
                raise InvalidRule("explicit member above table limit")
            base_mask = np.zeros(table.limit + 1, dtype=bool)
            base_mask[base] = True
            if not base_mask[members].all():
                raise InvalidRule("explicit members must be primes 1 mod 3")
    else:
        raise InvalidRule(f"unknown rule {rule!r}")
    return DensitySubset(table, rule, members.astype(np.int64))


# ---------------------------------------------------------------------------
# Representation counting
# ---------------------------------------------------------------------------

def _conv3_counts(subset: DensitySubset) -> np.ndarray:
    """Ordered-triple counts for all sums 0..3*limit via zero-padded FFT."""
    if subset._conv3 is not None:
        return subset._conv3
    limit = subset.limit
    out_len = 3 * limit + 1
    nfft = 1 << (out_len - 1).bit_length()
    ind = np.zeros(nfft, dtype=np.float64)
    ind[subset.members] = 1.0
    spec = np.fft.rfft(ind)
    conv = np.fft.irfft(spec * spec * spec, nfft)[:out_len]
    rounded = np.rint(conv)
    deviation = float(np.abs(conv - rounded).max())
    if deviation > 0.25:
        raise ArithmeticError(
            f"FFT convolution deviation {deviation} too large to round")
    counts = rounded.astype(np.int64)
    subset._conv3 = counts
    return counts


def _pair_table(subset: DensitySubset) -> np.ndarray:
    """Ordered pair-sum counts by explicit accumulation (no transforms)."""
    limit = subset.limit
    table = np.zeros(2 * limit + 1, dtype=np.int64)
    members = subset.members
    for p in members:
        table[p + members] += 1
    return table


def count_representations(subset: DensitySubset,
                          targets: Union[Sequence[int], np.ndarray],
                          method: str = "convolution") -> np.ndarray:
    """Counts of ordered triples (p1, p2, p3) in A^3 with p1+p2+p3 = n,
    for each requested n.

    method="convolution" uses the cached zero-padded FFT cube;
    method="direct" recounts from the explicit pair-sum table.
    """
    targets_arr = np.asarray(list(targets), dtype=np.int64)
    if targets_arr.size and (targets_arr.min() < 0
                             or targets_arr.max() > 3 * subset.limit):
        raise TargetOutOfRange(
            f"targets must lie in [0, {3 * subset.limit}]")
    if method == "convolution":
        return _conv3_counts(subset)[targets_arr]
    if method == "direct":
        pair = _pair_table(subset)
        members = subset.members
        out = np.zeros(targets_arr.size, dtype=np.int64)
        for i, t in enumerate(targets_arr):
            third = members[members <= t]
            rem = t - third
            valid = rem <= 2 * subset.limit
            out[i] = int(pair[rem[valid]].sum())
        return out
    raise ValueError(f"unknown method {method!r}")


def count_one_naive(members: Iterable[int], target: int) -> int:
    """Literal triple loop; micro-oracle for tests."""
    ms = list(members)
    return sum(1 for a in ms for b in ms for c in ms if a + b + c == target)


@dataclass
class ScanReport:
    n_lo: int
    n_hi: int
    targets_scanned: int
    exceptional: list  # targets (odd, 0 mod 3) with zero representations
    rule: SubsetRule
    limit: int


def scan_targets(subset: DensitySubset, n_lo: int, n_hi: int) -> ScanReport:
    """List the exceptional odd targets n = 0 (mod 3) in [n_lo, n_hi] with
    no representation as an ordered triple sum from the subset."""
    if n_hi > 3 * subset.limit:
        raise TargetOutOfRange(
            f"n_hi {n_hi} exceeds 3 * limit = {3 * subset.limit}")
    counts = _conv3_counts(subset)
    first = n_lo + ((3 - n_lo) % 6)  # first n >= n_lo with n = 3 (mod 6)
    targets = np.arange(first, n_hi + 1, 6, dtype=np.int64)
    sel = counts[targets] == 0
    return ScanReport(n_lo=n_lo, n_hi=n_hi, targets_scanned=int(targets.size),
                      exceptional=[int(t) for t in targets[sel]],
                      rule=subset.rule, limit=subset.limit)
