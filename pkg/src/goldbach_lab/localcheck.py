"""Verification of the local triple-sum theorem over Z_m.

The local statement: for odd squarefree m with 3 | m and f: Z_m^* -> [0,1]
supported on units congruent to 1 mod 3 with sum(f) > phi(m)/4, every target
x = 0 (mod 3) admits units a1, a2, a3 with x = a1+a2+a3, f(a_i) > 0 and
f(a1)+f(a2)+f(a3) > 3/2.  This module checks the indicator form exhaustively,
random weighted instances, the mod-15 three-function variant, and the
sharpness example A = {1,7} in Z_15 (which misses the class 12).

Weights are exact rationals so the strict hypotheses are decided exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import comb
import random
from typing import Optional

from .residues import (
    SquarefreeModulus,
    ResidueSet,
    factorize_squarefree,
    residue_class_set,
    triple_sumset,
    unit_class_set,
)

THREE_HALVES = Fraction(3, 2)


class ModulusNotDivisibleBy3(ValueError):
    pass


class EvenModulus(ValueError):
    pass


class BudgetExceeded(ValueError):
    pass


class WrongModulus(ValueError):
    pass


class SupportViolation(ValueError):
    pass


class NoWitness(Exception):
    """No unit triple with positive weights sums to the target with weight
    sum above 3/2.  Under the theorem's hypothesis this never happens."""


@dataclass(frozen=True)
class UnitWeight:
    """A weight f: Z_m^* -> [0,1] with exact rational values.

    `values` maps units to Fractions; units not listed carry weight 0.
    With support_filter set, positive weight is only allowed on units
    congruent to 1 mod 3.
    """

    modulus: SquarefreeModulus
    values: dict[int, Fraction]
    support_filter: bool = False

    def __post_init__(self) -> None:
        m = self.modulus.m
        for a, v in self.values.items():
            if not (0 <= a < m) or not self.modulus.is_unit(a):
                raise ValueError(f"{a} is not a unit of Z_{m}")
            if not isinstance(v, Fraction):
                raise TypeError(f"weight at {a} must be a Fraction, got {type(v)}")
            if not (0 <= v <= 1):
                raise ValueError(f"weight {v} at {a} outside [0,1]")
            if self.support_filter and v > 0 and a % 3 != 1:
                raise SupportViolation(f"positive weight at {a} = {a % 3} (mod 3)")

    @classmethod
    def indicator(cls, modulus: SquarefreeModulus, support,
                  support_filter: bool = False) -> "UnitWeight":
        return cls(modulus, {a: Fraction(1) for a in support}, support_filter)

    def value(self, a: int) -> Fraction:
        return self.values.get(a % self.modulus.m, Fraction(0))

    def total(self) -> Fraction:
        return sum(self.values.values(), Fraction(0))

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(a for a, v in self.values.items() if v > 0))


@dataclass(frozen=True)
class LocalWitness:
    """Units a1, a2, a3 with a1+a2+a3 = target (mod m) and positive weights."""

    a1: int
    a2: int
    a3: int
    weight_sum: Fraction

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.a1, self.a2, self.a3)

    def check(self, f: UnitWeight, target: int,
              f2: Optional[UnitWeight] = None,
              f3: Optional[UnitWeight] = None) -> bool:
        """Re-verify the witness against the weight(s) it came from."""
        g2 = f2 if f2 is not None else f
        g3 = f3 if f3 is not None else f
        m = f.modulus.m
        if (self.a1 + self.a2 + self.a3) % m != target % m:
            return False
        w1, w2, w3 = f.value(self.a1), g2.value(self.a2), g3.value(self.a3)
        if not (w1 > 0 and w2 > 0 and w3 > 0):
            return False
        return w1 + w2 + w3 == self.weight_sum and self.weight_sum > THREE_HALVES


def _require_local_modulus(mod: SquarefreeModulus) -> None:
    if mod.m % 2 == 0:
        raise EvenModulus(f"m = {mod.m} is even")
    if mod.m % 3 != 0:
        raise ModulusNotDivisibleBy3(f"3 does not divide m = {mod.m}")


def min_support_size(mod: SquarefreeModulus) -> int:
    """Smallest integer strictly above phi(m)/4."""
    return mod.totient // 4 + 1


# ---------------------------------------------------------------------------
# Sharpness example
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SharpnessReport:
    holds: bool
    missing_class: int
    sumset: tuple[int, ...]
    indicator_sum: Fraction
    quarter_phi: Fraction


def verify_sharpness() -> SharpnessReport:
    """A = {1,7} in Z_15: sum(f) = phi(15)/4 exactly, yet 12 is not in A+A+A."""
    mod = factorize_squarefree(15)
    a = ResidueSet.from_members(mod, {1, 7})
    s = triple_sumset(a, a, a)
    f = UnitWeight.indicator(mod, (1, 7), support_filter=True)
    quarter = Fraction(mod.totient, 4)
    holds = (tuple(s.members()) == (0, 3, 6, 9)
             and 12 not in s
             and f.total() == quarter)
    return SharpnessReport(holds=holds, missing_class=12,
                           sumset=tuple(s.members()),
                           indicator_sum=f.total(), quarter_phi=quarter)


# ---------------------------------------------------------------------------
# Exhaustive indicator verification
# ---------------------------------------------------------------------------

@dataclass
class IndicatorReport:
    m: int
    min_size: int
    checked_subsets: int
    failure_count: int
    failures: list  # (subset tuple, first missing target); truncated at 100


def verify_local_indicator(mod: SquarefreeModulus,
                           min_size: Optional[int] = None,
                           budget: int = 10**7) -> IndicatorReport:
    """Check every A within the units 1 mod 3 with |A| >= min_size:
    A+A+A must cover {x in Z_m : x = 0 (mod 3)}.

    min_size defaults to the theorem threshold floor(phi(m)/4) + 1; lowering
    it below the threshold is how the sharpness counterexamples are surfaced.
    """
    _require_local_modulus(mod)
    units1 = unit_class_set(mod, class_mod3=1).members()
    u = len(units1)
    if min_size is None:
        min_size = min_support_size(mod)
    min_size = max(min_size, 1)
    total = sum(comb(u, k) for k in range(min_size, u + 1))
    if total > budget:
        raise BudgetExceeded(f"{total} subsets exceeds budget {budget}")

    m = mod.m
    full = (1 << m) - 1
    targets = residue_class_set(mod, 0).mask
    checked = 0
    failure_count = 0
    failures: list = []

    # DFS over subsets in lexicographic member order.  Each node extends the
    # current subset by one unit and updates the pairwise sumset mask s2
    # incrementally (new pairs = old members + a, plus the doubled element),
    # so the O(|A|) sumset rebuild is paid once per node, not per leaf.
    members: list[int] = []

    def rot(mask: int, a: int) -> int:
        return ((mask << a) | (mask >> (m - a))) & full

    def dfs(start: int, amask: int, s2: int) -> None:
        nonlocal checked, failure_count
        if len(members) >= min_size:
            checked += 1
            s3 = 0
            covered = False
            for a in members:
                s3 |= rot(s2, a)
                if targets & ~s3 == 0:
                    covered = True
                    break
            if not covered:
                failure_count += 1
                missing = targets & ~s3
                x = (missing & -missing).bit_length() - 1
                if len(failures) < 100:
                    failures.append((tuple(members), x))
        for i in range(start, u):
            if len(members) + (u - i) < min_size:
                break
            a = units1[i]
            s2_new = s2 | rot(amask, a) | (1 << ((2 * a) % m))
            members.append(a)
            dfs(i + 1, amask | (1 << a), s2_new)
            members.pop()

    dfs(0, 0, 0)
    assert checked == total
    return IndicatorReport(m=m, min_size=min_size, checked_subsets=checked,
                           failure_count=failure_count, failures=failures)


# ---------------------------------------------------------------------------
# Witness search
# ---------------------------------------------------------------------------

def best_witness(f: UnitWeight, target: int) -> Optional[LocalWitness]:
    """Maximum-weight unit triple summing to target with all weights positive.

    Ties are broken to the lexicographically smallest ordered triple, which
    for a single weight function is the sorted one; returns None when no
    triple of support elements sums to the target.

    Enumerates sorted pairs (b1 <= b2) and completes each with the unique
    b3 = target - b1 - b2, so the scan is quadratic in the support size;
    the b3 >= b2 filter keeps exactly the sorted triples, in lex order.
    """
    m = f.modulus.m
    support = f.support()
    in_support = set(support)
    best: Optional[LocalWitness] = None
    for b1, b2 in combinations_with_replacement(support, 2):
        b3 = (target - b1 - b2) % m
        if b3 < b2 or b3 not in in_support:
            continue
        w = f.values[b1] + f.values[b2] + f.values[b3]
        if best is None or w > best.weight_sum:
            best = LocalWitness(b1, b2, b3, w)
    return best


def best_witness_triple(f1: UnitWeight, f2: UnitWeight, f3: UnitWeight,
                        target: int) -> Optional[LocalWitness]:
    """Ordered-role variant of best_witness for three distinct weights."""
    m = f1.modulus.m
    support3 = set(f3.support())
    best: Optional[LocalWitness] = None
    for b1, b2 in product(f1.support(), f2.support()):
        b3 = (target - b1 - b2) % m
        if b3 not in support3:
            continue
        w = f1.values[b1] + f2.values[b2] + f3.values[b3]
        if best is None or w > best.weight_sum:
            best = LocalWitness(b1, b2, b3, w)
    return best


def local_class_selection(f: UnitWeight, target: int) -> LocalWitness:
    """Select the maximum-weight class triple representing the target.

    Raises NoWitness when no positive-weight triple reaches weight sum 3/2;
    under the local theorem's hypothesis that signals a verification failure
    (or, for adversarial weights below the hypothesis, an expected miss).
    """
    _require_local_modulus(f.modulus)
    if target % 3 != 0:
        raise ValueError(f"target {target} is not divisible by 3")
    w = best_witness(f, target)
    if w is None:
        raise NoWitness(f"no support triple sums to {target} (mod {f.modulus.m})")
    if not w.weight_sum > THREE_HALVES:
        raise NoWitness(
            f"best triple {w.triple} has weight {w.weight_sum} <= 3/2")
    return w


# ---------------------------------------------------------------------------
# Randomized weighted verification
# ---------------------------------------------------------------------------

@dataclass
class WeightedReport:
    m: int
    trials: int
    seed: int
    failures: list  # (trial, target, support, values)
    denominator_bound: int


def _sample_weight(mod: SquarefreeModulus, units1: list[int],
                   rng: random.Random, denominator_bound: int) -> UnitWeight:
    """Sample a rational weight satisfying sum(f) > phi(m)/4.

    Support is drawn uniformly among subsets of size above the threshold
    (sizes weighted by binomial counts), values are uniform rationals with
    the given denominator, then doubled-and-clipped until the mean
    hypothesis holds; clipping keeps denominators bounded and support fixed.
    """
    u = len(units1)
    lo = min_support_size(mod)
    sizes = list(range(lo, u + 1))
    k = rng.choices(sizes, weights=[comb(u, n) for n in sizes])[0]
    support = sorted(rng.sample(units1, k))
    d = denominator_bound
    values = {a: Fraction(rng.randint(1, d), d) for a in support}
    quarter = Fraction(mod.totient, 4)
    while sum(values.values()) <= quarter:
        values = {a: min(2 * v, Fraction(1)) for a, v in values.items()}
    return UnitWeight(mod, values, support_filter=True)


def random_weighted_check(mod: SquarefreeModulus, trials: int, seed: int = 0,
                          denominator_bound: int = 64) -> WeightedReport:
    """Sample weights above the mean hypothesis and exhaustively search unit
    triples for each target class 0 mod 3; failures are theorem violations
    and are expected to be empty."""
    _require_local_modulus(mod)
    units1 = unit_class_set(mod, class_mod3=1).members()
    targets = residue_class_set(mod, 0).members()
    rng = random.Random(seed)
    failures = []
    for t in range(trials):
        f = _sample_weight(mod, units1, rng, denominator_bound)
        for x in targets:
            w = best_witness(f, x)
            if w is None or not w.weight_sum > THREE_HALVES:
                failures.append((t, x, f.support(),
                                 {a: f.values[a] for a in f.support()}))
    return WeightedReport(m=mod.m, trials=trials, seed=seed,
                          failures=failures,
                          denominator_bound=denominator_bound)


# ---------------------------------------------------------------------------
# Mod-15 three-function instance checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mod15InstanceCheck:
    hypothesis_holds: bool
    totals: tuple[Fraction, Fraction, Fraction]
    hypothesis_margin: Fraction  # F1F2 + F2F3 + F3F1 - 2(F1 + F2 + F3)
    witness: Optional[LocalWitness]
    witness_found: bool


def check_mod15_instance(f1: UnitWeight, f2: UnitWeight, f3: UnitWeight,
                          target: int) -> Mod15InstanceCheck:
    """Check one instance of the three-function statement over Z_15.

    Requires each f_i to vanish on units 2 mod 3.  When the product
    hypothesis F1F2 + F2F3 + F3F1 > 2(F1+F2+F3) holds, a witness triple with
    weight sum above 3/2 is guaranteed; when it fails, the search result is
    returned with the hypothesis flag down.
    """
    for f in (f1, f2, f3):
        if f.modulus.m != 15:
            raise WrongModulus(f"modulus {f.modulus.m} != 15")
        for a in f.support():
            if a % 3 == 2:
                raise SupportViolation(f"positive weight at {a} = 2 (mod 3)")
    if target % 3 != 0:
        raise ValueError(f"target {target} is not divisible by 3")
    t1, t2, t3 = f1.total(), f2.total(), f3.total()
    margin = t1 * t2 + t2 * t3 + t3 * t1 - 2 * (t1 + t2 + t3)
    witness = best_witness_triple(f1, f2, f3, target)
    found = witness is not None and witness.weight_sum > THREE_HALVES
    return Mod15InstanceCheck(hypothesis_holds=margin > 0, totals=(t1, t2, t3),
                        hypothesis_margin=margin, witness=witness,
                        witness_found=found)
