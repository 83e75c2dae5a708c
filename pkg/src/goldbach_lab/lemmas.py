"""Randomized counterexample search for the sequence-average lemmas.

Symmetric form: a single non-increasing sequence a_0 >= ... >= a_{n-1} in
[0,1] (n even, >= 6) whose qualifying triples (i + j + k >= n) satisfy
a_i*a_j + a_j*a_k + a_k*a_i <= (a_i + a_j + a_k)/2 must have average <= 1/2.

Asymmetric form (n >= 10): three sequences with
a_i*b_j + b_j*c_k + c_k*a_i <= (a_i + b_j + c_k)/2 on qualifying triples
force AB + BC + CA <= (A + B + C)/2 for the averages.

The searches sample sorted uniform sequences and scale them down until the
hypothesis holds (the constraint is quadratic-vs-linear, so some lambda in
(0,1] always repairs it), concentrating samples near the hypothesis
boundary.  Scanning is vectorized in floats; any flagged conclusion
violation is re-checked in exact rationals before it is counted, so a
nonzero count is a genuine counterexample.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class SequenceTriple:
    """Three non-increasing sequences in [0,1] of even length n >= 6
    (symmetric checks pass the same sequence three times)."""

    n: int
    a: tuple
    b: tuple
    c: tuple

    def __post_init__(self) -> None:
        if self.n < 6 or self.n % 2:
            raise ValueError(f"n must be even and >= 6, got {self.n}")
        for name, seq in (("a", self.a), ("b", self.b), ("c", self.c)):
            if len(seq) != self.n:
                raise ValueError(f"sequence {name} has length {len(seq)} != {self.n}")
            if any(not (0 <= v <= 1) for v in seq):
                raise ValueError(f"sequence {name} leaves [0,1]")
            if any(seq[i] < seq[i + 1] for i in range(self.n - 1)):
                raise ValueError(f"sequence {name} is not non-increasing")

    @classmethod
    def symmetric(cls, seq) -> "SequenceTriple":
        t = tuple(Fraction(v) for v in seq)
        return cls(len(t), t, t, t)

    @classmethod
    def of(cls, a, b, c) -> "SequenceTriple":
        ta = tuple(Fraction(v) for v in a)
        return cls(len(ta), ta, tuple(Fraction(v) for v in b),
                   tuple(Fraction(v) for v in c))

    def averages(self) -> tuple[Fraction, Fraction, Fraction]:
        n = self.n
        return (sum(self.a, Fraction(0)) / n, sum(self.b, Fraction(0)) / n,
                sum(self.c, Fraction(0)) / n)


@dataclass(frozen=True)
class HypothesisCheck:
    holds: bool
    witness_triple: Optional[tuple[int, int, int]]


def lemma_hypothesis_check(seq: SequenceTriple,
                           fixed_rhs: bool = False) -> HypothesisCheck:
    """Exact check of the pairwise-product condition over all ordered index
    triples with i + j + k >= n (0-indexed); returns the lexicographically
    first violating triple, if any.

    fixed_rhs=True checks against the constant right-hand side
    (a_1 + a_2 + a_3)/2 (indices 1, 2, 3 of the first sequence) instead of
    the per-triple (a_i + b_j + c_k)/2.
    """
    n, a, b, c = seq.n, seq.a, seq.b, seq.c
    rhs_const = (a[1] + a[2] + a[3]) / 2 if fixed_rhs else None
    for i in range(n):
        for j in range(n):
            k_lo = n - i - j
            if k_lo < 0:
                k_lo = 0
            for k in range(k_lo, n):
                lhs = a[i] * b[j] + b[j] * c[k] + c[k] * a[i]
                rhs = rhs_const if fixed_rhs else (a[i] + b[j] + c[k]) / 2
                if lhs > rhs:
                    return HypothesisCheck(False, (i, j, k))
    return HypothesisCheck(True, None)


def transformed_hypothesis_equivalent(a_i, a_j, a_k) -> bool:
    """The substitution x = 4a - 1 turns the product condition into
    x_i*x_j + x_j*x_k + x_k*x_i <= 3; both predicates agree exactly."""
    ai, aj, ak = Fraction(a_i), Fraction(a_j), Fraction(a_k)
    original = ai * aj + aj * ak + ak * ai <= (ai + aj + ak) / 2
    x = [4 * v - 1 for v in (ai, aj, ak)]
    transformed = x[0] * x[1] + x[1] * x[2] + x[2] * x[0] <= 3
    return original == transformed


# ---------------------------------------------------------------------------
# Randomized search
# ---------------------------------------------------------------------------

@dataclass
class SearchReport:
    n: int
    mode: str  # "symmetric" | "asymmetric"
    trials: int
    seed: int
    violations: int
    violation_examples: list
    repaired_fraction: float  # share of samples that needed scaling
    worst_conclusion_margin: float  # max of (conclusion lhs - rhs) observed
    fixed_rhs: bool = False


def _qualifying_triples(n: int, ordered: bool) -> tuple[np.ndarray, ...]:
    idx = []
    for i in range(n):
        for j in range(n):
            if not ordered and j < i:
                continue
            for k in range(n):
                if not ordered and k < j:
                    continue
                if i + j + k >= n:
                    idx.append((i, j, k))
    arr = np.array(idx, dtype=np.int64)
    return arr[:, 0], arr[:, 1], arr[:, 2]


def _sorted_uniform(rng: np.random.Generator, rows: int, n: int) -> np.ndarray:
    return -np.sort(-rng.random((rows, n)), axis=1)


def _scale_to_hypothesis(lhs_over_rhs_max: np.ndarray) -> np.ndarray:
    """Per-sample lambda in (0,1]: scaling by lambda multiplies products by
    lambda^2 and sums by lambda, so lambda <= 1/ratio repairs the sample."""
    with np.errstate(divide="ignore"):
        lam = np.where(lhs_over_rhs_max > 1.0,
                       (1.0 - 1e-12) / lhs_over_rhs_max, 1.0)
    return lam


def _exact_violation(seqs: tuple, fixed_rhs: bool) -> bool:
    """Exact rational recheck: hypothesis holds and conclusion fails."""
    triple = SequenceTriple.of(*seqs)
    if not lemma_hypothesis_check(triple, fixed_rhs=fixed_rhs).holds:
        return False
    av_a, av_b, av_c = triple.averages()
    if triple.a == triple.b == triple.c:
        return av_a > HALF
    return av_a * av_b + av_b * av_c + av_c * av_a > (av_a + av_b + av_c) / 2


def random_counterexample_search(n: int, trials: int, seed: int = 0,
                                 mode: str = "symmetric",
                                 fixed_rhs: bool = False,
                                 chunk: int = 2048) -> SearchReport:
    """Sample hypothesis-satisfying sequence (triples) and count conclusion
    violations; expected zero.

    Symmetric mode needs even n >= 6, asymmetric even n >= 10.  Candidate
    violations flagged in float are confirmed in exact arithmetic before
    being counted.
    """
    if n % 2:
        raise ValueError(f"n must be even, got {n}")
    if mode == "symmetric":
        if n < 6:
            raise ValueError("symmetric mode needs n >= 6")
    elif mode == "asymmetric":
        if n < 10:
            raise ValueError("asymmetric mode needs n >= 10")
        if fixed_rhs:
            raise ValueError("fixed_rhs applies to the symmetric form only")
    else:
        raise ValueError(f"unknown mode {mode!r}")

    rng = np.random.default_rng(seed)
    i_idx, j_idx, k_idx = _qualifying_triples(n, ordered=(mode == "asymmetric"))
    violations = 0
    examples: list = []
    repaired = 0
    worst_margin = -np.inf
    done = 0
    while done < trials:
        rows = min(chunk, trials - done)
        if mode == "symmetric":
            a = _sorted_uniform(rng, rows, n)
            ai, aj, ak = a[:, i_idx], a[:, j_idx], a[:, k_idx]
            lhs = ai * aj + aj * ak + ak * ai
            if fixed_rhs:
                rhs = np.broadcast_to(
                    ((a[:, 1] + a[:, 2] + a[:, 3]) / 2)[:, None], lhs.shape)
            else:
                rhs = (ai + aj + ak) / 2
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(rhs > 0, lhs / rhs, 0.0)
            lam = _scale_to_hypothesis(ratio.max(axis=1))
            repaired += int((lam < 1.0).sum())
            scaled = a * lam[:, None]
            mean = scaled.mean(axis=1)
            margin = mean - 0.5
            worst_margin = max(worst_margin, float(margin.max()))
            for r in np.flatnonzero(margin > 1e-12):
                row = tuple(scaled[r])
                if _exact_violation((row, row, row), fixed_rhs):
                    violations += 1
                    if len(examples) < 10:
                        examples.append(row)
        else:
            a = _sorted_uniform(rng, rows, n)
            b = _sorted_uniform(rng, rows, n)
            c = _sorted_uniform(rng, rows, n)
            lhs = (a[:, i_idx] * b[:, j_idx] + b[:, j_idx] * c[:, k_idx]
                   + c[:, k_idx] * a[:, i_idx])
            rhs = (a[:, i_idx] + b[:, j_idx] + c[:, k_idx]) / 2
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(rhs > 0, lhs / rhs, 0.0)
            lam = _scale_to_hypothesis(ratio.max(axis=1))
            repaired += int((lam < 1.0).sum())
            sa, sb, sc = (a * lam[:, None], b * lam[:, None], c * lam[:, None])
            ma, mb, mc = sa.mean(axis=1), sb.mean(axis=1), sc.mean(axis=1)
            margin = ma * mb + mb * mc + mc * ma - (ma + mb + mc) / 2
            worst_margin = max(worst_margin, float(margin.max()))
            for r in np.flatnonzero(margin > 1e-12):
                seqs = (tuple(sa[r]), tuple(sb[r]), tuple(sc[r]))
                if _exact_violation(seqs, False):
                    violations += 1
                    if len(examples) < 10:
                        examples.append(seqs)
        done += rows
    return SearchReport(n=n, mode=mode, trials=trials, seed=seed,
                        violations=violations, violation_examples=examples,
                        repaired_fraction=repaired / max(trials, 1),
                        worst_conclusion_margin=worst_margin,
                        fixed_rhs=fixed_rhs)


def boundary_equality_case(n: int, mode: str = "symmetric") -> dict:
    """The constant-1/2 sequences: hypothesis holds with equality on every
    qualifying triple and the conclusion is attained with equality, exactly."""
    seq = SequenceTriple.symmetric([HALF] * n)
    hyp = lemma_hypothesis_check(seq)
    av_a, av_b, av_c = seq.averages()
    if mode == "symmetric":
        conclusion_equal = av_a == HALF
    else:
        conclusion_equal = (av_a * av_b + av_b * av_c + av_c * av_a
                            == (av_a + av_b + av_c) / 2)
    triple_lhs = HALF * HALF * 3
    triple_rhs = (HALF * 3) / 2
    return {"hypothesis_holds": hyp.holds,
            "hypothesis_equality": triple_lhs == triple_rhs,
            "conclusion_equality": conclusion_equal}
