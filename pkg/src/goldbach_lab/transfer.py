"""The W-trick pipeline: weight construction on reduced residues, majorant
profiles on a cyclic group, Fourier diagnostics, and the end-to-end run
from a density subset to a confirmed integer representation.

For sieve level z set W = prod(p <= z).  The weight on a reduced class b is

    f(b) = max( phi(W)*3/(2n) * sum_{x in A, x <= 2n/3, x = b (W)} log x
                - delta/8, 0 )

supported on classes 1 mod 3, then re-indexed to m = W/2 (the odd part),
where the local theorem applies.  The majorant on Z_N (N prime) is

    nu(j) = phi(W)/(W*N) * log(W*j + b)   when W*j + b is prime, else 0,

and the restricted weight masks nu to the shifted subset coordinates
A_i = {(x - b)/W}.  Fourier transforms use the additive character
exp(2*pi*i*r*n/N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .localcheck import (
    LocalWitness,
    NoWitness,
    UnitWeight,
    local_class_selection,
)
from .primes import DensitySubset, PrimeTable, sieve_primes
from .residues import factorize_squarefree

MAX_LOCAL_MODULUS = 100_000


class BadTarget(ValueError):
    pass


class SieveLevelTooLarge(ValueError):
    pass


class NoPrimeInInterval(ValueError):
    pass


class NotReducedResidue(ValueError):
    pass


class MismatchedLength(ValueError):
    pass


class HypothesisFailed(Exception):
    """The weight fails sum(f) > phi(m)/4: expected for subsets whose
    density margin is too small (adversarial inputs), fatal otherwise."""


class StageFailed(Exception):
    """A later pipeline stage contradicts the theory (never expected)."""


def primorial(z: int) -> int:
    """W = product of all primes <= z; z >= 3 so that 3 | W."""
    if z < 3:
        raise ValueError(f"sieve level z must be >= 3, got {z}")
    w = 1
    for p in range(2, z + 1):
        if all(p % d for d in range(2, int(math.isqrt(p)) + 1)):
            w *= p
    return w


def _class_log_sums(subset: DensitySubset, n: int, w: int) -> dict[int, float]:
    """sum of log x over A cap [1, 2n/3] per reduced residue class mod W."""
    upper = (2 * n) // 3
    members = subset.members[subset.members <= upper]
    logs = np.log(members.astype(np.float64))
    residues = members % w
    by_class = np.bincount(residues, weights=logs, minlength=w)
    return {b: float(by_class[b]) for b in range(1, w)
            if math.gcd(b, w) == 1}


@dataclass
class WeightDiagnostics:
    raw_values: dict  # reduced class b mod W -> unclipped phi(W)3/(2n)*S - delta/8
    clipped_top: int  # classes whose raw value exceeded 1 (clipped down)
    max_raw: float


def pipeline_weights(subset: DensitySubset, n: int, z: int,
                     delta: float) -> UnitWeight:
    """The reduced-residue weight of the pipeline, re-indexed to m = W/2."""
    weight, _ = pipeline_weights_with_diagnostics(subset, n, z, delta)
    return weight


def pipeline_weights_with_diagnostics(
        subset: DensitySubset, n: int, z: int,
        delta: float) -> tuple[UnitWeight, WeightDiagnostics]:
    if n % 2 == 0 or n % 3 != 0:
        raise BadTarget(f"target {n} must be odd and divisible by 3")
    if (2 * n) // 3 > subset.limit:
        raise BadTarget(f"target {n} needs members up to {2 * n // 3} but the "
                        f"subset stops at {subset.limit}")
    w = primorial(z)
    m = w // 2
    if m > MAX_LOCAL_MODULUS:
        raise SieveLevelTooLarge(f"W/2 = {m} exceeds {MAX_LOCAL_MODULUS}")
    sums = _class_log_sums(subset, n, w)
    scale = _totient(w) * 3.0 / (2.0 * n)
    raw = {b: scale * s - delta / 8.0 for b, s in sums.items()}
    values: dict[int, Fraction] = {}
    clipped = 0
    for b, v in raw.items():
        if v <= 0:
            continue
        if v > 1.0:
            clipped += 1
            v = 1.0
        values[b % m] = Fraction(v)
    mod = factorize_squarefree(m)
    weight = UnitWeight(mod, values, support_filter=True)
    diags = WeightDiagnostics(raw_values=raw, clipped_top=clipped,
                              max_raw=max(raw.values()) if raw else 0.0)
    return weight, diags


def _totient(w: int) -> int:
    phi = 1
    n = w
    p = 2
    while p * p <= n:
        if n % p == 0:
            phi *= p - 1
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        phi *= n - 1
    return phi


def choose_cyclic_prime(n: int, w: int, kappa: float) -> int:
    """Smallest prime in [(1+kappa)n/W, (1+2kappa)n/W]."""
    if kappa <= 0:
        raise ValueError("kappa must be positive (the interval degenerates)")
    lo = math.ceil((1 + kappa) * n / w)
    hi = math.floor((1 + 2 * kappa) * n / w)
    if hi < lo:
        raise NoPrimeInInterval(f"empty interval [{lo}, {hi}]")
    flags = sieve_primes(hi)
    for candidate in range(lo, hi + 1):
        if flags.is_prime[candidate]:
            return candidate
    raise NoPrimeInInterval(f"no prime in [{lo}, {hi}]")


# ---------------------------------------------------------------------------
# Majorants on Z_N
# ---------------------------------------------------------------------------

@dataclass
class MajorantProfile:
    z: int
    w: int
    b: int
    n_cyclic: int
    nu: np.ndarray = field(repr=False)
    f_restricted: np.ndarray = field(repr=False)
    member_indices: np.ndarray = field(repr=False)

    def majorization_holds(self) -> bool:
        return bool((self.f_restricted >= 0).all()
                    and (self.f_restricted <= self.nu + 1e-15).all())


def build_majorant(table: PrimeTable, w: int, b: int, n_cyclic: int,
                   subset: Optional[DensitySubset] = None,
                   upper: Optional[int] = None) -> MajorantProfile:
    """nu(j) = phi(W)/(W*N) log(Wj + b) on prime values of Wj + b, with the
    restriction mask from the subset's shifted coordinates (nu itself when
    no subset is given)."""
    if not (0 < b < w) or math.gcd(b, w) != 1:
        raise NotReducedResidue(f"{b} is not a reduced residue mod {w}")
    top = w * (n_cyclic - 1) + b
    if top > table.limit:
        raise ValueError(f"need primality up to {top}, table stops at "
                         f"{table.limit}")
    n = n_cyclic
    values = b + w * np.arange(n, dtype=np.int64)
    prime_mask = table.is_prime[values]
    nu = np.zeros(n, dtype=np.float64)
    nu[prime_mask] = (_totient(w) / (w * float(n))) * np.log(
        values[prime_mask].astype(np.float64))
    if subset is None:
        f = nu.copy()
        member_indices = np.flatnonzero(prime_mask).astype(np.int64)
    else:
        cutoff = subset.limit if upper is None else upper
        mem = subset.members
        xs = mem[(mem % w == b) & (mem <= cutoff)]
        member_indices = (xs - b) // w
        if member_indices.size and member_indices.max() >= n:
            raise ValueError("subset coordinate beyond the cyclic range; "
                             "increase N or lower the cutoff")
        mask = np.zeros(n, dtype=bool)
        mask[member_indices] = True
        f = np.where(mask, nu, 0.0)
    z = max(p for p in range(2, w + 1) if w % p == 0 and
            all(p % d for d in range(2, int(math.isqrt(p)) + 1)))
    return MajorantProfile(z=z, w=w, b=b, n_cyclic=n_cyclic, nu=nu,
                           f_restricted=f, member_indices=member_indices)


# ---------------------------------------------------------------------------
# Fourier diagnostics
# ---------------------------------------------------------------------------

def _is_prime_small(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(math.isqrt(n)) + 1):
        if n % d == 0:
            return False
    return True


@dataclass
class SpectrumReport:
    n: int
    coefficients: np.ndarray = field(repr=False)  # hat f(r), r = 0..N-1
    mean: float  # hat f(0)
    sup_nonzero: float  # max_{r != 0} |hat f(r)|
    lq_norms: dict  # q -> (sum_r |hat f(r)|^q)^(1/q)
    parseval_rel_error: float


def spectrum(weights: np.ndarray, qs: Sequence[float] = (2.5, 3.0),
             require_prime: bool = True) -> SpectrumReport:
    """Full transform hat f(r) = sum_n f(n) exp(2 pi i r n / N) with sup and
    l^q diagnostics; Parseval is evaluated as a relative error."""
    w = np.asarray(weights, dtype=np.float64)
    n = w.size
    if require_prime and not _is_prime_small(n):
        raise ValueError(f"cyclic length {n} must be prime")
    coeff = np.fft.ifft(w) * n
    mags = np.abs(coeff)
    power = float((mags ** 2).sum())
    reference = n * float((w ** 2).sum())
    parseval = abs(power - reference) / max(reference, 1e-300)
    sup_nonzero = float(mags[1:].max()) if n > 1 else 0.0
    lq = {q: float((mags ** q).sum() ** (1.0 / q)) for q in qs}
    return SpectrumReport(n=n, coefficients=coeff, mean=float(coeff[0].real),
                          sup_nonzero=sup_nonzero, lq_norms=lq,
                          parseval_rel_error=parseval)


@dataclass
class DecayReport:
    z: int
    n_cyclic: int
    sup_nonzero: float
    mean: float
    mean_deviation: float  # |hat nu(0) - 1|
    asymptotic_bound: float  # 2 log log z / z
    ratio: float  # sup_nonzero / asymptotic_bound
    parseval_rel_error: float


def verify_decay(profile: MajorantProfile) -> DecayReport:
    """Diagnostic comparison of sup_{r != 0} |hat nu(r)| against the
    asymptotic envelope 2 log log z / z (a report, not an assertion: the
    envelope is only claimed for N and z sufficiently large)."""
    z = profile.z
    if z < 3:
        raise ValueError("z >= 3 required for log log z > 0")
    rep = spectrum(profile.nu)
    bound = 2.0 * math.log(math.log(z)) / z
    return DecayReport(z=z, n_cyclic=profile.n_cyclic,
                       sup_nonzero=rep.sup_nonzero, mean=rep.mean,
                       mean_deviation=abs(rep.mean - 1.0),
                       asymptotic_bound=bound,
                       ratio=rep.sup_nonzero / bound,
                       parseval_rel_error=rep.parseval_rel_error)


@dataclass
class TransferenceReport:
    n_cyclic: int
    x: int
    triple_sum: float  # sum_{y,z} f1(y) f2(z) f3(x - y - z)
    triple_sum_positive: bool
    means: tuple[float, float, float]
    mean_condition_value: float  # min(d1, d2, d3, d1 + d2 + d3 - 1)
    mean_condition_ok: bool
    refined_condition: Optional[list] = None  # per-class d_i >= 2 f(b_i)/3 + delta/20


def triple_convolution_direct(f1: np.ndarray, f2: np.ndarray, f3: np.ndarray,
                              x: int) -> float:
    """Double-sum oracle for the cyclic triple convolution value."""
    n = f1.size
    total = 0.0
    for y in range(n):
        if f1[y] == 0.0:
            continue
        total += f1[y] * float((f2 * f3[(x - y - np.arange(n)) % n]).sum())
    return total


def transference_diagnostics(f1: np.ndarray, f2: np.ndarray, f3: np.ndarray,
                             x: int, delta: Optional[float] = None,
                             local_values: Optional[Sequence[float]] = None,
                             ) -> TransferenceReport:
    """Exact-to-rounding triple convolution at x via the DFT identity
    (1/N) sum_r hat f1 hat f2 hat f3 e(-rx/N), plus the mean conditions."""
    if not (f1.size == f2.size == f3.size):
        raise MismatchedLength(
            f"lengths {f1.size}, {f2.size}, {f3.size} differ")
    n = f1.size
    hats = [np.fft.ifft(np.asarray(f, dtype=np.float64)) * n
            for f in (f1, f2, f3)]
    conv = np.fft.fft(hats[0] * hats[1] * hats[2]) / n
    value = float(conv[x % n].real)
    d1, d2, d3 = (float(f.sum()) for f in (f1, f2, f3))
    condition = min(d1, d2, d3, d1 + d2 + d3 - 1.0)
    ok = condition >= delta if delta is not None else condition > 0.0
    refined = None
    if local_values is not None and delta is not None:
        refined = [{"delta_i": d, "floor": 2.0 * fv / 3.0 + delta / 20.0,
                    "ok": d >= 2.0 * fv / 3.0 + delta / 20.0 - 1e-12}
                   for d, fv in zip((d1, d2, d3), local_values)]
    return TransferenceReport(n_cyclic=n, x=x % n, triple_sum=value,
                              triple_sum_positive=value > 1e-9,
                              means=(d1, d2, d3),
                              mean_condition_value=condition,
                              mean_condition_ok=ok,
                              refined_condition=refined)


# ---------------------------------------------------------------------------
# End-to-end pipeline
# ---------------------------------------------------------------------------

@dataclass
class PipelineReport:
    n: int
    z: int
    w: int
    m: int
    kappa: float
    delta: float
    weight_total: Fraction
    quarter_phi: Fraction
    witness: LocalWitness
    witness_classes_mod_w: tuple[int, int, int]
    n_cyclic: int
    means: tuple[float, float, float]
    mean_identity_rel_errors: tuple[float, float, float]
    mean_condition_value: float
    nu_mean_deviations: tuple[float, float, float]
    parseval_rel_errors: tuple[float, float, float]
    triple_sum: float
    direct_count: int
    sample_triple: Optional[tuple[int, int, int]]
    clipped_top: int
    max_raw_weight: float


def run_pipeline(subset: DensitySubset, n: int, z: int = 5,
                 delta: Optional[float] = None, kappa: float = 0.05,
                 table: Optional[PrimeTable] = None) -> PipelineReport:
    """Execute every pipeline stage for one target n and verify each:
    weight hypothesis, class-witness selection, cyclic prime choice,
    majorant/mean identities, triple convolution positivity, and a direct
    integer representation count.

    Raises BadTarget for invalid targets, HypothesisFailed / NoWitness for
    subsets below the density hypothesis, and StageFailed when a later
    stage contradicts the theory (a genuine verification failure).
    """
    if n % 2 == 0 or n % 3 != 0:
        raise BadTarget(f"target {n} must be odd and divisible by 3")
    if delta is None:
        delta = max(float(subset.measured_density) - 0.5, 0.0)
    w = primorial(z)
    m = w // 2
    weight, diags = pipeline_weights_with_diagnostics(subset, n, z, delta)
    quarter = Fraction(weight.modulus.totient, 4)
    total = weight.total()
    if not total > quarter:
        raise HypothesisFailed(
            f"sum f = {float(total):.4f} <= phi({m})/4 = {float(quarter)}")
    witness = local_class_selection(weight, n % m)

    def lift(b_mod_m: int) -> int:
        return b_mod_m if b_mod_m % 2 == 1 else b_mod_m + m

    bs = tuple(lift(b) for b in witness.triple)
    if (sum(bs) - n) % w != 0:
        raise StageFailed(f"lifted classes {bs} miss n mod W")
    n_cyclic = choose_cyclic_prime(n, w, kappa)
    need = w * (n_cyclic - 1) + max(bs)
    if table is None or table.limit < need:
        table = sieve_primes(need)
    upper = (2 * n) // 3

    profiles = [build_majorant(table, w, b, n_cyclic, subset, upper)
                for b in bs]
    means = []
    identity_errors = []
    nu_devs = []
    parseval = []
    for b, prof in zip(bs, profiles):
        if not prof.majorization_holds():
            raise StageFailed(f"majorization fails for class {b}")
        delta_i = float(prof.f_restricted.sum())
        means.append(delta_i)
        raw = diags.raw_values[b]  # unclipped f(b) + delta/8 = scale * S_b
        expected = (2.0 * n / (3.0 * w * n_cyclic)) * (raw + delta / 8.0)
        err = abs(delta_i - expected) / max(abs(expected), 1e-300)
        identity_errors.append(err)
        dec = verify_decay(prof)
        nu_devs.append(dec.mean_deviation)
        parseval.append(dec.parseval_rel_error)
    for err in identity_errors:
        if err > 1e-9:
            raise StageFailed(f"mean identity violated: rel error {err}")

    x_int = (n - sum(bs)) // w
    diag = transference_diagnostics(profiles[0].f_restricted,
                                    profiles[1].f_restricted,
                                    profiles[2].f_restricted,
                                    x_int % n_cyclic, delta=delta)

    direct_count, sample = _direct_class_count(subset, n, w, bs, upper)
    if direct_count == 0:
        raise StageFailed(f"no integer representation of {n} with classes {bs}")
    if diag.triple_sum > 1e-9 and direct_count == 0:
        raise StageFailed("convolution positive but direct count zero")
    if direct_count > 0 and diag.triple_sum < -1e-9:
        raise StageFailed("negative convolution with positive direct count")

    return PipelineReport(
        n=n, z=z, w=w, m=m, kappa=kappa, delta=delta, weight_total=total,
        quarter_phi=quarter, witness=witness, witness_classes_mod_w=bs,
        n_cyclic=n_cyclic, means=tuple(means),
        mean_identity_rel_errors=tuple(identity_errors),
        mean_condition_value=diag.mean_condition_value,
        nu_mean_deviations=tuple(nu_devs),
        parseval_rel_errors=tuple(parseval),
        triple_sum=diag.triple_sum, direct_count=direct_count,
        sample_triple=sample, clipped_top=diags.clipped_top,
        max_raw_weight=diags.max_raw)


def _direct_class_count(subset: DensitySubset, n: int, w: int,
                        bs: tuple[int, int, int],
                        upper: int) -> tuple[int, Optional[tuple[int, int, int]]]:
    """Ordered count of p1 + p2 + p3 = n with p_i in A, p_i <= upper,
    p_i = b_i (mod W); returns a sample triple as well."""
    mem = subset.members[subset.members <= upper]
    cls = [mem[mem % w == b] for b in bs]
    if any(c.size == 0 for c in cls):
        return 0, None
    mask3 = np.zeros(subset.limit + 1, dtype=bool)
    mask3[cls[2]] = True
    total = 0
    sample = None
    for p1 in cls[0]:
        rem = n - int(p1) - cls[1]
        valid = (rem >= 2) & (rem <= subset.limit)
        hits = mask3[rem[valid]]
        c = int(hits.sum())
        if c and sample is None:
            p2 = int(cls[1][valid][hits][0])
            sample = (int(p1), p2, n - int(p1) - p2)
        total += c
    return total, sample
