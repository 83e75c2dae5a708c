"""Command-line entry point.

Subcommands map one-to-one onto the verification modules:

    verify sharpness            the {1,7} mod 15 extremal example
    verify local --m M          exhaustive/randomized local theorem checks
    verify lp                   the exact support-profile bound table
    verify regions              interval certification of the eight bounds
    lemma-search --n N          randomized sequence-lemma counterexample search
    goldbach scan               representation scan over a density subset
    goldbach pipeline --n N     the end-to-end W-trick pipeline for one target
    spectrum                    majorant Fourier diagnostics

Exit codes: 0 when every verdict is pass/diagnostic, 1 on any fail verdict,
2 on usage/config/precondition errors.  Flags may also be supplied through
--config PATH (flat key = value lines, or a JSON object with the same
keys); explicit flags win over config values.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from . import localcheck, lemmas, lp, primes, regions, transfer
from .reporting import VerificationReport, emit_report
from .residues import factorize_squarefree


class ConfigError(ValueError):
    pass


def _to_bool(s) -> bool:
    return str(s).lower() in ("1", "true", "yes")


_CASTERS = {
    "m": int, "n": int, "z": int, "trials": int, "seed": int,
    "max_depth": int, "limit": int, "n_lo": int, "n_hi": int,
    "n_cyclic": int, "b": int, "budget": int, "min_size": int,
    "pattern_mod": int, "kappa": float, "delta": float, "tol": float,
    "p": float, "mode": str, "rule": str, "pattern_classes": str,
    "format": str, "out": str, "target": str,
    "fixed_rhs": _to_bool, "cross_check": _to_bool,
}


def load_config(path: str) -> dict:
    """Flat key = value pairs, or a JSON object with the same keys."""
    text = Path(path).read_text()
    stripped = text.lstrip()
    raw: dict = {}
    if stripped.startswith("{"):
        obj = json.loads(text)
        if not isinstance(obj, dict):
            raise ConfigError("JSON config must be an object")
        raw = obj
    else:
        for line_no, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"line {line_no}: expected key = value")
            key, _, value = line.partition("=")
            raw[key.strip()] = value.strip()
    out = {}
    for key, value in raw.items():
        norm = key.replace("-", "_")
        if norm not in _CASTERS:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            out[norm] = _CASTERS[norm](value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}") from exc
    return out


def _apply_config(args: argparse.Namespace, config: dict) -> None:
    for key, value in config.items():
        if getattr(args, key, None) is None and hasattr(args, key):
            setattr(args, key, value)


def _fill(args: argparse.Namespace, **defaults) -> None:
    for key, value in defaults.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)


# ---------------------------------------------------------------------------
# Command implementations
# ---------------------------------------------------------------------------

def _cmd_sharpness(args) -> VerificationReport:
    rep = localcheck.verify_sharpness()
    return VerificationReport(
        claim="A = {1,7} in Z_15*: the class 12 is missing from A+A+A while "
              "sum f equals phi(15)/4",
        parameters={},
        verdict="pass" if rep.holds else "fail",
        payload={"holds": rep.holds, "missing_class": rep.missing_class,
                 "sumset": list(rep.sumset),
                 "indicator_sum": rep.indicator_sum,
                 "quarter_phi": rep.quarter_phi},
        seed=args.seed or 0)


def _cmd_local(args) -> VerificationReport:
    _fill(args, mode="exhaustive", trials=1000, seed=0, budget=10**7)
    mod = factorize_squarefree(args.m)
    payload: dict = {"m": args.m}
    failures = 0
    if args.mode in ("exhaustive", "both"):
        try:
            rep = localcheck.verify_local_indicator(mod, min_size=args.min_size,
                                                    budget=args.budget)
            payload["exhaustive"] = {
                "min_size": rep.min_size,
                "checked_subsets": rep.checked_subsets,
                "failure_count": rep.failure_count,
                "failures": [{"subset": list(s), "target": x}
                             for s, x in rep.failures[:50]],
            }
            failures += rep.failure_count
        except localcheck.BudgetExceeded as exc:
            # too many subsets to enumerate: fall back to randomized mode
            payload["exhaustive"] = {"skipped": str(exc), "fallback": "random"}
            if args.mode == "exhaustive":
                args.mode = "random"
    if args.mode in ("random", "both"):
        rep = localcheck.random_weighted_check(mod, trials=args.trials,
                                               seed=args.seed)
        payload["random"] = {
            "trials": rep.trials,
            "failure_count": len(rep.failures),
            "denominator_bound": rep.denominator_bound,
        }
        failures += len(rep.failures)
    return VerificationReport(
        claim="weights above phi(m)/4 on units 1 mod 3 represent every "
              "target 0 mod 3 as a triple sum with weight above 3/2",
        parameters={"m": args.m, "mode": args.mode, "trials": args.trials,
                    "min_size": args.min_size, "budget": args.budget},
        verdict="pass" if failures == 0 else "fail",
        payload=payload, seed=args.seed)


def _cmd_lp(args) -> VerificationReport:
    _fill(args, cross_check=True, seed=0)
    rep = lp.reproduce_table(cross_check=args.cross_check, strict=False)
    optima = [{"profile": list(p.sizes), "optimum": v}
              for p, v in rep.optima.items()]
    constrained = [{"profile": list(sizes), "f3_lower_bound": bound,
                    "optimum": v}
                   for (sizes, bound), v in rep.constrained.items()]
    mismatches = [{"profile": list(sizes), "solved": solved, "nominal": nominal}
                  for sizes, solved, nominal in rep.mismatches]
    verdict = "pass" if (not rep.mismatches and rep.bounds_hold) else "fail"
    return VerificationReport(
        claim="support-profile LP table: nominal optima 13/2 for (4,4,1) and "
              "31/5 for (4,4,2), at most 6 otherwise and under the F3 bounds",
        parameters={"cross_check": args.cross_check},
        verdict=verdict,
        payload={"optima": optima, "constrained": constrained,
                 "mismatches": mismatches, "bounds_hold": rep.bounds_hold,
                 "nominal": [{"profile": list(s), "value": v}
                             for s, v in lp.NOMINAL_TABLE.items()],
                 "cross_checked": rep.cross_checked},
        seed=args.seed)


def _cmd_regions(args) -> VerificationReport:
    _fill(args, tol=1e-6, max_depth=40, target="6", seed=0)
    target = Fraction(args.target)
    try:
        rep = regions.certify_all_regions(tol=args.tol,
                                          max_depth=args.max_depth,
                                          target=target)
    except (regions.CertificationFailed, regions.DepthExceeded) as exc:
        return VerificationReport(
            claim="all eight region bounds stay at most the target over "
                  "their boxes",
            parameters={"tol": args.tol, "max_depth": args.max_depth,
                        "target": target},
            verdict="fail",
            payload={"error": type(exc).__name__, "detail": str(exc)},
            seed=args.seed)
    payload = {"regions": [
        {"region_id": rid,
         "certified_bound": cert.certified_bound,
         "boxes_processed": cert.boxes_processed,
         "max_depth_seen": cert.max_depth_seen,
         "hot_boxes": len(cert.hot_boxes),
         "corner_equalities": sum(
             1 for hb in cert.hot_boxes for c in hb.corner_checks
             if c.equality)}
        for rid, cert in rep.certificates.items()]}
    return VerificationReport(
        claim="all eight region bounds stay at most the target over their "
              "boxes",
        parameters={"tol": args.tol, "max_depth": args.max_depth,
                    "target": target},
        verdict="pass" if rep.all_certified else "fail",
        payload=payload, seed=args.seed)


def _cmd_lemma_search(args) -> VerificationReport:
    _fill(args, trials=10**5, seed=0, mode="symmetric", fixed_rhs=False)
    rep = lemmas.random_counterexample_search(args.n, trials=args.trials,
                                              seed=args.seed, mode=args.mode,
                                              fixed_rhs=args.fixed_rhs)
    boundary = lemmas.boundary_equality_case(args.n, mode=args.mode)
    verdict = "pass" if (rep.violations == 0
                         and boundary["conclusion_equality"]) else "fail"
    return VerificationReport(
        claim="sequences satisfying the triple product condition obey the "
              "average bound (no counterexample found)",
        parameters={"n": args.n, "mode": args.mode, "trials": args.trials,
                    "fixed_rhs": args.fixed_rhs},
        verdict=verdict,
        payload={"violations": rep.violations,
                 "repaired_fraction": rep.repaired_fraction,
                 "worst_conclusion_margin": rep.worst_conclusion_margin,
                 "boundary_equality": boundary},
        seed=args.seed)


def _build_rule(args) -> primes.SubsetRule:
    rule = args.rule or "all"
    if rule == "all":
        return primes.AllPrimesRule()
    if rule == "pattern":
        if not args.pattern_classes:
            raise ConfigError("pattern rule needs --pattern-classes")
        classes = tuple(int(c) for c in str(args.pattern_classes).split(","))
        return primes.ResiduePatternRule(args.pattern_mod or 15, classes)
    if rule == "bernoulli":
        return primes.BernoulliRule(args.p if args.p is not None else 0.55,
                                    args.seed)
    raise ConfigError(f"unknown rule {rule!r}")


def _cmd_scan(args) -> VerificationReport:
    _fill(args, limit=10**6, seed=0)
    table = primes.sieve_primes(args.limit)
    subset = primes.build_subset(table, _build_rule(args))
    n_lo = args.n_lo
    if n_lo is None:
        smallest = int(subset.members[0]) if len(subset) else 2
        n_lo = max(10**3, 3 * smallest)
    n_hi = args.n_hi if args.n_hi is not None else 3 * args.limit
    rep = primes.scan_targets(subset, n_lo, n_hi)
    payload = {"density": subset.measured_density,
               "members": len(subset),
               "targets_scanned": rep.targets_scanned,
               "exceptional_count": len(rep.exceptional),
               "exceptional": rep.exceptional}
    if args.format == "csv":
        first = n_lo + ((3 - n_lo) % 6)
        counts = primes.count_representations(
            subset, range(first, n_hi + 1, 6))
        payload["columns"] = ["n", "representation_count"]
        payload["rows"] = [(int(t), int(c))
                           for t, c in zip(range(first, n_hi + 1, 6), counts)]
    return VerificationReport(
        claim="triple-sum representation counts over odd targets 0 mod 3",
        parameters={"limit": args.limit, "rule": str(subset.rule),
                    "n_lo": n_lo, "n_hi": n_hi},
        verdict="diagnostic",
        payload=payload,
        seed=args.seed)


def _cmd_pipeline(args) -> VerificationReport:
    _fill(args, limit=10**6, z=5, kappa=0.05, seed=0)
    if args.n is None:
        raise ConfigError("goldbach pipeline needs --n")
    table = primes.sieve_primes(args.limit)
    subset = primes.build_subset(table, _build_rule(args))
    params = {"n": args.n, "z": args.z, "kappa": args.kappa,
              "delta": args.delta, "limit": args.limit,
              "rule": str(subset.rule)}
    try:
        rep = transfer.run_pipeline(subset, args.n, z=args.z,
                                    delta=args.delta, kappa=args.kappa)
    except (transfer.HypothesisFailed, localcheck.NoWitness,
            transfer.StageFailed) as exc:
        return VerificationReport(
            claim="the W-trick pipeline realizes the target through every "
                  "stage",
            parameters=params, verdict="fail",
            payload={"stage_error": type(exc).__name__, "detail": str(exc),
                     "density": subset.measured_density},
            seed=args.seed)
    return VerificationReport(
        claim="the W-trick pipeline realizes the target through every stage",
        parameters=params, verdict="pass",
        payload={"weight_total": rep.weight_total,
                 "quarter_phi": rep.quarter_phi,
                 "witness": list(rep.witness.triple),
                 "witness_weight_sum": rep.witness.weight_sum,
                 "witness_classes_mod_w": list(rep.witness_classes_mod_w),
                 "n_cyclic": rep.n_cyclic,
                 "means": list(rep.means),
                 "mean_identity_rel_errors": list(rep.mean_identity_rel_errors),
                 "mean_condition_value": rep.mean_condition_value,
                 "nu_mean_deviations": list(rep.nu_mean_deviations),
                 "triple_sum": rep.triple_sum,
                 "direct_count": rep.direct_count,
                 "sample_triple": list(rep.sample_triple),
                 "delta": rep.delta,
                 "clipped_top": rep.clipped_top},
        seed=args.seed)


def _cmd_spectrum(args) -> VerificationReport:
    _fill(args, z=5, b=7, n_cyclic=10007, seed=0)
    w = transfer.primorial(args.z)
    need = w * (args.n_cyclic - 1) + args.b
    limit = args.limit if args.limit is not None else need
    if limit < need:
        raise ConfigError(f"--limit must be at least {need}")
    table = primes.sieve_primes(limit)
    profile = transfer.build_majorant(table, w, args.b, args.n_cyclic)
    dec = transfer.verify_decay(profile)
    payload = {"mean": dec.mean, "mean_deviation": dec.mean_deviation,
               "sup_nonzero": dec.sup_nonzero,
               "asymptotic_bound": dec.asymptotic_bound,
               "ratio": dec.ratio,
               "parseval_rel_error": dec.parseval_rel_error}
    if args.format == "csv":
        mags = np.abs(transfer.spectrum(profile.nu).coefficients)
        payload["columns"] = ["r", "coefficient_magnitude"]
        payload["rows"] = [(int(r), repr(float(m)))
                           for r, m in enumerate(mags)]
    return VerificationReport(
        claim="majorant spectrum: mean near 1, off-zero coefficients small",
        parameters={"z": args.z, "b": args.b, "n_cyclic": args.n_cyclic,
                    "w": w},
        verdict="diagnostic",
        payload=payload,
        seed=args.seed)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value or JSON config file")
    common.add_argument("--out", help="write the report to this path")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--seed", type=int, default=None)

    parser = argparse.ArgumentParser(
        prog="goldbach-lab",
        description="Verification toolkit for triple sums of primes 1 mod 3")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run a verification")
    vsub = verify.add_subparsers(dest="verify_what", required=True)

    vsub.add_parser("sharpness", parents=[common]).set_defaults(
        func=_cmd_sharpness)

    p_local = vsub.add_parser("local", parents=[common])
    p_local.add_argument("--m", type=int, required=True)
    p_local.add_argument("--mode", choices=("exhaustive", "random", "both"),
                         default=None)
    p_local.add_argument("--trials", type=int, default=None)
    p_local.add_argument("--min-size", dest="min_size", type=int, default=None)
    p_local.add_argument("--budget", type=int, default=None)
    p_local.set_defaults(func=_cmd_local)

    p_lp = vsub.add_parser("lp", parents=[common])
    p_lp.add_argument("--no-cross-check", dest="cross_check",
                      action="store_false", default=None)
    p_lp.set_defaults(func=_cmd_lp)

    p_regions = vsub.add_parser("regions", parents=[common])
    p_regions.add_argument("--tol", type=float, default=None)
    p_regions.add_argument("--max-depth", dest="max_depth", type=int,
                           default=None)
    p_regions.add_argument("--target", default=None,
                           help="bound to certify, e.g. 6 or 59/10")
    p_regions.set_defaults(func=_cmd_regions)

    p_lemma = sub.add_parser("lemma-search", parents=[common])
    p_lemma.add_argument("--n", type=int, required=True)
    p_lemma.add_argument("--mode", choices=("symmetric", "asymmetric"),
                         default=None)
    p_lemma.add_argument("--trials", type=int, default=None)
    p_lemma.add_argument("--fixed-rhs", dest="fixed_rhs", action="store_true",
                         default=None)
    p_lemma.set_defaults(func=_cmd_lemma_search)

    goldbach = sub.add_parser("goldbach")
    gsub = goldbach.add_subparsers(dest="goldbach_what", required=True)

    def add_subset_flags(p):
        p.add_argument("--limit", type=int, default=None)
        p.add_argument("--rule", choices=("all", "pattern", "bernoulli"),
                       default=None)
        p.add_argument("--pattern-mod", dest="pattern_mod", type=int,
                       default=None)
        p.add_argument("--pattern-classes", dest="pattern_classes",
                       default=None, help="comma-separated, e.g. 1,7")
        p.add_argument("--p", type=float, default=None,
                       help="Bernoulli inclusion probability")

    p_scan = gsub.add_parser("scan", parents=[common])
    add_subset_flags(p_scan)
    p_scan.add_argument("--n-lo", dest="n_lo", type=int, default=None)
    p_scan.add_argument("--n-hi", dest="n_hi", type=int, default=None)
    p_scan.set_defaults(func=_cmd_scan)

    p_pipe = gsub.add_parser("pipeline", parents=[common])
    add_subset_flags(p_pipe)
    p_pipe.add_argument("--n", type=int, default=None)
    p_pipe.add_argument("--z", type=int, default=None)
    p_pipe.add_argument("--kappa", type=float, default=None)
    p_pipe.add_argument("--delta", type=float, default=None)
    p_pipe.set_defaults(func=_cmd_pipeline)

    p_spec = sub.add_parser("spectrum", parents=[common])
    p_spec.add_argument("--z", type=int, default=None)
    p_spec.add_argument("--b", type=int, default=None)
    p_spec.add_argument("--n-cyclic", dest="n_cyclic", type=int, default=None)
    p_spec.add_argument("--limit", type=int, default=None)
    p_spec.set_defaults(func=_cmd_spectrum)

    return parser


PRECONDITION_ERRORS = (
    ConfigError,
    ValueError,  # covers the typed precondition families in every module
    localcheck.BudgetExceeded,
    transfer.BadTarget,
)


def run_command(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            _apply_config(args, load_config(args.config))
        if args.seed is None:
            args.seed = 0
        start = time.monotonic()
        report: VerificationReport = args.func(args)
        report.runtime_ms = int((time.monotonic() - start) * 1000)
        data = emit_report(report, format=args.format or "json")
    except PRECONDITION_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.write(data.decode())
    return 0 if report.verdict in ("pass", "diagnostic") else 1


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
