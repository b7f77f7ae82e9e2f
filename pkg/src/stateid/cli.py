"""Command-line front end.

Exit codes: 0 success, 1 a checked property or bound was violated, 2 input
error.  Every report is JSON with sorted keys; timing sits under ``timing``.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from typing import Sequence

import numpy as np

from . import classical, ident, io, linmat, smp
from .sdp import SdpError, SolverOptions, solve

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2
GAP_REPORT_TOL = 1e-5
CERT_TOL = 1e-8


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _eps(args) -> float:
    if args.eps is None:
        raise UsageError("--eps is required")
    if not 0.0 <= args.eps < 0.5:
        raise UsageError(f"--eps must lie in [0, 1/2), got {args.eps}")
    return args.eps


def _rng(args) -> np.random.Generator:
    if args.seed is None:
        raise UsageError("this command uses randomness; --seed is required")
    return np.random.default_rng(args.seed)


def _opts(args, base: SolverOptions = ident.IDENT_OPTIONS) -> SolverOptions:
    return SolverOptions(gap_tol=args.tol_gap if args.tol_gap is not None else base.gap_tol,
                         feas_tol=args.tol_feas if args.tol_feas is not None else base.feas_tol)


def _measurement_obj(m: ident.PredictorMeasurement) -> dict:
    lo, hi = m.validity()
    return {"elements": {k: io.matrix_to_obj(v) for k, v in sorted(m.elements.items())},
            "min_element_eig": lo, "max_sum_eig": hi}


def _need_file(args) -> str:
    if not args.input:
        raise UsageError("an input file is required")
    return args.input


# ---------------------------------------------------------------------------
# ident
# ---------------------------------------------------------------------------

def _ident_single(args):
    st = io.load_states(_need_file(args), ["alpha0", "alpha1"])
    p = ident.IdentPair(st["alpha0"], st["alpha1"], _eps(args))
    res = ident.d_eps_single(p, _opts(args))
    err = ident.conditional_error(res.measurement, p.states)
    slacks = ident.single_certificate_slacks(p.alpha0, p.alpha1, p.eps, res.certificate)
    gap = res.certificate.value - res.value
    checks = {
        "error_within_eps": err <= p.eps + 1e-9,
        "gap_within_tol": abs(gap) <= GAP_REPORT_TOL,
        "certificate_feasible": min(slacks) >= -CERT_TOL and res.certificate.z_b >= 0,
        "measurement_valid": res.measurement.is_valid(),
    }
    return {
        "value": res.value, "dual_value": res.certificate.value, "gap": gap,
        "conditional_error": err, "z_b": res.certificate.z_b,
        "certificate_slack_min_eigs": slacks,
        "measurement": _measurement_obj(res.measurement),
    }, checks


def _ident_quad(args):
    st = io.load_states(_need_file(args), ["alpha0", "alpha1", "beta0", "beta1"])
    q = ident.IdentQuad(st["alpha0"], st["alpha1"], st["beta0"], st["beta1"], _eps(args))
    res = ident.d_eps_quad(q, _opts(args))
    err = ident.conditional_error(res.measurement, q.states)
    slacks = ident.certificate_slacks(q.states, ident.QUAD_LABELS, ident.QUAD_LABELS, q.eps,
                                      res.certificate.X, res.certificate.z)
    gap = res.certificate.value - res.value
    checks = {
        "error_within_eps": err <= q.eps + 1e-9,
        "gap_within_tol": abs(gap) <= GAP_REPORT_TOL,
        "certificate_feasible": min(slacks) >= -CERT_TOL and res.certificate.z >= 0,
        "measurement_valid": res.measurement.is_valid(),
    }
    return {"value": res.value, "dual_value": res.certificate.value, "gap": gap,
            "conditional_error": err, "z": res.certificate.z,
            "certificate_slack_min_eigs": slacks}, checks


def _ident_parity(args):
    st = io.load_states(_need_file(args), ["alpha0", "alpha1", "beta0", "beta1"])
    q = ident.IdentQuad(st["alpha0"], st["alpha1"], st["beta0"], st["beta1"], _eps(args))
    res = ident.d_eps_parity(q, _opts(args))
    err = ident.conditional_error(res.measurement, q.states, ("0", "1", "1", "0"))
    return {"value": res.value, "conditional_error": err}, {
        "error_within_eps": err <= q.eps + 1e-9, "measurement_valid": res.measurement.is_valid()}


def _report_obj(r: ident.DirectProductReport) -> dict:
    return {"a_lower": r.a_lower, "b": r.b, "p": r.p, "bound": r.bound, "margin": r.margin,
            "satisfied": r.satisfied, **r.extras}


def _ident_direct_product(args):
    st = io.load_states(_need_file(args), ["alpha0", "alpha1", "beta0", "beta1"])
    q = ident.IdentQuad(st["alpha0"], st["alpha1"], st["beta0"], st["beta1"], _eps(args))
    try:
        ident._pure_pair(q)
        pure = True
    except linmat.InvalidStateError:
        pure = False
    r = ident.check_direct_product_pure(q, _opts(args)) if pure else ident.check_corollary_mixed(q, _opts(args))
    out = {"mode": "pure" if pure else "mixed", **_report_obj(r)}
    return out, {"bound_satisfied": r.p <= r.bound + 1e-6}


def _ident_dual_lift(args):
    st = io.load_states(_need_file(args), ["alpha0", "alpha1", "beta0", "beta1"])
    eps = _eps(args)
    try:
        a0, a1 = linmat.pure_vector(st["alpha0"]), linmat.pure_vector(st["alpha1"])
    except linmat.InvalidStateError as exc:
        raise UsageError("dual-lift needs pure alpha states") from exc
    cert = ident.dual_single(st["beta0"], st["beta1"], eps, _opts(args))
    lift = ident.dual_lift(a0, a1, st["beta0"], st["beta1"], eps, cert)
    out = {"z_b": cert.z_b, "trace_X_b": cert.value, "z": lift.z, "trace_X": lift.value,
           "trace_bound": lift.trace_bound, "slack_min_eigs": lift.slack_min_eigs}
    return out, {"slacks_nonnegative": min(lift.slack_min_eigs) >= -CERT_TOL,
                 "trace_within_bound": lift.value <= lift.trace_bound + CERT_TOL}


# ---------------------------------------------------------------------------
# classical / sdp
# ---------------------------------------------------------------------------

def _classical_solve(args):
    obj = io.read_json(_need_file(args))
    try:
        c = classical.ClassicalPair(obj["p"], obj["q"], _eps(args))
    except (KeyError, TypeError) as exc:
        raise io.InputError(f"classical input needs 'p' and 'q': {exc}") from exc
    a, m = classical.optimal_classical(c)
    lp = classical.lp_oracle(c, _opts(args, classical.LP_OPTIONS))
    err = classical.conditional_error_classical(c, m)
    return {"value": a, "lp_value": lp, "conditional_error": err,
            "guess": m.guess, "fraction": m.fraction}, {
        "greedy_equals_lp": abs(a - lp) <= 1e-9, "error_within_eps": err <= c.eps + 1e-12}


def _sdp_solve(args):
    p = io.load_problem(_need_file(args))
    sol = solve(p, _opts(args))
    return io.solution_to_obj(sol), {"optimal": sol.optimal}


# ---------------------------------------------------------------------------
# counterexamples and rac
# ---------------------------------------------------------------------------

def _delta(args) -> float:
    if args.delta is None or not 0.0 < args.delta < 1.0:
        raise UsageError("--delta in (0, 1) is required")
    return args.delta


def _counterexample_parity(args):
    d = _delta(args)
    eps = 0.49 if args.eps is None else _eps(args)
    r = ident.parity_counterexample(d, eps, _opts(args))
    probs = r.details["outcome0_probabilities"]
    d2 = d * d
    out = {"delta": d, "eps": eps, "a": r.a, "b": r.b, "parity_value": r.value,
           "explicit_mass": r.explicit_mass, "explicit_error": r.explicit_error, **r.details}
    checks = {
        "a_b_in_bracket": all(d2 / 2 <= v <= 3 * d2 for v in (r.a, r.b)),
        "parity_at_least_delta2_over_5": r.value >= d2 / 5,
        "product_16ab_at_most_150_delta4": 16 * r.a * r.b <= 150 * d2 * d2,
        "closed_forms_match": abs(probs[0] - r.details["closed_form_00"]) <= 1e-12
        and abs(probs[1] - r.details["closed_form_01"]) <= 1e-12,
    }
    return out, checks


def _counterexample_quarter(args):
    d = _delta(args)
    r = ident.quarter_counterexample(d, 0.49, 0.251 if args.eps is None else _eps(args), _opts(args))
    out = {"delta": d, "eps_joint": r.eps, "a": r.a, "b": r.b, "quad_value": r.value,
           "explicit_mass": r.explicit_mass, "explicit_error": r.explicit_error, **r.details}
    return out, {"quad_at_least_delta2_over_3": r.value >= d * d / 3,
                 "explicit_error_within_eps": r.explicit_error <= r.eps}


def _floats(s: str | None, name: str) -> list[float]:
    if not s:
        raise UsageError(f"--{name} is required")
    try:
        return [float(v) for v in s.split(",")]
    except ValueError as exc:
        raise UsageError(f"--{name} must be comma-separated numbers") from exc


def _rac_check(args):
    lams, epss = _floats(args.lam, "lam"), _floats(args.eps_list, "eps-list")
    if len(lams) != len(epss):
        raise UsageError("--lam and --eps-list need equal lengths")
    if args.q is None:
        raise UsageError("--q is required")
    preds = [smp.PredictorSpec(l, e) for l, e in zip(lams, epss)]
    lhs, ok = smp.rac_bound(preds, args.q)
    return {"lhs": lhs, "q": args.q, "terms": [p.lam * (1 - smp.binary_entropy(p.eps)) for p in preds]}, {
        "bound_satisfied": ok}


# ---------------------------------------------------------------------------
# protocol simulation
# ---------------------------------------------------------------------------

def _random_p1(n: int, rng) -> smp.P1Input:
    s = np.zeros(n, dtype=int)
    s[rng.permutation(n)[: n // 2]] = 1
    return smp.P1Input(n, rng.integers(0, 2, n), s, rng.integers(0, 2, n))


def _random_p2(n: int, rng) -> smp.P2Input:
    k = int(rng.integers(0, n // 2))
    return smp.P2Input(n, smp.gen_matching(k, n), rng.integers(0, 2, n // 2), rng.integers(0, 2, n))


def _load_or_random(args, loader, maker):
    """An input file, or a seeded random instance of size ``--n``."""
    if args.input:
        return loader(io.read_json(args.input)), None
    if args.n is None:
        raise UsageError("give an input file or --n")
    rng = _rng(args)
    return maker(args.n, rng), rng


def _trials(args) -> int:
    t = 1000 if args.trials is None else args.trials
    if t < 1:
        raise UsageError("--trials must be positive")
    return t


def _mc_check(rate: float, expected: float, trials: int, exact: bool) -> bool:
    if exact:
        return abs(rate - expected) <= 1e-12
    sigma = math.sqrt(expected * (1 - expected) / trials)
    return abs(rate - expected) <= 3 * sigma + 1e-12


def _sim_p1_pub(args):
    inp, rng = _load_or_random(args, io.p1_from_obj, _random_p1)
    r = args.reps or 1
    exact = args.exact or (not args.sample and inp.n ** r <= 1 << 16)
    expected = 1 - 2.0 ** -r
    if exact:
        rate, se = smp.p1_pub_exact(inp, r), 0.0
    else:
        rng = rng or _rng(args)
        rate, se = smp.estimate_success(smp.p1_pub_protocol, inp, _trials(args), rng, r=r)
    t = smp.p1_pub_protocol(inp, r, np.random.default_rng(0))
    out = {"input": io.p1_to_obj(inp), "reps": r, "mode": "exact" if exact else "sample",
           "success_rate": rate, "stderr": se, "expected": expected,
           "cost_bits": t.classical_bits, "cost_qubits": t.qubits}
    return out, {"matches_expected": _mc_check(rate, expected, _trials(args), exact)}


def _sim_p1_sqrt(args):
    inp, rng = _load_or_random(args, io.p1_from_obj, _random_p1)
    reps = args.reps or 1
    exact = args.exact or (not args.sample and inp.n <= 16)
    m = math.isqrt(inp.n)
    if m * m != inp.n:
        raise UsageError(f"n = {inp.n} is not a perfect square")
    if exact:
        rate, se = smp.p1_private_sqrt_exact(inp, reps), 0.0
    else:
        rng = rng or _rng(args)
        rate, se = smp.estimate_success(smp.p1_private_sqrt, inp, _trials(args), rng, reps=reps)
    t = smp.p1_private_sqrt(inp, reps, np.random.default_rng(0))
    expected = 1 - 2.0 ** -reps
    out = {"input": io.p1_to_obj(inp), "reps": reps, "mode": "exact" if exact else "sample",
           "success_rate": rate, "stderr": se, "expected": expected,
           "cost_bits": t.classical_bits, "cost_qubits": t.qubits}
    return out, {"matches_expected": _mc_check(rate, expected, _trials(args), exact)}


def _sim_p2_ent(args):
    inp, rng = _load_or_random(args, io.p2_from_obj, _random_p2)
    exact = args.exact or (not args.sample and inp.n <= 16)
    if exact:
        dist = smp.p2_entangled_exact(inp)
        rate, se = sum(p for o, p in dist.items() if smp.validate_p2(inp, o)), 0.0
        extra = {"support_size": len(dist), "total_probability": sum(dist.values())}
    else:
        rng = rng or _rng(args)
        rate, se = smp.estimate_success(smp.p2_entangled, inp, _trials(args), rng)
        extra = {}
    lg = max(1, math.ceil(math.log2(inp.n)))
    out = {"input": io.p2_to_obj(inp), "mode": "exact" if exact else "sample",
           "success_rate": rate, "stderr": se, "expected": 1.0,
           "cost_bits": 4 * lg + 1, "cost_qubits": 0, "epr_pairs": lg, **extra}
    return out, {"matches_expected": _mc_check(rate, 1.0, _trials(args), exact)}


def _sim_p2_sub(args):
    inp, rng = _load_or_random(args, io.p2_from_obj, _random_p2)
    rng = rng or _rng(args)
    n = inp.n
    s_size = args.s_size or max(2, round(n ** (2 / 3)))
    copies = args.copies or max(1, math.ceil(n ** (1 / 3)))
    if not 1 <= s_size <= n:
        raise UsageError(f"--s-size must lie in [1, {n}]")
    S = np.sort(rng.choice(n, size=s_size, replace=False))
    p_ng = smp.non_garbage_probability(inp, S)
    edges = len(smp.edges_inside(inp.matching, S))
    expected = smp.p2_sublinear_exact(inp, S, copies)
    exact = bool(args.exact)
    trials = _trials(args)
    if exact:
        rate, se = expected, 0.0
    else:
        run = lambda i, rng: smp.p2_sublinear(i, s_size, copies, rng, subset=S)  # noqa: E731
        rate, se = smp.estimate_success(run, inp, trials, rng)
    out = {"input": io.p2_to_obj(inp), "subset": [int(v) + 1 for v in S], "s_size": s_size,
           "copies": copies, "edges_inside": edges, "non_garbage_probability": p_ng,
           "non_garbage_formula": 2 * edges / s_size, "mode": "exact" if exact else "sample",
           "success_rate": rate, "stderr": se, "expected": expected}
    return out, {"non_garbage_matches_formula": abs(p_ng - 2 * edges / s_size) <= 1e-12,
                 "matches_expected": _mc_check(rate, expected, trials, exact)}


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

COMMANDS = {
    ("ident", "single"): _ident_single,
    ("ident", "quad"): _ident_quad,
    ("ident", "parity"): _ident_parity,
    ("ident", "direct-product"): _ident_direct_product,
    ("ident", "dual-lift"): _ident_dual_lift,
    ("classical", "solve"): _classical_solve,
    ("sdp", "solve"): _sdp_solve,
    ("sim", "p1-pub"): _sim_p1_pub,
    ("sim", "p1-sqrt"): _sim_p1_sqrt,
    ("sim", "p2-ent"): _sim_p2_ent,
    ("sim", "p2-sub"): _sim_p2_sub,
    ("counterexample", "parity"): _counterexample_parity,
    ("counterexample", "quarter"): _counterexample_quarter,
    ("rac", "check"): _rac_check,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="stateid", description="Bounded-error state identification toolkit.")
    ap.add_argument("group", choices=sorted({g for g, _ in COMMANDS}))
    ap.add_argument("action")
    ap.add_argument("input", nargs="?", help="input file (states, problem, or protocol input)")
    ap.add_argument("--eps", type=float)
    ap.add_argument("--delta", type=float)
    ap.add_argument("--n", type=int)
    ap.add_argument("--trials", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--exact", action="store_true")
    ap.add_argument("--sample", action="store_true", help="force sampling where exact is the default")
    ap.add_argument("--reps", type=int, help="repetitions for P1 protocols")
    ap.add_argument("--s-size", type=int)
    ap.add_argument("--copies", type=int)
    ap.add_argument("--lam", help="comma-separated answer probabilities")
    ap.add_argument("--eps-list", help="comma-separated conditional errors")
    ap.add_argument("--q", type=float, help="qubit budget for the RAC bound")
    ap.add_argument("--tol-gap", type=float)
    ap.add_argument("--tol-feas", type=float)
    ap.add_argument("--out")
    return ap


def _config(args) -> dict:
    keys = ("group", "action", "input", "eps", "delta", "n", "trials", "seed", "exact", "sample",
            "reps", "s_size", "copies", "lam", "eps_list", "q", "tol_gap", "tol_feas")
    return {k: getattr(args, k) for k in keys}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        fn = COMMANDS.get((args.group, args.action))
        if fn is None:
            raise UsageError(f"unknown command {args.group} {args.action}")
        if args.exact and args.sample:
            raise UsageError("--exact and --sample are exclusive")
        t0 = time.perf_counter()
        results, checks = fn(args)
        elapsed = time.perf_counter() - t0
    except (UsageError, io.InputError, linmat.LinmatError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except SdpError as exc:
        print(f"solver failure: {exc}", file=stderr)
        return EXIT_VIOLATION

    ok = all(checks.values())
    eff = _opts(args, classical.LP_OPTIONS if args.group == "classical" else ident.IDENT_OPTIONS)
    report = {
        "command": f"{args.group} {args.action}",
        "config": _config(args),
        "tolerances": {"gap_report": GAP_REPORT_TOL, "certificate": CERT_TOL,
                       "solver_gap": eff.gap_tol, "solver_feas": eff.feas_tol},
        "results": results,
        "checks": checks,
        "status": "ok" if ok else "violation",
        "timing": {"seconds": elapsed},
    }
    try:
        text = io.emit_report(report, args.out)
    except io.InputError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    if args.out is None:
        stdout.write(text)
    return EXIT_OK if ok else EXIT_VIOLATION


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
