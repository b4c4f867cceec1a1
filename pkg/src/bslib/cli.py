"""Batch command-line front door.

Subcommands: `eval` (single kernel/function values), `table` (CSV sweeps),
`verify` (module invariant suites), and `demo` (smoothing-bound and CLT
scenarios).  Every run emits its manifest beside the results; JSON output
uses the fixed key set {manifest, checks, bounds, measurements, verdicts,
runtime_ms} and CSV rows carry 17 significant digits.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

CONFIG_ENV_VAR = "BSLIB_CONFIG"

# smallest admissible values of the validity-critical constants; overrides
# below these require --unsafe since they can make reported bounds unsound
_CONSTANT_FLOORS = {
    "c1": 0.25, "c2": math.pi, "c5": None, "c6": math.pi,
    "c8": None, "c9": None, "c_hat1": None,
}


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _load_config() -> dict:
    path = os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return {}
    with open(path) as fh:
        return json.load(fh)


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seed: int | None
    tolerances: dict
    constant_overrides: dict
    output: str | None
    format: str

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "seed": self.seed,
            "tolerances": self.tolerances,
            "constant_overrides": self.constant_overrides,
            "output": self.output,
            "format": self.format,
        }


def _parse_overrides(pairs: list[str], unsafe: bool) -> dict:
    out = {}
    for pair in pairs or []:
        name, _, value = pair.partition("=")
        if name not in _CONSTANT_FLOORS or not value:
            raise SystemExit(EXIT_USAGE)
        v = float(value)
        floor = _CONSTANT_FLOORS[name]
        if floor is not None and v < floor and not unsafe:
            print(
                f"error: override {name}={v:g} is below the validity floor "
                f"{floor:g}; pass --unsafe to force it",
                file=sys.stderr,
            )
            raise SystemExit(EXIT_USAGE)
        out[name] = v
    return out


def _emit(payload: dict, out_path: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2, default=str)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# eval / table


_KERNEL_NAMES = ("K", "W", "B", "b", "S", "sigma", "Q", "lambda", "cardinal", "vaaler")


def _eval_one(fn: str, x: float, ell: float, tol: float) -> tuple[float, float]:
    from . import kernels as kr
    from . import interpolation as ip

    if fn == "K":
        return float(kr.fejer_K(x)), 1e-15
    if fn == "W":
        return kr.W_eval(x), tol
    if fn == "B":
        return kr.B_eval(x), tol
    if fn == "b":
        return kr.b_eval(x), tol
    if fn == "S":
        return kr.S_eval(ell, x), tol
    if fn == "sigma":
        return kr.sigma_eval(ell, x), tol
    if fn == "Q":
        return kr.Q_eval(x), 1e-14
    if fn == "lambda":
        return kr.lambda_constant(5e-8), 5e-8
    # sampling-formula demos reconstruct the unit quadratic kernel
    f = lambda t: float(kr.fejer_K(t))
    if fn == "cardinal":
        samples = ip.sample_function(f, 1.0, 400, 0.5, decay_const=1.0, decay_exponent=2.0)
        return ip.cardinal_series(samples, x)
    fprime = lambda t: (f(t + 1e-6) - f(t - 1e-6)) / 2e-6
    samples = ip.sample_function(f, 1.0, 400, 1.0, fprime, decay_const=1.0, decay_exponent=2.0)
    return ip.vaaler_interpolation(samples, x)


def cmd_eval(args, manifest: RunManifest) -> int:
    value, err = _eval_one(args.fn, args.x, args.ell, args.tol)
    payload = {
        "manifest": manifest.as_dict(),
        "checks": [],
        "bounds": [],
        "measurements": [
            {"name": args.fn, "x": args.x, "value": _fmt(value), "err_est": _fmt(err)}
        ],
        "verdicts": [],
        "runtime_ms": 0,
    }
    if args.format == "json":
        _emit(payload, args.out)
    else:
        lines = ["x,value,err_est", f"{_fmt(args.x)},{_fmt(value)},{_fmt(err)}"]
        _write_lines(lines, args.out)
    return EXIT_OK


def _write_lines(lines: list[str], out_path: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_table(args, manifest: RunManifest) -> int:
    lo, hi, step = args.frm, args.to, args.step
    if step <= 0 or hi < lo:
        return EXIT_USAGE
    xs = np.arange(lo, hi + step * 0.5, step)
    rows = []
    for x in xs:
        value, err = _eval_one(args.fn, float(x), args.ell, args.tol)
        rows.append((float(x), value, err))
    if args.format == "json":
        payload = {
            "manifest": manifest.as_dict(),
            "checks": [],
            "bounds": [],
            "measurements": [
                {"name": args.fn, "x": x, "value": _fmt(v), "err_est": _fmt(e)}
                for x, v, e in rows
            ],
            "verdicts": [],
            "runtime_ms": 0,
        }
        _emit(payload, args.out)
    else:
        lines = ["x,value,err_est"] + [f"{_fmt(x)},{_fmt(v)},{_fmt(e)}" for x, v, e in rows]
        _write_lines(lines, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify suites


def _check(name: str, residual: float, tol: float) -> dict:
    return {"name": name, "residual": _fmt(residual), "tol": _fmt(tol), "pass": residual <= tol}


def _flag(name: str, ok: bool, detail: float = 0.0) -> dict:
    return {"name": name, "residual": _fmt(detail), "tol": "condition", "pass": bool(ok)}


def _suite_kernels(tol: float) -> list[dict]:
    from . import kernels as kr

    checks = []
    lam = kr.lambda_constant(5e-8)
    checks.append(_check("lambda_constant", abs(lam - 0.3263598), 5e-8))
    checks.append(_check("W_half_closed_form", abs(kr.W_eval(0.5) - 8.0 / math.pi**2), tol))
    checks.append(_check("B_at_zero", abs(kr.B_eval(0.0) - 1.0), tol))
    checks.append(_check("b_at_zero", abs(kr.b_eval(0.0) + 1.0), tol))
    checks.append(_check("Q_at_zero", abs(kr.Q_eval(0.0) - 1.0 / math.pi), 1e-14))
    vs = np.linspace(0.0, 1.0, 101)
    worst = max(abs(kr.Q_eval(v) + kr.Q_eval(1.0 - v) - 1.0 / math.pi) for v in vs)
    checks.append(_check("Q_reflection_sum", worst, 1e-12))
    xs = np.linspace(-20, 20, 81)
    worst = max(abs(kr.W_eval(x) - kr.W_eval(x, mode="oracle")) for x in xs)
    checks.append(_check("W_fast_vs_oracle", worst, 1e-10))
    rng = np.random.default_rng(3)
    pts = rng.uniform(-40, 40, 4000)
    viol = sum(
        1
        for x in pts
        if not (kr.b_eval(x) - 1e-12 <= kr.sgn(x) <= kr.B_eval(x) + 1e-12)
    )
    checks.append(_check("majorant_sandwich_violations", float(viol), 0.0))
    worst = max(abs(kr.B_eval(x) - kr.sgn(x)) - 2.0 * float(kr.fejer_K(x)) for x in pts)
    checks.append(_check("distance_le_2K", max(worst, 0.0), 1e-12))
    val, _err = kr.fourier_W_check(0.5)
    checks.append(_check("fourier_side_W_half", abs(val - 8.0 / math.pi**2), 1e-8))
    return checks


def _suite_interpolation(tol: float) -> list[dict]:
    from . import interpolation as ip
    from . import kernels as kr

    checks = []
    for which, cap in [
        ("csc", 1e-8),
        ("fejer", 1e-8),
        ("poisson", 1e-12),
        ("parseval_sampling", 1e-8),
    ]:
        rep = ip.classical_identity_residual(which)
        checks.append(_check(f"identity_{which}", rep.residual, cap))
    for which in ("sandwich", "refined_sandwich", "bernstein"):
        rep = ip.classical_identity_residual(which)
        checks.append(_flag(f"identity_{which}", rep.ok))
    f = lambda t: float(kr.fejer_K(t))
    samples = ip.sample_function(f, 1.0, 300, 0.5, decay_const=1.0, decay_exponent=2.0)
    worst = 0.0
    for z in (0.3, -1.7, 2.25):
        val, err = ip.cardinal_series(samples, z)
        worst = max(worst, abs(val - f(z)) - err)
    checks.append(_check("cardinal_reconstruction", max(worst, 0.0), tol))
    fp = lambda t: (f(t + 1e-6) - f(t - 1e-6)) / 2e-6
    vd = ip.sample_function(f, 1.0, 300, 1.0, fp, decay_const=1.0, decay_exponent=2.0)
    val, err = ip.vaaler_interpolation(vd, 0.3)
    checks.append(_check("value_derivative_reconstruction", abs(val - f(0.3)), max(err, 1e-6)))
    return checks


def _suite_esseen1d(tol: float) -> list[dict]:
    from . import esseen1d as e1

    checks = []
    G = e1.normal_law()
    grid = np.linspace(-8, 8, 2001)
    for n in (25, 100):
        F = e1.standardized_binomial(n)
        rep = e1.best_esseen_bound(F, G)
        sup = e1.sup_cdf_distance(F.cdf, G.cdf, grid, F.atoms)
        checks.append(_flag(f"binomial_{n}_bound_dominates", rep.total >= sup, rep.total - sup))
    for which in ("B", "b"):
        res = e1.representation_residual(which, 0.3)
        checks.append(_check(f"fourier_representation_{which}", res, 1e-7))
    F = e1.point_mass(0.0)
    mol = e1.gaussian_mollify(F, 0.5)
    checks.append(_check("mollified_median", abs(mol.cdf(0.0) - 0.5), 1e-12))
    rows = e1.convergence_harness_1d(e1.irwin_hall_standardized, G, [2, 4, 8])
    mono = all(a.bound > b.bound for a, b in zip(rows, rows[1:]))
    checks.append(_flag("harness_bounds_decrease", mono))
    return checks


def _suite_esseen_k(tol: float) -> list[dict]:
    import itertools as it

    from . import esseen_multi as em
    from . import esseen1d as e1

    checks = []
    _, S, _ = em.selberg_ring_expansion(2)
    expected = {
        ("chi", "delta"): 1, ("delta", "chi"): 1, ("delta", "eps"): 1,
        ("eps", "delta"): 1, ("eps", "eps"): 1,
    }
    checks.append(_flag("ring_expansion_k2_monomials", dict(S) == expected))
    _, S3, _ = em.selberg_ring_expansion(3)
    checks.append(_flag("ring_expansion_k3_multiplicity", S3[("eps", "eps", "eps")] > 1))

    # operator identities in transform/coefficient form
    def word_residual(w1, w2):
        t1 = em.operator_terms(w1, 2)
        t2 = em.operator_terms(w2, 2) if w2 else {}
        keys = set(t1) | set(t2)
        return max((abs(t1.get(t, 0.0) - t2.get(t, 0.0)) for t in keys), default=0.0)

    worst = max(
        word_residual([("D", 0), ("E", 0)], None),
        word_residual([("D", 0), ("P", 0)], None),
        word_residual([("D", 0), ("Delta", 0)], [("D", 0)]),
        word_residual([("E", 0), ("P", 0)], [("P", 0)]),
        word_residual([("P", 0), ("Delta", 0)], None),
    )
    checks.append(_check("operator_identities", worst, 1e-12))
    tsum: dict = {}
    for w in ([("P", 0)], [("D", 0)], [("E", 0), ("Delta", 0)]):
        for t, c in em.operator_terms(w, 2).items():
            tsum[t] = tsum.get(t, 0.0) + c
    ident = em.operator_terms([], 2)
    resid = max(abs(tsum.get(t, 0.0) - ident.get(t, 0.0)) for t in set(tsum) | set(ident))
    checks.append(_check("operator_resolution_of_identity", resid, 1e-12))

    a = np.array([1.3, 0.7])
    f = lambda v: math.cos(float(a @ v) + 0.3)
    d2 = lambda v: -a[0] * a[1] * math.cos(float(a @ v) + 0.3)
    d4 = lambda v: a[0] ** 2 * a[1] ** 2 * math.cos(float(a @ v) + 0.3)
    v = np.array([0.7, -0.3])
    for which, dv in (("mixed", d2), ("delta", d2), ("e_delta", d4)):
        res = em.factorization_residual(f, dv, 2, which, v)
        checks.append(_check(f"factorization_{which}", res, 1e-8))

    g = lambda w: math.sin(1.1 * w[0] + 0.2) * math.sin(0.9 * w[1] - 0.4)
    bc = em.derivative_bound_check(g, {"which": "4.24", "h": 1, "ell": 2, "m": 2}, v)
    checks.append(_flag("difference_derivative_bound", bc.holds and not bc.inconclusive, bc.slack))

    F = em.product_law([e1.standardized_binomial(64)] * 2)
    G = em.product_normal_target(2)
    t = np.array([0.3, -0.4])
    rep = em.esseen_bound_k(F, G, (10.0, 10.0), t, panels=8, order=6)
    meas = abs(F.cdf(t) - G.cdf(t))
    checks.append(_flag("k2_partition_bound_dominates", rep.total >= meas, rep.total - meas))
    repA = em.esseen_bound_truncated(F, G, (10.0, 10.0), delta=8.0, mode="A", panels=8, order=6)
    side = np.linspace(-3, 3, 9)
    sup = max(abs(F.cdf(np.array(p)) - G.cdf(np.array(p))) for p in it.product(side, side))
    checks.append(_flag("k2_truncated_bound_dominates", repA.total >= sup, repA.total - sup))
    return checks


def _suite_clt(tol: float) -> list[dict]:
    from . import clt

    checks = []
    cases = [
        ("5.1", dict(t=math.pi, n=0)),
        ("5.1bis", dict(t=10.0, n=3)),
        ("5.2", dict(z=0.3)),
        ("5.3", dict(x=[1, 1], lam=2)),
        ("5.4", dict(x=[1, 2, 3])),
        ("5.5", dict(t=2.0, n=2, omega=0.5)),
        ("5.15", dict(w=[1 + 1j, -2, 0.3], lam=3)),
        ("5.19", dict(n=2, beta=1.0, q=3.0)),
        ("5.20", dict(t=[0.5, 2, 3], n=2, psi=0.7)),
    ]
    for ineq_id, kw in cases:
        r = clt.inequality_toolbox(ineq_id, **kw)
        checks.append(_flag(f"inequality_{ineq_id}", r.holds, r.slack))
    checks.append(_check("J0_first_zero", abs(clt.bessel_j0(2.404825557695773)), 1e-10))
    law = clt.haar_circle_law()
    worst_gap = 0.0
    ok = True
    for xi in (1.0, 0.5 + 0.5j, -0.9j):
        g = clt.gaussian_limit_gap(law, clt.constant_scheme(), 400, xi)
        ok = ok and g.admissible and g.holds
        worst_gap = max(worst_gap, g.gap)
    checks.append(_flag("gap_dominance_N400", ok, worst_gap))
    st = clt.lyapunov_normalizer(clt.alternating_vector_scheme(2), 400)
    checks.append(_check("vector_normalization_residual", st.matrix_residual, 1e-12))
    # phase invariance of the scalar normalizer
    rng = np.random.default_rng(5)
    phases = np.exp(1j * rng.uniform(0, 2 * math.pi, 50))
    base = clt.CoefficientScheme("scalar", lambda N: np.arange(1, N + 1, dtype=complex))
    twist = clt.CoefficientScheme("scalar", lambda N: phases[:N] * np.arange(1, N + 1))
    s0, s1 = clt.lyapunov_normalizer(base, 50), clt.lyapunov_normalizer(twist, 50)
    resid = max(
        abs(s0.scale - s1.scale), abs(s0.lyapunov_sum - s1.lyapunov_sum),
        abs(s0.max_ratio - s1.max_ratio),
    )
    checks.append(_check("phase_invariance", resid, 1e-12))
    return checks


_SUITES = {
    "kernels": _suite_kernels,
    "interpolation": _suite_interpolation,
    "esseen1d": _suite_esseen1d,
    "esseen_k": _suite_esseen_k,
    "clt": _suite_clt,
}


def cmd_verify(args, manifest: RunManifest) -> int:
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    t0 = time.monotonic()
    checks = []
    for name in names:
        for entry in _SUITES[name](args.tol):
            entry["suite"] = name
            checks.append(entry)
    payload = {
        "manifest": manifest.as_dict(),
        "checks": checks,
        "bounds": [],
        "measurements": [],
        "verdicts": [
            {"name": "all_checks_pass", "pass": all(c["pass"] for c in checks)},
        ],
        "runtime_ms": int((time.monotonic() - t0) * 1000),
    }
    _emit(payload, args.out)
    return EXIT_OK if all(c["pass"] for c in checks) else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# demo scenarios


def _demo_esseen1d_binomial(args) -> tuple[list, list, list]:
    from . import esseen1d as e1

    n = args.n or 100
    omega = args.omega or 20.0
    ov = getattr(args, "_overrides", {})
    constants = (ov.get("c1", e1.C1_DEFAULT), ov.get("c2", e1.C2_DEFAULT))
    F = e1.standardized_binomial(n)
    G = e1.normal_law()
    rep = e1.esseen_bound_1d(F, G, omega, constants=constants)
    sup = e1.sup_cdf_distance(F.cdf, G.cdf, np.linspace(-8, 8, 2001), F.atoms)
    bounds = [{"name": "smoothing_bound", "omega": omega, "value": _fmt(rep.total)}]
    meas = [{"name": "sup_cdf_distance", "value": _fmt(sup)}]
    verdicts = [{"name": "bound_dominates", "pass": rep.total >= sup}]
    return bounds, meas, verdicts


def _demo_esseen_k(args) -> tuple[list, list, list]:
    from . import esseen1d as e1
    from . import esseen_multi as em

    k = args.k or 2
    if k < 1 or k > 3:
        raise SystemExit(EXIT_USAGE)
    omega = args.omega or 12.0
    n = args.n or 64
    if k == 1:
        F1 = e1.standardized_binomial(n)
        G1 = e1.normal_law()
        rep1 = e1.esseen_bound_1d(F1, G1, omega)
        sup = e1.sup_cdf_distance(F1.cdf, G1.cdf, np.linspace(-8, 8, 2001), F1.atoms)
        bounds = [{"name": "smoothing_bound", "omega": omega, "value": _fmt(rep1.total)}]
        meas = [{"name": "sup_cdf_distance", "value": _fmt(sup)}]
        return bounds, meas, [{"name": "bound_dominates", "pass": rep1.total >= sup}]
    F = em.product_law([e1.standardized_binomial(n)] * k)
    G = em.product_normal_target(k)
    ov = getattr(args, "_overrides", {})
    base = em.BoundConstants.for_k(k).as_dict()
    # k-dependent floors can only be checked here, once k is known
    if not getattr(args, "unsafe", False):
        low = [key for key, val in ov.items() if key in base and val < base[key]]
        if low:
            print(f"error: overrides below validity floor for k={k}: {low}; "
                  "pass --unsafe to force them", file=sys.stderr)
            raise SystemExit(EXIT_USAGE)
    base.update({key: val for key, val in ov.items() if key in base})
    constants = em.BoundConstants(**base)
    t = np.array([0.3, -0.4, 0.2][:k])
    rep = em.esseen_bound_k(F, G, (omega,) * k, t, constants=constants,
                            panels=8 if k == 2 else 6, order=6 if k == 2 else 4)
    meas_t = abs(F.cdf(t) - G.cdf(t))
    delta = args.delta or 8.0
    repA = em.esseen_bound_truncated(F, G, (omega,) * k, delta=delta, mode="A",
                                     constants=constants,
                                     panels=8 if k == 2 else 6, order=6 if k == 2 else 4)
    bounds = [
        {"name": "partition_bound", "t": [float(x) for x in t], "value": _fmt(rep.total)},
        {"name": "truncated_bound_A", "delta": delta, "value": _fmt(repA.total)},
    ]
    meas = [{"name": "pointwise_discrepancy", "value": _fmt(meas_t)}]
    verdicts = [
        {"name": "partition_bound_dominates", "pass": rep.total >= meas_t},
        {"name": "truncated_bound_dominates", "pass": repA.total >= meas_t},
    ]
    return bounds, meas, verdicts


def _demo_clt_haar(args) -> tuple[list, list, list]:
    from . import clt

    N = args.N or 400
    samples = args.samples or 10**5
    seed = args.seed if args.seed is not None else 7
    law = clt.haar_circle_law()
    g = clt.gaussian_limit_gap(law, clt.constant_scheme(), N, 1.0)
    mc = clt.MonteCarloConfig(seed=seed, samples=samples, N=N)
    rep = clt.vector_statistic(law, clt.constant_scheme(), N, mc)
    bounds = [{"name": "log_cf_gap_bound", "value": _fmt(g.proof_bound)}]
    meas = [
        {"name": "log_cf_gap", "value": _fmt(g.gap)},
        {"name": "ks_real", "value": _fmt(rep.ks_real[0])},
        {"name": "ks_imag", "value": _fmt(rep.ks_imag[0])},
    ]
    verdicts = [
        {"name": "gap_le_bound", "pass": g.admissible and g.holds},
        {"name": "ks_small", "pass": max(rep.ks_real[0], rep.ks_imag[0]) <= 0.01},
    ]
    return bounds, meas, verdicts


def _demo_clt_vector(args) -> tuple[list, list, list]:
    from . import clt

    N = args.N or 400
    seed = args.seed if args.seed is not None else 11
    law = clt.haar_circle_law()
    scheme = clt.alternating_vector_scheme(2)
    stats = clt.lyapunov_normalizer(scheme, N)
    g = clt.gaussian_limit_gap(law, scheme, N, np.array([1.0, 0.5 + 0.2j]), A=1.2)
    mc = clt.MonteCarloConfig(seed=seed, samples=max(args.samples or 2 * 10**4, 10**3), N=N)
    rep = clt.vector_statistic(law, scheme, N, mc)
    bounds = [{"name": "log_cf_gap_bound", "value": _fmt(g.proof_bound)}]
    meas = [
        {"name": "normalization_residual", "value": _fmt(stats.matrix_residual)},
        {"name": "log_cf_gap", "value": _fmt(g.gap)},
        {"name": "worst_ks", "value": _fmt(max(max(rep.ks_real), max(rep.ks_imag)))},
    ]
    verdicts = [
        {"name": "gap_le_bound", "pass": g.admissible and g.holds},
        {"name": "ks_small", "pass": max(max(rep.ks_real), max(rep.ks_imag)) <= 0.02},
    ]
    return bounds, meas, verdicts


_SCENARIOS = {
    "esseen1d-binomial": _demo_esseen1d_binomial,
    "esseen-k": _demo_esseen_k,
    "clt-haar": _demo_clt_haar,
    "clt-vector": _demo_clt_vector,
}


def cmd_demo(args, manifest: RunManifest) -> int:
    t0 = time.monotonic()
    args._overrides = manifest.constant_overrides
    bounds, meas, verdicts = _SCENARIOS[args.scenario](args)
    payload = {
        "manifest": manifest.as_dict(),
        "checks": [],
        "bounds": bounds,
        "measurements": meas,
        "verdicts": verdicts,
        "runtime_ms": int((time.monotonic() - t0) * 1000),
    }
    _emit(payload, args.out)
    return EXIT_OK if all(v["pass"] for v in verdicts) else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bslib", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=("csv", "json"), default=None)
        sp.add_argument("--const", action="append", default=[], metavar="NAME=VALUE")
        sp.add_argument("--unsafe", action="store_true")

    pe = sub.add_parser("eval", help="evaluate one kernel/function at a point")
    pe.add_argument("--fn", "--kernel", dest="fn", choices=_KERNEL_NAMES, required=True)
    pe.add_argument("--x", type=float, default=0.0)
    pe.add_argument("--ell", type=float, default=1.0)
    common(pe)

    pt = sub.add_parser("table", help="tabulate a kernel/function over a range")
    pt.add_argument("--fn", "--kernel", dest="fn", choices=_KERNEL_NAMES, required=True)
    pt.add_argument("--from", dest="frm", type=float, required=True)
    pt.add_argument("--to", dest="to", type=float, required=True)
    pt.add_argument("--step", type=float, required=True)
    pt.add_argument("--ell", type=float, default=1.0)
    common(pt)

    pv = sub.add_parser("verify", help="run a module invariant suite")
    pv.add_argument("--suite", choices=tuple(_SUITES) + ("all",), required=True)
    common(pv)

    pd = sub.add_parser("demo", help="run a bound-vs-measurement scenario")
    pd.add_argument("--scenario", choices=tuple(_SCENARIOS), required=True)
    pd.add_argument("--n", type=int, default=None)
    pd.add_argument("--N", type=int, default=None)
    pd.add_argument("--k", type=int, default=None)
    pd.add_argument("--omega", type=float, default=None)
    pd.add_argument("--delta", type=float, default=None)
    pd.add_argument("--samples", type=int, default=None)
    common(pd)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0

    config = _load_config()
    if args.tol is None:
        args.tol = float(config.get("tol", 1e-10))
    if args.seed is None and config.get("seed") is not None:
        args.seed = int(config["seed"])
    if args.format is None:
        args.format = config.get("format", "json" if args.command in ("verify", "demo") else "csv")

    try:
        overrides = _parse_overrides(args.const, args.unsafe)
    except SystemExit as exc:
        return exc.code

    params = {
        k: v
        for k, v in vars(args).items()
        if k not in ("command", "seed", "tol", "out", "format", "const", "unsafe")
        and v is not None
    }
    manifest = RunManifest(
        command=args.command,
        parameters=params,
        seed=args.seed,
        tolerances={"tol": args.tol},
        constant_overrides=overrides,
        output=args.out,
        format=args.format,
    )
    handler = {"eval": cmd_eval, "table": cmd_table, "verify": cmd_verify, "demo": cmd_demo}
    try:
        return handler[args.command](args, manifest)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (ValueError, ArithmeticError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
