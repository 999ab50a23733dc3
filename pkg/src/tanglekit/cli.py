"""Command-line front door.

Every run emits a single report (JSON with --json, aligned text otherwise)
whose numeric outputs carry a provenance label: exact (dense linear algebra),
sampled (finite-shot simulation), formula (printed first-order expressions),
or oracle (numerical estimation).  With --deterministic the report is
byte-identical across runs for identical argv and seed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

import numpy as np

from .errors import TanglekitError
from . import correlators as corr
from . import noise as noise_mod
from . import roof as roof_mod
from .invariants import concurrence, filter_value, n_tangle, three_tangle
from .qubits import parse_pauli_label, white_noise_mix
from .stateio import load_density_matrix, load_filter_spec, load_state


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return "sha256:" + h.hexdigest()


def _parse_grid(text: str) -> list[float]:
    try:
        a, b, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise TanglekitError(f"--eps-grid expects a:b:step, got {text!r}")
    if step <= 0 or b < a:
        raise TanglekitError(f"--eps-grid needs step > 0 and b >= a, got {text!r}")
    n = int(round((b - a) / step))
    return [round(a + k * step, 12) for k in range(n + 1)]


class Report:
    def __init__(self, command: str, seed=None):
        self.doc = {"command": command, "inputs": {"files": {}, "flags": {}},
                    "outputs": {}, "seed": seed, "duration_s": None}
        self._t0 = time.monotonic()

    def add_file(self, path):
        if path:
            self.doc["inputs"]["files"][str(path)] = _sha256(path)

    def add_flags(self, **flags):
        self.doc["inputs"]["flags"].update(
            {k: v for k, v in flags.items() if v is not None})

    def add_output(self, name, value, provenance, **extra):
        out = {"value": value, "provenance": provenance}
        out.update(extra)
        self.doc["outputs"][name] = out

    def finish(self, deterministic: bool) -> dict:
        self.doc["duration_s"] = 0.0 if deterministic else round(
            time.monotonic() - self._t0, 6)
        return self.doc


def _emit(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, sort_keys=True, indent=2))
        return
    print(f"command: {report['command']}")
    for name in sorted(report["outputs"]):
        out = report["outputs"][name]
        extras = {k: v for k, v in out.items() if k not in ("value", "provenance")}
        tail = "".join(f"  {k}={v}" for k, v in sorted(extras.items()))
        print(f"  {name:24s} = {out['value']!r:24s} [{out['provenance']}]{tail}")
    print(f"duration_s: {report['duration_s']}")


def _load_strings(arg: str, n: int):
    if arg == "all":
        return corr.all_pauli_strings(n)
    with open(arg) as fh:
        return [parse_pauli_label(ln.strip()) for ln in fh if ln.strip()]


def cmd_invariants(args, report: Report):
    state = load_state(args.state)
    report.add_file(args.state)
    if args.filter:
        report.add_file(args.filter)
        spec = load_filter_spec(args.filter)
        val = filter_value(state, spec)
        report.add_output("filter_value_re", val.real, "exact")
        report.add_output("filter_value_im", val.imag, "exact")
        report.add_output("filter_value_modulus", abs(val), "exact")
    which = args.which or ("tau3" if state.n_qubits == 3 else "c2")
    if which == "tau3":
        report.add_output("tau3", three_tangle(state), "exact")
    elif which == "c2":
        report.add_output("c2", concurrence(state) ** 2, "exact")
    elif which == "ntangle":
        report.add_output("ntangle", n_tangle(state), "exact")


def cmd_correlators(args, report: Report):
    if args.state:
        obj = load_state(args.state)
        report.add_file(args.state)
    else:
        obj = load_density_matrix(args.rho)
        report.add_file(args.rho)
    strings = _load_strings(args.strings, obj.n_qubits)
    if args.strings != "all":
        report.add_file(args.strings)
    table = corr.exact_correlators(obj, strings)
    if args.out:
        corr.write_table_csv(args.out, table)
        report.add_output("table_file", str(args.out), "exact")
    report.add_output("n_strings", len(table.entries), "exact")
    for s in sorted(table.entries):
        report.add_output(f"corr_{corr.pauli_label(s)}", table.entries[s].value, "exact")


def cmd_simulate(args, report: Report):
    state = load_state(args.state)
    report.add_file(args.state)
    rho = white_noise_mix(state, args.eps)
    table = corr.sample_correlator_table(rho, args.shots, args.seed)
    which = {"c2": "c2", "tau3": "tau3_sq"}[args.which]
    est = corr.invariant_from_table(table, which)
    if args.out:
        corr.write_table_csv(args.out, table)
        report.add_output("table_file", str(args.out), "sampled")
    report.add_output(est.name, est.value, "sampled",
                      stderr=est.stderr, shots_per_setting=est.shots_per_setting)


def cmd_noise_curve(args, report: Report):
    state = load_state(args.state)
    report.add_file(args.state)
    grid = _parse_grid(args.eps_grid)
    rows = noise_mod.noise_curve(state, args.which, grid, variant=args.variant)
    if args.out:
        noise_mod.write_noise_curve_csv(args.out, rows)
        report.add_output("curve_file", str(args.out), "formula")
    oracle = noise_mod.first_order_oracle(state, args.which)
    report.add_output("variant_id", rows[0]["variant_id"], "formula")
    report.add_output("slope_numeric", oracle.slope_numeric, "oracle")
    report.add_output("matched_variant", oracle.matched_variant or "none", "oracle")
    report.add_output("n_grid_points", len(rows), "formula")
    report.add_output("value_at_zero", oracle.value_at_zero, "exact")


def cmd_roof(args, report: Report):
    if args.rho:
        report.add_file(args.rho)
    if args.eps_grid:
        grid = _parse_grid(args.eps_grid)
        if args.rho:
            raise TanglekitError("--eps-grid scans a --family, not a --rho file")
        rows = roof_mod.vanish_threshold_scan(args.family, grid, args.m,
                                              args.restarts, args.seed)
        if args.out:
            roof_mod.write_roof_scan_csv(args.out, rows, args.restarts, args.m)
            report.add_output("scan_file", str(args.out), "oracle")
        thr = roof_mod.vanish_threshold(rows)
        report.add_output("threshold_eps", thr if thr is not None else "none", "oracle")
        for eps, bound in rows:
            report.add_output(f"bound_at_{eps}", bound, "oracle")
        return
    if args.rho:
        rho = load_density_matrix(args.rho)
    elif args.family == "ghzw":
        rho = roof_mod.ghzw_mixture(args.eps)
    elif args.family == "white_noise":
        from .qubits import ghz_state
        rho = white_noise_mix(ghz_state(3), args.eps)
    else:
        raise TanglekitError("roof needs --rho FILE or --family with --eps/--eps-grid")
    res = roof_mod.roof_upper_bound(rho, args.m, args.restarts, args.seed)
    report.add_output("upper_bound", res.upper_bound, "oracle",
                      restarts_used=res.restarts_used, converged=res.converged)


def run_selftest(fast: bool = False) -> list[tuple[str, bool, str]]:
    """Quick property suites over all modules; returns (name, ok, detail)."""
    from .invariants import (comb_value_double, comb_value_single,
                             concurrence_polynomial, tangle_polynomial)
    from .qubits import (LocalKind, apply_local, bell_phi_plus, expectation,
                         ghz_state, pauli_operator, random_state,
                         sample_local_group, w_state)
    from . import lift

    results = []
    n_states = 200 if fast else 1000
    n_equiv = 20 if fast else 50

    worst = 0.0
    for seed in range(n_states):
        phi = random_state(1, seed)
        worst = max(worst, abs(comb_value_single(phi)), abs(comb_value_double(phi)))
    results.append(("comb_nullity", worst <= 1e-12, f"max |comb| = {worst:.2e}"))

    worst = 0.0
    for seed in range(20):
        s = tuple(np.random.default_rng(seed).integers(0, 4, size=3))
        p = pauli_operator(s)
        worst = max(worst, float(np.max(np.abs(p @ p - np.eye(8)))))
    results.append(("pauli_involution", worst <= 1e-12, f"max |P^2 - 1| = {worst:.2e}"))

    worst_c, worst_t = 0.0, 0.0
    for seed in range(n_equiv):
        phi = random_state(2, seed)
        t2 = corr.exact_correlators(phi).to_array()
        worst_c = max(worst_c, abs(lift.concurrence_sq_linear(t2) - concurrence(phi) ** 2))
        chi = random_state(3, seed)
        t3 = corr.exact_correlators(chi).to_array()
        for form in ("mixed_form", "pure_G_form"):
            worst_t = max(worst_t, abs(lift.tau3_sq_linear(t3, form) - three_tangle(chi) ** 2))
    ok = worst_c <= 1e-8 and worst_t <= 1e-8
    results.append(("linear_equivalence", ok, f"c2 diff {worst_c:.2e}, tau3 diff {worst_t:.2e}"))

    ghz, w, bell = ghz_state(3), w_state(), bell_phi_plus()
    refs = (abs(three_tangle(ghz) - 1) <= 1e-10 and three_tangle(w) <= 1e-10
            and abs(concurrence(bell) - 1) <= 1e-10
            and abs(n_tangle(bell) - concurrence(bell) ** 2) <= 1e-12)
    results.append(("reference_values", refs, "GHZ/W/Bell invariants"))

    worst = 0.0
    for seed in range(10 if fast else 25):
        chi = random_state(3, seed)
        ops = [sample_local_group(LocalKind.SL2C, 3 * seed + k + 10_000) for k in range(3)]
        p0, p1 = tangle_polynomial(chi), tangle_polynomial(apply_local(chi, ops))
        worst = max(worst, abs(p1 - p0) / max(abs(p0), 1e-3))
    results.append(("sl_invariance", worst <= 1e-8, f"max rel change = {worst:.2e}"))

    anchors = (abs(noise_mod.threshold_epsilon(noise_mod.NoiseScenario(2, 1.0)) - 0.5) == 0
               and noise_mod.deviation_bound(1.0, noise_mod.NoiseScenario(2, 1.0), 0.04) == -1.0
               and abs(noise_mod.ghzw_constants()[0] - 0.7087) < 5e-4)
    results.append(("noise_anchors", anchors, "threshold/deviation/constants"))

    v1 = corr.sample_correlator(white_noise_mix(ghz, 0.2), (3, 0, 0), 4096, 7)
    v2 = corr.sample_correlator(white_noise_mix(ghz, 0.2), (3, 0, 0), 4096, 7)
    results.append(("sampling_determinism", v1 == v2, f"value = {v1[0]:.4f}"))

    res = roof_mod.roof_upper_bound(ghz.projector(), m=2, restarts=2, seed=1)
    ok = abs(res.upper_bound - 1.0) <= 1e-6
    results.append(("roof_rank1", ok, f"bound = {res.upper_bound:.8f}"))
    return results


def cmd_selftest(args, report: Report):
    results = run_selftest(fast=args.fast)
    all_ok = True
    for name, ok, detail in results:
        report.add_output(name, "PASS" if ok else "FAIL", "oracle", detail=detail)
        all_ok = all_ok and ok
    if not all_ok:
        raise TanglekitError("selftest failed: "
                             + ", ".join(n for n, ok, _ in results if not ok))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tanglekit",
                                description="Entanglement invariants of few-qubit "
                                            "states and their measurement simulation")
    p.add_argument("--json", action="store_true", help="emit the report as JSON")
    p.add_argument("--deterministic", action="store_true",
                   help="suppress timing so reports are byte-identical")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("invariants", help="exact invariants of a pure state")
    sp.add_argument("--state", required=True)
    sp.add_argument("--which", choices=["c2", "tau3", "ntangle"])
    sp.add_argument("--filter", help="JSON filter spec to evaluate")
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("correlators", help="exact correlator table")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--state")
    g.add_argument("--rho")
    sp.add_argument("--strings", default="all", help="'all' or a file of Pauli labels")
    sp.add_argument("--out", help="write the table CSV here")
    sp.set_defaults(func=cmd_correlators)

    sp = sub.add_parser("simulate", help="finite-shot invariant estimate")
    sp.add_argument("--state", required=True)
    sp.add_argument("--which", "--invariant", dest="which", required=True,
                    choices=["c2", "tau3"])
    sp.add_argument("--shots", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--eps", type=float, default=0.0, help="white-noise fraction")
    sp.add_argument("--out", help="write the sampled table CSV here")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("noise-curve", help="formula vs exact contraction under white noise")
    sp.add_argument("--state", required=True)
    sp.add_argument("--which", required=True, choices=["c2", "tau3"])
    sp.add_argument("--eps-grid", required=True, help="a:b:step")
    sp.add_argument("--variant", default="auto")
    sp.add_argument("--out", help="write the curve CSV here")
    sp.set_defaults(func=cmd_noise_curve)

    sp = sub.add_parser("roof", help="convex-roof upper bound")
    sp.add_argument("--rho")
    sp.add_argument("--family", choices=["ghzw", "white_noise"])
    sp.add_argument("--eps", type=float, default=0.0)
    sp.add_argument("--eps-grid", help="a:b:step scan over the family")
    sp.add_argument("--m", type=int, default=4)
    sp.add_argument("--restarts", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="write the scan CSV here")
    sp.set_defaults(func=cmd_roof)

    sp = sub.add_parser("selftest", help="run the module property suites")
    sp.add_argument("--fast", action="store_true")
    sp.set_defaults(func=cmd_selftest)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    report = Report(args.command, seed=getattr(args, "seed", None))
    flags = {k: v for k, v in vars(args).items()
             if k not in ("func", "command", "json", "deterministic")}
    report.add_flags(**flags)
    try:
        args.func(args, report)
    except TanglekitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        _emit(report.finish(args.deterministic), args.json)
        return 1
    _emit(report.finish(args.deterministic), args.json)
    return 0


def main() -> None:
    sys.exit(run())
