"""Command-line front end.

Subcommands: invariants, region-scan, evolve, chsh, bell, verify.  Output
is CSV (RFC 4180, stable column order) or a single JSON document; all
randomised commands are deterministic for a fixed --seed.

Exit codes: 0 success, 2 infeasible input or validation failure, 3 solver
failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import dynamics, entanglement, invariants, oracle, states, vectorsum
from .algebra import Multivector, exp_i

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3
EXIT_IO = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def load_state(path: str) -> np.ndarray:
    """Read a JSON state file {n_qubits, amplitudes: [[re, im], ...]}.

    Amplitudes are row-major in the computational basis with qubit a as
    the most significant bit.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise CliError(f"cannot read state file {path}: {e}", EXIT_IO) from e
    try:
        n = int(doc["n_qubits"])
        amps = np.array([complex(re, im) for re, im in doc["amplitudes"]])
    except (KeyError, TypeError, ValueError) as e:
        raise CliError(f"malformed state file {path}: {e}", EXIT_VALIDATION) from e
    if amps.size != 1 << n:
        raise CliError(
            f"state file {path}: {amps.size} amplitudes for n_qubits={n}",
            EXIT_VALIDATION,
        )
    nrm = np.linalg.norm(amps)
    if abs(nrm - 1.0) > 1e-9:
        raise CliError(f"state file {path}: norm {nrm} differs from 1", EXIT_VALIDATION)
    return amps / nrm


def save_state(path: str, amps) -> None:
    amps = np.asarray(amps, dtype=complex).ravel()
    n = amps.size.bit_length() - 1
    doc = {"n_qubits": n, "amplitudes": [[float(a.real), float(a.imag)] for a in amps]}
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f)


def emit(args, rows: list[dict], meta: dict) -> None:
    """Write rows as CSV or one JSON document to --out or stdout."""
    if args.format == "json":
        text = json.dumps({"command": meta["command"], "params": meta.get("params", {}), "rows": rows})
    else:
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        text = buf.getvalue()
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as f:
                f.write(text)
        except OSError as e:
            raise CliError(f"cannot write {args.out}: {e}", EXIT_IO) from e
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _fmt(x: float) -> float:
    return float(f"{x:.12g}")


# -- invariants -------------------------------------------------------------


def cmd_invariants(args) -> int:
    amps = load_state(args.state)
    n = amps.size.bit_length() - 1
    if n not in (2, 3):
        raise CliError(f"invariants needs a 2- or 3-qubit state, got n={n}", EXIT_VALIDATION)
    rho = states.pure_state_from_amplitudes(amps)
    rows: list[dict] = []

    def put(name: str, value) -> None:
        rows.append({"quantity": name, "value": _fmt(value)})

    if n == 2:
        v = invariants.invariants_2q(rho)
        put("v", v)
        put("concurrence", entanglement.concurrence_2q(rho))
        put("entropy", entanglement.entanglement_entropy(rho))
        emit(args, rows, {"command": "invariants", "params": {"state": args.state}})
        return EXIT_OK

    mv8 = rho.mv * 8.0
    lens = [float(np.linalg.norm(mv8.vector_part(q))) for q in range(3)]
    for name, v in zip("abc", lens):
        put(f"v_{name}", v)
    tau2 = invariants.three_tangle_oracle(amps)
    put("three_tangle_sq_oracle", tau2)
    degenerate = min(lens) <= invariants.DEGENERATE_V
    put("degenerate", float(degenerate))
    if degenerate:
        emit(args, rows, {"command": "invariants", "params": {"state": args.state}})
        return EXIT_OK

    inv = invariants.invariants_3q(rho)
    put("vbar2", inv.vbar2)
    put("vbar3", inv.vbar3)
    sud = invariants.sudbery(inv)
    for name, value in zip(("I2", "I3", "I4", "I5", "I6"), sud):
        put(name, value)
    put("i6_minus_oracle", sud.i6 - tau2)
    report = invariants.feasibility(inv, slack=1e-9)
    put("feasible", float(report.feasible))
    put("B", invariants.B_function(inv))
    solutions = vectorsum.solve(vectorsum.vector_lengths(invariants.expansion_probabilities(inv)))
    for i, sol in enumerate(solutions):
        for field, value in zip(
            ("phi_ab", "phi_ab_prime", "phi_ac", "phi_ac_prime", "phi_bc", "phi_bc_prime"),
            sol.as_tuple(),
        ):
            put(f"angles[{i}].{field}", value)
    emit(args, rows, {"command": "invariants", "params": {"state": args.state}})
    if report.feasible and not solutions:
        return EXIT_SOLVER
    return EXIT_OK


# -- region scan ------------------------------------------------------------


def _markers(va: float, vb: float, vc: float) -> list[tuple[str, float, float]]:
    vmin = min(va, vb, vc)
    vsum = va + vb + vc
    g = va * vb * vc
    out = [("A_seed", g, g)]
    if vsum <= 1.0 + 1e-12:
        out.append(("B_min_tangle", -g, -g))
    else:
        out.append(("B_min_tangle", *invariants.zero_tangle_point(va, vb, vc)))
    if vmin * vmin >= g - 1e-12:
        out.append(("C_max_tangle", vmin * vmin, invariants.inv_gamma_ratio(va, vb, vc)))
    return out


def _point_row(kind: str, label: str, va: float, vb: float, vc: float, v2: float, v3: float) -> dict:
    inv = invariants.InvariantSet3Q(va, vb, vc, v2, v3)
    probs = invariants.expansion_probabilities(inv)
    p_ok = bool(probs.min() >= -1e-10)
    b_val = invariants.B_function(inv)
    b_ok = bool(b_val <= 1e-10)
    return {
        "kind": kind,
        "label": label,
        "vbar2": _fmt(v2),
        "vbar3": _fmt(v3),
        "p_ok": int(p_ok),
        "B": _fmt(b_val),
        "B_ok": int(b_ok),
        "feasible": int(p_ok and b_ok),
        "I6": _fmt(invariants.sudbery(inv).i6),
    }


def region_scan_rows(va: float, vb: float, vc: float, grid: int) -> list[dict]:
    markers = _markers(va, vb, vc)
    # coarse pass to find the feasible bounding box, seeded by the markers
    coarse = np.linspace(-1.0, 1.0, 41)
    pts = [(v2, v3) for (_, v2, v3) in markers]
    for v2 in coarse:
        for v3 in coarse:
            row = _point_row("probe", "", va, vb, vc, v2, v3)
            if row["feasible"]:
                pts.append((v2, v3))
    lo2 = min(p[0] for p in pts)
    hi2 = max(p[0] for p in pts)
    lo3 = min(p[1] for p in pts)
    hi3 = max(p[1] for p in pts)
    pad2 = 0.1 * max(hi2 - lo2, 1e-3)
    pad3 = 0.1 * max(hi3 - lo3, 1e-3)
    g2 = np.linspace(lo2 - pad2, hi2 + pad2, grid)
    g3 = np.linspace(lo3 - pad3, hi3 + pad3, grid)
    rows = []
    for v2 in g2:
        for v3 in g3:
            rows.append(_point_row("grid", "", va, vb, vc, float(v2), float(v3)))
    for label, v2, v3 in markers:
        rows.append(_point_row("marker", label, va, vb, vc, float(v2), float(v3)))
    return rows


def cmd_region_scan(args) -> int:
    for v in (args.va, args.vb, args.vc):
        if not 0.0 < v < 1.0:
            raise CliError(f"Bloch lengths must be in (0, 1), got {v}", EXIT_VALIDATION)
    rows = region_scan_rows(args.va, args.vb, args.vc, args.grid)
    emit(
        args,
        rows,
        {
            "command": "region-scan",
            "params": {"va": args.va, "vb": args.vb, "vc": args.vc, "grid": args.grid},
        },
    )
    return EXIT_OK


# -- evolve -----------------------------------------------------------------


def cmd_evolve(args) -> int:
    amps = load_state(args.state)
    n = amps.size.bit_length() - 1
    if n != 2:
        raise CliError(f"evolve needs a 2-qubit state, got n={n}", EXIT_VALIDATION)
    for name in ("omega_x", "omega_y", "omega_z", "beta_a", "beta_b", "t0", "t1"):
        if not np.isfinite(getattr(args, name)):
            raise CliError(f"--{name.replace('_', '-')} must be finite", EXIT_VALIDATION)
    if args.steps < 1:
        raise CliError("--steps must be positive", EXIT_VALIDATION)
    h = dynamics.ExchangeHamiltonian(
        args.omega_x, args.omega_y, args.omega_z, args.beta_a, args.beta_b
    )
    hmv = dynamics.hamiltonian(h)
    rho0 = states.pure_state_from_amplitudes(amps)
    rows = []
    for t in np.linspace(args.t0, args.t1, args.steps):
        rho_t = dynamics.evolve(rho0, hmv, float(t))
        ba = entanglement.partial_trace(rho_t, [0]).bloch_vector()
        bb = entanglement.partial_trace(rho_t, [1]).bloch_vector()
        rows.append(
            {
                "t": _fmt(float(t)),
                "ax": _fmt(ba[0]),
                "ay": _fmt(ba[1]),
                "az": _fmt(ba[2]),
                "bx": _fmt(bb[0]),
                "by": _fmt(bb[1]),
                "bz": _fmt(bb[2]),
                "entropy": _fmt(entanglement.entanglement_entropy(rho_t)),
                "purity": _fmt(rho_t.purity()),
            }
        )
    params = {
        "state": args.state,
        "omega_x": args.omega_x,
        "omega_y": args.omega_y,
        "omega_z": args.omega_z,
        "beta_a": args.beta_a,
        "beta_b": args.beta_b,
        "t0": args.t0,
        "t1": args.t1,
        "steps": args.steps,
    }
    emit(args, rows, {"command": "evolve", "params": params})
    return EXIT_OK


# -- chsh and bell ----------------------------------------------------------


def cmd_chsh(args) -> int:
    amps = load_state(args.state)
    if amps.size != 4:
        raise CliError("chsh needs a 2-qubit state", EXIT_VALIDATION)
    rho = states.pure_state_from_amplitudes(amps)
    value, setting = entanglement.chsh_maximize(rho)
    rows = [{"quantity": "chsh_max", "value": _fmt(value)}]
    for name, vec in (("q", setting.q), ("r", setting.r), ("s", setting.s), ("t", setting.t)):
        for comp, x in zip("xyz", vec):
            rows.append({"quantity": f"{name}{comp}", "value": _fmt(x)})
    emit(args, rows, {"command": "chsh", "params": {"state": args.state}})
    return EXIT_OK


def cmd_bell(args) -> int:
    rho = states.bell(args.which)
    rows = [
        {"term": label, "re": _fmt(c.real), "im": _fmt(c.imag)}
        for label, c in sorted(rho.mv.terms().items())
    ]
    emit(args, rows, {"command": "bell", "params": {"which": args.which}})
    return EXIT_OK


# -- verify -----------------------------------------------------------------


def _random_multivector(n: int, rng: np.random.Generator, max_terms: int = 6) -> Multivector:
    n_terms = int(rng.integers(1, max_terms + 1))
    keys = rng.integers(0, 1 << (2 * n), size=n_terms)
    letters = "IXZY"
    terms = {}
    for key in keys:
        label = "".join(letters[(int(key) >> (2 * q)) & 3] for q in range(n))
        terms[label] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    return Multivector(n, terms)


def verify_algebra_once(n: int, rng: np.random.Generator) -> float:
    """One randomized oracle-equivalence trial; returns the worst error."""
    a = _random_multivector(n, rng)
    b = _random_multivector(n, rng)
    ma, mb = oracle.to_matrix(a), oracle.to_matrix(b)
    errs = [
        float(np.abs(oracle.to_matrix(a * b) - ma @ mb).max()),
        float(np.abs(oracle.to_matrix(a.reverse()) - ma.conj().T).max()),
        abs(a.scalar_part() - np.trace(ma).real / (1 << n)),
    ]
    if n >= 2:
        excluded = int(rng.integers(0, n))
        keep = [q for q in range(n) if q != excluded]
        dropped = n - len(keep)
        reduced = a.drop_qubits([q for q in range(n) if q not in keep]) * float(2**dropped)
        errs.append(
            float(
                np.abs(oracle.to_matrix(reduced) - oracle.partial_trace_matrix(ma, keep, n)).max()
            )
        )
    h = a + a.reverse()
    t = float(rng.uniform(-1.0, 1.0))
    errs.append(
        float(np.abs(oracle.to_matrix(exp_i(h, t)) - oracle.expm_minus_i(oracle.to_matrix(h), t)).max())
    )
    return max(errs)


def verify_tangle_once(rng: np.random.Generator) -> float | None:
    """|I6 formula - hyperdeterminant| for one random state, or None if the
    sample is degenerate."""
    psi = oracle.random_statevector(3, rng)
    rho = states.DensityOperator(oracle.from_matrix(oracle.statevector_density(psi)))
    try:
        inv = invariants.invariants_3q(rho)
    except ValueError:
        return None
    return abs(invariants.sudbery(inv).i6 - invariants.three_tangle_oracle(psi))


def cmd_verify(args) -> int:
    rng = np.random.default_rng(args.seed)
    rows = []
    failures_total = 0

    passes = 0
    worst = 0.0
    for k in range(args.samples):
        err = verify_algebra_once(1 + k % 3, rng)
        worst = max(worst, err)
        passes += err < 1e-10
    rows.append(
        {
            "campaign": "algebra_oracle",
            "samples": args.samples,
            "passes": passes,
            "failures": args.samples - passes,
            "max_error": _fmt(worst),
        }
    )
    failures_total += args.samples - passes

    passes = 0
    tried = 0
    worst = 0.0
    while tried < args.samples:
        err = verify_tangle_once(rng)
        if err is None:
            continue
        tried += 1
        worst = max(worst, err)
        passes += err < 1e-8
    rows.append(
        {
            "campaign": "i6_vs_hyperdeterminant",
            "samples": args.samples,
            "passes": passes,
            "failures": args.samples - passes,
            "max_error": _fmt(worst),
        }
    )
    failures_total += args.samples - passes

    emit(args, rows, {"command": "verify", "params": {"seed": args.seed, "samples": args.samples}})
    for row in rows:
        print(f"{row['campaign']}: {row['passes']}/{row['samples']} pass", file=sys.stderr)
    return EXIT_OK if failures_total == 0 else EXIT_VALIDATION


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output to FILE instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    parser = argparse.ArgumentParser(
        prog="msta",
        description="Multi-qubit density operators in the correlated Pauli algebra.",
        epilog=(
            "State files are JSON {\"n_qubits\": N, \"amplitudes\": [[re, im], ...]} "
            "with the amplitudes row-major in the computational basis, qubit a as "
            "the most significant index bit.  Exit codes: 0 ok, 2 validation or "
            "infeasible input, 3 solver failure, 4 I/O error."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "invariants",
        parents=[common],
        help="local-unitary invariants of a state file",
        epilog="CSV columns (stable): quantity,value",
    )
    p.add_argument("--state", required=True, help="JSON state file")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser(
        "region-scan",
        parents=[common],
        help="(vbar2, vbar3) feasibility scan",
        epilog="CSV columns (stable): kind,label,vbar2,vbar3,p_ok,B,B_ok,feasible,I6",
    )
    p.add_argument("--va", type=float, required=True)
    p.add_argument("--vb", type=float, required=True)
    p.add_argument("--vc", type=float, required=True)
    p.add_argument("--grid", type=int, default=201, help="grid resolution per axis")
    p.set_defaults(func=cmd_region_scan)

    p = sub.add_parser(
        "evolve",
        parents=[common],
        help="exchange-Hamiltonian trajectory of a 2-qubit state",
        epilog="CSV columns (stable): t,ax,ay,az,bx,by,bz,entropy,purity",
    )
    p.add_argument("--state", required=True)
    p.add_argument("--omega-x", dest="omega_x", type=float, default=0.0)
    p.add_argument("--omega-y", dest="omega_y", type=float, default=0.0)
    p.add_argument("--omega-z", dest="omega_z", type=float, default=0.0)
    p.add_argument("--beta-a", dest="beta_a", type=float, default=0.0)
    p.add_argument("--beta-b", dest="beta_b", type=float, default=0.0)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=6.283185307179586)
    p.add_argument("--steps", type=int, default=101)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser(
        "chsh",
        parents=[common],
        help="maximised CHSH value of a 2-qubit state",
        epilog="CSV columns (stable): quantity,value",
    )
    p.add_argument("--state", required=True)
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser(
        "bell",
        parents=[common],
        help="blade expansion of a Bell state",
        epilog="CSV columns (stable): term,re,im",
    )
    p.add_argument("--which", required=True, choices=("phi+", "phi-", "psi+", "psi-"))
    p.set_defaults(func=cmd_bell)

    p = sub.add_parser(
        "verify",
        parents=[common],
        help="randomised oracle-equivalence campaigns",
        epilog="CSV columns (stable): campaign,samples,passes,failures,max_error",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except (invariants.InfeasibleInvariantsError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
