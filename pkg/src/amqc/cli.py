"""Command line front end: identity suites, error sweeps, gate demos, limits.

Exit codes: 0 success, 1 runtime or I/O failure, 2 usage error.  Output is
plain text (``NO_COLOR`` is respected trivially; nothing is ever colored) and
CSV files are byte-deterministic for a fixed invocation.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import spin
from .linalg import PAULI_X, identity, phase_distance
from .qudit_model import (
    AncillaProjectedGate,
    ControlledAncillaRotation,
    Interaction,
    extract_register_gate,
    fan_bipartite,
    fan_one_target,
    generalized_toffoli,
    mod_d_phase_gate,
    two_qubit_sequence,
)
from .verify import SUITES, run_suites

_FMT = "{:.11e}"  # 12 significant digits, scientific


def _parse_n_list(text: str) -> list[int]:
    values = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        values.append(int(float(chunk)))
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(
            f"--n-list must be positive integers, got {text!r}")
    return values


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = run_suites(names)
    all_passed = True
    for res in results:
        print(f"suite {res.name}: {res.cases_passed}/{res.cases_run} checks "
              f"passed, worst deviation {res.worst_deviation:.3e}, "
              f"{res.wall_time_s:.2f}s")
        for check in res.checks:
            status = "ok" if check.passed else "FAIL"
            print(f"  [{status:>4}] {check.name}: "
                  f"deviation {check.deviation:.3e} (tolerance {check.tolerance:.1e})")
        all_passed &= res.passed
    return 0 if all_passed else 1


def cmd_sweep(args) -> int:
    zetas = np.linspace(args.zeta_min, args.zeta_max, args.zeta_steps)
    lines = ["zeta_n,N,phi_f,phi_E,infidelity,phi_series,infid_series"]
    for zeta_n in zetas:
        for n_spins in args.n_list:
            p = spin.fan_error(float(zeta_n), n_spins)
            lines.append(",".join([
                _FMT.format(p.zeta_n), str(p.n_spins), _FMT.format(p.phi_f),
                _FMT.format(p.phi_E), _FMT.format(p.infidelity),
                _FMT.format(p.phi_series), _FMT.format(p.infid_series)]))
    text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="ascii") as handle:
            handle.write(text)
        print(f"wrote {len(lines) - 1} rows to {args.out}")
    return 0


def _format_element(element) -> str:
    if isinstance(element, Interaction):
        lab = element.label
        tag = "" if element.polarity == "apply-on-one" else "~"
        return f"D{tag}^{element.qubit}({lab.x:+d},{lab.p:+d})"
    if isinstance(element, AncillaProjectedGate):
        return f"[U on q{element.target} iff anc=|{element.level}>]"
    if isinstance(element, ControlledAncillaRotation):
        return f"[C^{element.control} R_d({element.theta:g})]"
    return repr(element)


def cmd_demo(args) -> int:
    d = args.d
    if args.sequence == "two-qubit":
        seq = two_qubit_sequence(0, 1, args.x, args.p, d)
        theta = 2 * math.pi * args.x * args.p / d
        oracle = np.diag([1.0, 1.0, 1.0, np.exp(1j * theta)])
        naive, gates = 4, 1
        described = f"CR({theta:.6f}) on qubits (0, 1)"
    elif args.sequence == "fan-one":
        xs = [1 + (k % d) for k in range(args.n)]
        seq = fan_one_target(xs, args.p, d)
        oracle = identity(2 ** (args.n + 1))
        for k, xk in enumerate(xs):
            theta = 2 * math.pi * xk * args.p / d
            oracle = oracle @ _controlled_rotation(args.n + 1, k, args.n, theta)
        naive, gates = 4 * args.n, args.n
        described = f"prod_k C^k_t R(2 pi x_k p / {d}), xs={xs}, p={args.p}"
    elif args.sequence == "fan-bipartite":
        xs = [1 + (k % d) for k in range(args.n)]
        ps = [1 + (j % d) for j in range(args.m)]
        seq = fan_bipartite(xs, ps, d)
        oracle = identity(2 ** (args.n + args.m))
        for k, xk in enumerate(xs):
            for j, pj in enumerate(ps):
                theta = 2 * math.pi * xk * pj / d
                oracle = oracle @ _controlled_rotation(
                    args.n + args.m, k, args.n + j, theta)
        naive, gates = 4 * args.n * args.m, args.n * args.m
        described = f"all n*m controlled rotations, xs={xs}, ps={ps}"
    elif args.sequence == "toffoli":
        if d <= args.n:
            raise SystemExit(f"error: toffoli needs --d > --n, got d={d} n={args.n}")
        seq = generalized_toffoli(args.n, PAULI_X, d)
        oracle = identity(2 ** (args.n + 1))
        flip = 2 ** (args.n + 1) - 2
        oracle[np.ix_([flip, flip + 1], [flip, flip + 1])] = PAULI_X
        naive, gates = 4 * args.n, 1
        described = f"{args.n}-controlled X via ancilla level counting"
    elif args.sequence == "modd":
        seq = mod_d_phase_gate(args.theta, args.n, d)
        phases = []
        nq = args.n + 1
        for r in range(2 ** nq):
            bits = [(r >> (nq - 1 - j)) & 1 for j in range(nq)]
            phases.append(np.exp(1j * args.theta * (sum(bits[:-1]) % d) * bits[-1]))
        oracle = np.diag(phases)
        naive, gates = 4 * args.n, args.n
        described = (f"phase exp(i theta ((sum q) mod {d}) q_t), "
                     f"theta={args.theta:g}")
    else:  # pragma: no cover - argparse restricts choices
        raise SystemExit(2)

    report = extract_register_gate(seq)
    distance = (phase_distance(report.register_unitary, oracle)
                if report.register_unitary is not None else float("inf"))
    print("sequence:", " ".join(_format_element(e) for e in seq.elements))
    print(f"{gates} gate(s) via {report.interaction_count} interactions "
          f"(naive: {naive})")
    print(f"register gate: {described}")
    print(f"verified against dense oracle: phase distance {distance:.3e}, "
          f"ancilla return fidelity {report.ancilla_return_fidelity:.15f}")
    return 0 if distance < 1e-10 else 1


def _controlled_rotation(n_qubits: int, control: int, target: int,
                         theta: float) -> np.ndarray:
    phases = []
    for r in range(2 ** n_qubits):
        bc = (r >> (n_qubits - 1 - control)) & 1
        bt = (r >> (n_qubits - 1 - target)) & 1
        phases.append(np.exp(1j * theta * bc * bt))
    return np.diag(phases)


def cmd_contraction(args) -> int:
    if args.n_min < 1 or args.n_max < args.n_min:
        raise SystemExit(f"error: bad range [{args.n_min}, {args.n_max}]")
    n_list = []
    n = args.n_min
    while n <= args.n_max:
        n_list.append(n)
        n *= 2
    rows = spin.contraction_probe(args.zeta, n_list)
    lines = ["N,phi_f,abs_err_phi,overlap,abs_err_overlap,prefactor"]
    for r in rows:
        lines.append(",".join([
            str(r.n_spins), _FMT.format(r.phi_f), _FMT.format(r.abs_err_phi),
            _FMT.format(r.overlap), _FMT.format(r.abs_err_overlap),
            _FMT.format(r.prefactor)]))
    text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="ascii") as handle:
            handle.write(text)
        print(f"wrote {len(rows)} rows to {args.out}")
    if len(rows) >= 3:
        slope = spin.fitted_loglog_slope(
            [r.n_spins for r in rows], [r.abs_err_phi for r in rows])
        print(f"fitted log-log slope of abs_err_phi: {slope:.4f} "
              f"(flat-space convergence is -1)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amqc",
        description="Ancilla-mediated gate identities, error sweeps and demos.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run the identity suites")
    p_verify.add_argument("suite", choices=list(SUITES) + ["all"])
    p_verify.set_defaults(func=cmd_verify)

    p_sweep = sub.add_parser(
        "sweep", help="CSV of intrinsic phase/fidelity errors over (zeta_n, N)")
    p_sweep.add_argument("--zeta-min", type=float, default=1.0)
    p_sweep.add_argument("--zeta-max", type=float, default=50.0)
    p_sweep.add_argument("--zeta-steps", type=int, default=50)
    p_sweep.add_argument("--n-list", type=_parse_n_list,
                         default=[10 ** 4, 10 ** 5, 10 ** 6, 10 ** 7, 10 ** 8, 10 ** 9],
                         help="comma-separated ensemble sizes, e.g. 1e4,1e6")
    p_sweep.add_argument("--out", default="-", help="output path ('-' = stdout)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_demo = sub.add_parser("demo", help="build, run and verify a gate sequence")
    p_demo.add_argument("sequence", choices=[
        "two-qubit", "fan-one", "fan-bipartite", "toffoli", "modd"])
    p_demo.add_argument("--d", type=int, default=3, help="ancilla dimension")
    p_demo.add_argument("--n", type=int, default=2, help="number of controls")
    p_demo.add_argument("--m", type=int, default=1, help="number of targets")
    p_demo.add_argument("--x", type=int, default=1, help="position step")
    p_demo.add_argument("--p", type=int, default=1, help="momentum step")
    p_demo.add_argument("--theta", type=float, default=math.pi / 5,
                        help="rotation angle for modd")
    p_demo.set_defaults(func=cmd_demo)

    p_contr = sub.add_parser(
        "contraction", help="CSV of large-N convergence onto the field mode")
    p_contr.add_argument("--zeta", type=_parse_complex, default=2.0 + 0.0j)
    p_contr.add_argument("--n-min", type=int, default=1000)
    p_contr.add_argument("--n-max", type=int, default=1_000_000)
    p_contr.add_argument("--out", default="-", help="output path ('-' = stdout)")
    p_contr.set_defaults(func=cmd_contraction)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
